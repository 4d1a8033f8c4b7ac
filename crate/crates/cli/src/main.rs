//! `collatz-db`: modular Collatz graphs, De Bruijn graphs and the conjugacy between them.
//!
//! Exit status: 0 on success or a true verdict, 1 on a false verdict,
//! 2 on invalid input, 3 when an orbit stays undetermined within the step budget.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use collatz_debruijn::limits::{self, MAX_VERTICES_ENV};
use collatz_debruijn::{
    b_of_word, build_debruijn_graph, build_modular_graph, check_uniform_power, classify_orbit,
    conjugacy_permutation_ordered, enumerate_cycles_for_b, fkm_sequence, line_graph, lyndon_words, necklace_count,
    parse_rational, phi_exact, phi_inverse_truncated, phi_truncated, rational_cycle, restrict_collatz_graph,
    transpose, verify_conjugacy, verify_debruijn_sequence, BranchMap, CycleReport, DigitOrder, DigitWord,
    LabeledDigraph, LengthMode, OrbitClass, PermutationReport, PhiExact, RationalCycle, StandardMap, UniformPower,
    DEFAULT_MAX_STEPS,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "collatz-db", version, about = "Collatz graphs, De Bruijn graphs and their conjugacy")]
struct Cli {
    /// Output format; `dot` applies to graphs only.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Modular Collatz graphs C^(f)(m) and De Bruijn graphs B(p,k).
    #[command(subcommand)]
    Graph(GraphCmd),
    /// The conjugacy map Φ between C^(f)(p^k) and B(p,k).
    #[command(subcommand)]
    Conj(ConjCmd),
    /// De Bruijn sequences.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Necklace counts M_k.
    #[command(subcommand)]
    Count(CountCmd),
    /// Lyndon words.
    #[command(subcommand)]
    Words(WordsCmd),
    /// Rational cycles and the 3n+b correspondence.
    #[command(subcommand)]
    Cycles(CyclesCmd),
    /// Walk counts in C^(f)(p^k).
    #[command(subcommand)]
    Spectral(SpectralCmd),
}

#[derive(Args)]
struct MapArgs {
    /// Preset: collatz, shift, collatz-original (f0), an+b(a,b).
    #[arg(long, default_value = "collatz", conflicts_with = "map_file")]
    map: String,

    /// Branch map as JSON: {"p": p, "branches": [[a_0, b_0], ...]}.
    #[arg(long)]
    map_file: Option<PathBuf>,
}

impl MapArgs {
    fn load(&self) -> Result<BranchMap> {
        if let Some(path) = &self.map_file {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return serde_json::from_str(&text).with_context(|| format!("parsing branch map {}", path.display()));
        }
        let preset: StandardMap = self.map.parse()?;
        Ok(BranchMap::standard(preset)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Modular,
    Debruijn,
}

#[derive(Args)]
struct GraphSource {
    /// Which graph to start from.
    #[arg(long, value_enum, default_value_t = GraphKind::Modular)]
    of: GraphKind,
    #[command(flatten)]
    map: MapArgs,
    /// Alphabet size for De Bruijn graphs.
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Dimension: the modulus is p^k.
    #[arg(long)]
    k: u32,
}

impl GraphSource {
    fn build(&self) -> Result<LabeledDigraph> {
        Ok(match self.of {
            GraphKind::Modular => {
                let f = self.map.load()?;
                build_modular_graph(&f, limits::checked_size("modulus", u64::from(f.p()), self.k)?)?
            }
            GraphKind::Debruijn => build_debruijn_graph(self.p, self.k)?,
        })
    }
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Modular Collatz graph C^(f)(m): edge r mod m -> f(r) mod m labeled r, for r < p·m.
    Modular {
        #[command(flatten)]
        map: MapArgs,
        /// Modulus m.
        #[arg(long, required_unless_present = "k", conflicts_with = "k")]
        m: Option<u64>,
        /// Use m = p^k.
        #[arg(long)]
        k: Option<u32>,
    },
    /// De Bruijn graph B(p,k) on numeric words Σ b_i p^i.
    Debruijn {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
    },
    /// Line graph of C^(f)(p^k) or B(p,k), vertices named by edge labels.
    Line(GraphSource),
    /// Transpose (edge reversal) of C^(f)(p^k) or B(p,k).
    Transpose(GraphSource),
    /// Integer graph of f restricted to 0..n.
    Restrict {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    /// Image word read least significant digit first, Σ x_i p^i.
    Lsd,
    /// Image word read most significant digit first.
    Msd,
}

#[derive(Subcommand)]
enum ConjCmd {
    /// Conjugacy permutation Φ_k of 0..p^k, x_i(n) = f^i(n) mod p.
    Perm {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = OrderArg::Lsd)]
        digit_order: OrderArg,
    },
    /// Whether Φ_k is an isomorphism from C^(f)(p^k) onto B(p,k).
    Verify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        k: u32,
    },
    /// Φ on truncated words, exact rationals, or its inverse on truncated words.
    Phi {
        #[command(flatten)]
        map: MapArgs,
        /// Least-significant-first digit word; prints its first N digits of Φ.
        #[arg(long, group = "mode")]
        truncated: Option<String>,
        /// Rational with denominator coprime to p; prints Φ as a rational.
        #[arg(long, group = "mode", allow_hyphen_values = true)]
        exact: Option<String>,
        /// Digit word; prints the word whose truncated Φ it is.
        #[arg(long, group = "mode")]
        inverse: Option<String>,
        /// Step budget for exact evaluation.
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
}

#[derive(Subcommand)]
enum SeqCmd {
    /// De Bruijn sequence of order k by concatenating Lyndon words (FKM).
    Fkm {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: usize,
    },
    /// Whether a word is a cyclic De Bruijn sequence of order k.
    Verify {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: usize,
        word: String,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Number M_k of Lyndon words of length k over p letters.
    Necklaces {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand)]
enum WordsCmd {
    /// Lyndon words in lexicographic order.
    Lyndon {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: usize,
        /// Include every length dividing k.
        #[arg(long)]
        dividing: bool,
    },
}

#[derive(Subcommand)]
enum CyclesCmd {
    /// Rational cycle whose parity word is the given word, with its 3n+b scaling.
    FromWord {
        #[command(flatten)]
        map: MapArgs,
        word: String,
    },
    /// Cycles of the 3n+b map coming from binary Lyndon words of length at most max-len.
    ForB {
        #[arg(long)]
        b: i64,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Iterates each rational until its orbit repeats.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Starting values, integers or fractions.
        #[arg(required = true, allow_hyphen_values = true)]
        values: Vec<String>,
    },
}

#[derive(Subcommand)]
enum SpectralCmd {
    /// Whether every entry of A_k^l equals p^(l-k) for l in k..=l-max.
    Check {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l_max: Option<u32>,
    },
}

/// Result of a command before it is written out.
enum Outcome {
    Done,
    False,
    Undetermined,
}

struct Output {
    format: Format,
    text: String,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn json(&mut self, v: serde_json::Value) -> Result<()> {
        let s = serde_json::to_string(&v)?;
        self.line(s);
        Ok(())
    }

    fn no_dot(&self) -> Result<()> {
        if self.format == Format::Dot {
            bail!("--format dot applies to graph commands only");
        }
        Ok(())
    }

    fn verdict(&mut self, holds: bool, value: serde_json::Value) -> Result<Outcome> {
        if self.format == Format::Json {
            self.json(value)?;
        } else {
            self.line(holds.to_string());
        }
        Ok(if holds { Outcome::Done } else { Outcome::False })
    }
}

fn graph_out(out: &mut Output, g: &LabeledDigraph) -> Outcome {
    match out.format {
        Format::Json => out.line(g.export_json()),
        Format::Text | Format::Dot => out.text.push_str(&g.export_dot()),
    }
    Outcome::Done
}

fn word(s: &str, p: u32) -> Result<DigitWord> {
    Ok(DigitWord::parse(s, p)?)
}

fn cycle_text(c: &RationalCycle) -> String {
    let join = |v: Vec<String>| v.join(" ");
    format!(
        "{}  b={}  [{}]  [{}]",
        c.word,
        c.b,
        join(c.elements.iter().map(ToString::to_string).collect()),
        join(c.integer_cycle.iter().map(ToString::to_string).collect()),
    )
}

fn cycles_out(out: &mut Output, cycles: &[RationalCycle]) -> Result<()> {
    if out.format == Format::Json {
        let reports: Vec<CycleReport> = cycles.iter().map(CycleReport::from).collect();
        return out.json(serde_json::to_value(reports)?);
    }
    for c in cycles {
        out.line(cycle_text(c));
    }
    Ok(())
}

fn run_graph(cmd: GraphCmd, out: &mut Output) -> Result<Outcome> {
    let g = match cmd {
        GraphCmd::Modular { map, m, k } => {
            let f = map.load()?;
            let m = match (m, k) {
                (Some(m), _) => m,
                (None, Some(k)) => limits::checked_size("modulus", u64::from(f.p()), k)?,
                (None, None) => bail!("either --m or --k is required"),
            };
            build_modular_graph(&f, m)?
        }
        GraphCmd::Debruijn { p, k } => build_debruijn_graph(p, k)?,
        GraphCmd::Line(src) => line_graph(&src.build()?)?,
        GraphCmd::Transpose(src) => transpose(&src.build()?),
        GraphCmd::Restrict { map, n } => restrict_collatz_graph(&map.load()?, n)?,
    };
    Ok(graph_out(out, &g))
}

fn run_conj(cmd: ConjCmd, out: &mut Output) -> Result<Outcome> {
    out.no_dot()?;
    match cmd {
        ConjCmd::Perm { map, k, digit_order } => {
            let order = match digit_order {
                OrderArg::Lsd => DigitOrder::LeastSignificantFirst,
                OrderArg::Msd => DigitOrder::MostSignificantFirst,
            };
            let phi = conjugacy_permutation_ordered(&map.load()?, k, order)?;
            if out.format == Format::Json {
                out.json(serde_json::to_value(PermutationReport::from(&phi))?)?;
            } else {
                out.line(phi.to_string());
                out.line(format!("order {}", phi.order()));
            }
            Ok(Outcome::Done)
        }
        ConjCmd::Verify { map, k } => {
            let holds = verify_conjugacy(&map.load()?, k)?;
            out.verdict(holds, json!({ "k": k, "isomorphism": holds }))
        }
        ConjCmd::Phi {
            map,
            truncated,
            exact,
            inverse,
            max_steps,
        } => {
            let f = map.load()?;
            if let Some(w) = truncated {
                let image = phi_truncated(&f, &word(&w, f.p())?)?;
                word_out(out, &w, &image)
            } else if let Some(w) = inverse {
                let pre = phi_inverse_truncated(&f, &word(&w, f.p())?)?;
                word_out(out, &w, &pre)
            } else if let Some(r) = exact {
                let r = parse_rational(&r)?;
                exact_out(out, &r.to_string(), &phi_exact(&f, &r, max_steps)?)
            } else {
                bail!("one of --truncated, --exact or --inverse is required")
            }
        }
    }
}

fn word_out(out: &mut Output, input: &str, w: &DigitWord) -> Result<Outcome> {
    if out.format == Format::Json {
        out.json(json!({ "input": input, "output": w.to_string() }))?;
    } else {
        out.line(w.to_string());
    }
    Ok(Outcome::Done)
}

fn exact_out(out: &mut Output, input: &str, phi: &PhiExact) -> Result<Outcome> {
    match phi {
        PhiExact::Determined {
            digits,
            value,
            steps_used,
        } => {
            if out.format == Format::Json {
                out.json(json!({
                    "input": input,
                    "value": value.to_string(),
                    "digits": digits.to_string(),
                    "steps_used": steps_used,
                }))?;
            } else {
                out.line(value.to_string());
            }
            Ok(Outcome::Done)
        }
        PhiExact::Undetermined { steps_used } => {
            if out.format == Format::Json {
                out.json(json!({ "input": input, "undetermined": true, "steps_used": steps_used }))?;
            } else {
                out.line(format!("undetermined after {steps_used} steps"));
            }
            Ok(Outcome::Undetermined)
        }
    }
}

fn run_cycles(cmd: CyclesCmd, out: &mut Output) -> Result<Outcome> {
    out.no_dot()?;
    match cmd {
        CyclesCmd::FromWord { map, word: w } => {
            let f = map.load()?;
            let w = word(&w, f.p())?;
            let cycle = if f == BranchMap::collatz() {
                b_of_word(&w)?
            } else {
                rational_cycle(&f, &w)?
            };
            cycles_out(out, &[cycle])?;
        }
        CyclesCmd::ForB { b, max_len } => cycles_out(out, &enumerate_cycles_for_b(b, max_len)?)?,
        CyclesCmd::Classify {
            map,
            max_steps,
            values,
        } => {
            let f = map.load()?;
            let mut undetermined = false;
            let mut reports = Vec::new();
            for v in &values {
                let r = parse_rational(v)?;
                let class = classify_orbit(&f, &r, max_steps)?;
                let (text, report) = match &class {
                    OrbitClass::Cyclic { cycle, preperiod } => (
                        format!("{r}: preperiod {preperiod}, cycle {}", cycle_text(cycle)),
                        json!({ "value": r.to_string(), "preperiod": preperiod, "cycle": CycleReport::from(cycle) }),
                    ),
                    OrbitClass::Undetermined { steps_used } => {
                        undetermined = true;
                        (
                            format!("{r}: undetermined after {steps_used} steps"),
                            json!({ "value": r.to_string(), "undetermined": true, "steps_used": steps_used }),
                        )
                    }
                };
                out.line(text);
                reports.push(report);
            }
            if out.format == Format::Json {
                out.text.clear();
                out.json(serde_json::Value::Array(reports))?;
            }
            if undetermined {
                return Ok(Outcome::Undetermined);
            }
        }
    }
    Ok(Outcome::Done)
}

fn run(cli: Cli, out: &mut Output) -> Result<Outcome> {
    match cli.command {
        Command::Graph(cmd) => run_graph(cmd, out),
        Command::Conj(cmd) => run_conj(cmd, out),
        Command::Cycles(cmd) => run_cycles(cmd, out),
        Command::Seq(cmd) => {
            out.no_dot()?;
            match cmd {
                SeqCmd::Fkm { p, k } => {
                    let s = fkm_sequence(p, k)?;
                    if out.format == Format::Json {
                        out.json(json!({ "p": p, "k": k, "sequence": s.to_string() }))?;
                    } else {
                        out.line(s.to_string());
                    }
                    Ok(Outcome::Done)
                }
                SeqCmd::Verify { p, k, word: w } => {
                    let holds = verify_debruijn_sequence(&word(&w, p)?, p, k);
                    out.verdict(holds, json!({ "p": p, "k": k, "de_bruijn": holds }))
                }
            }
        }
        Command::Count(CountCmd::Necklaces { p, k }) => {
            out.no_dot()?;
            let m = necklace_count(p, k)?;
            if out.format == Format::Json {
                out.json(json!({ "p": p, "k": k, "count": m.to_string() }))?;
            } else {
                out.line(m.to_string());
            }
            Ok(Outcome::Done)
        }
        Command::Words(WordsCmd::Lyndon { p, k, dividing }) => {
            out.no_dot()?;
            let mode = if dividing { LengthMode::Dividing } else { LengthMode::Exact };
            let words: Vec<String> = lyndon_words(p, k, mode)?.iter().map(ToString::to_string).collect();
            if out.format == Format::Json {
                out.json(json!(words))?;
            } else {
                for w in words {
                    out.line(w);
                }
            }
            Ok(Outcome::Done)
        }
        Command::Spectral(SpectralCmd::Check { map, k, l_max }) => {
            out.no_dot()?;
            let f = map.load()?;
            let l_max = l_max.unwrap_or(k + 3);
            match check_uniform_power(&f, k, l_max)? {
                UniformPower::Holds => out.verdict(true, json!({ "k": k, "l_max": l_max, "uniform": true })),
                UniformPower::Violated(v) => {
                    if out.format == Format::Json {
                        out.json(json!({
                            "k": k,
                            "l_max": l_max,
                            "uniform": false,
                            "violation": {
                                "l": v.exponent,
                                "i": v.row,
                                "j": v.column,
                                "entry": v.entry.to_string(),
                                "expected": v.expected.to_string(),
                            },
                        }))?;
                    } else {
                        let mut s = String::from("false\n");
                        write!(
                            s,
                            "l={} i={} j={} entry={} expected={}",
                            v.exponent, v.row, v.column, v.entry, v.expected
                        )?;
                        out.line(s);
                    }
                    Ok(Outcome::False)
                }
            }
        }
    }
}

fn apply_env_cap() -> Result<()> {
    if let Ok(v) = std::env::var(MAX_VERTICES_ENV) {
        let cap = v
            .trim()
            .parse()
            .with_context(|| format!("{MAX_VERTICES_ENV} must be a nonnegative integer, got {v:?}"))?;
        limits::set_max_vertices(cap);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output_path = cli.output.clone();
    let mut out = Output {
        format: cli.format,
        text: String::new(),
    };
    let outcome = apply_env_cap().and_then(|()| run(cli, &mut out)).and_then(|outcome| {
        match &output_path {
            Some(path) => std::fs::write(path, &out.text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{}", out.text),
        }
        Ok(outcome)
    });
    match outcome {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::False) => ExitCode::from(1),
        Ok(Outcome::Undetermined) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
