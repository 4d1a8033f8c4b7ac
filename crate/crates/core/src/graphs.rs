//! Modular map graphs `C^(f)(m)`, De Bruijn graphs `B(p,k)` and the graph
//! operations used to relate them.
//!
//! Graphs are explicit edge sets over the vertices `0..m`. An edge may carry
//! a label, the residue class (mod `p·m`) it was generated from; two edges
//! with the same endpoints are distinct only when their labels differ.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::limits;
use crate::maps::BranchMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: u64,
    pub target: u64,
    pub label: Option<u64>,
}

impl Edge {
    pub fn new(source: u64, target: u64, label: Option<u64>) -> Self {
        Self { source, target, label }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct LabeledDigraph {
    vertex_count: u64,
    edges: BTreeSet<Edge>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    m: u64,
    edges: Vec<(u64, u64, Option<u64>)>,
}

impl TryFrom<RawGraph> for LabeledDigraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        LabeledDigraph::new(raw.m, raw.edges.into_iter().map(|(s, t, l)| Edge::new(s, t, l)))
    }
}

impl From<LabeledDigraph> for RawGraph {
    fn from(g: LabeledDigraph) -> Self {
        RawGraph {
            m: g.vertex_count,
            edges: g.edges.into_iter().map(|e| (e.source, e.target, e.label)).collect(),
        }
    }
}

impl LabeledDigraph {
    pub fn new(vertex_count: u64, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        let mut labels = BTreeSet::new();
        for e in &edges {
            if e.source >= vertex_count || e.target >= vertex_count {
                return Err(invalid(format!(
                    "edge {} -> {} leaves the vertex set 0..{vertex_count}",
                    e.source, e.target
                )));
            }
            if let Some(l) = e.label {
                if !labels.insert(l) {
                    return Err(invalid(format!("label {l} used on more than one edge")));
                }
            }
        }
        Ok(Self { vertex_count, edges })
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `(source, target)` pairs with labels dropped.
    pub fn unlabeled_edges(&self) -> BTreeSet<(u64, u64)> {
        self.edges.iter().map(|e| (e.source, e.target)).collect()
    }

    fn edge_multiset(&self) -> BTreeMap<(u64, u64), usize> {
        let mut counts = BTreeMap::new();
        for e in &self.edges {
            *counts.entry((e.source, e.target)).or_insert(0) += 1;
        }
        counts
    }

    /// Out-degrees over the unlabeled edge set.
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count as usize];
        for (s, _) in self.unlabeled_edges() {
            deg[s as usize] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count as usize];
        for (_, t) in self.unlabeled_edges() {
            deg[t as usize] += 1;
        }
        deg
    }

    pub fn without_labels(&self) -> Self {
        Self {
            vertex_count: self.vertex_count,
            edges: self.edges.iter().map(|e| Edge::new(e.source, e.target, None)).collect(),
        }
    }

    /// Renames every vertex `v` to `φ(v)`; labels are kept.
    pub fn relabel(&self, phi: &Permutation) -> Result<Self> {
        if phi.size() != self.vertex_count {
            return Err(invalid(format!(
                "permutation of size {} cannot relabel a graph on {} vertices",
                phi.size(),
                self.vertex_count
            )));
        }
        Ok(Self {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| Edge::new(phi.apply(e.source), phi.apply(e.target), e.label))
                .collect(),
        })
    }

    /// Graphviz text; vertices ascending, then edges in `(source, target, label)` order.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for v in 0..self.vertex_count {
            writeln!(out, "  {v};").unwrap();
        }
        for e in &self.edges {
            match e.label {
                Some(l) => writeln!(out, "  {} -> {} [label=\"{l}\"];", e.source, e.target).unwrap(),
                None => writeln!(out, "  {} -> {};", e.source, e.target).unwrap(),
            }
        }
        out.push_str("}\n");
        out
    }

    /// `{"m": .., "edges": [[s, t, label|null], ..]}`, edges sorted.
    pub fn export_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn import_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("bad graph JSON: {e}")))
    }
}

/// A bijection of `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u64>,
}

impl Permutation {
    pub fn identity(size: u64) -> Self {
        Self {
            images: (0..size).collect(),
        }
    }

    pub fn from_images(images: Vec<u64>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
                return Err(invalid(format!("images are not a permutation of 0..{n}")));
            }
        }
        Ok(Self { images })
    }

    /// Builds a permutation of `0..size` from disjoint cycles.
    pub fn from_cycles(size: u64, cycles: &[Vec<u64>]) -> Result<Self> {
        let mut images: Vec<u64> = (0..size).collect();
        let mut touched = vec![false; size as usize];
        for cycle in cycles {
            for (i, &v) in cycle.iter().enumerate() {
                if v >= size || std::mem::replace(&mut touched[v as usize], true) {
                    return Err(invalid(format!("cycles are not disjoint within 0..{size}")));
                }
                images[v as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    /// Parses cycle notation such as `(1,5)(2,10)(9,13)`; `()` or `id` is the identity.
    pub fn parse_cycles(size: u64, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "id" {
            return Ok(Self::identity(size));
        }
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| invalid(format!("bad cycle notation {text:?}")))?;
            let end = body.find(')').ok_or_else(|| invalid(format!("unclosed cycle in {text:?}")))?;
            let inner = body[..end].trim();
            if !inner.is_empty() {
                let cycle = inner
                    .split(',')
                    .map(|t| t.trim().parse::<u64>().map_err(|_| invalid(format!("bad element {t:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                cycles.push(cycle);
            }
            rest = body[end + 1..].trim_start();
        }
        Self::from_cycles(size, &cycles)
    }

    /// Digit reversal of `k`-digit base-`p` words, `b_0..b_{k-1} ↦ b_{k-1}..b_0`.
    pub fn digit_reversal(p: u32, k: u32) -> Result<Self> {
        let size = limits::checked_size("digit reversal", u64::from(p), k)?;
        let p = u64::from(p);
        let images = (0..size)
            .map(|mut n| {
                let mut r = 0;
                for _ in 0..k {
                    r = r * p + n % p;
                    n /= p;
                }
                r
            })
            .collect();
        Ok(Self { images })
    }

    pub fn size(&self) -> u64 {
        self.images.len() as u64
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn apply(&self, v: u64) -> u64 {
        self.images[v as usize]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u64;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.size() != other.size() {
            return Err(invalid("cannot compose permutations of different sizes"));
        }
        Ok(Self {
            images: other.images.iter().map(|&v| self.apply(v)).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u64 == v)
    }

    /// Disjoint cycles, fixed points omitted, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<u64>> {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start as u64 {
                continue;
            }
            let mut cycle = vec![start as u64];
            seen[start] = true;
            let mut v = self.images[start];
            while v != start as u64 {
                seen[v as usize] = true;
                cycle.push(v);
                v = self.images[v as usize];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Least `ℓ ≥ 1` with `φ^ℓ = id`.
    pub fn order(&self) -> BigUint {
        self.cycles()
            .iter()
            .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(u64::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

/// `C^(f)(m)`: for every residue `r` mod `p·m`, an edge `r mod m → f(r) mod m`
/// labeled `r`. Since `f(n) mod m` depends only on `n mod p·m`, the
/// unlabeled edges are exactly the pairs `(a, b)` with some lift `a₁ ≡ a`
/// satisfying `f(a₁) ≡ b (mod m)`.
pub fn build_modular_graph(f: &BranchMap, m: u64) -> Result<LabeledDigraph> {
    if m == 0 {
        return Err(invalid("modulus must be at least 1"));
    }
    limits::check_count("modular graph vertices", m)?;
    let p = u64::from(f.p());
    let mi = i128::from(m);
    let edges = (0..p * m).map(|r| {
        let image = f
            .eval_i128(i128::from(r))
            .expect("residues below p·m fit in i128");
        Edge::new(r % m, image.rem_euclid(mi) as u64, Some(r))
    });
    LabeledDigraph::new(m, edges)
}

/// `B(p,k)` with numeric vertices `Σ b_i p^i`: `n → (n - b_0)/p + x p^(k-1)`,
/// labeled by the `(k+1)`-digit word `n + x p^k`.
pub fn build_debruijn_graph(p: u32, k: u32) -> Result<LabeledDigraph> {
    if p < 2 {
        return Err(invalid(format!("p must be at least 2, got {p}")));
    }
    if k == 0 {
        return Err(invalid("De Bruijn dimension must be at least 1"));
    }
    let m = limits::checked_size("De Bruijn graph vertices", u64::from(p), k)?;
    let p = u64::from(p);
    let top = m / p;
    let edges = (0..m).flat_map(|n| (0..p).map(move |x| Edge::new(n, n / p + x * top, Some(n + x * m))));
    LabeledDigraph::new(m, edges)
}

/// Vertices are the edge labels of `g`; `u → v` when edge `u` ends where edge `v` starts.
pub fn line_graph(g: &LabeledDigraph) -> Result<LabeledDigraph> {
    let n = g.edge_count() as u64;
    let mut by_label = vec![None; g.edge_count()];
    for e in g.edges() {
        let l = e
            .label
            .ok_or_else(|| invalid(format!("edge {} -> {} has no label", e.source, e.target)))?;
        if l >= n {
            return Err(invalid(format!("labels must be exactly 0..{n}, found {l}")));
        }
        by_label[l as usize] = Some(*e);
    }
    let by_label: Vec<Edge> = by_label.into_iter().map(|e| e.expect("labels are distinct")).collect();
    let mut starting_at: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for e in &by_label {
        starting_at.entry(e.source).or_default().push(e.label.expect("labeled"));
    }
    let edges = by_label.iter().flat_map(|u| {
        let from = u.label.expect("labeled");
        starting_at
            .get(&u.target)
            .into_iter()
            .flatten()
            .map(move |&to| Edge::new(from, to, None))
    });
    LabeledDigraph::new(n, edges)
}

pub fn transpose(g: &LabeledDigraph) -> LabeledDigraph {
    LabeledDigraph {
        vertex_count: g.vertex_count,
        edges: g.edges.iter().map(|e| Edge::new(e.target, e.source, e.label)).collect(),
    }
}

/// Whether `φ` carries the `(source, target)` multiset of `g` onto that of `h`.
pub fn check_isomorphism(g: &LabeledDigraph, h: &LabeledDigraph, phi: &Permutation) -> Result<bool> {
    if g.vertex_count != h.vertex_count || phi.size() != g.vertex_count {
        return Err(invalid(format!(
            "size mismatch: graphs on {} and {} vertices, permutation of size {}",
            g.vertex_count,
            h.vertex_count,
            phi.size()
        )));
    }
    Ok(g.relabel(phi)?.edge_multiset() == h.edge_multiset())
}

/// The map's integer graph on `0..bound`, keeping `n → f(n)` when `f(n)` is a vertex.
pub fn restrict_collatz_graph(f: &BranchMap, bound: u64) -> Result<LabeledDigraph> {
    if bound == 0 {
        return Err(invalid("bound must be at least 1"));
    }
    limits::check_count("restricted graph vertices", bound)?;
    let edges = (0..bound).filter_map(|n| {
        let image = f.eval_i128(i128::from(n))?;
        (0..i128::from(bound))
            .contains(&image)
            .then(|| Edge::new(n, image as u64, None))
    });
    LabeledDigraph::new(bound, edges)
}
