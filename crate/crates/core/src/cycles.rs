//! Rational cycles of branch maps and the `3n + b` correspondence.
//!
//! Every periodic digit word `w` is the parity word of exactly one p-adic
//! cycle. Composing the branches along `w` gives `f^k(x) = (A x + B) / p^k`,
//! so the cycle point is the rational `B / (p^k - A)`. For `T` the cycle's
//! common denominator `b` turns it into an integer cycle of `3n + b`, since
//! `T(n/b) = T^(3,b)(n) / b`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::arith::{self, Rational};
use crate::digits::DigitWord;
use crate::error::{invalid, Error, Result};
use crate::maps::{BranchMap, FixedDenominatorOrbit};
use crate::words::{lyndon_words, LengthMode, LyndonWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCycle {
    /// Digits `x_0 .. x_{k-1}` of `elements[0]` over one period.
    pub word: DigitWord,
    pub elements: Vec<Rational>,
    /// Common reduced denominator of the elements.
    pub b: BigInt,
    /// `elements × b`, a cycle of the map scaled by `b`.
    pub integer_cycle: Vec<BigInt>,
}

/// The fixed point of the branch composition along `w`.
pub fn cycle_from_word(f: &BranchMap, w: &DigitWord) -> Result<Rational> {
    if w.is_empty() {
        return Err(invalid("cycle word must be non-empty"));
    }
    if w.base() != f.p() {
        return Err(invalid(format!("word base {} does not match p={}", w.base(), f.p())));
    }
    let p = BigInt::from(f.p());
    let mut a = BigInt::one();
    let mut b = BigInt::from(0);
    let mut p_pow = BigInt::one();
    for &d in w.digits() {
        let (ai, bi) = f.branches()[d as usize];
        a *= ai;
        b = b * ai + &p_pow * bi;
        p_pow *= &p;
    }
    // Unreachable for admissible maps (A is coprime to p), kept for direct callers.
    if a == p_pow {
        return Err(Error::DegenerateWord(w.to_string()));
    }
    let x = Rational::new(b, p_pow - a);
    let digits = f.digit_sequence(&x, w.len())?;
    if &digits != w {
        return Err(Error::InvariantBreach(format!(
            "fixed point {x} of word {w} has digits {digits}"
        )));
    }
    Ok(x)
}

/// The full cycle through `cycle_from_word(f, w)`.
pub fn rational_cycle(f: &BranchMap, w: &DigitWord) -> Result<RationalCycle> {
    let x = cycle_from_word(f, w)?;
    let mut elements = Vec::with_capacity(w.len());
    let mut y = x.clone();
    for _ in 0..w.len() {
        elements.push(y.clone());
        y = f.eval_rational(&y)?;
    }
    if y != x {
        return Err(Error::InvariantBreach(format!("orbit of {x} does not close after {} steps", w.len())));
    }
    cycle_from_elements(f, w.clone(), elements)
}

fn cycle_from_elements(f: &BranchMap, word: DigitWord, elements: Vec<Rational>) -> Result<RationalCycle> {
    let b = elements[0].denom().clone();
    if let Some(e) = elements.iter().find(|e| e.denom() != &b) {
        return Err(Error::InvariantBreach(format!(
            "cycle element {e} does not share denominator {b} with {}",
            elements[0]
        )));
    }
    let integer_cycle: Vec<BigInt> = elements.iter().map(|e| e.numer().clone()).collect();
    debug_assert_eq!(f.digit_sequence(&elements[0], word.len()).ok().as_ref(), Some(&word));
    Ok(RationalCycle {
        word,
        elements,
        b,
        integer_cycle,
    })
}

/// The `3n + b` cycle attached to a binary Lyndon word.
pub fn b_of_lyndon_word(w: &LyndonWord) -> Result<RationalCycle> {
    b_of_word(w.word())
}

/// As [`b_of_lyndon_word`] for any non-empty binary word; the cycle starts
/// at the element whose parity word is `w`.
pub fn b_of_word(w: &DigitWord) -> Result<RationalCycle> {
    if w.base() != 2 {
        return Err(invalid("3n+b correspondence needs a binary word"));
    }
    let t = BranchMap::collatz();
    let cycle = rational_cycle(&t, w)?;
    if !cycle.b.gcd(&BigInt::from(6)).is_one() {
        return Err(Error::InvariantBreach(format!("word {w} gave b = {}, not coprime to 6", cycle.b)));
    }
    verify_integer_cycle(&t, &cycle)?;
    Ok(cycle)
}

/// Checks that `integer_cycle` is a cycle of `T` scaled by `b`, by direct iteration.
fn verify_integer_cycle(f: &BranchMap, cycle: &RationalCycle) -> Result<()> {
    let scale = cycle
        .b
        .to_i64()
        .ok_or_else(|| invalid(format!("denominator {} too large to scale the map", cycle.b)))?;
    let g = f.scaled(scale)?;
    let n = cycle.integer_cycle.len();
    for (i, v) in cycle.integer_cycle.iter().enumerate() {
        if g.eval_int(v) != cycle.integer_cycle[(i + 1) % n] {
            return Err(Error::InvariantBreach(format!(
                "{v} does not map to {} under the b = {} map",
                cycle.integer_cycle[(i + 1) % n],
                cycle.b
            )));
        }
    }
    Ok(())
}

/// All `3n + b` cycles coming from binary Lyndon words of length at most `max_len`.
pub fn enumerate_cycles_for_b(b: i64, max_len: usize) -> Result<Vec<RationalCycle>> {
    if b <= 0 || b % 2 == 0 || b % 3 == 0 {
        return Err(invalid(format!("b must be positive, odd and coprime to 3, got {b}")));
    }
    if max_len == 0 {
        return Err(invalid("max_len must be at least 1"));
    }
    let target = BigInt::from(b);
    let mut found = Vec::new();
    for len in 1..=max_len {
        for w in lyndon_words(2, len, LengthMode::Exact)? {
            let cycle = b_of_lyndon_word(&w)?;
            if cycle.b == target {
                found.push(cycle);
            }
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitClass {
    /// The orbit enters `cycle` after `preperiod` steps. The cycle starts at
    /// the rotation whose word is lexicographically least.
    Cyclic { cycle: RationalCycle, preperiod: usize },
    Undetermined { steps_used: usize },
}

/// Exact orbit iteration with visited-state detection.
pub fn classify_orbit(f: &BranchMap, r: &Rational, max_steps: usize) -> Result<OrbitClass> {
    arith::padic_residue(r, f.p())?;
    let mut orbit = FixedDenominatorOrbit::new(f, r)?;
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut visited = Vec::new();
    for _ in 0..=max_steps {
        if let Some(&start) = seen.get(orbit.numer()) {
            let elements = visited.split_off(start).into_iter().map(|n| orbit.value_of(n)).collect();
            let cycle = canonical_cycle(f, elements)?;
            return Ok(OrbitClass::Cyclic { cycle, preperiod: start });
        }
        seen.insert(orbit.numer().clone(), visited.len());
        visited.push(orbit.numer().clone());
        orbit.step();
    }
    Ok(OrbitClass::Undetermined { steps_used: max_steps })
}

fn canonical_cycle(f: &BranchMap, elements: Vec<Rational>) -> Result<RationalCycle> {
    let k = elements.len();
    let digits: Vec<u32> = elements.iter().map(|e| arith::residue_unchecked(e, f.p())).collect();
    let shift = (0..k)
        .min_by_key(|&i| [&digits[i..], &digits[..i]].concat())
        .expect("non-empty cycle");
    let mut elements = elements;
    elements.rotate_left(shift);
    let word = DigitWord::new(f.p(), [&digits[shift..], &digits[..shift]].concat())?;
    cycle_from_elements(f, word, elements)
}

fn big_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(i) => serde_json::Value::from(i),
        None => serde_json::Value::from(v.to_string()),
    }
}

/// `{"word", "b", "rational_cycle", "integer_cycle"}`.
#[derive(Debug, Clone, Serialize)]
pub struct CycleReport {
    pub word: String,
    pub b: serde_json::Value,
    pub rational_cycle: Vec<String>,
    pub integer_cycle: Vec<serde_json::Value>,
}

impl From<&RationalCycle> for CycleReport {
    fn from(c: &RationalCycle) -> Self {
        Self {
            word: c.word.to_string(),
            b: big_json(&c.b),
            rational_cycle: c.elements.iter().map(ToString::to_string).collect(),
            integer_cycle: c.integer_cycle.iter().map(big_json).collect(),
        }
    }
}

impl RationalCycle {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sorted_integers(&self) -> Vec<BigInt> {
        let mut v = self.integer_cycle.clone();
        v.sort();
        v
    }

    /// Smallest absolute element, handy for display.
    pub fn min_abs(&self) -> BigInt {
        self.integer_cycle.iter().map(|v| v.abs()).min().expect("non-empty cycle")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::maps::StandardMap;
    use std::collections::BTreeSet;

    fn bin(s: &str) -> DigitWord {
        DigitWord::parse(s, 2).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        v.sort();
        v
    }

    #[test]
    fn cycles_from_words() {
        let t = BranchMap::collatz();
        assert_eq!(cycle_from_word(&t, &bin("10")).unwrap(), rational(1, 1));
        assert_eq!(cycle_from_word(&t, &bin("1")).unwrap(), rational(-1, 1));
        assert_eq!(cycle_from_word(&t, &bin("0")).unwrap(), rational(0, 1));
        assert_eq!(cycle_from_word(&t, &bin("01")).unwrap(), rational(2, 1));
        let c = rational_cycle(&t, &bin("110")).unwrap();
        assert_eq!(c.elements, vec![rational(-5, 1), rational(-7, 1), rational(-10, 1)]);
        assert!(cycle_from_word(&t, &DigitWord::empty(2).unwrap()).is_err());
    }

    #[test]
    fn lyndon_correspondence() {
        let cases: [(&str, i64, &[i64]); 5] = [
            ("01", 1, &[1, 2]),
            ("1", 1, &[-1]),
            ("0", 1, &[0]),
            ("011", 1, &[-5, -7, -10]),
            ("001", 5, &[1, 4, 2]),
        ];
        for (w, b, cycle) in cases {
            let c = b_of_lyndon_word(&LyndonWord::new(bin(w)).unwrap()).unwrap();
            assert_eq!(c.b, BigInt::from(b), "word {w}");
            assert_eq!(c.sorted_integers(), ints(cycle), "word {w}");
        }
    }

    #[test]
    fn rotations_give_the_same_cycle() {
        for (w, b, cycle) in [("10", 1, &[1i64, 2][..]), ("110", 1, &[-5, -7, -10]), ("100", 5, &[1, 4, 2])] {
            let c = b_of_word(&bin(w)).unwrap();
            assert_eq!(c.b, BigInt::from(b));
            assert_eq!(c.sorted_integers(), ints(cycle));
            assert_eq!(c.word, bin(w));
        }
        let c = b_of_word(&bin("100")).unwrap();
        assert_eq!(c.integer_cycle, vec![BigInt::from(1), BigInt::from(4), BigInt::from(2)]);
        assert!(b_of_word(&DigitWord::parse("12", 3).unwrap()).is_err());
    }

    /// Brute force: iterate `3n + b` from every seed with |n| ≤ bound and
    /// collect the cycles of length ≤ max_len whose elements are coprime to b.
    fn brute_force_cycles(b: i64, bound: i64, max_len: usize) -> BTreeSet<Vec<i64>> {
        let step = |n: i64| if n.rem_euclid(2) == 1 { (3 * n + b) / 2 } else { n / 2 };
        let mut found = BTreeSet::new();
        for seed in -bound..=bound {
            let mut seen = HashMap::new();
            let mut n = seed;
            let mut i = 0;
            while !seen.contains_key(&n) && i < 10_000 && n.abs() < 1 << 40 {
                seen.insert(n, i);
                n = step(n);
                i += 1;
            }
            if let Some(&start) = seen.get(&n) {
                let len = i - start;
                let mut c = vec![n];
                let mut m = step(n);
                while m != n {
                    c.push(m);
                    m = step(m);
                }
                if len <= max_len && num_integer::gcd(n, b) == 1 {
                    c.sort();
                    found.insert(c);
                }
            }
        }
        found
    }

    #[test]
    fn enumeration_examples() {
        let got: BTreeSet<Vec<BigInt>> = enumerate_cycles_for_b(1, 3)
            .unwrap()
            .iter()
            .map(RationalCycle::sorted_integers)
            .collect();
        let want: BTreeSet<Vec<BigInt>> = [ints(&[0]), ints(&[-1]), ints(&[1, 2]), ints(&[-5, -7, -10])].into();
        assert_eq!(got, want);
        assert!(enumerate_cycles_for_b(5, 5)
            .unwrap()
            .iter()
            .any(|c| c.sorted_integers() == ints(&[1, 2, 4])));
        assert!(enumerate_cycles_for_b(7, 2).unwrap().is_empty());
        assert!(enumerate_cycles_for_b(3, 2).is_err());
        assert!(enumerate_cycles_for_b(4, 2).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for b in [1i64, 5, 7, 11, 13] {
            let max_len = 10;
            let got: BTreeSet<Vec<i64>> = enumerate_cycles_for_b(b, max_len)
                .unwrap()
                .iter()
                .map(|c| c.sorted_integers().iter().map(|v| v.to_i64().unwrap()).collect())
                .collect();
            let brute = brute_force_cycles(b, 2000, max_len);
            // Every cycle found by brute force is enumerated.
            assert!(brute.is_subset(&got), "b={b}: missing {:?}", brute.difference(&got).collect::<Vec<_>>());
            // Every enumerated cycle closes under direct iteration of 3n + b.
            let step = |n: i64| if n.rem_euclid(2) == 1 { (3 * n + b) / 2 } else { n / 2 };
            for c in &got {
                let mut orbit = vec![c[0]];
                let mut n = step(c[0]);
                while n != c[0] {
                    orbit.push(n);
                    n = step(n);
                    assert!(orbit.len() <= c.len());
                }
                orbit.sort();
                assert_eq!(&orbit, c);
            }
        }
    }

    #[test]
    fn rotation_coherence() {
        let t = BranchMap::collatz();
        for k in 1..=10usize {
            for n in 0..(1u64 << k) {
                let w = DigitWord::from_u64(2, n, k).unwrap();
                let x = cycle_from_word(&t, &w).unwrap();
                let y = cycle_from_word(&t, &w.rotate_left(1)).unwrap();
                assert_eq!(t.eval_rational(&x).unwrap(), y);
            }
        }
    }

    #[test]
    fn denominators_divide_two_power_minus_three_power() {
        let t = BranchMap::collatz();
        for k in 1..=12usize {
            for n in 0..(1u64 << k) {
                let w = DigitWord::from_u64(2, n, k).unwrap();
                let ones = w.digits().iter().filter(|&&d| d == 1).count();
                let x = cycle_from_word(&t, &w).unwrap();
                let m = num_traits::pow(BigInt::from(2), k) - num_traits::pow(BigInt::from(3), ones);
                assert!(m.is_multiple_of(x.denom()), "word {w}");
                assert!(x.denom().gcd(&BigInt::from(6)).is_one());
            }
        }
    }

    #[test]
    fn distinct_lyndon_words_give_distinct_cycles() {
        let mut seen = BTreeSet::new();
        for k in 1..=12 {
            for w in lyndon_words(2, k, LengthMode::Exact).unwrap() {
                let c = b_of_lyndon_word(&w).unwrap();
                let mut key: Vec<Rational> = c.elements.clone();
                key.sort();
                assert!(seen.insert(key), "duplicate cycle for {w}");
            }
        }
    }

    #[test]
    fn scaling_identity() {
        let t = BranchMap::collatz();
        for b in [1i64, 5, 7, 11, 13, 17, 19, 23, 25] {
            let g = t.scaled(b).unwrap();
            for n in -300..300 {
                let lhs = t.eval_rational(&rational(n, b)).unwrap();
                let rhs = Rational::new(g.eval_int(&BigInt::from(n)), BigInt::from(b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn classification() {
        let t = BranchMap::collatz();
        let OrbitClass::Cyclic { cycle, preperiod } = classify_orbit(&t, &rational(3, 1), 100).unwrap() else {
            panic!("3 should reach a cycle");
        };
        // 3, 5, 8, 4 precede the cycle entered at 2.
        assert_eq!(preperiod, 4);
        assert_eq!(cycle.word.to_string(), "01");
        assert_eq!(cycle.sorted_integers(), ints(&[1, 2]));

        let OrbitClass::Cyclic { cycle, preperiod } = classify_orbit(&t, &rational(0, 1), 10).unwrap() else {
            panic!()
        };
        assert_eq!((cycle.sorted_integers(), preperiod), (ints(&[0]), 0));

        let t51 = BranchMap::standard(StandardMap::AnPlusB { a: 5, b: 1 }).unwrap();
        let OrbitClass::Cyclic { cycle, preperiod } = classify_orbit(&t51, &rational(1, 1), 100).unwrap() else {
            panic!()
        };
        assert_eq!((cycle.sorted_integers(), preperiod), (ints(&[1, 2, 3, 4, 8]), 0));
        assert_eq!(
            classify_orbit(&t51, &rational(7, 1), 500).unwrap(),
            OrbitClass::Undetermined { steps_used: 500 }
        );
        assert!(classify_orbit(&t, &rational(1, 2), 10).is_err());
    }

    #[test]
    fn classification_of_rationals() {
        let t = BranchMap::collatz();
        let OrbitClass::Cyclic { cycle, preperiod } = classify_orbit(&t, &rational(-1, 9), 100).unwrap() else {
            panic!()
        };
        // -1/9 -> 1/3 -> 1 -> 2 -> 1
        assert_eq!(preperiod, 2);
        assert_eq!(cycle.b, BigInt::from(1));
        let OrbitClass::Cyclic { cycle, .. } = classify_orbit(&t, &rational(4, 5), 100).unwrap() else {
            panic!()
        };
        assert_eq!(cycle.b, BigInt::from(5));
        assert_eq!(cycle.word.to_string(), "001");
    }

    #[test]
    fn report_json() {
        let c = b_of_lyndon_word(&LyndonWord::new(bin("001")).unwrap()).unwrap();
        let json = serde_json::to_string(&CycleReport::from(&c)).unwrap();
        assert_eq!(
            json,
            r#"{"word":"001","b":5,"rational_cycle":["4/5","2/5","1/5"],"integer_cycle":[4,2,1]}"#
        );
    }
}
