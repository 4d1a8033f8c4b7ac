//! Conjugacy maps `Φ(n) = Σ x_i(n) p^i` between a branch map and the shift.
//!
//! On residues mod `p^k` this is a permutation carrying `C^(f)(p,k)` onto
//! `B(p,k)`; on p-adic integers it satisfies `f = Φ⁻¹ ∘ σ ∘ Φ`. For rational
//! inputs whose orbit cycles, the image is again rational and is computed
//! exactly from the orbit's preperiod and period.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::arith::{self, rational_from_periodic, EventuallyPeriodicDigits, Rational};
use crate::digits::DigitWord;
use crate::error::{invalid, Error, Result};
use crate::graphs::{build_debruijn_graph, build_modular_graph, check_isomorphism, Permutation};
use crate::limits;
use crate::maps::{BranchMap, FixedDenominatorOrbit};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// How a `k`-digit word `x_0 .. x_{k-1}` is turned back into a vertex number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DigitOrder {
    /// `Σ x_i p^i`, the numbering of the De Bruijn graphs built here.
    #[default]
    LeastSignificantFirst,
    /// `Σ x_i p^(k-1-i)`: the word read as an ordinary base-`p` numeral.
    MostSignificantFirst,
}

/// `n ↦ Σ_{i<k} x_i(n) p^i` on `0..p^k`.
pub fn conjugacy_permutation(f: &BranchMap, k: u32) -> Result<Permutation> {
    conjugacy_permutation_ordered(f, k, DigitOrder::LeastSignificantFirst)
}

/// [`conjugacy_permutation`] with the image word numbered in the given order.
pub fn conjugacy_permutation_ordered(f: &BranchMap, k: u32, order: DigitOrder) -> Result<Permutation> {
    if k == 0 {
        return Err(invalid("dimension k must be at least 1"));
    }
    let size = limits::checked_size("conjugacy permutation", u64::from(f.p()), k)?;
    let p = i128::from(f.p());
    let images = (0..size)
        .map(|n| {
            let mut modulus = i128::from(size);
            let mut v = i128::from(n);
            let mut image: i128 = 0;
            let mut weight: i128 = 1;
            for _ in 0..k {
                let d = v % p;
                match order {
                    DigitOrder::LeastSignificantFirst => image += d * weight,
                    DigitOrder::MostSignificantFirst => image = image * p + d,
                }
                weight *= p;
                v = f.step_mod(v, modulus);
                modulus /= p;
            }
            image as u64
        })
        .collect();
    Permutation::from_images(images)
        .map_err(|_| Error::InvariantBreach(format!("digit map of {f} is not a bijection mod p^{k}")))
}

/// Whether `Φ_k` is an isomorphism `C^(f)(p^k) → B(p,k)`, i.e. `f_k = Φ_k⁻¹ ∘ σ_{p,k} ∘ Φ_k`.
pub fn verify_conjugacy(f: &BranchMap, k: u32) -> Result<bool> {
    let phi = match conjugacy_permutation(f, k) {
        Ok(phi) => phi,
        Err(Error::InvariantBreach(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let m = limits::checked_size("modular graph vertices", u64::from(f.p()), k)?;
    let c = build_modular_graph(f, m)?;
    let b = build_debruijn_graph(f.p(), k)?;
    check_isomorphism(&c, &b, &phi)
}

pub fn permutation_order(phi: &Permutation) -> BigUint {
    phi.order()
}

/// `Φ_N` on an `N`-digit word: digit `i` is the leading digit of the `i`-th
/// truncated iterate.
pub fn phi_truncated(f: &BranchMap, n: &DigitWord) -> Result<DigitWord> {
    if n.is_empty() {
        return Err(invalid("phi needs a non-empty word"));
    }
    if n.base() != f.p() {
        return Err(invalid(format!("word base {} does not match p={}", n.base(), f.p())));
    }
    let mut digits = Vec::with_capacity(n.len());
    let mut cur = n.clone();
    while let Some(&d) = cur.digits().first() {
        digits.push(d);
        cur = f.eval_truncated(&cur)?;
    }
    DigitWord::new(f.p(), digits)
}

/// The unique `n mod p^N` with `phi_truncated(f, n) = target`, found one
/// digit at a time: the first `j+1` digits of `Φ(n)` depend only on
/// `n mod p^(j+1)`, and exactly one of the `p` lifts matches.
pub fn phi_inverse_truncated(f: &BranchMap, target: &DigitWord) -> Result<DigitWord> {
    if target.is_empty() {
        return Err(invalid("phi inverse needs a non-empty word"));
    }
    if target.base() != f.p() {
        return Err(invalid(format!("word base {} does not match p={}", target.base(), f.p())));
    }
    let p = f.p();
    let mut preimage = vec![target.digits()[0]];
    for j in 1..target.len() {
        let want = &target.digits()[..=j];
        let mut found = None;
        for c in 0..p {
            let mut candidate = preimage.clone();
            candidate.push(c);
            let image = phi_truncated(f, &DigitWord::from_digits_unchecked(p, candidate))?;
            if image.digits() == want {
                if found.is_some() {
                    return Err(Error::InvariantBreach(format!("two lifts match at digit {j} for {f}")));
                }
                found = Some(c);
            }
        }
        let c = found.ok_or_else(|| Error::InvariantBreach(format!("no lift matches at digit {j} for {f}")))?;
        preimage.push(c);
    }
    Ok(DigitWord::from_digits_unchecked(p, preimage))
}

/// Exact `Φ(r)` for a rational whose orbit cycles within `max_steps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhiExact {
    Determined {
        digits: EventuallyPeriodicDigits,
        value: Rational,
        steps_used: usize,
    },
    /// No repeated state within the step budget; says nothing about divergence.
    Undetermined { steps_used: usize },
}

impl PhiExact {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            PhiExact::Determined { value, .. } => Some(value),
            PhiExact::Undetermined { .. } => None,
        }
    }
}

pub fn phi_exact(f: &BranchMap, r: &Rational, max_steps: usize) -> Result<PhiExact> {
    arith::padic_residue(r, f.p())?;
    let mut orbit = FixedDenominatorOrbit::new(f, r)?;
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits = Vec::new();
    for step in 0..=max_steps {
        if let Some(&start) = seen.get(orbit.numer()) {
            let period = digits.split_off(start);
            let digits = EventuallyPeriodicDigits::new(f.p(), digits, period)?;
            let value = rational_from_periodic(&digits);
            return Ok(PhiExact::Determined {
                digits,
                value,
                steps_used: step,
            });
        }
        if step == max_steps {
            break;
        }
        seen.insert(orbit.numer().clone(), digits.len());
        digits.push(orbit.step());
    }
    Ok(PhiExact::Undetermined { steps_used: max_steps })
}

/// Machine-readable permutation: `{"size", "images", "cycles", "order"}`.
#[derive(Debug, Clone, Serialize)]
pub struct PermutationReport {
    pub size: u64,
    pub images: Vec<u64>,
    pub cycles: Vec<Vec<u64>>,
    pub order: serde_json::Value,
}

impl From<&Permutation> for PermutationReport {
    fn from(phi: &Permutation) -> Self {
        let order = phi.order();
        let order = match u64::try_from(&order) {
            Ok(v) => serde_json::Value::from(v),
            Err(_) => serde_json::Value::from(order.to_string()),
        };
        Self {
            size: phi.size(),
            images: phi.images().to_vec(),
            cycles: phi.cycles(),
            order,
        }
    }
}
