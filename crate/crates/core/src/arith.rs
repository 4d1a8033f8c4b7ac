//! Exact rationals and their p-adic digit expansions.
//!
//! A rational whose denominator is coprime to `p` is a p-adic integer with
//! an eventually periodic digit expansion. [`padic_digits`] extracts digits,
//! [`padic_expansion`] finds the full preperiod/period split and
//! [`rational_from_periodic`] goes back.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::digits::DigitWord;
use crate::error::{invalid, Result};

/// Normalized arbitrary-precision fraction (reduced, positive denominator).
pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| invalid(format!("bad rational {s:?}")))?;
    let den: BigInt = den.parse().map_err(|_| invalid(format!("bad rational {s:?}")))?;
    if den.is_zero() {
        return Err(invalid(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Inverse of `a` modulo `m`, in `0..m`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if !m.is_positive() {
        return Err(invalid(format!("modulus must be positive, got {m}")));
    }
    let egcd = a.mod_floor(m).extended_gcd(m);
    if !egcd.gcd.is_one() {
        return Err(invalid(format!("{a} is not invertible modulo {m}")));
    }
    Ok(egcd.x.mod_floor(m))
}

fn check_denominator(r: &Rational, p: u32) -> Result<()> {
    if p < 2 {
        return Err(invalid(format!("base must be at least 2, got {p}")));
    }
    if !r.denom().gcd(&BigInt::from(p)).is_one() {
        return Err(invalid(format!("denominator of {r} is not coprime to {p}")));
    }
    Ok(())
}

/// `r mod p` in the p-adic sense: `numerator · denominator⁻¹ mod p`.
pub fn padic_residue(r: &Rational, p: u32) -> Result<u32> {
    check_denominator(r, p)?;
    Ok(residue_unchecked(r, p))
}

pub(crate) fn residue_unchecked(r: &Rational, p: u32) -> u32 {
    let pb = BigInt::from(p);
    if r.denom().is_one() {
        return r.numer().mod_floor(&pb).to_u32().expect("residue below p");
    }
    let inv = mod_inverse(r.denom(), &pb).expect("denominator coprime to p");
    (r.numer() * inv).mod_floor(&pb).to_u32().expect("residue below p")
}

/// First `n` base-`p` digits of `r`, i.e. `r ≡ Σ d_i p^i (mod p^n)`.
pub fn padic_digits(r: &Rational, p: u32, n: usize) -> Result<DigitWord> {
    check_denominator(r, p)?;
    let pr = Rational::from_integer(BigInt::from(p));
    let mut x = r.clone();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let d = residue_unchecked(&x, p);
        digits.push(d);
        x = (x - Rational::from_integer(BigInt::from(d))) / &pr;
    }
    Ok(DigitWord::from_digits_unchecked(p, digits))
}

/// Complete digit expansion of a rational p-adic integer.
///
/// The digit-extraction states `r_{i+1} = (r_i - d_i)/p` have bounded
/// numerators, so a state eventually repeats.
pub fn padic_expansion(r: &Rational, p: u32) -> Result<EventuallyPeriodicDigits> {
    check_denominator(r, p)?;
    let pr = Rational::from_integer(BigInt::from(p));
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut x = r.clone();
    loop {
        if let Some(&start) = seen.get(&x) {
            let period = digits.split_off(start);
            return EventuallyPeriodicDigits::new(p, digits, period);
        }
        seen.insert(x.clone(), digits.len());
        let d = residue_unchecked(&x, p);
        digits.push(d);
        x = (x - Rational::from_integer(BigInt::from(d))) / &pr;
    }
}

/// Digit string `pre · per per per ..` of a rational p-adic integer, kept in
/// canonical form: minimal period, shortest preperiod.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventuallyPeriodicDigits {
    base: u32,
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl EventuallyPeriodicDigits {
    pub fn new(base: u32, preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(invalid(format!("base must be at least 2, got {base}")));
        }
        if period.is_empty() {
            return Err(invalid("period must be non-empty"));
        }
        if let Some(d) = preperiod.iter().chain(&period).find(|&&d| d >= base) {
            return Err(invalid(format!("digit {d} out of range for base {base}")));
        }
        let mut this = Self { base, preperiod, period };
        this.canonicalize();
        Ok(this)
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        if let Some(d) = (1..=n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| self.period[i] == self.period[i - d])) {
            self.period.truncate(d);
        }
        while let Some(&last) = self.preperiod.last() {
            if last != *self.period.last().expect("non-empty period") {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn preperiod(&self) -> DigitWord {
        DigitWord::from_digits_unchecked(self.base, self.preperiod.clone())
    }

    pub fn period(&self) -> DigitWord {
        DigitWord::from_digits_unchecked(self.base, self.period.clone())
    }

    /// First `n` digits of the infinite expansion.
    pub fn unrolled(&self, n: usize) -> DigitWord {
        let digits = self
            .preperiod
            .iter()
            .chain(self.period.iter().cycle())
            .take(n)
            .copied()
            .collect();
        DigitWord::from_digits_unchecked(self.base, digits)
    }
}

impl std::fmt::Display for EventuallyPeriodicDigits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({})", self.preperiod(), self.period())
    }
}

/// `A + p^|pre| · B / (1 - p^|per|)` with `A`, `B` the values of the two words.
pub fn rational_from_periodic(d: &EventuallyPeriodicDigits) -> Rational {
    let to_int = |v: BigUint| BigInt::from_biguint(Sign::Plus, v);
    let a = to_int(d.preperiod().value());
    let b = to_int(d.period().value());
    let p = BigInt::from(d.base);
    let shift = num_traits::pow(p.clone(), d.preperiod.len());
    let denom = BigInt::one() - num_traits::pow(p, d.period.len());
    Rational::from_integer(a) + Rational::new(shift * b, denom)
}
