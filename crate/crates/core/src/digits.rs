//! Finite words over the alphabet `{0, .., p-1}`.
//!
//! A word `b_0 b_1 .. b_{k-1}` is written least significant digit first and
//! identified with the number `Σ b_i p^i`, so `"10110"` in base 2 is 13.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DigitWord {
    base: u32,
    digits: Vec<u32>,
}

impl DigitWord {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(invalid(format!("base must be at least 2, got {base}")));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= base) {
            return Err(invalid(format!("digit {d} out of range for base {base}")));
        }
        Ok(Self { base, digits })
    }

    pub(crate) fn from_digits_unchecked(base: u32, digits: Vec<u32>) -> Self {
        debug_assert!(digits.iter().all(|&d| d < base));
        Self { base, digits }
    }

    pub fn empty(base: u32) -> Result<Self> {
        Self::new(base, Vec::new())
    }

    pub fn zeros(base: u32, len: usize) -> Result<Self> {
        Self::new(base, vec![0; len])
    }

    /// The `len` least significant base-`base` digits of `value`.
    pub fn from_value(base: u32, value: &BigUint, len: usize) -> Result<Self> {
        if base < 2 {
            return Err(invalid(format!("base must be at least 2, got {base}")));
        }
        let mut v = value.clone();
        let mut digits = Vec::with_capacity(len);
        for _ in 0..len {
            let d = (&v % base).to_u32().expect("digit below base");
            digits.push(d);
            v /= base;
        }
        Ok(Self { base, digits })
    }

    pub fn from_u64(base: u32, value: u64, len: usize) -> Result<Self> {
        Self::from_value(base, &BigUint::from(value), len)
    }

    /// Parses a word written least significant digit first.
    ///
    /// Bases up to 36 use one character per digit (`0-9a-z`); larger bases
    /// take comma-separated decimal digits.
    pub fn parse(s: &str, base: u32) -> Result<Self> {
        let s = s.trim();
        if base > 36 {
            if s.is_empty() {
                return Self::new(base, Vec::new());
            }
            let digits = s
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| invalid(format!("bad digit {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            return Self::new(base, digits);
        }
        let digits = s
            .chars()
            .map(|c| c.to_digit(36).ok_or_else(|| invalid(format!("bad digit {c:?} in word {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, digits)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u32> {
        self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> BigUint {
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * self.base + d)
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.value().to_u64()
    }

    pub fn rotate_left(&self, n: usize) -> Self {
        let mut digits = self.digits.clone();
        if !digits.is_empty() {
            let n = n % digits.len();
            digits.rotate_left(n);
        }
        Self { base: self.base, digits }
    }

    /// Digit-reversed word, `b_{k-1} .. b_0`.
    pub fn reversed(&self) -> Self {
        let mut digits = self.digits.clone();
        digits.reverse();
        Self { base: self.base, digits }
    }

    pub fn prefix(&self, len: usize) -> Self {
        Self {
            base: self.base,
            digits: self.digits[..len.min(self.digits.len())].to_vec(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(invalid(format!("cannot concatenate base {} with base {}", self.base, other.base)));
        }
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Ok(Self { base: self.base, digits })
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base <= 36 {
            for &d in &self.digits {
                let c = char::from_digit(d, 36).expect("digit below 36");
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.digits.iter().map(u32::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_is_least_significant_first() {
        let w = DigitWord::parse("10110", 2).unwrap();
        assert_eq!(w.value_u64(), Some(13));
        assert_eq!(DigitWord::from_u64(2, 13, 5).unwrap(), w);
        assert_eq!(w.to_string(), "10110");
    }

    #[test]
    fn rejects_out_of_range_digits() {
        assert!(DigitWord::parse("102", 2).is_err());
        assert!(DigitWord::new(1, vec![]).is_err());
    }

    #[test]
    fn large_base_uses_commas() {
        let w = DigitWord::new(100, vec![3, 99, 0]).unwrap();
        assert_eq!(w.to_string(), "3,99,0");
        assert_eq!(DigitWord::parse("3,99,0", 100).unwrap(), w);
        assert_eq!(w.value_u64(), Some(3 + 99 * 100));
    }

    #[test]
    fn rotation_and_reversal() {
        let w = DigitWord::parse("1100", 2).unwrap();
        assert_eq!(w.rotate_left(1).to_string(), "1001");
        assert_eq!(w.reversed().to_string(), "0011");
        assert_eq!(DigitWord::empty(2).unwrap().rotate_left(3).len(), 0);
    }
}
