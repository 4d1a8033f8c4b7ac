//! Lyndon words, necklace counting and FKM De Bruijn sequences.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

use crate::digits::DigitWord;
use crate::error::{invalid, Result};
use crate::limits;

/// Möbius function by trial division.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn divisors(k: u64) -> impl Iterator<Item = u64> {
    (1..=k).filter(move |d| k.is_multiple_of(*d))
}

/// Number of Lyndon words of length `k` over `p` letters:
/// `(1/k) Σ_{d|k} μ(d) p^(k/d)`.
pub fn necklace_count(p: u32, k: u32) -> Result<BigUint> {
    if p < 1 {
        return Err(invalid("alphabet must be non-empty"));
    }
    if k == 0 {
        return Err(invalid("length must be at least 1"));
    }
    let sum: BigInt = divisors(u64::from(k))
        .map(|d| BigInt::from(mobius(d)) * num_traits::pow(BigInt::from(p), (u64::from(k) / d) as usize))
        .sum();
    let (q, r) = (&sum / k, &sum % k);
    debug_assert!(r == BigInt::from(0) && !q.is_negative());
    Ok(q.to_biguint().expect("necklace count is nonnegative"))
}

/// A word strictly smaller than each of its proper rotations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LyndonWord(DigitWord);

impl LyndonWord {
    pub fn new(word: DigitWord) -> Result<Self> {
        if !is_lyndon(word.digits()) {
            return Err(invalid(format!("{word} is not a Lyndon word")));
        }
        Ok(Self(word))
    }

    pub fn word(&self) -> &DigitWord {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_lyndon(w: &[u32]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &[&w[i..], &w[..i]].concat()[..])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthMode {
    /// Length exactly `k`.
    Exact,
    /// Every length dividing `k`.
    Dividing,
}

/// Duval's successor: all Lyndon words of length at most `k`, in lexicographic order.
struct LyndonIter {
    p: u32,
    k: usize,
    word: Vec<u32>,
    started: bool,
}

impl Iterator for LyndonIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if !self.started {
            self.started = true;
            self.word = vec![0];
            return Some(self.word.clone());
        }
        let len = self.word.len();
        for i in len..self.k {
            let d = self.word[i % len];
            self.word.push(d);
        }
        while self.word.last() == Some(&(self.p - 1)) {
            self.word.pop();
        }
        let last = self.word.last_mut()?;
        *last += 1;
        Some(self.word.clone())
    }
}

/// Lyndon words over `p` letters of length `k` (or of every length dividing `k`), lexicographically ordered.
pub fn lyndon_words(p: u32, k: usize, mode: LengthMode) -> Result<Vec<LyndonWord>> {
    if p < 2 {
        return Err(invalid(format!("alphabet size must be at least 2, got {p}")));
    }
    if k == 0 {
        return Err(invalid("length must be at least 1"));
    }
    let iter = LyndonIter {
        p,
        k,
        word: Vec::new(),
        started: false,
    };
    Ok(iter
        .filter(|w| match mode {
            LengthMode::Exact => w.len() == k,
            LengthMode::Dividing => k.is_multiple_of(w.len()),
        })
        .map(|w| LyndonWord(DigitWord::from_digits_unchecked(p, w)))
        .collect())
}

/// De Bruijn sequence of order `k`: the Lyndon words of lengths dividing `k`
/// concatenated in lexicographic order.
pub fn fkm_sequence(p: u32, k: usize) -> Result<DigitWord> {
    let k32 = u32::try_from(k).map_err(|_| invalid("order too large"))?;
    let len = limits::checked_size("De Bruijn sequence", u64::from(p), k32)?;
    let mut digits = Vec::with_capacity(len as usize);
    for w in lyndon_words(p, k, LengthMode::Dividing)? {
        digits.extend_from_slice(w.word().digits());
    }
    debug_assert_eq!(digits.len() as u64, len);
    DigitWord::new(p, digits)
}

/// Whether every `k`-digit word occurs exactly once among the cyclic windows of `s`.
pub fn verify_debruijn_sequence(s: &DigitWord, p: u32, k: usize) -> bool {
    if s.base() != p || k == 0 {
        return false;
    }
    let Some(total) = u32::try_from(k).ok().and_then(|k| u64::from(p).checked_pow(k)) else {
        return false;
    };
    if s.len() as u64 != total || s.digits().iter().any(|&d| d >= p) {
        return false;
    }
    let n = s.len();
    let digits = s.digits();
    let top = total / u64::from(p);
    let mut seen = vec![false; n];
    // Rolling value of the window starting at i, read as Σ w_j p^j.
    let mut value: u64 = (0..k).rev().fold(0, |acc, j| acc * u64::from(p) + u64::from(digits[j % n]));
    for i in 0..n {
        let v = value.to_usize().expect("window below p^k");
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
        value = value / u64::from(p) + u64::from(digits[(i + k) % n]) * top;
    }
    true
}
