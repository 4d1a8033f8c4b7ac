//! Affine branch maps: the 3n+1 function and its generalizations.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational};
use crate::digits::DigitWord;
use crate::error::{invalid, Error, Result};

/// `f(n) = (a_i n + b_i) / p` on the class `n ≡ i (mod p)`.
///
/// Admissible maps satisfy `a_i·i + b_i ≡ 0 (mod p)` (integral branches) and
/// `gcd(a_i, p) = 1`, which makes the successor digit of `x_k(n)` and
/// `x_k(n + p^k)` differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBranchMap", into = "RawBranchMap")]
pub struct BranchMap {
    p: u32,
    branches: Vec<(i64, i64)>,
}

#[derive(Serialize, Deserialize)]
struct RawBranchMap {
    p: u32,
    branches: Vec<(i64, i64)>,
}

impl TryFrom<RawBranchMap> for BranchMap {
    type Error = Error;

    fn try_from(raw: RawBranchMap) -> Result<Self> {
        BranchMap::new(raw.p, raw.branches)
    }
}

impl From<BranchMap> for RawBranchMap {
    fn from(f: BranchMap) -> Self {
        RawBranchMap {
            p: f.p,
            branches: f.branches,
        }
    }
}

/// Named presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardMap {
    /// `T`: `n/2` or `(3n+1)/2`.
    Collatz,
    /// `T^(a,b)`: `n/2` or `(an+b)/2`, `a`, `b` odd.
    AnPlusB { a: i64, b: i64 },
    /// Collatz's original ternary problem `f₀`: `2n/3`, `(4n-1)/3`, `(4n+1)/3`.
    CollatzOriginal,
    /// The binary shift map `σ = T^(1,-1)`.
    Shift,
}

impl BranchMap {
    pub fn new(p: u32, branches: Vec<(i64, i64)>) -> Result<Self> {
        if p < 2 {
            return Err(invalid(format!("p must be at least 2, got {p}")));
        }
        if branches.len() != p as usize {
            return Err(invalid(format!("expected {p} branches, got {}", branches.len())));
        }
        let pi = i128::from(p);
        for (i, &(a, b)) in branches.iter().enumerate() {
            if num_integer::gcd(i128::from(a), pi) != 1 {
                return Err(invalid(format!("branch {i}: gcd(a_{i}={a}, p={p}) must be 1")));
            }
            if (i128::from(a) * i as i128 + i128::from(b)).rem_euclid(pi) != 0 {
                return Err(invalid(format!(
                    "branch {i}: a_{i}·{i} + b_{i} = {a}·{i} + {b} is not divisible by p={p}"
                )));
            }
        }
        Ok(Self { p, branches })
    }

    pub fn standard(kind: StandardMap) -> Result<Self> {
        match kind {
            StandardMap::Collatz => Self::new(2, vec![(1, 0), (3, 1)]),
            StandardMap::AnPlusB { a, b } => {
                if a % 2 == 0 || b % 2 == 0 {
                    return Err(invalid(format!("an+b requires odd a and b, got a={a}, b={b}")));
                }
                Self::new(2, vec![(1, 0), (a, b)])
            }
            StandardMap::CollatzOriginal => Self::new(3, vec![(2, 0), (4, -1), (4, 1)]),
            StandardMap::Shift => Self::new(2, vec![(1, 0), (1, -1)]),
        }
    }

    pub fn collatz() -> Self {
        Self::standard(StandardMap::Collatz).expect("admissible")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn branches(&self) -> &[(i64, i64)] {
        &self.branches
    }

    /// The conjugate `x ↦ c·f(x/c)`, defined on integers when `gcd(c, p) = 1`.
    ///
    /// For `T` and odd `c` this is the `3n + c` function.
    pub fn scaled(&self, c: i64) -> Result<Self> {
        let p = i64::from(self.p);
        if c == 0 || num_integer::gcd(c, p) != 1 {
            return Err(invalid(format!("scale {c} must be coprime to p={p}")));
        }
        let mut branches = vec![(0, 0); self.p as usize];
        for (i, &(a, b)) in self.branches.iter().enumerate() {
            let j = (c * i as i64).rem_euclid(p) as usize;
            let cb = c
                .checked_mul(b)
                .ok_or_else(|| invalid(format!("scaled coefficient {c}·{b} overflows")))?;
            branches[j] = (a, cb);
        }
        Self::new(self.p, branches)
    }

    /// `f(n)` on the integers; the branch is `n mod p` taken nonnegative.
    pub fn eval_int(&self, n: &BigInt) -> BigInt {
        let p = BigInt::from(self.p);
        let i = n.mod_floor(&p).to_usize().expect("residue below p");
        let (a, b) = self.branches[i];
        let v = n * a + b;
        debug_assert!(v.mod_floor(&p).is_zero());
        v / p
    }

    /// `f(n)` in `i128`, `None` on overflow.
    pub fn eval_i128(&self, n: i128) -> Option<i128> {
        let p = i128::from(self.p);
        let (a, b) = self.branches[n.rem_euclid(p) as usize];
        let v = n.checked_mul(i128::from(a))?.checked_add(i128::from(b))?;
        Some(v / p)
    }

    /// One step on residues modulo `modulus` (a multiple of `p`): `n` is a
    /// residue mod `modulus`, the result is `f(n)` mod `modulus / p`.
    pub(crate) fn step_mod(&self, n: i128, modulus: i128) -> i128 {
        let p = i128::from(self.p);
        let (a, b) = self.branches[n.rem_euclid(p) as usize];
        let v = (i128::from(a).rem_euclid(modulus) * n + i128::from(b)).rem_euclid(modulus);
        v / p
    }

    /// `f(r)` for a rational with denominator coprime to `p`; the branch is
    /// chosen by the p-adic residue of `r`.
    pub fn eval_rational(&self, r: &Rational) -> Result<Rational> {
        let i = arith::padic_residue(r, self.p)? as usize;
        Ok(self.apply_branch(i, r))
    }

    pub(crate) fn apply_branch(&self, i: usize, r: &Rational) -> Rational {
        let (a, b) = self.branches[i];
        (r * BigInt::from(a) + BigInt::from(b)) / BigInt::from(self.p)
    }

    /// `x_i(r) = f^i(r) mod p` for `i < k`.
    pub fn digit_sequence(&self, r: &Rational, k: usize) -> Result<DigitWord> {
        arith::padic_residue(r, self.p)?;
        let mut x = r.clone();
        let mut digits = Vec::with_capacity(k);
        for _ in 0..k {
            let d = arith::residue_unchecked(&x, self.p);
            digits.push(d);
            x = self.apply_branch(d as usize, &x);
        }
        Ok(DigitWord::from_digits_unchecked(self.p, digits))
    }

    pub fn digit_sequence_int(&self, n: &BigInt, k: usize) -> DigitWord {
        let p = BigInt::from(self.p);
        let mut x = n.clone();
        let mut digits = Vec::with_capacity(k);
        for _ in 0..k {
            digits.push(x.mod_floor(&p).to_u32().expect("residue below p"));
            x = self.eval_int(&x);
        }
        DigitWord::from_digits_unchecked(self.p, digits)
    }

    /// `f(n) mod p^(N-1)` from `n mod p^N`, given as an `N`-digit word.
    pub fn eval_truncated(&self, n: &DigitWord) -> Result<DigitWord> {
        if n.base() != self.p {
            return Err(invalid(format!("word base {} does not match p={}", n.base(), self.p)));
        }
        if n.is_empty() {
            return Err(invalid("truncated evaluation needs at least one digit"));
        }
        let len = n.len();
        let modulus = num_traits::pow(BigInt::from(self.p), len);
        let value = BigInt::from(n.value());
        let (a, b) = self.branches[n.digits()[0] as usize];
        let v = (value * a + b).mod_floor(&modulus) / self.p;
        let v = v.to_biguint().expect("nonnegative");
        DigitWord::from_value(self.p, &v, len - 1)
    }
}

/// Orbit of `N/d` with `d` fixed. Admissible branches keep the reduced
/// denominator a divisor of `d`, so the numerator alone tracks the state and
/// no gcd is needed per step.
pub(crate) struct FixedDenominatorOrbit<'a> {
    f: &'a BranchMap,
    numer: BigInt,
    denom: BigInt,
    denom_inv: u64,
}

impl<'a> FixedDenominatorOrbit<'a> {
    /// Requires the denominator of `r` to be coprime to `p`.
    pub(crate) fn new(f: &'a BranchMap, r: &Rational) -> Result<Self> {
        let p = BigInt::from(f.p);
        let denom_inv = arith::mod_inverse(r.denom(), &p)?.to_u64().expect("residue below p");
        Ok(Self {
            f,
            numer: r.numer().clone(),
            denom: r.denom().clone(),
            denom_inv,
        })
    }

    pub(crate) fn numer(&self) -> &BigInt {
        &self.numer
    }

    /// The state with numerator `numer`, normalized.
    pub(crate) fn value_of(&self, numer: BigInt) -> Rational {
        Rational::new(numer, self.denom.clone())
    }

    pub(crate) fn digit(&self) -> u32 {
        let p = u64::from(self.f.p);
        let n = self.numer.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p");
        (n * self.denom_inv % p) as u32
    }

    /// Advances one step and returns the digit of the state left behind.
    pub(crate) fn step(&mut self) -> u32 {
        let d = self.digit();
        let (a, b) = self.f.branches[d as usize];
        let v = &self.numer * a + &self.denom * b;
        debug_assert!(v.mod_floor(&BigInt::from(self.f.p)).is_zero());
        self.numer = v / self.f.p;
        d
    }
}

impl FromStr for StandardMap {
    type Err = Error;

    /// `collatz`, `shift`, `collatz-original`, `an+b(a,b)` or `an+b:a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "collatz" | "3n+1" => return Ok(StandardMap::Collatz),
            "shift" => return Ok(StandardMap::Shift),
            "collatz-original" | "f0" => return Ok(StandardMap::CollatzOriginal),
            _ => {}
        }
        let args = s
            .strip_prefix("an+b(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("an+b:"))
            .ok_or_else(|| invalid(format!("unknown map preset {s:?}")))?;
        let (a, b) = args
            .split_once(',')
            .ok_or_else(|| invalid(format!("an+b needs two coefficients, got {args:?}")))?;
        let a = a.trim().parse().map_err(|_| invalid(format!("bad coefficient {a:?}")))?;
        let b = b.trim().parse().map_err(|_| invalid(format!("bad coefficient {b:?}")))?;
        Ok(StandardMap::AnPlusB { a, b })
    }
}

impl fmt::Display for BranchMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}:", self.p)?;
        for (i, (a, b)) in self.branches.iter().enumerate() {
            write!(f, " [{i}] ({a}n{b:+})/{}", self.p)?;
        }
        Ok(())
    }
}
