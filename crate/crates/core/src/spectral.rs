//! Adjacency matrices and walk counts.
//!
//! For `m = p^k` every entry of `A^ℓ` (`ℓ ≥ k`) is `p^(ℓ-k)`: after `k`
//! steps there is exactly one walk between any two vertices.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::graphs::{build_modular_graph, LabeledDigraph};
use crate::limits::{self, MAX_MATRIX_DIMENSION};
use crate::maps::BranchMap;

/// Dense square matrix of nonnegative big integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    dim: usize,
    entries: Vec<BigUint>,
}

impl CountMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dimension(dim as u64)?;
        Ok(Self {
            dim,
            entries: vec![BigUint::zero(); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = BigUint::one();
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(invalid("matrix must be square"));
        }
        check_dimension(dim as u64)?;
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().map(BigUint::from).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.dim + j]
    }

    pub fn row_sums(&self) -> Vec<BigUint> {
        self.entries.chunks(self.dim.max(1)).map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<BigUint> {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// First entry different from `value`, as `(i, j, entry)`.
    pub fn first_entry_not(&self, value: &BigUint) -> Option<(usize, usize, BigUint)> {
        self.entries
            .iter()
            .position(|e| e != value)
            .map(|pos| (pos / self.dim, pos % self.dim, self.entries[pos].clone()))
    }

    pub fn is_constant(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] == w[1])
    }

    /// `self · other`, skipping zero entries on both sides.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(invalid("dimension mismatch in matrix product"));
        }
        let n = self.dim;
        let sparse_rows: Vec<Vec<(usize, &BigUint)>> = other
            .entries
            .chunks(n.max(1))
            .map(|row| row.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        let mut out = vec![BigUint::zero(); n * n];
        for i in 0..n {
            let dst = &mut out[i * n..(i + 1) * n];
            for (l, a) in self.entries[i * n..(i + 1) * n].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for &(j, b) in &sparse_rows[l] {
                    dst[j] += a * b;
                }
            }
        }
        Ok(Self { dim: n, entries: out })
    }
}

fn check_dimension(dim: u64) -> Result<()> {
    if dim > MAX_MATRIX_DIMENSION {
        return Err(Error::ResourceLimit {
            what: "count matrix dimension",
            requested: dim.to_string(),
            cap: MAX_MATRIX_DIMENSION,
        });
    }
    Ok(())
}

/// Entry `(i, j)` is 1 when `i → j` is an edge (labels ignored).
pub fn adjacency_matrix(g: &LabeledDigraph) -> Result<CountMatrix> {
    check_dimension(g.vertex_count())?;
    let n = g.vertex_count() as usize;
    let mut m = CountMatrix::zeros(n)?;
    for (s, t) in g.unlabeled_edges() {
        m.entries[s as usize * n + t as usize] = BigUint::one();
    }
    Ok(m)
}

/// Exact `M^e` by repeated squaring; `M^0` is the identity.
pub fn matrix_power(m: &CountMatrix, e: u32) -> Result<CountMatrix> {
    let mut result = CountMatrix::identity(m.dim)?;
    let mut base = m.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerViolation {
    pub exponent: u32,
    pub row: usize,
    pub column: usize,
    pub entry: BigUint,
    pub expected: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniformPower {
    Holds,
    Violated(PowerViolation),
}

impl UniformPower {
    pub fn holds(&self) -> bool {
        matches!(self, UniformPower::Holds)
    }
}

/// Checks that every entry of `A_k^ℓ` equals `p^(ℓ-k)` for `ℓ` in `k..=l_max`,
/// where `A_k` is the adjacency matrix of `C^(f)(p^k)`.
pub fn check_uniform_power(f: &BranchMap, k: u32, l_max: u32) -> Result<UniformPower> {
    if k == 0 {
        return Err(invalid("dimension k must be at least 1"));
    }
    if l_max < k {
        return Err(invalid(format!("l_max = {l_max} must be at least k = {k}")));
    }
    let m = limits::checked_size("modular graph vertices", u64::from(f.p()), k)?;
    check_dimension(m)?;
    let a = adjacency_matrix(&build_modular_graph(f, m)?)?;
    let mut power = matrix_power(&a, k)?;
    let mut expected = BigUint::one();
    for l in k..=l_max {
        if l > k {
            power = power.mul(&a)?;
            expected *= f.p();
        }
        if let Some((row, column, entry)) = power.first_entry_not(&expected) {
            return Ok(UniformPower::Violated(PowerViolation {
                exponent: l,
                row,
                column,
                entry,
                expected,
            }));
        }
    }
    Ok(UniformPower::Holds)
}
