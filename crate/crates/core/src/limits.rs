//! Process-wide size caps for the graph, permutation and sequence builders.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default cap on the number of vertices (or sequence length) a builder may allocate.
pub const DEFAULT_MAX_VERTICES: u64 = 1 << 26;

/// Largest dimension accepted for dense count matrices.
pub const MAX_MATRIX_DIMENSION: u64 = 4096;

/// Environment variable the CLI reads to override [`DEFAULT_MAX_VERTICES`].
pub const MAX_VERTICES_ENV: &str = "COLLATZ_DB_MAX_VERTICES";

static MAX_VERTICES: AtomicU64 = AtomicU64::new(DEFAULT_MAX_VERTICES);

pub fn max_vertices() -> u64 {
    MAX_VERTICES.load(Ordering::Relaxed)
}

pub fn set_max_vertices(cap: u64) {
    MAX_VERTICES.store(cap, Ordering::Relaxed);
}

/// Returns `base^exp` if it fits under the current vertex cap.
pub fn checked_size(what: &'static str, base: u64, exp: u32) -> Result<u64> {
    let cap = max_vertices();
    match base.checked_pow(exp) {
        Some(n) if n <= cap => Ok(n),
        Some(n) => Err(Error::ResourceLimit {
            what,
            requested: n.to_string(),
            cap,
        }),
        None => Err(Error::ResourceLimit {
            what,
            requested: format!("{base}^{exp}"),
            cap,
        }),
    }
}

pub(crate) fn check_count(what: &'static str, n: u64) -> Result<()> {
    let cap = max_vertices();
    if n > cap {
        return Err(Error::ResourceLimit {
            what,
            requested: n.to_string(),
            cap,
        });
    }
    Ok(())
}
