//! Modular Collatz graphs, p-ary De Bruijn graphs and the conjugacy maps
//! between them.
//!
//! A [`BranchMap`] `f` acts on the integers (and on rationals with
//! denominator coprime to `p`) by `f(n) = (a_i n + b_i) / p` for
//! `n ≡ i (mod p)`. Reducing modulo `p^k` yields the graph `C^(f)(p,k)`,
//! which is isomorphic to the De Bruijn graph `B(p,k)` through the
//! digit-sequence map `Φ(n) = Σ x_i(n) p^i`, `x_i(n) = f^i(n) mod p`.
//!
//! Everything is exact: big integers and normalized rationals, no floating point.
//!
//! ```
//! use collatz_debruijn::{conjugacy_permutation, phi_exact, rational, BranchMap};
//!
//! let t = BranchMap::collatz();
//! let phi = conjugacy_permutation(&t, 4)?;
//! assert_eq!(phi.to_string(), "(1,5)(2,10)(9,13)");
//!
//! let value = phi_exact(&t, &rational(5, 1), 1000)?;
//! assert_eq!(value.value(), Some(&rational(-13, 3)));
//! # Ok::<(), collatz_debruijn::Error>(())
//! ```

pub mod arith;
pub mod conjugacy;
pub mod cycles;
pub mod digits;
pub mod error;
pub mod graphs;
pub mod limits;
pub mod maps;
pub mod spectral;
pub mod words;

pub use arith::{
    mod_inverse, padic_digits, padic_expansion, padic_residue, parse_rational, rational, rational_from_periodic,
    EventuallyPeriodicDigits, Rational,
};
pub use conjugacy::{
    conjugacy_permutation, conjugacy_permutation_ordered, permutation_order, phi_exact, phi_inverse_truncated,
    phi_truncated, verify_conjugacy, DigitOrder, PermutationReport, PhiExact, DEFAULT_MAX_STEPS,
};
pub use cycles::{
    b_of_lyndon_word, b_of_word, classify_orbit, cycle_from_word, enumerate_cycles_for_b, rational_cycle, CycleReport,
    OrbitClass, RationalCycle,
};
pub use digits::DigitWord;
pub use error::{Error, Result};
pub use graphs::{
    build_debruijn_graph, build_modular_graph, check_isomorphism, line_graph, restrict_collatz_graph, transpose,
    Edge, LabeledDigraph, Permutation,
};
pub use maps::{BranchMap, StandardMap};
pub use spectral::{adjacency_matrix, check_uniform_power, matrix_power, CountMatrix, PowerViolation, UniformPower};
pub use words::{fkm_sequence, lyndon_words, mobius, necklace_count, verify_debruijn_sequence, LengthMode, LyndonWord};
