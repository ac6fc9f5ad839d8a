//! Exact probabilistic argumentation under the constellation approach.
//!
//! A [`Paf`] assigns independent marginals to the arguments and attacks of an
//! argumentation framework; `P-Ext` is the probability that a set is a
//! σ-extension and `P-Acc` that an argument is credulously accepted. The
//! [`oracle`] enumerates subframeworks, [`dp`] solves `P-Ext` over a nice tree
//! decomposition in time exponential only in its width.
//!
//! Solvers are generic over [`Probability`]: use [`Exact`] for rational
//! results and [`Float`] for speed.

pub mod af;
pub mod dp;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod oracle;
pub mod paf;
pub mod preprocess;
pub mod scalar;
pub mod semantics;
#[cfg(any(test, feature = "testkit"))]
pub mod testkit;
pub mod treedecomp;

pub use af::{Af, ArgSet, Subframework};
pub use dp::{p_ext, p_ext_preprocessed, solve_with_trace, Solution, SolveOptions};
pub use error::{Error, Result};
pub use io::{parse_paf, serialize_paf, PafDocument};
pub use oracle::Oracle;
pub use paf::Paf;
pub use scalar::Probability;
pub use semantics::Semantics;

/// Exact rational probabilities.
pub type Exact = num_rational::BigRational;
/// Double-precision probabilities.
pub type Float = f64;

/// A DP solution in exact arithmetic.
pub type ExactSolution = Solution<Exact>;
/// A DP solution in floating point.
pub type FloatSolution = Solution<Float>;
