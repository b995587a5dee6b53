//! Computable entanglement-of-formation lower bounds for bipartite mixed
//! states.
//!
//! The toolkit evaluates the two standard rearrangement trace norms of a
//! density matrix — partial transpose and realignment — and converts the
//! larger of the two into a certified lower bound on the entanglement of
//! formation through a closed-form convex-hull expression. Companion
//! oracles (the exact 2⊗2 concurrence formula and a stochastic convex-roof
//! upper estimator) make the bound checkable from above, and a set of
//! standard state families (isotropic, Werner, bound entangled, random)
//! provides inputs for experiments.
//!
//! # Quick start
//!
//! ```
//! use eofbound::bound::eof_lower_bound;
//! use eofbound::states::make_isotropic;
//!
//! let rho = make_isotropic(3, 0.9).unwrap();
//! let report = eof_lower_bound(&rho).unwrap();
//! assert!(report.bound_bits > 1.0);
//! ```

pub mod bound;
pub mod cli;
pub mod error;
pub mod maps;
pub mod matkernel;
pub mod oracles;
pub mod statefile;
pub mod states;

pub use bound::{eof_lower_bound, eof_lower_bound_2xn, BoundReport, Branch};
pub use error::{Error, Result};
pub use maps::{partial_transpose, ppt_norm, realign, realignment_norm, SeparabilityVerdict};
pub use matkernel::ComplexMatrix;
pub use oracles::{convex_roof_upper_estimate, sandwich, wootters_concurrence, wootters_eof};
pub use states::{BipartiteDims, DensityMatrix, PureState, SchmidtSpectrum};

/// Fixed-seed RNG for unit tests; ChaCha8 so streams are identical on
/// every platform.
#[cfg(test)]
pub(crate) fn test_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
