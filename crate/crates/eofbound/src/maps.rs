//! Partial transpose and realignment rearrangements with their trace-norm
//! separability tests.
//!
//! Both maps are pure index permutations of the density-matrix entries
//! under the composite convention |a_i b_k⟩ ↦ i·n + k:
//!
//! * partial transpose (on A): (ρ^{T_A})_{ik,jl} = ρ_{jk,il}, an mn×mn
//!   Hermitian matrix;
//! * realignment: R(ρ)_{ij,kl} = ρ_{ik,jl}, an m²×n² matrix that is
//!   rectangular whenever m ≠ n.
//!
//! A separable state keeps both trace norms at (or below) 1, so either
//! norm exceeding 1 certifies entanglement. The two criteria are
//! independent: each detects states the other misses.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matkernel::{self, ComplexMatrix};
use crate::states::{BipartiteDims, DensityMatrix};

/// Default tolerance for the norm-versus-1 comparisons in
/// [`separability_verdict`]: comfortably above SVD backward error at the
/// matrix sizes this crate targets, far below physical parameter scales.
pub const DEFAULT_VERDICT_TOL: f64 = 1e-8;

/// Outcome of both separability tests on one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparabilityVerdict {
    /// Trace norm of the partial transpose, ≥ 1 − ε for any state.
    pub ppt_norm: f64,
    /// Trace norm of the realigned matrix.
    pub realignment_norm: f64,
    /// Whether the partial transpose is positive (norm ≤ 1 + tol).
    pub is_ppt: bool,
    /// Whether realignment certifies entanglement (norm > 1 + tol).
    pub realignment_detects: bool,
    /// Whether either criterion certifies entanglement.
    pub entangled_certified: bool,
}

/// Partial transpose over subsystem A.
///
/// The output entry at (i·n+k, j·n+l) is the input entry at
/// (j·n+k, i·n+l); the result is Hermitian with unit trace. Transposing
/// over B instead would only globally transpose the result, leaving every
/// singular value — hence the trace norm — unchanged, so no second
/// variant is provided.
pub fn partial_transpose(rho: &DensityMatrix) -> ComplexMatrix {
    let n = rho.dims().dim_b();
    let d = rho.dims().total();
    ComplexMatrix::from_fn(d, d, |r, c| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (c / n, c % n);
        rho.matrix().get(j * n + k, i * n + l)
    })
}

/// Realignment rearrangement: m²×n² output with entry (i·m+j, k·n+l)
/// equal to the input entry (i·n+k, j·n+l).
pub fn realign(rho: &DensityMatrix) -> ComplexMatrix {
    let (m, n) = (rho.dims().dim_a(), rho.dims().dim_b());
    ComplexMatrix::from_fn(m * m, n * n, |r, c| {
        let (i, j) = (r / m, r % m);
        let (k, l) = (c / n, c % n);
        rho.matrix().get(i * n + k, j * n + l)
    })
}

/// Inverse of the realignment rearrangement: maps an m²×n² matrix back to
/// the mn×mn layout. Exact (an index permutation), so
/// `realign_inverse(&realign(ρ), ρ.dims())` reproduces ρ bit for bit.
pub fn realign_inverse(mat: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    let (m, n) = (dims.dim_a(), dims.dim_b());
    if mat.rows() != m * m || mat.cols() != n * n {
        return Err(Error::dims(format!(
            "realigned matrix for dims {m}x{n} must be {}x{}, got {}x{}",
            m * m,
            n * n,
            mat.rows(),
            mat.cols()
        )));
    }
    let d = m * n;
    Ok(ComplexMatrix::from_fn(d, d, |r, c| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (c / n, c % n);
        mat.get(i * m + j, k * n + l)
    }))
}

/// Trace norm of the partial transpose; equals 1 exactly when the state
/// is PPT (up to rounding), larger when negative eigenvalues appear.
pub fn ppt_norm(rho: &DensityMatrix) -> Result<f64> {
    matkernel::trace_norm(&partial_transpose(rho))
}

/// Trace norm of the realigned matrix; exceeds 1 only for entangled
/// states, including some PPT entangled ones.
pub fn realignment_norm(rho: &DensityMatrix) -> Result<f64> {
    matkernel::trace_norm(&realign(rho))
}

/// Runs both separability tests with threshold `1 + tol`.
pub fn separability_verdict(rho: &DensityMatrix, tol: f64) -> Result<SeparabilityVerdict> {
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::param(format!("verdict tolerance {tol} must be > 0")));
    }
    let ppt = ppt_norm(rho)?;
    let realignment = realignment_norm(rho)?;
    let is_ppt = ppt <= 1.0 + tol;
    let realignment_detects = realignment > 1.0 + tol;
    Ok(SeparabilityVerdict {
        ppt_norm: ppt,
        realignment_norm: realignment,
        is_ppt,
        realignment_detects,
        entangled_certified: !is_ppt || realignment_detects,
    })
}
