//! C ABI over the eofbound toolkit.
//!
//! Density matrices live behind the opaque [`EofDensityMatrix`] handle;
//! every function returns an [`EofStatus`] and writes results through out
//! pointers. Complex arrays cross the boundary as interleaved doubles
//! (re, im, re, im, …) in the same row-major i·n+k layout the Rust API
//! uses. The header `include/eofbound.h` is generated at build time.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use eofbound::bound::{self, Branch};
use eofbound::matkernel::ComplexMatrix;
use eofbound::oracles::{self, SandwichParams};
use eofbound::states::{self, BipartiteDims, DensityMatrix, PureState};
use eofbound::Error;
use num_complex::Complex64;

/// Result code of every C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EofStatus {
    /// The call succeeded and outputs are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments were rejected (bad dimensions, parameter range, or state
    /// invariants).
    InvalidArgument = 2,
    /// An internal numeric routine failed to converge (or panicked).
    NumericFailure = 3,
}

/// Which piece of the convex hull produced the bound.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EofBranch {
    /// Λ ≤ 1 + tol: nothing certified, bound 0.
    SeparablePoint = 0,
    /// Bound evaluated on the convex branch R(Λ).
    ConvexBranch = 1,
    /// Bound evaluated on the linear segment past the knee.
    LinearBranch = 2,
}

/// Opaque handle to a validated bipartite density matrix.
pub struct EofDensityMatrix {
    inner: DensityMatrix,
}

/// Lower-bound report; plain-data mirror of the Rust `BoundReport`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EofBoundReport {
    pub m: usize,
    pub n: usize,
    /// Trace norm of the partial transpose.
    pub ppt_norm: f64,
    /// Trace norm of the realigned matrix.
    pub realignment_norm: f64,
    /// Λ = max of the two norms.
    pub lambda: f64,
    /// co[R(Λ)] in bits.
    pub bound_bits: f64,
    /// 1 if the partial transpose is positive within tolerance.
    pub is_ppt: i32,
    /// 1 if the realignment norm certifies entanglement.
    pub realignment_detects: i32,
    pub branch: EofBranch,
}

/// Estimator configuration for [`eof_sandwich`]; zero fields select the
/// library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EofSandwichParams {
    /// Ensemble size; 0 means rank(ρ) + 2.
    pub ensemble_size: usize,
    /// Total refinement iterations; 0 means the library default.
    pub iterations: usize,
    pub seed: u64,
    /// Separability tolerance; values ≤ 0 mean the library default.
    pub tol: f64,
}

/// Lower/upper bracket from [`eof_sandwich`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EofSandwichResult {
    pub lower_bits: f64,
    pub upper_bits: f64,
    pub gap_bits: f64,
    pub ensemble_size: usize,
    pub iterations: usize,
    pub seed: u64,
}

fn status_of(err: &Error) -> EofStatus {
    match err {
        Error::ConvergenceFailure => EofStatus::NumericFailure,
        _ => EofStatus::InvalidArgument,
    }
}

/// Runs a fallible body, translating panics into `NumericFailure`.
fn guarded(body: impl FnOnce() -> EofStatus) -> EofStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(EofStatus::NumericFailure)
}

/// Interleaved doubles → complex vector; `len` counts complex entries.
unsafe fn complex_slice(data: *const f64, len: usize) -> Vec<Complex64> {
    let raw = std::slice::from_raw_parts(data, 2 * len);
    raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

unsafe fn write_handle(out: *mut *mut EofDensityMatrix, rho: DensityMatrix) -> EofStatus {
    *out = Box::into_raw(Box::new(EofDensityMatrix { inner: rho }));
    EofStatus::Ok
}

/// Builds a density-matrix handle from `2·(m·n)²` interleaved doubles in
/// row-major order. On success writes a handle that must be released with
/// [`eof_density_matrix_free`].
///
/// # Safety
/// `data` must point to `2·(m·n)²` readable doubles and `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eof_density_matrix_new(
    m: usize,
    n: usize,
    data: *const f64,
    out: *mut *mut EofDensityMatrix,
) -> EofStatus {
    if data.is_null() || out.is_null() {
        return EofStatus::NullArgument;
    }
    guarded(|| {
        let build = || -> Result<DensityMatrix, Error> {
            let dims = BipartiteDims::new(m, n)?;
            let d = dims.total();
            let entries = complex_slice(data, d * d);
            let matrix = ComplexMatrix::new(d, d, entries)?;
            DensityMatrix::new(dims, matrix)
        };
        match build() {
            Ok(rho) => write_handle(out, rho),
            Err(e) => status_of(&e),
        }
    })
}

/// Builds a density-matrix handle |ψ⟩⟨ψ| from `2·m·n` interleaved
/// amplitude doubles.
///
/// # Safety
/// `data` must point to `2·m·n` readable doubles and `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eof_density_matrix_from_pure(
    m: usize,
    n: usize,
    data: *const f64,
    out: *mut *mut EofDensityMatrix,
) -> EofStatus {
    if data.is_null() || out.is_null() {
        return EofStatus::NullArgument;
    }
    guarded(|| {
        let build = || -> Result<DensityMatrix, Error> {
            let dims = BipartiteDims::new(m, n)?;
            let amps = complex_slice(data, dims.total());
            Ok(DensityMatrix::from_pure(&PureState::new(dims, amps)?))
        };
        match build() {
            Ok(rho) => write_handle(out, rho),
            Err(e) => status_of(&e),
        }
    })
}

/// Isotropic d⊗d state with the given fidelity.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eof_isotropic_state(
    d: usize,
    fidelity: f64,
    out: *mut *mut EofDensityMatrix,
) -> EofStatus {
    if out.is_null() {
        return EofStatus::NullArgument;
    }
    guarded(|| match states::make_isotropic(d, fidelity) {
        Ok(rho) => write_handle(out, rho),
        Err(e) => status_of(&e),
    })
}

/// 2⊗2 Werner state with singlet weight `p`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eof_werner_2x2(p: f64, out: *mut *mut EofDensityMatrix) -> EofStatus {
    if out.is_null() {
        return EofStatus::NullArgument;
    }
    guarded(|| match states::make_werner_2x2(p) {
        Ok(rho) => write_handle(out, rho),
        Err(e) => status_of(&e),
    })
}

/// The 3⊗3 bound-entangled family (PPT yet entangled), 0 < a < 1.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eof_horodecki_3x3_bes(
    a: f64,
    out: *mut *mut EofDensityMatrix,
) -> EofStatus {
    if out.is_null() {
        return EofStatus::NullArgument;
    }
    guarded(|| match states::make_horodecki_3x3_bes(a) {
        Ok(rho) => write_handle(out, rho),
        Err(e) => status_of(&e),
    })
}

/// Releases a handle; null is accepted and ignored.
///
/// # Safety
/// `state` must be a pointer previously returned by a constructor of this
/// library (or null), and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn eof_density_matrix_free(state: *mut EofDensityMatrix) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Subsystem dimensions of a handle.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn eof_density_matrix_dims(
    state: *const EofDensityMatrix,
    m: *mut usize,
    n: *mut usize,
) -> EofStatus {
    if state.is_null() || m.is_null() || n.is_null() {
        return EofStatus::NullArgument;
    }
    let dims = (*state).inner.dims();
    *m = dims.dim_a();
    *n = dims.dim_b();
    EofStatus::Ok
}

/// Full lower-bound pipeline: trace norms, Λ, and co[R(Λ)] in bits.
///
/// # Safety
/// `state` and `report` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn eof_lower_bound(
    state: *const EofDensityMatrix,
    report: *mut EofBoundReport,
) -> EofStatus {
    if state.is_null() || report.is_null() {
        return EofStatus::NullArgument;
    }
    guarded(|| match bound::eof_lower_bound(&(*state).inner) {
        Ok(rep) => {
            *report = EofBoundReport {
                m: rep.dims.dim_a(),
                n: rep.dims.dim_b(),
                ppt_norm: rep.ppt_norm,
                realignment_norm: rep.realignment_norm,
                lambda: rep.lambda_cap,
                bound_bits: rep.bound_bits,
                is_ppt: rep.verdict.is_ppt as i32,
                realignment_detects: rep.verdict.realignment_detects as i32,
                branch: match rep.branch {
                    Branch::SeparablePoint => EofBranch::SeparablePoint,
                    Branch::ConvexBranch => EofBranch::ConvexBranch,
                    Branch::LinearBranch => EofBranch::LinearBranch,
                },
            };
            EofStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Exact two-qubit EOF (bits); the handle must hold a 2⊗2 state.
///
/// # Safety
/// `state` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn eof_wootters_eof(
    state: *const EofDensityMatrix,
    out: *mut f64,
) -> EofStatus {
    if state.is_null() || out.is_null() {
        return EofStatus::NullArgument;
    }
    guarded(|| match oracles::wootters_eof(&(*state).inner) {
        Ok(v) => {
            *out = v;
            EofStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// The convex hull co[R(λ)] in bits for 1 ≤ λ ≤ m.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eof_co_r(lambda: f64, m: usize, out: *mut f64) -> EofStatus {
    if out.is_null() {
        return EofStatus::NullArgument;
    }
    guarded(|| match bound::co_r(lambda, m) {
        Ok(v) => {
            *out = v;
            EofStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Lower bound plus convex-roof upper estimate.
///
/// # Safety
/// `state` and `result` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn eof_sandwich(
    state: *const EofDensityMatrix,
    params: EofSandwichParams,
    result: *mut EofSandwichResult,
) -> EofStatus {
    if state.is_null() || result.is_null() {
        return EofStatus::NullArgument;
    }
    guarded(|| {
        let defaults = SandwichParams::default();
        let rust_params = SandwichParams {
            ensemble_size: if params.ensemble_size == 0 {
                None
            } else {
                Some(params.ensemble_size)
            },
            iterations: if params.iterations == 0 {
                defaults.iterations
            } else {
                params.iterations
            },
            seed: params.seed,
            tol: if params.tol > 0.0 { params.tol } else { defaults.tol },
        };
        match oracles::sandwich(&(*state).inner, &rust_params) {
            Ok(res) => {
                *result = EofSandwichResult {
                    lower_bits: res.lower_bits,
                    upper_bits: res.upper_bits,
                    gap_bits: res.gap_bits,
                    ensemble_size: res.ensemble_size,
                    iterations: res.iterations,
                    seed: res.seed,
                };
                EofStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static description of a status code; never null.
#[no_mangle]
pub extern "C" fn eof_status_message(status: EofStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        EofStatus::Ok => b"ok\0",
        EofStatus::NullArgument => b"a required pointer argument was null\0",
        EofStatus::InvalidArgument => b"arguments rejected: bad dimensions, parameter range, or state invariants\0",
        EofStatus::NumericFailure => b"internal numeric routine failed\0",
    };
    msg.as_ptr().cast()
}
