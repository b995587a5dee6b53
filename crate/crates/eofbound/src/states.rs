//! Bipartite state types, Schmidt decomposition and state-family generators.
//!
//! The composite basis is ordered |a_i b_k⟩ ↦ row i·n + k throughout; the
//! partial transpose and realignment index rules in [`crate::maps`] and the
//! file format both assume it.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matkernel::{self, ComplexMatrix};

/// Accepted deviation of a density matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-9;
/// Most negative eigenvalue accepted as "positive semidefinite".
pub const PSD_TOL: f64 = 1e-9;
/// Accepted deviation of a pure-state norm from 1.
pub const NORM_TOL: f64 = 1e-12;
/// Accepted deviation of a Schmidt spectrum sum from 1.
pub const SPECTRUM_SUM_TOL: f64 = 1e-10;

/// Subsystem dimensions (m, n) of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct BipartiteDims {
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteDims {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::param(format!(
                "subsystem dimensions must be >= 1, got {dim_a}x{dim_b}"
            )));
        }
        Ok(Self { dim_a, dim_b })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Total Hilbert-space dimension m·n.
    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// Effective Schmidt rank bound min(m, n).
    pub fn m_eff(&self) -> usize {
        self.dim_a.min(self.dim_b)
    }
}

/// Mixed bipartite state: Hermitian, unit-trace, positive-semidefinite
/// (mn)×(mn) matrix with dimension labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: BipartiteDims,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates all invariants and stores the Hermitian part of `matrix`.
    pub fn new(dims: BipartiteDims, matrix: ComplexMatrix) -> Result<Self> {
        let d = dims.total();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::dims(format!(
                "{}x{} matrix does not fit dims {}x{} (need {d}x{d})",
                matrix.rows(),
                matrix.cols(),
                dims.dim_a,
                dims.dim_b
            )));
        }
        let herm_dev = matrix.hermiticity_deviation();
        if herm_dev > matkernel::HERMITICITY_TOL {
            return Err(Error::invariant("density matrix Hermitian", herm_dev));
        }
        let matrix = matrix.symmetrize();
        let trace_dev = (matrix.trace().re - 1.0).abs();
        if trace_dev > TRACE_TOL {
            return Err(Error::invariant("density matrix trace = 1", trace_dev));
        }
        let eig = matkernel::hermitian_eigenvalues(&matrix)?;
        let min_eig = eig.last().copied().unwrap_or(0.0);
        if min_eig < -PSD_TOL {
            return Err(Error::invariant(
                "density matrix positive semidefinite",
                min_eig.abs(),
            ));
        }
        Ok(Self { dims, matrix })
    }

    /// Projector |ψ⟩⟨ψ| of a pure state.
    pub fn from_pure(psi: &PureState) -> Self {
        let amps = &psi.amplitudes;
        let matrix = ComplexMatrix::from_fn(amps.len(), amps.len(), |i, j| amps[i] * amps[j].conj());
        Self {
            dims: psi.dims,
            matrix,
        }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Entry ρ_{ik,jl} in the composite index convention.
    pub fn entry(&self, i: usize, k: usize, j: usize, l: usize) -> Complex64 {
        let n = self.dims.dim_b;
        self.matrix.get(i * n + k, j * n + l)
    }
}

/// Normalized pure state on the m·n product space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: BipartiteDims,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: BipartiteDims, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::dims(format!(
                "{} amplitudes for dims {}x{}",
                amplitudes.len(),
                dims.dim_a,
                dims.dim_b
            )));
        }
        if let Some(z) = amplitudes.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invariant(format!("amplitudes finite, found {z}"), f64::INFINITY));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invariant("pure state unit norm", (norm - 1.0).abs()));
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitudes reshaped to the m×n coefficient matrix A with A_{ik} = ⟨a_i b_k|ψ⟩.
    pub fn amplitude_matrix(&self) -> ComplexMatrix {
        let n = self.dims.dim_b;
        ComplexMatrix::from_fn(self.dims.dim_a, n, |i, k| self.amplitudes[i * n + k])
    }
}

/// Schmidt spectrum μ: nonincreasing probabilities summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    mu: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Sorts the values nonincreasing and validates positivity and
    /// normalization. Roundoff negatives down to -1e-12 are clamped to zero.
    pub fn new(mut mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::param("Schmidt spectrum must be nonempty"));
        }
        for v in &mut mu {
            if !v.is_finite() || *v < -1e-12 {
                return Err(Error::invariant("Schmidt coefficients nonnegative", v.min(0.0).abs()));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        mu.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::invariant("Schmidt spectrum sums to 1", (sum - 1.0).abs()));
        }
        Ok(Self { mu })
    }

    pub fn values(&self) -> &[f64] {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// Shannon entropy H(μ) in bits, with 0·log 0 := 0.
    pub fn shannon_entropy_bits(&self) -> f64 {
        -self
            .mu
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.log2())
            .sum::<f64>()
    }

    /// (Σ√μ)², the common value of both rearrangement trace norms on the
    /// pure state with this spectrum. Ranges over [1, m_eff].
    pub fn lambda(&self) -> f64 {
        let s: f64 = self.mu.iter().map(|&p| p.sqrt()).sum();
        s * s
    }
}

/// Schmidt spectrum of a pure state via SVD of the reshaped amplitude
/// matrix (singular values squared), length min(m, n).
pub fn schmidt_spectrum(psi: &PureState) -> Result<SchmidtSpectrum> {
    let sv = matkernel::singular_values(&psi.amplitude_matrix())?;
    SchmidtSpectrum::new(sv.iter().map(|s| s * s).collect())
}

/// Partial trace over subsystem B: (ρ_A)_{ij} = Σ_k ρ_{ik,jk}.
pub fn reduced_density_a(rho: &DensityMatrix) -> ComplexMatrix {
    let (m, n) = (rho.dims.dim_a, rho.dims.dim_b);
    ComplexMatrix::from_fn(m, m, |i, j| (0..n).map(|k| rho.entry(i, k, j, k)).sum())
}

/// Partial trace over subsystem A: (ρ_B)_{kl} = Σ_i ρ_{ik,il}.
pub fn reduced_density_b(rho: &DensityMatrix) -> ComplexMatrix {
    let (m, n) = (rho.dims.dim_a, rho.dims.dim_b);
    ComplexMatrix::from_fn(n, n, |k, l| (0..m).map(|i| rho.entry(i, k, i, l)).sum())
}

/// Entropy of entanglement E(|ψ⟩) = H(μ) in bits.
pub fn entropy_of_entanglement(psi: &PureState) -> Result<f64> {
    Ok(schmidt_spectrum(psi)?.shannon_entropy_bits())
}

/// Isotropic state ρ_F = (1-F)/(d²-1)·(I - |Ψ⁺⟩⟨Ψ⁺|) + F·|Ψ⁺⟩⟨Ψ⁺| with
/// |Ψ⁺⟩ = √(1/d) Σ|ii⟩ and fidelity ⟨Ψ⁺|ρ_F|Ψ⁺⟩ = F.
pub fn make_isotropic(d: usize, fidelity: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::param(format!("isotropic dimension d={d} must be >= 2")));
    }
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::param(format!("isotropic fidelity F={fidelity} outside [0, 1]")));
    }
    let dims = BipartiteDims::new(d, d)?;
    let psi_plus = maximally_entangled_amplitudes(d, d);
    let dd = d * d;
    let off = (1.0 - fidelity) / (dd as f64 - 1.0);
    let matrix = ComplexMatrix::from_fn(dd, dd, |r, c| {
        let proj = psi_plus[r] * psi_plus[c].conj();
        let ident = if r == c { Complex64::ONE } else { Complex64::ZERO };
        (ident - proj) * off + proj * fidelity
    });
    DensityMatrix::new(dims, matrix)
}

/// 2⊗2 Werner state p·|Ψ⁻⟩⟨Ψ⁻| + (1-p)·I/4 with the singlet
/// |Ψ⁻⟩ = (|01⟩ - |10⟩)/√2.
pub fn make_werner_2x2(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("Werner mixing p={p} outside [0, 1]")));
    }
    let dims = BipartiteDims::new(2, 2)?;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = [
        Complex64::ZERO,
        Complex64::new(inv_sqrt2, 0.0),
        Complex64::new(-inv_sqrt2, 0.0),
        Complex64::ZERO,
    ];
    let matrix = ComplexMatrix::from_fn(4, 4, |r, c| {
        let proj = singlet[r] * singlet[c].conj();
        let ident = if r == c { Complex64::new(0.25, 0.0) } else { Complex64::ZERO };
        proj * p + ident * (1.0 - p)
    });
    DensityMatrix::new(dims, matrix)
}

fn maximally_entangled_amplitudes(m: usize, n: usize) -> Vec<Complex64> {
    let amp = Complex64::new(1.0 / (m as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::ZERO; m * n];
    for i in 0..m {
        amps[i * n + i] = amp;
    }
    amps
}

/// Maximally entangled pure state Σ|ii⟩/√m on m⊗n, Schmidt spectrum
/// (1/m, …, 1/m).
pub fn make_maximally_entangled(m: usize, n: usize) -> Result<PureState> {
    if m < 2 || n < m {
        return Err(Error::param(format!(
            "maximally entangled state needs 2 <= m <= n, got m={m}, n={n}"
        )));
    }
    PureState::new(BipartiteDims::new(m, n)?, maximally_entangled_amplitudes(m, n))
}

/// Seeded generator used by every random state family (ChaCha8 keyed with
/// the 64-bit seed).
pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-like random pure state: normalized vector of iid standard complex
/// Gaussians. Deterministic for a fixed seed.
pub fn random_pure_state(dims: BipartiteDims, seed: u64) -> PureState {
    let mut rng = seeded_rng(seed);
    loop {
        let g = matkernel::random_gaussian_matrix(dims.total(), 1, &mut rng);
        let norm = g.frobenius_norm();
        if norm > 1e-6 {
            let amplitudes = g.entries().iter().map(|z| z / norm).collect();
            return PureState { dims, amplitudes };
        }
        // astronomically unlikely; resample deterministically
    }
}

/// Random density matrix G·G†/Tr(G·G†) with G an (mn)×rank standard complex
/// Gaussian matrix. Deterministic for a fixed seed.
pub fn random_density_matrix(dims: BipartiteDims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let d = dims.total();
    if rank < 1 || rank > d {
        return Err(Error::param(format!(
            "rank {rank} outside [1, {d}] for dims {}x{}",
            dims.dim_a, dims.dim_b
        )));
    }
    let mut rng = seeded_rng(seed);
    let g = matkernel::random_gaussian_matrix(d, rank, &mut rng);
    let gg = &g * &g.adjoint();
    let trace = gg.trace().re;
    let matrix = gg.scale(Complex64::new(1.0 / trace, 0.0));
    DensityMatrix::new(dims, matrix)
}

/// Random product pure state |α⟩⊗|β⟩ with Haar-like factors. Deterministic
/// for a fixed seed.
pub fn random_product_state(dims: BipartiteDims, seed: u64) -> PureState {
    let mut rng = seeded_rng(seed);
    let sample = |dim: usize, rng: &mut ChaCha8Rng| loop {
        let g = matkernel::random_gaussian_matrix(dim, 1, rng);
        let norm = g.frobenius_norm();
        if norm > 1e-6 {
            return g.scale(Complex64::new(1.0 / norm, 0.0));
        }
    };
    let alpha = sample(dims.dim_a, &mut rng);
    let beta = sample(dims.dim_b, &mut rng);
    let n = dims.dim_b;
    let amplitudes = (0..dims.total())
        .map(|idx| alpha.get(idx / n, 0) * beta.get(idx % n, 0))
        .collect();
    PureState { dims, amplitudes }
}

/// The one-parameter 3⊗3 bound-entangled family: PPT for every a in (0, 1)
/// yet entangled, which makes it the standard stress case for the
/// realignment test.
pub fn make_horodecki_3x3_bes(a: f64) -> Result<DensityMatrix> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::param(format!("bound-entangled parameter a={a} outside (0, 1)")));
    }
    let dims = BipartiteDims::new(3, 3)?;
    let norm = 1.0 / (8.0 * a + 1.0);
    let c = (1.0 + a) / 2.0;
    let s = (1.0 - a * a).sqrt() / 2.0;
    #[rustfmt::skip]
    let rows: [[f64; 9]; 9] = [
        [a,   0.0, 0.0,  0.0, a,   0.0,  0.0, 0.0, a  ],
        [0.0, a,   0.0,  0.0, 0.0, 0.0,  0.0, 0.0, 0.0],
        [0.0, 0.0, a,    0.0, 0.0, 0.0,  0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0,  a,   0.0, 0.0,  0.0, 0.0, 0.0],
        [a,   0.0, 0.0,  0.0, a,   0.0,  0.0, 0.0, a  ],
        [0.0, 0.0, 0.0,  0.0, 0.0, a,    0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0,  0.0, 0.0, 0.0,  c,   0.0, s  ],
        [0.0, 0.0, 0.0,  0.0, 0.0, 0.0,  0.0, a,   0.0],
        [a,   0.0, 0.0,  0.0, a,   0.0,  s,   0.0, c  ],
    ];
    let matrix = ComplexMatrix::from_fn(9, 9, |i, j| Complex64::new(rows[i][j] * norm, 0.0));
    DensityMatrix::new(dims, matrix)
}
