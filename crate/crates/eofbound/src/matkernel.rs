//! Dense complex-matrix primitives.
//!
//! Storage is row-major `Vec<Complex64>`. Eigen- and singular-value
//! decompositions are delegated to `nalgebra`; only the *values* are part of
//! the public surface. Eigenvectors of degenerate spectra carry a gauge
//! ambiguity, so nothing here exposes them.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Max-entry deviation from `M == M†` accepted before symmetrization.
/// Inputs arrive from file I/O with rounding, so exact Hermiticity cannot
/// be demanded.
pub const HERMITICITY_TOL: f64 = 1e-9;

/// Iteration cap handed to the nalgebra decompositions.
const MAX_DECOMP_ITERS: usize = 100_000;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting size mismatches and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dims(format!("matrix dimensions {rows}x{cols} must be positive")));
        }
        if entries.len() != rows * cols {
            return Err(Error::dims(format!(
                "{} entries provided for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(z) = entries.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invariant(
                format!("all entries finite, found {z}"),
                f64::INFINITY,
            ));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Builds a matrix entry by entry. The closure must return finite values.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose M†.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Plain transpose Mᵀ (no conjugation).
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-entry deviation from Hermiticity, `max |M_ij - conj(M_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Hermitian part (M + M†)/2.
    pub fn symmetrize(&self) -> Self {
        debug_assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        Self::from_fn(self.rows * p, self.cols * q, |i, j| {
            self.get(i / p, j / q) * other.get(i % p, j % q)
        })
    }

    pub(crate) fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// The input may deviate from exact Hermiticity by at most
/// [`HERMITICITY_TOL`] per entry; it is symmetrized to (M + M†)/2 before the
/// decomposition.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen_pairs(m)?.0)
}

/// Eigenvalues (descending) together with the matching eigenvector columns.
/// Crate-internal: vector gauge is unspecified.
pub(crate) fn hermitian_eigen_pairs(m: &ComplexMatrix) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: HERMITICITY_TOL,
        });
    }
    let sym = m.symmetrize().to_na();
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, MAX_DECOMP_ITERS)
        .ok_or(Error::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.rows, m.rows, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Singular values, sorted descending. Defined for any rectangular matrix.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let svd = m
        .to_na()
        .try_svd(false, false, f64::EPSILON, MAX_DECOMP_ITERS)
        .ok_or(Error::ConvergenceFailure)?;
    // try_svd sorts descending already; keep the sort as a guarantee.
    let mut values: Vec<f64> = svd.singular_values.iter().cloned().collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(values)
}

/// Trace norm ‖G‖ = Tr√(GG†), i.e. the sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Matrix of iid standard complex Gaussians (re and im each N(0, 1/2)).
pub fn random_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal) * scale,
            rng.sample::<f64, _>(StandardNormal) * scale,
        )
    })
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix,
/// with the usual R-diagonal phase fix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(dim, dim, rng).expect("square isometry")
}

/// Random isometry with `rows >= cols` orthonormal columns.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if rows < cols {
        return Err(Error::param(format!(
            "isometry needs rows >= cols, got {rows}x{cols}"
        )));
    }
    orthonormalize_columns(&random_gaussian_matrix(rows, cols, rng))
}

/// Orthonormalizes the columns of a tall matrix via QR, multiplying each Q
/// column by the phase of the matching R diagonal. On Gaussian input the
/// result is Haar-distributed rather than QR-convention dependent; on a
/// perturbed isometry it projects back onto the isometry manifold.
pub(crate) fn orthonormalize_columns(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows < m.cols {
        return Err(Error::param(format!(
            "orthonormalization needs rows >= cols, got {}x{}",
            m.rows, m.cols
        )));
    }
    let qr = m.to_na().qr();
    let q = qr.q();
    let r = qr.r();
    Ok(ComplexMatrix::from_fn(m.rows, m.cols, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::ONE };
        q[(i, j)] * phase
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn new_rejects_bad_sizes_and_nonfinite() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![Complex64::ZERO; 3]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![c(f64::NAN, 0.0), Complex64::ZERO]),
            Err(Error::InvariantViolation { .. })
        ));
        assert!(ComplexMatrix::new(2, 2, vec![Complex64::ZERO; 4]).is_ok());
    }

    #[test]
    fn eigenvalues_of_identity() {
        let eig = hermitian_eigenvalues(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(eig, vec![1.0, 1.0]);
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(if i == 0 { 0.7 } else { 0.3 }, 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let eig = hermitian_eigenvalues(&m).unwrap();
        assert!((eig[0] - 0.7).abs() < 1e-14 && (eig[1] - 0.3).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_maximally_mixed_qubit() {
        // reduced state of a Bell pair
        let m = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        let eig = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(eig, vec![0.5, 0.5]);
    }

    #[test]
    fn eigenvalues_reject_non_square_and_non_hermitian() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigenvalues(&rect), Err(Error::NonSquare { .. })));

        let mut skew = ComplexMatrix::zeros(2, 2);
        skew.set(0, 1, c(1.0, 0.0));
        assert!(matches!(
            hermitian_eigenvalues(&skew),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let mut rng = crate::test_rng(11);
        let g = random_gaussian_matrix(6, 6, &mut rng);
        let h = g.symmetrize();
        let eig = hermitian_eigenvalues(&h).unwrap();
        assert!((eig.iter().sum::<f64>() - h.trace().re).abs() < 1e-12);
    }

    #[test]
    fn singular_values_identity_and_zero() {
        assert_eq!(singular_values(&ComplexMatrix::identity(3)).unwrap(), vec![1.0; 3]);
        let sv = singular_values(&ComplexMatrix::zeros(2, 4)).unwrap();
        assert_eq!(sv, vec![0.0, 0.0]);
    }

    #[test]
    fn singular_values_of_rank_one() {
        let mut rng = crate::test_rng(5);
        let u = random_isometry(5, 1, &mut rng).unwrap();
        let v = random_isometry(7, 1, &mut rng).unwrap();
        let m = &u * &v.adjoint();
        let sv = singular_values(&m).unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-12);
        assert!(sv[1..].iter().all(|&s| s < 1e-12));
    }

    #[test]
    fn singular_values_square_to_gram_eigenvalues() {
        let mut rng = crate::test_rng(9);
        let m = random_gaussian_matrix(4, 6, &mut rng);
        let gram = &m.adjoint() * &m;
        let mut gram_eig = hermitian_eigenvalues(&gram).unwrap();
        gram_eig.truncate(4);
        let sv = singular_values(&m).unwrap();
        for (s, g) in sv.iter().zip(&gram_eig) {
            assert!((s * s - g).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_norm_of_signed_diagonal() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(if i == 0 { 0.5 } else { -0.5 }, 0.0)
            } else {
                Complex64::ZERO
            }
        });
        assert!((trace_norm(&m).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_invariant_under_unitaries() {
        let mut rng = crate::test_rng(21);
        for _ in 0..20 {
            let m = random_gaussian_matrix(5, 5, &mut rng);
            let u = random_unitary(5, &mut rng);
            let v = random_unitary(5, &mut rng);
            let rotated = &(&u * &m) * &v;
            let a = trace_norm(&m).unwrap();
            let b = trace_norm(&rotated).unwrap();
            assert!((a - b).abs() <= 1e-9, "|{a} - {b}| > 1e-9");
        }
    }

    #[test]
    fn trace_norm_dominates_trace() {
        let mut rng = crate::test_rng(31);
        for _ in 0..20 {
            let m = random_gaussian_matrix(4, 4, &mut rng);
            assert!(trace_norm(&m).unwrap() >= m.trace().norm() - 1e-10);
        }
    }

    #[test]
    fn hermitian_eigenvalues_match_singular_values_in_magnitude() {
        let mut rng = crate::test_rng(41);
        for _ in 0..20 {
            let h = random_gaussian_matrix(5, 5, &mut rng).symmetrize();
            let mut abs_eig: Vec<f64> = hermitian_eigenvalues(&h).unwrap().iter().map(|e| e.abs()).collect();
            abs_eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let sv = singular_values(&h).unwrap();
            for (a, s) in abs_eig.iter().zip(&sv) {
                assert!((a - s).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn isometry_columns_are_orthonormal() {
        let mut rng = crate::test_rng(77);
        let w = random_isometry(6, 3, &mut rng).unwrap();
        let gram = &w.adjoint() * &w;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(matches!(random_isometry(2, 3, &mut rng), Err(Error::ParameterOutOfRange(_))));
    }

    #[test]
    fn kron_matches_block_structure() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c((i * 2 + j) as f64, 0.0));
        let b = ComplexMatrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k.get(0, 0), a.get(0, 0));
        assert_eq!(k.get(1, 1), a.get(0, 0));
        assert_eq!(k.get(2, 3), Complex64::ZERO);
        assert_eq!(k.get(3, 1), a.get(1, 0));
    }
}
