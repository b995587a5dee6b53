//! The entanglement-of-formation lower bound: γ(λ), R(λ), the convex hull
//! co[R(λ)], and the full pipeline from a density matrix to a certified
//! bound in bits.
//!
//! The chain is: compute Λ = max(‖ρ^{T_A}‖, ‖R(ρ)‖); over pure states of
//! fixed λ = (Σ√μ)², the minimal entropy of entanglement is
//! R(λ) = H₂(γ(λ)) + (1 − γ(λ)) log₂(m−1) with
//! γ(λ) = (1/m²)[√λ + √((m−1)(m−λ))]²; and the convex hull of R evaluated
//! at Λ lower-bounds the EOF of the mixed state. co[R] is piecewise: R
//! itself while R is convex, then a straight line to (m, log₂ m) past the
//! knee λ* = 4(m−1)/m.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{self, SeparabilityVerdict, DEFAULT_VERDICT_TOL};
use crate::states::{BipartiteDims, DensityMatrix, SchmidtSpectrum};

/// Slack accepted when clamping λ onto [1, m]; pure index arithmetic and
/// SVD rounding never exceed this for valid inputs.
const LAMBDA_SLACK: f64 = 1e-12;
/// Λ above m_eff by more than this is treated as a corrupted input state
/// rather than as roundoff.
const LAMBDA_EXCESS_TOL: f64 = 1e-6;

/// Which piece of co[R] produced the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Λ ≤ 1 + tol: no entanglement certified, bound 0.
    SeparablePoint,
    /// Λ at or below the knee 4(m−1)/m: bound is R(Λ) itself.
    ConvexBranch,
    /// Λ past the knee (m ≥ 3 only): bound is on the straight segment to
    /// (m, log₂ m).
    LinearBranch,
}

impl Branch {
    /// Stable lower-case name used in CSV output.
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::SeparablePoint => "separable_point",
            Branch::ConvexBranch => "convex_branch",
            Branch::LinearBranch => "linear_branch",
        }
    }
}

/// Everything the pipeline measured about one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub dims: BipartiteDims,
    /// Trace norm of the partial transpose.
    pub ppt_norm: f64,
    /// Trace norm of the realigned matrix.
    pub realignment_norm: f64,
    /// Λ = max of the two norms, as measured (clamping happens only when
    /// feeding co[R], so this field stays faithful to the raw norms).
    pub lambda_cap: f64,
    /// co[R(Λ)] in bits: the certified EOF lower bound.
    pub bound_bits: f64,
    pub verdict: SeparabilityVerdict,
    pub branch: Branch,
}

/// Binary entropy H₂(x) = −x log₂ x − (1−x) log₂(1−x) in bits, with the
/// endpoint convention H₂(0) = H₂(1) = 0.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param(format!("binary entropy argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Shannon entropy of a Schmidt spectrum in bits (0·log 0 := 0).
pub fn shannon_entropy(mu: &SchmidtSpectrum) -> f64 {
    mu.shannon_entropy_bits()
}

/// Validates m ≥ 2 and clamps λ onto [1, m], allowing `LAMBDA_SLACK` of
/// roundoff on either side.
fn checked_lambda(lambda: f64, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::param(format!("subsystem dimension m={m} must be >= 2")));
    }
    let m_f = m as f64;
    if !lambda.is_finite() || lambda < 1.0 - LAMBDA_SLACK || lambda > m_f + LAMBDA_SLACK {
        return Err(Error::param(format!("lambda {lambda} outside [1, {m}]")));
    }
    Ok(lambda.clamp(1.0, m_f))
}

/// γ(λ) = (1/m²)[√λ + √((m−1)(m−λ))]², the largest Schmidt coefficient of
/// the entropy-minimizing spectrum at fixed λ. Decreases from γ(1) = 1 to
/// γ(m) = 1/m.
pub fn gamma(lambda: f64, m: usize) -> Result<f64> {
    let lambda = checked_lambda(lambda, m)?;
    let m_f = m as f64;
    let s = lambda.sqrt() + ((m_f - 1.0) * (m_f - lambda)).sqrt();
    // the formula lands in [1/m, 1] exactly; clamp away one-ulp excursions
    Ok((s * s / (m_f * m_f)).clamp(1.0 / m_f, 1.0))
}

/// R(λ) = H₂(γ(λ)) + (1 − γ(λ)) log₂(m−1): the minimal entropy of
/// entanglement among pure states with (Σ√μ)² = λ on an m⊗n system.
/// Rises from R(1) = 0 to R(m) = log₂ m.
pub fn r_of_lambda(lambda: f64, m: usize) -> Result<f64> {
    let g = gamma(lambda, m)?;
    Ok(binary_entropy(g)? + (1.0 - g) * ((m as f64) - 1.0).log2())
}

/// The knee λ* = 4(m−1)/m where R stops being convex; for m = 2 it
/// coincides with the right endpoint λ = 2.
fn knee(m: usize) -> f64 {
    4.0 * ((m as f64) - 1.0) / (m as f64)
}

/// co[R(λ)]: the convex hull of R. Equals R on [1, 4(m−1)/m] and the
/// straight segment through (m, log₂ m) with slope log₂(m−1)/(m−2)
/// beyond the knee. For m = 2 the knee is the right endpoint, so the
/// convex branch covers everything and the 0/0 slope expression is never
/// formed.
pub fn co_r(lambda: f64, m: usize) -> Result<f64> {
    let lambda = checked_lambda(lambda, m)?;
    let m_f = m as f64;
    if m == 2 || lambda <= knee(m) {
        r_of_lambda(lambda, m)
    } else {
        Ok((m_f - 1.0).log2() / (m_f - 2.0) * (lambda - m_f) + m_f.log2())
    }
}

/// Λ = max(‖ρ^{T_A}‖, ‖R(ρ)‖) as measured, after checking it does not
/// exceed the Schmidt-rank ceiling m_eff = min(m, n). Values below 1 (a
/// separable state plus rounding) are reported as measured; the clamp to
/// the domain of co[R] happens in [`eof_lower_bound`].
pub fn lambda_cap(rho: &DensityMatrix) -> Result<f64> {
    let lambda = maps::ppt_norm(rho)?.max(maps::realignment_norm(rho)?);
    let m_eff = rho.dims().m_eff() as f64;
    if lambda > m_eff + LAMBDA_EXCESS_TOL {
        return Err(Error::LambdaExceedsSchmidtRank {
            lambda,
            m_eff: rho.dims().m_eff(),
        });
    }
    Ok(lambda)
}

/// Full pipeline with the default separability tolerance.
pub fn eof_lower_bound(rho: &DensityMatrix) -> Result<BoundReport> {
    eof_lower_bound_with_tol(rho, DEFAULT_VERDICT_TOL)
}

/// Full pipeline: norms → Λ → co[R(Λ)], with `tol` deciding when Λ counts
/// as 1 (bound 0). Also used to flag the verdict booleans.
pub fn eof_lower_bound_with_tol(rho: &DensityMatrix, tol: f64) -> Result<BoundReport> {
    let verdict = maps::separability_verdict(rho, tol)?;
    let lambda_raw = verdict.ppt_norm.max(verdict.realignment_norm);
    let m_eff = rho.dims().m_eff();
    if lambda_raw > m_eff as f64 + LAMBDA_EXCESS_TOL {
        return Err(Error::LambdaExceedsSchmidtRank { lambda: lambda_raw, m_eff });
    }
    let (bound_bits, branch) = if m_eff < 2 || lambda_raw <= 1.0 + tol {
        // m_eff = 1 has no entanglement to bound; Λ ≈ 1 certifies nothing
        (0.0, Branch::SeparablePoint)
    } else {
        let lambda = lambda_raw.clamp(1.0, m_eff as f64);
        let bits = co_r(lambda, m_eff)?;
        let branch = if m_eff > 2 && lambda > knee(m_eff) {
            Branch::LinearBranch
        } else {
            Branch::ConvexBranch
        };
        (bits, branch)
    };
    Ok(BoundReport {
        dims: rho.dims(),
        ppt_norm: verdict.ppt_norm,
        realignment_norm: verdict.realignment_norm,
        lambda_cap: lambda_raw,
        bound_bits,
        verdict,
        branch,
    })
}

/// Closed-form 2⊗n specialization: 0 at Λ = 1, otherwise
/// H₂[(1 + √(1 − (Λ−1)²))/2]. Agrees with the general pipeline on every
/// 2⊗n state; for 2⊗2 Werner states Λ − 1 is the concurrence, so this
/// reproduces the exact EOF there.
pub fn eof_lower_bound_2xn(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().m_eff() != 2 {
        return Err(Error::dims(format!(
            "2xn specialization needs min(m, n) = 2, got {}x{}",
            rho.dims().dim_a(),
            rho.dims().dim_b()
        )));
    }
    let lambda_raw = lambda_cap(rho)?;
    if lambda_raw <= 1.0 + DEFAULT_VERDICT_TOL {
        return Ok(0.0);
    }
    let lambda = lambda_raw.clamp(1.0, 2.0);
    let t = 1.0 - (lambda - 1.0) * (lambda - 1.0);
    binary_entropy((1.0 + t.max(0.0).sqrt()) / 2.0)
}

/// Piecewise-linear lower convex envelope of a sampled function, built
/// with the monotone-chain hull algorithm. Used by tests to validate the
/// closed-form co[R] against R without trusting either.
#[derive(Debug, Clone)]
pub struct ConvexEnvelope {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl ConvexEnvelope {
    /// Hull vertices, strictly increasing in x.
    pub fn vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Envelope value at `x`, clamped to the sampled interval.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(self.xs[0], *self.xs.last().unwrap());
        // rightmost vertex with xs[i] <= x
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        if i + 1 >= self.xs.len() {
            return self.ys[i];
        }
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] * (1.0 - t) + self.ys[i + 1] * t
    }
}

/// Samples `f` at `grid_points` uniform points on [lo, hi] and returns the
/// lower convex envelope of the samples.
pub fn numerical_convex_hull(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_points: usize,
) -> Result<ConvexEnvelope> {
    if grid_points < 3 {
        return Err(Error::param(format!("convex hull needs >= 3 grid points, got {grid_points}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::param(format!("invalid hull interval [{lo}, {hi}]")));
    }
    let step = (hi - lo) / (grid_points - 1) as f64;
    let mut xs: Vec<f64> = Vec::with_capacity(grid_points);
    let mut ys: Vec<f64> = Vec::with_capacity(grid_points);
    // monotone chain, lower hull only: pop while the last two kept points
    // and the new one fail to make a strict left turn
    for idx in 0..grid_points {
        let x = if idx + 1 == grid_points { hi } else { lo + step * idx as f64 };
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::param(format!("hull input not finite at x={x}")));
        }
        while xs.len() >= 2 {
            let (x1, y1) = (xs[xs.len() - 2], ys[ys.len() - 2]);
            let (x2, y2) = (xs[xs.len() - 1], ys[ys.len() - 1]);
            let cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1);
            if cross <= 0.0 {
                xs.pop();
                ys.pop();
            } else {
                break;
            }
        }
        xs.push(x);
        ys.push(y);
    }
    Ok(ConvexEnvelope { xs, ys })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        make_isotropic, make_maximally_entangled, make_werner_2x2, random_density_matrix,
        random_product_state, BipartiteDims,
    };
    use crate::oracles::wootters_eof;
    use rand::Rng;

    #[test]
    fn binary_entropy_reference_points() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        // H₂(2/3) = log₂3 − 2/3
        assert!((binary_entropy(2.0 / 3.0).unwrap() - 0.9182958340544896).abs() < 1e-14);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn binary_entropy_is_symmetric() {
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let a = binary_entropy(x).unwrap();
            let b = binary_entropy(1.0 - x).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn shannon_entropy_reference_points() {
        let sp = SchmidtSpectrum::new(vec![0.9, 0.1]).unwrap();
        assert!((shannon_entropy(&sp) - 0.4689955935892812).abs() < 1e-14);
        let flat = SchmidtSpectrum::new(vec![0.2; 5]).unwrap();
        assert!((shannon_entropy(&flat) - 5f64.log2()).abs() < 1e-14);
        let pure = SchmidtSpectrum::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(shannon_entropy(&pure), 0.0);
    }

    #[test]
    fn gamma_endpoints_and_interior() {
        for m in 2..=10 {
            assert!((gamma(1.0, m).unwrap() - 1.0).abs() < 1e-14);
            assert!((gamma(m as f64, m).unwrap() - 1.0 / m as f64).abs() < 1e-14);
        }
        // worked interior value: γ(8/3, 3) = 2/3
        assert!((gamma(8.0 / 3.0, 3).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        // roundoff slack on both ends
        assert!(gamma(1.0 - 1e-13, 3).is_ok());
        assert!(gamma(3.0 + 1e-13, 3).is_ok());
        assert!(gamma(0.9, 3).is_err());
        assert!(gamma(3.1, 3).is_err());
        assert!(gamma(1.5, 1).is_err());
    }

    #[test]
    fn gamma_is_nonincreasing_in_lambda() {
        for m in [2usize, 3, 5, 8] {
            let mut prev = f64::INFINITY;
            for i in 0..=400 {
                let lam = 1.0 + (m as f64 - 1.0) * i as f64 / 400.0;
                let g = gamma(lam, m).unwrap();
                assert!(g <= prev + 1e-12);
                assert!((1.0 / m as f64..=1.0).contains(&g));
                prev = g;
            }
        }
    }

    #[test]
    fn r_endpoints_and_interior() {
        for m in 2..=10 {
            assert!(r_of_lambda(1.0, m).unwrap().abs() < 1e-12);
            assert!((r_of_lambda(m as f64, m).unwrap() - (m as f64).log2()).abs() < 1e-12);
        }
        // R(8/3, 3) = H₂(2/3) + 1/3 = log₂3 − 1/3
        assert!((r_of_lambda(8.0 / 3.0, 3).unwrap() - 1.2516291673878228).abs() < 1e-13);
    }

    #[test]
    fn co_r_branches_agree_at_the_knee() {
        for m in 3..=10 {
            let m_f = m as f64;
            let k = 4.0 * (m_f - 1.0) / m_f;
            let convex = r_of_lambda(k, m).unwrap();
            let linear = (m_f - 1.0).log2() / (m_f - 2.0) * (k - m_f) + m_f.log2();
            assert!((convex - linear).abs() < 1e-10, "m={m}: {convex} vs {linear}");
            // co_r must be continuous across the knee
            let below = co_r(k - 1e-9, m).unwrap();
            let above = co_r(k + 1e-9, m).unwrap();
            assert!((below - above).abs() < 1e-7);
        }
    }

    #[test]
    fn co_r_endpoints() {
        for m in 2..=10 {
            assert!(co_r(1.0, m).unwrap().abs() < 1e-12);
            assert!((co_r(m as f64, m).unwrap() - (m as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn co_r_for_two_equals_r() {
        for i in 0..=1000 {
            let lam = 1.0 + i as f64 / 1000.0;
            let a = co_r(lam, 2).unwrap();
            let b = r_of_lambda(lam, 2).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn co_r_is_below_r_monotone_and_convex() {
        for m in [2usize, 3, 4, 7, 10] {
            let grid = 2000;
            let mut vals = Vec::with_capacity(grid + 1);
            for i in 0..=grid {
                let lam = 1.0 + (m as f64 - 1.0) * i as f64 / grid as f64;
                let c = co_r(lam, m).unwrap();
                assert!(c <= r_of_lambda(lam, m).unwrap() + 1e-12);
                vals.push(c);
            }
            for w in vals.windows(2) {
                assert!(w[1] >= w[0] - 1e-12, "m={m}: not nondecreasing");
            }
            // discrete convexity: second differences nonnegative
            for w in vals.windows(3) {
                assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-9, "m={m}: not convex");
            }
        }
    }

    /// Brute-force check that R(λ) really is the minimal entropy over
    /// spectra with (Σ√μ)² = λ: sweep the feasible set densely for
    /// m = 2, 3 and compare.
    #[test]
    fn r_matches_brute_force_minimum() {
        // m = 2: √μ lies on the circle x² + y² = 1 cut by x + y = √λ;
        // the two solutions are entropy-equal, so evaluate one directly
        for i in 1..20 {
            let lam = 1.0 + i as f64 / 20.0;
            // x + y = √λ with x² + y² = 1 solves to x = (√λ ± √(2−λ))/2
            let x = (lam.sqrt() + (2.0 - lam).sqrt()) / 2.0;
            let h = binary_entropy(x * x).unwrap();
            let r = r_of_lambda(lam, 2).unwrap();
            assert!((h - r).abs() < 1e-10, "lam={lam}: {h} vs {r}");
        }

        // m = 3: the feasible √μ set is the circle where the sphere
        // Σx² = 1 meets the plane Σx = √λ; sweep it and take the minimum
        // entropy over points with all x_i ≥ 0
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let inv_sqrt6 = 1.0 / 6f64.sqrt();
        let u = [inv_sqrt2, -inv_sqrt2, 0.0];
        let v = [inv_sqrt6, inv_sqrt6, -2.0 * inv_sqrt6];
        for i in 1..=18 {
            let lam = 1.0 + 2.0 * i as f64 / 19.0;
            let c = lam.sqrt() / 3.0;
            let rad = (1.0 - lam / 3.0).max(0.0).sqrt();
            let mut best = f64::INFINITY;
            let steps = 20_000;
            for t in 0..steps {
                let th = 2.0 * std::f64::consts::PI * t as f64 / steps as f64;
                let (sin, cos) = th.sin_cos();
                let mut ok = true;
                let mut h = 0.0;
                for ax in 0..3 {
                    let x = c + rad * (u[ax] * cos + v[ax] * sin);
                    if x < -1e-12 {
                        ok = false;
                        break;
                    }
                    let mu = (x * x).max(0.0);
                    if mu > 0.0 {
                        h -= mu * mu.log2();
                    }
                }
                if ok && h < best {
                    best = h;
                }
            }
            let r = r_of_lambda(lam, 3).unwrap();
            assert!(best >= r - 1e-9, "lam={lam}: sweep found {best} below R={r}");
            assert!(best <= r + 1e-4, "lam={lam}: sweep min {best} far above R={r}");
        }
    }

    #[test]
    fn pure_state_entropy_dominates_co_r() {
        let mut rng = crate::test_rng(404);
        for _ in 0..200 {
            let m = rng.gen_range(2..=5usize);
            let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0f64)).collect();
            let sum: f64 = raw.iter().sum();
            let mu = SchmidtSpectrum::new(raw.iter().map(|r| r / sum).collect()).unwrap();
            let lam = mu.lambda().clamp(1.0, m as f64);
            let bound = co_r(lam, m).unwrap();
            assert!(bound <= shannon_entropy(&mu) + 1e-9);
        }
    }

    #[test]
    fn lambda_cap_on_reference_families() {
        let prod = DensityMatrix::from_pure(&random_product_state(
            BipartiteDims::new(2, 3).unwrap(),
            5,
        ));
        assert!((lambda_cap(&prod).unwrap() - 1.0).abs() < 1e-8);

        let iso = make_isotropic(3, 0.9).unwrap();
        assert!((lambda_cap(&iso).unwrap() - 2.7).abs() < 1e-10);

        let maxent = DensityMatrix::from_pure(&make_maximally_entangled(3, 3).unwrap());
        assert!((lambda_cap(&maxent).unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn bound_on_product_state_is_zero() {
        let rho = DensityMatrix::from_pure(&random_product_state(
            BipartiteDims::new(2, 2).unwrap(),
            9,
        ));
        let rep = eof_lower_bound(&rho).unwrap();
        assert_eq!(rep.bound_bits, 0.0);
        assert_eq!(rep.branch, Branch::SeparablePoint);
        assert!(!rep.verdict.entangled_certified);
    }

    #[test]
    fn bound_on_bell_state_is_one() {
        let rho = DensityMatrix::from_pure(&make_maximally_entangled(2, 2).unwrap());
        let rep = eof_lower_bound(&rho).unwrap();
        assert!((rep.lambda_cap - 2.0).abs() < 1e-10);
        assert!((rep.bound_bits - 1.0).abs() < 1e-10);
        assert_eq!(rep.branch, Branch::ConvexBranch);
    }

    #[test]
    fn bound_on_maximally_entangled_isotropic() {
        let rep = eof_lower_bound(&make_isotropic(3, 1.0).unwrap()).unwrap();
        assert!((rep.bound_bits - 3f64.log2()).abs() < 1e-9);
        assert_eq!(rep.branch, Branch::LinearBranch);
    }

    #[test]
    fn branch_selection_follows_the_knee() {
        // d = 3: knee at Λ = 8/3, i.e. F = 8/9
        let below = eof_lower_bound(&make_isotropic(3, 0.8).unwrap()).unwrap();
        assert_eq!(below.branch, Branch::ConvexBranch);
        assert!((below.lambda_cap - 2.4).abs() < 1e-9);
        let above = eof_lower_bound(&make_isotropic(3, 0.95).unwrap()).unwrap();
        assert_eq!(above.branch, Branch::LinearBranch);
        assert!((above.lambda_cap - 2.85).abs() < 1e-9);
    }

    #[test]
    fn report_invariants_on_random_states() {
        for seed in 0..10u64 {
            let rho = random_density_matrix(BipartiteDims::new(2, 3).unwrap(), 4, seed).unwrap();
            let rep = eof_lower_bound(&rho).unwrap();
            assert_eq!(rep.lambda_cap, rep.ppt_norm.max(rep.realignment_norm));
            assert!(rep.bound_bits >= 0.0);
            assert!(rep.bound_bits <= (rho.dims().m_eff() as f64).log2() + 1e-12);
            if rep.lambda_cap <= 1.0 + DEFAULT_VERDICT_TOL {
                assert_eq!(rep.bound_bits, 0.0);
            }
        }
    }

    #[test]
    fn bound_is_convex_in_the_state() {
        use num_complex::Complex64;
        let d = BipartiteDims::new(2, 2).unwrap();
        for seed in 0..5u64 {
            let r1 = random_density_matrix(d, 2, 300 + seed).unwrap();
            let r2 = random_density_matrix(d, 3, 400 + seed).unwrap();
            let p = 0.4;
            let mix = DensityMatrix::new(
                d,
                &r1.matrix().scale(Complex64::new(p, 0.0))
                    + &r2.matrix().scale(Complex64::new(1.0 - p, 0.0)),
            )
            .unwrap();
            let lhs = eof_lower_bound(&mix).unwrap().bound_bits;
            let rhs = p * eof_lower_bound(&r1).unwrap().bound_bits
                + (1.0 - p) * eof_lower_bound(&r2).unwrap().bound_bits;
            assert!(lhs <= rhs + 1e-8);
        }
    }

    #[test]
    fn two_by_n_specialization_matches_pipeline() {
        // entangled, separable, and rank-deficient 2⊗n inputs
        let mut cases = vec![
            DensityMatrix::from_pure(&make_maximally_entangled(2, 2).unwrap()),
            make_werner_2x2(0.9).unwrap(),
            make_werner_2x2(0.2).unwrap(),
        ];
        for seed in 0..20u64 {
            let n = 2 + (seed % 4) as usize;
            let d = BipartiteDims::new(2, n).unwrap();
            let rank = 1 + (seed as usize % (2 * n));
            cases.push(random_density_matrix(d, rank, seed).unwrap());
        }
        for rho in &cases {
            let special = eof_lower_bound_2xn(rho).unwrap();
            let general = eof_lower_bound(rho).unwrap().bound_bits;
            assert!(
                (special - general).abs() < 1e-10,
                "2xn {} vs general {}",
                special,
                general
            );
        }
        assert!(eof_lower_bound_2xn(&make_isotropic(3, 0.5).unwrap()).is_err());
    }

    #[test]
    fn two_by_n_reference_values() {
        // Werner p = 0.9 has Λ = 1.85; the closed form gives the same
        // number as the exact two-qubit EOF
        let w = make_werner_2x2(0.9).unwrap();
        let got = eof_lower_bound_2xn(&w).unwrap();
        assert!((got - wootters_eof(&w).unwrap()).abs() < 1e-9);

        // Λ = 1.5 evaluates to H₂[(1+√3/2)/2]
        let lam: f64 = 1.5;
        let direct =
            binary_entropy((1.0 + (1.0 - (lam - 1.0) * (lam - 1.0)).sqrt()) / 2.0).unwrap();
        assert!((direct - 0.35457890266527003).abs() < 1e-13);
    }

    #[test]
    fn hull_of_convex_function_is_the_function() {
        let env = numerical_convex_hull(|x| x * x, -1.0, 2.0, 501).unwrap();
        for i in 0..=500 {
            let x = -1.0 + 3.0 * i as f64 / 500.0;
            assert!((env.eval(x) - x * x).abs() < 2e-5, "x={x}");
        }
    }

    #[test]
    fn hull_matches_co_r() {
        for m in [2usize, 3, 5] {
            let env =
                numerical_convex_hull(|lam| r_of_lambda(lam, m).unwrap(), 1.0, m as f64, 10_000)
                    .unwrap();
            let mut sup = 0.0f64;
            for i in 0..=2000 {
                let lam = 1.0 + (m as f64 - 1.0) * i as f64 / 2000.0;
                let diff = (env.eval(lam) - co_r(lam, m).unwrap()).abs();
                sup = sup.max(diff);
            }
            assert!(sup < 2e-4, "m={m}: sup deviation {sup}");
        }
    }

    #[test]
    fn hull_rejects_bad_parameters() {
        assert!(numerical_convex_hull(|x| x, 0.0, 1.0, 2).is_err());
        assert!(numerical_convex_hull(|x| x, 1.0, 1.0, 10).is_err());
        assert!(numerical_convex_hull(|_| f64::NAN, 0.0, 1.0, 10).is_err());
    }
}
