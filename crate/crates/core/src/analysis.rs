//! Asymptotics of the Jacobian along the scaling curve `λ ↦ ζ_λ(ξ, μ)`,
//! Monte Carlo volumes of intermediate sets and the curvature-exponent
//! criterion.

use crate::algebra::{Covector, StepTwoAlgebra};
use crate::catalog::{ga_in_domain, GAMatrix};
use crate::error::{Error, Result};
use crate::expmap::{dsexp, jacobian, zeta, SeriesConfig};
use crate::gamma::Order;
use crate::sampling::{gaussian_covector, substream, StrataSpec, SEARCH_STREAM_BASE};
use crate::scalar::{lit, pairwise_sum, to_f64, Real};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Ratio between consecutive points of the default grids.
pub const GRID_RATIO: f64 = 0.562_341_325_190_349_1; // 10^(-1/4)

/// Default cutoff on the reciprocal condition number of the differential.
pub const DEFAULT_FLOOR: f64 = 1e-13;

/// Number of smallest resolved grid points entering the slope fit.
const FIT_WINDOW: usize = 8;

/// Slopes farther than this from every integer are rejected.
const SLOPE_TOLERANCE: f64 = 0.2;

/// Geometric grid `λ_max, λ_max r, …` with ratio `r = 10^(-1/4)`, decreasing.
pub fn geometric_grid(lambda_max: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| lambda_max * GRID_RATIO.powi(i as i32)).collect()
}

/// Geometric grid between `lambda_max` and `lambda_min` (inclusive), `points ≥ 2`.
pub fn geometric_range(lambda_max: f64, lambda_min: f64, points: usize) -> Vec<f64> {
    let ratio = (lambda_min / lambda_max).powf(1.0 / (points - 1) as f64);
    (0..points).map(|i| lambda_max * ratio.powi(i as i32)).collect()
}

/// `Jac(SExp)(ζ_λ(ξ, μ))`, which equals `λ^{2n-2Q} Jac(SExp)(λξ, λμ)` for `λ ≠ 0`.
pub fn scaled_jac<T: Real>(alg: &StepTwoAlgebra<T>, cov: &Covector<T>, lambda: T, cfg: &SeriesConfig<T>) -> Result<T> {
    jacobian(alg, &zeta(lambda, cov), cfg)
}

/// Least-squares line `y = a + b x`; returns `(a, b, rms residual)`.
fn fit_line(x: &[f64], y: &[f64], w: Option<&[f64]>) -> (f64, f64, f64) {
    let ones = vec![1.0; x.len()];
    let w = w.unwrap_or(&ones);
    let sw: f64 = w.iter().sum();
    let mx = x.iter().zip(w).map(|(x, w)| x * w).sum::<f64>() / sw;
    let my = y.iter().zip(w).map(|(y, w)| y * w).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(w).map(|(x, w)| w * (x - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).zip(w).map(|((x, y), w)| w * (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let rms = (x.iter().zip(y).map(|(x, y)| (y - a - b * x).powi(2)).sum::<f64>() / x.len() as f64).sqrt();
    (a, b, rms)
}

/// Value at zero of the least-squares polynomial of degree `≤ 2` through `(x, y)`.
fn extrapolate_to_zero(x: &[f64], y: &[f64]) -> f64 {
    let degree = (x.len().saturating_sub(2)).min(2);
    let v = DMatrix::from_fn(x.len(), degree + 1, |i, j| x[i].powi(j as i32));
    let rhs = DVector::from_column_slice(y);
    v.svd(true, true)
        .solve(&rhs, 0.0)
        .map(|c| c[0])
        .unwrap_or_else(|_| y[0])
}

/// Numerical leading order of `λ ↦ Jac(SExp)(ζ_λ(ξ, μ))` as `λ → 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeadingOrder {
    pub gamma_est: Order,
    /// Estimate of the leading coefficient (zero when the order is infinite).
    pub coeff_est: f64,
    /// Fitted slope before rounding.
    pub slope: f64,
    /// RMS residual of the log-log fit.
    pub fit_residual: f64,
    pub lambda_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Reciprocal condition number of the differential at each grid point.
    pub rcond: Vec<f64>,
    /// Number of grid points used in the fit.
    pub fit_points: usize,
}

/// Fits `log |Jac(ζ_λ)|` against `log λ`.
///
/// A grid point counts as resolved when the reciprocal condition number of the
/// differential there is at least `floor`; below that the determinant is not
/// distinguishable from rounding noise. If no point is resolved the order is
/// infinite. Otherwise the fit uses the resolved points after dropping the two
/// largest `λ` (kept if fewer than three points would remain), limited to the
/// eight smallest, so a crossover between regimes at moderate `λ` does not
/// bias the slope. The coefficient
/// is the value at `λ = 0` of a low-degree polynomial fit to
/// `Jac(ζ_λ) / λ^Γ` over the smallest resolved `λ`.
pub fn leading_order<T: Real>(
    alg: &StepTwoAlgebra<T>,
    cov: &Covector<T>,
    grid: &[f64],
    floor: f64,
    cfg: &SeriesConfig<T>,
) -> Result<LeadingOrder> {
    if grid.len() < 8 {
        return Err(Error::Input(format!("leading order needs at least 8 grid points, got {}", grid.len())));
    }
    if grid.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::Input("grid points must be positive".into()));
    }
    if !(floor > 0.0) {
        return Err(Error::Input("floor must be positive".into()));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut values = Vec::with_capacity(sorted.len());
    let mut rcond = Vec::with_capacity(sorted.len());
    for &l in &sorted {
        let d = dsexp(alg, &zeta(lit::<T>(l), cov), cfg)?.map(to_f64);
        let sv = d.singular_values();
        let smax = sv.max();
        rcond.push(if smax > 0.0 { sv.min() / smax } else { 0.0 });
        values.push(d.determinant());
    }
    let resolved: Vec<usize> = (0..sorted.len()).filter(|&i| rcond[i] >= floor && values[i] != 0.0).collect();
    if resolved.is_empty() {
        return Ok(LeadingOrder {
            gamma_est: Order::Infinite,
            coeff_est: 0.0,
            slope: f64::NAN,
            fit_residual: 0.0,
            lambda_grid: sorted,
            values,
            rcond,
            fit_points: 0,
        });
    }
    let mut used: Vec<usize> = if resolved.iter().filter(|&&i| i >= 2).count() >= 3 {
        resolved.iter().copied().filter(|&i| i >= 2).collect()
    } else {
        resolved.clone()
    };
    used.drain(..used.len().saturating_sub(FIT_WINDOW));
    if used.len() < 2 {
        return Err(Error::AmbiguousOrder {
            slope: f64::NAN,
            distance: f64::NAN,
        });
    }
    let lx: Vec<f64> = used.iter().map(|&i| sorted[i].ln()).collect();
    let ly: Vec<f64> = used.iter().map(|&i| values[i].abs().ln()).collect();
    let (_, slope, fit_residual) = fit_line(&lx, &ly, None);
    let rounded = slope.round();
    let distance = (slope - rounded).abs();
    if distance > SLOPE_TOLERANCE || rounded < 0.0 {
        return Err(Error::AmbiguousOrder { slope, distance });
    }
    let gamma = rounded as i32;
    let tail: Vec<usize> = used.iter().rev().take(5).copied().collect();
    let xs: Vec<f64> = tail.iter().map(|&i| sorted[i]).collect();
    let ys: Vec<f64> = tail.iter().map(|&i| values[i] / sorted[i].powi(gamma)).collect();
    let coeff_est = extrapolate_to_zero(&xs, &ys);
    Ok(LeadingOrder {
        gamma_est: Order::Finite(gamma as usize),
        coeff_est,
        slope,
        fit_residual,
        lambda_grid: sorted,
        values,
        rcond,
        fit_points: used.len(),
    })
}

/// Default grid for [`leading_order`]: 24 points from 1 down to `10^(-23/4)`.
pub fn default_leading_grid() -> Vec<f64> {
    geometric_grid(1.0, 24)
}

/// Axis-aligned box in covector coordinates `(ξ, μ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovectorBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl CovectorBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        Self { lo, hi }
    }

    /// Box of half-width `radius` around `center`.
    pub fn around(center: &Covector<f64>, radius: f64) -> Self {
        let c = center.to_vector();
        Self {
            lo: c.iter().map(|v| v - radius).collect(),
            hi: c.iter().map(|v| v + radius).collect(),
        }
    }

    pub fn check(&self, q1: usize, q2: usize) -> Result<()> {
        if self.lo.len() != q1 + q2 || self.hi.len() != q1 + q2 {
            return Err(Error::Input(format!("region must have {} coordinates", q1 + q2)));
        }
        if self.lo.iter().zip(&self.hi).any(|(l, h)| !(h > l) || !l.is_finite() || !h.is_finite()) {
            return Err(Error::Input("region has a degenerate or unbounded side".into()));
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, q1: usize) -> Covector<f64> {
        let v = DVector::from_iterator(
            self.lo.len(),
            self.lo.iter().zip(&self.hi).map(|(l, h)| l + (h - l) * rng.random::<f64>()),
        );
        Covector::from_vector(q1, &v)
    }
}

/// Samples checked against the domain proxy in [`volume`].
const PROXY_CHECK_SAMPLES: usize = 64;

/// Monte Carlo estimate of an intermediate-set volume.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub lambda: f64,
    pub estimate: f64,
    pub std_error: f64,
    /// Proxy rejections among the checked samples.
    pub proxy_failures: usize,
    pub proxy_checked: usize,
}

/// `λ^{2Q-n} vol(U) mean |Jac(ζ_λ ξ)|` over uniform samples of the box `U`.
///
/// Sample `i` draws from its own substream, and the mean uses pairwise
/// summation, so the result does not depend on the worker count. The first
/// samples are also run through the general domain proxy; rejections are
/// reported, not fatal.
pub fn volume(
    alg: &StepTwoAlgebra<f64>,
    region: &CovectorBox,
    lambda: f64,
    n_samples: usize,
    seed: u64,
    cfg: &SeriesConfig<f64>,
) -> Result<VolumeEstimate> {
    let (q1, q2) = (alg.q1(), alg.q2());
    region.check(q1, q2)?;
    if n_samples < 2 {
        return Err(Error::Input("volume needs at least two samples".into()));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Input("lambda must lie in (0, 1]".into()));
    }
    let values: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let cov = region.sample(&mut substream(seed, i as u64), q1);
            scaled_jac(alg, &cov, lambda, cfg).map(f64::abs)
        })
        .collect::<Result<_>>()?;
    let checked = PROXY_CHECK_SAMPLES.min(n_samples);
    let proxy = DomainProxy::General;
    let proxy_failures = (0..checked)
        .into_par_iter()
        .map(|i| {
            let cov = region.sample(&mut substream(seed, i as u64), q1);
            proxy.accepts(alg, &cov, cfg).map(|ok| usize::from(!ok))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let n = n_samples as f64;
    let mean = pairwise_sum(&values) / n;
    let dev: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    let scale = lambda.powi((2 * alg.homogeneous_dim() - alg.dim()) as i32) * region.volume();
    Ok(VolumeEstimate {
        lambda,
        estimate: scale * mean,
        std_error: scale * (var / n).sqrt(),
        proxy_failures,
        proxy_checked: checked,
    })
}

/// Volume estimates over a grid and their log-log slope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeScan {
    pub lambdas: Vec<f64>,
    pub volumes: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub slope: f64,
    pub slope_std_error: f64,
    pub region: CovectorBox,
    pub n_samples: usize,
    pub proxy_failures: usize,
}

/// Runs [`volume`] at every grid point with the same seed and fits
/// `log vol` against `log λ` with weights `(vol / σ)²`.
pub fn geo_slope(
    alg: &StepTwoAlgebra<f64>,
    region: &CovectorBox,
    grid: &[f64],
    n_samples: usize,
    seed: u64,
    cfg: &SeriesConfig<f64>,
) -> Result<VolumeScan> {
    if grid.len() < 2 {
        return Err(Error::Input("volume scan needs at least two grid points".into()));
    }
    let mut estimates = Vec::with_capacity(grid.len());
    for &l in grid {
        let e = volume(alg, region, l, n_samples, seed, cfg)?;
        if e.estimate <= 3.0 * e.std_error {
            return Err(Error::DegenerateRegion { lambda: l });
        }
        estimates.push(e);
    }
    let x: Vec<f64> = estimates.iter().map(|e| e.lambda.ln()).collect();
    let y: Vec<f64> = estimates.iter().map(|e| e.estimate.ln()).collect();
    // Var(log V) ≈ (σ / V)².
    let w: Vec<f64> = estimates.iter().map(|e| (e.estimate / e.std_error).powi(2)).collect();
    let (_, slope, _) = fit_line(&x, &y, Some(&w));
    let sw: f64 = w.iter().sum();
    let mx = x.iter().zip(&w).map(|(x, w)| x * w).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(&w).map(|(x, w)| w * (x - mx).powi(2)).sum();
    Ok(VolumeScan {
        lambdas: grid.to_vec(),
        volumes: estimates.iter().map(|e| e.estimate).collect(),
        std_errors: estimates.iter().map(|e| e.std_error).collect(),
        slope,
        slope_std_error: (1.0 / sxx).sqrt(),
        region: region.clone(),
        n_samples,
        proxy_failures: estimates.iter().map(|e| e.proxy_failures).max().unwrap_or(0),
    })
}

/// Grid points used by the general domain proxy.
pub const PROXY_GRID: usize = 32;

/// Necessary-condition test for membership in the regular domain.
///
/// `General` accepts when `Jac(SExp)(t ξ, t μ) > 0` for `t = 1/32, …, 1`.
/// `GaBox` first requires `|μ · A_j| < 2π` and then runs the same scan on the
/// closed-form Jacobian of `G_A`. Neither decides minimality.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainProxy {
    General,
    GaBox(GAMatrix<f64>),
}

impl DomainProxy {
    pub fn accepts(&self, alg: &StepTwoAlgebra<f64>, cov: &Covector<f64>, cfg: &SeriesConfig<f64>) -> Result<bool> {
        match self {
            DomainProxy::General => {
                for i in 1..=PROXY_GRID {
                    let t = i as f64 / PROXY_GRID as f64;
                    if !(jacobian(alg, &cov.scaled(t), cfg)? > 0.0) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            DomainProxy::GaBox(a) => ga_in_domain(a, cov, PROXY_GRID),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            DomainProxy::General => "jacobian-scan",
            DomainProxy::GaBox(_) => "ga-box",
        }
    }
}

/// A point where the curvature-exponent inequality fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CeWitness {
    pub lambda: f64,
    /// `λ^{2Q-n} |Jac(ζ_λ ξ)|`.
    pub lhs: f64,
    /// `λ^N |Jac(ξ)|`.
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CeCheck {
    pub holds: bool,
    pub witness: Option<CeWitness>,
}

/// Relative slack allowed before a grid point counts as a violation.
const CE_SLACK: f64 = 1e-12;

/// Default grid for the criterion: `10^(-i/4)` for `i = 1, …, 16`.
pub fn default_ce_grid() -> Vec<f64> {
    geometric_grid(GRID_RATIO, 16)
}

/// Checks `λ^{2Q-n} |Jac(ζ_λ ξ)| ≥ λ^N |Jac(ξ)|` on `grid`.
///
/// Returns the first violating `λ` in grid order. A covector rejected by
/// `proxy` is a precondition error.
pub fn ce_criterion(
    alg: &StepTwoAlgebra<f64>,
    n_exp: f64,
    cov: &Covector<f64>,
    grid: &[f64],
    proxy: &DomainProxy,
    cfg: &SeriesConfig<f64>,
) -> Result<CeCheck> {
    if grid.iter().any(|&l| !(l > 0.0 && l <= 1.0)) {
        return Err(Error::Input("criterion grid must lie in (0, 1]".into()));
    }
    if !proxy.accepts(alg, cov, cfg)? {
        return Err(Error::Precondition(format!(
            "covector rejected by the {} domain proxy",
            proxy.label()
        )));
    }
    ce_unchecked(alg, n_exp, cov, grid, cfg)
}

fn ce_unchecked(
    alg: &StepTwoAlgebra<f64>,
    n_exp: f64,
    cov: &Covector<f64>,
    grid: &[f64],
    cfg: &SeriesConfig<f64>,
) -> Result<CeCheck> {
    let base = (2 * alg.homogeneous_dim() - alg.dim()) as i32;
    let j1 = jacobian(alg, cov, cfg)?.abs();
    for &l in grid {
        let lhs = l.powi(base) * scaled_jac(alg, cov, l, cfg)?.abs();
        let rhs = l.powf(n_exp) * j1;
        if lhs < rhs * (1.0 - CE_SLACK) {
            return Ok(CeCheck {
                holds: false,
                witness: Some(CeWitness { lambda: l, lhs, rhs }),
            });
        }
    }
    Ok(CeCheck { holds: true, witness: None })
}

/// Sampling plan for [`ce_search_violation`].
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub budget: usize,
    pub strata: StrataSpec,
    pub shrink: Vec<f64>,
    pub grid: Vec<f64>,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(budget: usize, strata: StrataSpec, seed: u64) -> Self {
        Self {
            budget,
            strata,
            shrink: vec![1e-1, 1e-2, 1e-3],
            grid: default_ce_grid(),
            seed,
        }
    }
}

/// A covector and scale at which the criterion fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub sample_index: usize,
    pub covector: Covector<f64>,
    pub witness: CeWitness,
}

/// Outcome of a violation search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub violation: Option<Violation>,
    /// Samples examined (up to and including the violating one).
    pub examined: usize,
    pub proxy_rejected: usize,
}

/// Covector number `i` of the search: slot 0 of each cycle is a plain
/// Gaussian, the others shrink the coordinates selected by one mask.
fn search_sample(cfg: &SearchConfig, q1: usize, q2: usize, i: usize) -> Covector<f64> {
    let mut rng = substream(cfg.seed, SEARCH_STREAM_BASE + i as u64);
    let cov: Covector<f64> = gaussian_covector(&mut rng, q1, q2);
    let per_mask = cfg.shrink.len();
    let cycle = 1 + cfg.strata.masks.len() * per_mask;
    let slot = i % cycle;
    if slot == 0 || per_mask == 0 {
        return cov;
    }
    let mask = &cfg.strata.masks[(slot - 1) / per_mask];
    mask.scale_masked(&cov, cfg.shrink[(slot - 1) % per_mask])
}

/// Chunk size for the parallel search; results are scanned in index order.
const SEARCH_CHUNK: usize = 512;

/// Looks for a covector accepted by `proxy` at which [`ce_criterion`] fails.
/// Deterministic in `cfg.seed`; the reported violation is the one with the
/// smallest sample index.
pub fn ce_search_violation(
    alg: &StepTwoAlgebra<f64>,
    n_exp: f64,
    cfg: &SearchConfig,
    proxy: &DomainProxy,
    series: &SeriesConfig<f64>,
) -> Result<SearchOutcome> {
    if !(n_exp > 0.0 && n_exp.is_finite()) {
        return Err(Error::Input("N must be positive".into()));
    }
    let (q1, q2) = (alg.q1(), alg.q2());
    cfg.strata.check(q1, q2)?;
    if cfg.grid.iter().any(|&l| !(l > 0.0 && l <= 1.0)) {
        return Err(Error::Input("search grid must lie in (0, 1]".into()));
    }
    let mut rejected = 0;
    let mut start = 0;
    while start < cfg.budget {
        let end = (start + SEARCH_CHUNK).min(cfg.budget);
        let results: Vec<Option<CeCheck>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let cov = search_sample(cfg, q1, q2, i);
                if !proxy.accepts(alg, &cov, series)? {
                    return Ok(None);
                }
                ce_unchecked(alg, n_exp, &cov, &cfg.grid, series).map(Some)
            })
            .collect::<Result<_>>()?;
        for (offset, r) in results.into_iter().enumerate() {
            match r {
                None => rejected += 1,
                Some(CeCheck {
                    witness: Some(witness), ..
                }) => {
                    let i = start + offset;
                    return Ok(SearchOutcome {
                        violation: Some(Violation {
                            sample_index: i,
                            covector: search_sample(cfg, q1, q2, i),
                            witness,
                        }),
                        examined: i + 1,
                        proxy_rejected: rejected,
                    });
                }
                Some(_) => {}
            }
        }
        start = end;
    }
    Ok(SearchOutcome {
        violation: None,
        examined: cfg.budget,
        proxy_rejected: rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{heisenberg, star};

    fn cfg() -> SeriesConfig<f64> {
        SeriesConfig::default()
    }

    #[test]
    fn grid_ratio_is_quarter_decade() {
        assert!((GRID_RATIO - 10f64.powf(-0.25)).abs() < 1e-16);
        let g = geometric_range(1e-1, 1e-3, 9);
        assert!((g[8] - 1e-3).abs() < 1e-15 && (g[4] - 1e-2).abs() < 1e-15);
    }

    #[test]
    fn heisenberg_leading_order() {
        let h = heisenberg::<f64>();
        let c = Covector::from_slices(&[1.0, 0.0], &[1.0]);
        let lo = leading_order(&h, &c, &default_leading_grid(), DEFAULT_FLOOR, &cfg()).unwrap();
        assert_eq!(lo.gamma_est, Order::Finite(0));
        assert!((lo.coeff_est - 1.0 / 12.0).abs() < 1e-9);
        assert!((scaled_jac(&h, &c, 1e-6, &cfg()).unwrap() - 1.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn star_strata_leading_order() {
        let s = star::<f64>(2).unwrap();
        let g = default_leading_grid();
        let lo = leading_order(&s, &Covector::from_slices(&[0.0, 0.6, -0.8], &[0.3, 1.1]), &g, DEFAULT_FLOOR, &cfg())
            .unwrap();
        assert_eq!(lo.gamma_est, Order::Finite(2));
        let lo = leading_order(&s, &Covector::from_slices(&[0.0, 0.6, -0.8], &[0.88, 0.66]), &g, DEFAULT_FLOOR, &cfg())
            .unwrap();
        assert_eq!(lo.gamma_est, Order::Infinite);
    }

    #[test]
    fn short_grid_is_rejected() {
        let h = heisenberg::<f64>();
        let c = Covector::from_slices(&[1.0, 0.0], &[1.0]);
        assert!(leading_order(&h, &c, &geometric_grid(1.0, 7), DEFAULT_FLOOR, &cfg()).is_err());
    }

    #[test]
    fn volume_at_unit_scale_is_the_integral() {
        let h = heisenberg::<f64>();
        let region = CovectorBox::new(vec![0.9, 0.9, -0.1], vec![1.1, 1.1, 0.1]);
        let v = volume(&h, &region, 1.0, 4000, 3, &cfg()).unwrap();
        // ∫ |ξ|² f1 f2(μ/2) / 4 factorizes over the box; the μ factor by midpoint rule.
        let m = 2000;
        let mu_mean = (0..m)
            .map(|i| {
                let mu = -0.1 + 0.2 * (i as f64 + 0.5) / m as f64;
                crate::catalog::f1(mu / 2.0) * crate::catalog::f2(mu / 2.0)
            })
            .sum::<f64>()
            / m as f64;
        let exact = region.volume() * 2.0 * (1.0 + 0.04 / 12.0) * mu_mean / 4.0;
        assert!((v.estimate - exact).abs() < 3.0 * v.std_error + 1e-3 * exact);
        assert_eq!(v.proxy_failures, 0);
        let again = volume(&h, &region, 1.0, 4000, 3, &cfg()).unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn degenerate_region_is_rejected() {
        let h = heisenberg::<f64>();
        let region = CovectorBox::new(vec![0.9, 0.9, 0.1], vec![1.1, 1.1, 0.1]);
        assert!(matches!(volume(&h, &region, 0.5, 10, 1, &cfg()), Err(Error::Input(_))));
    }

    #[test]
    fn criterion_on_heisenberg_and_star() {
        let h = heisenberg::<f64>();
        let c = Covector::from_slices(&[0.7, -0.2], &[2.5]);
        let r = ce_criterion(&h, 5.0, &c, &default_ce_grid(), &DomainProxy::General, &cfg()).unwrap();
        assert!(r.holds);
        let s = star::<f64>(2).unwrap();
        let c = Covector::from_slices(&[1e-3, 0.6, -0.8], &[0.3, 1.1]);
        let r = ce_criterion(&s, 10.0, &c, &default_ce_grid(), &DomainProxy::General, &cfg()).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert!(w.lhs < w.rhs);
    }

    #[test]
    fn rejected_covector_is_a_precondition_error() {
        let h = heisenberg::<f64>();
        let c = Covector::from_slices(&[1.0, 0.0], &[9.0]);
        let r = ce_criterion(&h, 5.0, &c, &default_ce_grid(), &DomainProxy::General, &cfg());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
