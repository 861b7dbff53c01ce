//! Invariant suite run by `carnot verify`.

use crate::algebra::{Covector, StepTwoAlgebra};
use crate::analysis::{default_leading_grid, leading_order, DEFAULT_FLOOR};
use crate::catalog::{ga_jacobian, Builtin};
use crate::error::Result;
use crate::expmap::{dilate, dsexp, dsexp_finite_difference, eta, jacobian, jacobian_extended, sexp, zeta, SeriesConfig};
use crate::flow::{check_conservation, integrate};
use crate::gamma::{
    a_zero, filtration, gamma_point, group_exponents, hilbert_gram, ExponentConfig, Order, DEFAULT_RANK_TOL,
};
use crate::sampling::{gaussian_covector, substream, StrataSpec};
use rand::Rng;
use serde::Serialize;

/// Outcome of one property.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Sample counts for the suite.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { samples: 20, seed: 0 }
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn vec_rel_err(a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>) -> f64 {
    let scale = a.amax().max(b.amax());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).amax() / scale
    }
}

/// Gaussian covectors scaled by `scale`, drawn from `seed`.
pub fn sample_covectors(alg: &StepTwoAlgebra<f64>, count: usize, seed: u64, scale: f64) -> Vec<Covector<f64>> {
    (0..count)
        .map(|i| gaussian_covector::<f64, _>(&mut substream(seed, i as u64), alg.q1(), alg.q2()).scaled(scale))
        .collect()
}

/// Gaussian covectors with `W_∞ = 0`.
pub fn sample_regular_covectors(alg: &StepTwoAlgebra<f64>, count: usize, seed: u64) -> Result<Vec<Covector<f64>>> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0u64;
    while out.len() < count {
        let c = gaussian_covector::<f64, _>(&mut substream(seed, i), alg.q1(), alg.q2());
        if gamma_point(alg, &c, DEFAULT_RANK_TOL)?.is_finite() {
            out.push(c);
        }
        i += 1;
    }
    Ok(out)
}

struct Suite {
    results: Vec<PropertyResult>,
}

impl Suite {
    fn record(&mut self, name: &'static str, outcome: Result<(bool, String)>) {
        let (passed, detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, e.to_string()),
        };
        self.results.push(PropertyResult { name, passed, detail });
    }
}

/// Runs every property applicable to `alg`; the closed-form checks need `builtin`.
pub fn run_suite(alg: &StepTwoAlgebra<f64>, builtin: Option<&Builtin>, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let series = SeriesConfig::default();
    let covs = sample_covectors(alg, cfg.samples, cfg.seed, 1.0);
    let small = sample_covectors(alg, cfg.samples, cfg.seed ^ 0x5eed, 0.5);
    let mut suite = Suite { results: Vec::new() };

    suite.record("structure", {
        let d = alg.diagnostics();
        Ok((d.is_valid(), format!("n={} Q={} skew_residual={:e}", d.n, d.homogeneous_dim, d.skew_residual)))
    });

    if let Some(b) = builtin {
        suite.record("dimensions", {
            let k = b.known_exponents();
            Ok((
                k.n == alg.dim() && k.q == alg.homogeneous_dim(),
                format!("n={} Q={}", alg.dim(), alg.homogeneous_dim()),
            ))
        });
    }

    suite.record(
        "dsexp-finite-difference",
        (|| {
            let mut worst: f64 = 0.0;
            for c in &small {
                let a = dsexp(alg, c, &series)?;
                let b = dsexp_finite_difference(alg, c, &series, 1e-5)?;
                worst = worst.max((a - b).amax());
            }
            Ok((worst < 1e-6, format!("max abs diff {worst:e}")))
        })(),
    );

    suite.record(
        "dilation-equivariance",
        (|| {
            let mut worst: f64 = 0.0;
            for (i, c) in covs.iter().enumerate() {
                let l = 0.1 + 1.9 * substream(cfg.seed, 1 << 20 | i as u64).random::<f64>();
                let lhs = sexp(alg, &eta(l, c)?, &series)?.to_vector();
                let rhs = dilate(l, &sexp(alg, c, &series)?).to_vector();
                worst = worst.max(vec_rel_err(&lhs, &rhs));
            }
            Ok((worst < 1e-9, format!("max rel err {worst:e}")))
        })(),
    );

    suite.record(
        "jacobian-homogeneity",
        (|| {
            let mut worst: f64 = 0.0;
            let p = 2 * (alg.homogeneous_dim() - alg.dim()) as i32;
            for (i, c) in covs.iter().enumerate() {
                let l = 0.1 + 1.9 * substream(cfg.seed, 1 << 20 | i as u64).random::<f64>();
                let lhs = jacobian_extended(alg, &c.scaled(l))?;
                let rhs = l.powi(p) * jacobian_extended(alg, &zeta(l, c))?;
                worst = worst.max(rel_err(lhs, rhs));
            }
            Ok((worst < 1e-9, format!("max rel err {worst:e}")))
        })(),
    );

    suite.record(
        "filtration-splitting",
        (|| {
            for c in &covs {
                let f = filtration(alg, c, DEFAULT_RANK_TOL)?;
                let total: usize = f.w_dims.iter().sum::<usize>() + f.w_inf_dim;
                let chain = f.u_dims.windows(2).all(|w| w[1] >= w[0]) && f.u_dims.iter().all(|&d| d <= alg.q1());
                if total != alg.q2() || !chain {
                    return Ok((false, format!("w_dims {:?} w_inf {} u_dims {:?}", f.w_dims, f.w_inf_dim, f.u_dims)));
                }
            }
            Ok((true, format!("{} covectors", covs.len())))
        })(),
    );

    suite.record(
        "gamma-scale-invariance",
        (|| {
            for (i, c) in covs.iter().enumerate() {
                let s = 0.1 + 3.0 * substream(cfg.seed, 2 << 20 | i as u64).random::<f64>();
                let g = gamma_point(alg, c, DEFAULT_RANK_TOL)?;
                if gamma_point(alg, &c.scaled(s), DEFAULT_RANK_TOL)? != g
                    || gamma_point(alg, &zeta(s, c), DEFAULT_RANK_TOL)? != g
                {
                    return Ok((false, format!("sample {i}")));
                }
            }
            Ok((true, format!("{} covectors", covs.len())))
        })(),
    );

    let regular = sample_regular_covectors(alg, cfg.samples, cfg.seed ^ 0xa0);
    suite.record(
        "a-zero-product-formula",
        regular.clone().and_then(|cs| {
            let mut worst: f64 = 0.0;
            let mut min_eig = f64::INFINITY;
            let mut asym: f64 = 0.0;
            for c in &cs {
                let a = a_zero(alg, c, DEFAULT_RANK_TOL)?;
                let m = hilbert_gram(alg, c, DEFAULT_RANK_TOL)?;
                worst = worst.max(rel_err(a.det, m.product_formula()));
                min_eig = min_eig.min(m.min_eigenvalue);
                asym = asym.max((&m.matrix - m.matrix.transpose()).amax());
            }
            Ok((
                worst < 1e-9 && min_eig > 0.0 && asym < 1e-12,
                format!("max rel err {worst:e}, min eigenvalue {min_eig:e}, asymmetry {asym:e}"),
            ))
        }),
    );

    suite.record(
        "leading-order-agreement",
        regular.and_then(|cs| {
            let grid = default_leading_grid();
            for (i, c) in cs.iter().take(cfg.samples.min(10)).enumerate() {
                let g = gamma_point(alg, c, DEFAULT_RANK_TOL)?;
                let lo = leading_order(alg, c, &grid, DEFAULT_FLOOR, &series)?;
                if lo.gamma_est != g {
                    return Ok((false, format!("sample {i}: filtration {g}, fit {}", lo.gamma_est)));
                }
            }
            Ok((true, "orders agree".into()))
        }),
    );

    suite.record(
        "flow-cross-check",
        (|| {
            let mut err: f64 = 0.0;
            let mut drift: f64 = 0.0;
            for c in small.iter().take(5) {
                let tr = integrate(alg, c, 1.0, 1e-3)?;
                let p = sexp(alg, c, &series)?;
                err = err.max((tr.endpoint().point().to_vector() - p.to_vector()).amax());
                drift = drift.max(check_conservation(alg, &tr)?.max_drift());
            }
            Ok((err < 1e-8 && drift < 1e-8, format!("endpoint err {err:e}, drift {drift:e}")))
        })(),
    );

    let exponent_cfg = ExponentConfig::new(64, StrataSpec::auto(alg.q1(), alg.q2()), cfg.seed);
    suite.record(
        "exponents",
        group_exponents(alg, &exponent_cfg).map(|r| {
            let mut ok = r.chain_holds();
            let mut detail = format!("gamma={} gamma_hat>={} n_geo={} n_ce>={}", r.gamma_group, r.gamma_hat_lower, r.n_geo, r.n_ce_lower);
            if let Some(b) = builtin {
                let k = b.known_exponents();
                ok &= k.n_geo == r.n_geo && k.n_ce_lower == r.n_ce_lower;
                detail.push_str(&format!(" (closed form n_geo={} n_ce>={})", k.n_geo, k.n_ce_lower));
            }
            (ok, detail)
        }),
    );

    if let Some(Builtin::Ga(a)) = builtin {
        suite.record(
            "ga-closed-form-jacobian",
            (|| {
                let mut worst: f64 = 0.0;
                for c in &small {
                    if !crate::catalog::ga_in_box(a, &c.mu) {
                        continue;
                    }
                    let closed = ga_jacobian(a, c)?;
                    let det = jacobian(alg, c, &series)?;
                    worst = worst.max(rel_err(closed, det));
                }
                Ok((worst < 1e-9, format!("max rel err {worst:e}")))
            })(),
        );
    }

    suite.record(
        "infinite-order-at-zero-xi",
        (|| {
            let c = Covector::new(nalgebra::DVector::zeros(alg.q1()), covs[0].mu.clone());
            let g = gamma_point(alg, &c, DEFAULT_RANK_TOL)?;
            let j = jacobian(alg, &c, &series)?;
            Ok((g == Order::Infinite && j == 0.0, format!("gamma {g}, jacobian {j:e}")))
        })(),
    );

    suite.results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_heisenberg() {
        let b = Builtin::Heisenberg;
        let alg = b.algebra::<f64>().unwrap();
        let res = run_suite(&alg, Some(&b), &VerifyConfig { samples: 6, seed: 1 });
        for r in &res {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
