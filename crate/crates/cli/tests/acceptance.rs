//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use carnot_core::algebra::Covector as CovectorT;
use carnot_core::analysis::{
    ce_criterion, ce_search_violation, default_ce_grid, default_leading_grid, geo_slope, geometric_range,
    leading_order, CovectorBox, DomainProxy, SearchConfig, DEFAULT_FLOOR,
};
use carnot_core::catalog::{self, ga_in_box, ga_jacobian, Builtin, GAMatrix};
use carnot_core::expmap::{dilate, eta, jacobian, jacobian_extended, sexp, zeta};
use carnot_core::flow::{check_conservation, integrate};
use carnot_core::gamma::{
    a_zero, filtration, gamma_point, group_exponents, hilbert_gram, ExponentConfig, DEFAULT_RANK_TOL,
};
use carnot_core::sampling::{gaussian_covector, substream, StrataSpec};
use carnot_core::verify::{sample_covectors, sample_regular_covectors};
use carnot_core::{Algebra, Covector, Result, SeriesConfig};
use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<(bool, String)>;

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn catalog_groups() -> Vec<(Builtin, Algebra)> {
    Builtin::standard_set()
        .into_iter()
        .map(|b| {
            let alg = b.algebra().expect("builtin");
            (b, alg)
        })
        .collect()
}

fn heisenberg_exponents() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_carnot"))
        .args(["exponents", "--group", "heisenberg"])
        .output()
        .expect("binary runs");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("JSON output");
    let r = &doc["result"];
    let got = [&r["n"], &r["Q"], &r["gamma_group"], &r["n_geo"]].map(|v| v.as_u64().unwrap_or(u64::MAX));
    Ok((out.status.success() && got == [3, 4, 0, 5], format!("n, Q, Γ, N_GEO = {got:?}")))
}

fn free_groups() -> Check {
    let mut ok = true;
    let mut detail = Vec::new();
    for k in [3usize, 4] {
        let alg: Algebra = catalog::free(k)?;
        let r = group_exponents(&alg, &ExponentConfig::new(64, StrataSpec::none(), 0))?;
        let expected = (3 * k * k - k) / 2 + k * (k - 1) * (k - 2) / 3;
        ok &= r.n_geo == expected;
        for c in sample_covectors(&alg, 20, 100 + k as u64, 1.0) {
            let f = filtration(&alg, &c, DEFAULT_RANK_TOL)?;
            ok &= (0..=k - 2).all(|l| f.w_dim(l) == k - l - 1) && f.w_inf_dim == 0;
        }
        detail.push(format!("free({k}) N_GEO={} (expected {expected})", r.n_geo));
    }
    Ok((ok, detail.join(", ")))
}

fn star_groups() -> Check {
    let mut ok = true;
    let mut detail = Vec::new();
    for k in [2usize, 3] {
        let alg: Algebra = catalog::star(k)?;
        let r = group_exponents(&alg, &ExponentConfig::new(64, StrataSpec::auto(k + 1, k), 0))?;
        ok &= r.gamma_group == 0 && r.gamma_hat_lower == 2 * k - 2 && r.n_ce_lower - r.n_geo == 2 * k - 2;
        let cfg = SearchConfig::new(10_000, StrataSpec::auto(k + 1, k), 0);
        let s = ce_search_violation(&alg, (r.n_geo + 1) as f64, &cfg, &DomainProxy::General, &SeriesConfig::default())?;
        ok &= s.violation.is_some();
        detail.push(format!(
            "star({k}) Γ={} Γ̂≥{} gap={} witness at sample {:?}",
            r.gamma_group,
            r.gamma_hat_lower,
            r.n_ce_lower - r.n_geo,
            s.violation.map(|v| v.sample_index)
        ));
    }
    Ok((ok, detail.join(", ")))
}

const GA_CLASSES: [(usize, usize); 10] = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4)];

fn random_ga(m: usize, k: usize, seed: u64) -> GAMatrix<f64> {
    let mut rng = substream(seed, 0);
    loop {
        let a = DMatrix::from_fn(m, k, |_, _| StandardNormal.sample(&mut rng));
        if let Ok(a) = GAMatrix::new(a) {
            return a;
        }
    }
}

fn ga_groups() -> Check {
    let cfg = SeriesConfig::default();
    // Closed form against the determinant on 200 random (A, covector) instances.
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let (m, k) = GA_CLASSES[i as usize % GA_CLASSES.len()];
        let a = random_ga(m, k, 1000 + i);
        let alg = catalog::from_ga(&a)?;
        let mut rng = substream(2000 + i, 0);
        let c = loop {
            let c: Covector = gaussian_covector(&mut rng, 2 * k, m);
            if ga_in_box(&a, &c.mu) {
                break c;
            }
        };
        worst = worst.max(rel(ga_jacobian(&a, &c)?, jacobian(&alg, &c, &cfg)?));
    }
    let mut ok = worst <= 1e-9;
    // The criterion at N = 2k + 3m on 10^4 accepted samples per class.
    let grid = default_ce_grid();
    let mut failures = 0;
    for (idx, &(m, k)) in GA_CLASSES.iter().enumerate() {
        let a = random_ga(m, k, 3000 + idx as u64);
        let alg = catalog::from_ga(&a)?;
        let proxy = DomainProxy::GaBox(a.clone());
        let n = (2 * k + 3 * m) as f64;
        let mut accepted = 0;
        let mut next = 0u64;
        while accepted < 10_000 {
            let batch = 10_000 - accepted;
            let res: Vec<Option<bool>> = (next..next + batch as u64)
                .into_par_iter()
                .map(|i| {
                    let c: Covector = gaussian_covector(&mut substream(4000 + idx as u64, i), 2 * k, m);
                    if !proxy.accepts(&alg, &c, &cfg)? {
                        return Ok(None);
                    }
                    ce_criterion(&alg, n, &c, &grid, &proxy, &cfg).map(|r| Some(r.holds))
                })
                .collect::<Result<_>>()?;
            next += batch as u64;
            accepted += res.iter().flatten().count();
            failures += res.iter().flatten().filter(|h| !**h).count();
        }
    }
    ok &= failures == 0;
    Ok((ok, format!("closed form max rel err {worst:.2e}; criterion failures {failures} over 10 classes")))
}

fn homogeneity() -> Check {
    let cfg = SeriesConfig::default();
    let mut worst_jac: f64 = 0.0;
    let mut worst_plain: f64 = 0.0;
    let mut worst_exp: f64 = 0.0;
    for (gi, (_, alg)) in catalog_groups().iter().enumerate() {
        let p = 2 * (alg.homogeneous_dim() - alg.dim()) as i32;
        let lambdas = Uniform::new(0.1, 2.0).expect("valid range");
        for (i, c) in sample_covectors(alg, 100, 500 + gi as u64, 1.0).iter().enumerate() {
            let l: f64 = lambdas.sample(&mut substream(600 + gi as u64, i as u64));
            let lhs = jacobian_extended(alg, &c.scaled(l))?;
            let rhs = l.powi(p) * jacobian_extended(alg, &zeta(l, c))?;
            worst_jac = worst_jac.max(rel(lhs, rhs));
            let lhs = jacobian(alg, &c.scaled(l), &cfg)?;
            let rhs = l.powi(p) * jacobian(alg, &zeta(l, c), &cfg)?;
            worst_plain = worst_plain.max(rel(lhs, rhs));
            let a = sexp(alg, &eta(l, c)?, &cfg)?.to_vector();
            let b = dilate(l, &sexp(alg, c, &cfg)?).to_vector();
            worst_exp = worst_exp.max((&a - &b).amax() / a.amax().max(b.amax()));
        }
    }
    Ok((
        worst_jac <= 1e-9 && worst_exp <= 1e-9,
        format!("Jacobian {worst_jac:.2e} (f64 only: {worst_plain:.2e}), exponential map {worst_exp:.2e}"),
    ))
}

fn filtration_agreement() -> Check {
    let cfg = SeriesConfig::default();
    let grid = default_leading_grid();
    let mut mismatches = Vec::new();
    let mut total = 0;
    for (gi, (b, alg)) in catalog_groups().iter().enumerate() {
        let covs = sample_regular_covectors(alg, 50, 700 + gi as u64)?;
        let results: Vec<bool> = covs
            .par_iter()
            .map(|c| Ok(gamma_point(alg, c, DEFAULT_RANK_TOL)? == leading_order(alg, c, &grid, DEFAULT_FLOOR, &cfg)?.gamma_est))
            .collect::<Result<_>>()?;
        total += results.len();
        let bad = results.iter().filter(|r| !**r).count();
        if bad > 0 {
            mismatches.push(format!("{b}: {bad}"));
        }
    }
    Ok((mismatches.is_empty(), format!("{total} covectors, mismatches {mismatches:?}")))
}

fn a_zero_structure() -> Check {
    let mut worst: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    for (gi, (_, alg)) in catalog_groups().iter().enumerate() {
        for c in sample_regular_covectors(alg, 100, 800 + gi as u64)? {
            let a = a_zero(alg, &c, DEFAULT_RANK_TOL)?;
            let m = hilbert_gram(alg, &c, DEFAULT_RANK_TOL)?;
            worst = worst.max(rel(a.det, m.product_formula()));
            min_eig = min_eig.min(m.min_eigenvalue);
        }
    }
    Ok((worst <= 1e-9 && min_eig > 0.0, format!("max rel err {worst:.2e}, smallest eigenvalue {min_eig:.3e}")))
}

fn volume_scaling() -> Check {
    let cfg = SeriesConfig::default();
    let grid = geometric_range(1e-1, 1e-3, 9);
    let cases: [(Algebra, CovectorBox, f64, f64); 3] = [
        (catalog::heisenberg(), CovectorBox::new(vec![0.9, 0.9, -0.1], vec![1.1, 1.1, 0.1]), 5.0, 0.05),
        (
            catalog::free(3)?,
            CovectorBox::around(&CovectorT::from_slices(&[1.0, -0.5, 0.7], &[0.6, -0.4, 0.8]), 0.1),
            14.0,
            0.1,
        ),
        (
            catalog::star(2)?,
            CovectorBox::around(&CovectorT::from_slices(&[1.0, 0.6, -0.8], &[0.5, -0.7]), 0.1),
            9.0,
            0.1,
        ),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (alg, region, target, tol) in &cases {
        let scan = geo_slope(alg, region, &grid, 100_000, 0, &cfg)?;
        ok &= (scan.slope - target).abs() <= *tol;
        detail.push(format!("{} {:.4}", alg.name(), scan.slope));
    }
    Ok((ok, format!("slopes {}", detail.join(", "))))
}

fn ode_cross_check() -> Check {
    let cfg = SeriesConfig::default();
    let mut err: f64 = 0.0;
    let mut drift: f64 = 0.0;
    for (gi, (_, alg)) in catalog_groups().iter().enumerate() {
        let covs = sample_covectors(alg, 50, 900 + gi as u64, 1.0);
        let res: Vec<(f64, f64)> = covs
            .par_iter()
            .map(|c| {
                let tr = integrate(alg, c, 1.0, 1e-3)?;
                let p = sexp(alg, c, &cfg)?;
                let e = (tr.endpoint().point().to_vector() - p.to_vector()).amax();
                Ok((e, check_conservation(alg, &tr)?.max_drift()))
            })
            .collect::<Result<_>>()?;
        for (e, d) in res {
            err = err.max(e);
            drift = drift.max(d);
        }
    }
    Ok((err <= 1e-8 && drift < 1e-8, format!("endpoint err {err:.2e}, drift {drift:.2e}")))
}

fn main() {
    type Criterion = (&'static str, fn() -> Check, Duration);
    let criteria: [Criterion; 9] = [
        ("Heisenberg exponents", heisenberg_exponents, Duration::from_secs(1)),
        ("free groups", free_groups, Duration::from_secs(10)),
        ("star graphs", star_groups, Duration::from_secs(30)),
        ("G_A closed form and criterion", ga_groups, Duration::from_secs(120)),
        ("homogeneity identities", homogeneity, Duration::from_secs(10)),
        ("filtration vs asymptotics", filtration_agreement, Duration::from_secs(30)),
        ("a(0) structure", a_zero_structure, Duration::from_secs(30)),
        ("volume scaling", volume_scaling, Duration::from_secs(300)),
        ("ODE cross-check", ode_cross_check, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok((ok, d)) => (ok && elapsed <= *budget, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {detail} [{:.2}s of {}s]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
