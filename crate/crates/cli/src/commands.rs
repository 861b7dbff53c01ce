use crate::args::*;
use crate::group::Group;
use carnot_core::analysis::{
    ce_criterion, ce_search_violation, default_ce_grid, default_leading_grid, geo_slope, geometric_range,
    leading_order, CovectorBox, DomainProxy, SearchConfig,
};
use carnot_core::expmap::{dsexp_with, jacobian_extended, sexp, DiffMode};
use carnot_core::flow::{check_conservation, integrate};
use carnot_core::gamma::{filtration, group_exponents, ExponentConfig};
use carnot_core::sampling::StrataSpec;
use carnot_core::verify::{run_suite, VerifyConfig};
use carnot_core::{Covector, Error, Result, SeriesConfig};
use serde_json::{json, Value};
use std::fmt::Write as _;

/// What a subcommand produced.
pub enum Payload {
    Json(Value),
    Csv(String),
}

pub struct Outcome {
    pub payload: Payload,
    /// Set by `verify` when a property fails.
    pub failed: bool,
}

impl Outcome {
    fn json(v: Value) -> Self {
        Self {
            payload: Payload::Json(v),
            failed: false,
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

fn covector(group: &Group, args: &CovectorArgs) -> Result<Covector> {
    let c = Covector::from_slices(&args.xi, &args.mu);
    group.alg.check_covector(&c)?;
    Ok(c)
}

fn strata(spec: &str, group: &Group) -> Result<StrataSpec> {
    match spec {
        "auto" => Ok(StrataSpec::auto(group.alg.q1(), group.alg.q2())),
        "none" => Ok(StrataSpec::none()),
        path => {
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read '{path}': {e}")))?;
            StrataSpec::from_json(&text)
        }
    }
}

/// The grid flags override the defaults one by one; with none given the
/// command's default grid is used unchanged.
fn grid(args: &GridArgs, default: Vec<f64>) -> Result<Vec<f64>> {
    if args.lambda_min.is_none() && args.lambda_max.is_none() && args.grid.is_none() {
        return Ok(default);
    }
    let max = args.lambda_max.unwrap_or(default[0]);
    let min = args.lambda_min.unwrap_or(*default.last().expect("default grids are nonempty"));
    let points = args.grid.unwrap_or(default.len());
    if !(min > 0.0 && max <= 1.0 && min < max) || points < 2 {
        return Err(Error::Input("grid needs 0 < lambda-min < lambda-max <= 1 and at least 2 points".into()));
    }
    Ok(geometric_range(max, min, points))
}

fn proxy(kind: Option<ProxyKind>, group: &Group) -> Result<DomainProxy> {
    match (kind, group.ga_matrix()) {
        (Some(ProxyKind::General), _) | (None, None) => Ok(DomainProxy::General),
        (Some(ProxyKind::Ga), Some(a)) | (None, Some(a)) => Ok(DomainProxy::GaBox(a.clone())),
        (Some(ProxyKind::Ga), None) => Err(Error::Input("the ga proxy needs a ga:<file> group".into())),
    }
}

pub fn info(group: &Group) -> Result<Outcome> {
    let alg = &group.alg;
    Ok(Outcome::json(json!({
        "name": alg.name(),
        "n": alg.dim(),
        "Q": alg.homogeneous_dim(),
        "v1_dim": alg.q1(),
        "v2_dim": alg.q2(),
        "diagnostics": to_value(&alg.diagnostics()),
        "known_exponents": group.builtin.as_ref().map(|b| to_value(&b.known_exponents())),
    })))
}

pub fn sexp_cmd(group: &Group, args: &PointArgs) -> Result<Outcome> {
    let c = covector(group, &args.cov)?;
    let p = sexp(&group.alg, &c, &SeriesConfig::default())?;
    Ok(Outcome::json(to_value(&p)))
}

pub fn jacobian_cmd(group: &Group, args: &JacobianArgs) -> Result<Outcome> {
    let c = covector(group, &args.cov)?;
    let mode = match args.finite_difference {
        Some(step) => DiffMode::FiniteDifference { step },
        None => DiffMode::Series,
    };
    let d = dsexp_with(&group.alg, &c, &SeriesConfig::default(), mode)?;
    let rows: Vec<Vec<f64>> = d.row_iter().map(|r| r.iter().copied().collect()).collect();
    let mut v = json!({
        "jacobian": d.determinant(),
        "mode": if args.finite_difference.is_some() { "finite-difference" } else { "series" },
        "differential": rows,
    });
    if args.extended {
        v["jacobian_extended"] = json!(jacobian_extended(&group.alg, &c)?);
    }
    Ok(Outcome::json(v))
}

pub fn flow_cmd(group: &Group, args: &FlowArgs) -> Result<Outcome> {
    let c = covector(group, &args.cov)?;
    if args.every == 0 {
        return Err(Error::Input("--every must be positive".into()));
    }
    let tr = integrate(&group.alg, &c, args.t_end, args.step)?;
    let kept = tr
        .times
        .iter()
        .zip(&tr.states)
        .enumerate()
        .filter(|(i, _)| i % args.every == 0 || *i + 1 == tr.states.len())
        .map(|(_, s)| s);
    match args.out {
        Format::Csv => {
            let (q1, q2) = (group.alg.q1(), group.alg.q2());
            let mut head = vec!["t".to_string()];
            head.extend((1..=q1).map(|i| format!("x{i}")));
            head.extend((1..=q2).map(|a| format!("u{a}")));
            head.extend((1..=q1).map(|i| format!("xi{i}")));
            let mut out = head.join(",");
            out.push('\n');
            for (t, s) in kept {
                let row: Vec<String> = std::iter::once(*t)
                    .chain(s.x.iter().copied())
                    .chain(s.u.iter().copied())
                    .chain(s.xi.iter().copied())
                    .map(|v| format!("{v:e}"))
                    .collect();
                let _ = writeln!(out, "{}", row.join(","));
            }
            Ok(Outcome {
                payload: Payload::Csv(out),
                failed: false,
            })
        }
        Format::Json => {
            let states: Vec<Value> = kept
                .map(|(t, s)| json!({"t": t, "x": s.x.as_slice(), "u": s.u.as_slice(), "xi": s.xi.as_slice()}))
                .collect();
            let end = tr.endpoint();
            Ok(Outcome::json(json!({
                "steps": tr.states.len() - 1,
                "step": tr.step(),
                "endpoint": to_value(&end.point()),
                "conservation": to_value(&check_conservation(&group.alg, &tr)?),
                "states": states,
            })))
        }
    }
}

pub fn filtration_cmd(group: &Group, args: &FiltrationArgs) -> Result<Outcome> {
    let c = covector(group, &args.cov)?;
    let f = filtration(&group.alg, &c, args.rank_tol)?;
    Ok(Outcome::json(json!({
        "u_dims": f.u_dims,
        "w_dims": f.w_dims,
        "w_inf_dim": f.w_inf_dim,
        "d": f.d,
        "gamma": to_value(&f.n_sexp),
        "marginal": to_value(&f.marginal),
    })))
}

pub fn exponents_cmd(group: &Group, args: &ExponentArgs) -> Result<Outcome> {
    let cfg = ExponentConfig::new(args.samples, strata(&args.strata, group)?, args.seed.seed);
    let r = group_exponents(&group.alg, &cfg)?;
    let mut v = to_value(&r);
    if let Some(b) = &group.builtin {
        v["closed_form"] = to_value(&b.known_exponents());
    }
    Ok(Outcome::json(v))
}

pub fn leading_order_cmd(group: &Group, args: &LeadingArgs) -> Result<Outcome> {
    let c = covector(group, &args.cov)?;
    let g = grid(&args.grid, default_leading_grid())?;
    let lo = leading_order(&group.alg, &c, &g, args.floor, &SeriesConfig::default())?;
    Ok(Outcome::json(to_value(&lo)))
}

pub fn volume_scan_cmd(group: &Group, args: &VolumeArgs) -> Result<Outcome> {
    let c = covector(group, &args.cov)?;
    let g = grid(&args.grid, geometric_range(1e-1, 1e-3, 9))?;
    let region = CovectorBox::around(&c, args.radius);
    let scan = geo_slope(&group.alg, &region, &g, args.samples, args.seed.seed, &SeriesConfig::default())?;
    let payload = match args.out {
        Format::Json => Payload::Json(to_value(&scan)),
        Format::Csv => {
            let mut out = String::from("lambda,volume,std_error\n");
            for ((l, v), e) in scan.lambdas.iter().zip(&scan.volumes).zip(&scan.std_errors) {
                let _ = writeln!(out, "{l:e},{v:e},{e:e}");
            }
            Payload::Csv(out)
        }
    };
    Ok(Outcome { payload, failed: false })
}

pub fn ce_check_cmd(group: &Group, args: &CeCheckArgs) -> Result<Outcome> {
    let c = covector(group, &args.cov)?;
    let g = grid(&args.grid, default_ce_grid())?;
    let p = proxy(args.proxy, group)?;
    let r = ce_criterion(&group.alg, args.n_exp, &c, &g, &p, &SeriesConfig::default())?;
    Ok(Outcome::json(json!({
        "holds": r.holds,
        "witness": to_value(&r.witness),
        "proxy": p.label(),
        "grid": g,
    })))
}

pub fn ce_search_cmd(group: &Group, args: &CeSearchArgs) -> Result<Outcome> {
    let p = proxy(args.proxy, group)?;
    let mut cfg = SearchConfig::new(args.samples, strata(&args.strata, group)?, args.seed.seed);
    cfg.grid = grid(&args.grid, default_ce_grid())?;
    let out = ce_search_violation(&group.alg, args.n_exp, &cfg, &p, &SeriesConfig::default())?;
    let status = if out.violation.is_some() { "violation found" } else { "no violation found" };
    let mut v = to_value(&out);
    v["status"] = json!(status);
    v["proxy"] = json!(p.label());
    Ok(Outcome::json(v))
}

pub fn verify_cmd(group: &Group, args: &VerifyArgs) -> Result<Outcome> {
    if args.samples == 0 {
        return Err(Error::Input("--samples must be positive".into()));
    }
    let cfg = VerifyConfig {
        samples: args.samples,
        seed: args.seed.seed,
    };
    let results = run_suite(&group.alg, group.builtin.as_ref(), &cfg);
    let passed = results.iter().all(|r| r.passed);
    Ok(Outcome {
        payload: Payload::Json(json!({ "passed": passed, "properties": to_value(&results) })),
        failed: !passed,
    })
}
