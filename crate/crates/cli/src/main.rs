mod args;
mod commands;
mod group;

use args::{Cli, Command};
use carnot_core::Error;
use clap::Parser;
use commands::{Outcome, Payload};
use group::Group;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::process::ExitCode;
use std::time::Instant;

const SCHEMA: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Manifest {
    command: String,
    argv: Vec<String>,
    group: Value,
    params: Value,
    seed: Option<u64>,
    version: String,
    wall_time: f64,
}

#[derive(Serialize, Deserialize)]
struct Document {
    schema: u32,
    manifest: Manifest,
    result: Value,
}

enum Failure {
    Core(Error),
    Replay(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::InvalidAlgebra(_) | Error::Precondition(_) | Error::DegenerateCovector { .. } => 2,
        Error::Convergence { .. }
        | Error::AmbiguousOrder { .. }
        | Error::PathologicalSampling { .. }
        | Error::DegenerateRegion { .. }
        | Error::Divergence { .. } => 3,
        Error::Internal(_) => 1,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Info(_) => "info",
        Command::Sexp(_) => "sexp",
        Command::Jacobian(_) => "jacobian",
        Command::Flow(_) => "flow",
        Command::Filtration(_) => "filtration",
        Command::Exponents(_) => "exponents",
        Command::LeadingOrder(_) => "leading-order",
        Command::VolumeScan(_) => "volume-scan",
        Command::CeCheck(_) => "ce-check",
        Command::CeSearch(_) => "ce-search",
        Command::Verify(_) => "verify",
        Command::Replay(_) => "replay",
    }
}

fn params(c: &Command) -> Value {
    let v = match c {
        Command::Info(a) => serde_json::to_value(a),
        Command::Sexp(a) => serde_json::to_value(a),
        Command::Jacobian(a) => serde_json::to_value(a),
        Command::Flow(a) => serde_json::to_value(a),
        Command::Filtration(a) => serde_json::to_value(a),
        Command::Exponents(a) => serde_json::to_value(a),
        Command::LeadingOrder(a) => serde_json::to_value(a),
        Command::VolumeScan(a) => serde_json::to_value(a),
        Command::CeCheck(a) => serde_json::to_value(a),
        Command::CeSearch(a) => serde_json::to_value(a),
        Command::Verify(a) => serde_json::to_value(a),
        Command::Replay(a) => serde_json::to_value(a),
    };
    v.expect("arguments serialize")
}

fn group_descriptor(c: &Command) -> Option<&str> {
    let g = match c {
        Command::Info(a) => a,
        Command::Sexp(a) => &a.group,
        Command::Jacobian(a) => &a.group,
        Command::Flow(a) => &a.group,
        Command::Filtration(a) => &a.group,
        Command::Exponents(a) => &a.group,
        Command::LeadingOrder(a) => &a.group,
        Command::VolumeScan(a) => &a.group,
        Command::CeCheck(a) => &a.group,
        Command::CeSearch(a) => &a.group,
        Command::Verify(a) => &a.group,
        Command::Replay(_) => return None,
    };
    Some(&g.group)
}

fn dispatch(c: &Command, group: &Group) -> carnot_core::Result<Outcome> {
    match c {
        Command::Info(_) => commands::info(group),
        Command::Sexp(a) => commands::sexp_cmd(group, a),
        Command::Jacobian(a) => commands::jacobian_cmd(group, a),
        Command::Flow(a) => commands::flow_cmd(group, a),
        Command::Filtration(a) => commands::filtration_cmd(group, a),
        Command::Exponents(a) => commands::exponents_cmd(group, a),
        Command::LeadingOrder(a) => commands::leading_order_cmd(group, a),
        Command::VolumeScan(a) => commands::volume_scan_cmd(group, a),
        Command::CeCheck(a) => commands::ce_check_cmd(group, a),
        Command::CeSearch(a) => commands::ce_search_cmd(group, a),
        Command::Verify(a) => commands::verify_cmd(group, a),
        Command::Replay(_) => unreachable!("replay is handled before dispatch"),
    }
}

/// Runs a parsed command and renders the full output document.
fn execute(cli: &Cli, argv: Vec<String>) -> Result<(String, Outcome), Failure> {
    let start = Instant::now();
    let descriptor = group_descriptor(&cli.command).expect("every analysis command takes a group");
    let group = Group::resolve(descriptor)?;
    let outcome = dispatch(&cli.command, &group)?;
    let params = params(&cli.command);
    let manifest = Manifest {
        command: command_name(&cli.command).to_string(),
        argv,
        group: serde_json::to_value(group.record()).expect("group serializes"),
        seed: params.get("seed").and_then(Value::as_u64),
        params,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time: start.elapsed().as_secs_f64(),
    };
    let text = match &outcome.payload {
        Payload::Json(result) => {
            let doc = Document {
                schema: SCHEMA,
                manifest,
                result: result.clone(),
            };
            serde_json::to_string_pretty(&doc).expect("document serializes") + "\n"
        }
        Payload::Csv(body) => {
            let head = serde_json::json!({ "schema": SCHEMA, "manifest": manifest });
            format!("# {head}\n{body}")
        }
    };
    Ok((text, outcome))
}

/// Splits a previous output into its manifest and recorded result.
fn parse_previous(text: &str) -> Result<(Manifest, Result<Value, String>), Failure> {
    let bad = |e: serde_json::Error| Failure::Core(Error::Input(format!("replay input: {e}")));
    if let Some(rest) = text.strip_prefix("# ") {
        let (head, body) = rest.split_once('\n').unwrap_or((rest, ""));
        let mut v: Value = serde_json::from_str(head).map_err(bad)?;
        let manifest = serde_json::from_value(v["manifest"].take()).map_err(bad)?;
        Ok((manifest, Err(body.to_string())))
    } else {
        let doc: Document = serde_json::from_str(text).map_err(bad)?;
        Ok((doc.manifest, Ok(doc.result)))
    }
}

fn replay(path: &std::path::Path) -> Result<(String, Outcome), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read '{}': {e}", path.display())))?;
    let (manifest, recorded) = parse_previous(&text)?;
    if let Some(seed) = manifest.seed {
        // The seed may have come from the environment in the original run.
        std::env::set_var("CARNOT_SEED", seed.to_string());
    }
    let cli = Cli::try_parse_from(&manifest.argv)
        .map_err(|e| Error::Input(format!("recorded arguments no longer parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Error::Input("cannot replay a replay".into()).into());
    }
    let (out, outcome) = execute(&cli, manifest.argv.clone())?;
    let same = match (&recorded, &outcome.payload) {
        (Ok(old), Payload::Json(new)) => old == new,
        (Err(old), Payload::Csv(new)) => old == new,
        _ => false,
    };
    if !same {
        print!("{out}");
        return Err(Failure::Replay(format!("replayed result differs from '{}'", path.display())));
    }
    Ok((out, outcome))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: cannot set worker count: {e}");
            return ExitCode::from(2);
        }
    }
    let run = match &cli.command {
        Command::Replay(a) => replay(&a.file),
        _ => execute(&cli, argv),
    };
    match run {
        Ok((text, outcome)) => {
            print!("{text}");
            if let (Command::Verify(_), Payload::Json(v)) = (&cli.command, &outcome.payload) {
                for p in v["properties"].as_array().into_iter().flatten() {
                    let mark = if p["passed"] == Value::Bool(true) { "PASS" } else { "FAIL" };
                    eprintln!("{mark} {} ({})", p["name"].as_str().unwrap_or(""), p["detail"].as_str().unwrap_or(""));
                }
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Replay(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
