use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn carnot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carnot"))
        .args(args)
        .env_remove("CARNOT_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("carnot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn heisenberg_exponents() {
    let doc = json(&carnot(&["exponents", "--group", "heisenberg"]));
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["manifest"]["command"], "exponents");
    let r = &doc["result"];
    assert_eq!(r["n_geo"], 5);
    assert_eq!(r["gamma_group"], 0);
    assert_eq!(r["Q"], 4);
}

#[test]
fn star_two_exponents() {
    let r = json(&carnot(&["exponents", "--group", "star:2", "--samples", "64"]))["result"].clone();
    assert_eq!(r["n_geo"], 9);
    assert_eq!(r["n_ce_lower"], 11);
    assert_eq!(r["closed_form"]["n_geo"], 9);
}

#[test]
fn info_dimensions() {
    for (g, n, q) in [("heisenberg", 3, 4), ("star:2", 5, 7), ("star:3", 7, 10), ("free:3", 6, 9), ("free:4", 10, 16)] {
        let doc = json(&carnot(&["info", "--group", g]));
        assert_eq!(doc["result"]["n"], n, "{g}");
        assert_eq!(doc["result"]["Q"], q, "{g}");
        assert_eq!(doc["manifest"]["group"]["n"], n, "{g}");
    }
}

#[test]
fn ga_group_from_file() {
    let path = scratch("a.json");
    std::fs::write(&path, "[[1.0, 0.5], [0.0, 2.0]]").unwrap();
    let g = format!("ga:{}", path.display());
    let doc = json(&carnot(&["info", "--group", &g]));
    assert_eq!(doc["result"]["n"], 6);
    assert_eq!(doc["result"]["Q"], 8);
    let check = json(&carnot(&["ce-check", "--group", &g, "--xi", "1,0,0,1", "--mu", "0.3,0.2", "--n", "12"]));
    assert_eq!(check["result"]["proxy"], "ga-box");
}

#[test]
fn verify_passes_on_free_three() {
    let out = carnot(&["verify", "--group", "free:3", "--samples", "5"]);
    let doc = json(&out);
    assert_eq!(doc["result"]["passed"], true);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.lines().all(|l| l.starts_with("PASS")), "{stderr}");
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(carnot(&["info", "--group", "nope"]).status.code(), Some(2));
    assert_eq!(carnot(&["sexp", "--group", "heisenberg", "--xi", "1", "--mu", "0"]).status.code(), Some(2));
    assert_eq!(carnot(&["ce-search", "--group", "heisenberg", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn replay_round_trip() {
    let out = carnot(&["ce-search", "--group", "star:2", "--n", "10", "--samples", "200", "--seed", "7"]);
    let path = scratch("search.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let again = carnot(&["replay", path.to_str().unwrap()]);
    assert!(again.status.success(), "{}", String::from_utf8_lossy(&again.stderr));
    assert_eq!(json(&again)["result"], json(&out)["result"]);
}

#[test]
fn replay_detects_tampering() {
    let out = carnot(&["sexp", "--group", "heisenberg", "--xi", "1,0", "--mu", "0.5"]);
    let mut doc = json(&out);
    doc["result"]["x"][0] = Value::from(2.0);
    let path = scratch("tampered.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(carnot(&["replay", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn flow_csv_and_replay() {
    let out = carnot(&[
        "flow", "--group", "heisenberg", "--xi", "1,0", "--mu", "1", "--step", "0.01", "--every", "10", "--out", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let head: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(head["manifest"]["command"], "flow");
    assert_eq!(lines.next().unwrap(), "t,x1,x2,u1,xi1,xi2");
    assert_eq!(lines.count(), 11);
    let path = scratch("flow.csv");
    std::fs::write(&path, &text).unwrap();
    assert!(carnot(&["replay", path.to_str().unwrap()]).status.success());
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, flag: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_carnot"));
        c.args(["exponents", "--group", "star:2", "--samples", "32"]).args(flag);
        match env {
            Some(v) => c.env("CARNOT_SEED", v),
            None => c.env_remove("CARNOT_SEED"),
        };
        json(&c.output().unwrap())
    };
    let from_env = run(Some("42"), &[]);
    let from_flag = run(None, &["--seed", "42"]);
    assert_eq!(from_env["manifest"]["seed"], 42);
    assert_eq!(from_env["result"], from_flag["result"]);
}

#[test]
fn jacobian_extended_flag() {
    let doc = json(&carnot(&["jacobian", "--group", "heisenberg", "--xi", "1,0", "--mu", "0.5", "--extended"]));
    let (a, b) = (doc["result"]["jacobian"].as_f64().unwrap(), doc["result"]["jacobian_extended"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-14 * b.abs());
}
