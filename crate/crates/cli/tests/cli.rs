use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const ENV_KEYS: [&str; 8] = [
    "EDL_SEED",
    "EDL_SHARDS",
    "EDL_SAMPLES",
    "EDL_QUAD_NODES",
    "EDL_REL_TOL",
    "EDL_SIGMA_TOL",
    "EDL_FORMAT",
    "EDL_CONFIG",
];

fn edl() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_edl"));
    for k in ENV_KEYS {
        cmd.env_remove(k);
    }
    cmd
}

fn run(args: &[&str]) -> Output {
    edl().args(args).output().expect("edl runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn roots_e7_reports_cell_count() {
    let out = run(&["roots", "E", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1451520"), "{text}");
    assert!(text.contains("PASS  roots"));
}

#[test]
fn roots_g2_enumerates_weyl_group() {
    let out = run(&["--format", "json", "roots", "G", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let weyl = v["records"].as_array().unwrap().iter().find(|r| r["command"] == "weyl").expect("weyl record");
    assert_eq!(weyl["computed"], "12");
}

#[test]
fn ct_a2_k2_is_ninety() {
    let out = run(&["--format", "json", "ct", "A", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert!(records.iter().all(|r| r["computed"] == "90" && r["pass"] == true));
}

#[test]
fn ct_bc1_mixed_multiplicities() {
    let out = run(&["ct", "BC", "1", "--k", "1,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("general"));
}

#[test]
fn verify_row_fii() {
    let out = run(&["--format", "json", "verify", "FII"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["all_pass"], true);
    assert!(v["records"].as_array().unwrap().iter().any(|r| r["command"] == "restricted"));
}

#[test]
fn verify_split_suite_passes() {
    let out = run(&["verify", "--suite", "split"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("8/8 records pass"));
}

#[test]
fn failing_record_exits_one() {
    // quadrature agrees to ~1e-15, so a 1e-18 tolerance must fail
    let out = run(&["verify", "--suite", "split", "--rel-tol", "1e-18"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["verify", "NOPE"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "AIV"]).status.code(), Some(2));
    assert_eq!(run(&["roots", "D", "2"]).status.code(), Some(2));
    assert_eq!(run(&["roots", "Q", "2"]).status.code(), Some(2));
    assert_eq!(run(&["ct", "BC", "2", "--k", "1,2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["--rel-tol", "2", "verify", "FII"]).status.code(), Some(2));
}

fn strip_runtime(s: &str) -> String {
    s.lines().filter(|l| !l.contains("\"runtime_ms\"")).collect::<Vec<_>>().join("\n")
}

#[test]
fn json_is_deterministic_apart_from_runtime() {
    let args = ["--format", "json", "--samples", "50000", "verify", "--suite", "classical"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip_runtime(&stdout(&a)), strip_runtime(&stdout(&b)));
    let other = run(&["--format", "json", "--samples", "50000", "--seed", "7", "verify", "--suite", "classical"]);
    assert_ne!(strip_runtime(&stdout(&a)), strip_runtime(&stdout(&other)));
}

#[test]
fn config_precedence_flag_env_file() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("edl_precedence.conf");
    std::fs::write(&path, "# test config\nseed = 7\nquad_nodes = 32\n").unwrap();
    let path = path.to_str().unwrap();
    let seed_of = |out: Output| json(&out)["config"]["seed"].as_u64().unwrap();

    let file_only = edl().args(["--config", path, "--format", "json", "verify", "FII"]).output().unwrap();
    assert_eq!(json(&file_only)["config"]["quad_nodes"], 32);
    assert_eq!(seed_of(file_only), 7);

    let env_over_file =
        edl().env("EDL_SEED", "8").args(["--config", path, "--format", "json", "verify", "FII"]).output().unwrap();
    assert_eq!(seed_of(env_over_file), 8);

    let flag_over_env = edl()
        .env("EDL_SEED", "8")
        .args(["--config", path, "--seed", "9", "--format", "json", "verify", "FII"])
        .output()
        .unwrap();
    assert_eq!(seed_of(flag_over_env), 9);

    let env_format = edl().env("EDL_FORMAT", "json").args(["verify", "FII"]).output().unwrap();
    assert_eq!(json(&env_format)["config"]["seed"], 42);
}

#[test]
fn csv_is_a_flat_projection() {
    let out = run(&["--format", "csv", "verify", "--suite", "split"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("command,inputs,expected,computed,abs_err,rel_err,sigma"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn show_aiv_period() {
    let out = run(&["show", "AIV", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("15 / 9 / 4"), "{text}");
    assert!(text.contains("4·√(3)·π"), "{text}");
}

#[test]
fn show_ai_special_case() {
    let out = run(&["--format", "json", "show", "AI", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(!v["entry"]["special_notes"].as_array().unwrap().is_empty());
}

#[test]
fn show_evii_period() {
    let out = run(&["--format", "json", "show", "EVII"]);
    let v = json(&out);
    let t = v["entry"]["periods"][0]["values"][0]["value"].as_f64().unwrap();
    assert!((t - 2.0 * std::f64::consts::PI * 1.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn thin_regions_skip_the_identity() {
    let out = run(&["verify", "EVIII"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipped"));
}
