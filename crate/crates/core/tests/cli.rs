use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn omdp() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_omdp"));
    c.env_remove("OMDP_SOLVER_CMD");
    c
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn paths_prints_json_lines() {
    let out = run(omdp().args(["paths", "--case", "sm-5-10-len6"]));
    let lines: Vec<Value> = String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0]["length"], 6);
    assert_eq!(lines[0]["labels"][6], serde_json::json!([6, 7, 8, 9, 10]));

    let out = run(omdp().args(["paths", "--case", "sm-4-9-len5", "--expand"]));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4_608);
    let out = run(omdp().args(["paths", "--case", "direct-4"]));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 576);
}

#[test]
fn encode_solve_extract_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("m.cnf");
    let sol = dir.path().join("m.sol");
    let fixture_path = fixture("shortest6_4_9.txt");
    let summary = json(&run(omdp()
        .args(["encode", "--dim", "4", "--matrix"])
        .arg(&fixture_path)
        .arg("-o")
        .arg(&cnf)));
    assert_eq!(summary["variables"], 462);
    assert_eq!(summary["sections"]["columns"], 21 * 18);

    let result = json(&run(omdp().arg("solve").arg(&cnf).arg("--solution").arg(&sol)));
    assert_eq!(result["status"], "sat");

    let out = run(omdp().arg("extract").arg(&sol).args(["--dim", "4", "--facets", "9"]));
    let text = String::from_utf8(out.stdout).unwrap();
    let back = omdp_core::analysis::parse_facet_vertex_matrix(&text, 4).unwrap();
    let orig = omdp_core::analysis::parse_facet_vertex_matrix(&std::fs::read_to_string(&fixture_path).unwrap(), 4).unwrap();
    assert_eq!(back.column_multiset(), orig.column_multiset());

    let report = json(&run(omdp().arg("extract").arg(&sol).args(["--dim", "4", "--facets", "9", "--format", "json"])));
    assert_eq!(report["vertices"].as_array().unwrap().len(), 21);
    assert_eq!(report["report"]["acyclic"], true);
}

#[test]
fn check_digraph_reports_holt_klee_unsat() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(omdp()
        .arg("check-digraph")
        .arg(fixture("holt_klee_5_10.txt"))
        .args(["--dim", "5", "--results"])
        .arg(dir.path()));
    let m = json(&out);
    assert_eq!(m["instances"][0]["status"], "unsat");
    assert_eq!(m["verdict"], "reported");
    assert!(dir.path().join("check-holt_klee_5_10/manifest.json").is_file());
}

#[test]
fn prove_writes_manifest_and_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(omdp().args(["prove", "sm-4-9", "--jobs", "2", "--results"]).arg(dir.path()));
    assert_eq!(json(&out)["verdict"], "theorem-holds");
    assert!(dir.path().join("sm-4-9/manifest.json").is_file());

    let out = omdp().args(["prove", "sm-5-10", "--tier", "fast"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = omdp().args(["prove", "no-such-case"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown case"));
}

#[test]
fn solver_command_override_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(omdp()
        .args(["prove", "sm-4-9", "--results"])
        .arg(dir.path())
        .env("OMDP_SOLVER_CMD", "echo 's UNSATISFIABLE' ; true {cnf}"));
    let m = json(&out);
    assert_eq!(m["verdict"], "theorem-holds");
    assert!(m["instances"][0]["solver"].as_str().unwrap().starts_with("external"));

    let cfg = dir.path().join("omdp.toml");
    std::fs::write(&cfg, "[solver]\ntimeout_secs = 0\n").unwrap();
    let out = omdp().arg("--config").arg(&cfg).args(["paths", "--case", "direct-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg, "[solver]\nparallel_instances = 2\nseed = 5\n").unwrap();
    run(omdp().arg("--config").arg(&cfg).args(["paths", "--case", "direct-1"]));
}
