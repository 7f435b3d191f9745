use std::fs;

use omdp_core::campaign::{run_theorem, CampaignCase, CampaignConfig, VerdictManifest, Verdict};
use omdp_core::encoder::EncodingMode;
use omdp_core::solver::{solve, Backend, SolveStatus, SolverConfig};

fn config(dir: &std::path::Path) -> CampaignConfig {
    CampaignConfig { results_dir: dir.to_path_buf(), ..Default::default() }
}

#[test]
fn rerun_reuses_records_and_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let case = CampaignCase::builtin("sm-4-9").unwrap();
    let first = run_theorem(&case, &config(dir.path())).unwrap();
    assert_eq!(first.verdict, Verdict::TheoremHolds);
    assert!(first.instances.iter().all(|r| !r.cached));

    let second = run_theorem(&case, &config(dir.path())).unwrap();
    assert!(second.instances.iter().all(|r| r.cached));
    let hashes = |m: &VerdictManifest| m.instances.iter().map(|r| r.cnf_sha256.clone()).collect::<Vec<_>>();
    assert_eq!(hashes(&first), hashes(&second));

    let forced = run_theorem(&case, &CampaignConfig { force: true, ..config(dir.path()) }).unwrap();
    assert!(forced.instances.iter().all(|r| !r.cached));
    assert_eq!(hashes(&first), hashes(&forced));
}

#[test]
fn manifest_alone_gives_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let case = CampaignCase::builtin("sm-4-9").unwrap();
    run_theorem(&case, &config(dir.path())).unwrap();
    let path = dir.path().join("sm-4-9/manifest.json");
    let loaded = VerdictManifest::load(&path).unwrap();
    assert_eq!(loaded.instances.len(), 8);
    assert_eq!(loaded.recomputed_verdict(), Verdict::TheoremHolds);
    for r in &loaded.instances {
        let rec = dir.path().join("sm-4-9").join(&r.id).join("record.json");
        assert!(rec.is_file(), "{}", rec.display());
        assert_eq!(r.expected, Some(SolveStatus::Unsat));
    }
}

#[test]
fn changed_mode_changes_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let mut case = CampaignCase::builtin("sm-4-9").unwrap();
    let a = run_theorem(&case, &config(dir.path())).unwrap();
    case.mode = EncodingMode::PaperExact;
    let b = run_theorem(&case, &config(dir.path())).unwrap();
    assert!(b.instances.iter().all(|r| !r.cached));
    assert_ne!(a.instances[0].cnf_sha256, b.instances[0].cnf_sha256);
}

#[test]
fn kept_artifacts_match_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let case = CampaignCase::builtin("sm-4-9").unwrap();
    let m = run_theorem(&case, &CampaignConfig { keep_artifacts: true, ..config(dir.path()) }).unwrap();
    let rec = &m.instances[0];
    let inst_dir = dir.path().join("sm-4-9").join(&rec.id);
    let cnf = fs::read(inst_dir.join("instance.cnf")).unwrap();
    use sha2::Digest;
    assert_eq!(hex::encode(sha2::Sha256::digest(&cnf)), rec.cnf_sha256);
    assert_eq!(fs::read_to_string(inst_dir.join("solver.out")).unwrap().trim(), "s UNSATISFIABLE");
}

#[test]
fn failing_external_solver_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let case = CampaignCase::builtin("sm-4-9").unwrap();
    let solver = SolverConfig {
        backend: Backend::External,
        external_command: Some("echo 's UNKNOWN' ; true {cnf}".into()),
        ..Default::default()
    };
    let m = run_theorem(&case, &CampaignConfig { solver, fail_fast: true, ..config(dir.path()) }).unwrap();
    assert_eq!(m.verdict, Verdict::Inconclusive);
    assert_eq!(m.instances[0].status, SolveStatus::Timeout);
    let skipped = m.instances.iter().filter(|r| r.diagnostics.as_deref().is_some_and(|d| d.contains("fail-fast"))).count();
    assert_eq!(skipped, 7);
}

#[test]
fn embedded_solver_is_deterministic() {
    let case = CampaignCase::builtin("sm-4-9").unwrap();
    let spec = &case.instances()[4];
    let inst = case.build_instance(spec, &case.exclusion_paths().unwrap()).unwrap();
    let cfg = SolverConfig { seed: 11, ..Default::default() };
    let a = solve(&inst.formula, &cfg);
    let b = solve(&inst.formula, &cfg);
    assert_eq!(a.status, b.status);
    assert_eq!(a.stats, b.stats);
    assert_eq!(a.status, SolveStatus::Unsat);
    assert!(a.stats.unwrap().conflicts > 10);
}
