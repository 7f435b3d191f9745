//! Acceptance criteria, one pass/fail line each.
//!
//! Runs as a plain binary (`harness = false`) so every criterion reports even
//! when an earlier one fails. Set `OMDP_ACCEPTANCE_FULL=1` to include the
//! opt-in sink-only (5,10) campaign. `OMDP_SOLVER_CMD` switches the campaign
//! criteria to an external solver.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use omdp_core::analysis::{digraph_checks, digraph_from_matrix, parse_facet_vertex_matrix, shortest_monotone_distance};
use omdp_core::campaign::{
    audit_model, check_digraph, check_matrix, run_theorem, AuditContext, CampaignCase, CampaignConfig, ModelAudit,
    Verdict,
};
use omdp_core::encoder::{
    column_clauses, column_conditions, gp3_clause_count, gp3_clauses, relation_clauses, EncodingMode, Endpoints,
    InstanceBuilder, Relation, VarMap,
};
use omdp_core::om::{Chirotope, Element, FacetSet, GroundSet};
use omdp_core::paths::{direct_path_types, expand_case, CatalogCase};
use omdp_core::solver::{solve, SolveStatus, SolverConfig};

type Q = Ratio<i64>;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn set(xs: &[Element]) -> FacetSet {
    xs.iter().copied().collect()
}

fn campaign_config(dir: &Path) -> CampaignConfig {
    CampaignConfig {
        solver: SolverConfig { timeout_secs: 3600.0, ..Default::default() }.with_env_override(),
        results_dir: dir.to_path_buf(),
        ..Default::default()
    }
}

fn gp3_oracle_equivalence() -> Outcome {
    let ground = GroundSet::raw(3, 6).unwrap();
    let vm = VarMap::new(ground);
    let formula = gp3_clauses(&vm).unwrap();
    let vars = vm.basis_count() as usize;
    let (mut mismatches, mut chirotopes) = (0u64, 0u64);
    let mut assignment = vec![false; vars];
    for mask in 0u32..1 << vars {
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = mask >> i & 1 == 1;
        }
        let by_clauses = formula.first_falsified(&assignment).is_none();
        let signs = assignment.iter().map(|&b| if b { 1 } else { -1 }).collect();
        let by_oracle = Chirotope::from_signs(ground, signs).unwrap().check_gp3().is_empty();
        mismatches += u64::from(by_clauses != by_oracle);
        chirotopes += u64::from(by_oracle);
    }
    check(
        mismatches == 0 && vars == 20,
        format!("{} assignments, {chirotopes} chirotopes, {mismatches} mismatches", 1u64 << vars),
    )
}

fn column_transcription() -> Outcome {
    let ground = GroundSet::new(5, 10).unwrap();
    let vm = VarMap::new(ground);
    let column = [0, 1, -1, -1, 1, 0, 0, 0, -1, 0];
    let printed = [
        "chi(2,3,4,5,9,1)=chi(2,3,4,5,9,12)",
        "chi(2,3,4,5,9,6)=chi(2,3,4,5,9,12)",
        "chi(2,3,4,5,9,7)=chi(2,3,4,5,9,12)",
        "chi(2,3,4,5,9,8)=chi(2,3,4,5,9,12)",
        "chi(2,3,4,5,9,10)=chi(2,3,4,5,9,12)",
        "chi(2,3,4,5,9,12)=-chi(11,3,4,5,9,12)",
        "chi(2,3,4,5,9,12)=chi(2,11,4,5,9,12)",
        "chi(2,3,4,5,9,12)=chi(2,3,11,5,9,12)",
        "chi(2,3,4,5,9,12)=-chi(2,3,4,11,9,12)",
        "chi(2,3,4,5,9,12)=chi(2,3,4,5,11,12)",
    ];
    let conds = column_conditions(&ground, &column).unwrap();
    let texts: Vec<String> = conds.iter().map(|c| c.to_string()).collect();
    let clauses = column_clauses(&column, &vm).unwrap();
    let mut ok = texts == printed && clauses.len() == 20 && clauses.clauses().iter().all(|c| c.len() == 2);
    // Each condition's two clauses accept exactly the assignments where the
    // printed relation holds between the two basis signs.
    for c in &conds {
        let bic = c.biconditional(&vm).unwrap();
        let pair = relation_clauses(&bic);
        let mut a = vec![false; vm.basis_count() as usize + 1];
        for bits in 0..4u8 {
            a[bic.a.var as usize - 1] = bits & 1 == 1;
            a[bic.b.var as usize - 1] = bits & 2 == 2;
            let chi = |t: &[Element]| {
                let lit = vm.literal_for(t, 1).unwrap();
                if lit.eval(&a) {
                    1
                } else {
                    -1
                }
            };
            let sat = pair.iter().all(|cl| cl.iter().any(|l| l.eval(&a)));
            ok &= sat == c.holds(chi);
        }
        let expected_rel = if c.to_string().contains("=-") { Relation::Opposite } else { Relation::Equal };
        ok &= c.relation == expected_rel && pair.len() == 2;
    }
    check(ok, format!("{} conditions, {} clauses", conds.len(), clauses.len()))
}

fn det3(m: [[Q; 3]; 3]) -> Q {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn sign(q: Q) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Coefficients `λ` with `Σ λ_j v_j = 0` over four points, `λ_4 = 1`, by
/// Gaussian elimination on the 3×3 system.
fn null_vector(points: [[Q; 3]; 4]) -> [Q; 4] {
    let mut m: Vec<Vec<Q>> = (0..3).map(|r| (0..3).map(|c| points[c][r]).chain([-points[3][r]]).collect()).collect();
    for col in 0..3 {
        let piv = (col..3).find(|&r| !m[r][col].is_zero()).expect("points in general position");
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..3 {
            if r != col {
                let f = m[r][col];
                let row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(row) {
                    *x -= f * y;
                }
            }
        }
    }
    [m[0][3], m[1][3], m[2][3], Q::from_integer(1)]
}

fn realizable_oracle() -> Outcome {
    let ground = GroundSet::raw(3, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut configs, mut failures, mut pairs) = (0, 0, 0u64);
    while configs < 120 {
        let pts: Vec<[Q; 3]> = (0..6)
            .map(|_| std::array::from_fn(|_| Q::new(rng.gen_range(-9..=9), rng.gen_range(1..=5))))
            .collect();
        let minor = |t: &[Element]| det3(std::array::from_fn(|i| pts[t[i] as usize - 1]));
        let all_nonzero = (1..=6).all(|a| (a + 1..=6).all(|b| (b + 1..=6).all(|c| !minor(&[a, b, c]).is_zero())));
        if !all_nonzero {
            continue;
        }
        configs += 1;
        let chi = Chirotope::from_fn(ground, |t| sign(minor(t))).unwrap();
        if !chi.check_gp3().is_empty() {
            failures += 1;
        }
        let mut circuits = Vec::new();
        let mut cocircuits = Vec::new();
        for s in subsets(6, 4) {
            let lam = null_vector(std::array::from_fn(|i| pts[s[i] as usize - 1]));
            let mut exact = [0i8; 6];
            for (i, &e) in s.iter().enumerate() {
                exact[e as usize - 1] = sign(lam[i]);
            }
            let scale = exact[s[0] as usize - 1];
            exact.iter_mut().for_each(|x| *x *= scale);
            let got = chi.circuit_on_support(&s, s[0]).unwrap();
            failures += u64::from(got.entries() != exact);
            circuits.push(exact);
        }
        for z in subsets(6, 2) {
            let (a, b) = (pts[z[0] as usize - 1], pts[z[1] as usize - 1]);
            let normal = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
            let mut exact = [0i8; 6];
            for e in 1..=6u8 {
                let p = pts[e as usize - 1];
                exact[e as usize - 1] = sign(normal[0] * p[0] + normal[1] * p[1] + normal[2] * p[2]);
            }
            let first = (1..=6u8).find(|e| !z.contains(e)).unwrap();
            let scale = exact[first as usize - 1];
            exact.iter_mut().for_each(|x| *x *= scale);
            let got = chi.cocircuit_on_zeroset(&z, first).unwrap();
            failures += u64::from(got.entries() != exact);
            cocircuits.push(exact);
        }
        for c in &circuits {
            for d in &cocircuits {
                pairs += 1;
                let prods: Vec<i8> = c.iter().zip(d).map(|(x, y)| x * y).filter(|&p| p != 0).collect();
                let orthogonal = prods.is_empty() || (prods.contains(&1) && prods.contains(&-1));
                failures += u64::from(!orthogonal);
            }
        }
    }
    check(failures == 0, format!("{configs} configurations, {pairs} circuit-cocircuit pairs, {failures} failures"))
}

fn subsets(n: Element, k: usize) -> Vec<Vec<Element>> {
    use itertools::Itertools;
    (1..=n).combinations(k).collect()
}

fn counting() -> Outcome {
    let dims = [(4, 8), (4, 9), (5, 10)];
    let vars: Vec<u32> = dims.iter().map(|&(d, n)| VarMap::new(GroundSet::new(d, n).unwrap()).basis_count()).collect();
    let gp3: Vec<u64> = dims.iter().map(|&(d, n)| gp3_clause_count(&GroundSet::new(d, n).unwrap())).collect();
    let emitted = gp3_clauses(&VarMap::new(GroundSet::new(4, 8).unwrap())).unwrap().len() as u64;
    let direct = (direct_path_types(4).len(), direct_path_types(5).len());
    let revisit = (expand_case(CatalogCase::Sm49Len5).len(), expand_case(CatalogCase::Sm510Len6).len());
    let ok = vars == [252, 462, 924]
        && gp3 == [67_200, 184_800, 554_400]
        && emitted == gp3[0]
        && direct == (576, 14_400)
        && revisit == (4_608, 115_200);
    check(ok, format!("vars {vars:?}, gp3 {gp3:?}, direct {direct:?}, relabeled {revisit:?}"))
}

fn sm_4_8(dir: &Path) -> Outcome {
    let cfg = campaign_config(dir);
    let start = Instant::now();
    let case = CampaignCase::builtin("sm-4-8").unwrap();
    let manifest = run_theorem(&case, &cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let paper_exact = CampaignCase { mode: EncodingMode::PaperExact, name: "sm-4-8-paper-exact".into(), ..case };
    let pe = run_theorem(&paper_exact, &cfg).unwrap();
    check(
        manifest.verdict == Verdict::TheoremHolds && secs < 600.0,
        format!(
            "extended mode {:?} in {secs:.1}s; paper-exact endpoint conditions alone give {:?} ({:?})",
            manifest.instances[0].status, pe.instances[0].status, pe.verdict
        ),
    )
}

fn fixtures(dir: &Path) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let cases: [(&str, usize, FacetSet, FacetSet, Option<(FacetSet, usize)>); 3] = [
        ("shortest6_4_9.txt", 4, set(&[1, 2, 3, 4]), set(&[6, 7, 8, 9]), Some((set(&[1, 2, 3, 4]), 2))),
        ("outmap4_5_10.txt", 5, set(&[1, 2, 3, 4, 5]), set(&[6, 7, 8, 9, 10]), Some((set(&[1, 2, 3, 4, 5]), 4))),
        ("source_neighbor_5_10.txt", 5, set(&[1, 2, 3, 4, 5]), set(&[6, 7, 8, 9, 10]), None),
    ];
    let cfg = campaign_config(dir);
    for (file, d, from, to, outmap) in cases {
        let m = parse_facet_vertex_matrix(&std::fs::read_to_string(fixture(file)).unwrap(), d).unwrap();
        let dg = digraph_from_matrix(&m).unwrap();
        let report = digraph_checks(&dg);
        let dist = shortest_monotone_distance(&dg, from, to).unwrap();
        ok &= dist == Some(6) && report.faces_failing.is_empty() && report.acyclic;
        if let Some((v, k)) = outmap {
            ok &= report.outmap_size(v) == Some(k);
        }
        if file.starts_with("source_neighbor") {
            let source = report.sources.first().copied();
            let adjacent = source.is_some_and(|s| s.intersection(from).len() + 1 == d && dg.has_arc(s, from));
            ok &= report.sources.len() == 1 && adjacent;
            notes.push(format!("source {} adjacent to {from}", source.map(|s| s.to_string()).unwrap_or_default()));
        }
        let checked = check_matrix(file.trim_end_matches(".txt"), &m, &cfg).unwrap();
        let rec = &checked.instances[0];
        let round_trip = rec.audit.as_ref().and_then(|a| a.round_trip);
        ok &= rec.status == SolveStatus::Sat && round_trip == Some(true);
        notes.push(format!("{file}: distance {dist:?}, {} faces ok, sat+round-trip {}", report.faces_checked, round_trip == Some(true)));
    }
    check(ok, notes.join("; "))
}

fn soundness_harness(dir: &Path) -> Outcome {
    let mut audits: Vec<(String, ModelAudit)> = Vec::new();
    // Fixture matrices and the paper-exact (4,8) run leave sat records.
    for sub in std::fs::read_dir(dir).unwrap().flatten() {
        let manifest = sub.path().join("manifest.json");
        if let Ok(m) = omdp_core::campaign::VerdictManifest::load(&manifest) {
            for r in m.instances {
                if let Some(a) = r.audit {
                    audits.push((format!("{}/{}", m.case, r.id), a));
                }
            }
        }
    }
    // Fresh sat instances with enforced and excluded paths.
    let ground = GroundSet::new(4, 8).unwrap();
    let direct = direct_path_types(4);
    let variants = [
        ("oriented", Endpoints::complementary(4), 0usize, 200usize),
        ("unoriented", Endpoints { orient_source: false, ..Endpoints::complementary(4) }, 300, 100),
    ];
    for (name, ends, enforce_at, excluded) in variants {
        for mode in [EncodingMode::Extended, EncodingMode::PaperExact] {
            let excl: Vec<_> = direct[enforce_at + 1..enforce_at + 1 + excluded].to_vec();
            let inst = InstanceBuilder::new(ground)
                .mode(mode)
                .anchor(true)
                .endpoints(ends)
                .exclude(excl.clone())
                .enforce(direct[enforce_at].clone())
                .build()
                .unwrap();
            let res = solve(&inst.formula, &SolverConfig::default());
            if let (SolveStatus::Sat, Some(a)) = (res.status, &res.assignment) {
                let ctx = AuditContext {
                    endpoints: Some(ends),
                    excluded: &excl,
                    enforced: Some(&direct[enforce_at]),
                    columns: None,
                };
                let (audit, _) = audit_model(&inst.formula, &inst.varmap, a, &ctx);
                audits.push((format!("{name}-{mode}"), audit));
            }
        }
    }
    let bad: Vec<&String> = audits
        .iter()
        .filter(|(_, a)| {
            let enforced_ok = a.enforced_present != Some(false) || a.spurious();
            !(a.sound() && a.chirotope_ok && a.clauses_ok && a.excluded_present == 0 && enforced_ok)
        })
        .map(|(n, _)| n)
        .collect();
    let spurious = audits.iter().filter(|(_, a)| a.spurious()).count();
    check(
        bad.is_empty() && audits.len() >= 6,
        format!("{} sat models audited ({spurious} with non-vertex endpoints), failing: {bad:?}", audits.len()),
    )
}

fn holt_klee(dir: &Path) -> Outcome {
    let start = Instant::now();
    let m = check_digraph(&fixture("holt_klee_5_10.txt"), 5, &campaign_config(dir)).unwrap();
    let rec = &m.instances[0];
    let secs = start.elapsed().as_secs_f64();
    check(
        rec.status == SolveStatus::Unsat && rec.sections.columns == 42 * 20 && secs < 900.0,
        format!("{:?} with {} column clauses in {secs:.1}s", rec.status, rec.sections.columns),
    )
}

fn campaign(dir: &Path, name: &str, budget_each: f64) -> Outcome {
    let case = CampaignCase::builtin(name).unwrap();
    let start = Instant::now();
    let m = run_theorem(&case, &campaign_config(dir)).unwrap();
    let worst = m.instances.iter().map(|r| r.wall_time_secs).fold(0.0, f64::max);
    let statuses: BTreeSet<String> = m.instances.iter().map(|r| format!("{:?}", r.status)).collect();
    check(
        m.verdict == Verdict::TheoremHolds && m.recomputed_verdict() == m.verdict && worst < budget_each,
        format!(
            "{} instances {statuses:?}, {:?}, slowest {worst:.1}s, total {:.1}s",
            m.instances.len(),
            m.verdict,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path();
    let full = std::env::var("OMDP_ACCEPTANCE_FULL").is_ok_and(|v| v == "1");
    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("1 gp3 clauses match the oracle on all 2^20 assignments", Box::new(gp3_oracle_equivalence)),
        ("2 column-3 conditions and clauses", Box::new(column_transcription)),
        ("3 realizable circuits and cocircuits match exact arithmetic", Box::new(realizable_oracle)),
        ("4 variable, clause and path counts", Box::new(counting)),
        ("5 no length-4 path at (4,8)", Box::new(|| sm_4_8(results))),
        ("6 fixture matrices", Box::new(|| fixtures(results))),
        ("7 soundness of every sat model", Box::new(|| soundness_harness(results))),
        ("8 holt-klee matrix is not a program digraph", Box::new(|| holt_klee(results))),
        ("9 no length-6 family path at (4,9)", Box::new(|| campaign(results, "sm-4-9", 1800.0))),
        ("10 no length-6 family path at (5,10)", Box::new(|| campaign(results, "sm-5-10", 3600.0))),
        ("11 no length-7 family path at (5,10)", Box::new(|| campaign(results, "sm-5-10-len7", 3600.0))),
        (
            "12 sink-only (5,10) campaign",
            Box::new(|| {
                if full {
                    campaign(results, "m-5-10", f64::INFINITY)
                } else {
                    Outcome::Skip("opt-in: set OMDP_ACCEPTANCE_FULL=1 or run `omdp prove m-5-10`".into())
                }
            }),
        ),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Outcome::Pass(d) => println!("PASS criterion {name} [{secs:.1}s]: {d}"),
            Outcome::Fail(d) => {
                failed += 1;
                println!("FAIL criterion {name} [{secs:.1}s]: {d}");
            }
            Outcome::Skip(d) => println!("SKIP criterion {name}: {d}"),
        }
    }
    println!("acceptance: {} criteria, {failed} failed", criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
