//! Named theorem campaigns: instance construction, concurrent solving with
//! content-hash caching, model audits and verdict manifests.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{
    digraph_checks, facet_vertex_matrix, has_directed_path, parse_facet_vertex_matrix, shortest_monotone_distance,
    DigraphReport, FacetVertexMatrix,
};
use crate::encoder::{
    emit_dimacs, format_solution, CnfFormula, EncodingMode, Endpoints, Instance, InstanceBuilder, SectionCounts,
    SolverOutput, VarMap,
};
use crate::error::{OmError, Result};
use crate::om::{program_digraph, Element, FacetSet, GroundSet};
use crate::paths::{direct_paths_between, expand_case, revisit_families, CatalogCase, PathType};
use crate::solver::{
    check_assignment, decode_assignment, solve_with_artifacts, Artifacts, Backend, SolveResult, SolveStatus,
    SolverConfig, SolverStats,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    #[default]
    Fast,
    Extended,
}

impl FromStr for Tier {
    type Err = OmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Tier::Fast),
            "extended" => Ok(Tier::Extended),
            _ => Err(OmError::Config(format!("unknown tier `{s}` (expected fast or extended)"))),
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Fast => "fast",
            Tier::Extended => "extended",
        })
    }
}

/// A set of path types excluded from every instance of a case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathSet {
    /// All direct paths between the case's source and sink.
    Direct,
    /// Every relabeling of a catalog's families.
    Catalog(CatalogCase),
}

/// One solver run within a case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub id: String,
    pub family: Option<usize>,
    pub enforced: Option<PathType>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignCase {
    pub name: String,
    pub description: String,
    pub d: usize,
    pub n: usize,
    pub mode: EncodingMode,
    pub tier: Tier,
    /// Only run when named explicitly, never as part of `all`.
    pub opt_in: bool,
    pub anchor: bool,
    pub endpoints: Endpoints,
    pub exclusions: Vec<PathSet>,
    /// Catalog whose families are enforced one per instance; `None` gives a
    /// single instance without enforcement.
    pub enforce: Option<CatalogCase>,
    pub expected: SolveStatus,
}

pub const BUILTIN_CASES: [&str; 5] = ["sm-4-8", "sm-4-9", "sm-5-10", "sm-5-10-len7", "m-5-10"];

impl CampaignCase {
    pub fn builtin(name: &str) -> Result<Self> {
        let base = |d: usize, n: usize, description: &str| CampaignCase {
            name: name.to_string(),
            description: description.to_string(),
            d,
            n,
            mode: EncodingMode::Extended,
            tier: Tier::Fast,
            opt_in: false,
            anchor: true,
            endpoints: Endpoints::complementary(d),
            exclusions: vec![PathSet::Direct],
            enforce: None,
            expected: SolveStatus::Unsat,
        };
        let case = match name {
            "sm-4-8" => base(4, 8, "no strictly monotone path of length 4 from [1,2,3,4] to [5,6,7,8]"),
            "sm-4-9" => CampaignCase {
                endpoints: Endpoints {
                    source: Some(FacetSet::range(1, 4)),
                    orient_source: true,
                    sink: FacetSet::range(6, 9),
                },
                exclusions: vec![PathSet::Direct, PathSet::Catalog(CatalogCase::Sm49Len5)],
                enforce: Some(CatalogCase::Sm49Len6),
                ..base(4, 9, "lengths 4 and 5 excluded: no length-6 family path from [1,2,3,4] to [6,7,8,9]")
            },
            "sm-5-10" => CampaignCase {
                tier: Tier::Extended,
                enforce: Some(CatalogCase::Sm510Len6),
                ..base(5, 10, "length 5 excluded: no length-6 family path from [1..5] to [6..10]")
            },
            "sm-5-10-len7" => CampaignCase {
                tier: Tier::Extended,
                enforce: Some(CatalogCase::M510Len7),
                ..base(5, 10, "length 5 excluded: no length-7 family path from [1..5] to [6..10]")
            },
            "m-5-10" => CampaignCase {
                tier: Tier::Extended,
                opt_in: true,
                endpoints: Endpoints { orient_source: false, ..Endpoints::complementary(5) },
                exclusions: vec![PathSet::Direct, PathSet::Catalog(CatalogCase::Sm510Len6)],
                enforce: Some(CatalogCase::M510Len7),
                ..base(5, 10, "sink-only orientation, lengths 5 and 6 excluded: no length-7 family path")
            },
            _ => return Err(OmError::UnknownCase(name.to_string())),
        };
        case.validate()?;
        Ok(case)
    }

    pub fn ground(&self) -> Result<GroundSet> {
        GroundSet::new(self.d, self.n)
    }

    pub fn validate(&self) -> Result<()> {
        let check_catalog = |c: CatalogCase| {
            if c.dims() == (self.d, self.n) {
                Ok(())
            } else {
                Err(OmError::Config(format!("catalog {} does not match ({},{})", c.id(), self.d, self.n)))
            }
        };
        for set in &self.exclusions {
            match set {
                PathSet::Direct if self.endpoints.source.is_none() => {
                    return Err(OmError::Config("direct exclusions need a source".into()))
                }
                PathSet::Catalog(c) => check_catalog(*c)?,
                PathSet::Direct => {}
            }
        }
        if let Some(c) = self.enforce {
            check_catalog(c)?;
        }
        self.ground()?;
        Ok(())
    }

    /// The excluded path types, deduplicated, in catalog order.
    pub fn exclusion_paths(&self) -> Result<Vec<PathType>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for set in &self.exclusions {
            let paths = match set {
                PathSet::Direct => {
                    let src = self.endpoints.source.ok_or_else(|| OmError::Config("direct exclusions need a source".into()))?;
                    direct_paths_between(self.d, self.n, src, self.endpoints.sink)
                }
                PathSet::Catalog(c) => expand_case(*c),
            };
            out.extend(paths.into_iter().filter(|p| seen.insert(p.labels.clone())));
        }
        Ok(out)
    }

    pub fn instances(&self) -> Vec<InstanceSpec> {
        match self.enforce {
            None => vec![InstanceSpec { id: "base".into(), family: None, enforced: None }],
            Some(c) => revisit_families(c)
                .into_iter()
                .map(|f| InstanceSpec {
                    id: format!("{}-f{}", c.id(), f.index),
                    family: Some(f.index),
                    enforced: Some(f.template),
                })
                .collect(),
        }
    }

    pub fn build_instance(&self, spec: &InstanceSpec, exclusions: &[PathType]) -> Result<Instance> {
        let mut b = InstanceBuilder::new(self.ground()?)
            .mode(self.mode)
            .anchor(self.anchor)
            .endpoints(self.endpoints)
            .comment(format!("case {} instance {}", self.name, spec.id))
            .exclude(exclusions.iter().cloned());
        if let Some(p) = &spec.enforced {
            b = b.enforce(p.clone());
        }
        b.build()
    }
}

/// Campaign settings, loadable from a TOML file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub solver: SolverConfig,
    pub results_dir: PathBuf,
    pub keep_artifacts: bool,
    pub force: bool,
    pub fail_fast: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            results_dir: PathBuf::from("results"),
            keep_artifacts: false,
            force: false,
            fail_fast: false,
        }
    }
}

impl CampaignConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| OmError::Config(e.to_string()))?;
        cfg.solver.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }
}

/// Context for auditing a satisfying assignment.
#[derive(Clone, Copy, Debug, Default)]
pub struct AuditContext<'a> {
    pub endpoints: Option<Endpoints>,
    pub excluded: &'a [PathType],
    pub enforced: Option<&'a PathType>,
    pub columns: Option<&'a FacetVertexMatrix>,
}

/// Independent checks of a model against the formula and the decoded program.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelAudit {
    pub chirotope_ok: bool,
    pub clauses_ok: bool,
    pub program_vertices: usize,
    pub source_is_vertex: Option<bool>,
    pub sink_is_vertex: Option<bool>,
    /// Excluded path types present in the decoded digraph.
    pub excluded_present: usize,
    /// Whether the full enforced path is a directed path of the decoded digraph.
    pub enforced_present: Option<bool>,
    pub source_to_sink: Option<usize>,
    /// Whether the decoded digraph re-emits the input columns exactly.
    pub round_trip: Option<bool>,
    pub report: Option<DigraphReport>,
    pub violations: Vec<String>,
}

impl ModelAudit {
    fn empty() -> Self {
        Self {
            chirotope_ok: false,
            clauses_ok: false,
            program_vertices: 0,
            source_is_vertex: None,
            sink_is_vertex: None,
            excluded_present: 0,
            enforced_present: None,
            source_to_sink: None,
            round_trip: None,
            report: None,
            violations: Vec::new(),
        }
    }

    /// No invariant of the encoding was broken.
    pub fn sound(&self) -> bool {
        self.violations.is_empty()
    }

    /// The model satisfies the formula but a constrained endpoint is not a
    /// vertex of the decoded program, so the constraints say nothing about it.
    pub fn spurious(&self) -> bool {
        self.source_is_vertex == Some(false) || self.sink_is_vertex == Some(false)
    }
}

/// Audits an assignment: chirotope axioms on the decoded signs, every clause
/// by direct evaluation, and the presence or absence of constrained paths in
/// the decoded digraph.
pub fn audit_model(formula: &CnfFormula, vm: &VarMap, assignment: &[bool], ctx: &AuditContext) -> (ModelAudit, Option<String>) {
    let mut audit = ModelAudit::empty();
    match check_assignment(formula, assignment) {
        Ok(()) => audit.clauses_ok = true,
        Err(e) => audit.violations.push(e.to_string()),
    }
    let chi = match decode_assignment(assignment, vm) {
        Ok(chi) => {
            audit.chirotope_ok = true;
            chi
        }
        Err(e) => {
            audit.violations.push(e.to_string());
            return (audit, None);
        }
    };
    let dg = match program_digraph(&chi) {
        Ok(dg) => dg,
        Err(e) => {
            audit.violations.push(format!("decoded digraph: {e}"));
            return (audit, None);
        }
    };
    audit.program_vertices = dg.vertices.len();
    let is_vertex = |v: FacetSet| dg.index_of(v).is_some();
    if let Some(ends) = ctx.endpoints {
        audit.source_is_vertex = ends.source.map(is_vertex);
        audit.sink_is_vertex = Some(is_vertex(ends.sink));
        if let Some(src) = ends.source.filter(|&s| is_vertex(s) && is_vertex(ends.sink)) {
            audit.source_to_sink = shortest_monotone_distance(&dg, src, ends.sink).ok().flatten();
        }
    }
    audit.excluded_present = ctx.excluded.iter().filter(|p| has_directed_path(&dg, &p.labels)).count();
    if audit.excluded_present > 0 {
        audit.violations.push(format!("{} excluded path types present", audit.excluded_present));
    }
    if let Some(p) = ctx.enforced {
        audit.enforced_present = Some(has_directed_path(&dg, &p.labels));
        let last = p.labels.len() - 1;
        for (i, &l) in p.labels.iter().enumerate().take(last).skip(1) {
            if !is_vertex(l) {
                audit.violations.push(format!("enforced label {l} at position {i} is not a vertex"));
            }
        }
        for w in p.labels.windows(2) {
            if is_vertex(w[0]) && is_vertex(w[1]) && !dg.has_arc(w[0], w[1]) {
                audit.violations.push(format!("enforced edge {} -> {} is not an arc", w[0], w[1]));
            }
        }
    }
    let matrix = facet_vertex_matrix(&dg).ok();
    if let Some(cols) = ctx.columns {
        let ok = matrix.as_ref().is_some_and(|m| m.column_multiset() == cols.column_multiset());
        audit.round_trip = Some(ok);
        for (j, col) in cols.columns().iter().enumerate() {
            let v = cols.vertex(j);
            let out: FacetSet = (1..=col.len() as Element).filter(|&e| col[e as usize - 1] < 0).collect();
            match dg.index_of(v) {
                Some(i) if dg.leaving[i] == out => {}
                _ => audit.violations.push(format!("column {} ({v}) not reproduced", j + 1)),
            }
        }
    }
    audit.report = Some(digraph_checks(&dg));
    (audit, matrix.map(|m| m.emit()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub family: Option<usize>,
    pub variables: u32,
    pub clauses: usize,
    pub sections: SectionCounts,
    pub cnf_sha256: String,
    pub expected: Option<SolveStatus>,
    pub status: SolveStatus,
    pub wall_time_secs: f64,
    pub solver: String,
    pub stats: Option<SolverStats>,
    pub diagnostics: Option<String>,
    pub artifacts: Vec<PathBuf>,
    pub cached: bool,
    pub audit: Option<ModelAudit>,
    /// Facet-vertex matrix of the decoded program when the instance is sat.
    pub counterexample: Option<String>,
}

impl InstanceRecord {
    pub fn matches_expected(&self) -> Option<bool> {
        self.expected.map(|e| e == self.status)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every instance has its expected status.
    TheoremHolds,
    /// Some instance expected unsat came back sat with a model whose
    /// constrained endpoints are vertices.
    Refuted,
    /// Every unexpected model leaves a constrained endpoint outside the
    /// vertex set, so the constraints do not bind and nothing is decided.
    SpuriousModel,
    /// Some instance timed out or failed, none refuted.
    Inconclusive,
    /// No expectations: statuses are reported as found.
    Reported,
}

impl Verdict {
    pub fn from_records(records: &[InstanceRecord]) -> Self {
        if records.iter().all(|r| r.expected.is_none()) {
            return Verdict::Reported;
        }
        if records.iter().all(|r| r.matches_expected() != Some(false)) {
            return Verdict::TheoremHolds;
        }
        let wrong: Vec<&InstanceRecord> = records
            .iter()
            .filter(|r| r.matches_expected() == Some(false) && matches!(r.status, SolveStatus::Sat | SolveStatus::Unsat))
            .collect();
        if wrong.is_empty() {
            Verdict::Inconclusive
        } else if wrong.iter().all(|r| r.audit.as_ref().is_some_and(ModelAudit::spurious)) {
            Verdict::SpuriousModel
        } else {
            Verdict::Refuted
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictManifest {
    pub case: String,
    pub description: String,
    pub d: usize,
    pub n: usize,
    pub mode: Option<EncodingMode>,
    pub tier: Tier,
    pub instances: Vec<InstanceRecord>,
    pub verdict: Verdict,
}

impl VerdictManifest {
    /// Recomputes the verdict from the stored records alone.
    pub fn recomputed_verdict(&self) -> Verdict {
        Verdict::from_records(&self.instances)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string_pretty(value)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn cached_record(dir: &Path, hash: &str) -> Option<InstanceRecord> {
    let text = fs::read_to_string(dir.join("record.json")).ok()?;
    let rec: InstanceRecord = serde_json::from_str(&text).ok()?;
    (rec.cnf_sha256 == hash && matches!(rec.status, SolveStatus::Sat | SolveStatus::Unsat)).then_some(rec)
}

struct Job<'a> {
    id: String,
    family: Option<usize>,
    instance: Instance,
    expected: Option<SolveStatus>,
    audit: AuditContext<'a>,
}

fn run_job(job: Job, dir: &Path, config: &CampaignConfig) -> Result<InstanceRecord> {
    fs::create_dir_all(dir)?;
    let Instance { formula, varmap, counts } = job.instance;
    let dimacs = emit_dimacs(&formula);
    let hash = sha256_hex(&dimacs);
    if !config.force {
        if let Some(mut rec) = cached_record(dir, &hash) {
            rec.cached = true;
            return Ok(rec);
        }
    }
    let keep = config.keep_artifacts;
    let artifacts = Artifacts { dir: (keep && config.solver.backend == Backend::External).then(|| dir.to_path_buf()) };
    let result: SolveResult = solve_with_artifacts(&formula, &config.solver, &artifacts);
    let mut paths = vec![dir.join("record.json")];
    if keep {
        if config.solver.backend == Backend::Embedded {
            fs::write(dir.join("instance.cnf"), &dimacs)?;
            let out = match (&result.status, &result.assignment) {
                (SolveStatus::Sat, Some(a)) => SolverOutput::Sat(a[..formula.variable_count() as usize].to_vec()),
                (SolveStatus::Unsat, _) => SolverOutput::Unsat,
                _ => SolverOutput::Unknown,
            };
            fs::write(dir.join("solver.out"), format_solution(&out))?;
        }
        paths.extend([dir.join("instance.cnf"), dir.join("solver.out")]);
    }
    let (audit, counterexample) = match (&result.status, &result.assignment) {
        (SolveStatus::Sat, Some(a)) => {
            let (audit, m) = audit_model(&formula, &varmap, a, &job.audit);
            (Some(audit), m)
        }
        _ => (None, None),
    };
    let rec = InstanceRecord {
        id: job.id,
        family: job.family,
        variables: formula.variable_count(),
        clauses: formula.len(),
        sections: counts,
        cnf_sha256: hash,
        expected: job.expected,
        status: result.status,
        wall_time_secs: result.wall_time_secs,
        solver: result.backend,
        stats: result.stats,
        diagnostics: result.diagnostics,
        artifacts: paths,
        cached: false,
        audit,
        counterexample,
    };
    write_json(&dir.join("record.json"), &rec)?;
    Ok(rec)
}

fn skipped(id: &str, family: Option<usize>, expected: Option<SolveStatus>, why: &str) -> InstanceRecord {
    InstanceRecord {
        id: id.to_string(),
        family,
        variables: 0,
        clauses: 0,
        sections: SectionCounts::default(),
        cnf_sha256: String::new(),
        expected,
        status: SolveStatus::Error,
        wall_time_secs: 0.0,
        solver: String::new(),
        stats: None,
        diagnostics: Some(why.to_string()),
        artifacts: Vec::new(),
        cached: false,
        audit: None,
        counterexample: None,
    }
}

/// Runs every instance of a case, up to `parallel_instances` at a time, and
/// writes `results/<case>/<instance>/record.json` plus the case manifest.
pub fn run_theorem(case: &CampaignCase, config: &CampaignConfig) -> Result<VerdictManifest> {
    case.validate()?;
    config.solver.validate()?;
    let specs = case.instances();
    let exclusions = case.exclusion_paths()?;
    let case_dir = config.results_dir.join(&case.name);
    fs::create_dir_all(&case_dir)?;

    let mut manifest = VerdictManifest {
        case: case.name.clone(),
        description: case.description.clone(),
        d: case.d,
        n: case.n,
        mode: Some(case.mode),
        tier: case.tier,
        instances: Vec::new(),
        verdict: Verdict::Inconclusive,
    };
    let slots: Mutex<Vec<Option<InstanceRecord>>> = Mutex::new(vec![None; specs.len()]);
    let manifest_lock = Mutex::new(());
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let first_error: Mutex<Option<OmError>> = Mutex::new(None);
    let workers = config.solver.parallel_instances.min(specs.len()).max(1);

    let worker = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        let Some(spec) = specs.get(i) else { break };
        let rec = if stop.load(Ordering::SeqCst) {
            Ok(skipped(&spec.id, spec.family, Some(case.expected), "skipped after an earlier failure (fail-fast)"))
        } else {
            case.build_instance(spec, &exclusions).and_then(|instance| {
                let job = Job {
                    id: spec.id.clone(),
                    family: spec.family,
                    instance,
                    expected: Some(case.expected),
                    audit: AuditContext {
                        endpoints: Some(case.endpoints),
                        excluded: &exclusions,
                        enforced: spec.enforced.as_ref(),
                        columns: None,
                    },
                };
                run_job(job, &case_dir.join(&spec.id), config)
            })
        };
        match rec {
            Ok(rec) => {
                if config.fail_fast && rec.matches_expected() != Some(true) {
                    stop.store(true, Ordering::SeqCst);
                }
                let snapshot: Vec<InstanceRecord> = {
                    let mut s = slots.lock().unwrap();
                    s[i] = Some(rec);
                    s.iter().flatten().cloned().collect()
                };
                let _guard = manifest_lock.lock().unwrap();
                let partial = VerdictManifest {
                    verdict: Verdict::Inconclusive,
                    instances: snapshot,
                    ..manifest.clone()
                };
                if let Err(e) = write_json(&case_dir.join("manifest.json"), &partial) {
                    first_error.lock().unwrap().get_or_insert(e);
                }
            }
            Err(e) => {
                stop.store(true, Ordering::SeqCst);
                first_error.lock().unwrap().get_or_insert(e);
            }
        }
    };
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(worker);
        }
    });
    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    manifest.instances = slots.into_inner().unwrap().into_iter().flatten().collect();
    manifest.verdict = Verdict::from_records(&manifest.instances);
    write_json(&case_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// Asks whether a facet-vertex matrix is the digraph of some oriented matroid
/// program: axioms plus the column clauses of every vertex.
pub fn check_matrix(name: &str, matrix: &FacetVertexMatrix, config: &CampaignConfig) -> Result<VerdictManifest> {
    config.solver.validate()?;
    let ground = GroundSet::new(matrix.dim(), matrix.facets())?;
    let instance = InstanceBuilder::new(ground)
        .comment(format!("facet-vertex matrix {name}"))
        .columns(matrix.columns())
        .build()?;
    let case_dir = config.results_dir.join(name);
    let job = Job {
        id: "matrix".into(),
        family: None,
        instance,
        expected: None,
        audit: AuditContext { columns: Some(matrix), ..Default::default() },
    };
    let rec = run_job(job, &case_dir.join("matrix"), config)?;
    let manifest = VerdictManifest {
        case: name.to_string(),
        description: format!("{}x{} facet-vertex matrix", matrix.facets(), matrix.num_columns()),
        d: matrix.dim(),
        n: matrix.facets(),
        mode: None,
        tier: Tier::Fast,
        verdict: Verdict::from_records(std::slice::from_ref(&rec)),
        instances: vec![rec],
    };
    write_json(&case_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

pub fn check_digraph(matrix_file: &Path, d: usize, config: &CampaignConfig) -> Result<VerdictManifest> {
    let matrix = parse_facet_vertex_matrix(&fs::read_to_string(matrix_file)?, d)?;
    let stem = matrix_file.file_stem().and_then(|s| s.to_str()).unwrap_or("matrix");
    check_matrix(&format!("check-{stem}"), &matrix, config)
}
