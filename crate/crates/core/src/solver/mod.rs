//! Runs CNF instances on the embedded CDCL solver or an external process and
//! decodes models back into chirotopes.

mod cdcl;

use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use cdcl::{Cdcl, CdclOptions, CdclOutcome, SolverStats};

use crate::encoder::{parse_solution, CnfFormula, SolverOutput, VarMap};
use crate::error::{OmError, Result};
use crate::om::Chirotope;

/// Placeholder for the CNF path in an external command template.
pub const CNF_PLACEHOLDER: &str = "{cnf}";

/// Environment variable overriding the external command template.
pub const SOLVER_CMD_ENV: &str = "OMDP_SOLVER_CMD";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Embedded,
    External,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub backend: Backend,
    /// Shell command with one `{cnf}` placeholder, e.g. `kissat -q {cnf}`.
    pub external_command: Option<String>,
    pub timeout_secs: f64,
    pub parallel_instances: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { backend: Backend::Embedded, external_command: None, timeout_secs: 3600.0, parallel_instances: 1, seed: 0 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.timeout_secs > 0.0) {
            return Err(OmError::Config("timeout must be positive".into()));
        }
        if self.parallel_instances == 0 {
            return Err(OmError::Config("parallel_instances must be at least 1".into()));
        }
        if let Some(cmd) = &self.external_command {
            let k = cmd.matches(CNF_PLACEHOLDER).count();
            if k != 1 {
                return Err(OmError::Config(format!("command template needs exactly one {CNF_PLACEHOLDER}, found {k}")));
            }
        }
        if self.backend == Backend::External && self.external_command.is_none() {
            return Err(OmError::Config("external backend selected but no command configured".into()));
        }
        Ok(())
    }

    /// Applies the environment override: a set `OMDP_SOLVER_CMD` selects the
    /// external backend with that template.
    pub fn with_env_override(mut self) -> Self {
        if let Ok(cmd) = std::env::var(SOLVER_CMD_ENV) {
            if !cmd.trim().is_empty() {
                self.external_command = Some(cmd);
                self.backend = Backend::External;
            }
        }
        self
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Sat,
    Unsat,
    Timeout,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    #[serde(skip)]
    pub assignment: Option<Vec<bool>>,
    pub wall_time_secs: f64,
    pub backend: String,
    pub stats: Option<SolverStats>,
    pub diagnostics: Option<String>,
}

impl SolveResult {
    fn error(backend: String, start: Instant, msg: impl Into<String>) -> Self {
        Self {
            status: SolveStatus::Error,
            assignment: None,
            wall_time_secs: start.elapsed().as_secs_f64(),
            backend,
            stats: None,
            diagnostics: Some(msg.into()),
        }
    }
}

/// Where to keep the CNF and raw solver output of a run, if anywhere.
#[derive(Clone, Debug, Default)]
pub struct Artifacts {
    pub dir: Option<PathBuf>,
}

pub fn solve(formula: &CnfFormula, config: &SolverConfig) -> SolveResult {
    solve_with_artifacts(formula, config, &Artifacts::default())
}

pub fn solve_with_artifacts(formula: &CnfFormula, config: &SolverConfig, artifacts: &Artifacts) -> SolveResult {
    let start = Instant::now();
    if let Err(e) = config.validate() {
        return SolveResult::error("config".into(), start, e.to_string());
    }
    let mut result = match config.backend {
        Backend::Embedded => solve_embedded(formula, config, start),
        Backend::External => solve_external(formula, config, artifacts, start),
    };
    if let Some(a) = &result.assignment {
        if let Some(i) = formula.first_falsified(a) {
            result.status = SolveStatus::Error;
            result.diagnostics = Some(format!("reported model falsifies clause {i}"));
            result.assignment = None;
        }
    }
    result
}

fn solve_embedded(formula: &CnfFormula, config: &SolverConfig, start: Instant) -> SolveResult {
    let opts = CdclOptions { seed: config.seed, deadline: Some(start + config.timeout()), ..Default::default() };
    let mut s = Cdcl::new(formula, opts);
    let outcome = s.solve();
    let (status, assignment) = match outcome {
        CdclOutcome::Sat(m) => (SolveStatus::Sat, Some(m)),
        CdclOutcome::Unsat => (SolveStatus::Unsat, None),
        CdclOutcome::Unknown => (SolveStatus::Timeout, None),
    };
    SolveResult {
        status,
        assignment,
        wall_time_secs: start.elapsed().as_secs_f64(),
        backend: "embedded-cdcl".into(),
        stats: Some(s.stats()),
        diagnostics: None,
    }
}

fn shell_quote(p: &Path) -> String {
    format!("'{}'", p.display().to_string().replace('\'', r"'\''"))
}

fn solve_external(formula: &CnfFormula, config: &SolverConfig, artifacts: &Artifacts, start: Instant) -> SolveResult {
    let template = config.external_command.clone().unwrap_or_default();
    let backend = format!("external: {template}");
    let tmp;
    let dir = match &artifacts.dir {
        Some(d) => d.clone(),
        None => match tempfile::tempdir() {
            Ok(t) => {
                tmp = t;
                tmp.path().to_path_buf()
            }
            Err(e) => return SolveResult::error(backend, start, format!("temp dir: {e}")),
        },
    };
    let run = || -> std::result::Result<(String, bool), String> {
        fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let cnf = dir.join("instance.cnf");
        let out_path = dir.join("solver.out");
        formula.write_dimacs(std::io::BufWriter::new(File::create(&cnf).map_err(|e| e.to_string())?)).map_err(|e| e.to_string())?;
        let cmd = template.replace(CNF_PLACEHOLDER, &shell_quote(&cnf));
        let out = File::create(&out_path).map_err(|e| e.to_string())?;
        let err = tempfile::tempfile().map_err(|e| e.to_string())?;
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&cmd)
            .stdin(Stdio::null())
            .stdout(out)
            .stderr(err.try_clone().map_err(|e| e.to_string())?)
            .spawn()
            .map_err(|e| format!("spawn `{cmd}`: {e}"))?;
        let deadline = start + config.timeout();
        let timed_out = loop {
            match child.try_wait().map_err(|e| e.to_string())? {
                Some(_) => break false,
                None if Instant::now() >= deadline => {
                    let _ = child.kill();
                    let _ = child.wait();
                    break true;
                }
                None => std::thread::sleep(Duration::from_millis(20)),
            }
        };
        let text = fs::read_to_string(&out_path).map_err(|e| e.to_string())?;
        Ok((text, timed_out))
    };
    let (text, timed_out) = match run() {
        Ok(x) => x,
        Err(e) => return SolveResult::error(backend, start, e),
    };
    let elapsed = start.elapsed().as_secs_f64();
    if timed_out {
        return SolveResult {
            status: SolveStatus::Timeout,
            assignment: None,
            wall_time_secs: elapsed,
            backend,
            stats: None,
            diagnostics: None,
        };
    }
    let (status, assignment) = match parse_solution(&text, formula.variable_count()) {
        Ok(SolverOutput::Sat(m)) => (SolveStatus::Sat, Some(m)),
        Ok(SolverOutput::Unsat) => (SolveStatus::Unsat, None),
        Ok(SolverOutput::Unknown) => (SolveStatus::Timeout, None),
        Err(e) => return SolveResult::error(backend, start, e.to_string()),
    };
    SolveResult { status, assignment, wall_time_secs: elapsed, backend, stats: None, diagnostics: None }
}

/// The chirotope given by the basis variables of a model. Fails on a non-sat
/// result and on a model that is not a chirotope.
pub fn decode_model(result: &SolveResult, vm: &VarMap) -> Result<Chirotope> {
    let a = match (&result.assignment, result.status) {
        (Some(a), SolveStatus::Sat) => a,
        _ => return Err(OmError::State(format!("cannot decode a {:?} result", result.status))),
    };
    decode_assignment(a, vm)
}

pub fn decode_assignment(assignment: &[bool], vm: &VarMap) -> Result<Chirotope> {
    let k = vm.basis_count() as usize;
    if assignment.len() < k {
        return Err(OmError::State(format!("assignment has {} values, need {k}", assignment.len())));
    }
    let signs = assignment[..k].iter().map(|&b| if b { 1 } else { -1 }).collect();
    let chi = Chirotope::from_signs(*vm.ground(), signs)?;
    if let Some(v) = chi.check_gp3().first() {
        return Err(OmError::Internal(format!("decoded model violates Grassmann-Pluecker: {v:?}")));
    }
    Ok(chi)
}

/// Independent clause-by-clause check of an assignment.
pub fn check_assignment(formula: &CnfFormula, assignment: &[bool]) -> Result<()> {
    if assignment.len() < formula.variable_count() as usize {
        return Err(OmError::State("assignment shorter than the variable count".into()));
    }
    match formula.first_falsified(assignment) {
        None => Ok(()),
        Some(i) => Err(OmError::Internal(format!("clause {i} falsified: {:?}", formula.clauses()[i]))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::Literal;

    fn unit(positive: bool) -> Vec<Literal> {
        vec![Literal::new(1, positive)]
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let mut c = SolverConfig { external_command: Some("solver".into()), ..Default::default() };
        assert!(c.validate().is_err());
        c.external_command = Some("solver {cnf} {cnf}".into());
        assert!(c.validate().is_err());
        c.external_command = Some("solver {cnf}".into());
        assert!(c.validate().is_ok());
        assert!(SolverConfig { timeout_secs: 0.0, ..Default::default() }.validate().is_err());
        assert!(SolverConfig { backend: Backend::External, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn embedded_trivial() {
        let mut f = CnfFormula::new(1);
        f.add_clause(unit(true)).unwrap();
        let r = solve(&f, &SolverConfig::default());
        assert_eq!(r.status, SolveStatus::Sat);
        assert_eq!(r.assignment, Some(vec![true]));
        f.add_clause(unit(false)).unwrap();
        assert_eq!(solve(&f, &SolverConfig::default()).status, SolveStatus::Unsat);
    }

    #[test]
    fn external_via_shell_stub() {
        let mut f = CnfFormula::new(2);
        f.add_clause(unit(true)).unwrap();
        let cfg = |cmd: &str| SolverConfig {
            backend: Backend::External,
            external_command: Some(cmd.into()),
            ..Default::default()
        };
        let r = solve(&f, &cfg("test -s {cnf} && printf 's SATISFIABLE\\nv 1 -2 0\\n'"));
        assert_eq!(r.status, SolveStatus::Sat, "{:?}", r.diagnostics);
        assert_eq!(r.assignment, Some(vec![true, false]));
        // a model that falsifies a clause is not trusted
        let r = solve(&f, &cfg("cat {cnf} >/dev/null; printf 's SATISFIABLE\\nv -1 -2 0\\n'"));
        assert_eq!(r.status, SolveStatus::Error);
        let r = solve(&f, &cfg("cat {cnf} >/dev/null; echo garbage"));
        assert_eq!(r.status, SolveStatus::Error);
        assert!(r.diagnostics.unwrap().contains("garbage"));
        let r = solve(&f, &SolverConfig { timeout_secs: 0.3, ..cfg("sleep 5; echo {cnf}") });
        assert_eq!(r.status, SolveStatus::Timeout);
    }

    #[test]
    fn decode_rejects_non_sat() {
        let vm = VarMap::new(crate::om::GroundSet::raw(3, 6).unwrap());
        let r = SolveResult {
            status: SolveStatus::Unsat,
            assignment: None,
            wall_time_secs: 0.0,
            backend: "x".into(),
            stats: None,
            diagnostics: None,
        };
        assert!(matches!(decode_model(&r, &vm), Err(OmError::State(_))));
    }
}
