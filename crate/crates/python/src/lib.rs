use std::fmt::Display;
use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use omdp_core::analysis::{
    digraph_checks, digraph_from_matrix, facet_vertex_matrix, parse_facet_vertex_matrix, shortest_monotone_distance,
};
use omdp_core::campaign::{self, CampaignCase, CampaignConfig, BUILTIN_CASES};
use omdp_core::encoder::{emit_dimacs, gp3_clause_count, parse_dimacs, EncodingMode, Instance, InstanceBuilder, VarMap};
use omdp_core::om::{self, Element, FacetSet};
use omdp_core::paths::{self, CatalogCase, PathType};
use omdp_core::solver::{self, SolverConfig};

fn value_err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// Converts any serializable value to plain Python objects by way of JSON.
fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(runtime_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn facet_set(elements: &[Element]) -> FacetSet {
    elements.iter().copied().collect()
}

fn labels(path: &PathType) -> Vec<Vec<Element>> {
    path.labels.iter().map(|s| s.to_vec()).collect()
}

/// Ground set of a rank `d + 1` program on facets `1..n` plus `f` and `g`.
#[pyclass(name = "GroundSet", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyGroundSet(om::GroundSet);

#[pymethods]
impl PyGroundSet {
    #[new]
    fn new(d: usize, n: usize) -> PyResult<Self> {
        om::GroundSet::new(d, n).map(Self).map_err(value_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn facets(&self) -> usize {
        self.0.facets()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn f(&self) -> Element {
        self.0.f()
    }

    #[getter]
    fn g(&self) -> Element {
        self.0.g()
    }

    #[getter]
    fn basis_count(&self) -> usize {
        self.0.basis_count()
    }

    /// Number of three-term Grassmann-Pluecker clauses over this ground set.
    fn gp3_clause_count(&self) -> u64 {
        gp3_clause_count(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("GroundSet(d={}, n={})", self.0.dim(), self.0.facets())
    }
}

/// Uniform sign function on the bases of a ground set, stored in colex order.
#[pyclass(name = "Chirotope", frozen)]
struct PyChirotope(om::Chirotope);

#[pymethods]
impl PyChirotope {
    #[new]
    fn new(ground: PyGroundSet, signs: Vec<i8>) -> PyResult<Self> {
        om::Chirotope::from_signs(ground.0, signs).map(Self).map_err(value_err)
    }

    #[getter]
    fn ground(&self) -> PyGroundSet {
        PyGroundSet(*self.0.ground())
    }

    #[getter]
    fn signs(&self) -> Vec<i8> {
        self.0.signs().to_vec()
    }

    /// Sign of an arbitrary ordered tuple; zero when an element repeats.
    fn sign(&self, tuple: Vec<Element>) -> PyResult<i8> {
        self.0.chi_of(&tuple).map_err(value_err)
    }

    fn is_chirotope(&self) -> bool {
        self.0.is_chirotope()
    }

    /// Every violated three-term relation as a dict.
    fn gp3_violations<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.check_gp3())
    }

    /// Vertices of the program, each as a sorted list of facets.
    fn vertices(&self) -> Vec<Vec<Element>> {
        om::program_vertices(&self.0).into_iter().map(FacetSet::to_vec).collect()
    }

    /// Facet-vertex matrix of the program digraph.
    fn matrix(&self) -> PyResult<PyMatrix> {
        let dg = om::program_digraph(&self.0).map_err(value_err)?;
        facet_vertex_matrix(&dg).map(PyMatrix).map_err(value_err)
    }
}

/// Facet-vertex matrix: one column per vertex, `0` off the vertex, `-1` on a
/// facet the vertex leaves and `+1` on a facet it keeps.
#[pyclass(name = "FacetVertexMatrix", frozen)]
struct PyMatrix(omdp_core::analysis::FacetVertexMatrix);

#[pymethods]
impl PyMatrix {
    #[staticmethod]
    fn parse(text: &str, d: usize) -> PyResult<Self> {
        parse_facet_vertex_matrix(text, d).map(Self).map_err(value_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn facets(&self) -> usize {
        self.0.facets()
    }

    #[getter]
    fn num_columns(&self) -> usize {
        self.0.num_columns()
    }

    fn columns(&self) -> Vec<Vec<i8>> {
        self.0.columns()
    }

    fn emit(&self) -> String {
        self.0.emit()
    }

    /// Structural checks of the derived digraph as a dict.
    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let dg = digraph_from_matrix(&self.0).map_err(value_err)?;
        to_py(py, &digraph_checks(&dg))
    }

    /// Length of a shortest directed path between two vertices, or `None`.
    fn distance(&self, source: Vec<Element>, sink: Vec<Element>) -> PyResult<Option<usize>> {
        let dg = digraph_from_matrix(&self.0).map_err(value_err)?;
        shortest_monotone_distance(&dg, facet_set(&source), facet_set(&sink)).map_err(value_err)
    }

    /// DIMACS text asking for a chirotope realizing every column.
    fn to_dimacs(&self) -> PyResult<String> {
        let ground = om::GroundSet::new(self.0.dim(), self.0.facets()).map_err(value_err)?;
        let built = InstanceBuilder::new(ground).columns(self.0.columns()).build().map_err(value_err)?;
        Ok(emit_dimacs(&built.formula))
    }

    fn __repr__(&self) -> String {
        format!("FacetVertexMatrix(d={}, n={}, columns={})", self.0.dim(), self.0.facets(), self.0.num_columns())
    }
}

/// Names of the built-in campaign cases.
#[pyfunction]
fn builtin_cases() -> Vec<&'static str> {
    BUILTIN_CASES.to_vec()
}

/// Instance ids of a built-in case.
#[pyfunction]
fn case_instances(case: &str) -> PyResult<Vec<String>> {
    let case = CampaignCase::builtin(case).map_err(value_err)?;
    Ok(case.instances().into_iter().map(|s| s.id).collect())
}

fn build_case_instance(case: &str, instance: Option<&str>, mode: Option<&str>) -> PyResult<Instance> {
    let mut case = CampaignCase::builtin(case).map_err(value_err)?;
    if let Some(m) = mode {
        case.mode = m.parse::<EncodingMode>().map_err(value_err)?;
    }
    let specs = case.instances();
    let spec = match instance {
        None => &specs[0],
        Some(id) => specs.iter().find(|s| s.id == id).ok_or_else(|| value_err(format!("no instance `{id}`")))?,
    };
    let exclusions = case.exclusion_paths().map_err(value_err)?;
    case.build_instance(spec, &exclusions).map_err(value_err)
}

/// DIMACS text of one instance of a built-in case.
#[pyfunction]
#[pyo3(signature = (case, instance=None, mode=None))]
fn encode_case(py: Python<'_>, case: &str, instance: Option<&str>, mode: Option<&str>) -> PyResult<String> {
    py.detach(|| build_case_instance(case, instance, mode).map(|b| emit_dimacs(&b.formula)))
}

/// Solves DIMACS text with the configured backend.
///
/// Returns a dict with `status`, `wall_time_secs`, `backend`, `stats`,
/// `diagnostics` and, for a satisfiable formula, `assignment` whose entry `i`
/// is the value of variable `i + 1`.
#[pyfunction]
#[pyo3(signature = (dimacs, timeout_secs=None, seed=None))]
fn solve<'py>(
    py: Python<'py>,
    dimacs: &str,
    timeout_secs: Option<f64>,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let formula = parse_dimacs(dimacs).map_err(value_err)?;
    let mut config = SolverConfig::default().with_env_override();
    if let Some(t) = timeout_secs {
        config.timeout_secs = t;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    config.validate().map_err(value_err)?;
    let result = py.detach(|| solver::solve(&formula, &config));
    let out = to_py(py, &result)?;
    out.set_item("assignment", result.assignment)?;
    Ok(out)
}

/// Decodes the basis variables of an assignment into a chirotope.
#[pyfunction]
fn decode_chirotope(ground: PyGroundSet, assignment: Vec<bool>) -> PyResult<PyChirotope> {
    solver::decode_assignment(&assignment, &VarMap::new(ground.0)).map(PyChirotope).map_err(value_err)
}

/// Path types of a catalog case (`sm-5-10-len6`, ...) or all direct paths
/// (`direct-<d>`). Each path is a list of vertex labels.
#[pyfunction]
#[pyo3(signature = (case, expand=false))]
fn catalog_paths(case: &str, expand: bool) -> PyResult<Vec<Vec<Vec<Element>>>> {
    if let Some(d) = case.strip_prefix("direct-") {
        let d: usize = d.parse().map_err(value_err)?;
        if !(1..=15).contains(&d) {
            return Err(value_err(format!("dimension {d} out of range")));
        }
        return Ok(paths::direct_path_types(d).iter().map(labels).collect());
    }
    let case: CatalogCase = case.parse().map_err(value_err)?;
    Ok(if expand {
        paths::expand_case(case).iter().map(labels).collect()
    } else {
        paths::revisit_families(case).iter().map(|f| labels(&f.template)).collect()
    })
}

/// Violations of the path-type rules as dicts; empty for a valid path.
#[pyfunction]
fn validate_path<'py>(py: Python<'py>, d: usize, n: usize, path: Vec<Vec<Element>>) -> PyResult<Bound<'py, PyAny>> {
    let path = PathType::new(d, n, path.iter().map(|l| facet_set(l)).collect());
    to_py(py, &paths::validate_path_type(&path))
}

fn campaign_config(results_dir: PathBuf, force: bool, keep_artifacts: bool) -> CampaignConfig {
    let mut config = CampaignConfig { results_dir, force, keep_artifacts, ..Default::default() };
    config.solver = config.solver.with_env_override();
    config
}

/// Runs every instance of a built-in case and returns the verdict manifest.
#[pyfunction]
#[pyo3(signature = (case, mode=None, results_dir="results".into(), force=false, keep_artifacts=false))]
fn prove<'py>(
    py: Python<'py>,
    case: &str,
    mode: Option<&str>,
    results_dir: PathBuf,
    force: bool,
    keep_artifacts: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let mut case = CampaignCase::builtin(case).map_err(value_err)?;
    if let Some(m) = mode {
        case.mode = m.parse::<EncodingMode>().map_err(value_err)?;
    }
    let config = campaign_config(results_dir, force, keep_artifacts);
    let manifest = py.detach(|| campaign::run_theorem(&case, &config)).map_err(runtime_err)?;
    to_py(py, &manifest)
}

/// Asks whether any chirotope realizes a facet-vertex matrix and returns the
/// manifest of the single check.
#[pyfunction]
#[pyo3(signature = (name, matrix, results_dir="results".into(), force=false))]
fn check_matrix<'py>(
    py: Python<'py>,
    name: &str,
    matrix: &PyMatrix,
    results_dir: PathBuf,
    force: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let config = campaign_config(results_dir, force, false);
    let manifest = py.detach(|| campaign::check_matrix(name, &matrix.0, &config)).map_err(runtime_err)?;
    to_py(py, &manifest)
}

#[pymodule]
fn omdp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroundSet>()?;
    m.add_class::<PyChirotope>()?;
    m.add_class::<PyMatrix>()?;
    m.add_function(wrap_pyfunction!(builtin_cases, m)?)?;
    m.add_function(wrap_pyfunction!(case_instances, m)?)?;
    m.add_function(wrap_pyfunction!(encode_case, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(decode_chirotope, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_paths, m)?)?;
    m.add_function(wrap_pyfunction!(validate_path, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(check_matrix, m)?)?;
    Ok(())
}
