//! Compiles chirotope axioms, orientation facts and path constraints to CNF
//! over one variable per sorted basis.

mod cnf;
mod conditions;
mod varmap;

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

pub use cnf::{emit_dimacs, format_solution, parse_dimacs, parse_solution, Clause, CnfFormula, Literal, SolverOutput};
pub use conditions::{
    circuit_pivot, cocircuit_positivity, endpoint_pivot, relation_clauses, Biconditional, ChiCondition, Degenerate,
    Relation,
};
pub use varmap::VarMap;

use crate::error::{OmError, Result};
use crate::om::{Element, FacetSet, GroundSet};
use crate::paths::PathType;

/// The 16 six-literal clauses per (σ, quadruple) forbidding the three
/// Grassmann–Plücker products from all being equal.
pub fn gp3_clauses(vm: &VarMap) -> Result<CnfFormula> {
    let ground = vm.ground();
    let (m, r) = (ground.size() as Element, ground.rank());
    let mut out = CnfFormula::new(vm.basis_count());
    for sigma in (1..=m).combinations(r - 2) {
        let rest: Vec<Element> = (1..=m).filter(|e| !sigma.contains(e)).collect();
        for q in rest.iter().copied().combinations(4) {
            let pair = |i: usize, j: usize| -> Vec<Element> { sigma.iter().copied().chain([q[i], q[j]]).collect() };
            let tuples = [pair(0, 1), pair(2, 3), pair(0, 2), pair(1, 3), pair(0, 3), pair(1, 2)];
            for s in [1i8, -1] {
                for (c12, c13, c14) in itertools::iproduct!([1i8, -1], [1i8, -1], [1i8, -1]) {
                    // pattern where χ12χ34 = -χ13χ24 = χ14χ23 = s
                    let values = [c12, s * c12, c13, -s * c13, c14, s * c14];
                    let clause = tuples
                        .iter()
                        .zip(values)
                        .map(|(t, v)| vm.literal_for(t, -v))
                        .collect::<Result<Clause>>()?;
                    out.add_clause(clause)?;
                }
            }
        }
    }
    Ok(out)
}

/// Closed-form GP3 clause count `C(m, r-2) · C(m-r+2, 4) · 16`.
pub fn gp3_clause_count(ground: &GroundSet) -> u64 {
    let (m, r) = (ground.size(), ground.rank());
    crate::om::binomial(m, r - 2) * crate::om::binomial(m - r + 2, 4) * 16
}

/// Unit clause fixing `χ(1, 2, …, r) = +1`.
pub fn anchor_clause(vm: &VarMap) -> Result<Clause> {
    let t: Vec<Element> = (1..=vm.ground().rank() as Element).collect();
    Ok(vec![vm.literal_for(&t, 1)?])
}

/// Conditions imposed by one facet-vertex matrix column: cocircuit positivity
/// at the vertex, then one circuit pivot per facet of the vertex whose sign is
/// the column entry.
pub fn column_conditions(ground: &GroundSet, column: &[i8]) -> Result<Vec<ChiCondition>> {
    let (n, d) = (ground.facets(), ground.dim());
    if column.len() != n {
        return Err(OmError::MalformedColumn(format!("expected {n} entries, got {}", column.len())));
    }
    if let Some(x) = column.iter().find(|x| !(-1..=1).contains(*x)) {
        return Err(OmError::MalformedColumn(format!("entry {x} not in {{-1,0,1}}")));
    }
    let vertex: FacetSet = (1..=n as Element).filter(|&i| column[i as usize - 1] != 0).collect();
    if vertex.len() != d {
        return Err(OmError::MalformedColumn(format!("expected {d} nonzero entries, got {}", vertex.len())));
    }
    let mut out = cocircuit_positivity(ground, vertex);
    out.extend(vertex.iter().map(|e| circuit_pivot(ground, vertex, e, column[e as usize - 1])));
    Ok(out)
}

pub fn column_clauses(column: &[i8], vm: &VarMap) -> Result<CnfFormula> {
    let mut out = CnfFormula::new(vm.basis_count());
    for c in column_conditions(vm.ground(), column)? {
        out.add_clauses(relation_clauses(&c.biconditional(vm)?))?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingMode {
    /// Only the endpoint conditions in their circuit-pivot form.
    #[default]
    PaperExact,
    /// Adds cocircuit positivity at the endpoints. An endpoint whose edges are
    /// left unoriented gets cocircuit positivity instead of the pivot form.
    Extended,
}

impl std::str::FromStr for EncodingMode {
    type Err = OmError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-exact" => Ok(Self::PaperExact),
            "extended" => Ok(Self::Extended),
            _ => Err(OmError::Config(format!("unknown mode `{s}`"))),
        }
    }
}

impl std::fmt::Display for EncodingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::PaperExact => "paper-exact",
            Self::Extended => "extended",
        })
    }
}

/// Constrained endpoints: the sink is always oriented inward; the source is
/// optional and, when present, may have its edges left unoriented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoints {
    pub source: Option<FacetSet>,
    pub orient_source: bool,
    pub sink: FacetSet,
}

impl Endpoints {
    /// Source `{1..d}` oriented outward and sink `{d+1..2d}`.
    pub fn complementary(d: usize) -> Self {
        Self {
            source: Some(FacetSet::range(1, d as Element)),
            orient_source: true,
            sink: FacetSet::range(d as Element + 1, 2 * d as Element),
        }
    }

    pub fn source_oriented(&self) -> bool {
        self.source.is_some() && self.orient_source
    }
}

pub fn source_sink_conditions(ground: &GroundSet, ends: &Endpoints, mode: EncodingMode) -> Result<Vec<ChiCondition>> {
    let d = ground.dim();
    let check = |v: FacetSet, what: &str| {
        if v.len() != d || !v.is_subset(FacetSet::range(1, ground.facets() as Element)) {
            Err(OmError::InvalidPath(format!("{what} {v} is not a {d}-subset of the facets")))
        } else {
            Ok(())
        }
    };
    check(ends.sink, "sink")?;
    let mut out = Vec::new();
    if let Some(src) = ends.source {
        check(src, "source")?;
        if !src.intersection(ends.sink).is_empty() {
            return Err(OmError::InvalidPath(format!("source {src} and sink {} overlap", ends.sink)));
        }
        let pivot_form = mode == EncodingMode::PaperExact || ends.orient_source;
        if pivot_form {
            out.extend(src.iter().map(|k| endpoint_pivot(ground, src, k)));
        }
        if ends.orient_source {
            out.extend(src.iter().map(|k| circuit_pivot(ground, src, k, -1)));
        }
        if mode == EncodingMode::Extended {
            out.extend(cocircuit_positivity(ground, src));
        }
    }
    let snk = ends.sink;
    out.extend(snk.iter().map(|k| endpoint_pivot(ground, snk, k)));
    out.extend(snk.iter().map(|k| circuit_pivot(ground, snk, k, 1)));
    if mode == EncodingMode::Extended {
        out.extend(cocircuit_positivity(ground, snk));
    }
    Ok(out)
}

pub fn source_sink_clauses(vm: &VarMap, ends: &Endpoints, mode: EncodingMode) -> Result<CnfFormula> {
    let mut out = CnfFormula::new(vm.basis_count());
    for c in source_sink_conditions(vm.ground(), ends, mode)? {
        out.add_clauses(relation_clauses(&c.biconditional(vm)?))?;
    }
    Ok(out)
}

/// Conditions asserting that a path is present: every intermediate label is a
/// vertex, and every step after the first leaves its vertex. The first step is
/// included as well when the source's edges are not oriented by constraint.
pub fn path_conditions(ground: &GroundSet, path: &PathType, source_oriented: bool) -> Result<Vec<ChiCondition>> {
    let (d, labels) = (ground.dim(), &path.labels);
    if path.d != d || path.n != ground.facets() {
        return Err(OmError::InvalidPath(format!("path is for ({},{}), ground is ({d},{})", path.d, path.n, ground.facets())));
    }
    if labels.len() < 2 {
        return Err(OmError::InvalidPath("a path needs at least two labels".into()));
    }
    let facets = FacetSet::range(1, ground.facets() as Element);
    if let Some(l) = labels.iter().find(|l| l.len() != d || !l.is_subset(facets)) {
        return Err(OmError::InvalidPath(format!("label {l} is not a {d}-subset of the facets")));
    }
    if let Some(w) = labels.windows(2).find(|w| w[0].intersection(w[1]).len() + 1 != d) {
        return Err(OmError::InvalidPath(format!("labels {} and {} are not adjacent", w[0], w[1])));
    }
    let last = labels.len() - 1;
    let mut out = Vec::new();
    for &v in &labels[1..last] {
        out.extend(cocircuit_positivity(ground, v));
    }
    let first_edge = if source_oriented { 1 } else { 0 };
    for i in first_edge..last {
        let e = path.leaving_facet(i).expect("adjacency checked above");
        out.push(circuit_pivot(ground, labels[i], e, -1));
    }
    Ok(out)
}

/// Tseitin indicators `y ↔ (a ≡ b)`, shared by every path that uses the same
/// biconditional.
#[derive(Clone, Debug, Default)]
pub struct AuxCache {
    vars: HashMap<(u32, u32, bool), u32>,
    definitions: Vec<Clause>,
}

impl AuxCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// The defining clauses of every indicator allocated so far.
    pub fn definitions(&self) -> &[Clause] {
        &self.definitions
    }

    pub fn indicator(&mut self, vm: &mut VarMap, bic: &Biconditional) -> u32 {
        let key = bic.key();
        if let Some(&y) = self.vars.get(&key) {
            return y;
        }
        let y = vm.fresh_aux();
        let (x, z, same) = key;
        let (x, z) = (Literal::pos(x), Literal::new(z, same));
        let y = Literal::pos(y);
        self.definitions.extend([vec![!y, !x, z], vec![!y, x, !z], vec![y, x, z], vec![y, !x, !z]]);
        self.vars.insert(key, y.var);
        y.var
    }
}

/// One clause `¬y_1 ∨ … ∨ ¬y_k` per path, forbidding the conjunction of its
/// conditions. Indicators are allocated in `cache`; their definitions are not
/// added here.
pub fn exclude_paths<'a>(
    formula: &mut CnfFormula,
    paths: impl IntoIterator<Item = &'a PathType>,
    vm: &mut VarMap,
    cache: &mut AuxCache,
    source_oriented: bool,
) -> Result<()> {
    for path in paths {
        let mut clause = Clause::new();
        let mut impossible = false;
        for c in path_conditions(vm.ground(), path, source_oriented)? {
            let bic = c.biconditional(vm)?;
            match bic.degenerate() {
                Some(Degenerate::Tautology) => {}
                Some(Degenerate::Contradiction) => impossible = true,
                None => clause.push(Literal::neg(cache.indicator(vm, &bic))),
            }
        }
        if impossible {
            continue;
        }
        clause.sort_unstable();
        clause.dedup();
        formula.reserve_variables(vm.variable_count());
        if clause.is_empty() {
            // every condition holds identically: the path cannot be excluded
            let u = vm.fresh_aux();
            formula.reserve_variables(u);
            formula.add_clauses([vec![Literal::pos(u)], vec![Literal::neg(u)]])?;
        } else {
            formula.add_clause(clause)?;
        }
    }
    Ok(())
}

/// Asserts every condition of a path directly, two clauses each.
pub fn enforce_path(formula: &mut CnfFormula, path: &PathType, vm: &VarMap, source_oriented: bool) -> Result<()> {
    for c in path_conditions(vm.ground(), path, source_oriented)? {
        formula.add_clauses(relation_clauses(&c.biconditional(vm)?))?;
    }
    Ok(())
}

/// Per-section clause counts of an assembled instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionCounts {
    pub axioms: usize,
    pub units: usize,
    pub source_sink: usize,
    pub columns: usize,
    pub exclusions: usize,
    pub enforcement: usize,
    pub aux_definitions: usize,
}

/// Assembles an instance in a stable order: axioms, units, source/sink,
/// columns, exclusions, enforcement, auxiliary definitions.
#[derive(Clone, Debug)]
pub struct InstanceBuilder {
    ground: GroundSet,
    mode: EncodingMode,
    axioms: bool,
    anchor: bool,
    endpoints: Option<Endpoints>,
    columns: Vec<Vec<i8>>,
    exclusions: Vec<PathType>,
    enforcements: Vec<PathType>,
    comments: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub formula: CnfFormula,
    pub varmap: VarMap,
    pub counts: SectionCounts,
}

impl InstanceBuilder {
    pub fn new(ground: GroundSet) -> Self {
        Self {
            ground,
            mode: EncodingMode::PaperExact,
            axioms: true,
            anchor: false,
            endpoints: None,
            columns: Vec::new(),
            exclusions: Vec::new(),
            enforcements: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn mode(mut self, mode: EncodingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn axioms(mut self, on: bool) -> Self {
        self.axioms = on;
        self
    }

    pub fn anchor(mut self, on: bool) -> Self {
        self.anchor = on;
        self
    }

    pub fn endpoints(mut self, ends: Endpoints) -> Self {
        self.endpoints = Some(ends);
        self
    }

    pub fn column(mut self, column: Vec<i8>) -> Self {
        self.columns.push(column);
        self
    }

    pub fn columns(mut self, columns: impl IntoIterator<Item = Vec<i8>>) -> Self {
        self.columns.extend(columns);
        self
    }

    pub fn exclude(mut self, paths: impl IntoIterator<Item = PathType>) -> Self {
        self.exclusions.extend(paths);
        self
    }

    pub fn enforce(mut self, path: PathType) -> Self {
        self.enforcements.push(path);
        self
    }

    pub fn comment(mut self, text: impl Into<String>) -> Self {
        self.comments.push(text.into());
        self
    }

    pub fn build(self) -> Result<Instance> {
        let mut vm = VarMap::new(self.ground);
        let mut formula = CnfFormula::new(vm.basis_count());
        let mut counts = SectionCounts::default();
        let source_oriented = self.endpoints.is_some_and(|e| e.source_oriented());
        if (!self.exclusions.is_empty() || !self.enforcements.is_empty()) && self.endpoints.is_none() {
            return Err(OmError::State("path constraints need constrained endpoints".into()));
        }
        for c in &self.comments {
            formula.add_comment(c.clone());
        }
        formula.add_comment(format!("d={} n={} mode={}", self.ground.dim(), self.ground.facets(), self.mode));

        let section = |formula: &mut CnfFormula, part: CnfFormula| {
            let k = part.len();
            formula.append(part);
            k
        };
        if self.axioms {
            counts.axioms = section(&mut formula, gp3_clauses(&vm)?);
        }
        if self.anchor {
            formula.add_clause(anchor_clause(&vm)?)?;
            counts.units = 1;
        }
        if let Some(ends) = &self.endpoints {
            counts.source_sink = section(&mut formula, source_sink_clauses(&vm, ends, self.mode)?);
        }
        for col in &self.columns {
            counts.columns += section(&mut formula, column_clauses(col, &vm)?);
        }
        let mut cache = AuxCache::new();
        let before = formula.len();
        exclude_paths(&mut formula, &self.exclusions, &mut vm, &mut cache, source_oriented)?;
        counts.exclusions = formula.len() - before;
        let before = formula.len();
        for p in &self.enforcements {
            enforce_path(&mut formula, p, &vm, source_oriented)?;
        }
        counts.enforcement = formula.len() - before;
        formula.reserve_variables(vm.variable_count());
        formula.add_clauses(cache.definitions().iter().cloned())?;
        counts.aux_definitions = cache.definitions().len();
        formula.add_comment(format!(
            "clauses: axioms={} units={} source_sink={} columns={} exclusions={} enforcement={} aux={}",
            counts.axioms,
            counts.units,
            counts.source_sink,
            counts.columns,
            counts.exclusions,
            counts.enforcement,
            counts.aux_definitions
        ));
        Ok(Instance { formula, varmap: vm, counts })
    }
}
