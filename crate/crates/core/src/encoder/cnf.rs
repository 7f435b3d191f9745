//! Literals, clauses, CNF formulas and the DIMACS text formats.

use std::fmt::{self, Write as _};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{OmError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: u32, positive: bool) -> Self {
        debug_assert!(var >= 1);
        Self { var, positive }
    }

    pub fn pos(var: u32) -> Self {
        Self::new(var, true)
    }

    pub fn neg(var: u32) -> Self {
        Self::new(var, false)
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn from_dimacs(x: i64) -> Option<Self> {
        (x != 0 && x.unsigned_abs() <= u32::MAX as u64).then(|| Self::new(x.unsigned_abs() as u32, x > 0))
    }

    /// Truth value under a 1-indexed assignment (`assignment[var - 1]`).
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var as usize - 1] == self.positive
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;
    fn not(self) -> Literal {
        Literal { var: self.var, positive: !self.positive }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

pub type Clause = Vec<Literal>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    variable_count: u32,
    clauses: Vec<Clause>,
    comments: Vec<String>,
}

impl CnfFormula {
    pub fn new(variable_count: u32) -> Self {
        Self { variable_count, ..Default::default() }
    }

    pub fn variable_count(&self) -> u32 {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Raises the declared variable count; never lowers it.
    pub fn reserve_variables(&mut self, count: u32) {
        self.variable_count = self.variable_count.max(count);
    }

    pub fn add_comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    pub fn add_clause(&mut self, clause: Clause) -> Result<()> {
        if clause.is_empty() {
            return Err(OmError::Internal("attempted to add an empty clause".into()));
        }
        if let Some(l) = clause.iter().find(|l| l.var == 0 || l.var > self.variable_count) {
            return Err(OmError::Internal(format!(
                "literal {l} outside the {} declared variables",
                self.variable_count
            )));
        }
        self.clauses.push(clause);
        Ok(())
    }

    pub fn add_clauses(&mut self, clauses: impl IntoIterator<Item = Clause>) -> Result<()> {
        clauses.into_iter().try_for_each(|c| self.add_clause(c))
    }

    /// Appends another formula's clauses and comments.
    pub fn append(&mut self, other: CnfFormula) {
        self.reserve_variables(other.variable_count);
        self.clauses.extend(other.clauses);
        self.comments.extend(other.comments);
    }

    /// Index of the first clause falsified by `assignment`, if any.
    pub fn first_falsified(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| !c.iter().any(|l| l.eval(assignment)))
    }

    pub fn write_dimacs<W: Write>(&self, mut out: W) -> io::Result<()> {
        for c in &self.comments {
            for line in c.lines() {
                writeln!(out, "c {line}")?;
            }
        }
        writeln!(out, "p cnf {} {}", self.variable_count, self.clauses.len())?;
        let mut line = String::new();
        for clause in &self.clauses {
            line.clear();
            for l in clause {
                let _ = write!(line, "{} ", l.to_dimacs());
            }
            line.push('0');
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// DIMACS CNF text: comment lines, the `p cnf` header, one 0-terminated clause per line.
pub fn emit_dimacs(formula: &CnfFormula) -> String {
    let mut buf = Vec::new();
    formula.write_dimacs(&mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("dimacs output is ascii")
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut formula: Option<CnfFormula> = None;
    let mut comments = Vec::new();
    let mut pending: Clause = Vec::new();
    let mut declared_clauses = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |message: String| OmError::Dimacs { line: i + 1, message };
        if line.is_empty() || line == "%" {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(' ') {
                comments.push(rest.trim_start().to_string());
                continue;
            }
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(err(format!("bad problem line {line:?}")));
            }
            let vars = parts[1].parse::<u32>().map_err(|e| err(e.to_string()))?;
            declared_clauses = parts[2].parse::<usize>().map_err(|e| err(e.to_string()))?;
            formula = Some(CnfFormula::new(vars));
            continue;
        }
        let f = formula.as_mut().ok_or_else(|| err("clause before problem line".into()))?;
        for tok in line.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| err(format!("bad literal {tok:?}")))?;
            if x == 0 {
                if pending.is_empty() {
                    return Err(err("empty clause".into()));
                }
                f.add_clause(std::mem::take(&mut pending)).map_err(|e| err(e.to_string()))?;
            } else {
                pending.push(Literal::from_dimacs(x).ok_or_else(|| err(format!("bad literal {x}")))?);
            }
        }
    }
    let mut f = formula.ok_or(OmError::Dimacs { line: 0, message: "missing problem line".into() })?;
    if !pending.is_empty() {
        f.add_clause(pending)?;
    }
    if f.len() != declared_clauses {
        return Err(OmError::Dimacs {
            line: 0,
            message: format!("header declares {declared_clauses} clauses, found {}", f.len()),
        });
    }
    f.comments = comments;
    Ok(f)
}

/// Outcome reported by a SAT solver in the competition output format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverOutput {
    /// Values for variables `1..=variable_count`; unmentioned variables are false.
    Sat(Vec<bool>),
    Unsat,
    Unknown,
}

/// Parses `s`/`v` solver output. Other lines must be comments (`c`) or blank.
pub fn parse_solution(text: &str, variable_count: u32) -> Result<SolverOutput> {
    let mut status: Option<SolverOutput> = None;
    let mut values = vec![false; variable_count as usize];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = || OmError::SolverOutput { line: i + 1, text: raw.to_string() };
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => SolverOutput::Sat(Vec::new()),
                "UNSATISFIABLE" => SolverOutput::Unsat,
                "UNKNOWN" | "INDETERMINATE" => SolverOutput::Unknown,
                _ => return Err(err()),
            });
        } else if let Some(rest) = line.strip_prefix("v ").or(if line == "v" { Some("") } else { None }) {
            for tok in rest.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| err())?;
                if x == 0 {
                    continue;
                }
                let var = x.unsigned_abs() as usize;
                if var > values.len() {
                    return Err(err());
                }
                values[var - 1] = x > 0;
            }
        } else {
            return Err(err());
        }
    }
    match status {
        Some(SolverOutput::Sat(_)) => Ok(SolverOutput::Sat(values)),
        Some(s) => Ok(s),
        None => Err(OmError::SolverOutput { line: 0, text: "no `s` status line".into() }),
    }
}

/// Solution text in the competition format, ten values per `v` line.
pub fn format_solution(output: &SolverOutput) -> String {
    match output {
        SolverOutput::Unsat => "s UNSATISFIABLE\n".into(),
        SolverOutput::Unknown => "s UNKNOWN\n".into(),
        SolverOutput::Sat(values) => {
            let mut s = String::from("s SATISFIABLE\n");
            for chunk in values.iter().enumerate().collect::<Vec<_>>().chunks(10) {
                s.push('v');
                for (i, &b) in chunk {
                    let v = *i as i64 + 1;
                    let _ = write!(s, " {}", if b { v } else { -v });
                }
                s.push('\n');
            }
            s.push_str("v 0\n");
            s
        }
    }
}
