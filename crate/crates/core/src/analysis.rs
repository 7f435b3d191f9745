//! Facet-vertex matrices, monotone distances and structural checks on
//! program digraphs.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{OmError, Result};
use crate::om::{Element, FacetSet, GroundSet, OmpDigraph};

/// `n × V` sign matrix: row `i` is facet `i + 1`, column `j` a vertex whose
/// facets are its nonzero rows. `-1` marks a facet through which the vertex's
/// edge is an out-arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetVertexMatrix {
    d: usize,
    rows: Vec<Vec<i8>>,
}

impl FacetVertexMatrix {
    /// Builds a matrix from columns, validating entries and nonzero counts.
    pub fn from_columns(d: usize, n: usize, columns: &[Vec<i8>]) -> Result<Self> {
        let mut rows = vec![Vec::with_capacity(columns.len()); n];
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(OmError::MatrixParse(format!("column {} has {} entries, expected {n}", j + 1, c.len())));
            }
            for (i, &x) in c.iter().enumerate() {
                rows[i].push(x);
            }
        }
        Self::from_rows(d, rows)
    }

    pub fn from_rows(d: usize, rows: Vec<Vec<i8>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(OmError::MatrixParse("no rows".into()));
        }
        let width = rows[0].len();
        if let Some(i) = rows.iter().position(|r| r.len() != width) {
            return Err(OmError::MatrixParse(format!("row {} has {} entries, row 1 has {width}", i + 1, rows[i].len())));
        }
        if rows.iter().flatten().any(|x| !(-1..=1).contains(x)) {
            return Err(OmError::MatrixParse("entries must be -1, 0 or 1".into()));
        }
        let m = Self { d, rows };
        let mut seen = BTreeSet::new();
        for j in 0..width {
            let v = m.vertex(j);
            if v.len() != d {
                return Err(OmError::MatrixParse(format!("column {} has {} nonzero entries, expected {d}", j + 1, v.len())));
            }
            if !seen.insert(m.column(j)) {
                return Err(OmError::MatrixParse(format!("column {} repeats an earlier column", j + 1)));
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn facets(&self) -> usize {
        self.rows.len()
    }

    pub fn num_columns(&self) -> usize {
        self.rows[0].len()
    }

    pub fn entry(&self, facet: Element, j: usize) -> i8 {
        self.rows[facet as usize - 1][j]
    }

    pub fn column(&self, j: usize) -> Vec<i8> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i8>> {
        (0..self.num_columns()).map(|j| self.column(j)).collect()
    }

    pub fn vertex(&self, j: usize) -> FacetSet {
        (1..=self.facets() as Element).filter(|&i| self.entry(i, j) != 0).collect()
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    /// Space-separated rows, one facet per line.
    pub fn emit(&self) -> String {
        self.rows.iter().map(|r| r.iter().join(" ") + "\n").collect()
    }

    /// Columns as a sorted multiset, for order-insensitive comparison.
    pub fn column_multiset(&self) -> Vec<Vec<i8>> {
        let mut c = self.columns();
        c.sort();
        c
    }
}

impl fmt::Display for FacetVertexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

/// Parses whitespace-separated rows, ignoring `[`, `]` and `,` so printed
/// matrices can be pasted directly. Blank lines are skipped.
pub fn parse_facet_vertex_matrix(text: &str, d: usize) -> Result<FacetVertexMatrix> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let cleaned: String = line.chars().map(|c| if matches!(c, '[' | ']' | ',') { ' ' } else { c }).collect();
        if cleaned.trim().is_empty() {
            continue;
        }
        let row = cleaned
            .split_whitespace()
            .map(|t| match t {
                "-1" => Ok(-1),
                "0" | "-0" => Ok(0),
                "1" | "+1" => Ok(1),
                _ => Err(OmError::MatrixParse(format!("line {}: illegal entry {t:?}", i + 1))),
            })
            .collect::<Result<Vec<i8>>>()?;
        rows.push(row);
    }
    FacetVertexMatrix::from_rows(d, rows)
}

/// The digraph encoded by a matrix. A vertex counts as bounded when it has a
/// neighbor through each of its facets.
pub fn digraph_from_matrix(matrix: &FacetVertexMatrix) -> Result<OmpDigraph> {
    let (d, n) = (matrix.dim(), matrix.facets());
    let ground = GroundSet::new(d, n)?;
    let vertices: Vec<FacetSet> = (0..matrix.num_columns()).map(|j| matrix.vertex(j)).collect();
    let leaving: Vec<FacetSet> = (0..matrix.num_columns())
        .map(|j| vertices[j].iter().filter(|&i| matrix.entry(i, j) < 0).collect())
        .collect();
    let mut dg = OmpDigraph::from_outmaps(ground, vertices, leaving, false)?;
    dg.bounded = every_edge_closed(&dg);
    Ok(dg)
}

fn every_edge_closed(dg: &OmpDigraph) -> bool {
    let d = dg.ground.dim();
    dg.vertices.iter().all(|&v| {
        v.iter().all(|e| {
            dg.vertices.iter().any(|&w| w.intersection(v).len() + 1 == d && !w.contains(e))
        })
    })
}

/// Builds a digraph from explicit arcs; each arc must join adjacent vertices.
pub fn digraph_from_arcs(ground: GroundSet, vertices: Vec<FacetSet>, arcs: &[(FacetSet, FacetSet)]) -> Result<OmpDigraph> {
    let mut leaving = vec![FacetSet::EMPTY; vertices.len()];
    for &(a, b) in arcs {
        let i = vertices.iter().position(|&v| v == a).ok_or_else(|| OmError::UnknownVertex(a.to_string()))?;
        if !vertices.contains(&b) {
            return Err(OmError::UnknownVertex(b.to_string()));
        }
        let e = a
            .difference(b)
            .single()
            .filter(|_| a.len() == b.len())
            .ok_or_else(|| OmError::InconsistentEdge(a.to_string(), b.to_string()))?;
        leaving[i].insert(e);
    }
    let mut dg = OmpDigraph::from_outmaps(ground, vertices, leaving, false)?;
    dg.bounded = every_edge_closed(&dg);
    Ok(dg)
}

/// Re-emits a digraph as a facet-vertex matrix (columns in vertex order).
pub fn facet_vertex_matrix(dg: &OmpDigraph) -> Result<FacetVertexMatrix> {
    let n = dg.ground.facets();
    let columns: Vec<Vec<i8>> = dg
        .vertices
        .iter()
        .zip(&dg.leaving)
        .map(|(&v, &out)| {
            (1..=n as Element)
                .map(|i| if !v.contains(i) { 0 } else if out.contains(i) { -1 } else { 1 })
                .collect()
        })
        .collect();
    if columns.is_empty() {
        return Err(OmError::MatrixParse("digraph has no vertices".into()));
    }
    FacetVertexMatrix::from_columns(dg.ground.dim(), n, &columns)
}

/// Length of a shortest directed path, `None` when unreachable.
pub fn shortest_monotone_distance(dg: &OmpDigraph, from: FacetSet, to: FacetSet) -> Result<Option<usize>> {
    let s = dg.index_of(from).ok_or_else(|| OmError::UnknownVertex(from.to_string()))?;
    let t = dg.index_of(to).ok_or_else(|| OmError::UnknownVertex(to.to_string()))?;
    let mut dist = vec![usize::MAX; dg.vertices.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return Ok(Some(dist[u]));
        }
        for w in dg.out_neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(None)
}

/// Whether a given label sequence is a directed path of the digraph.
pub fn has_directed_path(dg: &OmpDigraph, labels: &[FacetSet]) -> bool {
    labels.iter().all(|&l| dg.index_of(l).is_some()) && labels.windows(2).all(|w| dg.has_arc(w[0], w[1]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOutmap {
    pub vertex: FacetSet,
    pub outmap: FacetSet,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceVerdict {
    pub facets: FacetSet,
    pub vertices: usize,
    pub sources: usize,
    pub sinks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphReport {
    pub vertices: usize,
    pub arcs: usize,
    pub bounded: bool,
    pub acyclic: bool,
    pub sources: Vec<FacetSet>,
    pub sinks: Vec<FacetSet>,
    /// Shortest directed distance from the unique source to the unique sink.
    pub source_to_sink: Option<usize>,
    pub faces_checked: usize,
    /// Faces (given by facet sets of size at most `d - 1`) without a unique
    /// source and a unique sink.
    pub faces_failing: Vec<FaceVerdict>,
    pub outmaps: Vec<VertexOutmap>,
    /// `None` when the digraph is cyclic or lacks a unique source.
    pub sweep_neighbors_are_facet_sources: Option<bool>,
}

impl DigraphReport {
    pub fn unique_source_sink_on_faces(&self) -> bool {
        self.faces_failing.is_empty()
    }

    pub fn outmap_size(&self, v: FacetSet) -> Option<usize> {
        self.outmaps.iter().find(|o| o.vertex == v).map(|o| o.size)
    }
}

fn is_acyclic(dg: &OmpDigraph) -> bool {
    let n = dg.vertices.len();
    let mut indeg: Vec<usize> = (0..n).map(|i| dg.in_degree(i)).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut visited = 0;
    while let Some(u) = queue.pop_front() {
        visited += 1;
        for w in dg.out_neighbors(u) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    visited == n
}

fn face_verdict(dg: &OmpDigraph, facets: FacetSet) -> Option<FaceVerdict> {
    let members: Vec<usize> = (0..dg.vertices.len()).filter(|&i| facets.is_subset(dg.vertices[i])).collect();
    if members.is_empty() {
        return None;
    }
    let inside = |j: usize| facets.is_subset(dg.vertices[j]);
    let sources = members.iter().filter(|&&i| !dg.arcs.iter().any(|&(a, b)| b == i && inside(a))).count();
    let sinks = members.iter().filter(|&&i| !dg.out_neighbors(i).any(inside)).count();
    Some(FaceVerdict { facets, vertices: members.len(), sources, sinks })
}

pub fn digraph_checks(dg: &OmpDigraph) -> DigraphReport {
    let n = dg.vertices.len();
    let acyclic = is_acyclic(dg);
    let sources: Vec<usize> = (0..n).filter(|&i| dg.in_degree(i) == 0).collect();
    let sinks: Vec<usize> = (0..n).filter(|&i| dg.out_degree(i) == 0).collect();
    let source_to_sink = match (sources.as_slice(), sinks.as_slice()) {
        ([s], [t]) => shortest_monotone_distance(dg, dg.vertices[*s], dg.vertices[*t]).ok().flatten(),
        _ => None,
    };

    let d = dg.ground.dim();
    let mut faces_checked = 0;
    let mut faces_failing = Vec::new();
    for k in 0..d {
        for fs in (1..=dg.ground.facets() as Element).combinations(k) {
            let facets: FacetSet = fs.into_iter().collect();
            if let Some(v) = face_verdict(dg, facets) {
                faces_checked += 1;
                if v.sources != 1 || v.sinks != 1 {
                    faces_failing.push(v);
                }
            }
        }
    }

    let outmaps = dg
        .vertices
        .iter()
        .zip(&dg.leaving)
        .map(|(&vertex, &outmap)| VertexOutmap { vertex, outmap, size: outmap.len() })
        .collect();

    let sweep_neighbors_are_facet_sources = match sources.as_slice() {
        [s] if acyclic => {
            let s = *s;
            let v = dg.vertices[s];
            // a neighbour can follow the source in some sweep iff the source
            // is its only in-neighbour
            let follows = |j: usize| dg.arcs.iter().all(|&(a, b)| b != j || a == s);
            Some(dg.out_neighbors(s).filter(|&j| follows(j)).all(|j| {
                let facet = dg.vertices[j].difference(v).single().expect("neighbors differ in one facet");
                !dg.arcs.iter().any(|&(a, b)| b == j && dg.vertices[a].contains(facet))
            }))
        }
        _ => None,
    };

    DigraphReport {
        vertices: n,
        arcs: dg.arcs.len(),
        bounded: dg.bounded,
        acyclic,
        sources: sources.iter().map(|&i| dg.vertices[i]).collect(),
        sinks: sinks.iter().map(|&i| dg.vertices[i]).collect(),
        source_to_sink,
        faces_checked,
        faces_failing,
        outmaps,
        sweep_neighbors_are_facet_sources,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(v: &[Element]) -> FacetSet {
        v.iter().copied().collect()
    }

    #[test]
    fn parse_tolerates_brackets_and_round_trips() {
        let text = "[-1  1  0]\n[ 1  0 -1]\n\n[ 0 -1  1]\n";
        let m = parse_facet_vertex_matrix(text, 2).unwrap();
        assert_eq!((m.facets(), m.num_columns()), (3, 3));
        assert_eq!(m.emit(), "-1 1 0\n1 0 -1\n0 -1 1\n");
        assert_eq!(parse_facet_vertex_matrix(&m.emit(), 2).unwrap(), m);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(parse_facet_vertex_matrix("1 0\n1", 1).is_err());
        assert!(parse_facet_vertex_matrix("2 0\n0 1", 1).is_err());
        assert!(parse_facet_vertex_matrix("1 1\n1 0", 1).is_err());
        assert!(parse_facet_vertex_matrix("1 1\n0 0", 1).is_err());
        assert!(parse_facet_vertex_matrix("", 1).is_err());
    }

    #[test]
    fn single_column_digraph() {
        let m = parse_facet_vertex_matrix("-1\n1\n0\n", 2).unwrap();
        let dg = digraph_from_matrix(&m).unwrap();
        assert_eq!(dg.vertices, vec![fs(&[1, 2])]);
        assert!(dg.arcs.is_empty());
        assert!(!dg.bounded);
        assert_eq!(shortest_monotone_distance(&dg, fs(&[1, 2]), fs(&[1, 2])).unwrap(), Some(0));
        assert!(shortest_monotone_distance(&dg, fs(&[1, 3]), fs(&[1, 2])).is_err());
    }

    #[test]
    fn antisymmetry_is_enforced() {
        // both endpoints of the edge [1,2]-[2,3] claim it as an out-arc
        let m = parse_facet_vertex_matrix("-1 0\n1 1\n0 -1\n", 2).unwrap();
        assert!(matches!(digraph_from_matrix(&m), Err(OmError::InconsistentEdge(..))));
    }

    /// A triangle (d = 2, n = 3) oriented 12 -> 13 -> 23 with 12 -> 23.
    #[test]
    fn triangle_checks() {
        let g = GroundSet::new(2, 3).unwrap();
        let (a, b, c) = (fs(&[1, 2]), fs(&[1, 3]), fs(&[2, 3]));
        let dg = digraph_from_arcs(g, vec![a, b, c], &[(a, b), (b, c), (a, c)]).unwrap();
        let r = digraph_checks(&dg);
        assert!(r.acyclic && r.bounded);
        assert_eq!(r.sources, vec![a]);
        assert_eq!(r.sinks, vec![c]);
        assert_eq!(r.source_to_sink, Some(1));
        assert!(r.unique_source_sink_on_faces());
        assert_eq!(r.outmap_size(a), Some(2));
        assert_eq!(r.sweep_neighbors_are_facet_sources, Some(true));
        let back = facet_vertex_matrix(&dg).unwrap();
        assert_eq!(digraph_from_matrix(&back).unwrap().arcs, dg.arcs);
    }
}
