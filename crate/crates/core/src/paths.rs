//! Combinatorial types of monotone paths between two complementary vertices.
//!
//! A path type is the sequence of vertex labels (facet sets) it visits. The
//! one-revisit families are stored as literal templates; every relabeling of
//! the source facets and of the sink facets gives another type of the family.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{OmError, Result};
use crate::om::{Element, FacetSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathType {
    pub d: usize,
    pub n: usize,
    pub labels: Vec<FacetSet>,
}

impl PathType {
    pub fn new(d: usize, n: usize, labels: Vec<FacetSet>) -> Self {
        Self { d, n, labels }
    }

    /// Builds a path from labels written as ordered tuples.
    pub fn from_tuples(d: usize, n: usize, tuples: &[&[Element]]) -> Self {
        Self::new(d, n, tuples.iter().map(|t| t.iter().copied().collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.labels.len() < 2
    }

    pub fn source(&self) -> FacetSet {
        self.labels[0]
    }

    pub fn sink(&self) -> FacetSet {
        *self.labels.last().expect("path has labels")
    }

    /// Facet left at step `i` (from `labels[i]` to `labels[i + 1]`).
    pub fn leaving_facet(&self, i: usize) -> Option<Element> {
        self.labels[i].difference(self.labels[i + 1]).single()
    }

    pub fn relabeled(&self, map: &impl Fn(Element) -> Element) -> Self {
        Self::new(self.d, self.n, self.labels.iter().map(|l| l.iter().map(map).collect()).collect())
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.d, self.n, self.labels.iter().rev().copied().collect())
    }
}

impl fmt::Display for PathType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.labels.iter().join(","))
    }
}

/// All `(d!)²` direct paths from `{1..d}` to `{d+1..2d}`.
///
/// A pair of orderings `(p, q)` gives `v_i = {q_1..q_i} ∪ {p_{i+1}..p_d}`:
/// `p` is the order in which the source facets are left, `q` the order in
/// which the sink facets are entered.
pub fn direct_path_types(d: usize) -> Vec<PathType> {
    direct_paths_between(d, 2 * d, FacetSet::range(1, d as Element), FacetSet::range(d as Element + 1, 2 * d as Element))
}

/// Direct paths between two disjoint `d`-sets of facets out of `n`.
pub fn direct_paths_between(d: usize, n: usize, source: FacetSet, sink: FacetSet) -> Vec<PathType> {
    assert!(source.len() == d && sink.len() == d && source.intersection(sink).is_empty());
    let mut out = Vec::new();
    for p in source.iter().permutations(d) {
        for q in sink.iter().permutations(d) {
            let labels = (0..=d).map(|i| q[..i].iter().chain(&p[i..]).copied().collect()).collect();
            out.push(PathType::new(d, n, labels));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CatalogCase {
    /// Length-6 strictly monotone paths for `(5, 10)`.
    #[serde(rename = "sm-5-10-len6")]
    Sm510Len6,
    /// Length-7 paths for `(5, 10)` with the fixed two-step prefix.
    #[serde(rename = "m-5-10-len7")]
    M510Len7,
    /// Length-5 one-revisit paths for `(4, 9)`.
    #[serde(rename = "sm-4-9-len5")]
    Sm49Len5,
    /// Length-6 paths for `(4, 9)`, nonrevisiting on facet 6 after the first step.
    #[serde(rename = "sm-4-9-len6")]
    Sm49Len6,
}

impl CatalogCase {
    pub const ALL: [CatalogCase; 4] = [Self::Sm510Len6, Self::M510Len7, Self::Sm49Len5, Self::Sm49Len6];

    pub fn id(self) -> &'static str {
        match self {
            Self::Sm510Len6 => "sm-5-10-len6",
            Self::M510Len7 => "m-5-10-len7",
            Self::Sm49Len5 => "sm-4-9-len5",
            Self::Sm49Len6 => "sm-4-9-len6",
        }
    }

    pub fn dims(self) -> (usize, usize) {
        match self {
            Self::Sm510Len6 | Self::M510Len7 => (5, 10),
            Self::Sm49Len5 | Self::Sm49Len6 => (4, 9),
        }
    }
}

impl FromStr for CatalogCase {
    type Err = OmError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|c| c.id() == s).ok_or_else(|| OmError::UnknownCase(s.to_string()))
    }
}

impl fmt::Display for CatalogCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFamily {
    pub case: CatalogCase,
    /// 1-based position in the catalog.
    pub index: usize,
    pub template: PathType,
    /// Facets permuted among themselves by relabeling: the source's and the sink's.
    pub source_facets: FacetSet,
    pub sink_facets: FacetSet,
}

type Template = &'static [&'static [Element]];

const SM_5_10_LEN6: [Template; 8] = [
    &[&[1, 2, 3, 4, 5], &[6, 2, 3, 4, 5], &[6, 7, 3, 4, 5], &[8, 7, 3, 4, 5], &[8, 7, 9, 4, 5], &[8, 7, 9, 6, 5], &[8, 7, 9, 6, 10]],
    &[&[1, 2, 3, 4, 5], &[6, 2, 3, 4, 5], &[6, 7, 3, 4, 5], &[8, 7, 3, 4, 5], &[8, 7, 9, 4, 5], &[8, 7, 9, 10, 5], &[8, 7, 9, 10, 6]],
    &[&[1, 2, 3, 4, 5], &[6, 2, 3, 4, 5], &[6, 7, 3, 4, 5], &[6, 7, 8, 4, 5], &[9, 7, 8, 4, 5], &[9, 7, 8, 10, 5], &[9, 7, 8, 10, 6]],
    &[&[1, 2, 3, 4, 5], &[6, 2, 3, 4, 5], &[6, 7, 3, 4, 5], &[6, 7, 8, 4, 5], &[6, 9, 8, 4, 5], &[6, 9, 8, 10, 5], &[6, 9, 8, 10, 7]],
    &[&[1, 2, 3, 4, 5], &[6, 2, 3, 4, 5], &[6, 7, 3, 4, 5], &[6, 7, 1, 4, 5], &[6, 7, 1, 8, 5], &[6, 7, 9, 8, 5], &[6, 7, 9, 8, 10]],
    &[&[1, 2, 3, 4, 5], &[6, 2, 3, 4, 5], &[6, 7, 3, 4, 5], &[6, 7, 1, 4, 5], &[6, 7, 1, 8, 5], &[6, 7, 1, 8, 9], &[6, 7, 10, 8, 9]],
    &[&[1, 2, 3, 4, 5], &[6, 2, 3, 4, 5], &[6, 7, 3, 4, 5], &[6, 7, 8, 4, 5], &[6, 7, 8, 1, 5], &[6, 7, 8, 1, 9], &[6, 7, 8, 10, 9]],
    &[&[1, 2, 3, 4, 5], &[6, 2, 3, 4, 5], &[6, 7, 3, 4, 5], &[6, 7, 8, 4, 5], &[6, 7, 8, 2, 5], &[6, 7, 8, 2, 9], &[6, 7, 8, 10, 9]],
];

/// Suffixes after the common prefix `[1,2,3,4,5],[6,2,3,4,5]`.
const M_5_10_LEN7: [Template; 8] = [
    &[&[6, 7, 3, 4, 5], &[6, 7, 8, 4, 5], &[6, 7, 8, 1, 5], &[6, 7, 8, 1, 2], &[6, 7, 8, 9, 2], &[6, 7, 8, 9, 10]],
    &[&[6, 7, 3, 4, 5], &[6, 7, 8, 4, 5], &[6, 7, 8, 2, 5], &[6, 7, 8, 2, 1], &[6, 7, 8, 9, 1], &[6, 7, 8, 9, 10]],
    &[&[6, 7, 3, 4, 5], &[6, 7, 1, 4, 5], &[6, 7, 1, 8, 5], &[6, 7, 1, 8, 2], &[6, 7, 9, 8, 2], &[6, 7, 9, 8, 10]],
    &[&[6, 7, 3, 4, 5], &[6, 7, 1, 4, 5], &[6, 7, 1, 8, 5], &[6, 7, 2, 8, 5], &[6, 7, 2, 8, 9], &[6, 7, 10, 8, 9]],
    &[&[6, 7, 3, 4, 5], &[6, 7, 1, 4, 5], &[6, 7, 1, 2, 5], &[6, 7, 1, 2, 8], &[6, 7, 9, 2, 8], &[6, 7, 9, 10, 8]],
    &[&[6, 7, 3, 4, 5], &[6, 7, 1, 4, 5], &[6, 7, 1, 2, 5], &[6, 7, 8, 2, 5], &[6, 7, 8, 2, 9], &[6, 7, 8, 10, 9]],
    &[&[6, 7, 3, 4, 5], &[6, 7, 1, 4, 5], &[6, 7, 1, 2, 5], &[6, 7, 1, 2, 8], &[6, 7, 1, 9, 8], &[6, 7, 10, 9, 8]],
    &[&[6, 7, 3, 4, 5], &[6, 7, 1, 4, 5], &[6, 7, 1, 2, 5], &[6, 7, 8, 2, 5], &[6, 7, 8, 9, 5], &[6, 7, 8, 9, 10]],
];

const SM_4_9_LEN5: [Template; 8] = [
    &[&[1, 2, 3, 4], &[5, 2, 3, 4], &[5, 6, 3, 4], &[5, 6, 7, 4], &[5, 6, 7, 8], &[9, 6, 7, 8]],
    &[&[1, 2, 3, 4], &[5, 2, 3, 4], &[5, 6, 3, 4], &[5, 6, 7, 4], &[8, 6, 7, 4], &[8, 6, 7, 9]],
    &[&[1, 2, 3, 4], &[5, 2, 3, 4], &[5, 6, 3, 4], &[7, 6, 3, 4], &[7, 6, 8, 4], &[7, 6, 8, 9]],
    &[&[1, 2, 3, 4], &[6, 2, 3, 4], &[6, 5, 3, 4], &[6, 5, 7, 4], &[6, 5, 7, 8], &[6, 9, 7, 8]],
    &[&[1, 2, 3, 4], &[6, 2, 3, 4], &[6, 5, 3, 4], &[6, 5, 7, 4], &[6, 8, 7, 4], &[6, 8, 7, 9]],
    &[&[1, 2, 3, 4], &[6, 2, 3, 4], &[6, 7, 3, 4], &[6, 7, 5, 4], &[6, 7, 5, 8], &[6, 7, 9, 8]],
    &[&[1, 2, 3, 4], &[6, 2, 3, 4], &[6, 7, 3, 4], &[8, 7, 3, 4], &[8, 7, 9, 4], &[8, 7, 9, 6]],
    &[&[1, 2, 3, 4], &[6, 2, 3, 4], &[6, 7, 3, 4], &[6, 7, 1, 4], &[6, 7, 1, 8], &[6, 7, 9, 8]],
];

/// Paths on facet 6 from `[6,2,3,4]`; the source `[1,2,3,4]` is prepended.
const SM_4_9_LEN6: [Template; 8] = [
    &[&[6, 2, 3, 4], &[6, 5, 3, 4], &[6, 5, 1, 4], &[6, 5, 1, 7], &[6, 5, 8, 7], &[6, 9, 8, 7]],
    &[&[6, 2, 3, 4], &[6, 5, 3, 4], &[6, 5, 1, 4], &[6, 5, 1, 7], &[6, 8, 1, 7], &[6, 8, 9, 7]],
    &[&[6, 2, 3, 4], &[6, 5, 3, 4], &[6, 5, 1, 4], &[6, 7, 1, 4], &[6, 7, 8, 4], &[6, 7, 8, 9]],
    &[&[6, 2, 3, 4], &[6, 5, 3, 4], &[6, 5, 1, 4], &[6, 7, 1, 4], &[6, 7, 1, 8], &[6, 7, 9, 8]],
    &[&[6, 2, 3, 4], &[6, 5, 3, 4], &[6, 5, 7, 4], &[6, 5, 7, 1], &[6, 8, 7, 1], &[6, 8, 7, 9]],
    &[&[6, 2, 3, 4], &[6, 5, 3, 4], &[6, 5, 7, 4], &[6, 1, 7, 4], &[6, 1, 7, 8], &[6, 9, 7, 8]],
    &[&[6, 2, 3, 4], &[6, 7, 3, 4], &[6, 7, 1, 4], &[6, 7, 1, 5], &[6, 7, 8, 5], &[6, 7, 8, 9]],
    &[&[6, 2, 3, 4], &[6, 7, 3, 4], &[6, 7, 5, 4], &[6, 7, 5, 1], &[6, 7, 8, 1], &[6, 7, 8, 9]],
];

/// The canonical family templates of a catalog case, in printed order.
pub fn revisit_families(case: CatalogCase) -> Vec<PathFamily> {
    let (d, n) = case.dims();
    let (templates, prefix): (&[Template], Template) = match case {
        CatalogCase::Sm510Len6 => (&SM_5_10_LEN6, &[]),
        CatalogCase::M510Len7 => (&M_5_10_LEN7, &[&[1, 2, 3, 4, 5], &[6, 2, 3, 4, 5]]),
        CatalogCase::Sm49Len5 => (&SM_4_9_LEN5, &[]),
        CatalogCase::Sm49Len6 => (&SM_4_9_LEN6, &[&[1, 2, 3, 4]]),
    };
    templates
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let tuples: Vec<&[Element]> = prefix.iter().chain(t.iter()).copied().collect();
            let template = PathType::from_tuples(d, n, &tuples);
            PathFamily {
                case,
                index: i + 1,
                source_facets: template.source(),
                sink_facets: template.sink(),
                template,
            }
        })
        .collect()
}

/// Every relabeling of a family's template by a permutation of the source
/// facets and a permutation of the sink facets, deduplicated by label sequence.
pub fn expand_relabelings(family: &PathFamily) -> Vec<PathType> {
    let src = family.source_facets.to_vec();
    let snk = family.sink_facets.to_vec();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in src.iter().copied().permutations(src.len()) {
        for q in snk.iter().copied().permutations(snk.len()) {
            let map = |e: Element| {
                if let Some(i) = src.iter().position(|&x| x == e) {
                    p[i]
                } else if let Some(i) = snk.iter().position(|&x| x == e) {
                    q[i]
                } else {
                    e
                }
            };
            let path = family.template.relabeled(&map);
            if seen.insert(path.labels.clone()) {
                out.push(path);
            }
        }
    }
    out
}

/// Relabelings of every family of a case, deduplicated across families.
pub fn expand_case(case: CatalogCase) -> Vec<PathType> {
    let mut seen = HashSet::new();
    revisit_families(case)
        .iter()
        .flat_map(expand_relabelings)
        .filter(|p| seen.insert(p.labels.clone()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PathViolation {
    BadLabel { index: usize },
    NotAdjacent { index: usize },
    RepeatedLabel { first: usize, second: usize },
    /// A facet entered at `index` is left again at the next step.
    EnteredFacetDropped { index: usize, facet: Element },
    /// A facet left at `index` is re-entered at the next step.
    LeftFacetReturned { index: usize, facet: Element },
    SourceNeighborMisplaced { index: usize },
    SinkNeighborMisplaced { index: usize },
}

/// Checks the shortest-path rules; an empty list means the type is valid.
pub fn validate_path_type(path: &PathType) -> Vec<PathViolation> {
    use PathViolation::*;
    let (d, n, labels) = (path.d, path.n, &path.labels);
    let universe = FacetSet::range(1, n as Element);
    let mut out = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        if l.len() != d || !l.is_subset(universe) {
            out.push(BadLabel { index: i });
        }
    }
    if labels.len() < 2 || !out.is_empty() {
        return out;
    }
    for i in 0..labels.len() - 1 {
        if labels[i].intersection(labels[i + 1]).len() + 1 != d {
            out.push(NotAdjacent { index: i });
        }
    }
    for (i, j) in (0..labels.len()).tuple_combinations() {
        if labels[i] == labels[j] {
            out.push(RepeatedLabel { first: i, second: j });
        }
    }
    let last = labels.len() - 1;
    for i in 1..last {
        if let Some(entered) = labels[i].difference(labels[i - 1]).single() {
            if !labels[i + 1].contains(entered) {
                out.push(EnteredFacetDropped { index: i, facet: entered });
            }
        }
        if let Some(left) = labels[i - 1].difference(labels[i]).single() {
            if labels[i + 1].contains(left) {
                out.push(LeftFacetReturned { index: i, facet: left });
            }
        }
    }
    let (source, sink) = (labels[0], labels[last]);
    for (i, l) in labels.iter().enumerate() {
        if i >= 2 && l.intersection(source).len() + 1 == d {
            out.push(SourceNeighborMisplaced { index: i });
        }
        if i + 2 <= last && l.intersection(sink).len() + 1 == d {
            out.push(SinkNeighborMisplaced { index: i });
        }
    }
    out
}

/// Every path of exactly `len` steps from `source` to `sink` that passes
/// [`validate_path_type`], found by depth-first search.
pub fn enumerate_valid_paths(d: usize, n: usize, source: FacetSet, sink: FacetSet, len: usize) -> Vec<PathType> {
    fn extend(d: usize, n: usize, sink: FacetSet, len: usize, labels: &mut Vec<FacetSet>, out: &mut Vec<PathType>) {
        let cur = *labels.last().unwrap();
        let remaining = len + 1 - labels.len();
        if remaining == 0 {
            if cur == sink {
                let path = PathType::new(d, n, labels.clone());
                if validate_path_type(&path).is_empty() {
                    out.push(path);
                }
            }
            return;
        }
        if sink.difference(cur).len() > remaining {
            return;
        }
        let (source, i) = (labels[0], labels.len());
        for leave in cur.iter() {
            for enter in (1..=n as Element).filter(|&e| !cur.contains(e)) {
                let mut next = cur;
                next.remove(leave);
                next.insert(enter);
                if labels.contains(&next) || (i >= 2 && next.intersection(source).len() + 1 == d) {
                    continue;
                }
                if i + 1 < len && next.intersection(sink).len() + 1 == d {
                    continue;
                }
                if i >= 2 {
                    let prev = labels[i - 2];
                    let entered = cur.difference(prev).single();
                    let left = prev.difference(cur).single();
                    if entered == Some(leave) || left == Some(enter) {
                        continue;
                    }
                }
                labels.push(next);
                extend(d, n, sink, len, labels, out);
                labels.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(d, n, sink, len, &mut vec![source], &mut out);
    out
}
