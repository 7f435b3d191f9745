//! Vertices and digraph of the oriented matroid program defined by a chirotope.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::chirotope::Chirotope;
use super::ground::{Element, GroundSet};
use crate::error::{OmError, Result};

/// A set of facets, stored as a bitmask (bit `i - 1` is facet `i`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetSet(u32);

impl FacetSet {
    pub const EMPTY: FacetSet = FacetSet(0);

    pub fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn range(lo: Element, hi: Element) -> Self {
        (lo..=hi).collect()
    }

    pub fn contains(self, e: Element) -> bool {
        e >= 1 && e <= 32 && self.0 & (1 << (e - 1)) != 0
    }

    pub fn insert(&mut self, e: Element) {
        self.0 |= 1 << (e - 1);
    }

    pub fn remove(&mut self, e: Element) {
        self.0 &= !(1 << (e - 1));
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Element> {
        (1..=32u8).filter(move |&e| self.contains(e))
    }

    pub fn to_vec(self) -> Vec<Element> {
        self.iter().collect()
    }

    /// The single element of a one-element set.
    pub fn single(self) -> Option<Element> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as Element + 1)
    }
}

impl FromIterator<Element> for FacetSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        let mut s = FacetSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Display for FacetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.iter().join(","))
    }
}

impl fmt::Debug for FacetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FacetSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for FacetSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Element>::deserialize(d)?;
        if v.iter().any(|&e| e == 0 || e > 32) {
            return Err(serde::de::Error::custom("facet out of range 1..=32"));
        }
        Ok(v.into_iter().collect())
    }
}

/// Oriented graph of an oriented matroid program.
///
/// `leaving[i]` is the outmap of `vertices[i]`: the facets through which the
/// edges at that vertex are directed away from it. Arcs join vertices sharing
/// `d - 1` facets and point away from the vertex whose outmap contains the
/// facet being left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmpDigraph {
    pub ground: GroundSet,
    pub vertices: Vec<FacetSet>,
    pub leaving: Vec<FacetSet>,
    pub arcs: BTreeSet<(usize, usize)>,
    pub bounded: bool,
}

impl OmpDigraph {
    /// Assembles a digraph from vertices and outmaps, deriving the arcs.
    ///
    /// Fails when two adjacent vertices disagree on the direction of their
    /// common edge.
    pub fn from_outmaps(ground: GroundSet, vertices: Vec<FacetSet>, leaving: Vec<FacetSet>, bounded: bool) -> Result<Self> {
        let d = ground.dim();
        let mut arcs = BTreeSet::new();
        for (i, j) in (0..vertices.len()).tuple_combinations() {
            let (a, b) = (vertices[i], vertices[j]);
            if a.intersection(b).len() + 1 != d {
                continue;
            }
            let a_leaves = leaving[i].intersection(a.difference(b)) == a.difference(b);
            let b_leaves = leaving[j].intersection(b.difference(a)) == b.difference(a);
            match (a_leaves, b_leaves) {
                (true, false) => {
                    arcs.insert((i, j));
                }
                (false, true) => {
                    arcs.insert((j, i));
                }
                _ => return Err(OmError::InconsistentEdge(a.to_string(), b.to_string())),
            }
        }
        Ok(Self { ground, vertices, leaving, arcs, bounded })
    }

    pub fn index_of(&self, v: FacetSet) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn out_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.range((i, 0)..(i + 1, 0)).map(|&(_, j)| j)
    }

    pub fn has_arc(&self, from: FacetSet, to: FacetSet) -> bool {
        match (self.index_of(from), self.index_of(to)) {
            (Some(i), Some(j)) => self.arcs.contains(&(i, j)),
            _ => false,
        }
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.arcs.iter().filter(|&&(_, j)| j == i).count()
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_neighbors(i).count()
    }
}

/// The `d`-subsets `V ⊆ [n]` whose cocircuit with zero set `V`, scaled
/// positive on `g`, is positive on every other facet.
pub fn program_vertices(chi: &Chirotope) -> Vec<FacetSet> {
    let ground = chi.ground();
    let (n, d, g) = (ground.facets() as Element, ground.dim(), ground.g());
    (1..=n)
        .combinations(d)
        .filter(|v| {
            let at_g = chi.chi_cat(v, &[g]);
            (1..=n).filter(|k| !v.contains(k)).all(|k| chi.chi_cat(v, &[k]) == at_g)
        })
        .map(|v| v.into_iter().collect())
        .collect()
}

/// Outmap of a vertex: facets `e ∈ V` on which the circuit supported on
/// `V ∪ {f, g}`, scaled positive on `f`, is negative.
pub fn vertex_outmap(chi: &Chirotope, vertex: FacetSet) -> Result<FacetSet> {
    let ground = chi.ground();
    let mut support = vertex.to_vec();
    support.extend([ground.f(), ground.g()]);
    let circuit = chi.circuit_on_support(&support, ground.f())?;
    Ok(vertex.iter().filter(|&e| circuit.get(e) < 0).collect())
}

/// Whether every matroid-polytope vertex is also a program vertex: each
/// cocircuit vanishing on a `d`-subset of `[n]` that is sign-constant on the
/// remaining facets agrees with that sign on `g`.
pub fn is_bounded(chi: &Chirotope) -> bool {
    let ground = chi.ground();
    let (n, d, g) = (ground.facets() as Element, ground.dim(), ground.g());
    (1..=n).combinations(d).all(|z| {
        let mut others = (1..=n).filter(|k| !z.contains(k)).map(|k| chi.chi_cat(&z, &[k]));
        let first = others.next().expect("d < n leaves a facet");
        if others.all(|s| s == first) {
            chi.chi_cat(&z, &[g]) == first
        } else {
            true
        }
    })
}

pub fn program_digraph(chi: &Chirotope) -> Result<OmpDigraph> {
    let vertices = program_vertices(chi);
    let leaving = vertices.iter().map(|&v| vertex_outmap(chi, v)).collect::<Result<Vec<_>>>()?;
    OmpDigraph::from_outmaps(*chi.ground(), vertices, leaving, is_bounded(chi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facet_set_basics() {
        let s: FacetSet = [3, 1, 5].into_iter().collect();
        assert_eq!(s.to_vec(), vec![1, 3, 5]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_string(), "[1,3,5]");
        assert_eq!(FacetSet::range(2, 4).to_vec(), vec![2, 3, 4]);
        assert_eq!(s.difference(FacetSet::range(1, 3)).single(), Some(5));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[1,3,5]");
        assert_eq!(serde_json::from_str::<FacetSet>(&json).unwrap(), s);
    }

    #[test]
    fn outmaps_must_agree_on_edges() {
        let ground = GroundSet::new(1, 3).unwrap();
        let v: Vec<FacetSet> = vec![[1].into_iter().collect(), [2].into_iter().collect()];
        let ok = OmpDigraph::from_outmaps(ground, v.clone(), vec![v[0], FacetSet::EMPTY], true).unwrap();
        assert!(ok.arcs.contains(&(0, 1)));
        assert!(OmpDigraph::from_outmaps(ground, v.clone(), vec![v[0], v[1]], true).is_err());
        assert!(OmpDigraph::from_outmaps(ground, v, vec![FacetSet::EMPTY; 2], true).is_err());
    }
}
