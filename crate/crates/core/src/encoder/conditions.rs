//! Equalities between chirotope values and the clauses that enforce them.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::cnf::{Clause, Literal};
use super::varmap::VarMap;
use crate::error::Result;
use crate::om::{Element, FacetSet, GroundSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Equal,
    Opposite,
}

impl Relation {
    pub fn from_sign(s: i8) -> Self {
        if s > 0 {
            Relation::Equal
        } else {
            Relation::Opposite
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Relation::Equal => 1,
            Relation::Opposite => -1,
        }
    }
}

/// `χ(left) = ±χ(right)` on two ordered tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChiCondition {
    pub left: Vec<Element>,
    pub right: Vec<Element>,
    pub relation: Relation,
}

impl ChiCondition {
    pub fn new(left: Vec<Element>, right: Vec<Element>, relation: Relation) -> Self {
        Self { left, right, relation }
    }

    pub fn biconditional(&self, vm: &VarMap) -> Result<Biconditional> {
        Ok(Biconditional {
            a: vm.literal_for(&self.left, 1)?,
            b: vm.literal_for(&self.right, 1)?,
            relation: self.relation,
        })
    }

    /// Whether the condition holds under a sign evaluator.
    pub fn holds(&self, chi: impl Fn(&[Element]) -> i8) -> bool {
        chi(&self.left) == self.relation.sign() * chi(&self.right)
    }
}

impl fmt::Display for ChiCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.relation == Relation::Opposite { "-" } else { "" };
        write!(f, "chi({})={}chi({})", self.left.iter().join(","), sign, self.right.iter().join(","))
    }
}

/// `a ≡ b` or `a ≡ ¬b` between two literals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Biconditional {
    pub a: Literal,
    pub b: Literal,
    pub relation: Relation,
}

/// A biconditional whose two literals share a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degenerate {
    Tautology,
    Contradiction,
}

impl Biconditional {
    /// Whether the positive literals of the two variables must be equal.
    pub fn same_polarity(&self) -> bool {
        (self.a.positive == self.b.positive) == (self.relation == Relation::Equal)
    }

    pub fn degenerate(&self) -> Option<Degenerate> {
        (self.a.var == self.b.var).then(|| {
            if self.same_polarity() {
                Degenerate::Tautology
            } else {
                Degenerate::Contradiction
            }
        })
    }

    /// Polarity-normalized identity, shared by every biconditional with the
    /// same meaning.
    pub fn key(&self) -> (u32, u32, bool) {
        let (x, y) = (self.a.var.min(self.b.var), self.a.var.max(self.b.var));
        (x, y, self.same_polarity())
    }

    pub fn holds(&self, assignment: &[bool]) -> bool {
        (self.a.eval(assignment) == self.b.eval(assignment)) == (self.relation == Relation::Equal)
    }
}

/// The two-literal clauses of a biconditional. A tautology gives none; a
/// contradiction gives the two opposite unit clauses.
pub fn relation_clauses(bic: &Biconditional) -> Vec<Clause> {
    let (a, b) = (bic.a, bic.b);
    match bic.degenerate() {
        Some(Degenerate::Tautology) => vec![],
        Some(Degenerate::Contradiction) => vec![vec![Literal::pos(a.var)], vec![Literal::neg(a.var)]],
        None => match bic.relation {
            Relation::Equal => vec![vec![!a, b], vec![a, !b]],
            Relation::Opposite => vec![vec![a, b], vec![!a, !b]],
        },
    }
}

fn replaced(v: &[Element], from: Element, to: Element) -> Vec<Element> {
    v.iter().map(|&x| if x == from { to } else { x }).collect()
}

fn with(v: &[Element], last: Element) -> Vec<Element> {
    v.iter().copied().chain([last]).collect()
}

/// `χ(V,k) = χ(V,g)` for every facet `k ∉ V`: the cocircuit vanishing on `V`
/// is positive on all other facets.
pub fn cocircuit_positivity(ground: &GroundSet, vertex: FacetSet) -> Vec<ChiCondition> {
    let v = vertex.to_vec();
    let g = ground.g();
    (1..=ground.facets() as Element)
        .filter(|k| !vertex.contains(*k))
        .map(|k| ChiCondition::new(with(&v, k), with(&v, g), Relation::Equal))
        .collect()
}

/// `χ(V,g) = ±χ(V_{e→f},g)`: the circuit on `V ∪ {f,g}`, positive on `f`, has
/// sign `circuit_sign` on `e` (negative means the edge through `e` leaves `V`).
pub fn circuit_pivot(ground: &GroundSet, vertex: FacetSet, e: Element, circuit_sign: i8) -> ChiCondition {
    let v = vertex.to_vec();
    let g = ground.g();
    ChiCondition::new(with(&v, g), with(&replaced(&v, e, ground.f()), g), Relation::from_sign(-circuit_sign))
}

/// `χ(V,f) = χ(V_{k→g},f)`, the endpoint condition stated for each `k ∈ V`.
pub fn endpoint_pivot(ground: &GroundSet, vertex: FacetSet, k: Element) -> ChiCondition {
    let v = vertex.to_vec();
    let f = ground.f();
    ChiCondition::new(with(&v, f), with(&replaced(&v, k, ground.g()), f), Relation::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_clause_shapes() {
        let eq = Biconditional { a: Literal::pos(1), b: Literal::pos(2), relation: Relation::Equal };
        assert_eq!(relation_clauses(&eq), vec![vec![Literal::neg(1), Literal::pos(2)], vec![Literal::pos(1), Literal::neg(2)]]);
        let op = Biconditional { relation: Relation::Opposite, ..eq };
        assert_eq!(relation_clauses(&op), vec![vec![Literal::pos(1), Literal::pos(2)], vec![Literal::neg(1), Literal::neg(2)]]);
    }

    #[test]
    fn degenerate_biconditionals_fold() {
        let taut = Biconditional { a: Literal::pos(3), b: Literal::pos(3), relation: Relation::Equal };
        assert_eq!(taut.degenerate(), Some(Degenerate::Tautology));
        assert!(relation_clauses(&taut).is_empty());
        let contra = Biconditional { a: Literal::pos(3), b: Literal::neg(3), relation: Relation::Equal };
        assert_eq!(relation_clauses(&contra).len(), 2);
    }

    #[test]
    fn key_is_polarity_normalized() {
        let a = Biconditional { a: Literal::pos(5), b: Literal::neg(2), relation: Relation::Equal };
        let b = Biconditional { a: Literal::pos(2), b: Literal::pos(5), relation: Relation::Opposite };
        assert_eq!(a.key(), b.key());
        assert_eq!(a.key(), (2, 5, false));
        for bits in 0..4u8 {
            let asg = vec![false, bits & 1 != 0, false, false, false, bits & 2 != 0];
            assert_eq!(a.holds(&asg), b.holds(&asg));
        }
    }

    #[test]
    fn condition_display() {
        let ground = GroundSet::new(5, 10).unwrap();
        let v: FacetSet = [2, 3, 4, 5, 9].into_iter().collect();
        assert_eq!(circuit_pivot(&ground, v, 2, 1).to_string(), "chi(2,3,4,5,9,12)=-chi(11,3,4,5,9,12)");
        assert_eq!(cocircuit_positivity(&ground, v)[0].to_string(), "chi(2,3,4,5,9,1)=chi(2,3,4,5,9,12)");
        assert_eq!(endpoint_pivot(&ground, FacetSet::range(1, 5), 3).to_string(), "chi(1,2,3,4,5,11)=chi(1,2,12,4,5,11)");
    }
}
