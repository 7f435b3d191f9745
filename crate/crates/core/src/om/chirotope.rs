//! Uniform chirotopes, signed circuits and cocircuits.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::ground::{colex_rank, sort_in_place, sort_with_parity, Basis, Element, GroundSet, MAX_ELEMENTS};
use crate::error::{OmError, Result};

/// A uniform chirotope, one sign per sorted basis in colex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chirotope {
    ground: GroundSet,
    signs: Vec<i8>,
}

impl Chirotope {
    /// Builds a chirotope from colex-ordered basis signs. Zeros are rejected.
    pub fn from_signs(ground: GroundSet, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != ground.basis_count() {
            return Err(OmError::NotUniform(format!(
                "expected {} basis signs, got {}",
                ground.basis_count(),
                signs.len()
            )));
        }
        if let Some(i) = signs.iter().position(|&s| s != 1 && s != -1) {
            let b = Basis::from_colex_rank(&ground, i)?;
            return Err(OmError::NotUniform(format!("basis {b} has sign {}", signs[i])));
        }
        Ok(Self { ground, signs })
    }

    /// Builds a chirotope by evaluating `sign` on every sorted basis.
    pub fn from_fn(ground: GroundSet, mut sign: impl FnMut(&[Element]) -> i8) -> Result<Self> {
        let signs = (0..ground.basis_count())
            .map(|i| Basis::from_colex_rank(&ground, i).map(|b| sign(b.elements())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_signs(ground, signs)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn basis_sign(&self, basis: &Basis) -> i8 {
        self.signs[basis.colex_rank()]
    }

    /// `χ` on an ordered tuple: stored sign times the sorting parity.
    pub fn chi_of(&self, tuple: &[Element]) -> Result<i8> {
        let (sorted, parity) = sort_with_parity(&self.ground, tuple)?;
        if parity == 0 {
            return Ok(0);
        }
        Ok(parity * self.signs[colex_rank(&sorted)])
    }

    /// Unchecked evaluation for tuples already known to be in range.
    pub(crate) fn chi(&self, tuple: &[Element]) -> i8 {
        debug_assert_eq!(tuple.len(), self.ground.rank());
        let mut buf = [0u8; MAX_ELEMENTS];
        let buf = &mut buf[..tuple.len()];
        buf.copy_from_slice(tuple);
        let parity = sort_in_place(buf);
        if parity == 0 {
            0
        } else {
            parity * self.signs[colex_rank(buf)]
        }
    }

    /// Evaluates `χ(prefix, tail...)` without allocating.
    pub(crate) fn chi_cat(&self, prefix: &[Element], tail: &[Element]) -> i8 {
        let mut buf = [0u8; MAX_ELEMENTS];
        let k = prefix.len();
        buf[..k].copy_from_slice(prefix);
        buf[k..k + tail.len()].copy_from_slice(tail);
        self.chi(&buf[..k + tail.len()])
    }

    /// Every three-term Grassmann–Plücker violation.
    ///
    /// For each `(r-2)`-set `σ` and each `x1<x2<x3<x4` outside it, the
    /// products `χ(σ,x1,x2)χ(σ,x3,x4)`, `-χ(σ,x1,x3)χ(σ,x2,x4)` and
    /// `χ(σ,x1,x4)χ(σ,x2,x3)` must take both signs.
    pub fn check_gp3(&self) -> Vec<Gp3Violation> {
        let mut out = Vec::new();
        self.scan_gp3(|v| {
            out.push(v);
            true
        });
        out
    }

    /// `true` iff [`Chirotope::check_gp3`] would return an empty list.
    pub fn is_chirotope(&self) -> bool {
        let mut ok = true;
        self.scan_gp3(|_| {
            ok = false;
            false
        });
        ok
    }

    fn scan_gp3(&self, mut report: impl FnMut(Gp3Violation) -> bool) {
        let r = self.ground.rank();
        let all: Vec<Element> = self.ground.elements().collect();
        for sigma in all.iter().copied().combinations(r - 2) {
            let rest: Vec<Element> = all.iter().copied().filter(|e| !sigma.contains(e)).collect();
            for quad in rest.iter().copied().combinations(4) {
                let [x1, x2, x3, x4] = [quad[0], quad[1], quad[2], quad[3]];
                let products = [
                    self.chi_cat(&sigma, &[x1, x2]) * self.chi_cat(&sigma, &[x3, x4]),
                    -self.chi_cat(&sigma, &[x1, x3]) * self.chi_cat(&sigma, &[x2, x4]),
                    self.chi_cat(&sigma, &[x1, x4]) * self.chi_cat(&sigma, &[x2, x3]),
                ];
                if products[0] == products[1] && products[1] == products[2] {
                    let keep_going = report(Gp3Violation {
                        sigma: sigma.clone(),
                        quadruple: [x1, x2, x3, x4],
                        products,
                    });
                    if !keep_going {
                        return;
                    }
                }
            }
        }
    }

    /// The signed circuit supported on `support` (`r + 1` elements), scaled
    /// to be positive on `positive_on`.
    ///
    /// On the sorted support `s_1 < … < s_{r+1}`, `C(s_i)` is proportional to
    /// `(-1)^i χ(S \ s_i)`.
    pub fn circuit_on_support(&self, support: &[Element], positive_on: Element) -> Result<SignVector> {
        let r = self.ground.rank();
        let sorted = self.distinct_sorted(support, r + 1)?;
        let pos = sorted
            .iter()
            .position(|&e| e == positive_on)
            .ok_or_else(|| OmError::Domain(format!("{positive_on} is not in the support {sorted:?}")))?;
        let mut raw = vec![0i8; sorted.len()];
        let mut rest = Vec::with_capacity(r);
        for i in 0..sorted.len() {
            rest.clear();
            rest.extend(sorted.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e));
            let alt = if i % 2 == 0 { -1 } else { 1 };
            raw[i] = alt * self.signs[colex_rank(&rest)];
        }
        let scale = raw[pos];
        let mut entries = vec![0i8; self.ground.size()];
        for (e, s) in sorted.iter().zip(raw) {
            entries[*e as usize - 1] = s * scale;
        }
        Ok(SignVector { entries })
    }

    /// The signed cocircuit vanishing exactly on `zero_set` (`r - 1`
    /// elements), scaled to be positive on `positive_on`.
    ///
    /// `D(e)` is proportional to `χ(e, z_1, …, z_{r-1})`.
    pub fn cocircuit_on_zeroset(&self, zero_set: &[Element], positive_on: Element) -> Result<SignVector> {
        let r = self.ground.rank();
        let sorted = self.distinct_sorted(zero_set, r - 1)?;
        self.ground.check_element(positive_on)?;
        if sorted.contains(&positive_on) {
            return Err(OmError::Domain(format!("{positive_on} lies in the zero set {sorted:?}")));
        }
        let scale = self.chi_cat(&[positive_on], &sorted);
        let entries = self
            .ground
            .elements()
            .map(|e| if sorted.contains(&e) { 0 } else { scale * self.chi_cat(&[e], &sorted) })
            .collect();
        Ok(SignVector { entries })
    }

    fn distinct_sorted(&self, set: &[Element], len: usize) -> Result<Vec<Element>> {
        if set.len() != len {
            return Err(OmError::MalformedTuple(format!("{set:?} should have {len} elements")));
        }
        for &e in set {
            self.ground.check_element(e)?;
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(OmError::MalformedTuple(format!("{set:?} repeats an element")));
        }
        Ok(sorted)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gp3Violation {
    pub sigma: Vec<Element>,
    pub quadruple: [Element; 4],
    pub products: [i8; 3],
}

/// Total map from ground set elements to `{-1, 0, +1}`; entry `i` is element `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignVector {
    entries: Vec<i8>,
}

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn get(&self, e: Element) -> i8 {
        self.entries[e as usize - 1]
    }

    pub fn support(&self) -> Vec<Element> {
        self.select(|s| s != 0)
    }

    pub fn zero_set(&self) -> Vec<Element> {
        self.select(|s| s == 0)
    }

    pub fn negated(&self) -> Self {
        Self { entries: self.entries.iter().map(|s| -s).collect() }
    }

    fn select(&self, keep: impl Fn(i8) -> bool) -> Vec<Element> {
        self.entries
            .iter()
            .enumerate()
            .filter(|&(_, &s)| keep(s))
            .map(|(i, _)| (i + 1) as Element)
            .collect()
    }
}

impl std::fmt::Display for SignVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            f.write_str(match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Determinant-sign chirotope of the rank-2 columns (1,0), (0,1), (1,1).
    fn three_columns() -> Chirotope {
        let cols = [(1i64, 0i64), (0, 1), (1, 1)];
        let g = GroundSet::raw(2, 3).unwrap();
        Chirotope::from_fn(g, |b| {
            let (a, c) = (cols[b[0] as usize - 1], cols[b[1] as usize - 1]);
            (a.0 * c.1 - a.1 * c.0).signum() as i8
        })
        .unwrap()
    }

    #[test]
    fn chi_of_examples() {
        let g = GroundSet::new(5, 10).unwrap();
        let chi = Chirotope::from_signs(g, vec![1; 924]).unwrap();
        assert_eq!(chi.chi_of(&[2, 1, 3, 4, 5, 6]).unwrap(), -1);
        assert_eq!(chi.chi_of(&[3, 3, 1, 2, 4, 5]).unwrap(), 0);
        assert!(chi.chi_of(&[1, 2, 3]).is_err());
        assert_eq!(three_columns().chi_of(&[2, 3]).unwrap(), -1);
    }

    #[test]
    fn rejects_zero_or_short_signs() {
        let g = GroundSet::raw(2, 3).unwrap();
        assert!(Chirotope::from_signs(g, vec![1, 0, 1]).is_err());
        assert!(Chirotope::from_signs(g, vec![1, 1]).is_err());
    }

    #[test]
    fn rank_two_circuit_and_cocircuit() {
        let chi = three_columns();
        assert_eq!(chi.circuit_on_support(&[1, 2, 3], 1).unwrap().entries(), &[1, 1, -1]);
        assert_eq!(chi.circuit_on_support(&[1, 2, 3], 3).unwrap().entries(), &[-1, -1, 1]);
        assert_eq!(chi.cocircuit_on_zeroset(&[1], 2).unwrap().entries(), &[0, 1, 1]);
        assert!(chi.check_gp3().is_empty());
        assert!(chi.circuit_on_support(&[1, 2, 3], 4).is_err());
        assert!(chi.cocircuit_on_zeroset(&[1], 1).is_err());
    }

    #[test]
    fn negation_symmetry() {
        let g = GroundSet::new(2, 4).unwrap();
        let pts = [(0i64, 0i64), (3, 1), (1, 4), (-2, 5), (5, -3), (7, 3)];
        let chi = Chirotope::from_fn(g, |b| {
            let p = |e: u8| pts[e as usize - 1];
            let (a, c, d) = (p(b[0]), p(b[1]), p(b[2]));
            ((c.0 - a.0) * (d.1 - a.1) - (c.1 - a.1) * (d.0 - a.0)).signum() as i8
        })
        .unwrap();
        let c = chi.circuit_on_support(&[1, 2, 3, 5], 1).unwrap();
        for e in [2, 3, 5] {
            let other = chi.circuit_on_support(&[1, 2, 3, 5], e).unwrap();
            assert!(other == c || other == c.negated());
            assert_eq!(other == c, c.get(e) == 1);
        }
        let d = chi.cocircuit_on_zeroset(&[2, 4], 1).unwrap();
        assert_eq!(d.zero_set(), vec![2, 4]);
        for e in [3, 5, 6] {
            let other = chi.cocircuit_on_zeroset(&[2, 4], e).unwrap();
            assert_eq!(other == d, d.get(e) == 1);
            assert_eq!(other == d.negated(), d.get(e) == -1);
        }
    }

    /// Determinants of points on the moment curve `(1, t, t²)` are
    /// Vandermonde and positive on sorted triples: the all-positive map is the
    /// alternating oriented matroid, so it satisfies every relation.
    #[test]
    fn all_positive_rank_three_is_alternating() {
        let g = GroundSet::raw(3, 6).unwrap();
        let vandermonde = Chirotope::from_fn(g, |b| {
            let t: Vec<i64> = b.iter().map(|&e| e as i64).collect();
            ((t[1] - t[0]) * (t[2] - t[0]) * (t[2] - t[1])).signum() as i8
        })
        .unwrap();
        let all_plus = Chirotope::from_signs(g, vec![1; 20]).unwrap();
        assert_eq!(vandermonde, all_plus);
        assert!(all_plus.check_gp3().is_empty());
        assert!(all_plus.is_chirotope());
    }

    #[test]
    fn single_flip_of_non_simplicial_basis_violates() {
        let g = GroundSet::raw(3, 6).unwrap();
        let mut signs = vec![1i8; 20];
        signs[Basis::new(&g, vec![1, 3, 5]).unwrap().colex_rank()] = -1;
        let chi = Chirotope::from_signs(g, signs).unwrap();
        let violations = chi.check_gp3();
        assert!(!violations.is_empty());
        assert!(!chi.is_chirotope());
        for v in &violations {
            assert!(v.products.iter().all(|&p| p == v.products[0]));
        }
        // sigma = {1}, quadruple {2,3,4,5}: +1·+1, -(+1)(-1), +1·+1 all equal
        assert!(violations.iter().any(|v| v.sigma == vec![1] && v.quadruple == [2, 3, 4, 5]));
    }
}
