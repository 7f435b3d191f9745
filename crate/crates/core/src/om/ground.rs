//! Ground set `[n] ∪ {f, g}`, sorted bases and their colexicographic ranks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{OmError, Result};

/// Element of the ground set, numbered from 1.
pub type Element = u8;

/// Largest supported ground set. Facet sets are stored as `u32` bitmasks.
pub const MAX_ELEMENTS: usize = 32;

const fn binomial_table() -> [[u64; MAX_ELEMENTS + 2]; MAX_ELEMENTS + 2] {
    let mut t = [[0u64; MAX_ELEMENTS + 2]; MAX_ELEMENTS + 2];
    let mut n = 0;
    while n < MAX_ELEMENTS + 2 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOM: [[u64; MAX_ELEMENTS + 2]; MAX_ELEMENTS + 2] = binomial_table();

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        BINOM[n][k]
    }
}

/// Ground set of an oriented matroid program of dimension `d` with `n` facets.
///
/// Elements `1..=n` are the facets, `n + 1` is the objective element `f` and
/// `n + 2` is the element `g` at infinity. The rank is `d + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    d: usize,
    n: usize,
}

impl GroundSet {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 || d >= n {
            return Err(OmError::InvalidGround(format!("need 0 < d < n, got d={d}, n={n}")));
        }
        if n + 2 > MAX_ELEMENTS {
            return Err(OmError::InvalidGround(format!(
                "at most {} facets are supported, got {n}",
                MAX_ELEMENTS - 2
            )));
        }
        Ok(Self { d, n })
    }

    /// A bare rank-`rank` oriented matroid on `size` elements, without the
    /// program interpretation. Used for small test configurations where
    /// `size < rank + 2` would not describe a program.
    pub fn raw(rank: usize, size: usize) -> Result<Self> {
        if rank < 2 || size < rank || size > MAX_ELEMENTS {
            return Err(OmError::InvalidGround(format!("bad rank {rank} on {size} elements")));
        }
        Ok(Self { d: rank - 1, n: size - 2 })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn facets(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.d + 1
    }

    pub fn size(&self) -> usize {
        self.n + 2
    }

    pub fn f(&self) -> Element {
        (self.n + 1) as Element
    }

    pub fn g(&self) -> Element {
        (self.n + 2) as Element
    }

    /// Number of bases, `C(n + 2, d + 1)`.
    pub fn basis_count(&self) -> usize {
        binomial(self.size(), self.rank()) as usize
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        1..=(self.size() as Element)
    }

    pub fn contains(&self, e: Element) -> bool {
        e >= 1 && (e as usize) <= self.size()
    }

    pub(crate) fn check_element(&self, e: Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(OmError::MalformedTuple(format!("element {e} outside 1..={}", self.size())))
        }
    }
}

/// Strictly increasing `r`-tuple of ground set elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Basis(Vec<Element>);

impl Basis {
    pub fn new(ground: &GroundSet, elements: Vec<Element>) -> Result<Self> {
        if elements.len() != ground.rank() {
            return Err(OmError::MalformedTuple(format!(
                "basis {elements:?} has {} elements, rank is {}",
                elements.len(),
                ground.rank()
            )));
        }
        for &e in &elements {
            ground.check_element(e)?;
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(OmError::MalformedTuple(format!("basis {elements:?} is not strictly increasing")));
        }
        Ok(Self(elements))
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    /// Zero-based colexicographic rank.
    pub fn colex_rank(&self) -> usize {
        colex_rank(&self.0)
    }

    /// Inverse of [`Basis::colex_rank`].
    pub fn from_colex_rank(ground: &GroundSet, rank: usize) -> Result<Self> {
        if rank >= ground.basis_count() {
            return Err(OmError::MalformedTuple(format!(
                "colex rank {rank} out of range for {} bases",
                ground.basis_count()
            )));
        }
        let mut rest = rank as u64;
        let mut out = vec![0; ground.rank()];
        let mut top = ground.size();
        for i in (1..=ground.rank()).rev() {
            // largest c with C(c, i) <= rest
            let mut c = top - 1;
            while binomial(c, i) > rest {
                c -= 1;
            }
            rest -= binomial(c, i);
            out[i - 1] = (c + 1) as Element;
            top = c;
        }
        Ok(Self(out))
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Colex rank of a strictly increasing slice of 1-based elements.
pub(crate) fn colex_rank(sorted: &[Element]) -> usize {
    sorted
        .iter()
        .enumerate()
        .map(|(i, &e)| binomial(e as usize - 1, i + 1))
        .sum::<u64>() as usize
}

/// Sorts `tuple` and returns the sign of the sorting permutation.
///
/// The parity is `0` exactly when the tuple repeats an element; the sorted
/// vector is still returned in that case.
pub fn sort_with_parity(ground: &GroundSet, tuple: &[Element]) -> Result<(Vec<Element>, i8)> {
    if tuple.len() != ground.rank() {
        return Err(OmError::MalformedTuple(format!(
            "tuple {tuple:?} has length {}, rank is {}",
            tuple.len(),
            ground.rank()
        )));
    }
    for &e in tuple {
        ground.check_element(e)?;
    }
    let mut sorted = tuple.to_vec();
    let parity = sort_in_place(&mut sorted);
    Ok((sorted, parity))
}

/// Insertion sort returning the permutation sign, or 0 on a repeated element.
pub(crate) fn sort_in_place(buf: &mut [Element]) -> i8 {
    let mut swaps = 0usize;
    for i in 1..buf.len() {
        let mut j = i;
        while j > 0 && buf[j - 1] > buf[j] {
            buf.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if buf.windows(2).any(|w| w[0] == w[1]) {
        0
    } else if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}
