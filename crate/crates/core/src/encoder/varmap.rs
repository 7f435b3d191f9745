use serde::{Deserialize, Serialize};

use super::cnf::Literal;
use crate::error::{OmError, Result};
use crate::om::{sort_with_parity, Basis, Element, GroundSet};

/// Bijection between sorted bases and variables `1..=C(m, r)` by colex rank.
/// Auxiliary variables are allocated above the basis range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarMap {
    ground: GroundSet,
    next_aux: u32,
}

impl VarMap {
    pub fn new(ground: GroundSet) -> Self {
        let next_aux = ground.basis_count() as u32 + 1;
        Self { ground, next_aux }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn basis_count(&self) -> u32 {
        self.ground.basis_count() as u32
    }

    /// Total number of variables allocated so far (bases plus auxiliaries).
    pub fn variable_count(&self) -> u32 {
        self.next_aux - 1
    }

    pub fn is_basis_var(&self, var: u32) -> bool {
        var >= 1 && var <= self.basis_count()
    }

    pub fn var_index(&self, basis: &Basis) -> u32 {
        basis.colex_rank() as u32 + 1
    }

    pub fn basis_of(&self, var: u32) -> Result<Basis> {
        if !self.is_basis_var(var) {
            return Err(OmError::Domain(format!("variable {var} is not a basis variable")));
        }
        Basis::from_colex_rank(&self.ground, var as usize - 1)
    }

    /// Literal asserting `χ(tuple) = desired_sign`.
    pub fn literal_for(&self, tuple: &[Element], desired_sign: i8) -> Result<Literal> {
        if desired_sign != 1 && desired_sign != -1 {
            return Err(OmError::Domain(format!("sign must be ±1, got {desired_sign}")));
        }
        let (sorted, parity) = sort_with_parity(&self.ground, tuple)?;
        if parity == 0 {
            return Err(OmError::DegenerateTuple(tuple.to_vec()));
        }
        let var = crate::om::colex_rank(&sorted) as u32 + 1;
        Ok(Literal::new(var, desired_sign * parity > 0))
    }

    pub fn fresh_aux(&mut self) -> u32 {
        let v = self.next_aux;
        self.next_aux += 1;
        v
    }
}
