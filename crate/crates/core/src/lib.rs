//! Certifies monotone-diameter statements about oriented matroid programs by
//! compiling chirotope axioms and path constraints to CNF and solving it.

pub mod error;
pub mod analysis;
pub mod campaign;
pub mod encoder;
pub mod om;
pub mod paths;
pub mod solver;

pub use error::{OmError, Result};
