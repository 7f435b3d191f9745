//! Oriented-matroid semantics: chirotopes, circuits, cocircuits and the
//! program digraph. These are the ground truth the encoder is tested against.

mod chirotope;
mod ground;
mod program;

pub use chirotope::{Chirotope, Gp3Violation, SignVector};
pub(crate) use ground::colex_rank;
pub use ground::{binomial, sort_with_parity, Basis, Element, GroundSet, MAX_ELEMENTS};
pub use program::{is_bounded, program_digraph, program_vertices, vertex_outmap, FacetSet, OmpDigraph};
