//! Chamber combinatorics of the hypersimplex: the values `ε_I(r)`, short and
//! long sets, chamber signatures, facet walls and segment walking.

mod graph;
mod lp;
mod sets;
mod signature;
mod walk;

pub use graph::{
    enumerate_chambers, ChamberEdge, ChamberGraph, ChamberNode, MAX_ENUMERATION_SIDES,
};
pub(crate) use sets::require_generic;
pub use sets::{
    epsilon, first_vanishing, is_empty, is_generic, long_sets, IndexSet, LengthVector, MAX_SIDES,
};
pub use signature::{is_external, signature, ChamberSignature};
pub use walk::{
    adjacent_representative, chamber_representative, cross_facet, external_anchor,
    segment_crossings, segment_crossings_perturbed, AdjacentStep, Crossing, Wall,
};
