//! Automorphism search on digraphs by individualization and refinement.

mod canon;
mod orbits;
mod partition;
mod stabilizer;

pub use canon::{are_isomorphic, canonical_form, CanonicalForm};
pub use stabilizer::{cycle_notation, vertex_stabilizer, SearchLimits, Stabilizer};
