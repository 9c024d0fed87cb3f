//! Gauge-invariant ideals, primitive ideal spaces and simplicity tests for
//! graph C*-algebras of arbitrary countable directed graphs, plus finite
//! models of partial group actions.

pub mod bitset;
pub mod classify;
pub mod conditions;
pub mod corpus;
pub mod error;
pub mod format;
pub mod graph;
pub mod lattice;
pub mod limits;
pub mod paction;
pub mod poset;
pub mod random;
pub mod spectrum;

pub use bitset::{BitSet, VertexSet};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeSpec, Graph, Multiplicity, Path};
pub use limits::EnumLimit;
