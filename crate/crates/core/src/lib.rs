//! Operads from quadratic presentations, their bar, Koszul and simplicial bar
//! complexes, and the homology of the partition poset, all over exact rings.

pub mod bar_koszul;
pub mod combinatorics;
pub mod error;
pub mod exact_linalg;
pub mod sigma_operads;
pub mod simplicial_partition;
pub mod trees;

pub use error::{OpkError, Result};
