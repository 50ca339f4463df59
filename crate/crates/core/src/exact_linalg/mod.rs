//! Exact arithmetic over ℤ, ℚ and F_p, sparse matrices, Smith normal form
//! and homology of chain complexes of free modules.

mod echelon;
mod elimination;
mod homology;
mod matrix;
mod quotient;
mod ring;
mod smith;
pub mod sparse;

pub use echelon::{kernel_basis, ColumnEchelon};
pub use elimination::rank;
pub use homology::{dualize_complex, homology, ChainComplexData, HomologySummary};
pub use matrix::ExactMatrix;
pub use quotient::{QuotientModule, TorsionFound};
pub use ring::{CoefficientRing, Scalar};
pub use smith::{smith_normal_form, IntMatrix, SmithForm};
pub use sparse::SparseVec;

pub(crate) use ring::gcd;
