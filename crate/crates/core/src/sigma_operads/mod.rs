//! Σ*-modules, free operads, quadratic presentations, their quotients and
//! quadratic duals.

mod dual;
mod free;
mod operad;
mod presentation;
mod symseq;

pub use dual::quadratic_dual;
pub use free::{graft, FreeBasisElem, FreeComponent, FreeOperad};
pub use operad::{free_operad, quadratic_quotient, CompositionTable, OperadStructure};
pub use presentation::{parse_presentation, GeneratorDecl, QuadraticPresentation, Relation, Symmetry};
pub use symseq::{
    character, compose_modules, dual_module, tensor_modules, tensor_symmetry, CompositeBasis, CompositeElem, SymSequence,
};

pub(crate) use symseq::mixed_radix;

use crate::error::{OpkError, Result};

/// Names of the shipped presentations.
pub const PRESETS: [&str; 3] = ["com", "assoc", "lie"];

/// Source text of a shipped presentation.
pub fn preset_source(name: &str) -> Result<&'static str> {
    match name {
        "com" => Ok(include_str!("../../presets/com.opd")),
        "assoc" => Ok(include_str!("../../presets/assoc.opd")),
        "lie" => Ok(include_str!("../../presets/lie.opd")),
        other => Err(OpkError::arg(format!("unknown preset '{other}' (expected com, assoc or lie)"))),
    }
}

pub fn preset(name: &str) -> Result<QuadraticPresentation> {
    parse_presentation(preset_source(name)?)
}
