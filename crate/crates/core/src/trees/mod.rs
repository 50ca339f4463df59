//! Abstract trees with canonical forms, reduced trees, trees with levels,
//! composite trees and their levelizations.

mod level;
mod reduced;
mod tree;

pub use level::{
    enumerate_levelizations, linear_extensions, CanonicalLevelTree, CompositeTree, LevelTree, Levelize, Tag,
};
pub use reduced::{enumerate_reduced_trees, lex_cmp, reduced_trees, Child, ReducedTree};
pub use tree::{AbstractTree, CanonicalForm, Edge, Slot};
