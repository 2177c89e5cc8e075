//! Exact invariants of negative-definite plumbed 3-manifolds: intersection
//! lattices, Brieskorn star graphs, graded roots and d-invariants, the
//! Legendrian-surgery tau formula, and the F2 cobordism-class obstruction
//! for Mazur manifolds.

pub mod error;
pub mod format;
pub mod lattice;
pub mod merge_tree;
pub mod obstruction;
pub mod oracle;
pub mod root;
pub mod seifert;
pub mod tau;
mod union_find;

pub use error::{Error, Result};
pub use num_rational::BigRational;
