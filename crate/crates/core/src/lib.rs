//! Core library of `flpcheck`: a small functional-logic language with
//! call-time choice, an evaluator for values and partial values, static
//! analyses, an equivalence checker and a semantic-versioning diff.

pub mod lang;
pub mod partial;
pub mod eval;
pub mod analysis;
pub mod equiv;
pub mod semver;
