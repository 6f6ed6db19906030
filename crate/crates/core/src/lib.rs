//! Recursive session types and their duals.
//!
//! The crate implements the competing definitions of duality for recursive
//! session types side by side, together with decision procedures that check
//! them against the regular-tree reading of `rec` types:
//!
//! - [`syntax`]: types with positive and negative recursion variables,
//!   substitution, α-equivalence, contractivity, normal forms, size.
//! - [`text`]: the concrete syntax (`rec X.!X.X`, `?int.end`, `~X`).
//! - [`semantics`]: regular trees as finite state spaces, tree equality and
//!   tree duality with counterexample paths.
//! - [`check`]: the coinductive syntactic relations (equivalence and
//!   duality) decided directly on `rec` terms.
//! - [`duality`]: naive duality, message closure, duality with on-the-fly
//!   closure, and the negative-variable based duals.
//! - [`generate`]: seeded random types and shrinking for differential tests.
//! - [`cli`] and [`selftest`]: the `sessdual` command-line surface.

pub mod check;
pub mod cli;
pub mod duality;
pub mod generate;
mod search;
pub mod selftest;
pub mod semantics;
pub mod syntax;
pub mod text;

pub use syntax::{Name, Polarity, TypeExpr, VarOcc};
pub use text::{parse, print};
