//! Finite categories with variances, functors of variance, heuristic
//! naturality and ends.

#![allow(clippy::needless_range_loop)]

pub mod comma;
pub mod ends;
pub mod error;
pub mod fincat;
pub mod fixtures;
pub mod mixfun;
pub mod natural;
pub mod par;
pub mod target;
pub mod variance;

pub use error::{Error, Result};
pub use fincat::{FinCategory, Mor, Obj, PlainFunctor, Subgraph};
pub use target::{Codomain, FinSet, Function};

/// Upper bound on the number of morphisms (or elements) any single
/// materializing operation may produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cap(pub usize);

impl Default for Cap {
    fn default() -> Cap {
        Cap(1_000_000)
    }
}
