use thiserror::Error;

use crate::fincat::{Mor, Obj};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} index {index} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("category axioms violated: {0}")]
    InvalidCategory(String),
    #[error("{what} would have {count} elements, exceeding the cap of {cap}")]
    SizeCap {
        what: &'static str,
        count: u128,
        cap: usize,
    },
    #[error("subcategory {which} is not wide: missing identity on object {object}")]
    NotWide { which: &'static str, object: Obj },
    #[error("subcategory {which} is not closed under composition: {g} . {f} escapes")]
    NotClosed { which: &'static str, g: Mor, f: Mor },
    #[error("not a strict factorization system: {0} morphism(s) without a unique factorization")]
    NotFactorizationSystem(usize),
    #[error("not a variance: {0}")]
    NotVariance(String),
    #[error("object set splits a path component at object {0}")]
    SplitsComponent(Obj),
    #[error("subcategory is not closed under factoring: a factor of morphism {0} escapes")]
    NotFactoringClosed(Mor),
    #[error("functor is invalid: {0}")]
    InvalidFunctor(String),
    #[error("functors disagree on object {0}")]
    ObjectMismatch(Obj),
    #[error("pair is not compatible at morphism {0}")]
    Incompatible(Mor),
    #[error("image of contravariant morphism {0} is not invertible")]
    NotInvertible(Mor),
    #[error("component at object {0} has the wrong type")]
    ComponentType(Obj),
    #[error("subgraph does not generate the category")]
    NotGenerating,
    #[error("family is not natural at morphism {0}")]
    NotNatural(Mor),
    #[error("functor is not a section of the forgetful functor at {0}")]
    NotSection(String),
    #[error("functor is not faithful: morphisms {0} and {1} have the same image")]
    NotFaithful(Mor, Mor),
    #[error("partition incompatible: positions {0} and {1} carry different categories")]
    PartitionMismatch(usize, usize),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("expected {expected}, found {found}")]
    Shape { expected: String, found: String },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("lifting precondition failed: {0}")]
    Lift(String),
}

pub type Result<T> = std::result::Result<T, Error>;
