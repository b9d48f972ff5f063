//! Exact dyadic scalars, finitely supported vectors and `l^p` norms.
//!
//! Every coefficient the operators produce is of the form `m * 2^e`, so all
//! arithmetic here is exact. Norms for `p ∈ {1, 2, ∞}` are evaluated exactly
//! (as power sums for `p ∈ {1, 2}`); other exponents carry an `f64`
//! approximation with relative error at most [`APPROX_REL_ERROR`].

mod dyadic;
mod norm;
mod sparse;

pub use dyadic::Dyadic;
pub use norm::{
    cmp_norm, lp_norm, power_sum, sup_norm, NormExponent, NormOrdering, NormValue,
    APPROX_REL_ERROR,
};
pub(crate) use norm::root_f64;
pub use sparse::SparseVec;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("invalid dyadic literal {0:?} (expected m@e or a decimal)")]
    Literal(String),
    #[error("decimal {0:?} is not exactly representable as a dyadic rational")]
    NotDyadic(String),
    #[error("norm exponent must be at least 1, got {0}")]
    NormExponent(f64),
    #[error("vector format: {0}")]
    VectorFormat(String),
}
