//! The C-type operator `T_{v,w,φ,b}`: forward action, closed-form inverse,
//! period-reduced powers and a dense elimination oracle.
//!
//! On `e_k` with `k` in block `n = [b_n, b_{n+1})`:
//!
//! ```text
//! T e_k = w_{k+1} e_{k+1}                      b_n <= k < b_{n+1} - 1
//! T e_k = v_n e_{b_φ(n)} - W_n⁻¹ e_{b_n}       k = b_{n+1} - 1, n >= 1
//! T e_k = -W_0⁻¹ e_0                           k = b_1 - 1
//! ```
//!
//! Every finitely supported vector is periodic: `T^{2(b_{n+1}-b_n)} e_k = e_k`
//! for `k` in block `n`, which [`CTypeOperator::apply_power`] exploits.

mod blocks;
mod ctype;
mod oracle;

pub use blocks::{BlockStructure, PhiChain};
pub use ctype::{CTypeOperator, CTypeParams};
pub use oracle::{forward_matrix, truncated_matrix_oracle, DenseInverse};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("block {n}: size {size} is not a multiple of {required} = 2(b_(φ(n)+1) - b_φ(n))")]
    Divisibility {
        n: usize,
        size: usize,
        required: usize,
    },
    #[error("φ({n}) = {phi} violates φ(0) = 0 and φ(n) < n")]
    Phi { n: usize, phi: usize },
    #[error("weight w_{k} is zero")]
    ZeroWeight { k: usize },
    #[error("weight w_{k} is not a signed power of two")]
    WeightNotPow2 { k: usize },
    #[error("v_{n} is zero")]
    ZeroV { n: usize },
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("index {index} outside the materialized range [0, {limit})")]
    Range { index: usize, limit: usize },
    #[error("oracle error: {0}")]
    Oracle(String),
}
