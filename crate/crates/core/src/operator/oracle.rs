//! Dense exact inverse of a truncated operator, used as an independent check
//! of the closed-form inverse.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::scalar::{Dyadic, SparseVec};

use super::{CTypeOperator, Direction, OperatorError};

/// The inverse of `T` restricted to `span{e_0, …, e_{b_N - 1}}`, by columns.
#[derive(Clone, Debug)]
pub struct DenseInverse {
    pub dim: usize,
    pub columns: Vec<SparseVec>,
}

impl DenseInverse {
    pub fn apply(&self, x: &SparseVec) -> Result<SparseVec, OperatorError> {
        let mut out = SparseVec::new();
        for (k, c) in x.iter() {
            let col = self.columns.get(k).ok_or(OperatorError::Range {
                index: k,
                limit: self.dim,
            })?;
            out.add_scaled(c, col);
        }
        Ok(out)
    }
}

/// Columns `T e_k` for `k < b_N`.
pub fn forward_matrix(op: &CTypeOperator, blocks: usize) -> Result<Vec<SparseVec>, OperatorError> {
    let dim = truncation_dim(op, blocks)?;
    (0..dim)
        .map(|k| op.apply(&SparseVec::unit(k), Direction::Forward))
        .collect()
}

fn truncation_dim(op: &CTypeOperator, blocks: usize) -> Result<usize, OperatorError> {
    if blocks == 0 || blocks > op.n_max() + 1 {
        return Err(OperatorError::Oracle(format!(
            "block count {blocks} outside 1..={}",
            op.n_max() + 1
        )));
    }
    Ok(op.blocks().boundary(blocks))
}

/// Inverts the forward matrix on the first `blocks` blocks by fraction-free
/// Gauss–Jordan elimination over the integers, after clearing the common
/// power-of-two denominator.
pub fn truncated_matrix_oracle(
    op: &CTypeOperator,
    blocks: usize,
) -> Result<DenseInverse, OperatorError> {
    let dim = truncation_dim(op, blocks)?;
    let columns = forward_matrix(op, blocks)?;

    let min_exp = columns
        .iter()
        .flat_map(|c| c.iter().map(|(_, d)| d.exponent()))
        .min()
        .unwrap_or(0);

    // Augmented [A | I] with A = 2^{-min_exp} M, row-major.
    let width = 2 * dim;
    let mut a = vec![vec![BigInt::zero(); width]; dim];
    for (j, col) in columns.iter().enumerate() {
        for (i, d) in col.iter() {
            if i >= dim {
                return Err(OperatorError::Oracle(format!(
                    "column {j} leaves the truncation at index {i}"
                )));
            }
            a[i][j] = d.mantissa() << ((d.exponent() - min_exp) as u64);
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[dim + i] = BigInt::from(1);
    }

    let mut prev = BigInt::from(1);
    for k in 0..dim {
        let pivot = (k..dim)
            .find(|&r| !a[r][k].is_zero())
            .ok_or_else(|| OperatorError::Oracle(format!("singular truncation at column {k}")))?;
        a.swap(k, pivot);
        let pivot_row = a[k].clone();
        let pkk = pivot_row[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let lead = row[k].clone();
            if lead.is_zero() && pkk == prev {
                continue;
            }
            for j in 0..width {
                if j == k {
                    continue;
                }
                let num = &pkk * &row[j] - &lead * &pivot_row[j];
                if num.is_zero() {
                    if !row[j].is_zero() {
                        row[j] = BigInt::zero();
                    }
                    continue;
                }
                let (q, r) = num.div_rem(&prev);
                if !r.is_zero() {
                    return Err(OperatorError::Oracle(format!(
                        "inexact fraction-free division at ({i}, {j})"
                    )));
                }
                row[j] = q;
            }
            row[k] = BigInt::zero();
        }
        prev = pkk;
    }

    // Every diagonal entry now equals the determinant d of A; A⁻¹ = adj / d.
    let det = a[0][0].clone();
    let tz = det.trailing_zeros().expect("nonzero determinant");
    let odd = &det >> tz;
    let mut out = vec![SparseVec::new(); dim];
    for (i, row) in a.iter().enumerate() {
        if row[i] != det {
            return Err(OperatorError::Oracle(format!(
                "diagonal entry {i} differs from the determinant"
            )));
        }
        for j in 0..dim {
            let entry = &row[dim + j];
            if entry.is_zero() {
                continue;
            }
            let (q, r) = entry.div_rem(&odd);
            if !r.is_zero() {
                return Err(OperatorError::Oracle(format!(
                    "inverse entry ({i}, {j}) is not dyadic"
                )));
            }
            // M⁻¹ = 2^{-min_exp} A⁻¹ = 2^{-min_exp} q / 2^{tz}
            let value = Dyadic::new(q, -(tz as i64) - min_exp);
            out[j].set(i, value);
        }
    }
    Ok(DenseInverse { dim, columns: out })
}
