//! Counting bound for the block-local orbit: with runs of unit weights on
//! `(k0, k1)` and `(k2, Δ)` and a unit product after `k0`,
//!
//! ```text
//! #{0 <= j <= J : ‖P_l T^j P_l x‖ >= ‖P_l X‖/2} / (J+1)
//!     >= 1 - 4(k2 - k1 + k0)(1/(J+1) + 1/Δ)
//! ```

use serde::Serialize;

use crate::operator::CTypeOperator;
use crate::scalar::{Dyadic, SparseVec};

use super::local::BlockLocal;
use super::{x_transform, AnalysisError, ExactP};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop43Result {
    pub l: usize,
    pub horizon: u64,
    pub count: u64,
    pub lhs_ratio: f64,
    pub rhs_bound: f64,
    pub holds: bool,
}

fn check_hypotheses(
    op: &CTypeOperator,
    l: usize,
    k0: usize,
    k1: usize,
    k2: usize,
) -> Result<(), AnalysisError> {
    let b = op.blocks();
    let size = b.size(l);
    if !(k0 < k1 && k1 < k2 && k2 <= size) {
        return Err(AnalysisError::Hypothesis {
            name: "0 ≤ k0 < k1 < k2 ≤ b_(l+1) − b_l".into(),
            witness: format!("k0 = {k0}, k1 = {k1}, k2 = {k2}, size = {size}"),
        });
    }
    let start = b.start(l);
    for k in (k0 + 1..k1).chain(k2 + 1..size) {
        if op.w(start + k).abs() != Dyadic::one() {
            return Err(AnalysisError::Hypothesis {
                name: "|w_(b_l+k)| = 1 on (k0, k1) ∪ (k2, b_(l+1) − b_l)".into(),
                witness: format!("k = {k}, w = {}", op.w(start + k)),
            });
        }
    }
    let prod: Dyadic = (start + k0 + 1..b.end(l)).map(|s| op.w(s).abs()).product();
    if prod != Dyadic::one() {
        return Err(AnalysisError::Hypothesis {
            name: "Π_(s=b_l+k0+1)^(b_(l+1)−1) |w_s| = 1".into(),
            witness: format!("product = {prod}"),
        });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn prop43_ratio(
    op: &CTypeOperator,
    x: &SparseVec,
    l: usize,
    horizon: u64,
    k0: usize,
    k1: usize,
    k2: usize,
    p: ExactP,
) -> Result<Prop43Result, AnalysisError> {
    if l > op.n_max() {
        return Err(AnalysisError::Precondition(format!(
            "block {l} beyond the truncation n_max = {}",
            op.n_max()
        )));
    }
    check_hypotheses(op, l, k0, k1, k2)?;
    let local = BlockLocal::new(op, l);
    let u = local.load(x);
    let block = super::project_block(op, x, l);
    let big_x = p.sparse_sum(&x_transform(op, &block)?);
    // ‖u‖ >= ‖X‖/2  ⇔  2^p Σ|u|^p >= Σ|X|^p
    let scale = Dyadic::pow2(p.value() as i64);
    let period = local.period();
    let flags: Vec<bool> = local
        .orbit(u, period)
        .iter()
        .map(|v| &scale * &p.sum(v) >= big_x)
        .collect();
    let per_period = flags.iter().filter(|&&f| f).count() as u64;
    let total = horizon + 1;
    let full = total / period as u64;
    let rest = (total % period as u64) as usize;
    let count = full * per_period + flags[..rest].iter().filter(|&&f| f).count() as u64;

    let size = op.blocks().size(l) as i128;
    let q = (k2 - k1 + k0) as i128;
    let t = total as i128;
    // count/(J+1) >= 1 - 4q(1/(J+1) + 1/Δ), multiplied through by (J+1)Δ
    let holds = count as i128 * size >= t * size - 4 * q * (size + t);
    Ok(Prop43Result {
        l,
        horizon,
        count,
        lhs_ratio: count as f64 / total as f64,
        rhs_bound: 1.0 - 4.0 * q as f64 * (1.0 / total as f64 + 1.0 / size as f64),
        holds,
    })
}
