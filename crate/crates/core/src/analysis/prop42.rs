//! Upper bounds on the mass that block `l` sends into lower blocks, in terms
//! of `C_l = |v_l| · sup_j Π_{s=b_φ(l)+1}^{j} |w_s|`:
//!
//! ```text
//! (1) sup_j ‖P_n T^j P_l x‖ <= C_l Δ_l^((p-1)/p) ‖P_l X‖
//! (2) sup_{j<=N} ‖P_n T^j P_l x‖ <= C_l Δ_l^((p-1)/p) ‖P_[b_{l+1}-N, b_{l+1}) X‖
//! ```
//!
//! Both sides are raised to the power `p` so the comparisons stay exact.

use serde::Serialize;

use crate::operator::CTypeOperator;
use crate::report::{ConditionResult, Status};
use crate::scalar::{Dyadic, SparseVec};

use super::{margin, project_block, projected_orbit, x_transform, AnalysisError, ExactP};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop42Report {
    pub p: ExactP,
    /// `C_n`, indexed by block; entry 0 is unused.
    pub constants: Vec<Dyadic>,
    pub hypothesis: ConditionResult,
    pub conclusion1: ConditionResult,
    pub conclusion2: ConditionResult,
}

impl Prop42Report {
    pub fn passed(&self) -> bool {
        ![&self.hypothesis, &self.conclusion1, &self.conclusion2]
            .iter()
            .any(|c| c.status.is_failure())
    }
}

/// `(sup, argmax)` of the prefix products `Π_{s=b_m+1}^{j} |w_s|` over block
/// `m`, the empty product included.
fn prefix_sup(op: &CTypeOperator, m: usize) -> (Dyadic, usize) {
    let b = op.blocks();
    let mut best = (Dyadic::one(), b.start(m));
    let mut acc = Dyadic::one();
    for j in b.start(m) + 1..b.end(m) {
        acc = &acc * &op.w(j).abs();
        if acc > best.0 {
            best = (acc.clone(), j);
        }
    }
    best
}

/// The smallest admissible constants `C_n = |v_n| · sup prefix` for `n >= 1`.
pub fn prefix_constants(op: &CTypeOperator) -> Vec<Dyadic> {
    let mut out = vec![Dyadic::zero()];
    for n in 1..=op.n_max() {
        let (sup, _) = prefix_sup(op, op.blocks().phi(n));
        out.push(&op.v(n).abs() * &sup);
    }
    out
}

fn check_constants(op: &CTypeOperator, c: &[Dyadic]) -> ConditionResult {
    let name = "|v_n| · sup_j Π |w_s| ≤ C_n < 1";
    for n in 1..=op.n_max() {
        let (sup, j) = prefix_sup(op, op.blocks().phi(n));
        let lhs = &op.v(n).abs() * &sup;
        let cn = &c[n];
        if !cn.is_positive() || *cn >= Dyadic::one() || lhs > *cn {
            return ConditionResult::new(
                name,
                Status::Fail,
                format!("n = {n}, j = {j}: lhs = {lhs}, C_n = {cn}"),
            );
        }
    }
    ConditionResult::new(name, Status::Pass, format!("n = 1..{}", op.n_max()))
}

/// Checks both conclusions for every `l in 1..=l_max` carrying mass and every
/// `n < l`. `constants` defaults to [`prefix_constants`].
pub fn prop42_check(
    op: &CTypeOperator,
    x: &SparseVec,
    constants: Option<Vec<Dyadic>>,
    p: ExactP,
    l_max: usize,
) -> Result<Prop42Report, AnalysisError> {
    let c = constants.unwrap_or_else(|| prefix_constants(op));
    if c.len() <= op.n_max() {
        return Err(AnalysisError::Config {
            field: "C_n".into(),
            message: format!("need {} constants", op.n_max() + 1),
        });
    }
    if l_max > op.n_max() {
        return Err(AnalysisError::Precondition(format!(
            "l_max = {l_max} beyond the truncation n_max = {}",
            op.n_max()
        )));
    }
    let hypothesis = check_constants(op, &c);
    let names = [
        "sup_j ‖P_n T^j P_l x‖ ≤ C_l Δ_l^((p−1)/p) ‖P_l X‖",
        "sup_(j≤N) ‖P_n T^j P_l x‖ ≤ C_l Δ_l^((p−1)/p) ‖P_[b_(l+1)−N, b_(l+1)) X‖",
    ];
    let mut fail: [Option<String>; 2] = [None, None];
    let mut worst = [0.0f64; 2];
    let mut checked = 0usize;

    for l in 1..=l_max {
        let xl = project_block(op, x, l);
        if xl.is_zero() {
            continue;
        }
        checked += 1;
        let b = op.blocks();
        let size = b.size(l);
        let factor = &p.pow(&c[l]) * &Dyadic::from_int(size.pow(p.value() - 1) as i64);
        let big_x = x_transform(op, &xl)?;
        let rhs1 = &factor * &p.sparse_sum(&big_x);
        // tail[N] = Σ_{i ∈ [b_{l+1}-N, b_{l+1})} |X_i|^p
        let mut tail = vec![Dyadic::zero(); size + 1];
        for nn in 1..=size {
            tail[nn] = &tail[nn - 1] + &p.pow(&big_x.get(b.end(l) - nn));
        }
        let orbit = projected_orbit(op, &xl, b.period(l), p)?;
        for n in 0..l {
            let sums: Vec<Dyadic> = orbit
                .iter()
                .map(|m| m.get(&n).cloned().unwrap_or_else(Dyadic::zero))
                .collect();
            let sup = sums.iter().max().expect("nonempty period").clone();
            worst[0] = worst[0].max(margin(&sup, &rhs1));
            if sup > rhs1 && fail[0].is_none() {
                fail[0] = Some(format!("l = {l}, n = {n}: {sup} > {rhs1}"));
            }
            let mut running = sums[0].clone();
            for nn in 1..=size {
                if sums[nn] > running {
                    running = sums[nn].clone();
                }
                let rhs2 = &factor * &tail[nn];
                worst[1] = worst[1].max(margin(&running, &rhs2));
                if running > rhs2 && fail[1].is_none() {
                    fail[1] = Some(format!("l = {l}, n = {n}, N = {nn}: {running} > {rhs2}"));
                }
            }
        }
    }

    let result = |i: usize| {
        if checked == 0 {
            ConditionResult::new(names[i], Status::Vacuous, "no block l ≥ 1 carries mass")
        } else if let Some(w) = &fail[i] {
            ConditionResult::new(names[i], Status::Fail, w.clone())
        } else {
            ConditionResult::new(
                names[i],
                Status::Pass,
                format!("{checked} blocks, max lhs/rhs = {:.6}", worst[i]),
            )
        }
    };
    Ok(Prop42Report {
        p,
        constants: c,
        hypothesis,
        conclusion1: result(0),
        conclusion2: result(1),
    })
}
