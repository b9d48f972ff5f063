//! The compression `P_l T P_l` of the operator to one block.
//!
//! Mass that leaves block `l` only ever lands in lower blocks, which never
//! feed back into `l`, so `P_l T^j P_l = (P_l T P_l)^j`.

use crate::operator::CTypeOperator;
use crate::scalar::{Dyadic, SparseVec};

pub(crate) struct BlockLocal {
    pub start: usize,
    /// `w[i]` is `w_{b_l + i}`; `w[0]` is unused.
    w: Vec<Dyadic>,
    w_inv_total: Dyadic,
}

impl BlockLocal {
    pub fn new(op: &CTypeOperator, l: usize) -> Self {
        let b = op.blocks();
        let (start, end) = (b.start(l), b.end(l));
        BlockLocal {
            start,
            w: (start..end).map(|k| op.w(k).clone()).collect(),
            w_inv_total: op.big_w(l).recip().expect("signed power of two"),
        }
    }

    pub fn size(&self) -> usize {
        self.w.len()
    }

    pub fn period(&self) -> usize {
        2 * self.w.len()
    }

    /// Dense coordinates of `P_l x`.
    pub fn load(&self, x: &SparseVec) -> Vec<Dyadic> {
        let mut out = vec![Dyadic::zero(); self.size()];
        for (i, c) in x.restrict(self.start..self.start + self.size()).iter() {
            out[i - self.start] = c.clone();
        }
        out
    }

    pub fn step(&self, cur: &[Dyadic]) -> Vec<Dyadic> {
        let n = self.size();
        let mut next = vec![Dyadic::zero(); n];
        for i in 0..n - 1 {
            if !cur[i].is_zero() {
                next[i + 1] = &cur[i] * &self.w[i + 1];
            }
        }
        if !cur[n - 1].is_zero() {
            next[0] = -(&cur[n - 1] * &self.w_inv_total);
        }
        next
    }

    /// `(P_l T P_l)^j u` for `j = 0..steps`, as successive dense vectors.
    pub fn orbit(&self, u: Vec<Dyadic>, steps: usize) -> Vec<Vec<Dyadic>> {
        let mut out = Vec::with_capacity(steps);
        let mut cur = u;
        for _ in 0..steps {
            let next = self.step(&cur);
            out.push(std::mem::replace(&mut cur, next));
        }
        out
    }
}
