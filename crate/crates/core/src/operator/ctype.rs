use crate::scalar::{Dyadic, SparseVec};

use super::{BlockStructure, Direction, OperatorError, PhiChain};

/// Raw parameters of a C-type operator.
///
/// `v[n]` is read for `n >= 1` only; `w[k]` is read for every coordinate `k`
/// strictly inside a block (`b_n < k < b_{n+1}`). Other slots are ignored.
#[derive(Clone, Debug)]
pub struct CTypeParams {
    pub sizes: Vec<usize>,
    pub phi: Vec<usize>,
    pub v: Vec<Dyadic>,
    pub w: Vec<Dyadic>,
}

/// A C-type operator materialized on `span{e_k : k < b_{n_max+1}}`.
///
/// Both `T` and `T⁻¹` map this span into itself because `φ(n) < n`, so the
/// truncation is exact rather than a projection.
#[derive(Clone, Debug)]
pub struct CTypeOperator {
    blocks: BlockStructure,
    block_index: Vec<u32>,
    v: Vec<Dyadic>,
    w: Vec<Dyadic>,
    w_inv: Vec<Dyadic>,
    big_w: Vec<Dyadic>,
    big_w_inv: Vec<Dyadic>,
    suffix: Vec<Dyadic>,
    /// `T⁻¹ e_{b_n}` for every block `n` (the φ-chain sum for `n >= 1`).
    inverse_heads: Vec<SparseVec>,
    smallness: Vec<bool>,
}

impl CTypeOperator {
    pub fn new(params: &CTypeParams, n_max: usize) -> Result<Self, OperatorError> {
        let blocks = BlockStructure::new(&params.sizes, &params.phi)?.truncated(n_max)?;
        let dim = blocks.dim();
        if params.w.len() < dim {
            return Err(OperatorError::Parameter(format!(
                "need {dim} weights, got {}",
                params.w.len()
            )));
        }
        if params.v.len() <= n_max {
            return Err(OperatorError::Parameter(format!(
                "need v_1..v_{n_max}, got {} entries",
                params.v.len().saturating_sub(1)
            )));
        }

        let mut block_index = vec![0u32; dim];
        let mut w = vec![Dyadic::one(); dim];
        let mut w_inv = vec![Dyadic::one(); dim];
        let mut suffix = vec![Dyadic::one(); dim];
        let mut big_w = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let (start, end) = (blocks.start(n), blocks.end(n));
            for k in start..end {
                block_index[k] = n as u32;
            }
            for k in start + 1..end {
                let wk = &params.w[k];
                if wk.is_zero() {
                    return Err(OperatorError::ZeroWeight { k });
                }
                w_inv[k] = wk.recip().ok_or(OperatorError::WeightNotPow2 { k })?;
                w[k] = wk.clone();
            }
            let mut acc = Dyadic::one();
            for i in (start..end).rev() {
                suffix[i] = acc.clone();
                if i > start {
                    acc = &acc * &w[i];
                }
            }
            big_w.push(acc);
        }
        let big_w_inv = big_w
            .iter()
            .map(|x| x.recip().expect("product of signed powers of two"))
            .collect();

        let mut v = vec![Dyadic::zero(); n_max + 1];
        for n in 1..=n_max {
            if params.v[n].is_zero() {
                return Err(OperatorError::ZeroV { n });
            }
            v[n] = params.v[n].clone();
        }

        let mut op = CTypeOperator {
            blocks,
            block_index,
            v,
            w,
            w_inv,
            big_w,
            big_w_inv,
            suffix,
            inverse_heads: Vec::new(),
            smallness: Vec::new(),
        };
        op.inverse_heads = (0..=n_max).map(|n| op.compute_inverse_head(n)).collect();
        op.smallness = op.compute_smallness();
        Ok(op)
    }

    fn compute_inverse_head(&self, n: usize) -> SparseVec {
        let b = &self.blocks;
        let mut out = SparseVec::new();
        if n == 0 {
            out.add_term(b.end(0) - 1, &-&self.big_w[0]);
            return out;
        }
        let chain = b.phi_chain(n).chain;
        let mut v_prod = Dyadic::one();
        let mut w_prod = self.big_w[chain[0]].clone();
        for m in 0..chain.len() - 1 {
            v_prod = &v_prod * &self.v[chain[m]];
            w_prod = &w_prod * &self.big_w[chain[m + 1]];
            out.add_term(b.end(chain[m + 1]) - 1, &-(&v_prod * &w_prod));
        }
        out.add_term(b.end(n) - 1, &-&self.big_w[n]);
        out
    }

    fn compute_smallness(&self) -> Vec<bool> {
        let sup_w = self
            .big_w
            .iter()
            .map(Dyadic::abs)
            .max()
            .expect("at least one block");
        let mut flags = vec![true];
        for n in 1..=self.n_max() {
            let lhs = &self.v[n].abs() * &sup_w.shift(n as i64);
            flags.push(lhs < Dyadic::one());
        }
        flags
    }

    pub fn blocks(&self) -> &BlockStructure {
        &self.blocks
    }

    pub fn n_max(&self) -> usize {
        self.blocks.n_max()
    }

    pub fn dim(&self) -> usize {
        self.blocks.dim()
    }

    pub fn block_of(&self, k: usize) -> usize {
        self.block_index[k] as usize
    }

    pub fn v(&self, n: usize) -> &Dyadic {
        assert!(n >= 1, "v_0 is not part of the operator");
        &self.v[n]
    }

    /// `w_k`; equal to one at block starts, where it is never read.
    pub fn w(&self, k: usize) -> &Dyadic {
        &self.w[k]
    }

    /// `W_n = Π_{b_n < j < b_{n+1}} w_j`.
    pub fn big_w(&self, n: usize) -> &Dyadic {
        &self.big_w[n]
    }

    pub fn phi_chain(&self, n: usize) -> PhiChain {
        self.blocks.phi_chain(n)
    }

    /// Whether `|v_n| < 1 / (2^n sup|W_m|)` holds for block `n >= 1`.
    pub fn smallness_holds(&self, n: usize) -> bool {
        self.smallness[n]
    }

    /// Blocks that violate the smallness hypothesis of the inverse formulas.
    pub fn smallness_violations(&self) -> Vec<usize> {
        (1..=self.n_max()).filter(|&n| !self.smallness[n]).collect()
    }

    /// `Π_{s=i+1}^{b_{l+1}-1} w_s` for `b_l <= i < b_{l+1}`.
    pub fn suffix_weight_product(&self, l: usize, i: usize) -> Result<Dyadic, OperatorError> {
        if l > self.n_max() || i < self.blocks.start(l) || i >= self.blocks.end(l) {
            return Err(OperatorError::Range {
                index: i,
                limit: if l > self.n_max() { self.dim() } else { self.blocks.end(l) },
            });
        }
        Ok(self.suffix[i].clone())
    }

    /// Suffix product for coordinate `i` within its own block.
    pub fn suffix_at(&self, i: usize) -> &Dyadic {
        &self.suffix[i]
    }

    fn check_range(&self, x: &SparseVec) -> Result<(), OperatorError> {
        match x.max_index() {
            Some(k) if k >= self.dim() => Err(OperatorError::Range {
                index: k,
                limit: self.dim(),
            }),
            _ => Ok(()),
        }
    }

    /// Adds `c · T e_k` into `out`.
    fn push_forward(&self, k: usize, c: &Dyadic, out: &mut SparseVec) {
        let n = self.block_of(k);
        let b = &self.blocks;
        if k + 1 < b.end(n) {
            out.add_term(k + 1, &(c * &self.w[k + 1]));
        } else if n >= 1 {
            out.add_term(b.start(b.phi(n)), &(c * &self.v[n]));
            out.add_term(b.start(n), &-(c * &self.big_w_inv[n]));
        } else {
            out.add_term(0, &-(c * &self.big_w_inv[0]));
        }
    }

    /// Adds `c · T⁻¹ e_k` into `out`.
    fn push_inverse(&self, k: usize, c: &Dyadic, out: &mut SparseVec) {
        let n = self.block_of(k);
        if k > self.blocks.start(n) {
            out.add_term(k - 1, &(c * &self.w_inv[k]));
        } else {
            out.add_scaled(c, &self.inverse_heads[n]);
        }
    }

    pub fn apply_forward(&self, x: &SparseVec) -> Result<SparseVec, OperatorError> {
        self.check_range(x)?;
        let mut out = SparseVec::new();
        for (k, c) in x.iter() {
            self.push_forward(k, c, &mut out);
        }
        Ok(out)
    }

    pub fn apply_inverse(&self, x: &SparseVec) -> Result<SparseVec, OperatorError> {
        self.check_range(x)?;
        let mut out = SparseVec::new();
        for (k, c) in x.iter() {
            self.push_inverse(k, c, &mut out);
        }
        Ok(out)
    }

    pub fn apply(&self, x: &SparseVec, direction: Direction) -> Result<SparseVec, OperatorError> {
        match direction {
            Direction::Forward => self.apply_forward(x),
            Direction::Inverse => self.apply_inverse(x),
        }
    }

    /// One step on a dense buffer: `dst = T src` (or `T⁻¹ src`).
    ///
    /// Both slices must have the same length, which must be a block boundary.
    pub fn step_dense(&self, direction: Direction, src: &[Dyadic], dst: &mut [Dyadic]) {
        debug_assert_eq!(src.len(), dst.len());
        for d in dst.iter_mut() {
            if !d.is_zero() {
                *d = Dyadic::zero();
            }
        }
        let b = &self.blocks;
        for (k, c) in src.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = self.block_of(k);
            match direction {
                Direction::Forward => {
                    if k + 1 < b.end(n) {
                        dst[k + 1] += &(c * &self.w[k + 1]);
                    } else if n >= 1 {
                        dst[b.start(b.phi(n))] += &(c * &self.v[n]);
                        dst[b.start(n)] += &-(c * &self.big_w_inv[n]);
                    } else {
                        dst[0] += &-(c * &self.big_w_inv[0]);
                    }
                }
                Direction::Inverse => {
                    if k > b.start(n) {
                        dst[k - 1] += &(c * &self.w_inv[k]);
                    } else {
                        for (i, h) in self.inverse_heads[n].iter() {
                            dst[i] += &(c * h);
                        }
                    }
                }
            }
        }
    }

    /// `T^j x` (or `T^{-j} x`), reducing `j` modulo the period of each block
    /// that carries mass.
    pub fn apply_power(
        &self,
        x: &SparseVec,
        j: u64,
        direction: Direction,
    ) -> Result<SparseVec, OperatorError> {
        self.check_range(x)?;
        let mut out = SparseVec::new();
        for n in 0..=self.n_max() {
            let part = x.restrict(self.blocks.start(n)..self.blocks.end(n));
            if part.is_zero() {
                continue;
            }
            let steps = j % self.blocks.period(n) as u64;
            let mut cur = part;
            for _ in 0..steps {
                cur = self.apply(&cur, direction)?;
            }
            // Images of block n never leave [0, b_{n+1}).
            if let Some(top) = cur.max_index() {
                if top >= self.blocks.end(n) {
                    return Err(OperatorError::Range {
                        index: top,
                        limit: self.blocks.end(n),
                    });
                }
            }
            out.add_scaled(&Dyadic::one(), &cur);
        }
        Ok(out)
    }

    /// Plain `j`-fold application with no period reduction.
    pub fn apply_naive(
        &self,
        x: &SparseVec,
        j: u64,
        direction: Direction,
    ) -> Result<SparseVec, OperatorError> {
        let mut cur = x.clone();
        for _ in 0..j {
            cur = self.apply(&cur, direction)?;
        }
        Ok(cur)
    }
}
