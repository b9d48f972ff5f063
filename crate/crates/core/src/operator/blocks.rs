use super::OperatorError;

/// The block decomposition `[b_n, b_{n+1})` and the map `φ` on block indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    bounds: Vec<usize>,
    phi: Vec<usize>,
}

impl BlockStructure {
    /// `sizes[n] = b_{n+1} - b_n` and `phi[n] = φ(n)` for `n = 0..=n_max`.
    pub fn new(sizes: &[usize], phi: &[usize]) -> Result<Self, OperatorError> {
        if sizes.is_empty() {
            return Err(OperatorError::Parameter("no blocks given".into()));
        }
        if sizes.len() != phi.len() {
            return Err(OperatorError::Parameter(format!(
                "{} block sizes but {} values of phi",
                sizes.len(),
                phi.len()
            )));
        }
        if phi[0] != 0 {
            return Err(OperatorError::Phi { n: 0, phi: phi[0] });
        }
        for (n, &s) in sizes.iter().enumerate() {
            if s == 0 {
                return Err(OperatorError::Parameter(format!("block {n} is empty")));
            }
            if n >= 1 && phi[n] >= n {
                return Err(OperatorError::Phi { n, phi: phi[n] });
            }
        }
        for n in 1..sizes.len() {
            let required = 2 * sizes[phi[n]];
            if !sizes[n].is_multiple_of(required) {
                return Err(OperatorError::Divisibility {
                    n,
                    size: sizes[n],
                    required,
                });
            }
        }
        let mut bounds = Vec::with_capacity(sizes.len() + 1);
        bounds.push(0usize);
        for &s in sizes {
            let next = bounds
                .last()
                .copied()
                .unwrap_or(0)
                .checked_add(s)
                .ok_or_else(|| OperatorError::Parameter("total length overflows usize".into()))?;
            bounds.push(next);
        }
        Ok(BlockStructure {
            bounds,
            phi: phi.to_vec(),
        })
    }

    /// Keeps blocks `0..=n_max`.
    pub fn truncated(&self, n_max: usize) -> Result<Self, OperatorError> {
        if n_max >= self.num_blocks() {
            return Err(OperatorError::Parameter(format!(
                "truncation level {n_max} exceeds the {} available blocks",
                self.num_blocks()
            )));
        }
        Ok(BlockStructure {
            bounds: self.bounds[..n_max + 2].to_vec(),
            phi: self.phi[..n_max + 1].to_vec(),
        })
    }

    pub fn num_blocks(&self) -> usize {
        self.phi.len()
    }

    pub fn n_max(&self) -> usize {
        self.phi.len() - 1
    }

    /// Length of the materialized coordinate range, `b_{n_max+1}`.
    pub fn dim(&self) -> usize {
        *self.bounds.last().expect("at least one block")
    }

    /// `b_n` for `0 <= n <= n_max + 1`.
    pub fn boundary(&self, n: usize) -> usize {
        self.bounds[n]
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.bounds
    }

    pub fn start(&self, n: usize) -> usize {
        self.bounds[n]
    }

    /// `b_{n+1}`.
    pub fn end(&self, n: usize) -> usize {
        self.bounds[n + 1]
    }

    pub fn size(&self, n: usize) -> usize {
        self.bounds[n + 1] - self.bounds[n]
    }

    /// Period of every vector supported in block `n`: `2(b_{n+1} - b_n)`.
    pub fn period(&self, n: usize) -> usize {
        2 * self.size(n)
    }

    pub fn phi(&self, n: usize) -> usize {
        self.phi[n]
    }

    /// Block containing coordinate `k`.
    pub fn block_of(&self, k: usize) -> Option<usize> {
        if k >= self.dim() {
            return None;
        }
        Some(self.bounds.partition_point(|&b| b <= k) - 1)
    }

    pub fn phi_chain(&self, n: usize) -> PhiChain {
        let mut chain = vec![n];
        let mut cur = n;
        while cur != 0 {
            cur = self.phi[cur];
            chain.push(cur);
        }
        PhiChain {
            origin: n,
            m: chain.len() - 1,
            chain,
        }
    }
}

/// The sequence `n, φ(n), φ²(n), …, 0` and its length `m_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiChain {
    pub origin: usize,
    pub chain: Vec<usize>,
    /// `m_n = min{m ≥ 0 : φ^m(n) = 0}`.
    pub m: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk() -> BlockStructure {
        BlockStructure::new(&[4, 16, 64, 64], &[0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn boundaries_and_lookup() {
        let b = desk();
        assert_eq!(b.boundaries(), &[0, 4, 20, 84, 148]);
        assert_eq!(b.block_of(0), Some(0));
        assert_eq!(b.block_of(3), Some(0));
        assert_eq!(b.block_of(4), Some(1));
        assert_eq!(b.block_of(147), Some(3));
        assert_eq!(b.block_of(148), None);
        assert_eq!(b.period(2), 128);
    }

    #[test]
    fn chains() {
        let b = desk();
        assert_eq!(b.phi_chain(0).chain, vec![0]);
        assert_eq!(b.phi_chain(0).m, 0);
        assert_eq!(b.phi_chain(1).chain, vec![1, 0]);
        assert_eq!(b.phi_chain(3).chain, vec![3, 1, 0]);
        assert_eq!(b.phi_chain(3).m, 2);
    }

    #[test]
    fn rejects_bad_structure() {
        assert_eq!(
            BlockStructure::new(&[4, 12], &[0, 0]),
            Err(OperatorError::Divisibility {
                n: 1,
                size: 12,
                required: 8
            })
        );
        assert_eq!(
            BlockStructure::new(&[4, 8, 16], &[0, 0, 2]),
            Err(OperatorError::Phi { n: 2, phi: 2 })
        );
        assert!(BlockStructure::new(&[4, 8], &[1, 0]).is_err());
    }
}
