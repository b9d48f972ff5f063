//! C⁺-type schedules: per-level parameters `(τ, δ, η, Δ)`, the weight
//! profile they induce, materialization into a [`CTypeOperator`], and a
//! validator for the hypotheses a schedule is expected to meet.
//!
//! Level `k >= 1` owns the blocks `n ∈ [2^{k-1}, 2^k)`, each of size `Δ⁽ᵏ⁾`,
//! with `φ(n) = n - 2^{k-1}` and `v_n = 2^{-τ⁽ᵏ⁾}`. Block 0 has size `Δ0`
//! and all weights equal to one, so `W_0 = 1`.
//!
//! Parameters are held as [`BigUint`] so that schedules with astronomically
//! large values can still be validated; only materialization needs them small.

mod file;
mod profile;
mod validate;

pub use validate::{validate_schedule, ValidationMode, ValidationReport};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::operator::{BlockStructure, CTypeOperator, CTypeParams, OperatorError};
use crate::scalar::Dyadic;

use profile::Breakpoints;

/// Largest number of coordinates [`CPlusSchedule::materialize`] will allocate.
pub const MATERIALIZE_BUDGET: usize = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("schedule file: {0}")]
    Parse(String),
    #[error("condition \"{name}\" violated at k = {k}")]
    Condition { name: String, k: usize },
    #[error("invalid schedule: {0}")]
    Invalid(String),
    #[error("level {k} outside 1..={levels}")]
    Level { k: usize, levels: usize },
    #[error("index {i} outside [1, Δ⁽{k}⁾)")]
    Index { k: usize, i: u64 },
    #[error("materialization rejected: {0}")]
    Budget(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Parameters of one level `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub tau: BigUint,
    pub delta: BigUint,
    pub eta: BigUint,
    pub size: BigUint,
}

impl Level {
    pub fn from_u64(tau: u64, delta: u64, eta: u64, size: u64) -> Self {
        Level {
            tau: tau.into(),
            delta: delta.into(),
            eta: eta.into(),
            size: size.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Materialized,
    Log2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPlusSchedule {
    delta0: BigUint,
    levels: Vec<Level>,
    log2: bool,
}

impl CPlusSchedule {
    /// Checks positivity and that `τ`, `δ`, `η` are strictly increasing.
    /// The remaining hypotheses are left to [`validate_schedule`].
    pub fn new(delta0: BigUint, levels: Vec<Level>) -> Result<Self, ScheduleError> {
        if levels.is_empty() {
            return Err(ScheduleError::Invalid("K must be at least 1".into()));
        }
        if delta0.is_zero() {
            return Err(ScheduleError::Invalid("Delta0 must be positive".into()));
        }
        for (idx, l) in levels.iter().enumerate() {
            for (name, x) in [("τ", &l.tau), ("δ", &l.delta), ("η", &l.eta), ("Δ", &l.size)] {
                if x.is_zero() {
                    return Err(ScheduleError::Condition {
                        name: format!("{name}⁽ᵏ⁾ positive"),
                        k: idx + 1,
                    });
                }
            }
        }
        for (idx, pair) in levels.windows(2).enumerate() {
            let k = idx + 2;
            let checks = [
                ("τ⁽ᵏ⁾ strictly increasing", &pair[0].tau, &pair[1].tau),
                ("δ⁽ᵏ⁾ strictly increasing", &pair[0].delta, &pair[1].delta),
                ("η⁽ᵏ⁾ strictly increasing", &pair[0].eta, &pair[1].eta),
            ];
            for (name, a, b) in checks {
                if a >= b {
                    return Err(ScheduleError::Condition {
                        name: name.into(),
                        k,
                    });
                }
            }
        }
        Ok(CPlusSchedule {
            delta0,
            levels,
            log2: false,
        })
    }

    /// Convenience constructor from `(τ, δ, η, Δ)` tuples.
    pub fn from_u64(delta0: u64, levels: &[(u64, u64, u64, u64)]) -> Result<Self, ScheduleError> {
        let levels = levels
            .iter()
            .map(|&(t, d, e, s)| Level::from_u64(t, d, e, s))
            .collect();
        Self::new(delta0.into(), levels)
    }

    /// The schedule of the existence proof: `τ = 2^{Ck²}`, `δ = 2^{Ck²+1}`,
    /// `η = 2^{2Ck²+1}`, `Δ = 2^{2Ck²+k+4}` and `Δ0 = 2^{2C+4}`.
    pub fn theorem45(c: u64, levels: usize, repr: Representation) -> Result<Self, ScheduleError> {
        if c == 0 || levels == 0 {
            return Err(ScheduleError::Invalid("C and K must be at least 1".into()));
        }
        let pow2 = |e: u64| BigUint::one() << e;
        let exps: Vec<(u64, u64, u64, u64)> = (1..=levels as u64)
            .map(|k| {
                let ck2 = c
                    .checked_mul(k * k)
                    .filter(|&x| x < u64::MAX / 4)
                    .ok_or_else(|| ScheduleError::Invalid(format!("C·k² overflows at k = {k}")))?;
                Ok((ck2, ck2 + 1, 2 * ck2 + 1, 2 * ck2 + k + 4))
            })
            .collect::<Result<_, ScheduleError>>()?;
        if exps.iter().any(|&(t, ..)| t > 1 << 20) {
            return Err(ScheduleError::Invalid(
                "τ⁽ᵏ⁾ = 2^(Ck²) would need more than 2^20 bits".into(),
            ));
        }
        let lv = exps
            .iter()
            .map(|&(t, d, e, s)| Level {
                tau: pow2(t),
                delta: pow2(d),
                eta: pow2(e),
                size: pow2(s),
            })
            .collect();
        let mut s = Self::new(pow2(2 * c + 4), lv)?;
        match repr {
            Representation::Log2 => s.log2 = true,
            Representation::Materialized => {
                s.materialization_dim(levels)?;
            }
        }
        Ok(s)
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn delta0(&self) -> &BigUint {
        &self.delta0
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Level `k`, one-based.
    pub fn level(&self, k: usize) -> Result<&Level, ScheduleError> {
        if k == 0 || k > self.levels.len() {
            return Err(ScheduleError::Level {
                k,
                levels: self.levels.len(),
            });
        }
        Ok(&self.levels[k - 1])
    }

    /// Whether the schedule is written with log₂ exponents when saved.
    pub fn is_log2(&self) -> bool {
        self.log2
    }

    pub fn set_log2(&mut self, log2: bool) {
        self.log2 = log2;
    }

    pub(crate) fn lv(&self, k: usize) -> &Level {
        &self.levels[k - 1]
    }

    pub(crate) fn breakpoints(&self, k: usize) -> Result<Breakpoints, ScheduleError> {
        let l = self.level(k)?;
        Ok(Breakpoints::new(&l.delta, &l.eta, &l.size))
    }

    /// `w_i⁽ᵏ⁾` for `1 <= i < Δ⁽ᵏ⁾`.
    pub fn weight_profile(&self, k: usize, i: u64) -> Result<Dyadic, ScheduleError> {
        let e = self
            .breakpoints(k)?
            .exponent(i)
            .ok_or(ScheduleError::Index { k, i })?;
        Ok(Dyadic::pow2(e as i64))
    }

    /// `1 / w_i⁽ᵏ⁾`, listed run by run with the halves and twos exchanged.
    pub fn inverse_weight_profile(&self, k: usize, i: u64) -> Result<Dyadic, ScheduleError> {
        let e = self
            .breakpoints(k)?
            .exponent(i)
            .ok_or(ScheduleError::Index { k, i })?;
        Ok(Dyadic::pow2(-(e as i64)))
    }

    /// `v⁽ᵏ⁾ = 2^{-τ⁽ᵏ⁾}`; needs `τ⁽ᵏ⁾` to fit an exponent.
    pub fn v(&self, k: usize) -> Result<Dyadic, ScheduleError> {
        let tau = self.level(k)?.tau.to_i64().ok_or_else(|| {
            ScheduleError::Budget(format!("τ⁽{k}⁾ does not fit a 64-bit exponent"))
        })?;
        Ok(Dyadic::pow2(-tau))
    }

    /// Total coordinate count `b_{2^K}` for the first `levels` levels.
    pub fn materialization_dim(&self, levels: usize) -> Result<usize, ScheduleError> {
        self.level(levels)?;
        let too_big = || {
            ScheduleError::Budget(format!(
                "b_(2^{levels}) exceeds {MATERIALIZE_BUDGET} coordinates"
            ))
        };
        let mut total = self.delta0.to_usize().ok_or_else(too_big)?;
        for k in 1..=levels {
            let size = self.levels[k - 1].size.to_usize().ok_or_else(too_big)?;
            let count = 1usize << (k - 1);
            total = size
                .checked_mul(count)
                .and_then(|x| x.checked_add(total))
                .ok_or_else(too_big)?;
            if total > MATERIALIZE_BUDGET {
                return Err(too_big());
            }
        }
        Ok(total)
    }

    /// Block sizes and `φ` for blocks `n < 2^levels`.
    pub fn block_structure(&self, levels: usize) -> Result<BlockStructure, ScheduleError> {
        let (sizes, phi) = self.sizes_and_phi(levels)?;
        Ok(BlockStructure::new(&sizes, &phi)?)
    }

    fn sizes_and_phi(&self, levels: usize) -> Result<(Vec<usize>, Vec<usize>), ScheduleError> {
        self.materialization_dim(levels)?;
        let mut sizes = vec![self.delta0.to_usize().expect("checked by budget")];
        let mut phi = vec![0];
        for k in 1..=levels {
            let size = self.levels[k - 1].size.to_usize().expect("checked by budget");
            let half = 1usize << (k - 1);
            for n in half..2 * half {
                sizes.push(size);
                phi.push(n - half);
            }
        }
        Ok((sizes, phi))
    }

    /// Raw operator parameters for blocks `n < 2^levels`.
    pub fn materialize(&self, levels: usize) -> Result<CTypeParams, ScheduleError> {
        let (sizes, phi) = self.sizes_and_phi(levels)?;
        let dim: usize = sizes.iter().sum();
        let mut w = vec![Dyadic::one(); dim];
        let mut v = vec![Dyadic::zero(); sizes.len()];
        let mut start = sizes[0];
        for k in 1..=levels {
            let bp = self.breakpoints(k)?;
            let row: Vec<Dyadic> = (0..bp.size as u64)
                .map(|i| bp.exponent(i).map_or_else(Dyadic::one, |e| Dyadic::pow2(e as i64)))
                .collect();
            let vk = self.v(k)?;
            for n in 1usize << (k - 1)..1usize << k {
                w[start..start + row.len()].clone_from_slice(&row);
                v[n] = vk.clone();
                start += row.len();
            }
        }
        Ok(CTypeParams { sizes, phi, v, w })
    }

    /// The operator on blocks `n < 2^levels`.
    pub fn build_operator(&self, levels: usize) -> Result<CTypeOperator, ScheduleError> {
        let params = self.materialize(levels)?;
        let n_max = params.sizes.len() - 1;
        Ok(CTypeOperator::new(&params, n_max)?)
    }
}

#[cfg(test)]
mod tests;
