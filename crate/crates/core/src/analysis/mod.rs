//! Finite-scale analysis of C-type orbits: projections and the X-transform,
//! orbit scans with density estimates, checkers for the counting lemmas used
//! to bound hitting densities, and the periodic-point certificate for the
//! inverse of a C⁺-type operator.
//!
//! Suprema over all iterates are exact wherever the algebra allows: the
//! orbit of `P_l x` is periodic with period `2(b_{l+1} - b_l)`, so a
//! supremum over `j >= 0` equals a maximum over one period. Where a common
//! period of several blocks exceeds the budget, results are tagged
//! `horizon-limited`.
//!
//! Finitely supported vectors are periodic and therefore never hypercyclic,
//! so conditions quantified over hypercyclic vectors are evaluated as data
//! only.

mod certificate;
mod lemma41;
mod local;
mod orbit;
mod prop42;
mod prop43;
pub mod random;

pub use certificate::{
    prop32_construct_z, thm31_verify, Alpha, CertificateConstants, CertificateReport, LevelTerms,
    Thm31Report,
};
pub use lemma41::{lemma41_check, ConclusionRatio, Lemma41Config, Lemma41Report};
pub use orbit::{
    density_stats, orbit_scan, orbit_scan_partitioned, Checkpoint, DensityStats, HittingReport,
    OrbitPoint, OrbitScan, Ratio,
};
pub use prop42::{prefix_constants, prop42_check, Prop42Report};
pub use prop43::{prop43_ratio, Prop43Result};

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operator::{CTypeOperator, OperatorError};
use crate::scalar::{Dyadic, NormExponent, SparseVec};
use crate::schedule::ScheduleError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("exponent p = {0} is not supported here; use 1 or 2")]
    Exponent(String),
    #[error("config field {field}: {message}")]
    Config { field: String, message: String },
    #[error("hypothesis \"{name}\" fails: {witness}")]
    Hypothesis { name: String, witness: String },
    #[error("precondition: {0}")]
    Precondition(String),
}

/// The exponents for which every comparison is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExactP {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl ExactP {
    pub fn from_int(p: u32) -> Result<Self, AnalysisError> {
        match p {
            1 => Ok(ExactP::One),
            2 => Ok(ExactP::Two),
            _ => Err(AnalysisError::Exponent(p.to_string())),
        }
    }

    pub fn value(self) -> u32 {
        match self {
            ExactP::One => 1,
            ExactP::Two => 2,
        }
    }

    pub fn exponent(self) -> NormExponent {
        match self {
            ExactP::One => NormExponent::One,
            ExactP::Two => NormExponent::Two,
        }
    }

    /// `|d|^p`.
    pub fn pow(self, d: &Dyadic) -> Dyadic {
        match self {
            ExactP::One => d.abs(),
            ExactP::Two => d.square(),
        }
    }

    /// `Σ |x_i|^p`.
    pub fn sum<'a>(self, xs: impl IntoIterator<Item = &'a Dyadic>) -> Dyadic {
        let mut acc = Dyadic::zero();
        for d in xs {
            if !d.is_zero() {
                acc += &self.pow(d);
            }
        }
        acc
    }

    pub fn sparse_sum(self, x: &SparseVec) -> Dyadic {
        self.sum(x.iter().map(|(_, c)| c))
    }

    /// `s^(1/p)` as an `f64`.
    pub fn root(self, s: &Dyadic) -> f64 {
        crate::scalar::root_f64(s, self.value() as f64)
    }
}

impl TryFrom<NormExponent> for ExactP {
    type Error = AnalysisError;

    fn try_from(p: NormExponent) -> Result<Self, AnalysisError> {
        match p {
            NormExponent::One => Ok(ExactP::One),
            NormExponent::Two => Ok(ExactP::Two),
            other => Err(AnalysisError::Exponent(other.to_string())),
        }
    }
}

/// Coordinate restriction to `[range.start, range.end)`.
pub fn project(x: &SparseVec, range: Range<usize>) -> SparseVec {
    x.restrict(range)
}

/// `P_l x`.
pub fn project_block(op: &CTypeOperator, x: &SparseVec, l: usize) -> SparseVec {
    let b = op.blocks();
    x.restrict(b.start(l)..b.end(l))
}

/// `X_i = (Π_{s=i+1}^{b_{l+1}-1} w_s) x_i` for `i` in block `l`.
pub fn x_transform(op: &CTypeOperator, x: &SparseVec) -> Result<SparseVec, AnalysisError> {
    if let Some(k) = x.max_index().filter(|&k| k >= op.dim()) {
        return Err(OperatorError::Range {
            index: k,
            limit: op.dim(),
        }
        .into());
    }
    Ok(SparseVec::from_entries(
        x.iter().map(|(i, c)| (i, c * op.suffix_at(i))),
    ))
}

/// Per-block power sums `Σ_{i ∈ block n} |x_i|^p`, keyed by block.
pub(crate) fn block_power_sums(
    op: &CTypeOperator,
    x: &SparseVec,
    p: ExactP,
) -> std::collections::BTreeMap<usize, Dyadic> {
    let mut out = std::collections::BTreeMap::new();
    for (i, c) in x.iter() {
        *out.entry(op.block_of(i)).or_insert_with(Dyadic::zero) += &p.pow(c);
    }
    out
}

/// For `j = 0..steps`, the power sums of `T^j y` on each block it touches.
pub(crate) fn projected_orbit(
    op: &CTypeOperator,
    y: &SparseVec,
    steps: usize,
    p: ExactP,
) -> Result<Vec<std::collections::BTreeMap<usize, Dyadic>>, AnalysisError> {
    let mut out = Vec::with_capacity(steps);
    let mut cur = y.clone();
    for j in 0..steps {
        out.push(block_power_sums(op, &cur, p));
        if j + 1 < steps {
            cur = op.apply_forward(&cur)?;
        }
    }
    Ok(out)
}

/// Worst observed `lhs / rhs` for witnesses; zero right-hand sides map to
/// infinity unless the left side also vanishes.
pub(crate) fn margin(lhs: &Dyadic, rhs: &Dyadic) -> f64 {
    if lhs.is_zero() {
        0.0
    } else if rhs.is_zero() {
        f64::INFINITY
    } else {
        (lhs.log2_abs() - rhs.log2_abs()).exp2()
    }
}

#[cfg(test)]
mod tests;
