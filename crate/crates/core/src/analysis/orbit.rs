//! Orbit scans, hitting sets and finite-horizon density estimates.
//!
//! The density of a hitting set is a liminf/limsup and cannot be computed;
//! [`density_stats`] reports the extreme prefix ratios over a window
//! `[warmup, horizon]` instead.

use std::cmp::Ordering;
use std::io::{self, Write};

use serde::Serialize;

use crate::operator::{CTypeOperator, Direction};
use crate::scalar::{cmp_norm, lp_norm, Dyadic, NormExponent, SparseVec};

use super::AnalysisError;

/// `count / total` with exact comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub count: u64,
    pub total: u64,
}

impl Ratio {
    pub fn new(count: u64, total: u64) -> Self {
        assert!(total > 0, "empty ratio");
        Ratio { count, total }
    }

    pub fn value(self) -> f64 {
        self.count as f64 / self.total as f64
    }

    pub fn cmp_exact(self, other: Ratio) -> Ordering {
        (self.count as u128 * other.total as u128).cmp(&(other.count as u128 * self.total as u128))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    pub n: u64,
    pub hits: u64,
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DensityStats {
    pub lower: Ratio,
    pub lower_at: u64,
    pub upper: Ratio,
    pub upper_at: u64,
}

impl DensityStats {
    pub fn lower_est(&self) -> f64 {
        self.lower.value()
    }

    pub fn upper_est(&self) -> f64 {
        self.upper.value()
    }
}

fn check_hits(hits: &[u64], horizon: u64) -> Result<(), AnalysisError> {
    if hits.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::Precondition(
            "hits must be strictly increasing".into(),
        ));
    }
    if hits.last().is_some_and(|&h| h > horizon) {
        return Err(AnalysisError::Precondition(format!(
            "hit beyond the horizon {horizon}"
        )));
    }
    Ok(())
}

/// Minimum and maximum of `r_n = #(hits ∩ [0, n]) / (n + 1)` over
/// `n ∈ [warmup, horizon]`. Ties keep the earliest `n`.
pub fn density_stats(hits: &[u64], horizon: u64, warmup: u64) -> Result<DensityStats, AnalysisError> {
    if warmup >= horizon {
        return Err(AnalysisError::Precondition(format!(
            "warmup {warmup} must be below the horizon {horizon}"
        )));
    }
    check_hits(hits, horizon)?;
    let mut count = 0u64;
    let mut idx = 0;
    let mut best: Option<DensityStats> = None;
    for n in 0..=horizon {
        while idx < hits.len() && hits[idx] <= n {
            count += 1;
            idx += 1;
        }
        if n < warmup {
            continue;
        }
        let r = Ratio::new(count, n + 1);
        best = Some(match best {
            None => DensityStats {
                lower: r,
                lower_at: n,
                upper: r,
                upper_at: n,
            },
            Some(mut s) => {
                if r.cmp_exact(s.lower) == Ordering::Less {
                    s.lower = r;
                    s.lower_at = n;
                }
                if r.cmp_exact(s.upper) == Ordering::Greater {
                    s.upper = r;
                    s.upper_at = n;
                }
                s
            }
        });
    }
    Ok(best.expect("window is nonempty"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitPoint {
    pub j: u64,
    pub norm: f64,
    /// `Σ|x|` for `p = 1`, `Σx²` for `p = 2`, `max|x|` for `p = ∞`.
    pub exact: Option<Dyadic>,
    /// `None` when the comparison with ε is inconclusive.
    pub hit: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HittingReport {
    pub horizon: u64,
    pub epsilon: String,
    pub p: String,
    pub direction: Direction,
    pub warmup: u64,
    /// `j` with `‖T^j x‖ >= ε`.
    pub hits: Vec<u64>,
    /// `j` whose comparison could not be decided; counted as misses.
    pub inconclusive: Vec<u64>,
    pub checkpoints: Vec<Checkpoint>,
    pub lower_est: f64,
    pub upper_est: f64,
    pub density: DensityStats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitScan {
    pub report: HittingReport,
    #[serde(skip)]
    pub points: Vec<OrbitPoint>,
}

impl OrbitScan {
    /// CSV with header `j,norm,hit` (plus `exact` when requested). Norms
    /// carry 17 significant digits; inconclusive hits print as `?`.
    pub fn write_csv<W: Write>(&self, mut out: W, exact: bool) -> io::Result<()> {
        if exact {
            writeln!(out, "j,norm,hit,exact")?;
        } else {
            writeln!(out, "j,norm,hit")?;
        }
        for pt in &self.points {
            let hit = match pt.hit {
                Some(true) => "1",
                Some(false) => "0",
                None => "?",
            };
            write!(out, "{},{:.16e},{}", pt.j, pt.norm, hit)?;
            if exact {
                let lit = pt.exact.as_ref().map(Dyadic::to_hex_literal).unwrap_or_default();
                write!(out, ",{lit}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn point(j: u64, v: &SparseVec, p: NormExponent, epsilon: &Dyadic) -> OrbitPoint {
    let n = lp_norm(v, p);
    OrbitPoint {
        j,
        norm: n.approx,
        hit: cmp_norm(&n, epsilon).at_least(),
        exact: n.exact_part.filter(|_| p.is_exact()),
    }
}

fn check_inputs(epsilon: &Dyadic, horizon: u64) -> Result<(), AnalysisError> {
    if !epsilon.is_positive() {
        return Err(AnalysisError::Precondition("epsilon must be positive".into()));
    }
    if horizon == 0 {
        return Err(AnalysisError::Precondition("horizon must be at least 1".into()));
    }
    Ok(())
}

fn scan_range(
    op: &CTypeOperator,
    x: &SparseVec,
    range: std::ops::RangeInclusive<u64>,
    epsilon: &Dyadic,
    direction: Direction,
    p: NormExponent,
) -> Result<Vec<OrbitPoint>, AnalysisError> {
    let mut cur = op.apply_power(x, *range.start(), direction)?;
    let mut out = Vec::new();
    for j in range.clone() {
        out.push(point(j, &cur, p, epsilon));
        if j < *range.end() {
            cur = op.apply(&cur, direction)?;
        }
    }
    Ok(out)
}

fn assemble(
    points: Vec<OrbitPoint>,
    horizon: u64,
    epsilon: &Dyadic,
    direction: Direction,
    p: NormExponent,
    warmup: Option<u64>,
) -> Result<OrbitScan, AnalysisError> {
    let warmup = warmup.unwrap_or(horizon / 100);
    let hits: Vec<u64> = points.iter().filter(|pt| pt.hit == Some(true)).map(|pt| pt.j).collect();
    let inconclusive = points.iter().filter(|pt| pt.hit.is_none()).map(|pt| pt.j).collect();
    let density = density_stats(&hits, horizon, warmup)?;

    let mut checkpoints = Vec::new();
    let mut marks: Vec<u64> = std::iter::successors(Some(1u64), |&n| n.checked_mul(2))
        .take_while(|&n| n <= horizon)
        .collect();
    if marks.last() != Some(&horizon) {
        marks.push(horizon);
    }
    let mut count = 0;
    let mut idx = 0;
    for n in marks {
        while idx < hits.len() && hits[idx] <= n {
            count += 1;
            idx += 1;
        }
        checkpoints.push(Checkpoint {
            n,
            hits: count,
            ratio: count as f64 / (n + 1) as f64,
        });
    }

    Ok(OrbitScan {
        report: HittingReport {
            horizon,
            epsilon: epsilon.to_literal(),
            p: p.to_string(),
            direction,
            warmup,
            hits,
            inconclusive,
            checkpoints,
            lower_est: density.lower_est(),
            upper_est: density.upper_est(),
            density,
        },
        points,
    })
}

/// `‖T^j x‖` for `j = 0..=horizon`, classified against `ε`.
pub fn orbit_scan(
    op: &CTypeOperator,
    x: &SparseVec,
    horizon: u64,
    epsilon: &Dyadic,
    direction: Direction,
    p: NormExponent,
    warmup: Option<u64>,
) -> Result<OrbitScan, AnalysisError> {
    check_inputs(epsilon, horizon)?;
    let points = scan_range(op, x, 0..=horizon, epsilon, direction, p)?;
    assemble(points, horizon, epsilon, direction, p, warmup)
}

/// Same result as [`orbit_scan`], with `[0, horizon]` split into contiguous
/// ranges scanned on separate threads. Each worker starts from the
/// period-reduced power at the beginning of its range.
#[allow(clippy::too_many_arguments)]
pub fn orbit_scan_partitioned(
    op: &CTypeOperator,
    x: &SparseVec,
    horizon: u64,
    epsilon: &Dyadic,
    direction: Direction,
    p: NormExponent,
    warmup: Option<u64>,
    workers: usize,
) -> Result<OrbitScan, AnalysisError> {
    check_inputs(epsilon, horizon)?;
    let workers = workers.clamp(1, (horizon + 1) as usize);
    let chunk = (horizon + 1).div_ceil(workers as u64);
    let parts: Vec<Result<Vec<OrbitPoint>, AnalysisError>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(horizon + 1) - 1;
                s.spawn(move || scan_range(op, x, lo..=hi, epsilon, direction, p))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    let mut points = Vec::with_capacity(horizon as usize + 1);
    for part in parts {
        points.extend(part?);
    }
    assemble(points, horizon, epsilon, direction, p, warmup)
}
