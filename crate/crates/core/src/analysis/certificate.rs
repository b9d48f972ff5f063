//! The periodic-point certificate for `T⁻¹` on a C⁺ schedule.
//!
//! [`prop32_construct_z`] builds `z` level by level from the explicit
//! formula, checks the decomposition `T^{-n} z = x + tail` against
//! [`CTypeOperator::apply_power`] bit-exactly, and evaluates the norm bounds.
//! [`thm31_verify`] re-checks the two certificate conditions from scratch by
//! iterating `z` and `x` separately.
//!
//! The algebraic identity holds whenever the construction is defined; the
//! norm bounds depend on the parameters and routinely fail on small
//! schedules. The report keeps the two apart.

use std::ops::Range;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::operator::{CTypeOperator, Direction};
use crate::report::{ConditionResult, Status};
use crate::scalar::{Dyadic, SparseVec};
use crate::schedule::CPlusSchedule;

use super::{AnalysisError, ExactP};

/// `α = num / den`, kept exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Alpha {
    pub num: Dyadic,
    pub den: Dyadic,
}

impl Alpha {
    pub fn new(num: Dyadic, den: Dyadic) -> Result<Self, AnalysisError> {
        if !num.is_positive() || num >= den {
            return Err(AnalysisError::Config {
                field: "alpha".into(),
                message: format!("need 0 < {num}/{den} < 1"),
            });
        }
        Ok(Alpha { num, den })
    }

    /// `1/(6A)`.
    pub fn from_a(a: &Dyadic) -> Result<Self, AnalysisError> {
        Alpha::new(Dyadic::one(), &Dyadic::from_int(6) * a)
    }

    pub fn to_f64(&self) -> f64 {
        (self.num.log2_abs() - self.den.log2_abs()).exp2()
    }

    /// `floor(n α)`.
    pub fn floor_times(&self, n: u64) -> u64 {
        let q = &Dyadic::from_int(n as i64) * &self.num;
        let shift = q.exponent() - self.den.exponent();
        let (a, b): (BigInt, BigInt) = if shift >= 0 {
            (q.mantissa() << shift as u64, self.den.mantissa().clone())
        } else {
            (q.mantissa().clone(), self.den.mantissa() << (-shift) as u64)
        };
        (a / b).to_u64().expect("n α fits in u64 since α < 1")
    }
}

/// One step of the recursion: `T^{-n} z = u + y + tail`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelTerms {
    /// Recursion index `k`, working on level `k0 - k`.
    pub k: usize,
    pub level: usize,
    pub u: SparseVec,
    pub z: SparseVec,
    pub y: SparseVec,
    pub tail: SparseVec,
    pub identity: bool,
    /// `y` lies below `b_(2^(level-1))` (`y = 0` on level 0).
    pub y_support: bool,
}

/// Proof constants in log₂ (`f64`); `-inf` stands for zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateConstants {
    pub big_n: u64,
    pub log2_inverse_norm: f64,
    pub log2_big_c: f64,
    pub log2_small_c: f64,
    pub x_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub p: ExactP,
    pub epsilon: Dyadic,
    pub k0: usize,
    pub k1: usize,
    pub n: u64,
    pub alpha: Alpha,
    /// Largest `m` with `m <= n α`.
    pub m_max: u64,
    pub z: SparseVec,
    pub tail: SparseVec,
    pub levels: Vec<LevelTerms>,
    /// `T^{-n} z = x + tail`, bit-exact.
    pub identity: bool,
    pub y_support: bool,
    /// `‖z‖ < ε`, exact.
    pub z_small: bool,
    /// `‖T^{-m} tail‖ < ε` for `0 <= m <= n α`, exact.
    pub approximation: bool,
    pub first_bad_m: Option<u64>,
    pub constants: CertificateConstants,
    pub parameter_checks: Vec<ConditionResult>,
}

impl CertificateReport {
    pub fn certificate_holds(&self) -> bool {
        self.z_small && self.approximation
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thm31Report {
    pub n: u64,
    pub m_max: u64,
    pub z_small: bool,
    pub approximation: bool,
    pub first_bad_k: Option<u64>,
}

impl Thm31Report {
    pub fn passed(&self) -> bool {
        self.z_small && self.approximation
    }
}

fn small(x: &num_bigint::BigUint, what: &str) -> Result<usize, AnalysisError> {
    x.to_usize()
        .ok_or_else(|| AnalysisError::Precondition(format!("{what} is too large to materialize")))
}

/// Block indices of level `k`: `{0}` for `k = 0`, else `[2^{k-1}, 2^k)`.
fn level_blocks(k: usize) -> Range<usize> {
    if k == 0 {
        0..1
    } else {
        (1 << (k - 1))..(1 << k)
    }
}

fn restrict_level(op: &CTypeOperator, x: &SparseVec, k: usize) -> SparseVec {
    let r = level_blocks(k);
    let b = op.blocks();
    x.restrict(b.start(r.start)..b.start(r.end))
}

struct Geometry {
    delta1: usize,
    size1: usize,
    /// `2N Δ⁽ᵏ⁰⁾`.
    shift: usize,
    half: usize,
    n: u64,
}

fn construct_level(
    op: &CTypeOperator,
    g: &Geometry,
    u: &SparseVec,
) -> Result<(SparseVec, SparseVec, SparseVec), AnalysisError> {
    let b = op.blocks();
    let (mut z, mut y, mut tail) = (SparseVec::new(), SparseVec::new(), SparseVec::new());
    for (j, c) in u.iter() {
        let l = op.block_of(j);
        let d = b.end(l) - j;
        if d > g.delta1 {
            return Err(AnalysisError::Precondition(format!(
                "coordinate {j} lies {d} from its block end, beyond δ⁽ᵏ¹⁾ = {}; increase k1",
                g.delta1
            )));
        }
        if d + g.shift > g.size1 {
            return Err(AnalysisError::Precondition(format!(
                "coordinate {j}: {d} + 2NΔ⁽ᵏ⁰⁾ = {} exceeds Δ⁽ᵏ¹⁾ = {}",
                d + g.shift,
                g.size1
            )));
        }
        let big_l = g.half + l;
        let head = b.start(big_l);
        let v_inv = op.v(big_l).recip().ok_or_else(|| {
            AnalysisError::Precondition(format!("v_{big_l} is not a power of two"))
        })?;
        let base = &(c * &v_inv) * op.suffix_at(j);

        let up: Dyadic = (1..=g.delta1 - d).map(|i| op.w(head + i).clone()).product();
        z.add_term(head + g.delta1 - d, &-(&base * &up));

        let chain = op.phi_chain(l).chain;
        let mut seed = SparseVec::new();
        let mut v_prod = Dyadic::one();
        for m in 1..chain.len() {
            v_prod = &v_prod * op.v(chain[m - 1]);
            seed.add_term(b.end(chain[m]) - 1, &(&(c * op.suffix_at(j)) * &v_prod));
        }
        if !seed.is_zero() {
            let moved = op.apply_power(&seed, (d - 1) as u64, Direction::Inverse)?;
            y.add_scaled(&Dyadic::one(), &moved);
        }

        let down: Dyadic = (g.size1 + 1 - d - g.shift..g.size1)
            .map(|i| op.w(head + i).clone())
            .product();
        let down_inv = down.recip().expect("product of signed powers of two");
        tail.add_term(b.end(big_l) - d - g.shift, &(&base * &down_inv));
    }
    Ok((z, y, tail))
}

fn log2_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().filter(|t| *t > f64::NEG_INFINITY).collect();
    let Some(max) = terms.iter().cloned().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + terms.iter().map(|t| (t - max).exp2()).sum::<f64>().log2()
}

/// log₂ of an upper bound on `‖T⁻¹‖_p` over the materialized range: the
/// largest column sum for `p = 1`, the Schur bound for `p = 2`.
fn log2_inverse_norm(op: &CTypeOperator, p: ExactP) -> Result<f64, AnalysisError> {
    let mut rows = vec![0.0f64; op.dim()];
    let mut max_col = 0.0f64;
    for k in 0..op.dim() {
        let col = op.apply_inverse(&SparseVec::unit(k))?;
        let mut s = 0.0;
        for (i, c) in col.iter() {
            let a = c.to_f64().abs();
            s += a;
            rows[i] += a;
        }
        max_col = max_col.max(s);
    }
    let max_row = rows.into_iter().fold(0.0, f64::max);
    Ok(match p {
        ExactP::One => max_col.log2(),
        ExactP::Two => 0.5 * (max_col.log2() + max_row.log2()),
    })
}

fn check(name: &str, ok: bool, witness: String) -> ConditionResult {
    ConditionResult::new(name, Status::from_bool(ok), witness)
}

/// Builds `z` and `n` for `x` on a C⁺ operator built from `schedule`.
///
/// `k0` is the least level with `x` supported below `b_(2^k0)` (level 0 is
/// block 0). `alpha` defaults to `1/(6A)`.
#[allow(clippy::too_many_arguments)]
pub fn prop32_construct_z(
    schedule: &CPlusSchedule,
    op: &CTypeOperator,
    x: &SparseVec,
    epsilon: &Dyadic,
    k1: usize,
    a: &Dyadic,
    alpha: Option<Alpha>,
    p: ExactP,
) -> Result<CertificateReport, AnalysisError> {
    if !epsilon.is_positive() {
        return Err(AnalysisError::Precondition("ε must be positive".into()));
    }
    if !a.is_positive() {
        return Err(AnalysisError::Precondition("A must be positive".into()));
    }
    let b = op.blocks();
    if let Some(top) = x.max_index().filter(|&t| t >= op.dim()) {
        return Err(crate::operator::OperatorError::Range { index: top, limit: op.dim() }.into());
    }
    let k0 = match x.max_index() {
        None => 0,
        Some(top) => {
            let blk = op.block_of(top);
            (0..).find(|&k| blk < 1usize << k).expect("finite block index")
        }
    };
    if k1 <= k0 {
        return Err(AnalysisError::Precondition(format!("need k1 > k0 = {k0}, got k1 = {k1}")));
    }
    if k1 > schedule.num_levels() {
        return Err(AnalysisError::Precondition(format!(
            "k1 = {k1} exceeds the schedule's {} levels",
            schedule.num_levels()
        )));
    }
    if op.n_max() + 1 < 1 << k1 {
        return Err(AnalysisError::Precondition(format!(
            "the truncation has {} blocks, the construction needs 2^k1 = {}",
            op.n_max() + 1,
            1usize << k1
        )));
    }
    let lv1 = schedule.level(k1)?;
    let (tau1, delta1, eta1, size1) = (
        small(&lv1.tau, "τ⁽ᵏ¹⁾")?,
        small(&lv1.delta, "δ⁽ᵏ¹⁾")?,
        small(&lv1.eta, "η⁽ᵏ¹⁾")?,
        small(&lv1.size, "Δ⁽ᵏ¹⁾")?,
    );
    let (size0, delta0) = if k0 == 0 {
        (small(schedule.delta0(), "Δ⁽⁰⁾")?, 0)
    } else {
        let lv0 = schedule.level(k0)?;
        (small(&lv0.size, "Δ⁽ᵏ⁰⁾")?, small(&lv0.delta, "δ⁽ᵏ⁰⁾")?)
    };
    // least N with 2NΔ⁽ᵏ⁰⁾ > η⁽ᵏ¹⁾ + δ⁽ᵏ¹⁾
    let big_n = (eta1 + delta1) / (2 * size0) + 1;
    let shift = 2 * big_n * size0;
    let g = Geometry {
        delta1,
        size1,
        shift,
        half: 1 << (k1 - 1),
        n: (delta1 + shift) as u64,
    };
    let alpha = match alpha {
        Some(al) => al,
        None => Alpha::from_a(a)?,
    };

    let mut levels = Vec::new();
    let mut ys: Vec<SparseVec> = Vec::new();
    let (mut z, mut tail) = (SparseVec::new(), SparseVec::new());
    for k in 0..=k0 {
        let level = k0 - k;
        let mut u = restrict_level(op, x, level);
        for y in &ys {
            u = u.sub(&restrict_level(op, y, level));
        }
        let (zk, yk, tk) = construct_level(op, &g, &u)?;
        let lhs = op.apply_power(&zk, g.n, Direction::Inverse)?;
        let identity = lhs == u.add(&yk).add(&tk);
        let y_support = if level == 0 {
            yk.is_zero()
        } else {
            yk.max_index().is_none_or(|t| t < b.start(1 << (level - 1)))
        };
        z.add_scaled(&Dyadic::one(), &zk);
        tail.add_scaled(&Dyadic::one(), &tk);
        ys.push(yk.clone());
        levels.push(LevelTerms { k, level, u, z: zk, y: yk, tail: tk, identity, y_support });
    }
    let identity = levels.iter().all(|t| t.identity)
        && op.apply_power(&z, g.n, Direction::Inverse)? == x.add(&tail);
    let y_support = levels.iter().all(|t| t.y_support);

    let eps_p = p.pow(epsilon);
    let z_small = p.sparse_sum(&z) < eps_p;
    let m_max = alpha.floor_times(g.n);
    let mut first_bad_m = None;
    let mut cur = tail.clone();
    for m in 0..=m_max {
        if p.sparse_sum(&cur) >= eps_p {
            first_bad_m = Some(m);
            break;
        }
        if m < m_max {
            cur = op.apply_inverse(&cur)?;
        }
    }

    // Constants of the argument, in log₂.
    let log2_inv = log2_inverse_norm(op, p)?;
    let mut c_terms = Vec::new();
    for l in 0..1usize << k0 {
        let chain = op.phi_chain(l).chain;
        let mut v_prod = 0.0;
        let mut v_sum = Vec::new();
        for &s in &chain[..chain.len() - 1] {
            v_prod += op.v(s).log2_abs();
            v_sum.push(v_prod);
        }
        let v_log = log2_sum(v_sum);
        for j in b.start(l)..b.end(l) {
            c_terms.push(v_log + delta0 as f64 + (b.end(l) - j - 1) as f64 * log2_inv);
        }
    }
    let log2_big_c = log2_sum(c_terms);
    let kk = ((k0 + 1) as f64).log2();
    let power_term = |s: usize, extra: f64| {
        if s == 0 {
            extra
        } else {
            s as f64 * (kk + log2_big_c) + extra
        }
    };
    let s_a = log2_sum((0..=k0).map(|s| power_term(s, kk)));
    let s_b = log2_sum((0..=k0).map(|s| power_term(s, 0.0)));
    let x_norm = p.root(&p.sparse_sum(x));
    let log2_x = x_norm.log2();
    let log2_eps = epsilon.log2_abs();
    let log2_small_c = log2_eps - 1.0 - log2_x - s_a;
    let gap1 = (delta1 as f64) - (tau1 as f64);
    let lhs31 = if x.is_zero() { f64::NEG_INFINITY } else { log2_small_c + log2_x + s_a };
    let lhs32a = (size0 + delta0) as f64 - gap1;
    let lhs32b = s_b + log2_x + delta0 as f64 + (b.start(1 << k0) as f64).log2() - gap1;
    let a_ratio = Dyadic::from_int(delta1 as i64) < a * &Dyadic::from_int(eta1 as i64);
    let parameter_checks = vec![
        check(
            "c‖x‖ Σ_s (k0+1)^(s+1) C^s < ε",
            lhs31 < log2_eps,
            format!("log₂ lhs = {lhs31:.4}, log₂ ε = {log2_eps:.4}"),
        ),
        check(
            "2^(Δ⁽ᵏ⁰⁾+δ⁽ᵏ⁰⁾) / 2^(δ⁽ᵏ¹⁾−τ⁽ᵏ¹⁾) < c",
            lhs32a < log2_small_c,
            format!("log₂ lhs = {lhs32a:.4}, log₂ c = {log2_small_c:.4}"),
        ),
        check(
            "(Σ_s (k0+1)^s C^s) ‖x‖ 2^δ⁽ᵏ⁰⁾ b_(2^k0) / 2^(δ⁽ᵏ¹⁾−τ⁽ᵏ¹⁾) < ε",
            lhs32b < log2_eps,
            format!("log₂ lhs = {lhs32b:.4}, log₂ ε = {log2_eps:.4}"),
        ),
        check(
            "2Δ⁽ᵏ⁰⁾ < η⁽ᵏ¹⁾/6",
            12 * size0 < eta1,
            format!("12Δ⁽ᵏ⁰⁾ = {}, η⁽ᵏ¹⁾ = {eta1}", 12 * size0),
        ),
        check(
            "Δ⁽ᵏ⁰⁾ < δ⁽ᵏ¹⁾",
            size0 < delta1,
            format!("{size0} vs {delta1}"),
        ),
        check(
            "δ⁽ᵏ¹⁾/η⁽ᵏ¹⁾ < A",
            a_ratio,
            format!("δ⁽ᵏ¹⁾ = {delta1}, η⁽ᵏ¹⁾ = {eta1}, A = {a}"),
        ),
        check("A > 1", a > &Dyadic::one(), format!("A = {a}")),
    ];

    Ok(CertificateReport {
        p,
        epsilon: epsilon.clone(),
        k0,
        k1,
        n: g.n,
        alpha,
        m_max,
        z,
        tail,
        levels,
        identity,
        y_support,
        z_small,
        approximation: first_bad_m.is_none(),
        first_bad_m,
        constants: CertificateConstants {
            big_n: big_n as u64,
            log2_inverse_norm: log2_inv,
            log2_big_c,
            log2_small_c,
            x_norm,
        },
        parameter_checks,
    })
}

/// Checks `‖z‖ < ε` and `‖S^{n+k} z − S^k x‖ < ε` for `0 <= k <= nα`,
/// where `S` is `T` or `T⁻¹` according to `direction`.
#[allow(clippy::too_many_arguments)]
pub fn thm31_verify(
    op: &CTypeOperator,
    direction: Direction,
    z: &SparseVec,
    n: u64,
    x: &SparseVec,
    epsilon: &Dyadic,
    alpha: &Alpha,
    p: ExactP,
) -> Result<Thm31Report, AnalysisError> {
    let eps_p = p.pow(epsilon);
    let z_small = p.sparse_sum(z) < eps_p;
    let m_max = alpha.floor_times(n);
    let mut zi = op.apply_power(z, n, direction)?;
    let mut xi = x.clone();
    let mut first_bad_k = None;
    for k in 0..=m_max {
        if p.sparse_sum(&zi.sub(&xi)) >= eps_p {
            first_bad_k = Some(k);
            break;
        }
        if k < m_max {
            zi = op.apply(&zi, direction)?;
            xi = op.apply(&xi, direction)?;
        }
    }
    Ok(Thm31Report {
        n,
        m_max,
        z_small,
        approximation: first_bad_k.is_none(),
        first_bad_k,
    })
}
