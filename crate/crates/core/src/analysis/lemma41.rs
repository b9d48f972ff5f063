//! Hypotheses and conditions of the density lemma for C-type operators,
//! checked on a finitely supported vector.
//!
//! The lemma bounds the lower density of `{j : ‖T^j x‖ >= ε}` from below by
//! `liminf_l inf_{k >= R_l} #{j <= k : ‖P_l T^j P_l x‖ >= 2C‖P_l X‖}/(k+1)`.
//! Every comparison is done on `p`-th powers so it stays exact; condition
//! (4) sums norms across blocks and is exact only for `p = 1`.

use std::cmp::Ordering;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::operator::CTypeOperator;
use crate::report::{ConditionResult, Status};
use crate::scalar::{Dyadic, SparseVec};
use crate::schedule::CPlusSchedule;

use super::local::BlockLocal;
use super::orbit::Ratio;
use super::{
    block_power_sums, project, project_block, projected_orbit, x_transform, AnalysisError, ExactP,
};

const DEFAULT_HORIZON: u64 = 4096;
const DEFAULT_PERIOD_BUDGET: u64 = 1 << 16;
// Block-vector multiplications allowed for condition (5).
const CONDITION5_BUDGET: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma41Config {
    pub p: ExactP,
    pub c: Dyadic,
    /// `β_l^p` for `l = 1..=l_max`, stored at index `l - 1`.
    pub beta_p: Vec<Dyadic>,
    pub n: Vec<u64>,
    pub r: Vec<u64>,
    pub l: Vec<u64>,
    /// Steps scanned for condition (4) when no common period fits the budget.
    pub horizon: u64,
    pub period_budget: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    #[serde(default)]
    p: Option<u32>,
    #[serde(default)]
    recipe: Option<String>,
    #[serde(rename = "C", default)]
    c: Option<String>,
    #[serde(default)]
    beta: Option<Vec<String>>,
    #[serde(rename = "N", default)]
    n: Option<Vec<u64>>,
    #[serde(rename = "R", default)]
    r: Option<Vec<u64>>,
    #[serde(rename = "L", default)]
    l: Option<Vec<u64>>,
    #[serde(default)]
    horizon: Option<u64>,
    #[serde(default)]
    period_budget: Option<u64>,
}

fn config_err(field: &str, message: impl Into<String>) -> AnalysisError {
    AnalysisError::Config {
        field: field.into(),
        message: message.into(),
    }
}

impl Lemma41Config {
    pub fn l_max(&self) -> usize {
        self.beta_p.len()
    }

    /// `β_l = 4γ_k`, `N_l = η⁽ᵏ⁾`, `R_l = Δ⁽ᵏ⁾ − 2δ⁽ᵏ⁾ − 2η⁽ᵏ⁾`, `L_l = 2δ⁽ᵏ⁾`
    /// and `C = 1/4` for `l ∈ [2^{k-1}, 2^k)`, where
    /// `γ_k = 2^{-τ⁽ᵏ⁾}(Δ⁽ᵏ⁾)^{1-1/p}`.
    pub fn prop44_recipe(
        schedule: &CPlusSchedule,
        levels: usize,
        p: ExactP,
    ) -> Result<Self, AnalysisError> {
        let mut cfg = Lemma41Config {
            p,
            c: Dyadic::pow2(-2),
            beta_p: Vec::new(),
            n: Vec::new(),
            r: Vec::new(),
            l: Vec::new(),
            horizon: DEFAULT_HORIZON,
            period_budget: DEFAULT_PERIOD_BUDGET,
        };
        let small = |x: &num_bigint::BigUint, what: &str| {
            x.to_i64()
                .ok_or_else(|| config_err(what, "value too large to materialize"))
        };
        for k in 1..=levels {
            let lv = schedule.level(k)?;
            let (tau, delta, eta, size) = (
                small(&lv.tau, "tau")?,
                small(&lv.delta, "delta")?,
                small(&lv.eta, "eta")?,
                small(&lv.size, "Delta")?,
            );
            let pv = p.value() as i64;
            // (4γ)^p = 2^{2p - pτ} Δ^{p-1}
            let beta_p = &Dyadic::pow2(2 * pv - pv * tau) * &Dyadic::from_int(size.pow(p.value() - 1));
            let r = size - 2 * delta - 2 * eta;
            if r < 0 {
                return Err(config_err("R", format!("Δ − 2δ − 2η < 0 at k = {k}")));
            }
            for _ in 0..1usize << (k - 1) {
                cfg.beta_p.push(beta_p.clone());
                cfg.n.push(eta as u64);
                cfg.r.push(r as u64);
                cfg.l.push(2 * delta as u64);
            }
        }
        Ok(cfg)
    }

    /// TOML with either `recipe = "prop44"` (needs the schedule) or explicit
    /// `C`, `beta`, `N`, `R`, `L`; optional `p`, `horizon`, `period_budget`.
    pub fn from_toml_str(
        text: &str,
        schedule: Option<&CPlusSchedule>,
        levels: usize,
    ) -> Result<Self, AnalysisError> {
        let doc: ConfigDoc =
            toml::from_str(text).map_err(|e| config_err("<file>", e.message().to_string()))?;
        let p = ExactP::from_int(doc.p.unwrap_or(2))?;
        let mut cfg = match doc.recipe.as_deref() {
            Some("prop44") => {
                if doc.c.is_some() || doc.beta.is_some() || doc.n.is_some() || doc.r.is_some() || doc.l.is_some() {
                    return Err(config_err("recipe", "explicit arrays conflict with a recipe"));
                }
                let s = schedule.ok_or_else(|| config_err("recipe", "recipe needs a schedule"))?;
                Self::prop44_recipe(s, levels, p)?
            }
            Some(other) => return Err(config_err("recipe", format!("unknown recipe {other:?}"))),
            None => {
                let need = |name: &str| config_err(name, "missing");
                let c_text = doc.c.ok_or_else(|| need("C"))?;
                let c = Dyadic::parse_literal(&c_text).map_err(|e| config_err("C", e.to_string()))?;
                let beta_p = doc
                    .beta
                    .ok_or_else(|| need("beta"))?
                    .iter()
                    .map(|b| {
                        Dyadic::parse_literal(b)
                            .map(|d| d.powi(p.value()))
                            .map_err(|e| config_err("beta", e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Lemma41Config {
                    p,
                    c,
                    beta_p,
                    n: doc.n.ok_or_else(|| need("N"))?,
                    r: doc.r.ok_or_else(|| need("R"))?,
                    l: doc.l.ok_or_else(|| need("L"))?,
                    horizon: DEFAULT_HORIZON,
                    period_budget: DEFAULT_PERIOD_BUDGET,
                }
            }
        };
        if let Some(h) = doc.horizon {
            cfg.horizon = h;
        }
        if let Some(b) = doc.period_budget {
            cfg.period_budget = b;
        }
        Ok(cfg)
    }

    /// Malformed configurations are errors; hypotheses about the sequences
    /// are reported instead.
    fn check_shape(&self, op: &CTypeOperator) -> Result<(), AnalysisError> {
        let l_max = self.l_max();
        if l_max < op.n_max() {
            return Err(config_err(
                "beta",
                format!("covers l ≤ {l_max} but the truncation has n_max = {}", op.n_max()),
            ));
        }
        for (name, len) in [("N", self.n.len()), ("R", self.r.len()), ("L", self.l.len())] {
            if len != l_max {
                return Err(config_err(name, format!("has {len} entries, beta has {l_max}")));
            }
        }
        if !self.c.is_positive() {
            return Err(config_err("C", "must be positive"));
        }
        for l in 1..=op.n_max() {
            let i = l - 1;
            if !self.beta_p[i].is_positive() {
                return Err(config_err("beta", format!("β_{l} must be positive")));
            }
            if self.n[i] == 0 {
                return Err(config_err("N", format!("N_{l} must be positive")));
            }
            if self.n[i] > self.r[i] {
                return Err(config_err("R", format!("N_{l} = {} > R_{l} = {}", self.n[i], self.r[i])));
            }
            let size = op.blocks().size(l) as u64;
            if self.r[i] >= size {
                return Err(config_err("R", format!("R_{l} = {} ≥ b_(l+1) − b_l = {size}", self.r[i])));
            }
        }
        Ok(())
    }
}

/// `inf_{k >= R_l} #{0 <= j <= k : hit_j}/(k+1)` for the block-local orbit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConclusionRatio {
    pub l: usize,
    pub infimum: Ratio,
    pub value: f64,
    /// `None` when the infimum is the limit `hits per period / period`.
    pub attained_at: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma41Report {
    pub p: ExactP,
    pub hypotheses: Vec<ConditionResult>,
    pub conditions: Vec<ConditionResult>,
    /// Condition (4), one entry per block `n`; informational, since no
    /// finitely supported vector is hypercyclic.
    pub condition4: Vec<ConditionResult>,
    pub conclusion: Vec<ConclusionRatio>,
}

impl Lemma41Report {
    pub fn passed(&self) -> bool {
        !self
            .hypotheses
            .iter()
            .chain(&self.conditions)
            .any(|c| c.status.is_failure())
    }

    pub fn get(&self, prefix: &str) -> Option<&ConditionResult> {
        self.hypotheses
            .iter()
            .chain(&self.conditions)
            .find(|c| c.name.starts_with(prefix))
    }
}

/// Accumulates one condition over many instances.
struct Tally {
    name: String,
    checked: u64,
    failure: Option<String>,
    limited: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.into(),
            checked: 0,
            failure: None,
            limited: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    fn finish(self) -> ConditionResult {
        let (status, witness) = match (self.failure, self.limited, self.checked) {
            (Some(w), _, _) => (Status::Fail, w),
            (None, _, 0) => (Status::Vacuous, "empty quantifier range".to_string()),
            (None, Some(w), n) => (Status::HorizonLimited, format!("{n} instances; {w}")),
            (None, None, n) => (Status::Pass, format!("{n} instances")),
        };
        ConditionResult::new(self.name, status, witness)
    }
}

fn sum_sqrt_beta(cfg: &Lemma41Config, l_max: usize) -> f64 {
    let q = 2.0 * cfg.p.value() as f64;
    cfg.beta_p[..l_max]
        .iter()
        .map(|b| (b.log2_abs() / q).exp2())
        .sum()
}

fn hypotheses(op: &CTypeOperator, cfg: &Lemma41Config) -> Vec<ConditionResult> {
    let l_max = op.n_max();
    let mut out = Vec::new();
    let mut t = Tally::new("β_l non-increasing");
    for l in 2..=l_max {
        t.record(cfg.beta_p[l - 1] <= cfg.beta_p[l - 2], || format!("l = {l}"));
    }
    out.push(t.finish());

    let total = sum_sqrt_beta(cfg, l_max);
    out.push(ConditionResult::new(
        "Σ_l √β_l ≤ 1",
        Status::proxy(total <= 1.0),
        format!("partial sum over l ≤ {l_max} is {total:.6}; tail unchecked"),
    ));

    let mut t = Tally::new("N_l non-decreasing");
    for l in 2..=l_max {
        t.record(cfg.n[l - 1] >= cfg.n[l - 2], || format!("l = {l}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("R_l < inf {N_j : j a φ-descendant of l}");
    for l in 1..=l_max {
        let desc_min = (l + 1..=l_max)
            .filter(|&j| op.phi_chain(j).chain[1..].contains(&l))
            .map(|j| cfg.n[j - 1])
            .min();
        if let Some(m) = desc_min {
            t.record(cfg.r[l - 1] < m, || format!("l = {l}: R_l = {} ≥ {m}", cfg.r[l - 1]));
        }
    }
    let mut res = t.finish();
    if res.status == Status::Pass {
        res.witness = format!("{}; descendants beyond the truncation unchecked", res.witness);
    }
    out.push(res);

    let mut ok = true;
    for l in 2..=l_max {
        let (a, b) = (l - 2, l - 1);
        if cfg.l[b] as u128 * cfg.n[a] as u128 > cfg.l[a] as u128 * cfg.n[b] as u128 {
            ok = false;
        }
    }
    out.push(ConditionResult::new(
        "L_l/N_l → 0",
        Status::proxy(ok),
        format!("non-increasing over l ≤ {l_max}"),
    ));
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lemma41_check(
    op: &CTypeOperator,
    x: &SparseVec,
    cfg: &Lemma41Config,
) -> Result<Lemma41Report, AnalysisError> {
    if x.is_zero() {
        return Err(AnalysisError::Precondition("x must be nonzero".into()));
    }
    let big_x = x_transform(op, x)?;
    cfg.check_shape(op)?;
    let p = cfg.p;
    let b = op.blocks();
    let n_max = op.n_max();
    let c_p = p.pow(&cfg.c);

    let mut conditions = Vec::new();

    let mut t1 = Tally::new("(1) ‖P_n x‖ ≤ ‖P_n X‖");
    let xs = block_power_sums(op, x, p);
    let bigs = block_power_sums(op, &big_x, p);
    for n in 0..=n_max {
        let zero = Dyadic::zero();
        let (a, c) = (xs.get(&n).unwrap_or(&zero), bigs.get(&n).unwrap_or(&zero));
        t1.record(a <= c, || format!("n = {n}: {a} > {c}"));
    }
    conditions.push(t1.finish());

    let mut t2 = Tally::new("(2) sup_j ‖P_n T^j P_l x‖ ≤ Cβ_l ‖P_l X‖");
    let mut t2p = Tally::new("(2′) ‖P_n T^j P_l x‖ ≤ Cβ_l ‖P_[b_(l+1)−j, b_(l+1)) X‖ for j ≤ R_l");
    let mut t3 = Tally::new("(3) sup_(j≤N_l) ‖P_n T^j P_l x‖ ≤ Cβ_l ‖P_l x‖");
    let mut t5 = Tally::new("(5) ‖P_l T^k P_[b_(l+1)−j, b_(l+1)) x‖ ≥ ‖P_[b_(l+1)−j, b_(l+1)) X‖");
    let mut budget5 = CONDITION5_BUDGET;

    for l in 1..=n_max {
        let xl = project_block(op, x, l);
        if xl.is_zero() {
            continue;
        }
        let coef = &c_p * &cfg.beta_p[l - 1];
        let (end, size) = (b.end(l), b.size(l));
        let zero = Dyadic::zero();
        let rhs2 = &coef * bigs.get(&l).unwrap_or(&zero);
        let rhs3 = &coef * xs.get(&l).unwrap_or(&zero);
        let mut tail = vec![Dyadic::zero(); size + 1];
        for j in 1..=size {
            tail[j] = &tail[j - 1] + &p.pow(&big_x.get(end - j));
        }
        let (n_l, r_l, l_l) = (cfg.n[l - 1] as usize, cfg.r[l - 1] as usize, cfg.l[l - 1] as usize);

        let orbit = projected_orbit(op, &xl, b.period(l), p)?;
        for n in 0..l {
            let at = |j: usize| orbit[j].get(&n).cloned().unwrap_or_else(Dyadic::zero);
            let sup = (0..orbit.len()).map(at).max().expect("nonempty");
            t2.record(sup <= rhs2, || format!("l = {l}, n = {n}: {sup} > {rhs2}"));
            for j in 0..=r_l {
                let lhs = at(j);
                let rhs = &coef * &tail[j];
                t2p.record(lhs <= rhs, || format!("l = {l}, n = {n}, j = {j}: {lhs} > {rhs}"));
            }
            let sup3 = (0..=n_l).map(at).max().expect("nonempty");
            t3.record(sup3 <= rhs3, || format!("l = {l}, n = {n}: {sup3} > {rhs3}"));
        }

        let local = BlockLocal::new(op, l);
        for j in n_l..=r_l {
            if j + l_l > r_l {
                continue;
            }
            let cost = ((r_l + 1) * size) as u64;
            if cost > budget5 {
                t5.limited = Some(format!("work budget reached at l = {l}, j = {j}"));
                break;
            }
            budget5 -= cost;
            let piece = project(x, end - j..end);
            let rhs = tail[j].clone();
            let orbit = local.orbit(local.load(&piece), r_l + 1);
            for (k, v) in orbit.iter().enumerate().skip(j + l_l) {
                let lhs = p.sum(v);
                t5.record(lhs >= rhs, || format!("l = {l}, j = {j}, k = {k}: {lhs} < {rhs}"));
            }
        }
    }
    conditions.extend([t2.finish(), t2p.finish(), t3.finish(), t5.finish()]);

    let condition4 = condition4(op, x, &big_x, cfg)?;
    let conclusion = (1..=n_max)
        .map(|l| conclusion_ratio(op, x, &big_x, cfg, l))
        .collect();
    Ok(Lemma41Report {
        p,
        hypotheses: hypotheses(op, cfg),
        conditions,
        condition4,
        conclusion,
    })
}

fn condition4(
    op: &CTypeOperator,
    x: &SparseVec,
    big_x: &SparseVec,
    cfg: &Lemma41Config,
) -> Result<Vec<ConditionResult>, AnalysisError> {
    let p = cfg.p;
    let b = op.blocks();
    let n_max = op.n_max();
    let massive: Vec<usize> = (1..=n_max)
        .filter(|&l| !project_block(op, x, l).is_zero())
        .collect();
    let mut common = 1u64;
    for &l in &massive {
        let per = b.period(l) as u64;
        common = common / gcd(common, per) * per;
        if common > cfg.period_budget {
            break;
        }
    }
    let exact_period = common <= cfg.period_budget;
    let steps = if exact_period { common } else { cfg.horizon + 1 } as usize;
    let orbits: Vec<(usize, Vec<_>)> = massive
        .iter()
        .map(|&l| Ok((l, projected_orbit(op, &project_block(op, x, l), steps, p)?)))
        .collect::<Result<_, AnalysisError>>()?;
    let bigs = block_power_sums(op, big_x, p);

    let mut out = Vec::new();
    for n in 0..=n_max {
        let name = format!("(4) sup_j Σ_(l>n) ‖P_n T^j P_l x‖ > C‖P_n X‖ (n = {n})");
        let zero = Dyadic::zero();
        let px = bigs.get(&n).unwrap_or(&zero);
        let above: Vec<_> = orbits.iter().filter(|(l, _)| *l > n).collect();
        if above.is_empty() {
            out.push(ConditionResult::new(
                name,
                Status::Fail,
                "no mass above block n; finitely supported x is not hypercyclic",
            ));
            continue;
        }
        let mut found = None;
        let mut best = f64::NEG_INFINITY;
        for j in 0..steps {
            let (ok, val) = match p {
                ExactP::One => {
                    let s: Dyadic = above
                        .iter()
                        .map(|(_, o)| o[j].get(&n).cloned().unwrap_or_else(Dyadic::zero))
                        .sum();
                    let v = s.to_f64();
                    (s > &cfg.c * px, v)
                }
                ExactP::Two => {
                    let s: f64 = above
                        .iter()
                        .map(|(_, o)| o[j].get(&n).map_or(0.0, |d| p.root(d)))
                        .sum();
                    (s > cfg.c.to_f64() * p.root(px), s)
                }
            };
            best = best.max(val);
            if ok {
                found = Some(j);
                break;
            }
        }
        let rhs = cfg.c.to_f64() * p.root(px);
        let approx = if p == ExactP::Two { " (f64)" } else { "" };
        let (status, witness) = match found {
            Some(j) => (Status::Pass, format!("j = {j}{approx}")),
            None if exact_period => (
                Status::Fail,
                format!("max over one common period {best:.6e} ≤ {rhs:.6e}{approx}"),
            ),
            None => (
                Status::HorizonLimited,
                format!("max over j ≤ {} is {best:.6e} ≤ {rhs:.6e}{approx}", steps - 1),
            ),
        };
        out.push(ConditionResult::new(name, status, witness));
    }
    Ok(out)
}

fn conclusion_ratio(
    op: &CTypeOperator,
    x: &SparseVec,
    big_x: &SparseVec,
    cfg: &Lemma41Config,
    l: usize,
) -> ConclusionRatio {
    let p = cfg.p;
    let local = BlockLocal::new(op, l);
    let threshold = &p.pow(&cfg.c.shift(1)) * &p.sparse_sum(&project_block(op, big_x, l));
    let flags: Vec<bool> = local
        .orbit(local.load(x), local.period())
        .iter()
        .map(|v| p.sum(v) >= threshold)
        .collect();
    let period = flags.len() as u64;
    let per_period = flags.iter().filter(|&&f| f).count() as u64;
    let r_l = cfg.r[l - 1];
    // For a fixed residue r, (mA + a_r)/(mP + r + 1) is monotone in m, so the
    // infimum over k >= R_l is its first admissible value or the limit A/P.
    let limit = Ratio::new(per_period, period);
    let mut best = (limit, None);
    let mut prefix = 0u64;
    for (r, &f) in flags.iter().enumerate() {
        prefix += f as u64;
        let r = r as u64;
        let m0 = if r >= r_l { 0 } else { (r_l - r).div_ceil(period) };
        let cand = Ratio::new(m0 * per_period + prefix, m0 * period + r + 1);
        let k = m0 * period + r;
        let better = match cand.cmp_exact(best.0) {
            Ordering::Less => true,
            Ordering::Equal => best.1.is_none_or(|b| k < b),
            Ordering::Greater => false,
        };
        if better {
            best = (cand, Some(k));
        }
    }
    ConclusionRatio {
        l,
        infimum: best.0,
        value: best.0.value(),
        attained_at: best.1,
    }
}
