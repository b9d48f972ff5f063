//! Exact validation of schedule hypotheses. Nothing here materializes a
//! schedule, so values with thousands of bits are fine.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::report::{ConditionResult, Status};
use crate::scalar::Dyadic;

use super::{CPlusSchedule, Level};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationMode {
    Structural,
    Invertible,
    UfhcInverse,
    NotUfhc,
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub p: u32,
    pub conditions: Vec<ConditionResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self.conditions.iter().any(|c| c.status.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| c.status.is_failure())
    }

    pub fn get(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// `a <= b · 2^s`, without building `2^s` when the answer is forced.
pub(crate) fn le_shifted(a: &BigUint, b: &BigUint, s: &BigInt) -> bool {
    if !s.is_negative() {
        if b.is_zero() {
            return a.is_zero();
        }
        if *s >= BigInt::from(a.bits()) {
            return true;
        }
        a <= &(b << s.to_u64().expect("below bit length"))
    } else {
        if a.is_zero() {
            return true;
        }
        let t = -s;
        if t >= BigInt::from(b.bits()) {
            return false;
        }
        &(a << t.to_u64().expect("below bit length")) <= b
    }
}

/// Short rendering for witnesses: decimal when small, otherwise `2^e` or a
/// bit length.
pub(crate) fn show(x: &BigUint) -> String {
    if x.bits() <= 64 {
        return x.to_string();
    }
    let tz = x.trailing_zeros().unwrap_or(0);
    if x.bits() == tz + 1 {
        format!("2^{tz}")
    } else {
        format!("~2^{}", x.bits() - 1)
    }
}

fn big(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

/// `log2 W⁽ᵏ⁾`: each profile run contributes its length times its exponent.
pub(crate) fn log2_block_product(level: &Level) -> BigInt {
    let (d, e, s) = (big(&level.delta), big(&level.eta), big(&level.size));
    let ends = [
        &d + 1,
        &d * 2 + 1,
        &s - &d * 2 - &e * 2,
        &s - &d - &e * 2,
        &s - &d - &e,
        &s - &e,
        s.clone(),
    ];
    let exps = [-1, 1, 0, -1, 0, 1, 0];
    let mut start = BigInt::one();
    let mut total = BigInt::zero();
    for (end, x) in ends.iter().zip(exps) {
        let end = end.clone().min(s.clone()).max(start.clone());
        total += (&end - &start) * x;
        start = end;
    }
    total
}

struct Checker<'a> {
    s: &'a CPlusSchedule,
    out: Vec<ConditionResult>,
}

impl Checker<'_> {
    fn k_max(&self) -> usize {
        self.s.levels.len()
    }

    /// Runs `test` for every `k` in `ks`; the witness names the first failure.
    fn per_level(
        &mut self,
        name: &str,
        proxy: bool,
        ks: std::ops::RangeInclusive<usize>,
        mut test: impl FnMut(usize) -> Result<(), String>,
    ) {
        if ks.is_empty() {
            self.out
                .push(ConditionResult::new(name, Status::Vacuous, "no k in range"));
            return;
        }
        let (lo, hi) = (*ks.start(), *ks.end());
        for k in ks {
            if let Err(w) = test(k) {
                self.out.push(ConditionResult::new(
                    name,
                    Status::Fail,
                    format!("k = {k}: {w}"),
                ));
                return;
            }
        }
        let status = if proxy { Status::FiniteProxyPass } else { Status::Pass };
        let witness = if proxy {
            format!("checked for k = {lo}..{hi} only")
        } else {
            format!("k = {lo}..{hi}")
        };
        self.out.push(ConditionResult::new(name, status, witness));
    }

    fn structural(&mut self) {
        let s = self.s;
        let kk = self.k_max();
        self.per_level("τ⁽ᵏ⁾, δ⁽ᵏ⁾, η⁽ᵏ⁾ strictly increasing", false, 2..=kk, |k| {
            let (a, b) = (&s.levels[k - 2], &s.levels[k - 1]);
            if a.tau < b.tau && a.delta < b.delta && a.eta < b.eta {
                Ok(())
            } else {
                Err("not strictly increasing".into())
            }
        });
        self.per_level("4δ⁽ᵏ⁾ + 2η⁽ᵏ⁾ < Δ⁽ᵏ⁾", false, 1..=kk, |k| {
            let l = &s.levels[k - 1];
            let lhs = &l.delta * 4u32 + &l.eta * 2u32;
            if lhs < l.size {
                Ok(())
            } else {
                Err(format!("{} ≥ {}", show(&lhs), show(&l.size)))
            }
        });
        let delta0 = &s.delta0;
        self.per_level("2Δ⁽ʲ⁾ divides Δ⁽ᵏ⁾ for j < k (Δ⁽⁰⁾ = Delta0)", false, 1..=kk, |k| {
            let prev = if k == 1 {
                delta0
            } else {
                &s.levels[k - 2].size
            };
            let m = prev * 2u32;
            if (&s.levels[k - 1].size % &m).is_zero() {
                Ok(())
            } else {
                Err(format!(
                    "{} is not a multiple of {}",
                    show(&s.levels[k - 1].size),
                    show(&m)
                ))
            }
        });
    }

    fn invertible(&mut self) {
        let s = self.s;
        let kk = self.k_max();
        self.per_level("τ⁽ᵏ⁾ ≥ 2ᵏ", false, 1..=kk, |k| {
            let bound = BigUint::one() << k;
            if s.levels[k - 1].tau >= bound {
                Ok(())
            } else {
                Err(format!("{} < {}", show(&s.levels[k - 1].tau), bound))
            }
        });
        // Block 0 has W = 1; the supremum is over every block.
        let sup_log_w = self
            .s
            .levels
            .iter()
            .map(log2_block_product)
            .fold(BigInt::zero(), |a, b| a.max(b));
        self.per_level("|v_n| < 2⁻ⁿ / sup|W_m|", false, 1..=kk, |k| {
            // worst n on level k is 2^k - 1
            let need = (BigInt::one() << k) - 1 + &sup_log_w;
            if big(&s.levels[k - 1].tau) > need {
                Ok(())
            } else {
                Err(format!(
                    "τ⁽ᵏ⁾ = {} but need > n + log2 sup|W| = {need}",
                    show(&s.levels[k - 1].tau)
                ))
            }
        });
    }

    fn ufhc_inverse(&mut self, a: &Dyadic) {
        let s = self.s;
        let kk = self.k_max();
        self.per_level("δ⁽ᵏ⁾ − τ⁽ᵏ⁾ → ∞", true, 2..=kk, |k| {
            let gap = |l: &Level| big(&l.delta) - big(&l.tau);
            let (g0, g1) = (gap(s.lv(k - 1)), gap(s.lv(k)));
            if g1 > g0 {
                Ok(())
            } else {
                Err(format!("δ − τ went from {g0} to {g1}"))
            }
        });
        let name = format!("δ⁽ᵏ⁾/η⁽ᵏ⁾ ≤ A (A = {})", a.to_f64());
        let positive = a.is_positive();
        let (m, e) = (a.mantissa().magnitude().clone(), a.exponent());
        self.per_level(&name, false, 1..=kk, |k| {
            let l = s.lv(k);
            if positive && le_shifted(&l.delta, &(&l.eta * &m), &BigInt::from(e)) {
                Ok(())
            } else {
                Err(format!("δ = {}, η = {}", show(&l.delta), show(&l.eta)))
            }
        });
    }

    fn not_ufhc(&mut self, p: u32) {
        let s = self.s;
        let kk = self.k_max();
        let pp = BigInt::from(p);
        let dpow = |l: &Level| num_traits::pow(l.size.clone(), (p - 1) as usize);
        self.per_level(
            &format!("γ_k = 2^(−τ⁽ᵏ⁾)·(Δ⁽ᵏ⁾)^(1−1/p) non-increasing (p = {p})"),
            false,
            2..=kk,
            |k| {
                let (a, b) = (s.lv(k - 1), s.lv(k));
                let shift = &pp * (big(&b.tau) - big(&a.tau));
                if le_shifted(&dpow(b), &dpow(a), &shift) {
                    Ok(())
                } else {
                    Err("γ_k > γ_(k−1)".into())
                }
            },
        );
        self.per_level(
            &format!("Σ 2ᵏ γ_k^(1/2) ≤ 1 (p = {p})"),
            true,
            1..=kk,
            |k| {
                // termwise: 2^k γ_k^(1/2) ≤ 2^(−k−1)  ⇔  γ_k ≤ 2^(−4k−2)
                let l = s.lv(k);
                let shift = &pp * (big(&l.tau) - 4 * k as i64 - 2);
                if le_shifted(&dpow(l), &BigUint::one(), &shift) {
                    Ok(())
                } else {
                    Err("γ_k > 2^(−4k−2), termwise bound fails".into())
                }
            },
        );
        self.per_level("4δ⁽ᵏ⁾ + 3η⁽ᵏ⁾ ≤ Δ⁽ᵏ⁾", false, 1..=kk, |k| {
            let l = s.lv(k);
            let lhs = &l.delta * 4u32 + &l.eta * 3u32;
            if lhs <= l.size {
                Ok(())
            } else {
                Err(format!("{} > {}", show(&lhs), show(&l.size)))
            }
        });
        self.per_level("Δ⁽ᵏ⁾ ≤ η⁽ᵏ⁺¹⁾", false, 1..=kk - 1, |k| {
            let (a, b) = (s.lv(k), s.lv(k + 1));
            if a.size <= b.eta {
                Ok(())
            } else {
                Err(format!("{} > {}", show(&a.size), show(&b.eta)))
            }
        });
        self.per_level("η⁽ᵏ⁾/Δ⁽ᵏ⁾ → 0", true, 2..=kk, |k| {
            let (a, b) = (s.lv(k - 1), s.lv(k));
            if &b.eta * &a.size < &a.eta * &b.size {
                Ok(())
            } else {
                Err("η/Δ did not decrease".into())
            }
        });
        self.per_level("δ⁽ᵏ⁾/η⁽ᵏ⁾ → 0", true, 2..=kk, |k| {
            let (a, b) = (s.lv(k - 1), s.lv(k));
            if &b.delta * &a.eta < &a.delta * &b.eta {
                Ok(())
            } else {
                Err("δ/η did not decrease".into())
            }
        });
    }
}

/// Checks the conditions selected by `mode`. `p >= 1` enters only through
/// `γ_k`; `a` is the ratio bound used by the `ufhc-inverse` proxy.
pub fn validate_schedule(
    schedule: &CPlusSchedule,
    mode: ValidationMode,
    p: u32,
    a: &Dyadic,
) -> ValidationReport {
    assert!(p >= 1, "p must be at least 1");
    let mut c = Checker {
        s: schedule,
        out: Vec::new(),
    };
    let all = mode == ValidationMode::All;
    if all || mode == ValidationMode::Structural {
        c.structural();
    }
    if all || mode == ValidationMode::Invertible {
        c.invertible();
    }
    if all || mode == ValidationMode::UfhcInverse {
        c.ufhc_inverse(a);
    }
    if all || mode == ValidationMode::NotUfhc {
        c.not_ufhc(p);
    }
    ValidationReport {
        mode,
        p,
        conditions: c.out,
    }
}
