use std::cmp::Ordering;
use std::fmt;

use super::dyadic::ldexp;
use super::{Dyadic, ScalarError, SparseVec};

/// Relative error bound on [`NormValue::approx`] for non-exact exponents.
pub const APPROX_REL_ERROR: f64 = 1.0 / (1u64 << 40) as f64;

/// The exponent `p` of an `l^p` norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormExponent {
    One,
    Two,
    Real(f64),
    Infinity,
}

impl NormExponent {
    pub fn new(p: f64) -> Result<Self, ScalarError> {
        if p.is_nan() || p < 1.0 {
            return Err(ScalarError::NormExponent(p));
        }
        Ok(if p == 1.0 {
            NormExponent::One
        } else if p == 2.0 {
            NormExponent::Two
        } else if p.is_infinite() {
            NormExponent::Infinity
        } else {
            NormExponent::Real(p)
        })
    }

    pub fn value(self) -> f64 {
        match self {
            NormExponent::One => 1.0,
            NormExponent::Two => 2.0,
            NormExponent::Real(p) => p,
            NormExponent::Infinity => f64::INFINITY,
        }
    }

    /// Whether norms for this exponent are compared exactly.
    pub fn is_exact(self) -> bool {
        !matches!(self, NormExponent::Real(_))
    }
}

impl fmt::Display for NormExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormExponent::Infinity => write!(f, "inf"),
            p => write!(f, "{}", p.value()),
        }
    }
}

/// An evaluated norm.
///
/// For `p = 1` and `p = 2`, `exact_part` holds the power sum `Σ|x_i|^p`; for
/// `p = ∞` it holds `max |x_i|`. For other `p` it holds the norm itself when
/// that is a dyadic known exactly (at most one nonzero entry). `approx` is
/// always the norm.
#[derive(Clone, Debug, PartialEq)]
pub struct NormValue {
    pub exponent: NormExponent,
    pub exact_part: Option<Dyadic>,
    pub approx: f64,
}

/// `Σ|x_i|` for `p = 1`, `Σ x_i²` for `p = 2`.
pub fn power_sum(x: &SparseVec, p: NormExponent) -> Option<Dyadic> {
    match p {
        NormExponent::One => Some(x.iter().map(|(_, c)| c.abs()).sum()),
        NormExponent::Two => Some(x.iter().map(|(_, c)| c.square()).sum()),
        _ => None,
    }
}

pub fn sup_norm(x: &SparseVec) -> Dyadic {
    x.iter()
        .map(|(_, c)| c.abs())
        .max()
        .unwrap_or_else(Dyadic::zero)
}

/// `d^(1/p)` as an `f64`, computed without overflow of intermediate values.
pub(crate) fn root_f64(d: &Dyadic, p: f64) -> f64 {
    if d.is_zero() {
        return 0.0;
    }
    let e = d.floor_log2_abs().expect("nonzero");
    let scaled = d.abs().shift(-e).to_f64();
    let whole = e.div_euclid(p as i64);
    if p.fract() == 0.0 {
        let rem = e.rem_euclid(p as i64) as f64;
        ldexp(scaled.powf(1.0 / p) * (rem / p).exp2(), whole)
    } else {
        (d.log2_abs() / p).exp2()
    }
}

fn neumaier_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

pub fn lp_norm(x: &SparseVec, p: NormExponent) -> NormValue {
    match p {
        NormExponent::One | NormExponent::Two => {
            let exact = power_sum(x, p).expect("exact exponent");
            let approx = root_f64(&exact, p.value());
            NormValue {
                exponent: p,
                exact_part: Some(exact),
                approx,
            }
        }
        NormExponent::Infinity => {
            let m = sup_norm(x);
            NormValue {
                exponent: p,
                approx: m.to_f64(),
                exact_part: Some(m),
            }
        }
        NormExponent::Real(pv) => {
            if x.support_len() <= 1 {
                let m = sup_norm(x);
                return NormValue {
                    exponent: p,
                    approx: m.to_f64(),
                    exact_part: Some(m),
                };
            }
            // Scale by the largest magnitude so every term lies in (0, 2^p).
            let top = x
                .iter()
                .map(|(_, c)| c.floor_log2_abs().expect("stored entries are nonzero"))
                .max()
                .expect("nonempty");
            let s = neumaier_sum(x.iter().map(|(_, c)| c.abs().shift(-top).to_f64().powf(pv)));
            NormValue {
                exponent: p,
                exact_part: None,
                approx: ldexp(s.powf(1.0 / pv), top),
            }
        }
    }
}

/// Outcome of comparing a norm against a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormOrdering {
    Less,
    Equal,
    Greater,
    /// The approximate norm lies within the error bound of the threshold.
    Inconclusive,
}

impl From<Ordering> for NormOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => NormOrdering::Less,
            Ordering::Equal => NormOrdering::Equal,
            Ordering::Greater => NormOrdering::Greater,
        }
    }
}

impl NormOrdering {
    /// `Some(true)` when the norm is at least the threshold.
    pub fn at_least(self) -> Option<bool> {
        match self {
            NormOrdering::Less => Some(false),
            NormOrdering::Equal | NormOrdering::Greater => Some(true),
            NormOrdering::Inconclusive => None,
        }
    }

    pub fn below(self) -> Option<bool> {
        self.at_least().map(|b| !b)
    }
}

/// Compares `‖x‖_p` with `threshold`; exact whenever `exact_part` is present.
pub fn cmp_norm(n: &NormValue, threshold: &Dyadic) -> NormOrdering {
    if threshold.is_negative() {
        return NormOrdering::Greater;
    }
    match (n.exponent, &n.exact_part) {
        (NormExponent::One, Some(s)) | (NormExponent::Infinity, Some(s)) => s.cmp(threshold).into(),
        (NormExponent::Two, Some(s)) => s.cmp(&threshold.square()).into(),
        (NormExponent::Real(_), Some(s)) => s.cmp(threshold).into(),
        _ => {
            let t = threshold.to_f64();
            let tol = 2.0 * APPROX_REL_ERROR * n.approx.max(t);
            if (n.approx - t).abs() <= tol {
                NormOrdering::Inconclusive
            } else if n.approx < t {
                NormOrdering::Less
            } else {
                NormOrdering::Greater
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, Dyadic)]) -> SparseVec {
        SparseVec::from_entries(entries.iter().cloned())
    }

    #[test]
    fn unit_vector_has_norm_one() {
        let e5 = SparseVec::unit(5);
        for p in [1.0, 2.0, f64::INFINITY] {
            let n = lp_norm(&e5, NormExponent::new(p).unwrap());
            assert_eq!(n.approx, 1.0);
            assert_eq!(cmp_norm(&n, &Dyadic::one()), NormOrdering::Equal);
        }
        // A single entry is exact for any exponent; anything wider is not.
        let p = NormExponent::new(3.5).unwrap();
        let n = lp_norm(&e5, p);
        assert_eq!(n.approx, 1.0);
        assert_eq!(cmp_norm(&n, &Dyadic::one()), NormOrdering::Equal);
        let two = v(&[(0, Dyadic::one()), (1, Dyadic::one())]);
        let n = lp_norm(&two, p);
        assert!(n.exact_part.is_none());
        assert_eq!(cmp_norm(&n, &Dyadic::one()), NormOrdering::Greater);
    }

    #[test]
    fn three_four_five() {
        let x = v(&[(0, Dyadic::from_int(3)), (1, Dyadic::from_int(4))]);
        let n = lp_norm(&x, NormExponent::Two);
        assert_eq!(n.exact_part, Some(Dyadic::from_int(25)));
        assert_eq!(n.approx, 5.0);
        assert_eq!(cmp_norm(&n, &Dyadic::from_int(5)), NormOrdering::Equal);
    }

    #[test]
    fn half_and_quarter_l1() {
        let x = v(&[(0, Dyadic::pow2(-1)), (2, Dyadic::pow2(-2))]);
        let n = lp_norm(&x, NormExponent::One);
        assert_eq!(n.exact_part, Some(Dyadic::new(3, -2)));
        let half = v(&[(0, Dyadic::pow2(-1))]);
        assert_eq!(
            cmp_norm(&lp_norm(&half, NormExponent::One), &Dyadic::one()),
            NormOrdering::Less
        );
    }

    #[test]
    fn rejects_small_exponent() {
        assert!(NormExponent::new(0.5).is_err());
        assert!(NormExponent::new(f64::NAN).is_err());
    }

    #[test]
    fn real_exponent_accuracy() {
        let x = v(&[(0, Dyadic::from_int(3)), (1, Dyadic::from_int(4))]);
        let n = lp_norm(&x, NormExponent::new(3.0).unwrap());
        let want = (27.0f64 + 64.0).cbrt();
        assert!(((n.approx - want) / want).abs() < APPROX_REL_ERROR);
        assert_eq!(cmp_norm(&n, &Dyadic::from_int(4)), NormOrdering::Greater);
        assert_eq!(cmp_norm(&n, &Dyadic::from_int(5)), NormOrdering::Less);
    }

    #[test]
    fn huge_and_tiny_coefficients() {
        let x = v(&[(0, Dyadic::pow2(3000)), (1, Dyadic::pow2(3000))]);
        let n = lp_norm(&x, NormExponent::new(2.5).unwrap());
        assert!(n.approx.is_infinite());
        let y = v(&[(0, Dyadic::pow2(-40)), (3, Dyadic::new(-3, -41))]);
        let n = lp_norm(&y, NormExponent::new(1.5).unwrap());
        let want = (2f64.powi(-40).powf(1.5) + (1.5 * 2f64.powi(-40)).powf(1.5)).powf(1.0 / 1.5);
        assert!(((n.approx - want) / want).abs() < APPROX_REL_ERROR);
        let n2 = lp_norm(&y, NormExponent::Two);
        assert!((n2.approx - (1.0f64 + 2.25).sqrt() * 2f64.powi(-40)).abs() < 1e-25);
    }
}
