use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ScalarError;

/// An exact dyadic rational `mantissa * 2^exponent`.
///
/// Values are always canonical: the mantissa is odd, or the value is zero and
/// stored as `0 * 2^0`. Equality and hashing are therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn checked_exp(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("dyadic exponent overflow: {a} + {b}"))
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }

    /// Builds `mantissa * 2^exponent` and brings it into canonical form.
    pub fn new(mantissa: impl Into<BigInt>, exponent: i64) -> Self {
        let mut d = Dyadic {
            mantissa: mantissa.into(),
            exponent,
        };
        d.normalize();
        d
    }

    pub fn from_int(value: i64) -> Self {
        Dyadic::new(value, 0)
    }

    /// `2^exponent`.
    pub fn pow2(exponent: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent,
        }
    }

    /// `sign * 2^exponent` with `sign` taken from `negative`.
    pub fn signed_pow2(negative: bool, exponent: i64) -> Self {
        let m = if negative { -BigInt::one() } else { BigInt::one() };
        Dyadic {
            mantissa: m,
            exponent,
        }
    }

    fn normalize(&mut self) {
        match self.mantissa.trailing_zeros() {
            None => self.exponent = 0,
            Some(0) => {}
            Some(tz) => {
                self.mantissa >>= tz;
                let tz = i64::try_from(tz).expect("trailing zero count fits in i64");
                self.exponent = checked_exp(self.exponent, tz);
            }
        }
    }

    /// Returns the canonical form; a no-op on values built through the public API.
    pub fn normalized(&self) -> Self {
        Dyadic::new(self.mantissa.clone(), self.exponent)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    /// True when the value is `±2^m` for some `m`.
    pub fn is_signed_pow2(&self) -> bool {
        self.mantissa.magnitude().is_one()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiplies by `2^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: checked_exp(self.exponent, k),
        }
    }

    /// The reciprocal, defined only for `±2^m`.
    pub fn recip(&self) -> Option<Self> {
        if !self.is_signed_pow2() {
            return None;
        }
        let e = self
            .exponent
            .checked_neg()
            .unwrap_or_else(|| panic!("dyadic exponent overflow negating {}", self.exponent));
        Some(Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: e,
        })
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// `self^n` for a non-negative integer power.
    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Dyadic::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `floor(log2 |self|)`, or `None` for zero.
    pub fn floor_log2_abs(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let bits = self.mantissa.bits() as i64;
        Some(checked_exp(self.exponent, bits - 1))
    }

    /// Nearest-ish `f64`; saturates to infinity or zero outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let (top, shift) = if bits > 64 {
            let s = bits - 64;
            ((&self.mantissa >> s).to_f64().unwrap_or(0.0), s as i64)
        } else {
            (self.mantissa.to_f64().unwrap_or(0.0), 0)
        };
        ldexp(top, self.exponent.saturating_add(shift))
    }

    /// Approximate `log2 |self|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mantissa.bits();
        let (top, shift) = if bits > 64 {
            let s = bits - 64;
            ((&self.mantissa.abs() >> s).to_f64().unwrap_or(1.0), s as i64)
        } else {
            (self.mantissa.abs().to_f64().unwrap_or(1.0), 0)
        };
        top.log2() + (self.exponent as f64) + shift as f64
    }

    /// Decimal `m@e` literal, e.g. `-3@-2` for -3/4.
    pub fn to_literal(&self) -> String {
        format!("{}@{}", self.mantissa, self.exponent)
    }

    /// Hexadecimal `m@e` literal used by the exact CSV column.
    pub fn to_hex_literal(&self) -> String {
        format!("{:x}@{}", self.mantissa, self.exponent)
    }

    /// Parses `m@e` (decimal mantissa) or a plain decimal such as `0.375`
    /// whose value is an exact dyadic rational.
    pub fn parse_literal(s: &str) -> Result<Self, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::Literal(s.to_string());
        if let Some((m, e)) = s.split_once('@') {
            let m = BigInt::from_str(m.trim()).map_err(|_| bad())?;
            let e = i64::from_str(e.trim()).map_err(|_| bad())?;
            return Ok(Dyadic::new(m, e));
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| bad())?;
        // numer / 10^f = numer / (2^f 5^f); exact only when 5^f divides numer.
        let f = frac_part.len() as u32;
        let five_pow = num_traits::pow(BigInt::from(5u32), f as usize);
        if !(&numer % &five_pow).is_zero() {
            return Err(ScalarError::NotDyadic(s.to_string()));
        }
        let m = numer / five_pow;
        let m = if negative { -m } else { m };
        Ok(Dyadic::new(m, -(f as i64)))
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exponent.min(b.exponent);
        let am = &a.mantissa << ((a.exponent - e) as u64);
        let bm = &b.mantissa << ((b.exponent - e) as u64);
        (am, bm, e)
    }
}

/// `x * 2^e` without intermediate overflow or underflow for moderate `e`.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl FromStr for Dyadic {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dyadic::parse_literal(s)
    }
}

/// Serialized as the decimal literal `m@e`.
impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_literal())
    }
}

impl<'de> serde::Deserialize<'de> for Dyadic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Dyadic::parse_literal(&s).map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (am, bm, _) = Dyadic::aligned(self, other);
        am.cmp(&bm)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (am, bm, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(am + bm, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return -rhs;
        }
        let (am, bm, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(am - bm, e)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // odd * odd is odd, so the product is already canonical.
        Dyadic {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: checked_exp(self.exponent, rhs.exponent),
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}

impl std::iter::Product for Dyadic {
    fn product<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::one(), |acc, x| &acc * &x)
    }
}
