use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

/// The six breakpoints of the seven-run weight profile of one level,
/// clamped into `i128` so that comparisons with a `u64` index stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Breakpoints {
    pub size: i128,
    cuts: [i128; 6],
}

// log2 of the weight in each run, in listed order.
const RUN_EXPONENTS: [i8; 7] = [-1, 1, 0, -1, 0, 1, 0];

fn clamp(x: BigInt) -> i128 {
    x.to_i128().unwrap_or(if x.sign() == num_bigint::Sign::Minus {
        i128::MIN
    } else {
        i128::MAX
    })
}

impl Breakpoints {
    pub fn new(delta: &BigUint, eta: &BigUint, size: &BigUint) -> Self {
        let (d, e, s) = (
            BigInt::from(delta.clone()),
            BigInt::from(eta.clone()),
            BigInt::from(size.clone()),
        );
        let cuts = [
            d.clone(),
            &d * 2,
            &s - &d * 2 - &e * 2,
            &s - &d - &e * 2,
            &s - &d - &e,
            &s - &e,
        ]
        .map(clamp);
        Breakpoints {
            size: clamp(s),
            cuts,
        }
    }

    /// Index of the run containing `i`, first match wins.
    fn run(&self, i: i128) -> usize {
        let c = &self.cuts;
        if i <= c[0] {
            0
        } else if i <= c[1] {
            1
        } else if i < c[2] {
            2
        } else if i < c[3] {
            3
        } else if i < c[4] {
            4
        } else if i < c[5] {
            5
        } else {
            6
        }
    }

    /// `log2 w_i` for `1 <= i < Δ`, or `None` out of range.
    pub fn exponent(&self, i: u64) -> Option<i8> {
        let i = i as i128;
        if i < 1 || i >= self.size {
            return None;
        }
        Some(RUN_EXPONENTS[self.run(i)])
    }
}
