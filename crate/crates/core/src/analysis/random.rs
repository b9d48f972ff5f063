//! Seeded random inputs for the randomized checks.

use std::ops::Range;

use rand::Rng;

use crate::scalar::{Dyadic, SparseVec};

/// A nonzero dyadic `m·2^e` with `0 < |m| < 256` and `|e| <= 6`.
pub fn random_dyadic<R: Rng + ?Sized>(rng: &mut R) -> Dyadic {
    let m: i64 = loop {
        let m = rng.gen_range(-255..=255);
        if m != 0 {
            break m;
        }
    };
    Dyadic::new(m, rng.gen_range(-6..=6))
}

/// Random vector on `range`, each coordinate present with probability
/// `density`; never zero when the range is nonempty.
pub fn random_sparse<R: Rng + ?Sized>(rng: &mut R, range: Range<usize>, density: f64) -> SparseVec {
    let mut x = SparseVec::new();
    for i in range.clone() {
        if rng.gen_bool(density) {
            x.set(i, random_dyadic(rng));
        }
    }
    if x.is_zero() && !range.is_empty() {
        let i = rng.gen_range(range);
        x.set(i, random_dyadic(rng));
    }
    x
}

/// Random vector supported on the given coordinates.
pub fn random_on<R: Rng + ?Sized>(rng: &mut R, coords: &[usize], density: f64) -> SparseVec {
    let mut x = SparseVec::new();
    for &i in coords {
        if rng.gen_bool(density) {
            x.set(i, random_dyadic(rng));
        }
    }
    if x.is_zero() && !coords.is_empty() {
        let i = coords[rng.gen_range(0..coords.len())];
        x.set(i, random_dyadic(rng));
    }
    x
}
