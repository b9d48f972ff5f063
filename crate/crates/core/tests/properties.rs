//! Algebraic invariants under random inputs.

mod common;

use common::*;
use ctype_core::analysis::{density_stats, x_transform};
use ctype_core::operator::Direction;
use ctype_core::scalar::{power_sum, sup_norm};
use ctype_core::{CTypeOperator, Dyadic, NormExponent, SparseVec};
use proptest::prelude::*;
use std::sync::OnceLock;

fn op() -> &'static CTypeOperator {
    static OP: OnceLock<CTypeOperator> = OnceLock::new();
    OP.get_or_init(s0_op)
}

fn dyadic() -> impl Strategy<Value = Dyadic> {
    (-(1i64 << 40)..(1i64 << 40), -60i64..60).prop_map(|(m, e)| Dyadic::new(m, e))
}

fn nonzero_dyadic() -> impl Strategy<Value = Dyadic> {
    dyadic().prop_filter("nonzero", |d| !d.is_zero())
}

fn vector(dim: usize) -> impl Strategy<Value = SparseVec> {
    prop::collection::btree_map(0..dim, nonzero_dyadic(), 0..8)
        .prop_map(SparseVec::from_entries)
}

proptest! {
    #[test]
    fn ring_laws(a in dyadic(), b in dyadic(), c in dyadic()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert!(a.is_zero() || a.mantissa().bit(0));
    }

    #[test]
    fn ordering_matches_f64(a in dyadic(), b in dyadic()) {
        if a.to_f64() < b.to_f64() {
            prop_assert!(a < b);
        }
    }

    #[test]
    fn literal_roundtrip(a in dyadic()) {
        prop_assert_eq!(Dyadic::parse_literal(&a.to_literal()).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Dyadic>(&json).unwrap(), a);
    }

    #[test]
    fn vector_json_roundtrip(x in vector(1000)) {
        prop_assert_eq!(SparseVec::from_json(&x.to_json()).unwrap(), x);
    }

    #[test]
    fn linearity(x in vector(148), y in vector(148), a in dyadic(), b in dyadic()) {
        let op = op();
        for dir in [Direction::Forward, Direction::Inverse] {
            let mut lhs_in = x.scaled(&a);
            lhs_in.add_scaled(&b, &y);
            let lhs = op.apply(&lhs_in, dir).unwrap();
            let mut rhs = op.apply(&x, dir).unwrap().scaled(&a);
            rhs.add_scaled(&b, &op.apply(&y, dir).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn power_matches_iteration(x in vector(148), j in 0u64..=64) {
        let op = op();
        for dir in [Direction::Forward, Direction::Inverse] {
            prop_assert_eq!(
                op.apply_power(&x, j, dir).unwrap(),
                op.apply_naive(&x, j, dir).unwrap()
            );
        }
        let there = op.apply_power(&x, j, Direction::Forward).unwrap();
        prop_assert_eq!(op.apply_power(&there, j, Direction::Inverse).unwrap(), x);
    }

    #[test]
    fn norm_chain(x in vector(64)) {
        // ‖x‖∞ ≤ ‖x‖₂ ≤ ‖x‖₁, compared on squares
        let sup = sup_norm(&x);
        let two = power_sum(&x, NormExponent::Two).unwrap();
        let one = power_sum(&x, NormExponent::One).unwrap();
        prop_assert!(sup.square() <= two);
        prop_assert!(two <= one.square());
    }

    #[test]
    fn x_transform_dominates(x in vector(148)) {
        let op = op();
        let big = x_transform(op, &x).unwrap();
        for (i, c) in x.iter() {
            prop_assert!(c.abs() <= big.get(i).abs());
        }
    }

    #[test]
    fn density_monotone(
        base in prop::collection::btree_set(0u64..500, 0..200),
        extra in prop::collection::btree_set(0u64..500, 0..50),
        warmup in 0u64..100,
    ) {
        let small: Vec<u64> = base.iter().copied().collect();
        let large: Vec<u64> = base.union(&extra).copied().collect();
        let a = density_stats(&small, 499, warmup).unwrap();
        let b = density_stats(&large, 499, warmup).unwrap();
        prop_assert!(a.lower_est() <= b.lower_est());
        prop_assert!(a.upper_est() <= b.upper_est());
        prop_assert!(b.lower_est() <= b.upper_est());
    }
}
