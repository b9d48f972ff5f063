//! Hand-checked values on the small schedule S₀.

mod common;

use common::*;
use ctype_core::operator::{truncated_matrix_oracle, CTypeOperator, Direction, OperatorError};
use ctype_core::scalar::{cmp_norm, lp_norm, NormOrdering};
use ctype_core::schedule::{validate_schedule, Representation, ValidationMode};
use ctype_core::{CPlusSchedule, Dyadic, NormExponent, SparseVec};

#[test]
fn dyadic_arithmetic() {
    assert_eq!(&Dyadic::one() + &Dyadic::one(), d(1, 1));
    assert_eq!(&d(-1, -2) * &d(1, 4), d(-1, 2));
    let x = d(-37, -5);
    assert_eq!(&x - &x, Dyadic::zero());
    assert_eq!(Dyadic::zero().exponent(), 0);
    assert_eq!(d(12, 0).mantissa(), &3.into());
}

#[test]
fn norms() {
    let x = e(0).scaled(&d(3, 0)).add(&e(1).scaled(&d(4, 0)));
    assert_eq!(lp_norm(&x, NormExponent::Two).exact_part, Some(d(25, 0)));
    assert_eq!(cmp_norm(&lp_norm(&x, NormExponent::Two), &d(5, 0)), NormOrdering::Equal);
    let y = scaled(1, -1, 0).add(&scaled(1, -2, 2));
    assert_eq!(lp_norm(&y, NormExponent::One).exact_part, Some(d(3, -2)));
    assert_eq!(cmp_norm(&lp_norm(&scaled(1, -1, 0), NormExponent::One), &Dyadic::one()), NormOrdering::Less);
    for p in [NormExponent::One, NormExponent::Two, NormExponent::Infinity, NormExponent::new(3.5).unwrap()] {
        assert_eq!(cmp_norm(&lp_norm(&e(5), p), &Dyadic::one()), NormOrdering::Equal, "{p}");
    }
}

#[test]
fn operator_action() {
    let op = s0_op();
    let f = |x: SparseVec| op.apply_forward(&x).unwrap();
    let g = |x: SparseVec| op.apply_inverse(&x).unwrap();
    assert_eq!(f(e(3)), scaled(-1, 0, 0));
    assert_eq!(f(e(4)), scaled(1, -1, 5));
    assert_eq!(f(e(19)), scaled(1, -2, 0).sub(&e(4)));
    assert_eq!(g(e(0)), scaled(-1, 0, 3));
    assert_eq!(g(e(5)), scaled(2, 0, 4));
    assert_eq!(g(e(4)), scaled(-1, -2, 3).sub(&e(19)));
    for n in 0..=op.n_max() {
        assert_eq!(op.big_w(n), &Dyadic::one());
    }
}

#[test]
fn powers_and_chains() {
    let op = s0_op();
    assert_eq!(op.apply_power(&e(4), 32, Direction::Forward).unwrap(), e(4));
    assert_eq!(op.apply_naive(&e(4), 32, Direction::Inverse).unwrap(), e(4));
    let x = e(7).add(&scaled(-3, 2, 90));
    assert_eq!(op.apply_power(&x, 0, Direction::Inverse).unwrap(), x);
    assert_eq!(op.phi_chain(1).chain, vec![1, 0]);
    assert_eq!(op.phi_chain(3).chain, vec![3, 1, 0]);
    assert_eq!(op.phi_chain(0).chain, vec![0]);
    assert_eq!(op.suffix_weight_product(1, 19).unwrap(), Dyadic::one());
    assert_eq!(op.suffix_weight_product(1, 4).unwrap(), Dyadic::one());
    assert_eq!(op.suffix_weight_product(1, 5).unwrap(), d(2, 0));
}

#[test]
fn oracle_small_truncations() {
    let op = s0_op();
    let one = truncated_matrix_oracle(&op, 1).unwrap();
    assert_eq!(one.apply(&e(0)).unwrap(), scaled(-1, 0, 3));
    let two = truncated_matrix_oracle(&op, 2).unwrap();
    assert_eq!(two.apply(&e(4)).unwrap(), op.apply_inverse(&e(4)).unwrap());
    for k in 0..20 {
        let fwd = op.apply_forward(&e(k)).unwrap();
        assert_eq!(two.apply(&fwd).unwrap(), e(k));
    }
}

#[test]
fn schedule_shape() {
    let s = s0();
    let b = s.block_structure(2).unwrap();
    assert_eq!(b.boundaries(), &[0, 4, 20, 84, 148]);
    assert_eq!(b.phi(3), 1);
    assert_eq!(s.v(2).unwrap(), d(1, -4));
    assert_eq!(s.weight_profile(2, 1).unwrap(), d(1, -1));
    assert_eq!(s.weight_profile(2, 3).unwrap(), d(2, 0));
    assert_eq!(s.weight_profile(2, 53).unwrap(), d(1, -1));
    assert_eq!(s.inverse_weight_profile(2, 1).unwrap(), d(2, 0));
    assert_eq!(s.inverse_weight_profile(2, 3).unwrap(), d(1, -1));
    for i in 1..64 {
        let w = s.weight_profile(2, i).unwrap();
        assert_eq!(&w * &s.inverse_weight_profile(2, i).unwrap(), Dyadic::one());
    }
}

#[test]
fn schedule_errors() {
    let bad = CPlusSchedule::from_u64(4, &[(2, 1, 2, 12), (4, 2, 4, 64)]).unwrap();
    assert!(matches!(
        bad.build_operator(2),
        Err(ctype_core::schedule::ScheduleError::Operator(OperatorError::Divisibility { n: 1, .. }))
    ));
    let mut params = s0().materialize(2).unwrap();
    params.w[5] = Dyadic::zero();
    assert_eq!(
        CTypeOperator::new(&params, 3).unwrap_err(),
        OperatorError::ZeroWeight { k: 5 }
    );
}

#[test]
fn validation_modes() {
    let s = s0();
    let a = d(4, 0);
    assert!(validate_schedule(&s, ValidationMode::Invertible, 2, &a).passed());
    assert!(validate_schedule(&s, ValidationMode::Structural, 2, &a).passed());
    let r = validate_schedule(&s, ValidationMode::NotUfhc, 2, &a);
    let bad: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
    assert!(bad.contains(&"Δ⁽ᵏ⁾ ≤ η⁽ᵏ⁺¹⁾"), "{bad:?}");
}

#[test]
fn theorem45_exponents() {
    let s = CPlusSchedule::theorem45(1, 1, Representation::Log2).unwrap();
    let lv = s.level(1).unwrap();
    let log2 = |x: &num_bigint::BigUint| x.bits() - 1;
    assert_eq!(
        (log2(&lv.tau), log2(&lv.delta), log2(&lv.eta), log2(&lv.size)),
        (1, 2, 3, 7)
    );
    // consecutive Δ exponents differ by 2C(2k-1) + 1
    let s = CPlusSchedule::theorem45(2, 6, Representation::Log2).unwrap();
    for k in 2..=6u64 {
        let gap = s.level(k as usize).unwrap().size.bits() - s.level(k as usize - 1).unwrap().size.bits();
        assert_eq!(gap, 2 * 2 * (2 * k - 1) + 1);
    }
}
