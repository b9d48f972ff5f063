use num_bigint::{BigInt, BigUint};

use super::*;
use crate::report::Status;

fn s0() -> CPlusSchedule {
    CPlusSchedule::from_toml_str(include_str!("../../schedules/s0.toml")).unwrap()
}

fn s0_k4() -> CPlusSchedule {
    CPlusSchedule::from_toml_str(include_str!("../../schedules/s0_k4.toml")).unwrap()
}

#[test]
fn profile_values_level_two() {
    let s = s0();
    assert_eq!(s.weight_profile(2, 1).unwrap(), Dyadic::pow2(-1));
    assert_eq!(s.weight_profile(2, 3).unwrap(), Dyadic::pow2(1));
    // i = 2δ belongs to the run of twos
    assert_eq!(s.weight_profile(2, 4).unwrap(), Dyadic::pow2(1));
    assert_eq!(s.weight_profile(2, 5).unwrap(), Dyadic::one());
    assert_eq!(s.weight_profile(2, 53).unwrap(), Dyadic::pow2(-1));
    assert_eq!(s.weight_profile(2, 63).unwrap(), Dyadic::one());
    assert_eq!(s.inverse_weight_profile(2, 1).unwrap(), Dyadic::pow2(1));
    assert_eq!(s.inverse_weight_profile(2, 3).unwrap(), Dyadic::pow2(-1));
    assert!(s.weight_profile(2, 0).is_err());
    assert!(s.weight_profile(2, 64).is_err());
    assert!(s.weight_profile(3, 1).is_err());
}

#[test]
fn profile_telescopes_and_suffixes_dominate_one() {
    let s = s0_k4();
    for k in 1..=4 {
        let size = s.level(k).unwrap().size.to_u64().unwrap();
        let mut prod = Dyadic::one();
        let mut suffix = Dyadic::one();
        for i in (1..size).rev() {
            let w = s.weight_profile(k, i).unwrap();
            assert_eq!(&w * &s.inverse_weight_profile(k, i).unwrap(), Dyadic::one());
            prod = &prod * &w;
            assert!(suffix >= Dyadic::one(), "k = {k}, i = {i}");
            suffix = &suffix * &w;
        }
        assert_eq!(prod, Dyadic::one(), "k = {k}");
        assert_eq!(validate::log2_block_product(s.level(k).unwrap()), 0.into());
    }
}

#[test]
fn s0_block_structure() {
    let s = s0();
    let b = s.block_structure(2).unwrap();
    assert_eq!(b.boundaries(), &[0, 4, 20, 84, 148]);
    assert_eq!(b.phi(3), 1);
    assert_eq!(b.phi(2), 0);
    let op = s.build_operator(2).unwrap();
    assert_eq!(op.v(2), &Dyadic::pow2(-4));
    assert_eq!(op.v(3), &Dyadic::pow2(-4));
    assert_eq!(op.v(1), &Dyadic::pow2(-2));
    for n in 0..=3 {
        assert_eq!(op.big_w(n), &Dyadic::one());
    }
    assert!(op.smallness_violations().is_empty());
    assert_eq!(s0_k4().block_structure(4).unwrap().dim(), 9364);
}

#[test]
fn s0_validation() {
    let s = s0();
    let a = Dyadic::from_int(2);
    assert!(validate_schedule(&s, ValidationMode::Invertible, 2, &a).passed());
    assert!(validate_schedule(&s, ValidationMode::Structural, 2, &a).passed());
    let r = validate_schedule(&s, ValidationMode::NotUfhc, 2, &a);
    let c = r.get("Δ⁽ᵏ⁾ ≤ η⁽ᵏ⁺¹⁾").unwrap();
    assert_eq!(c.status, Status::Fail);
    assert_eq!(c.witness, "k = 1: 16 > 4");
    // limit conditions never report a plain pass
    let r = validate_schedule(&s0_k4(), ValidationMode::All, 2, &a);
    for c in &r.conditions {
        if c.name.contains('→') || c.name.starts_with('Σ') {
            assert_ne!(c.status, Status::Pass, "{}", c.name);
        }
    }
}

#[test]
fn parser_rejects_bad_schedules() {
    let bad = "K = 2\nDelta0 = 4\ntau = [4, 4]\ndelta = [1, 2]\neta = [2, 4]\nDelta = [16, 64]\n";
    match CPlusSchedule::from_toml_str(bad) {
        Err(ScheduleError::Condition { name, k }) => {
            assert_eq!(name, "τ⁽ᵏ⁾ strictly increasing");
            assert_eq!(k, 2);
        }
        other => panic!("unexpected {other:?}"),
    }
    let short = "K = 2\nDelta0 = 4\ntau = [2]\ndelta = [1, 2]\neta = [2, 4]\nDelta = [16, 64]\n";
    assert!(matches!(
        CPlusSchedule::from_toml_str(short),
        Err(ScheduleError::Parse(_))
    ));
    assert!(CPlusSchedule::from_toml_str("K = 1\nbogus = 3\n").is_err());
    let base = "K = 1\nDelta0 = 4\ntau = [2]\ndelta = [1]\neta = [2]\nDelta = [16]\n";
    assert!(CPlusSchedule::from_toml_str(&format!("{base}weights0 = \"unit\"\n")).is_ok());
    assert!(matches!(
        CPlusSchedule::from_toml_str(&format!("{base}weights0 = \"ramp\"\n")),
        Err(ScheduleError::Parse(_))
    ));
}

#[test]
fn divisibility_failure_is_reported_and_rejected() {
    let s = CPlusSchedule::from_u64(4, &[(2, 1, 2, 20)]).unwrap();
    let r = validate_schedule(&s, ValidationMode::Structural, 2, &Dyadic::one());
    assert!(!r.passed());
    assert!(matches!(
        s.build_operator(1),
        Err(ScheduleError::Operator(OperatorError::Divisibility { .. }))
    ));
}

#[test]
fn theorem45_exponents() {
    let s = CPlusSchedule::theorem45(1, 3, Representation::Log2).unwrap();
    let l = s.level(1).unwrap();
    assert_eq!(
        [&l.tau, &l.delta, &l.eta, &l.size],
        [2u32, 4, 8, 128].map(BigUint::from).each_ref()
    );
    assert_eq!(s.delta0(), &BigUint::from(64u32));
    for k in 2..=3 {
        let (a, b) = (s.level(k - 1).unwrap(), s.level(k).unwrap());
        let gap = b.size.bits() - a.size.bits();
        assert_eq!(gap, 2 * (2 * k as u64 - 1) + 1);
    }
    assert!(CPlusSchedule::theorem45(1, 2, Representation::Materialized).is_ok());
    assert!(matches!(
        CPlusSchedule::theorem45(1, 3, Representation::Materialized),
        Err(ScheduleError::Budget(_))
    ));
}

#[test]
fn file_roundtrip() {
    let s = CPlusSchedule::theorem45(2, 5, Representation::Log2).unwrap();
    let text = s.to_toml_string().unwrap();
    assert!(text.contains("log2 = true"));
    assert_eq!(CPlusSchedule::from_toml_str(&text).unwrap(), s);
    let plain = s0();
    assert_eq!(
        CPlusSchedule::from_toml_str(&plain.to_toml_string().unwrap()).unwrap(),
        plain
    );
}

#[test]
fn shifted_comparison() {
    let b = |x: u64| BigUint::from(x);
    assert!(validate::le_shifted(&b(8), &b(1), &3.into()));
    assert!(!validate::le_shifted(&b(9), &b(1), &3.into()));
    assert!(validate::le_shifted(&b(1), &b(8), &(-3).into()));
    assert!(!validate::le_shifted(&b(2), &b(8), &(-3).into()));
    let huge = BigInt::from(10).pow(30);
    assert!(validate::le_shifted(&b(u64::MAX), &b(1), &huge));
    assert!(!validate::le_shifted(&b(1), &b(u64::MAX), &-huge));
}
