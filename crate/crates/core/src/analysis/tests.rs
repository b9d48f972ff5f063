use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_on, random_sparse};
use super::*;
use crate::operator::Direction;
use crate::report::Status;
use crate::schedule::CPlusSchedule;

fn s0() -> CPlusSchedule {
    CPlusSchedule::from_u64(4, &[(2, 1, 2, 16), (4, 2, 4, 64)]).unwrap()
}

fn s0_op() -> CTypeOperator {
    s0().build_operator(2).unwrap()
}

fn e(i: usize) -> SparseVec {
    SparseVec::unit(i)
}

#[test]
fn projections_and_x_transform() {
    let op = s0_op();
    let x = e(4).add(&e(0));
    assert_eq!(project_block(&op, &x, 1), e(4));
    assert!(project_block(&op, &e(4), 0).is_zero());
    assert_eq!(project(&x, 0..4).add(&project(&x, 4..op.dim())), x);
    assert_eq!(x_transform(&op, &e(19)).unwrap(), e(19));
    assert_eq!(x_transform(&op, &e(4)).unwrap(), e(4));
    assert_eq!(x_transform(&op, &e(5)).unwrap(), e(5).scaled(&Dyadic::from_int(2)));
    assert!(x_transform(&op, &e(op.dim())).is_err());
}

#[test]
fn basis_orbit_never_small() {
    let op = s0_op();
    let scan = orbit_scan(
        &op,
        &e(4),
        64,
        &Dyadic::pow2(-1),
        Direction::Forward,
        NormExponent::Two,
        None,
    )
    .unwrap();
    assert_eq!(scan.report.hits.len(), 65);
    let zero = orbit_scan(&op, &SparseVec::new(), 16, &Dyadic::pow2(-4), Direction::Forward, NormExponent::One, None)
        .unwrap();
    assert!(zero.report.hits.is_empty());
}

#[test]
fn density_examples() {
    let hits: Vec<u64> = (0..10).collect();
    let d = density_stats(&hits, 100, 0).unwrap();
    assert_eq!(d.upper_est(), 1.0);
    assert!(d.upper_at <= 9);
    assert_eq!(d.lower, Ratio::new(10, 101));
    assert_eq!(density_stats(&[], 50, 5).unwrap().upper_est(), 0.0);
    assert!(density_stats(&hits, 100, 100).is_err());
}

#[test]
fn lemma41_recipe_on_unit_vectors() {
    let s = s0();
    let op = s0_op();
    let b = op.blocks();
    for p in [ExactP::One, ExactP::Two] {
        let cfg = Lemma41Config::prop44_recipe(&s, 2, p).unwrap();
        for l in 1..=op.n_max() {
            let report = lemma41_check(&op, &e(b.end(l) - 1), &cfg).unwrap();
            for name in ["(1)", "(2′)", "(3)", "(5)"] {
                let c = report.get(name).unwrap();
                assert!(!c.status.is_failure(), "l = {l}, p = {p:?}: {c:?}");
            }
            assert_eq!(report.conclusion.len(), op.n_max());
        }
    }
}

#[test]
fn lemma41_config_parsing() {
    let s = s0();
    let op = s0_op();
    let cfg = Lemma41Config::from_toml_str("recipe = \"prop44\"\np = 1\n", Some(&s), 2).unwrap();
    assert_eq!(cfg, Lemma41Config::prop44_recipe(&s, 2, ExactP::One).unwrap());
    let text = "C = \"1@-2\"\nbeta = [\"1@-1\", \"1@-2\"]\nN = [2, 4]\nR = [8, 8]\nL = [2, 2]\n";
    let short = Lemma41Config::from_toml_str(text, None, 2).unwrap();
    assert!(matches!(
        lemma41_check(&op, &e(5), &short),
        Err(AnalysisError::Config { .. })
    ));
    assert!(Lemma41Config::from_toml_str("recipe = \"prop44\"\n", None, 2).is_err());
}

#[test]
fn conclusion_ratio_is_exact_infimum() {
    let s = s0();
    let op = s0_op();
    let cfg = Lemma41Config::prop44_recipe(&s, 2, ExactP::One).unwrap();
    let report = lemma41_check(&op, &e(84), &cfg).unwrap();
    // brute force over k in [R_l, R_l + 4 periods]
    let local = local::BlockLocal::new(&op, 3);
    let threshold = Dyadic::pow2(-1);
    let flags: Vec<bool> = local
        .orbit(local.load(&e(84)), 4 * local.period() + 60)
        .iter()
        .map(|v| ExactP::One.sum(v) >= threshold)
        .collect();
    let r = cfg.r[2] as usize;
    let mut count = flags[..r].iter().filter(|&&f| f).count() as u64;
    let mut best = f64::INFINITY;
    for (k, &f) in flags.iter().enumerate().skip(r) {
        count += f as u64;
        best = best.min(count as f64 / (k + 1) as f64);
    }
    let period = local.period();
    let limit = flags[..period].iter().filter(|&&f| f).count() as f64 / period as f64;
    let c = &report.conclusion[2];
    assert_eq!(c.l, 3);
    assert!((c.value - best.min(limit)).abs() < 1e-12, "{c:?} vs {best}, {limit}");
}

#[test]
fn prop43_examples() {
    let op = s0_op();
    let b = op.blocks();
    let r = prop43_ratio(&op, &e(4), 2, 128, 4, 52, 60, ExactP::Two).unwrap();
    assert_eq!(r.lhs_ratio, 1.0);
    assert!(r.holds);
    let r = prop43_ratio(&op, &e(b.start(2)), 2, 128, 4, 52, 60, ExactP::One).unwrap();
    assert!(r.holds, "{r:?}");
    assert!(prop43_ratio(&op, &e(20), 2, 128, 3, 52, 60, ExactP::One).is_err());
}

#[test]
fn prop42_on_s0() {
    let op = s0_op();
    let c = prefix_constants(&op);
    assert_eq!(c[1], Dyadic::pow2(-2));
    assert_eq!(c[2], Dyadic::pow2(-4));
    assert_eq!(c[3], Dyadic::pow2(-4));
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10 {
        let x = random_sparse(&mut rng, 0..op.dim(), 0.05);
        let report = prop42_check(&op, &x, None, ExactP::Two, 3).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}

#[test]
fn certificate_desk_example() {
    let s = s0();
    let op = s0_op();
    let a = Dyadic::from_int(2);
    let r = prop32_construct_z(&s, &op, &e(3), &Dyadic::pow2(-1), 2, &a, None, ExactP::Two).unwrap();
    assert_eq!(r.k0, 0);
    assert_eq!(r.z, e(21).scaled(&Dyadic::from_int(-8)));
    let two = op.apply_power(&r.z, 2, Direction::Inverse).unwrap();
    assert_eq!(two, e(3).add(&e(83).scaled(&Dyadic::from_int(16))));
    assert_eq!(r.n, 10);
    assert_eq!(r.tail, e(75).scaled(&Dyadic::from_int(4)));
    assert!(r.identity && r.y_support);
    assert_eq!(r.constants.log2_big_c, f64::NEG_INFINITY);

    let zero = prop32_construct_z(&s, &op, &SparseVec::new(), &Dyadic::pow2(-1), 2, &a, None, ExactP::One)
        .unwrap();
    assert!(zero.z.is_zero() && zero.identity && zero.certificate_holds());
}

#[test]
fn certificate_random_identity() {
    let s = s0();
    let op = s0_op();
    let a = Dyadic::from_int(2);
    let eps = Dyadic::pow2(-3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let x = random_on(&mut rng, &[2, 3, 18, 19], 0.6);
        let r = prop32_construct_z(&s, &op, &x, &eps, 2, &a, None, ExactP::Two).unwrap();
        assert!(r.identity && r.y_support, "{x:?}");
        let t = thm31_verify(&op, Direction::Inverse, &r.z, r.n, &x, &eps, &r.alpha, ExactP::Two).unwrap();
        assert_eq!((t.z_small, t.approximation), (r.z_small, r.approximation));
    }
    // too far from the block end for δ⁽²⁾ = 2
    assert!(prop32_construct_z(&s, &op, &e(17), &eps, 2, &a, None, ExactP::Two).is_err());
    assert!(prop32_construct_z(&s, &op, &e(3), &eps, 3, &a, None, ExactP::Two).is_err());
}

#[test]
fn thm31_trivial_cases() {
    let op = s0_op();
    let alpha = Alpha::new(Dyadic::one(), Dyadic::from_int(3)).unwrap();
    let x = e(5);
    let t = thm31_verify(&op, Direction::Forward, &x, 32, &x, &Dyadic::pow2(-1), &alpha, ExactP::One).unwrap();
    assert!(t.approximation && !t.z_small);
    let t = thm31_verify(&op, Direction::Forward, &SparseVec::new(), 32, &x, &Dyadic::pow2(-1), &alpha, ExactP::One)
        .unwrap();
    assert!(t.z_small && !t.approximation);
    assert_eq!(t.first_bad_k, Some(0));
    assert_eq!(alpha.floor_times(32), 10);
    assert!(Alpha::new(Dyadic::from_int(2), Dyadic::one()).is_err());
}

#[test]
fn statuses_are_named() {
    assert_eq!(Status::HorizonLimited.as_str(), "horizon-limited");
}
