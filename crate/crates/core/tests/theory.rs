use gek::theory::GuaranteeFailure;
use gek::{
    error_bound, estimate_order, solve, theorem_check, ApproximationVector, Complex64, Error,
    RootSystem, SolveConfig, SolveStatus,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn error_bound_recursion(c in 1e-3f64..10.0, q in 0.05f64..0.95, k in 0u32..3) {
        let next = error_bound(c, q, k + 1);
        let recursed = error_bound(c, q, k).powi(4) / c.powi(3);
        prop_assume!(next > 1e-250);
        prop_assert!((next - recursed).abs() <= 1e-12 * next, "{next} vs {recursed}");
    }
}

#[test]
fn lhs_increases_with_radius() {
    let rs = gek::example::root_system();
    let d = rs.separation().unwrap();
    let mut previous = 0.0;
    for step in 1..=100 {
        let c = d / 2.0 * f64::from(step) / 101.0;
        let lhs = theorem_check(&rs, c, 0.5).unwrap().lhs;
        assert!(lhs > previous, "lhs({c}) = {lhs} after {previous}");
        previous = lhs;
    }
}

#[test]
fn guarantee_failures_are_reported() {
    let rs = gek::example::root_system();
    let wide = theorem_check(&rs, 1.0, 0.5).unwrap();
    assert!(!wide.guaranteed);
    assert_eq!(wide.failures, vec![GuaranteeFailure::RadiusTooLarge]);
    let flat = theorem_check(&rs, 0.01, 1.0).unwrap();
    assert_eq!(flat.failures, vec![GuaranteeFailure::RatioOutOfRange]);
    let lone = RootSystem::from_real(&[1.0], &[4]).unwrap();
    assert_eq!(
        theorem_check(&lone, 0.01, 0.5),
        Err(Error::DegenerateSystem)
    );
}

#[test]
fn guaranteed_starts_respect_the_bound() {
    let rs = gek::example::root_system();
    let (c, q) = (0.01, 0.5);
    assert!(theorem_check(&rs, c, q).unwrap().guaranteed);
    let poly = rs.to_polynomial().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..50 {
        let start: Vec<Complex64> = rs
            .roots()
            .iter()
            .map(|x| {
                let r = c * q * rng.random_range(0.0..1.0);
                x + Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        let initial = ApproximationVector::new(start).unwrap();
        let report = solve(
            &poly,
            rs.multiplicities(),
            &initial,
            &SolveConfig::default(),
        )
        .unwrap();
        assert_eq!(report.status, SolveStatus::Converged);
        let records = &report.trace.records;
        for k in 1..=2u32 {
            let record = &records[(k as usize).min(records.len() - 1)];
            for (x, root) in record.approximations.iter().zip(rs.roots()) {
                let e = (x - root).norm();
                assert!(e < error_bound(c, q, k), "k = {k}: {e}");
            }
        }
    }
}

#[test]
fn order_of_the_reference_run() {
    let rs = gek::example::root_system();
    let config = SolveConfig {
        step_tolerance: gek::example::STEP_TOLERANCE,
        ..SolveConfig::default()
    };
    let poly = rs.to_polynomial().unwrap();
    let report = solve(
        &poly,
        rs.multiplicities(),
        &gek::example::initial(),
        &config,
    )
    .unwrap();
    let order = estimate_order(&report.trace, &rs).unwrap();
    assert_eq!(order.len(), 3);
    assert!((order[0].unwrap() - 3.81).abs() < 0.01);
    // the first step of the reference run is far from asymptotic for the simple root
    assert!((order[1].unwrap() - 2.62).abs() < 0.01);
    // the triple root's last error sits under its noise floor
    assert_eq!(order[2], None);
}
