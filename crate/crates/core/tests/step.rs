mod common;

use common::{complex_in, grid_system, min_distance, offset};
use gek::iteration::StepWorkspace;
use gek::{
    ek_step, gek_step, s_value, solve, ApproximationVector, Complex64, RootSystem, SolveConfig,
    UpdateMode,
};
use proptest::prelude::*;

fn perturbed(roots: &[Complex64], offsets: &[Complex64]) -> ApproximationVector {
    ApproximationVector::new(roots.iter().zip(offsets).map(|(x, d)| x + d).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unit_multiplicities_reduce_to_simple_step(
        roots in proptest::collection::vec(complex_in(3.0), 1..=8),
        offsets in proptest::collection::vec(offset(0.1), 8),
    ) {
        prop_assume!(min_distance(&roots) >= 0.5);
        let n = roots.len();
        let ones = vec![1; n];
        let poly = RootSystem::new(roots.clone(), ones.clone()).unwrap().to_polynomial().unwrap();
        let approx = perturbed(&roots, &offsets);
        let config = SolveConfig::default();
        let g = gek_step(&poly, &approx, &ones, &config, None).unwrap();
        let e = ek_step(&poly, &approx, &config, None).unwrap();
        for (a, b) in g.iter().zip(e.iter()) {
            prop_assert!((a - b).norm() <= 1e-10 * b.norm(), "{a} vs {b}");
        }
    }

    #[test]
    fn s_value_matches_partial_fractions(
        rs in grid_system(5, 3),
        offsets in proptest::collection::vec(offset(0.2), 5),
        pick in any::<prop::sample::Index>(),
    ) {
        let m = rs.len();
        let poly = rs.to_polynomial().unwrap();
        let approx = perturbed(rs.roots(), &offsets);
        prop_assume!(approx.iter().zip(rs.roots()).all(|(x, r)| (x - r).norm() > 1e-6));
        let i = pick.index(m);
        let alphas = rs.multiplicities();
        let xi = approx[i];
        let mut expected = Complex64::new(0.0, 0.0);
        for j in 0..m {
            expected += f64::from(alphas[j]) / (xi - rs.roots()[j]);
            if j != i {
                expected -= f64::from(alphas[j]) / (xi - approx[j]);
            }
        }
        let s = s_value(&poly, &approx, alphas, i, &SolveConfig::default()).unwrap();
        prop_assert!((s - expected).norm() <= 1e-10 * expected.norm(), "{s} vs {expected}");
    }

    #[test]
    fn total_step_ignores_processing_order(
        rs in grid_system(5, 3),
        offsets in proptest::collection::vec(offset(0.1), 5),
    ) {
        let poly = rs.to_polynomial().unwrap();
        let approx = perturbed(rs.roots(), &offsets);
        let alphas = rs.multiplicities();
        let config = SolveConfig::default();
        let frozen = vec![false; rs.len()];
        let stepped = gek_step(&poly, &approx, alphas, &config, None).unwrap();
        let ws = StepWorkspace::generalized(&poly, &approx, alphas, &frozen, &config).unwrap();
        let mut reverse = approx.to_vec();
        for i in (0..rs.len()).rev() {
            reverse[i] = ws.generalized_update(&approx, alphas, i).unwrap();
        }
        prop_assert_eq!(stepped.to_vec(), reverse);
    }

    #[test]
    fn frozen_components_are_bitwise_preserved(
        rs in grid_system(5, 3),
        offsets in proptest::collection::vec(offset(0.1), 5),
        mask in proptest::collection::vec(any::<bool>(), 5),
        serial in any::<bool>(),
    ) {
        let poly = rs.to_polynomial().unwrap();
        let approx = perturbed(rs.roots(), &offsets);
        let frozen = &mask[..rs.len()];
        let config = SolveConfig {
            update_mode: if serial { UpdateMode::Serial } else { UpdateMode::TotalStep },
            ..SolveConfig::default()
        };
        let next = gek_step(&poly, &approx, rs.multiplicities(), &config, Some(frozen)).unwrap();
        for i in (0..rs.len()).filter(|&i| frozen[i]) {
            prop_assert_eq!(next[i].re.to_bits(), approx[i].re.to_bits());
            prop_assert_eq!(next[i].im.to_bits(), approx[i].im.to_bits());
        }
    }
}

#[test]
fn reference_example_contracts_quartically() {
    let rs = gek::example::root_system();
    let poly = rs.to_polynomial().unwrap();
    let config = SolveConfig {
        step_tolerance: gek::example::STEP_TOLERANCE,
        ..SolveConfig::default()
    };
    let report = solve(
        &poly,
        rs.multiplicities(),
        &gek::example::initial(),
        &config,
    )
    .unwrap();
    let errors: Vec<f64> = report
        .trace
        .records
        .iter()
        .map(|r| {
            r.approximations
                .iter()
                .zip(rs.roots())
                .map(|(x, root)| (x - root).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let (u, v): (Vec<f64>, Vec<f64>) = (0..2).map(|k| (errors[k].ln(), errors[k + 1].ln())).unzip();
    let slope = (v[1] - v[0]) / (u[1] - u[0]);
    assert!(
        (3.5..=4.5).contains(&slope),
        "slope {slope} from {errors:?}"
    );
}
