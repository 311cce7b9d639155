mod common;

use common::{c, complex_in, grid_system, min_distance};
use gek::{MonicPolynomial, RootSystem};
use proptest::prelude::*;

proptest! {
    #[test]
    fn derivative_matches_central_difference(
        coefficients in proptest::collection::vec(complex_in(10.0), 1..=10),
        z in complex_in(2.0),
    ) {
        let p = MonicPolynomial::new(coefficients).unwrap();
        let h = 1e-6 * z.norm().max(1.0);
        let step = c(h, 0.0);
        let (_, derivative) = p.eval_with_derivative(z).unwrap();
        let (plus, _) = p.eval_with_derivative(z + step).unwrap();
        let (minus, _) = p.eval_with_derivative(z - step).unwrap();
        let difference = (plus - minus) / (2.0 * h);
        let err = (difference - derivative).norm() / derivative.norm().max(1.0);
        prop_assert!(err <= 1e-6, "relative error {err}");
    }

    #[test]
    fn constructed_roots_are_zeros(rs in grid_system(5, 3)) {
        let p = rs.to_polynomial().unwrap();
        for &x in rs.roots() {
            let (value, _) = p.eval_with_derivative(x).unwrap();
            prop_assert!(value.norm() <= 1e-8, "|A({x})| = {}", value.norm());
        }
    }

    #[test]
    fn expansion_error_is_bounded(
        roots in proptest::collection::vec(complex_in(5.0), 1..=5),
        alphas in proptest::collection::vec(1u32..=3, 5),
    ) {
        prop_assume!(min_distance(&roots) >= 1.0);
        let rs = RootSystem::new(roots.clone(), alphas[..roots.len()].to_vec()).unwrap();
        let p = rs.to_polynomial().unwrap();
        let n = p.degree() as f64;
        for &x in &roots {
            // rounding in the expansion is bounded by the expansion of Π (z + |x_j|)^α_j
            let majorant: f64 = rs
                .roots()
                .iter()
                .zip(rs.multiplicities())
                .map(|(r, &a)| (x.norm() + r.norm()).powi(a as i32))
                .product();
            let (value, _) = p.eval_with_derivative(x).unwrap();
            prop_assert!(value.norm() <= 4.0 * n * f64::EPSILON * majorant);
        }
    }

    #[test]
    fn expansion_is_permutation_invariant(rs in grid_system(5, 3), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..rs.len()).collect();
        let mut state = seed;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let permuted = RootSystem::new(
            order.iter().map(|&i| rs.roots()[i]).collect(),
            order.iter().map(|&i| rs.multiplicities()[i]).collect(),
        ).unwrap();
        let a = rs.to_polynomial().unwrap();
        let b = permuted.to_polynomial().unwrap();
        for (x, y) in a.coefficients().iter().zip(b.coefficients()) {
            prop_assert!((x - y).norm() <= 1e-12 * x.norm().max(y.norm()).max(1e-300));
        }
    }

    #[test]
    fn separation_is_symmetric_and_translation_invariant(
        roots in proptest::collection::vec(complex_in(5.0), 2..=6),
        shift in complex_in(1.0),
    ) {
        prop_assume!(min_distance(&roots) >= 0.1);
        let alphas = vec![1; roots.len()];
        let d = RootSystem::new(roots.clone(), alphas.clone()).unwrap().separation().unwrap();
        let mut reversed = roots.clone();
        reversed.reverse();
        let d_rev = RootSystem::new(reversed, alphas.clone()).unwrap().separation().unwrap();
        prop_assert_eq!(d, d_rev);
        let moved: Vec<_> = roots.iter().map(|x| x + shift).collect();
        let d_moved = RootSystem::new(moved, alphas).unwrap().separation().unwrap();
        prop_assert!((d - d_moved).abs() <= 1e-15 * d.max(1.0) * 8.0, "{d} vs {d_moved}");
    }
}

#[test]
fn rounded_coefficients_of_moderate_size() {
    // roots of modulus at most 1.5 keep every coefficient below 1e3
    let rs = RootSystem::new(
        vec![c(-1.5, 0.25), c(0.0, 1.0), c(1.25, -0.75)],
        vec![2, 1, 3],
    )
    .unwrap();
    let p = rs.to_polynomial().unwrap();
    assert!(p.coefficients().iter().all(|a| a.norm() <= 1e3));
    for &x in rs.roots() {
        let (value, _) = p.eval_with_derivative(x).unwrap();
        assert!(value.norm() <= 1e-10, "{}", value.norm());
    }
}
