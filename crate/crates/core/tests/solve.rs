mod common;

use common::{grid_system, offset};
use gek::{solve, ApproximationVector, RootSystem, SolveConfig, SolveStatus, UpdateMode};
use proptest::prelude::*;

/// Distance from root `i` at which `|A|` drops to the double-word rounding
/// noise `n u^2 scale`: `A(x) ≈ g (x - x_i)^α` with `g = Π_{j≠i} (x_i - x_j)^α_j`.
fn attainable_accuracy(rs: &RootSystem, i: usize) -> f64 {
    let root = rs.roots()[i];
    let poly = rs.to_polynomial().unwrap();
    let noise = poly.degree() as f64 * f64::EPSILON.powi(2) * poly.evaluate(root).unwrap().scale;
    let g: f64 = rs
        .roots()
        .iter()
        .zip(rs.multiplicities())
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, (x, &a))| (root - x).norm().powi(a as i32))
        .product();
    (noise / g).powf(1.0 / f64::from(rs.multiplicities()[i]))
}

proptest! {
    #[test]
    fn converged_runs_meet_a_stopping_rule(
        rs in grid_system(5, 3),
        offsets in proptest::collection::vec(offset(0.3), 5),
        serial in any::<bool>(),
    ) {
        let poly = rs.to_polynomial().unwrap();
        let start = rs.roots().iter().zip(&offsets).map(|(x, d)| x + d).collect();
        let config = SolveConfig {
            update_mode: if serial { UpdateMode::Serial } else { UpdateMode::TotalStep },
            ..SolveConfig::default()
        };
        let initial = ApproximationVector::new(start).unwrap();
        let report = solve(&poly, rs.multiplicities(), &initial, &config).unwrap();
        let records = &report.trace.records;
        prop_assert_eq!(records.len(), report.iterations_used + 1);
        for (k, r) in records.iter().enumerate() {
            prop_assert_eq!(r.k, k);
        }
        let last = records.last().unwrap();
        prop_assert_eq!(&last.approximations[..], &report.final_approximations[..]);
        if report.status == SolveStatus::Converged {
            let all_frozen = last.frozen.iter().all(|&f| f);
            let small_step = last.max_step().is_some_and(|s| s <= config.step_tolerance);
            prop_assert!(all_frozen || small_step);
        }
    }

    #[test]
    fn nearby_starts_recover_the_roots(
        rs in grid_system(5, 3),
        offsets in proptest::collection::vec(offset(0.1), 5),
    ) {
        let poly = rs.to_polynomial().unwrap();
        let start = rs.roots().iter().zip(&offsets).map(|(x, d)| x + d).collect();
        let initial = ApproximationVector::new(start).unwrap();
        let report = solve(&poly, rs.multiplicities(), &initial, &SolveConfig::default()).unwrap();
        prop_assert_eq!(report.status, SolveStatus::Converged);
        for (i, (x, root)) in report.final_approximations.iter().zip(rs.roots()).enumerate() {
            let limit = 10.0 * attainable_accuracy(&rs, i).max(1e-10);
            prop_assert!((x - root).norm() <= limit, "{x} vs {root}, limit {limit:e}");
        }
    }
}
