use num_complex::Complex64;

use super::{
    ek_step, gek_step, ApproximationVector, IterationRecord, IterationTrace, Method, SolveConfig,
    SolveReport, SolveStatus,
};
use crate::error::{invalid, Error, Result};
use crate::numeric::MonicPolynomial;

/// Relative residual below which an index is treated as sitting at the
/// rounding floor: if its next update increases the residual, the update
/// is noise and is rejected.
const STALL_RELATIVE_RESIDUAL: f64 = 1e-24;

fn record(
    poly: &MonicPolynomial,
    k: usize,
    approx: &[Complex64],
    previous: Option<&[Complex64]>,
    stalled: &[bool],
    config: &SolveConfig,
) -> Result<(IterationRecord, Vec<f64>)> {
    let mut residuals = Vec::with_capacity(approx.len());
    let mut relative = Vec::with_capacity(approx.len());
    let mut frozen = Vec::with_capacity(approx.len());
    for (&x, &stall) in approx.iter().zip(stalled) {
        let e = poly.evaluate(x)?;
        residuals.push(e.value.norm());
        relative.push(e.relative_residual());
        frozen.push(stall || config.is_residual_zero(&e));
    }
    let steps = previous.map(|p| p.iter().zip(approx).map(|(a, b)| (b - a).norm()).collect());
    let rec = IterationRecord {
        k,
        approximations: approx.to_vec(),
        residuals,
        steps,
        frozen,
    };
    Ok((rec, relative))
}

fn status_of(err: &Error) -> SolveStatus {
    match err {
        Error::Collision { .. } => SolveStatus::Collision,
        Error::SingularDenominator { .. } => SolveStatus::SingularDenominator,
        // the freezing test and the step share one residual test, so a zero
        // residual inside a step means the evaluation itself went bad
        _ => SolveStatus::Overflow,
    }
}

/// Iterates from `initial` until convergence, a guard trips, or the
/// iteration budget runs out.
///
/// Before each step every index whose residual passes
/// [`SolveConfig::is_residual_zero`] is frozen. An index whose residual is
/// already within a few digits of the rounding floor and whose update makes
/// the residual larger has hit the evaluation's precision limit: the update
/// is discarded and the index stays frozen from then on. The run is `Converged` once
/// every index is frozen or the largest step is at most
/// `step_tolerance`. Tolerances are checked after a step and before the
/// budget, so a convergence on the last allowed step still counts.
///
/// Only malformed input is returned as an error; numerical failures are
/// reported through [`SolveReport::status`].
pub fn solve(
    poly: &MonicPolynomial,
    multiplicities: &[u32],
    initial: &ApproximationVector,
    config: &SolveConfig,
) -> Result<SolveReport> {
    config.validate()?;
    if multiplicities.len() != initial.len() {
        return Err(invalid(format!(
            "{} multiplicities but {} initial approximations",
            multiplicities.len(),
            initial.len()
        )));
    }
    if multiplicities.contains(&0) {
        return Err(invalid("multiplicities must be positive"));
    }
    let total: usize = multiplicities.iter().map(|&a| a as usize).sum();
    if total != poly.degree() {
        return Err(invalid(format!(
            "multiplicities sum to {total} but the polynomial has degree {}",
            poly.degree()
        )));
    }
    if config.method == Method::SimpleRoots && multiplicities.iter().any(|&a| a != 1) {
        return Err(invalid(
            "the simple-root method needs every multiplicity to be 1",
        ));
    }

    let mut trace = IterationTrace::default();
    let finish = |status, current: Vec<Complex64>, used, trace| SolveReport {
        status,
        final_approximations: ApproximationVector(current),
        iterations_used: used,
        trace,
    };

    let mut current = initial.to_vec();
    let mut stalled = vec![false; current.len()];
    let mut relative = match record(poly, 0, &current, None, &stalled, config) {
        Ok((r, rel)) => {
            trace.records.push(r);
            rel
        }
        Err(e) => return Ok(finish(status_of(&e), current, 0, trace)),
    };
    if trace.records[0].frozen.iter().all(|&f| f) {
        return Ok(finish(SolveStatus::Converged, current, 0, trace));
    }

    for k in 1..=config.max_iterations {
        let frozen = trace.records[k - 1].frozen.clone();
        let approx = ApproximationVector(current.clone());
        let stepped = match config.method {
            Method::Generalized => gek_step(poly, &approx, multiplicities, config, Some(&frozen)),
            Method::SimpleRoots => ek_step(poly, &approx, config, Some(&frozen)),
        };
        let mut next = match stepped {
            Ok(v) => v.into_inner(),
            Err(e) => return Ok(finish(status_of(&e), current, k - 1, trace)),
        };
        let (mut rec, mut rel) = match record(poly, k, &next, Some(&current), &stalled, config) {
            Ok(r) => r,
            Err(e) => return Ok(finish(status_of(&e), current, k - 1, trace)),
        };
        let previous = &trace.records[k - 1];
        for i in 0..next.len() {
            if !frozen[i]
                && relative[i] <= STALL_RELATIVE_RESIDUAL
                && rec.residuals[i] > previous.residuals[i]
            {
                stalled[i] = true;
                next[i] = current[i];
                rec.approximations[i] = current[i];
                rec.residuals[i] = previous.residuals[i];
                rel[i] = relative[i];
                if let Some(steps) = rec.steps.as_mut() {
                    steps[i] = 0.0;
                }
                rec.frozen[i] = true;
            }
        }
        relative = rel;
        let converged = rec.frozen.iter().all(|&f| f)
            || rec.max_step().is_some_and(|s| s <= config.step_tolerance);
        trace.records.push(rec);
        current = next;
        if converged {
            return Ok(finish(SolveStatus::Converged, current, k, trace));
        }
    }
    let used = config.max_iterations;
    Ok(finish(SolveStatus::MaxIterations, current, used, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::RootSystem;

    fn sextic() -> MonicPolynomial {
        RootSystem::from_real(&[-2.0, 1.0, 3.0], &[2, 1, 3])
            .unwrap()
            .to_polynomial()
            .unwrap()
    }

    #[test]
    fn reference_example_takes_three_iterations() {
        let config = SolveConfig {
            step_tolerance: 1e-15,
            ..SolveConfig::default()
        };
        let initial = ApproximationVector::from_real(&[-3.0, 0.1, 4.0]).unwrap();
        let report = solve(&sextic(), &[2, 1, 3], &initial, &config).unwrap();
        assert_eq!(report.status, SolveStatus::Converged);
        assert_eq!(report.iterations_used, 3);
        assert_eq!(report.trace.len(), 4);
        for (x, r) in report.final_approximations.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((x.re - r).abs() <= 1e-14 && x.im.abs() <= 1e-14, "{x}");
        }
    }

    #[test]
    fn exact_roots_freeze_immediately() {
        let initial = ApproximationVector::from_real(&[-2.0, 1.0, 3.0]).unwrap();
        let report = solve(&sextic(), &[2, 1, 3], &initial, &SolveConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Converged);
        assert_eq!(report.iterations_used, 0);
        assert_eq!(report.trace.records[0].frozen, vec![true; 3]);
        assert!(report.trace.records[0].steps.is_none());
    }

    #[test]
    fn coincident_start_is_a_collision() {
        let initial = ApproximationVector::from_real(&[0.5, 0.5, 4.0]).unwrap();
        let report = solve(&sextic(), &[2, 1, 3], &initial, &SolveConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Collision);
        assert_eq!(report.iterations_used, 0);
    }

    #[test]
    fn budget_exhaustion() {
        let config = SolveConfig {
            max_iterations: 1,
            ..SolveConfig::default()
        };
        let initial = ApproximationVector::from_real(&[-3.0, 0.1, 4.0]).unwrap();
        let report = solve(&sextic(), &[2, 1, 3], &initial, &config).unwrap();
        assert_eq!(report.status, SolveStatus::MaxIterations);
        assert_eq!(report.iterations_used, 1);
        assert_eq!(report.trace.len(), 2);
    }

    #[test]
    fn convergence_on_last_allowed_step_wins() {
        let config = SolveConfig {
            max_iterations: 3,
            step_tolerance: 1e-15,
            ..SolveConfig::default()
        };
        let initial = ApproximationVector::from_real(&[-3.0, 0.1, 4.0]).unwrap();
        let report = solve(&sextic(), &[2, 1, 3], &initial, &config).unwrap();
        assert_eq!(report.status, SolveStatus::Converged);
    }

    #[test]
    fn input_validation() {
        let initial = ApproximationVector::from_real(&[-3.0, 0.1, 4.0]).unwrap();
        let config = SolveConfig::default();
        assert!(solve(&sextic(), &[2, 1, 2], &initial, &config).is_err());
        assert!(solve(&sextic(), &[2, 4], &initial, &config).is_err());
        let simple = SolveConfig {
            method: Method::SimpleRoots,
            ..config
        };
        assert!(solve(&sextic(), &[2, 1, 3], &initial, &simple).is_err());
        let bad = SolveConfig {
            step_tolerance: 0.0,
            ..config
        };
        assert!(solve(&sextic(), &[2, 1, 3], &initial, &bad).is_err());
    }
}
