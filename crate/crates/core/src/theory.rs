//! Convergence guarantee, a-priori error bound and empirical order estimates.
//!
//! The guarantee is a sufficient condition. Let `c, q` be positive with
//! `q < 1`, `d` the root separation and `n` the degree, and put
//! `r = c / (d - 2c)`,
//!
//! ```text
//! M = (1 + r)^n - 1
//! N = (1 + n r^2)^(n-1) - 1
//! lhs = 2 c^2 n (d - 2c)^-2 [ r + (1 + r)(N + MN + M) ].
//! ```
//!
//! If `d - 2c > 0`, `lhs < α_i` for every root and every initial error is
//! below `c q`, then the total-step iteration satisfies
//! `|x_i^[k] - x_i| < c q^(4^k)` for all `k`. A failed check means only
//! that no guarantee is established.

use crate::error::{invalid, Error, Result};
use crate::iteration::IterationTrace;
use crate::rootsystem::RootSystem;

/// Constants of the convergence guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremConstants {
    pub c: f64,
    pub q: f64,
    /// Root separation.
    pub d: f64,
    /// Degree.
    pub n: usize,
    /// `M = (1 + c/(d-2c))^n - 1`; infinite when `d - 2c <= 0`.
    pub m: f64,
    /// `N = (1 + n (c/(d-2c))^2)^(n-1) - 1`; infinite when `d - 2c <= 0`.
    pub big_n: f64,
}

impl TheoremConstants {
    pub fn new(c: f64, q: f64, d: f64, n: usize) -> Self {
        let gap = d - 2.0 * c;
        let (m, big_n) = if gap > 0.0 {
            let r = c / gap;
            let nf = n as f64;
            // (1 + x)^p - 1 without cancellation for small x
            (
                (nf * r.ln_1p()).exp_m1(),
                ((nf - 1.0) * (nf * r * r).ln_1p()).exp_m1(),
            )
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        TheoremConstants {
            c,
            q,
            d,
            n,
            m,
            big_n,
        }
    }

    /// `d - 2c`
    pub fn gap(&self) -> f64 {
        self.d - 2.0 * self.c
    }

    /// Left-hand side of the per-root inequality; infinite when `d - 2c <= 0`.
    pub fn lhs(&self) -> f64 {
        let gap = self.gap();
        if gap <= 0.0 {
            return f64::INFINITY;
        }
        let r = self.c / gap;
        let growth = self.big_n + self.m * self.big_n + self.m;
        2.0 * self.c * self.c * self.n as f64 / (gap * gap) * (r + (1.0 + r) * growth)
    }
}

/// Why a guarantee could not be established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuaranteeFailure {
    /// `q` is not in `(0, 1)`.
    RatioOutOfRange,
    /// `d - 2c <= 0`.
    RadiusTooLarge,
    /// `lhs >= α_i` for this (zero-based) root index.
    MultiplicityBound(usize),
}

impl std::fmt::Display for GuaranteeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GuaranteeFailure::RatioOutOfRange => write!(f, "q must satisfy 0 < q < 1"),
            GuaranteeFailure::RadiusTooLarge => write!(f, "d - 2c <= 0"),
            GuaranteeFailure::MultiplicityBound(i) => {
                write!(f, "inequality fails for root {}", i + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheckResult {
    pub constants: TheoremConstants,
    pub lhs: f64,
    /// `α_i - lhs` for every root.
    pub per_root_margin: Vec<f64>,
    pub guaranteed: bool,
    pub failures: Vec<GuaranteeFailure>,
}

/// Evaluates the sufficient condition for the given root system and `(c, q)`.
/// No iteration is performed.
pub fn theorem_check(rs: &RootSystem, c: f64, q: f64) -> Result<TheoremCheckResult> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid("c must be a positive finite number"));
    }
    if !q.is_finite() {
        return Err(invalid("q must be finite"));
    }
    let d = rs.separation()?;
    let constants = TheoremConstants::new(c, q, d, rs.degree());
    let lhs = constants.lhs();
    let per_root_margin: Vec<f64> = rs
        .multiplicities()
        .iter()
        .map(|&a| f64::from(a) - lhs)
        .collect();

    let mut failures = Vec::new();
    if !(q > 0.0 && q < 1.0) {
        failures.push(GuaranteeFailure::RatioOutOfRange);
    }
    if constants.gap() <= 0.0 {
        failures.push(GuaranteeFailure::RadiusTooLarge);
    } else {
        failures.extend(
            per_root_margin
                .iter()
                .enumerate()
                .filter(|(_, &margin)| margin.is_nan() || margin <= 0.0)
                .map(|(i, _)| GuaranteeFailure::MultiplicityBound(i)),
        );
    }
    Ok(TheoremCheckResult {
        constants,
        lhs,
        per_root_margin,
        guaranteed: failures.is_empty(),
        failures,
    })
}

/// `c q^(4^k)`, the guaranteed error after `k` steps. Returns 0 once `4^k`
/// leaves the exponent range.
pub fn error_bound(c: f64, q: f64, k: u32) -> f64 {
    let exponent = 4f64.powi(k.min(i32::MAX as u32) as i32);
    if !exponent.is_finite() {
        return 0.0;
    }
    c * q.powf(exponent)
}

/// Safety factor on the attainable accuracy used as noise floor by [`estimate_order`].
pub const ORDER_NOISE_FACTOR: f64 = 100.0;

/// Errors at or below this are treated as rounding noise for a root of
/// multiplicity `alpha` and magnitude `magnitude`.
///
/// With a value accurate to about `u^2` relative to its rounding scale, a
/// root of multiplicity `α` is resolved to about `u^(2/α)`, and never
/// better than the binary64 spacing `u`.
pub fn order_noise_floor(alpha: u32, magnitude: f64) -> f64 {
    let u = f64::EPSILON;
    let attainable = u.max((u * u).powf(1.0 / f64::from(alpha.max(1))));
    ORDER_NOISE_FACTOR * attainable * magnitude.max(1.0)
}

/// Per-root empirical convergence order.
///
/// For each root, `e_k = |x_i^[k] - x_i|` and the pairs `(e_k, e_{k+1})`
/// with both errors above [`order_noise_floor`] are kept. With two or more pairs
/// the result is the least-squares slope of `ln e_{k+1}` against `ln e_k`;
/// a single pair gives `ln e_{k+1} / ln e_k`, the slope of the line through
/// the origin. Roots with no usable pair get `None`.
///
/// Fails with [`Error::InsufficientData`] when no root has an estimate.
pub fn estimate_order(trace: &IterationTrace, true_roots: &RootSystem) -> Result<Vec<Option<f64>>> {
    let m = true_roots.len();
    if let Some(r) = trace.records.iter().find(|r| r.approximations.len() != m) {
        return Err(invalid(format!(
            "trace record {} has {} approximations but there are {m} true roots",
            r.k,
            r.approximations.len()
        )));
    }
    let estimates: Vec<Option<f64>> = true_roots
        .roots()
        .iter()
        .enumerate()
        .zip(true_roots.multiplicities())
        .map(|((i, &root), &alpha)| {
            let floor = order_noise_floor(alpha, root.norm());
            let errors: Vec<f64> = trace
                .records
                .iter()
                .map(|r| (r.approximations[i] - root).norm())
                .collect();
            let pairs: Vec<(f64, f64)> = errors
                .windows(2)
                .filter(|w| w[0] > floor && w[1] > floor)
                .map(|w| (w[0].ln(), w[1].ln()))
                .collect();
            log_log_slope(&pairs)
        })
        .collect();
    if estimates.iter().all(Option::is_none) {
        return Err(Error::InsufficientData);
    }
    Ok(estimates)
}

fn log_log_slope(pairs: &[(f64, f64)]) -> Option<f64> {
    match pairs {
        [] => None,
        [(u, v)] => (*u != 0.0).then(|| v / u),
        _ => {
            let n = pairs.len() as f64;
            let mean_u = pairs.iter().map(|p| p.0).sum::<f64>() / n;
            let mean_v = pairs.iter().map(|p| p.1).sum::<f64>() / n;
            let sxx: f64 = pairs.iter().map(|p| (p.0 - mean_u).powi(2)).sum();
            let sxy: f64 = pairs.iter().map(|p| (p.0 - mean_u) * (p.1 - mean_v)).sum();
            (sxx > 0.0).then(|| sxy / sxx)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iteration::IterationRecord;
    use num_complex::Complex64;

    fn sextic_system() -> RootSystem {
        RootSystem::from_real(&[-2.0, 1.0, 3.0], &[2, 1, 3]).unwrap()
    }

    #[test]
    fn example_system_is_guaranteed() {
        let res = theorem_check(&sextic_system(), 0.01, 0.5).unwrap();
        assert_eq!(res.constants.d, 2.0);
        assert_eq!(res.constants.n, 6);
        // reference values from a 50-digit evaluation
        assert!((res.constants.m - 0.030_688_230_626_687_005).abs() < 1e-15);
        assert!((res.constants.big_n - 7.654_623_033_858_915e-4).abs() < 1e-16);
        assert!((res.lhs - 1.122_946_566_853_300_7e-5).abs() < 1e-18);
        assert!(res.guaranteed);
        assert_eq!(res.per_root_margin.len(), 3);
    }

    #[test]
    fn large_radius_or_bad_ratio_is_not_guaranteed() {
        let res = theorem_check(&sextic_system(), 1.0, 0.5).unwrap();
        assert!(!res.guaranteed);
        assert_eq!(res.failures, vec![GuaranteeFailure::RadiusTooLarge]);
        let res = theorem_check(&sextic_system(), 0.01, 1.0).unwrap();
        assert!(!res.guaranteed);
        assert_eq!(res.failures, vec![GuaranteeFailure::RatioOutOfRange]);
    }

    #[test]
    fn inequality_can_fail_with_valid_gap() {
        // c close to d/2 blows up lhs while d - 2c stays positive
        let res = theorem_check(&sextic_system(), 0.9, 0.5).unwrap();
        assert!(res.constants.gap() > 0.0);
        assert!(!res.guaranteed);
        assert!(res
            .failures
            .iter()
            .all(|f| matches!(f, GuaranteeFailure::MultiplicityBound(_))));
    }

    #[test]
    fn single_root_is_degenerate() {
        let rs = RootSystem::from_real(&[1.0], &[3]).unwrap();
        assert_eq!(theorem_check(&rs, 0.1, 0.5), Err(Error::DegenerateSystem));
    }

    #[test]
    fn bounds() {
        assert_eq!(error_bound(1.0, 0.5, 0), 0.5);
        assert_eq!(error_bound(1.0, 0.5, 1), 0.0625);
        assert!((error_bound(2.0, 0.1, 2) - 2e-16).abs() < 1e-30);
        assert_eq!(error_bound(1.0, 0.5, 600), 0.0);
    }

    fn synthetic(errors: &[f64]) -> IterationTrace {
        IterationTrace {
            records: errors
                .iter()
                .enumerate()
                .map(|(k, &e)| IterationRecord {
                    k,
                    approximations: vec![Complex64::new(e, 0.0)],
                    residuals: vec![0.0],
                    steps: None,
                    frozen: vec![false],
                })
                .collect(),
        }
    }

    #[test]
    fn synthetic_quartic_and_quadratic() {
        let rs = RootSystem::from_real(&[0.0], &[1]).unwrap();
        let quartic: Vec<f64> = (0..4).map(|k| 0.1f64.powi(4i32.pow(k))).collect();
        let p = estimate_order(&synthetic(&quartic), &rs).unwrap()[0].unwrap();
        assert!((p - 4.0).abs() < 1e-12, "{p}");
        let quadratic: Vec<f64> = (0..6).map(|k| 0.1f64.powi(2i32.pow(k))).collect();
        let p = estimate_order(&synthetic(&quadratic), &rs).unwrap()[0].unwrap();
        assert!((p - 2.0).abs() < 1e-12, "{p}");
    }

    #[test]
    fn noise_floor_grows_with_multiplicity() {
        assert_eq!(order_noise_floor(1, 0.5), 100.0 * f64::EPSILON);
        assert_eq!(order_noise_floor(2, 3.0), 300.0 * f64::EPSILON);
        let triple = order_noise_floor(3, 1.0);
        assert!(triple > 1e-9 && triple < 1e-8, "{triple}");
    }

    #[test]
    fn saturated_trace_has_no_estimate() {
        let rs = RootSystem::from_real(&[0.0], &[1]).unwrap();
        assert_eq!(
            estimate_order(&synthetic(&[0.1, 1e-17, 0.0]), &rs),
            Err(Error::InsufficientData)
        );
    }
}
