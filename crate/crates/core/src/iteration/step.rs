use num_complex::Complex64;

use super::{ApproximationVector, SolveConfig, UpdateMode};
use crate::error::{invalid, Error, Result};
use crate::numeric::{check_finite, integer_power, Evaluation, MonicPolynomial};

/// Denominators at or below `SINGULAR_DENOMINATOR · max(1, α_i)` are singular.
const SINGULAR_DENOMINATOR: f64 = 1e-300;

fn check_index(approx: &[Complex64], i: usize) -> Result<()> {
    if i >= approx.len() {
        return Err(invalid(format!(
            "index {i} out of range for {} approximations",
            approx.len()
        )));
    }
    Ok(())
}

fn check_multiplicities(approx: &[Complex64], multiplicities: &[u32]) -> Result<()> {
    if approx.len() != multiplicities.len() {
        return Err(invalid(format!(
            "{} approximations but {} multiplicities",
            approx.len(),
            multiplicities.len()
        )));
    }
    if multiplicities.contains(&0) {
        return Err(invalid("multiplicities must be positive"));
    }
    Ok(())
}

fn check_collisions_with(approx: &[Complex64], i: usize, threshold: f64) -> Result<()> {
    for (j, x) in approx.iter().enumerate() {
        if j == i {
            continue;
        }
        let distance = (approx[i] - x).norm();
        if distance <= threshold {
            return Err(Error::Collision {
                first: i.min(j),
                second: i.max(j),
                distance,
            });
        }
    }
    Ok(())
}

fn check_all_collisions(approx: &[Complex64], threshold: f64) -> Result<()> {
    for i in 0..approx.len() {
        for j in i + 1..approx.len() {
            let distance = (approx[i] - approx[j]).norm();
            if distance <= threshold {
                return Err(Error::Collision {
                    first: i,
                    second: j,
                    distance,
                });
            }
        }
    }
    Ok(())
}

fn log_derivative_unchecked(approx: &[Complex64], multiplicities: &[u32], i: usize) -> Complex64 {
    let xi = approx[i];
    approx
        .iter()
        .zip(multiplicities)
        .enumerate()
        .filter(|&(j, _)| j != i)
        .fold(Complex64::new(0.0, 0.0), |acc, (_, (xj, &alpha))| {
            acc + f64::from(alpha) / (xi - xj)
        })
}

fn product_unchecked(approx: &[Complex64], multiplicities: &[u32], j: usize) -> Result<Complex64> {
    let xj = approx[j];
    let mut product = Complex64::new(1.0, 0.0);
    for (l, (xl, &alpha)) in approx.iter().zip(multiplicities).enumerate() {
        if l != j {
            product = check_finite(product * integer_power(xj - xl, alpha)?)?;
        }
    }
    Ok(product)
}

/// `Q_i'/Q_i = Σ_{j≠i} α_j / (x_i - x_j)`; zero when there is a single approximation.
///
/// Indices are zero-based.
pub fn q_log_derivative(
    approx: &ApproximationVector,
    multiplicities: &[u32],
    i: usize,
    config: &SolveConfig,
) -> Result<Complex64> {
    check_multiplicities(approx, multiplicities)?;
    check_index(approx, i)?;
    check_collisions_with(approx, i, config.collision_distance(approx))?;
    check_finite(log_derivative_unchecked(approx, multiplicities, i))
}

/// `Q_j = Π_{l≠j} (x_j - x_l)^α_l`; one when there is a single approximation.
pub fn q_product(
    approx: &ApproximationVector,
    multiplicities: &[u32],
    j: usize,
    config: &SolveConfig,
) -> Result<Complex64> {
    check_multiplicities(approx, multiplicities)?;
    check_index(approx, j)?;
    check_collisions_with(approx, j, config.collision_distance(approx))?;
    product_unchecked(approx, multiplicities, j)
}

/// `S_i = A'(x_i)/A(x_i) - Q_i'(x_i)/Q_i(x_i)`.
///
/// Fails with [`Error::ResidualZero`] when `A(x_i)` is zero to working
/// accuracy (see [`SolveConfig::residual_tolerance`]).
pub fn s_value(
    poly: &MonicPolynomial,
    approx: &ApproximationVector,
    multiplicities: &[u32],
    i: usize,
    config: &SolveConfig,
) -> Result<Complex64> {
    let q_log = q_log_derivative(approx, multiplicities, i, config)?;
    let evaluation = poly.evaluate(approx[i])?;
    s_from_evaluation(&evaluation, q_log, i, config)
}

fn s_from_evaluation(
    evaluation: &Evaluation,
    q_log: Complex64,
    i: usize,
    config: &SolveConfig,
) -> Result<Complex64> {
    if config.is_residual_zero(evaluation) {
        return Err(Error::ResidualZero { index: i });
    }
    check_finite(evaluation.derivative / evaluation.value - q_log)
}

/// Per-index quantities of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexQuantities {
    /// `A(x_i)`
    pub value: Complex64,
    /// `A'(x_i)`
    pub derivative: Complex64,
    /// `Q_i'/Q_i`
    pub q_log_derivative: Complex64,
    /// `S_i`; `None` in the simple-root step, which never divides by `A(x_i)`.
    pub s_value: Option<Complex64>,
    /// `Q_i`
    pub q_product: Complex64,
    /// Numerator of index `i`'s contribution to the other indices' correction sums.
    pub correction_numerator: Complex64,
}

/// Quantities shared by all updates of one sweep.
///
/// Frozen indices hold `None`. So do indices of the multiplicity-aware
/// workspace whose residual is zero to working accuracy: `S_j` does not
/// exist there, and they are treated exactly like frozen ones.
#[derive(Debug, Clone, PartialEq)]
pub struct StepWorkspace {
    pub entries: Vec<Option<IndexQuantities>>,
}

impl StepWorkspace {
    /// Multiplicity-aware quantities for the current vector.
    pub fn generalized(
        poly: &MonicPolynomial,
        approx: &[Complex64],
        multiplicities: &[u32],
        frozen: &[bool],
        config: &SolveConfig,
    ) -> Result<Self> {
        check_all_collisions(approx, config.collision_distance(approx))?;
        let mut entries = Vec::with_capacity(approx.len());
        for (j, &is_frozen) in frozen.iter().enumerate() {
            if is_frozen {
                entries.push(None);
                continue;
            }
            let evaluation = poly.evaluate(approx[j])?;
            if config.is_residual_zero(&evaluation) {
                entries.push(None);
                continue;
            }
            let q_log = check_finite(log_derivative_unchecked(approx, multiplicities, j))?;
            let s = s_from_evaluation(&evaluation, q_log, j, config)?;
            let q = product_unchecked(approx, multiplicities, j)?;
            let alpha = multiplicities[j];
            let power = integer_power(s / f64::from(alpha), alpha - 1)?;
            let numerator = check_finite(f64::from(alpha) * evaluation.value * power)?;
            entries.push(Some(IndexQuantities {
                value: evaluation.value,
                derivative: evaluation.derivative,
                q_log_derivative: q_log,
                s_value: Some(s),
                q_product: q,
                correction_numerator: numerator,
            }));
        }
        Ok(StepWorkspace { entries })
    }

    /// Simple-root quantities: `W_j` and `W_j'/W_j` with unit multiplicities.
    pub fn simple(
        poly: &MonicPolynomial,
        approx: &[Complex64],
        frozen: &[bool],
        config: &SolveConfig,
    ) -> Result<Self> {
        check_all_collisions(approx, config.collision_distance(approx))?;
        let ones = vec![1u32; approx.len()];
        let mut entries = Vec::with_capacity(approx.len());
        for (j, &is_frozen) in frozen.iter().enumerate() {
            if is_frozen {
                entries.push(None);
                continue;
            }
            let evaluation = poly.evaluate(approx[j])?;
            entries.push(Some(IndexQuantities {
                value: evaluation.value,
                derivative: evaluation.derivative,
                q_log_derivative: check_finite(log_derivative_unchecked(approx, &ones, j))?,
                s_value: None,
                q_product: product_unchecked(approx, &ones, j)?,
                correction_numerator: evaluation.value,
            }));
        }
        Ok(StepWorkspace { entries })
    }

    /// `Σ_{j≠i, j not frozen} N_j / (Q_j (x_j - x_i)^2)`, ascending `j`.
    pub fn correction_sum(&self, approx: &[Complex64], i: usize) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, entry) in self.entries.iter().enumerate() {
            if j == i {
                continue;
            }
            if let Some(e) = entry {
                let diff = approx[j] - approx[i];
                sum += e.correction_numerator / (e.q_product * (diff * diff));
            }
        }
        check_finite(sum)
    }

    /// New value of component `i` from the multiplicity-aware formula;
    /// `x_i` itself when the workspace holds no entry for `i`.
    pub fn generalized_update(
        &self,
        approx: &[Complex64],
        multiplicities: &[u32],
        i: usize,
    ) -> Result<Complex64> {
        let Some(entry) = self.entries[i] else {
            return Ok(approx[i]);
        };
        let s = entry
            .s_value
            .expect("generalized workspace carries S values");
        let alpha = f64::from(multiplicities[i]);
        let denominator = check_finite(s + self.correction_sum(approx, i)?)?;
        if denominator.norm() <= SINGULAR_DENOMINATOR * alpha.max(1.0) {
            return Err(Error::SingularDenominator { index: i });
        }
        check_finite(approx[i] - alpha / denominator)
    }

    /// New value of component `i` from the simple-root formula.
    pub fn simple_update(&self, approx: &[Complex64], i: usize) -> Result<Complex64> {
        let Some(entry) = self.entries[i] else {
            return Ok(approx[i]);
        };
        let value = entry.value;
        let denominator = check_finite(
            entry.derivative - value * entry.q_log_derivative
                + value * self.correction_sum(approx, i)?,
        )?;
        if denominator.norm() <= SINGULAR_DENOMINATOR {
            return Err(Error::SingularDenominator { index: i });
        }
        check_finite(approx[i] - value / denominator)
    }
}

fn resolve_frozen(frozen: Option<&[bool]>, m: usize) -> Result<Vec<bool>> {
    match frozen {
        None => Ok(vec![false; m]),
        Some(f) if f.len() == m => Ok(f.to_vec()),
        Some(f) => Err(invalid(format!(
            "{} frozen flags for {m} approximations",
            f.len()
        ))),
    }
}

fn sweep<B, U>(
    approx: &ApproximationVector,
    frozen: &[bool],
    mode: UpdateMode,
    build: B,
    update: U,
) -> Result<ApproximationVector>
where
    B: Fn(&[Complex64]) -> Result<StepWorkspace>,
    U: Fn(&StepWorkspace, &[Complex64], usize) -> Result<Complex64>,
{
    let mut next = approx.to_vec();
    match mode {
        UpdateMode::TotalStep => {
            let workspace = build(approx)?;
            for (i, &is_frozen) in frozen.iter().enumerate() {
                if !is_frozen {
                    next[i] = update(&workspace, approx, i)?;
                }
            }
        }
        UpdateMode::Serial => {
            for (i, &is_frozen) in frozen.iter().enumerate() {
                if !is_frozen {
                    let workspace = build(&next)?;
                    next[i] = update(&workspace, &next, i)?;
                }
            }
        }
    }
    Ok(ApproximationVector(next))
}

/// One multiplicity-aware step:
///
/// `x_i ← x_i - α_i / [S_i + Σ_{j≠i} α_j A(x_j) (S_j/α_j)^(α_j-1) / (Q_j (x_j - x_i)^2)]`.
///
/// Frozen indices are copied through unchanged and contribute nothing to the
/// correction sums of the others (the limit of their term at an exact root).
/// `frozen = None` means no index is frozen.
pub fn gek_step(
    poly: &MonicPolynomial,
    approx: &ApproximationVector,
    multiplicities: &[u32],
    config: &SolveConfig,
    frozen: Option<&[bool]>,
) -> Result<ApproximationVector> {
    check_multiplicities(approx, multiplicities)?;
    let total: usize = multiplicities.iter().map(|&a| a as usize).sum();
    if total != poly.degree() {
        return Err(invalid(format!(
            "multiplicities sum to {total} but the polynomial has degree {}",
            poly.degree()
        )));
    }
    let frozen = resolve_frozen(frozen, approx.len())?;
    sweep(
        approx,
        &frozen,
        config.update_mode,
        |x| StepWorkspace::generalized(poly, x, multiplicities, &frozen, config),
        |ws, x, i| ws.generalized_update(x, multiplicities, i),
    )
}

/// One simple-root step:
///
/// `x_i ← x_i - A(x_i) / [A'(x_i) - A(x_i) W_i'/W_i + A(x_i) Σ_{j≠i} A(x_j) / ((x_i - x_j)^2 W_j)]`
///
/// with `W_p = Π_{l≠p} (x_p - x_l)`. Needs one approximation per degree.
pub fn ek_step(
    poly: &MonicPolynomial,
    approx: &ApproximationVector,
    config: &SolveConfig,
    frozen: Option<&[bool]>,
) -> Result<ApproximationVector> {
    if approx.len() != poly.degree() {
        return Err(invalid(format!(
            "the simple-root step needs {} approximations, got {}",
            poly.degree(),
            approx.len()
        )));
    }
    let frozen = resolve_frozen(frozen, approx.len())?;
    sweep(
        approx,
        &frozen,
        config.update_mode,
        |x| StepWorkspace::simple(poly, x, &frozen, config),
        |ws, x, i| ws.simple_update(x, i),
    )
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::rootsystem::RootSystem;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn av(values: &[f64]) -> ApproximationVector {
        ApproximationVector::from_real(values).unwrap()
    }

    fn cfg() -> SolveConfig {
        SolveConfig::default()
    }

    fn sextic() -> MonicPolynomial {
        RootSystem::from_real(&[-2.0, 1.0, 3.0], &[2, 1, 3])
            .unwrap()
            .to_polynomial()
            .unwrap()
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn q_log_derivative_examples() {
        assert_eq!(
            q_log_derivative(&av(&[7.0]), &[3], 0, &cfg()).unwrap(),
            c(0.0)
        );
        assert_eq!(
            q_log_derivative(&av(&[0.0, 1.0]), &[1, 1], 0, &cfg()).unwrap(),
            c(-1.0)
        );
        let v = q_log_derivative(&av(&[-3.0, 0.1, 4.0]), &[2, 1, 3], 0, &cfg()).unwrap();
        assert!(close(v, c(-0.751_152_073_732_718_9), 1e-15), "{v}");
    }

    #[test]
    fn q_product_examples() {
        assert_eq!(q_product(&av(&[7.0]), &[3], 0, &cfg()).unwrap(), c(1.0));
        assert_eq!(
            q_product(&av(&[0.0, 2.0]), &[1, 3], 0, &cfg()).unwrap(),
            c(-8.0)
        );
        let v = q_product(&av(&[-3.0, 0.1, 4.0]), &[2, 1, 3], 1, &cfg()).unwrap();
        assert!(close(v, c(-570.05559), 1e-14), "{v}");
    }

    #[test]
    fn q_ops_report_collision() {
        let err = q_log_derivative(&av(&[1.0, 1.0]), &[1, 1], 0, &cfg()).unwrap_err();
        assert!(matches!(
            err,
            Error::Collision {
                first: 0,
                second: 1,
                ..
            }
        ));
        assert!(q_product(&av(&[1.0, 1.0]), &[1, 1], 1, &cfg()).is_err());
    }

    #[test]
    fn s_value_single_double_root() {
        let p = MonicPolynomial::from_real(&[-10.0, 25.0]).unwrap();
        assert_eq!(s_value(&p, &av(&[4.0]), &[2], 0, &cfg()).unwrap(), c(-2.0));
    }

    #[test]
    fn s_value_at_exact_root_signals_residual_zero() {
        let p = RootSystem::from_real(&[0.0, 1.0], &[1, 1])
            .unwrap()
            .to_polynomial()
            .unwrap();
        let x = av(&[0.5, 1.0 + 1e-3]);
        assert!(s_value(&p, &x, &[1, 1], 0, &cfg()).is_ok());
        let x = av(&[0.5, 1.0]);
        assert_eq!(
            s_value(&p, &x, &[1, 1], 1, &cfg()),
            Err(Error::ResidualZero { index: 1 })
        );
    }

    #[test]
    fn s_value_partial_fraction_identity() {
        let roots = [-2.0, 1.0, 3.0];
        let alphas = [2u32, 1, 3];
        let x = av(&[-1.9, 1.1, 3.1]);
        let s = s_value(&sextic(), &x, &alphas, 1, &cfg()).unwrap();
        let mut expected = c(0.0);
        for j in 0..3 {
            expected += f64::from(alphas[j]) / (x[1] - roots[j]);
            if j != 1 {
                expected -= f64::from(alphas[j]) / (x[1] - x[j]);
            }
        }
        assert!((s - expected).norm() <= 1e-10 * expected.norm());
    }

    #[test]
    fn first_step_matches_reference_row() {
        let next = gek_step(&sextic(), &av(&[-3.0, 0.1, 4.0]), &[2, 1, 3], &cfg(), None).unwrap();
        let row = crate::example::REFERENCE_TABLE[1].map(|v| v.parse::<f64>().unwrap());
        for (x, r) in next.iter().zip(row) {
            assert!((x.re - r).abs() <= 1e-14 * r.abs(), "{x} vs {r}");
            assert_eq!(x.im, 0.0);
        }
    }

    #[test]
    fn single_root_step_is_exact() {
        let p = MonicPolynomial::from_real(&[-10.0, 25.0]).unwrap();
        let next = gek_step(&p, &av(&[4.0]), &[2], &cfg(), None).unwrap();
        assert_eq!(next[0], c(5.0));
    }

    #[test]
    fn simple_step_linear_is_newton() {
        let p = MonicPolynomial::from_real(&[-2.5]).unwrap();
        let next = ek_step(&p, &av(&[-7.0]), &cfg(), None).unwrap();
        assert_eq!(next[0], c(2.5));
    }

    #[test]
    fn simple_step_quadratic_contraction() {
        let p = RootSystem::from_real(&[0.0, 1.0], &[1, 1])
            .unwrap()
            .to_polynomial()
            .unwrap();
        let next = ek_step(&p, &av(&[0.1, 0.9]), &cfg(), None).unwrap();
        // reference values from a 50-digit evaluation of the same formula
        let expected = [-3.702_896_972_337_181_4e-4, 1.000_370_289_697_233_7];
        for (x, e) in next.iter().zip(expected) {
            assert!((x.re - e).abs() <= 1e-14, "{x} vs {e}");
        }
        assert!((next[0].re - 0.0).abs() < 1e-3 && (next[1].re - 1.0).abs() < 1e-3);
    }

    #[test]
    fn simple_and_generalized_agree_on_cubic() {
        let p = RootSystem::from_real(&[0.0, 1.0, 2.0], &[1, 1, 1])
            .unwrap()
            .to_polynomial()
            .unwrap();
        let x = av(&[-0.2, 1.1, 2.3]);
        let a = ek_step(&p, &x, &cfg(), None).unwrap();
        let b = gek_step(&p, &x, &[1, 1, 1], &cfg(), None).unwrap();
        let expected = [
            -1.321_482_836_935_545_5e-3,
            0.999_735_202_304_848_46,
            1.998_984_679_350_409_7,
        ];
        for i in 0..3 {
            assert!(close(a[i], b[i], 1e-12));
            assert!((a[i].re - expected[i]).abs() <= 1e-14);
        }
    }

    #[test]
    fn frozen_components_pass_through_bitwise() {
        let x = ApproximationVector::new(vec![
            Complex64::new(-2.1, 0.013),
            Complex64::new(0.93, -0.07),
            Complex64::new(3.2, 0.1),
        ])
        .unwrap();
        let frozen = [false, true, false];
        for mode in [UpdateMode::TotalStep, UpdateMode::Serial] {
            let config = SolveConfig {
                update_mode: mode,
                ..cfg()
            };
            let next = gek_step(&sextic(), &x, &[2, 1, 3], &config, Some(&frozen)).unwrap();
            assert_eq!(next[1].re.to_bits(), x[1].re.to_bits());
            assert_eq!(next[1].im.to_bits(), x[1].im.to_bits());
            assert_ne!(next[0], x[0]);
        }
    }

    #[test]
    fn serial_mode_differs_but_converges_toward_roots() {
        let x = av(&[-2.1, 0.9, 3.1]);
        let serial = SolveConfig {
            update_mode: UpdateMode::Serial,
            ..cfg()
        };
        let a = gek_step(&sextic(), &x, &[2, 1, 3], &cfg(), None).unwrap();
        let b = gek_step(&sextic(), &x, &[2, 1, 3], &serial, None).unwrap();
        // the first component sees no updated values, so it agrees
        assert_eq!(a[0], b[0]);
        for (z, r) in b.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((z.re - r).abs() < 1e-3);
        }
    }

    #[test]
    fn step_errors() {
        let p = sextic();
        assert!(matches!(
            gek_step(&p, &av(&[-2.5, -2.5, 3.5]), &[2, 1, 3], &cfg(), None),
            Err(Error::Collision {
                first: 0,
                second: 1,
                ..
            })
        ));
        assert!(matches!(
            gek_step(&p, &av(&[-2.5, 0.5]), &[2, 1], &cfg(), None),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            ek_step(&p, &av(&[-2.5, 0.5, 3.5]), &cfg(), None),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn index_on_a_root_is_left_in_place() {
        let p = sextic();
        let start = av(&[-2.0, 0.5, 3.5]);
        let next = gek_step(&p, &start, &[2, 1, 3], &cfg(), None).unwrap();
        let frozen = gek_step(&p, &start, &[2, 1, 3], &cfg(), Some(&[true, false, false])).unwrap();
        assert_eq!(next, frozen);
        assert_eq!(next[0], start[0]);
    }
}
