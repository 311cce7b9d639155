//! Complex scalars, monic polynomials and their evaluation.
//!
//! Polynomials are evaluated with a compensated Horner recurrence: the
//! running value and derivative are carried in double-word arithmetic and
//! rounded to binary64 only at the end. Near a root of multiplicity `α`
//! the value behaves like `e^α`, so plain binary64 Horner loses the
//! information the multiple-root iteration needs long before the root is
//! resolved to full precision.

mod dd;

use dd::DoubleWordComplex;
pub use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Returns `true` when both parts of `z` are finite.
#[inline]
pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[inline]
pub(crate) fn check_finite(z: Complex64) -> Result<Complex64> {
    if is_finite(z) {
        Ok(z)
    } else {
        Err(Error::Overflow)
    }
}

/// `base^exponent` by binary exponentiation. `z^0 = 1` for every `z`, including zero.
pub fn integer_power(base: Complex64, exponent: u32) -> Result<Complex64> {
    let mut result = Complex64::new(1.0, 0.0);
    let mut square = base;
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result = check_finite(result * square)?;
        }
        e >>= 1;
        if e > 0 {
            square = check_finite(square * square)?;
        }
    }
    Ok(result)
}

/// Value, derivative and rounding scale of a polynomial at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub derivative: Complex64,
    /// Running-error scale `Σ_k |b_k| |z|^(n-k)` over the Horner
    /// intermediates `b_0 = 1, b_k = b_{k-1} z + a_k`. The rounding error of
    /// the value is proportional to it.
    pub scale: f64,
}

impl Evaluation {
    /// `|A(z)| / scale`
    pub fn relative_residual(&self) -> f64 {
        self.value.norm() / self.scale
    }
}

/// A monic polynomial `x^n + a_1 x^(n-1) + ... + a_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial {
    // a_1..a_n; the leading 1 is implicit
    coefficients: Vec<Complex64>,
}

impl MonicPolynomial {
    /// Builds a polynomial from its non-leading coefficients `a_1..a_n`.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(invalid("a monic polynomial needs degree at least 1"));
        }
        if let Some(k) = coefficients.iter().position(|c| !is_finite(*c)) {
            return Err(invalid(format!("coefficient a_{} is not finite", k + 1)));
        }
        Ok(MonicPolynomial { coefficients })
    }

    /// Convenience constructor for real coefficients.
    pub fn from_real(coefficients: &[f64]) -> Result<Self> {
        Self::new(
            coefficients
                .iter()
                .map(|&a| Complex64::new(a, 0.0))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// The coefficients `a_1..a_n` (leading coefficient excluded).
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Value and first derivative at `z` from one compensated Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let e = self.evaluate(z)?;
        Ok((e.value, e.derivative))
    }

    /// Full evaluation, including the rounding scale used for residual tests.
    pub fn evaluate(&self, z: Complex64) -> Result<Evaluation> {
        if !is_finite(z) {
            return Err(invalid("evaluation point is not finite"));
        }
        let zero = DoubleWordComplex::default();
        let mut value = DoubleWordComplex::from_complex(Complex64::new(1.0, 0.0));
        let mut derivative = zero;
        let modulus = z.norm();
        let mut scale = 1.0;
        for &a in &self.coefficients {
            derivative = derivative.mul_add(z, value);
            value = value.mul_add(z, DoubleWordComplex::from_complex(a));
            scale = scale * modulus + value.to_complex().norm();
        }
        let value = check_finite(value.to_complex())?;
        let derivative = check_finite(derivative.to_complex())?;
        if !scale.is_finite() {
            return Err(Error::Overflow);
        }
        Ok(Evaluation {
            value,
            derivative,
            scale,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sextic() -> MonicPolynomial {
        MonicPolynomial::from_real(&[-6.0, 0.0, 50.0, -45.0, -108.0, 108.0]).unwrap()
    }

    #[test]
    fn monomial_square() {
        let p = MonicPolynomial::from_real(&[0.0, 0.0]).unwrap();
        let (v, d) = p.eval_with_derivative(c(3.0, 0.0)).unwrap();
        assert_eq!(v, c(9.0, 0.0));
        assert_eq!(d, c(6.0, 0.0));
    }

    #[test]
    fn triple_root_kills_value_and_derivative() {
        let (v, d) = sextic().eval_with_derivative(c(3.0, 0.0)).unwrap();
        assert_eq!(v, c(0.0, 0.0));
        assert_eq!(d, c(0.0, 0.0));
    }

    #[test]
    fn simple_root_has_nonzero_derivative() {
        let (v, d) = sextic().eval_with_derivative(c(1.0, 0.0)).unwrap();
        assert_eq!(v, c(0.0, 0.0));
        // (1+2)^2 (1-3)^3 = -72
        assert_eq!(d, c(-72.0, 0.0));
    }

    #[test]
    fn near_triple_root_value_is_accurate() {
        // A(3 + h) = 50 h^3 (1 + O(h)); plain binary64 Horner returns noise here
        let h = 2f64.powi(-27);
        let e = sextic().evaluate(c(3.0 + h, 0.0)).unwrap();
        let exact = (5.0 + h).powi(2) * (2.0 + h) * h.powi(3);
        assert!(
            (e.value.re - exact).abs() <= 1e-6 * exact,
            "{} vs {}",
            e.value.re,
            exact
        );
    }

    #[test]
    fn rounding_scale() {
        let e = sextic().evaluate(c(-1.0, 0.0)).unwrap();
        // intermediates 1, -7, 7, 43, -88, -20, 128 with |z| = 1
        assert_eq!(e.scale, 1.0 + 7.0 + 7.0 + 43.0 + 88.0 + 20.0 + 128.0);
    }

    #[test]
    fn rejects_degree_zero_and_nan() {
        assert!(matches!(
            MonicPolynomial::new(vec![]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            MonicPolynomial::from_real(&[f64::NAN]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let p = MonicPolynomial::from_real(&[0.0; 40]).unwrap();
        assert_eq!(p.evaluate(c(1e10, 0.0)), Err(Error::Overflow));
    }

    #[test]
    fn powers() {
        assert_eq!(integer_power(c(2.0, 0.0), 3).unwrap(), c(8.0, 0.0));
        assert_eq!(integer_power(c(0.0, 0.0), 0).unwrap(), c(1.0, 0.0));
        assert_eq!(integer_power(c(1.0, 1.0), 2).unwrap(), c(0.0, 2.0));
        assert_eq!(integer_power(c(1e200, 0.0), 2), Err(Error::Overflow));
    }
}
