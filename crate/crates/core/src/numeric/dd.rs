//! Double-word complex accumulator used by the compensated Horner scheme.
//!
//! Each real part is kept as an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
//! Only the two operations the Horner recurrence needs are provided:
//! multiplication by a binary64 complex number and addition.

use num_complex::Complex64;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct DoubleWord {
    hi: f64,
    lo: f64,
}

impl DoubleWord {
    pub(crate) fn from_f64(x: f64) -> Self {
        DoubleWord { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, other: DoubleWord) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (hi, lo) = fast_two_sum(s, e + (self.lo + other.lo));
        DoubleWord { hi, lo }
    }

    fn neg(self) -> Self {
        DoubleWord {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn mul_f64(self, y: f64) -> Self {
        let (p, e) = two_prod(self.hi, y);
        let (hi, lo) = fast_two_sum(p, e + self.lo * y);
        DoubleWord { hi, lo }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct DoubleWordComplex {
    re: DoubleWord,
    im: DoubleWord,
}

impl DoubleWordComplex {
    pub(crate) fn from_complex(z: Complex64) -> Self {
        DoubleWordComplex {
            re: DoubleWord::from_f64(z.re),
            im: DoubleWord::from_f64(z.im),
        }
    }

    pub(crate) fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `self * z + c`
    pub(crate) fn mul_add(self, z: Complex64, c: DoubleWordComplex) -> Self {
        let re = self
            .re
            .mul_f64(z.re)
            .add(self.im.mul_f64(z.im).neg())
            .add(c.re);
        let im = self.re.mul_f64(z.im).add(self.im.mul_f64(z.re)).add(c.im);
        DoubleWordComplex { re, im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_prod_is_error_free() {
        let a = 1.0 + f64::EPSILON;
        let b = 1.0 - f64::EPSILON;
        let (p, e) = two_prod(a, b);
        // a*b = 1 - eps^2 exactly
        assert_eq!(p, 1.0);
        assert_eq!(e, -f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn cancellation_keeps_low_word() {
        // (1 + 2^-60) - 1 survives in double-word arithmetic
        let tiny = 2f64.powi(-60);
        let x = DoubleWord::from_f64(1.0).add(DoubleWord::from_f64(tiny));
        let y = x.add(DoubleWord::from_f64(-1.0));
        assert_eq!(y.to_f64(), tiny);
    }
}
