//! Distinct roots with known multiplicities.

use crate::error::{invalid, Error, Result};
use crate::numeric::{check_finite, is_finite, Complex64, MonicPolynomial};

/// Minimum pairwise distance, relative to `max(1, max|x_i|)`, below which
/// two roots are considered coincident.
pub const DISTINCTNESS_TOLERANCE: f64 = 1e-12;

/// Distinct roots `x_1..x_m` with multiplicities `α_1..α_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    roots: Vec<Complex64>,
    multiplicities: Vec<u32>,
}

impl RootSystem {
    /// Validates and builds a root system.
    ///
    /// Roots closer than [`DISTINCTNESS_TOLERANCE`]` · max(1, max|x_i|)` are
    /// rejected; the caller should merge them into one root of higher
    /// multiplicity.
    pub fn new(roots: Vec<Complex64>, multiplicities: Vec<u32>) -> Result<Self> {
        if roots.is_empty() {
            return Err(invalid("a root system needs at least one root"));
        }
        if roots.len() != multiplicities.len() {
            return Err(invalid(format!(
                "{} roots but {} multiplicities",
                roots.len(),
                multiplicities.len()
            )));
        }
        if let Some(i) = multiplicities.iter().position(|&a| a == 0) {
            return Err(invalid(format!("multiplicity of root {} is zero", i + 1)));
        }
        if let Some(i) = roots.iter().position(|z| !is_finite(*z)) {
            return Err(invalid(format!("root {} is not finite", i + 1)));
        }
        let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if (roots[i] - roots[j]).norm() < DISTINCTNESS_TOLERANCE * scale {
                    return Err(invalid(format!(
                        "roots {} and {} coincide; merge them into one root of higher multiplicity",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(RootSystem {
            roots,
            multiplicities,
        })
    }

    /// Real roots, for convenience.
    pub fn from_real(roots: &[f64], multiplicities: &[u32]) -> Result<Self> {
        Self::new(
            roots.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
            multiplicities.to_vec(),
        )
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// Number of distinct roots.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `n = Σ α_i`.
    pub fn degree(&self) -> usize {
        self.multiplicities.iter().map(|&a| a as usize).sum()
    }

    /// Expands `Π (x - x_i)^α_i`, multiplying linear factors in ascending index order.
    pub fn to_polynomial(&self) -> Result<MonicPolynomial> {
        // full coefficient list, highest degree first
        let mut coeffs = Vec::with_capacity(self.degree() + 1);
        coeffs.push(Complex64::new(1.0, 0.0));
        for (&root, &alpha) in self.roots.iter().zip(&self.multiplicities) {
            for _ in 0..alpha {
                coeffs.push(Complex64::new(0.0, 0.0));
                for k in (1..coeffs.len()).rev() {
                    coeffs[k] = check_finite(coeffs[k] - root * coeffs[k - 1])?;
                }
            }
        }
        MonicPolynomial::new(coeffs.split_off(1))
    }

    /// `d = min_{i≠j} |x_i - x_j|`.
    pub fn separation(&self) -> Result<f64> {
        if self.roots.len() < 2 {
            return Err(Error::DegenerateSystem);
        }
        let mut d = f64::INFINITY;
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                d = d.min((a - b).norm());
            }
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: &[Complex64]) -> Vec<f64> {
        v.iter().map(|z| z.re).collect()
    }

    #[test]
    fn expands_example_sextic() {
        let rs = RootSystem::from_real(&[-2.0, 1.0, 3.0], &[2, 1, 3]).unwrap();
        let p = rs.to_polynomial().unwrap();
        assert_eq!(
            re(p.coefficients()),
            vec![-6.0, 0.0, 50.0, -45.0, -108.0, 108.0]
        );
        for &r in rs.roots() {
            assert_eq!(p.evaluate(r).unwrap().value.norm(), 0.0);
        }
    }

    #[test]
    fn small_expansions() {
        let p = RootSystem::from_real(&[0.0], &[1])
            .unwrap()
            .to_polynomial()
            .unwrap();
        assert_eq!(re(p.coefficients()), vec![0.0]);
        let p = RootSystem::from_real(&[5.0], &[2])
            .unwrap()
            .to_polynomial()
            .unwrap();
        assert_eq!(re(p.coefficients()), vec![-10.0, 25.0]);
    }

    #[test]
    fn separations() {
        let d = |roots: Vec<Complex64>| {
            let m = roots.len();
            RootSystem::new(roots, vec![1; m])
                .unwrap()
                .separation()
                .unwrap()
        };
        let r = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(d(vec![r(-2.0), r(1.0), r(3.0)]), 2.0);
        assert_eq!(d(vec![r(0.0), r(1.0)]), 1.0);
        assert_eq!(d(vec![r(0.0), Complex64::new(0.0, 3.0), r(4.0)]), 3.0);
    }

    #[test]
    fn single_root_has_no_separation() {
        let rs = RootSystem::from_real(&[1.0], &[4]).unwrap();
        assert_eq!(rs.separation(), Err(Error::DegenerateSystem));
    }

    #[test]
    fn rejects_bad_systems() {
        assert!(RootSystem::from_real(&[], &[]).is_err());
        assert!(RootSystem::from_real(&[1.0, 2.0], &[1]).is_err());
        assert!(RootSystem::from_real(&[1.0], &[0]).is_err());
        assert!(RootSystem::from_real(&[1.0, 1.0 + 1e-14], &[1, 1]).is_err());
        assert!(RootSystem::from_real(&[1.0, 1.0 + 1e-9], &[1, 1]).is_ok());
    }
}
