//! The JSON problem description.
//!
//! ```json
//! {
//!   "roots": [-2, 1, 3],
//!   "multiplicities": [2, 1, 3],
//!   "initial": [-3, 0.1, [4, 0]],
//!   "config": { "step_tolerance": 1e-15 }
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and reals may be plain numbers. The
//! polynomial is given either by `roots` or by `coefficients`, the
//! non-leading coefficients `a_1..a_n` of the monic `x^n + a_1 x^(n-1) + ... + a_n`.

use std::fmt;

use gek::{Complex64, Method, MonicPolynomial, RootSystem, SolveConfig, UpdateMode};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::Deserialize;

use crate::args::{ConfigArgs, MethodArg, Mode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexInput(pub Complex64);

impl<'de> Deserialize<'de> for ComplexInput {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ComplexVisitor;

        impl<'de> Visitor<'de> for ComplexVisitor {
            type Value = ComplexInput;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a [re, im] pair")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ComplexInput, E> {
                Ok(ComplexInput(Complex64::new(v, 0.0)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ComplexInput, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ComplexInput, E> {
                self.visit_f64(v as f64)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<ComplexInput, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(ComplexInput(Complex64::new(re, im)))
            }
        }

        deserializer.deserialize_any(ComplexVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeInput {
    Total,
    Serial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodInput {
    Gek,
    Ek,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigInput {
    pub max_iterations: Option<usize>,
    pub step_tolerance: Option<f64>,
    pub residual_tolerance: Option<f64>,
    pub collision_threshold: Option<f64>,
    pub update_mode: Option<ModeInput>,
    pub method: Option<MethodInput>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub coefficients: Option<Vec<ComplexInput>>,
    pub roots: Option<Vec<ComplexInput>>,
    pub multiplicities: Vec<u32>,
    pub initial: Option<Vec<ComplexInput>>,
    /// Known roots for the order estimate when `coefficients` is the source.
    pub true_roots: Option<Vec<ComplexInput>>,
    #[serde(default)]
    pub config: ConfigInput,
}

/// A validated problem, ready for the solver.
#[derive(Debug, Clone)]
pub struct Problem {
    pub polynomial: MonicPolynomial,
    pub multiplicities: Vec<u32>,
    pub initial: Option<Vec<Complex64>>,
    pub true_roots: Option<RootSystem>,
    pub config: SolveConfig,
}

fn complexes(values: &[ComplexInput]) -> Vec<Complex64> {
    values.iter().map(|c| c.0).collect()
}

pub fn parse(text: &str) -> Result<ProblemSpec, String> {
    serde_json::from_str(text).map_err(|e| format!("malformed problem: {e}"))
}

impl ProblemSpec {
    /// Checks the invariants and applies the command-line overrides on top of
    /// the document's own `config`.
    pub fn validate(self, overrides: &ConfigArgs) -> Result<Problem, String> {
        let m = self.multiplicities.len();
        if m == 0 {
            return Err("multiplicities must not be empty".into());
        }
        if self.multiplicities.contains(&0) {
            return Err("multiplicities must be positive".into());
        }
        let degree: usize = self.multiplicities.iter().map(|&a| a as usize).sum();

        let (polynomial, root_system) = match (&self.coefficients, &self.roots) {
            (Some(_), Some(_)) => {
                return Err("give either `coefficients` or `roots`, not both".into());
            }
            (None, None) => return Err("one of `coefficients` or `roots` is required".into()),
            (Some(coefficients), None) => {
                if coefficients.len() != degree {
                    return Err(format!(
                        "multiplicities sum to {degree} but {} coefficients were given",
                        coefficients.len()
                    ));
                }
                let p = MonicPolynomial::new(complexes(coefficients)).map_err(|e| e.to_string())?;
                (p, None)
            }
            (None, Some(roots)) => {
                if roots.len() != m {
                    return Err(format!("{} roots but {m} multiplicities", roots.len()));
                }
                let rs = RootSystem::new(complexes(roots), self.multiplicities.clone())
                    .map_err(|e| e.to_string())?;
                let p = rs.to_polynomial().map_err(|e| e.to_string())?;
                (p, Some(rs))
            }
        };

        let true_roots = match (&self.true_roots, root_system) {
            (Some(_), Some(_)) => {
                return Err("`true_roots` is only used together with `coefficients`".into());
            }
            (Some(t), None) => {
                if t.len() != m {
                    return Err(format!("{} true roots but {m} multiplicities", t.len()));
                }
                Some(
                    RootSystem::new(complexes(t), self.multiplicities.clone())
                        .map_err(|e| e.to_string())?,
                )
            }
            (None, rs) => rs,
        };

        if let Some(initial) = &self.initial {
            if initial.len() != m {
                return Err(format!(
                    "{} initial approximations but {m} multiplicities",
                    initial.len()
                ));
            }
        }

        let config = build_config(&self.config, overrides)?;
        Ok(Problem {
            polynomial,
            multiplicities: self.multiplicities,
            initial: self.initial.as_deref().map(complexes),
            true_roots,
            config,
        })
    }
}

fn build_config(input: &ConfigInput, overrides: &ConfigArgs) -> Result<SolveConfig, String> {
    let mut config = SolveConfig::default();
    if let Some(v) = overrides.max_iterations.or(input.max_iterations) {
        config.max_iterations = v;
    }
    if let Some(v) = overrides.step_tolerance.or(input.step_tolerance) {
        config.step_tolerance = v;
    }
    if let Some(v) = overrides.residual_tolerance.or(input.residual_tolerance) {
        config.residual_tolerance = v;
    }
    if let Some(v) = input.collision_threshold {
        config.collision_threshold = v;
    }
    let mode = match (overrides.mode, input.update_mode) {
        (Some(Mode::Serial), _) | (None, Some(ModeInput::Serial)) => UpdateMode::Serial,
        _ => UpdateMode::TotalStep,
    };
    config.update_mode = mode;
    config.method = match (overrides.method, input.method) {
        (Some(MethodArg::Ek), _) | (None, Some(MethodInput::Ek)) => Method::SimpleRoots,
        _ => Method::Generalized,
    };
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_pairs() {
        let spec = parse(r#"{"roots": [1, [0, 2], -0.5], "multiplicities": [1, 1, 1]}"#).unwrap();
        let roots = complexes(spec.roots.as_ref().unwrap());
        assert_eq!(
            roots,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(-0.5, 0.0)
            ]
        );
    }

    #[test]
    fn parse_errors_carry_a_position() {
        let err =
            parse("{\n  \"roots\": [1, [0, 2, 3]],\n  \"multiplicities\": [1, 1]\n}").unwrap_err();
        assert!(err.contains("line 2"), "{err}");
        let err = parse(r#"{"roots": [1], "multiplicities": [1], "extra": 0}"#).unwrap_err();
        assert!(err.contains("unknown field"), "{err}");
    }

    #[test]
    fn validation() {
        let none = ConfigArgs::default();
        let check = |text: &str| parse(text).unwrap().validate(&none);
        assert!(check(r#"{"roots": [1, 2], "multiplicities": [1, 1]}"#).is_ok());
        assert!(check(r#"{"coefficients": [0, 0], "roots": [0], "multiplicities": [2]}"#).is_err());
        assert!(check(r#"{"coefficients": [0, 0, 0], "multiplicities": [2]}"#).is_err());
        assert!(check(r#"{"roots": [1, 2], "multiplicities": [1, 1], "initial": [0]}"#).is_err());
        assert!(check(r#"{"roots": [1], "multiplicities": [0]}"#).is_err());
        assert!(check(
            r#"{"roots": [1], "multiplicities": [1], "config": {"step_tolerance": -1}}"#
        )
        .is_err());
    }

    #[test]
    fn flags_override_the_document() {
        let spec = parse(
            r#"{"roots": [1], "multiplicities": [1],
                "config": {"max_iterations": 7, "update_mode": "serial", "step_tolerance": 1e-9}}"#,
        )
        .unwrap();
        let flags = ConfigArgs {
            max_iterations: Some(3),
            mode: Some(Mode::Total),
            ..ConfigArgs::default()
        };
        let config = spec.validate(&flags).unwrap().config;
        assert_eq!(config.max_iterations, 3);
        assert_eq!(config.update_mode, UpdateMode::TotalStep);
        assert_eq!(config.step_tolerance, 1e-9);
    }
}
