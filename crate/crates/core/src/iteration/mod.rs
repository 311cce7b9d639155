//! The simultaneous iteration: single steps and the driving loop.
//!
//! Two step functions are provided. [`gek_step`] is the multiplicity-aware
//! fourth-order update; [`ek_step`] is the simple-root update it reduces to
//! when every multiplicity is one. [`solve`] drives either of them with
//! residual-based freezing and records an [`IterationTrace`].

mod solve;
mod step;

pub use solve::solve;
pub use step::{
    ek_step, gek_step, q_log_derivative, q_product, s_value, IndexQuantities, StepWorkspace,
};

use std::ops::Deref;

use crate::error::{invalid, Result};
use crate::numeric::{is_finite, Complex64, Evaluation};

/// Current approximations `x_1^[k]..x_m^[k]`, one per distinct root.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationVector(Vec<Complex64>);

impl ApproximationVector {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("approximation vector is empty"));
        }
        if let Some(i) = values.iter().position(|z| !is_finite(*z)) {
            return Err(invalid(format!("approximation {} is not finite", i + 1)));
        }
        Ok(ApproximationVector(values))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

impl Deref for ApproximationVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

/// How a sweep consumes the approximations it has already updated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateMode {
    /// Every new component is computed from the full previous vector.
    #[default]
    TotalStep,
    /// Component `i` sees the already-updated components `1..i-1`.
    /// Experimental: no convergence guarantee is claimed for this mode.
    Serial,
}

/// Which step formula [`solve`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Multiplicity-aware update ([`gek_step`]).
    #[default]
    Generalized,
    /// Simple-root update ([`ek_step`]); requires all multiplicities to be 1.
    SimpleRoots,
}

pub const DEFAULT_MAX_ITERATIONS: usize = 100;
pub const DEFAULT_STEP_TOLERANCE: f64 = 1e-14;
/// Default backward-error threshold for freezing, see [`SolveConfig::residual_tolerance`].
pub const DEFAULT_RESIDUAL_TOLERANCE: f64 = 1e-33;
pub const DEFAULT_COLLISION_THRESHOLD: f64 = 1e-12;

/// Loop control and numerical guards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub max_iterations: usize,
    /// Absolute bound on the largest update magnitude that counts as converged.
    pub step_tolerance: f64,
    /// An index is frozen once `|A(x_i)| <= residual_tolerance · scale`, with
    /// the running-error scale of [`Evaluation::scale`].
    ///
    /// The test is relative to the evaluation's rounding scale. An absolute
    /// threshold would freeze a root of multiplicity `α` as soon as `e^α` is
    /// small, long before `e` itself is. The default sits just above the
    /// rounding floor of the double-word evaluation.
    pub residual_tolerance: f64,
    /// Two approximations collide when closer than
    /// `collision_threshold · max(1, max|x_i|)`.
    pub collision_threshold: f64,
    pub update_mode: UpdateMode,
    pub method: Method,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            step_tolerance: DEFAULT_STEP_TOLERANCE,
            residual_tolerance: DEFAULT_RESIDUAL_TOLERANCE,
            collision_threshold: DEFAULT_COLLISION_THRESHOLD,
            update_mode: UpdateMode::TotalStep,
            method: Method::Generalized,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations must be at least 1"));
        }
        for (name, v) in [
            ("step_tolerance", self.step_tolerance),
            ("residual_tolerance", self.residual_tolerance),
            ("collision_threshold", self.collision_threshold),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be a positive finite number")));
            }
        }
        Ok(())
    }

    /// Whether an evaluation counts as an exact root for freezing purposes.
    pub fn is_residual_zero(&self, evaluation: &Evaluation) -> bool {
        evaluation.value.norm() <= self.residual_tolerance * evaluation.scale
    }

    pub(crate) fn collision_distance(&self, approx: &[Complex64]) -> f64 {
        let scale = approx.iter().map(|z| z.norm()).fold(1.0, f64::max);
        self.collision_threshold * scale
    }
}

/// One row of the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub approximations: Vec<Complex64>,
    /// `|A(x_i^[k])|`
    pub residuals: Vec<f64>,
    /// `|x_i^[k] - x_i^[k-1]|`; `None` for the initial record.
    pub steps: Option<Vec<f64>>,
    pub frozen: Vec<bool>,
}

impl IterationRecord {
    pub fn max_step(&self) -> Option<f64> {
        self.steps
            .as_ref()
            .map(|s| s.iter().copied().fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    Collision,
    SingularDenominator,
    Overflow,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "Converged",
            SolveStatus::MaxIterations => "MaxIterations",
            SolveStatus::Collision => "Collision",
            SolveStatus::SingularDenominator => "SingularDenominator",
            SolveStatus::Overflow => "Overflow",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub final_approximations: ApproximationVector,
    /// Number of steps applied.
    pub iterations_used: usize,
    pub trace: IterationTrace,
}
