//! Simultaneous computation of all roots of a monic complex polynomial whose
//! roots have known multiplicities.
//!
//! The core update is a fourth-order generalization of the Ehrlich-Kjurkchiev
//! iteration. It needs only the polynomial value and first derivative at each
//! approximation:
//!
//! ```text
//! x_i ← x_i - α_i / [ S_i + Σ_{j≠i} α_j A(x_j) (S_j/α_j)^(α_j-1) / (Q_j (x_j - x_i)^2) ]
//! S_p = A'(x_p)/A(x_p) - Σ_{l≠p} α_l / (x_p - x_l)
//! Q_p = Π_{l≠p} (x_p - x_l)^α_l
//! ```
//!
//! ```
//! use gek::{solve, ApproximationVector, RootSystem, SolveConfig, SolveStatus};
//!
//! // (x + 2)^2 (x - 1) (x - 3)^3
//! let system = RootSystem::from_real(&[-2.0, 1.0, 3.0], &[2, 1, 3])?;
//! let poly = system.to_polynomial()?;
//! let start = ApproximationVector::from_real(&[-3.0, 0.1, 4.0])?;
//! let report = solve(&poly, system.multiplicities(), &start, &SolveConfig::default())?;
//! assert_eq!(report.status, SolveStatus::Converged);
//! assert_eq!(report.iterations_used, 3);
//! # Ok::<(), gek::Error>(())
//! ```
//!
//! The guide under `book/` walks through the method, the convergence
//! guarantee and the command-line tool; its code listings are compiled and
//! run as doctests of this crate.

pub mod error;
pub mod example;
pub mod iteration;
pub mod numeric;
pub mod rootsystem;
pub mod theory;

pub use error::{Error, Result};
pub use iteration::{
    ek_step, gek_step, q_log_derivative, q_product, s_value, solve, ApproximationVector,
    IterationRecord, IterationTrace, Method, SolveConfig, SolveReport, SolveStatus, UpdateMode,
};
pub use numeric::{integer_power, Complex64, Evaluation, MonicPolynomial};
pub use rootsystem::RootSystem;
pub use theory::{
    error_bound, estimate_order, theorem_check, TheoremCheckResult, TheoremConstants,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/iteration.md")]
    mod iteration {}
    #[doc = include_str!("../../../book/src/convergence.md")]
    mod convergence {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
