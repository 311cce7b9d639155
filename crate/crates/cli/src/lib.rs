//! Command-line front end for the `gek` root finder.
//!
//! Everything runs through [`run`], which takes the argument list and the
//! three standard streams explicitly and returns the process exit code.

pub mod args;
pub mod output;
pub mod problem;

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use gek::{
    estimate_order, solve, theorem_check, ApproximationVector, Error, SolveConfig, SolveReport,
    SolveStatus,
};

use args::{Cli, Command, ConfigArgs, Format, SolveArgs, TheoremArgs};
use output::{to_canonical_json, OrderDocument, SolveDocument, TheoremDocument};
use problem::{Problem, ProblemSpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_MAX_ITERATIONS: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_NOT_GUARANTEED: u8 = 4;

pub fn exit_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Converged => EXIT_OK,
        SolveStatus::MaxIterations => EXIT_MAX_ITERATIONS,
        SolveStatus::Collision | SolveStatus::SingularDenominator | SolveStatus::Overflow => {
            EXIT_NUMERICAL
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: format!("cannot write output: {e}"),
    }
}

/// Parses `args` (program name first), executes the command and returns the
/// exit code: 0 success, 1 input error, 2 iteration budget exhausted,
/// 3 numerical failure, 4 no convergence guarantee established.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            return if informational {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            } else {
                let _ = write!(stderr, "{rendered}");
                EXIT_INPUT
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, stdin, stdout),
        Command::Demo(a) => cmd_demo(a.format, stdout),
        Command::CheckTheorem(a) => cmd_check_theorem(&a, stdin, stdout),
        Command::Order(a) => cmd_order(&a, stdin, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| input_error(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| input_error(format!("cannot read standard input: {e}")))?;
            Ok(text)
        }
    }
}

fn load(
    path: Option<&Path>,
    stdin: &mut dyn Read,
    overrides: &ConfigArgs,
) -> Result<Problem, Failure> {
    let text = read_input(path, stdin)?;
    let spec: ProblemSpec = problem::parse(&text).map_err(input_error)?;
    spec.validate(overrides).map_err(input_error)
}

fn run_solver(problem: &Problem) -> Result<SolveReport, Failure> {
    let initial = problem
        .initial
        .clone()
        .ok_or_else(|| input_error("`initial` approximations are required"))?;
    let initial = ApproximationVector::new(initial).map_err(|e| input_error(e.to_string()))?;
    solve(
        &problem.polynomial,
        &problem.multiplicities,
        &initial,
        &problem.config,
    )
    .map_err(|e| input_error(e.to_string()))
}

fn emit_report(out: &mut dyn Write, report: &SolveReport, format: Format) -> std::io::Result<()> {
    match format {
        Format::Table => output::solve_table(out, report),
        Format::Csv => output::solve_csv(out, report),
        Format::Json => writeln!(out, "{}", to_canonical_json(&SolveDocument::new(report))),
    }
}

fn cmd_solve(a: &SolveArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let problem = load(a.input.as_deref(), stdin, &a.config)?;
    let report = run_solver(&problem)?;
    emit_report(stdout, &report, a.format).map_err(io_failure)?;
    Ok(exit_code(report.status))
}

/// Solves the built-in sextic with the step tolerance of its reference run.
pub fn demo_report() -> SolveReport {
    let rs = gek::example::root_system();
    let poly = rs.to_polynomial().expect("example expands");
    let config = SolveConfig {
        step_tolerance: gek::example::STEP_TOLERANCE,
        ..SolveConfig::default()
    };
    solve(
        &poly,
        rs.multiplicities(),
        &gek::example::initial(),
        &config,
    )
    .expect("example input is valid")
}

fn cmd_demo(format: Format, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let report = demo_report();
    emit_report(stdout, &report, format).map_err(io_failure)?;
    if format == Format::Table {
        let rs = gek::example::root_system();
        let errors: Vec<String> = report
            .final_approximations
            .iter()
            .zip(rs.roots())
            .map(|(x, r)| format!("{:.1e}", (x - r).norm()))
            .collect();
        writeln!(stdout, "final errors vs (-2, 1, 3): {}", errors.join(", "))
            .map_err(io_failure)?;
    }
    Ok(exit_code(report.status))
}

fn cmd_check_theorem(
    a: &TheoremArgs,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> Result<u8, Failure> {
    let problem = load(a.input.as_deref(), stdin, &ConfigArgs::default())?;
    let rs = problem
        .true_roots
        .ok_or_else(|| input_error("check-theorem needs `roots` (or `true_roots`)"))?;
    let result = theorem_check(&rs, a.c, a.q).map_err(|e| match e {
        Error::DegenerateSystem => input_error("check-theorem needs at least two distinct roots"),
        other => input_error(other.to_string()),
    })?;
    match a.format {
        Format::Table => output::theorem_table(stdout, &rs, &result),
        Format::Csv => output::theorem_csv(stdout, &result),
        Format::Json => writeln!(
            stdout,
            "{}",
            to_canonical_json(&TheoremDocument::new(&result))
        ),
    }
    .map_err(io_failure)?;
    Ok(if result.guaranteed {
        EXIT_OK
    } else {
        EXIT_NOT_GUARANTEED
    })
}

fn cmd_order(a: &SolveArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let problem = load(a.input.as_deref(), stdin, &a.config)?;
    let rs = problem
        .true_roots
        .clone()
        .ok_or_else(|| input_error("order needs the true roots: give `roots` or `true_roots`"))?;
    let report = run_solver(&problem)?;
    let orders = match estimate_order(&report.trace, &rs) {
        Ok(v) => v,
        Err(Error::InsufficientData) => vec![None; rs.len()],
        Err(e) => return Err(input_error(e.to_string())),
    };
    match a.format {
        Format::Table => output::order_table(stdout, &report, &rs, &orders),
        Format::Csv => output::order_csv(stdout, &rs, &orders),
        Format::Json => {
            let doc = OrderDocument {
                status: report.status.as_str().to_owned(),
                iterations_used: report.iterations_used,
                roots: rs.roots().iter().map(|z| [z.re, z.im]).collect(),
                multiplicities: rs.multiplicities().to_vec(),
                orders,
            };
            writeln!(stdout, "{}", to_canonical_json(&doc))
        }
    }
    .map_err(io_failure)?;
    Ok(exit_code(report.status))
}
