use std::io::Write;
use std::process::{Command, Output, Stdio};

use gek_cli::output::{to_canonical_json, OrderDocument, SolveDocument, TheoremDocument};

const SEXTIC: &str = r#"{
  "roots": [-2, 1, 3],
  "multiplicities": [2, 1, 3],
  "initial": [-3, 0.1, 4],
  "config": {"step_tolerance": 1e-15}
}"#;

fn gek(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gek"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_table_matches_reference_rows() {
    let o = gek(&["solve"], SEXTIC);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let row1 = text
        .lines()
        .find(|l| l.trim_start().starts_with("1 "))
        .unwrap();
    assert!(row1.contains("-1.98938060918119"), "{row1}");
    assert!(row1.contains("0.99506465133874"), "{row1}");
    assert!(row1.contains("3.02604710332169"), "{row1}");
    assert!(text.contains("status: Converged"));
    assert!(text.contains("iterations: 3"));
}

#[test]
fn input_file_and_csv() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(SEXTIC.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap();
    let o = gek(&["solve", "--input", path, "--format", "csv"], "");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "k,x1_re,x1_im,x1_residual,x1_step,x2_re,x2_im,x2_residual,x2_step,x3_re,x3_im,x3_residual,x3_step"
    );
    assert_eq!(lines.len(), 5);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first.len(), 13);
    assert_eq!(first[4], "");
    let second: Vec<&str> = lines[2].split(',').collect();
    let x1: f64 = second[1].parse().unwrap();
    let reference: f64 = gek::example::REFERENCE_TABLE[1][0].parse().unwrap();
    assert!((x1 - reference).abs() < 1e-13);
}

#[test]
fn json_output_round_trips() {
    let o = gek(&["solve", "--format", "json"], SEXTIC);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let doc: SolveDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.status, "Converged");
    assert_eq!(doc.iterations_used, 3);
    assert!(doc.trace[0].steps.is_none());
    assert_eq!(format!("{}\n", to_canonical_json(&doc)), text);

    let o = gek(
        &[
            "check-theorem",
            "--c",
            "0.01",
            "--q",
            "0.5",
            "--format",
            "json",
        ],
        SEXTIC,
    );
    let text = stdout(&o);
    let doc: TheoremDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{}\n", to_canonical_json(&doc)), text);

    let o = gek(
        &[
            "check-theorem",
            "--c",
            "1.5",
            "--q",
            "0.5",
            "--format",
            "json",
        ],
        SEXTIC,
    );
    assert_eq!(o.status.code(), Some(4));
    let text = stdout(&o);
    let doc: TheoremDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.lhs, None);
    assert_eq!(format!("{}\n", to_canonical_json(&doc)), text);

    let o = gek(&["order", "--format", "json"], SEXTIC);
    let text = stdout(&o);
    let doc: OrderDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{}\n", to_canonical_json(&doc)), text);
}

#[test]
fn json_round_trips_for_complex_and_failed_runs() {
    let spec = r#"{"coefficients": [[0, -1], [-2, 0], [0, 3]], "multiplicities": [1, 1, 1],
                   "initial": [[0.9, 0.2], [-1.1, 0.1], [0.1, 1.3]], "config": {"max_iterations": 1}}"#;
    let o = gek(&["solve", "--format", "json"], spec);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let text = stdout(&o);
    let doc: SolveDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.status, "MaxIterations");
    assert_eq!(format!("{}\n", to_canonical_json(&doc)), text);
}

#[test]
fn exit_codes() {
    // multiplicities do not match the degree
    let o = gek(
        &["solve"],
        r#"{"coefficients": [1, 2, 3], "multiplicities": [1, 1], "initial": [0, 1]}"#,
    );
    assert_eq!(o.status.code(), Some(1));
    // coincident initial guesses
    let o = gek(
        &["solve"],
        r#"{"roots": [-2, 1, 3], "multiplicities": [2, 1, 3], "initial": [0.5, 0.5, 4]}"#,
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("Collision"));
    // iteration budget
    let o = gek(&["solve", "--max-iter", "1"], SEXTIC);
    assert_eq!(o.status.code(), Some(2));
    // unknown flag is an input error, not a solver status
    let o = gek(&["solve", "--bogus"], SEXTIC);
    assert_eq!(o.status.code(), Some(1));
    let o = gek(&["--help"], "");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn malformed_input_reports_the_line() {
    let o = gek(
        &["solve"],
        "{\n  \"roots\": [1, 2],\n  \"multiplicities\": [1, 1,\n}",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
    let o = gek(&["solve", "--input", "/nonexistent/problem.json"], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_theorem_exit_codes() {
    let o = gek(&["check-theorem", "--c", "0.01", "--q", "0.5"], SEXTIC);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("guarantee established"));
    let o = gek(&["check-theorem", "--c", "1.5", "--q", "0.5"], SEXTIC);
    assert_eq!(o.status.code(), Some(4));
    let text = stdout(&o);
    assert!(text.contains("no guarantee established"), "{text}");
    assert!(!text.contains("will not converge"));
    let o = gek(&["check-theorem", "--c", "0.01", "--q", "2"], SEXTIC);
    assert_eq!(o.status.code(), Some(4));
    let o = gek(
        &["check-theorem", "--c", "0.01", "--q", "0.5"],
        r#"{"roots": [1], "multiplicities": [3]}"#,
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn order_reports_estimates_or_na() {
    let o = gek(&["order"], SEXTIC);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("n/a"), "{text}");
    // an exact start leaves a single record: nothing to estimate
    let exact = r#"{"roots": [-2, 1, 3], "multiplicities": [2, 1, 3], "initial": [-2, 1, 3]}"#;
    let o = gek(&["order", "--format", "csv"], exact);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("n/a").count(), 3);
    // order needs the true roots
    let o = gek(
        &["order"],
        r#"{"coefficients": [0, -1], "multiplicities": [1, 1], "initial": [0.9, -0.8]}"#,
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simple_root_cubic_through_the_simple_method() {
    let spec = r#"{"coefficients": [-6, 11, -6], "true_roots": [1, 2, 3], "multiplicities": [1, 1, 1],
                   "initial": [0.9, 2.1, 3.1]}"#;
    let o = gek(&["order", "--method", "ek", "--format", "json"], spec);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: OrderDocument = serde_json::from_str(&stdout(&o)).unwrap();
    let estimates: Vec<f64> = doc.orders.iter().flatten().copied().collect();
    assert!(!estimates.is_empty());
    for p in estimates {
        assert!((3.5..=4.5).contains(&p), "{:?}", doc.orders);
    }
}

#[test]
fn serial_mode_flag() {
    let o = gek(&["solve", "--mode", "serial", "--format", "json"], SEXTIC);
    assert_eq!(o.status.code(), Some(0));
    let doc: SolveDocument = serde_json::from_str(&stdout(&o)).unwrap();
    for (x, r) in doc.final_approximations.iter().zip([-2.0, 1.0, 3.0]) {
        assert!((x[0] - r).abs() < 1e-12 && x[1].abs() < 1e-12);
    }
}
