//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Every randomized criterion draws from a fixed seed and
//! uses all the cases it draws.

use std::f64::consts::TAU;
use std::io::Cursor;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gek::iteration::StepWorkspace;
use gek::{
    ek_step, estimate_order, gek_step, s_value, solve, theorem_check, ApproximationVector,
    Complex64, RootSystem, SolveConfig, SolveStatus, UpdateMode,
};
use gek_cli::output::SolveDocument;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn polar(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius, rng.random_range(0.0..TAU))
}

/// Distinct roots drawn from the integer grid of `[-3, 3]^2` plus a common
/// shift in `{0, 1/2}^2`: separation is at least 1 and every coefficient of
/// the expanded polynomial is exact.
fn grid_system(rng: &mut ChaCha8Rng, m: usize, multiplicities: Vec<u32>) -> RootSystem {
    let shift = Complex64::new(
        f64::from(rng.random_range(0..2u8)) / 2.0,
        f64::from(rng.random_range(0..2u8)) / 2.0,
    );
    let mut roots: Vec<Complex64> = Vec::with_capacity(m);
    while roots.len() < m {
        let z = Complex64::new(
            f64::from(rng.random_range(-3..=3)),
            f64::from(rng.random_range(-3..=3)),
        ) + shift;
        if !roots.contains(&z) {
            roots.push(z);
        }
    }
    RootSystem::new(roots, multiplicities).expect("grid roots are distinct")
}

fn perturb(rng: &mut ChaCha8Rng, roots: &[Complex64], max: f64) -> ApproximationVector {
    let v = roots
        .iter()
        .map(|x| {
            let r = rng.random_range(0.0..max);
            x + polar(rng, r)
        })
        .collect();
    ApproximationVector::new(v).expect("finite start")
}

fn errors(approx: &[Complex64], rs: &RootSystem) -> Vec<f64> {
    approx
        .iter()
        .zip(rs.roots())
        .map(|(x, r)| (x - r).norm())
        .collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let row1_reference = gek::example::REFERENCE_TABLE[1].map(|v| v.parse::<f64>().unwrap());
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = gek_cli::run(
        ["gek", "demo", "--format", "json"],
        &mut Cursor::new(Vec::new()),
        &mut out,
        &mut err,
    );
    let elapsed = start.elapsed();
    let doc: SolveDocument = match serde_json::from_slice(&out) {
        Ok(d) => d,
        Err(e) => return outcome(false, format!("demo output unreadable: {e}")),
    };
    let row1 = &doc.trace[1].approximations;
    let row_error = row1_reference
        .iter()
        .zip(row1)
        .map(|(r, x)| ((x[0] - r).abs() / r.abs()).max(x[1].abs()))
        .fold(0.0, f64::max);
    let rs = gek::example::root_system();
    let finals: Vec<Complex64> = doc
        .final_approximations
        .iter()
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    let final_error = max_of(&errors(&finals, &rs));
    let pass = code == 0
        && row_error <= 5e-12
        && doc.status == "Converged"
        && doc.iterations_used == 3
        && final_error <= 1e-14
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "row 1 relative error {row_error:.1e}, {} after {} iterations, final error {final_error:.1e}, {elapsed:?}",
            doc.status, doc.iterations_used
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = rng(2);
    let config = SolveConfig::default();
    let cases = 200;
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..cases {
        let n = rng.random_range(1..=8);
        let mut roots = Vec::with_capacity(n);
        while roots.len() < n {
            let z = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            if roots.iter().all(|r: &Complex64| (r - z).norm() >= 0.5) {
                roots.push(z);
            }
        }
        let ones = vec![1; n];
        let poly = RootSystem::new(roots.clone(), ones.clone())
            .unwrap()
            .to_polynomial()
            .unwrap();
        let approx = perturb(&mut rng, &roots, 0.1);
        let (g, e) = match (
            gek_step(&poly, &approx, &ones, &config, None),
            ek_step(&poly, &approx, &config, None),
        ) {
            (Ok(g), Ok(e)) => (g, e),
            _ => {
                failures += 1;
                continue;
            }
        };
        for (a, b) in g.iter().zip(e.iter()) {
            worst = worst.max((a - b).norm() / b.norm());
        }
    }
    outcome(
        failures == 0 && worst <= 1e-10,
        format!("{cases} problems, worst relative difference {worst:.1e}, {failures} step errors"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut fixtures: Vec<(String, RootSystem, ApproximationVector, SolveConfig)> = vec![(
        "reference sextic".into(),
        gek::example::root_system(),
        gek::example::initial(),
        SolveConfig {
            step_tolerance: gek::example::STEP_TOLERANCE,
            ..SolveConfig::default()
        },
    )];
    let mut rng = rng(3);
    for f in 0..10 {
        let (m, alphas) = loop {
            let m = rng.random_range(2..=5);
            let alphas: Vec<u32> = (0..m).map(|_| rng.random_range(1..=3)).collect();
            let n: u32 = alphas.iter().sum();
            if n <= 8 && alphas.iter().any(|&a| a > 1) {
                break (m, alphas);
            }
        };
        let rs = grid_system(&mut rng, m, alphas);
        let start: Vec<Complex64> = rs
            .roots()
            .iter()
            .map(|x| x + polar(&mut rng, 1e-2))
            .collect();
        let initial = ApproximationVector::new(start).unwrap();
        fixtures.push((format!("random #{f}"), rs, initial, SolveConfig::default()));
    }

    let mut estimated = 0;
    let mut outside = Vec::new();
    let mut problems = Vec::new();
    for (name, rs, initial, config) in &fixtures {
        let poly = rs.to_polynomial().unwrap();
        let report = solve(&poly, rs.multiplicities(), initial, config).unwrap();
        if report.status != SolveStatus::Converged {
            problems.push(format!("{name}: {}", report.status.as_str()));
        }
        let orders = estimate_order(&report.trace, rs).unwrap_or_else(|_| vec![None; rs.len()]);
        for (i, p) in orders.iter().enumerate() {
            if let Some(p) = p {
                estimated += 1;
                if !(3.5..=4.5).contains(p) {
                    outside.push(format!(
                        "{name} x{} (multiplicity {}): {p:.3}",
                        i + 1,
                        rs.multiplicities()[i]
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = outside.is_empty()
        && problems.is_empty()
        && estimated > 0
        && elapsed < Duration::from_secs(5);
    let mut detail = format!(
        "{} fixtures, {estimated} per-root estimates, {} outside [3.5, 4.5], {elapsed:?}",
        fixtures.len(),
        outside.len()
    );
    for line in outside.iter().chain(&problems) {
        detail.push_str("\n      ");
        detail.push_str(line);
    }
    outcome(pass, detail)
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let config = SolveConfig::default();
    let cases = 1200;
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..cases {
        let m = rng.random_range(1..=5);
        let alphas: Vec<u32> = (0..m).map(|_| rng.random_range(1..=3)).collect();
        let rs = grid_system(&mut rng, m, alphas);
        let poly = rs.to_polynomial().unwrap();
        let approx: Vec<Complex64> = rs
            .roots()
            .iter()
            .map(|x| {
                let r = rng.random_range(1e-3..0.3);
                x + polar(&mut rng, r)
            })
            .collect();
        let approx = ApproximationVector::new(approx).unwrap();
        let i = rng.random_range(0..m);
        let xi = approx[i];
        let mut expected = Complex64::new(0.0, 0.0);
        for (j, (root, &a)) in rs.roots().iter().zip(rs.multiplicities()).enumerate() {
            expected += f64::from(a) / (xi - root);
            if j != i {
                expected -= f64::from(a) / (xi - approx[j]);
            }
        }
        match s_value(&poly, &approx, rs.multiplicities(), i, &config) {
            Ok(s) => worst = worst.max((s - expected).norm() / expected.norm()),
            Err(_) => errors += 1,
        }
    }
    outcome(
        errors == 0 && worst <= 1e-10,
        format!("{cases} triples, worst relative difference {worst:.1e}, {errors} errors"),
    )
}

fn criterion_5() -> Outcome {
    let rs = gek::example::root_system();
    let (c, q) = (0.01, 0.5);
    let check = theorem_check(&rs, c, q).unwrap();
    if !check.guaranteed {
        return outcome(false, "theorem_check does not report a guarantee".into());
    }
    let poly = rs.to_polynomial().unwrap();
    let mut rng = rng(5);
    let mut violations = Vec::new();
    let mut worst_ratio = [0.0f64; 2];
    for run in 0..50 {
        let initial = perturb(&mut rng, rs.roots(), c * q);
        let report = solve(
            &poly,
            rs.multiplicities(),
            &initial,
            &SolveConfig::default(),
        )
        .unwrap();
        if report.status != SolveStatus::Converged {
            violations.push(format!("run {run}: {}", report.status.as_str()));
            continue;
        }
        let records = &report.trace.records;
        for k in 1..=2u32 {
            let record = &records[(k as usize).min(records.len() - 1)];
            let e = max_of(&errors(&record.approximations, &rs));
            let bound = gek::error_bound(c, q, k);
            worst_ratio[k as usize - 1] = worst_ratio[k as usize - 1].max(e / bound);
            if e >= bound {
                violations.push(format!("run {run}, k = {k}: error {e:.2e} >= {bound:.2e}"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "lhs {:.3e}, 50 starts, worst error/bound {:.1e} (k=1), {:.1e} (k=2){}",
            check.lhs,
            worst_ratio[0],
            worst_ratio[1],
            violations
                .iter()
                .map(|v| format!("\n      {v}"))
                .collect::<String>()
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = rng(6);
    let systems = 200;
    let mut recovered = 0;
    let mut classified = 0;
    let mut wrong = Vec::new();
    for s in 0..systems {
        let m = rng.random_range(1..=5);
        let alphas: Vec<u32> = (0..m).map(|_| rng.random_range(1..=3)).collect();
        let rs = grid_system(&mut rng, m, alphas);
        let poly = rs.to_polynomial().unwrap();
        let initial = perturb(&mut rng, rs.roots(), 0.1);
        let report = solve(
            &poly,
            rs.multiplicities(),
            &initial,
            &SolveConfig::default(),
        )
        .unwrap();
        let error = max_of(&errors(&report.final_approximations, &rs));
        match report.status {
            SolveStatus::Converged if error <= 1e-10 => recovered += 1,
            SolveStatus::Converged => {
                wrong.push(format!("system {s}: Converged with error {error:.2e}"))
            }
            _ => classified += 1,
        }
    }
    let rate = f64::from(recovered) / f64::from(systems);
    let mut detail = format!(
        "{recovered}/{systems} recovered to 1e-10 ({:.1}%), {classified} classified failures, {} wrong Converged",
        100.0 * rate,
        wrong.len()
    );
    for w in &wrong {
        detail.push_str("\n      ");
        detail.push_str(w);
    }
    outcome(rate >= 0.95 && wrong.is_empty(), detail)
}

fn criterion_7() -> Outcome {
    let rs = gek::example::root_system();
    let poly = rs.to_polynomial().unwrap();
    let alphas = rs.multiplicities();
    let config = SolveConfig::default();
    let mut notes = Vec::new();

    let coincident = ApproximationVector::from_real(&[0.5, 0.5, 4.0]).unwrap();
    let collision =
        solve(&poly, alphas, &coincident, &config).unwrap().status == SolveStatus::Collision;
    if !collision {
        notes.push("coincident start did not report Collision".to_owned());
    }

    let exact = ApproximationVector::from_real(&gek::example::ROOTS).unwrap();
    let report = solve(&poly, alphas, &exact, &config).unwrap();
    let immediate = report.status == SolveStatus::Converged
        && report.iterations_used == 0
        && report.trace.records[0].frozen.iter().all(|&f| f);
    if !immediate {
        notes.push("exact roots were not frozen immediately".to_owned());
    }

    let mut preserved = true;
    let start = ApproximationVector::from_real(&[-2.3, 0.8, 3.2]).unwrap();
    for mode in [UpdateMode::TotalStep, UpdateMode::Serial] {
        let config = SolveConfig {
            update_mode: mode,
            ..SolveConfig::default()
        };
        for mask in 0..7u8 {
            let frozen: Vec<bool> = (0..3).map(|i| mask & (1 << i) != 0).collect();
            let next = gek_step(&poly, &start, alphas, &config, Some(&frozen)).unwrap();
            for i in (0..3).filter(|&i| frozen[i]) {
                preserved &= next[i].re.to_bits() == start[i].re.to_bits()
                    && next[i].im.to_bits() == start[i].im.to_bits();
            }
            let ws = StepWorkspace::generalized(&poly, &start, alphas, &frozen, &config).unwrap();
            for i in (0..3).filter(|&i| frozen[i]) {
                preserved &= ws.generalized_update(&start, alphas, i).unwrap() == start[i];
            }
        }
    }
    // once frozen inside a run, a component keeps its bits until the end
    let report = solve(&poly, alphas, &gek::example::initial(), &config).unwrap();
    let records = &report.trace.records;
    for (k, r) in records.iter().enumerate() {
        for i in (0..3).filter(|&i| r.frozen[i]) {
            for later in &records[k..] {
                preserved &= later.approximations[i].re.to_bits()
                    == r.approximations[i].re.to_bits()
                    && later.approximations[i].im.to_bits() == r.approximations[i].im.to_bits();
            }
        }
    }
    if !preserved {
        notes.push("a frozen component changed".to_owned());
    }

    let pass = notes.is_empty();
    let detail = if pass {
        "Collision on coincident start, 0 iterations on exact roots, frozen components bitwise preserved".to_owned()
    } else {
        notes.join("; ")
    };
    outcome(pass, detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        ("reference table reproduction", criterion_1),
        ("simple-root equivalence", criterion_2),
        ("fourth-order convergence", criterion_3),
        ("partial-fraction identity", criterion_4),
        ("error bound soundness", criterion_5),
        ("round-trip recovery", criterion_6),
        ("guards", criterion_7),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        if !result.pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {}",
            if result.pass { "PASS" } else { "FAIL" },
            n + 1,
            result.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
