//! Table, CSV and canonical JSON renderings.
//!
//! Machine formats print every float with 17 significant digits
//! (`-1.0000000000000001e-1` for `-0.1`), enough to recover the binary64
//! value exactly. JSON fields always appear in the same order, so re-emitting a
//! parsed document reproduces it byte for byte.

use std::io::{self, Write};

use gek::{Complex64, RootSystem, SolveReport, TheoremCheckResult};
use serde::{Deserialize, Serialize};

/// Formats `v` with 17 significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// A `serde_json` formatter that writes floats via [`sci`].
struct Canonical;

impl serde_json::ser::Formatter for Canonical {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sci(value).as_bytes())
    }
}

/// Serializes `value` as one canonical JSON line.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut buffer = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut buffer, Canonical);
    value
        .serialize(&mut serializer)
        .expect("in-memory serialization cannot fail");
    String::from_utf8(buffer).expect("serde_json writes UTF-8")
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordDocument {
    pub k: usize,
    pub approximations: Vec<[f64; 2]>,
    pub residuals: Vec<f64>,
    pub steps: Option<Vec<f64>>,
    pub frozen: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveDocument {
    pub status: String,
    pub iterations_used: usize,
    pub final_approximations: Vec<[f64; 2]>,
    pub trace: Vec<RecordDocument>,
}

impl SolveDocument {
    pub fn new(report: &SolveReport) -> Self {
        SolveDocument {
            status: report.status.as_str().to_owned(),
            iterations_used: report.iterations_used,
            final_approximations: report
                .final_approximations
                .iter()
                .copied()
                .map(pair)
                .collect(),
            trace: report
                .trace
                .records
                .iter()
                .map(|r| RecordDocument {
                    k: r.k,
                    approximations: r.approximations.iter().copied().map(pair).collect(),
                    residuals: r.residuals.clone(),
                    steps: r.steps.clone(),
                    frozen: r.frozen.clone(),
                })
                .collect(),
        }
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// `M`, `N`, `lhs` and the margins are `null` when `d - 2c <= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremDocument {
    pub c: f64,
    pub q: f64,
    pub d: f64,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    #[serde(rename = "N")]
    pub big_n: Option<f64>,
    pub lhs: Option<f64>,
    pub per_root_margin: Vec<Option<f64>>,
    pub guaranteed: bool,
    pub failures: Vec<String>,
}

impl TheoremDocument {
    pub fn new(result: &TheoremCheckResult) -> Self {
        let k = &result.constants;
        TheoremDocument {
            c: k.c,
            q: k.q,
            d: k.d,
            n: k.n,
            m: finite(k.m),
            big_n: finite(k.big_n),
            lhs: finite(result.lhs),
            per_root_margin: result.per_root_margin.iter().copied().map(finite).collect(),
            guaranteed: result.guaranteed,
            failures: result.failures.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderDocument {
    pub status: String,
    pub iterations_used: usize,
    pub roots: Vec<[f64; 2]>,
    pub multiplicities: Vec<u32>,
    pub orders: Vec<Option<f64>>,
}

/// `-2`, `0.5-1i`: compact labels for known roots.
pub fn short_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn decimal(z: Complex64, real: bool) -> String {
    if real {
        format!("{:.18}", z.re)
    } else {
        format!("{:.18}{:+.18}i", z.re, z.im)
    }
}

fn write_rows(out: &mut dyn Write, rows: &[Vec<String>]) -> io::Result<()> {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:>w$}"))
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end())?;
    }
    Ok(())
}

/// Iteration table with 18 decimals per component, then the outcome.
pub fn solve_table(out: &mut dyn Write, report: &SolveReport) -> io::Result<()> {
    let records = &report.trace.records;
    let real = records
        .iter()
        .all(|r| r.approximations.iter().all(|z| z.im == 0.0));
    let m = report.final_approximations.len();
    let mut rows = vec![std::iter::once("k".to_owned())
        .chain((1..=m).map(|i| format!("x{i}")))
        .collect::<Vec<_>>()];
    for r in records {
        rows.push(
            std::iter::once(r.k.to_string())
                .chain(r.approximations.iter().map(|&z| decimal(z, real)))
                .collect(),
        );
    }
    write_rows(out, &rows)?;
    writeln!(out)?;
    writeln!(out, "status: {}", report.status.as_str())?;
    writeln!(out, "iterations: {}", report.iterations_used)
}

/// Header `k,x1_re,x1_im,x1_residual,x1_step,...`, one row per record. The
/// step of the initial record is left empty.
pub fn solve_csv(out: &mut dyn Write, report: &SolveReport) -> io::Result<()> {
    let m = report.final_approximations.len();
    let mut header = vec!["k".to_owned()];
    for i in 1..=m {
        for field in ["re", "im", "residual", "step"] {
            header.push(format!("x{i}_{field}"));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    for r in &report.trace.records {
        let mut row = vec![r.k.to_string()];
        for i in 0..m {
            row.push(sci(r.approximations[i].re));
            row.push(sci(r.approximations[i].im));
            row.push(sci(r.residuals[i]));
            row.push(r.steps.as_ref().map(|s| sci(s[i])).unwrap_or_default());
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn theorem_table(
    out: &mut dyn Write,
    rs: &RootSystem,
    result: &TheoremCheckResult,
) -> io::Result<()> {
    let k = &result.constants;
    let mut rows = vec![
        vec!["c".to_owned(), sci(k.c)],
        vec!["q".to_owned(), sci(k.q)],
        vec!["separation d".to_owned(), sci(k.d)],
        vec!["degree n".to_owned(), k.n.to_string()],
        vec!["M".to_owned(), sci(k.m)],
        vec!["N".to_owned(), sci(k.big_n)],
        vec!["lhs".to_owned(), sci(result.lhs)],
    ];
    for (i, margin) in result.per_root_margin.iter().enumerate() {
        rows.push(vec![
            format!(
                "margin x{} = {} (multiplicity {})",
                i + 1,
                short_complex(rs.roots()[i]),
                rs.multiplicities()[i]
            ),
            sci(*margin),
        ]);
    }
    for row in &rows {
        writeln!(out, "{:<40}{}", row[0], row[1])?;
    }
    writeln!(out)?;
    if result.guaranteed {
        writeln!(out, "guarantee established")
    } else {
        let reasons: Vec<String> = result.failures.iter().map(ToString::to_string).collect();
        writeln!(out, "no guarantee established: {}", reasons.join("; "))
    }
}

pub fn theorem_csv(out: &mut dyn Write, result: &TheoremCheckResult) -> io::Result<()> {
    let k = &result.constants;
    writeln!(out, "quantity,value")?;
    for (name, value) in [
        ("c", sci(k.c)),
        ("q", sci(k.q)),
        ("d", sci(k.d)),
        ("n", k.n.to_string()),
        ("M", sci(k.m)),
        ("N", sci(k.big_n)),
        ("lhs", sci(result.lhs)),
    ] {
        writeln!(out, "{name},{value}")?;
    }
    for (i, margin) in result.per_root_margin.iter().enumerate() {
        writeln!(out, "margin_x{},{}", i + 1, sci(*margin))?;
    }
    writeln!(out, "guaranteed,{}", result.guaranteed)
}

fn order_cell(order: Option<f64>) -> String {
    order.map_or_else(|| "n/a".to_owned(), |p| format!("{p:.6}"))
}

pub fn order_table(
    out: &mut dyn Write,
    report: &SolveReport,
    rs: &RootSystem,
    orders: &[Option<f64>],
) -> io::Result<()> {
    let mut rows = vec![vec![
        "root".to_owned(),
        "value".to_owned(),
        "multiplicity".to_owned(),
        "order".to_owned(),
    ]];
    for (i, order) in orders.iter().enumerate() {
        rows.push(vec![
            format!("x{}", i + 1),
            short_complex(rs.roots()[i]),
            rs.multiplicities()[i].to_string(),
            order_cell(*order),
        ]);
    }
    write_rows(out, &rows)?;
    writeln!(out)?;
    writeln!(out, "status: {}", report.status.as_str())?;
    writeln!(out, "iterations: {}", report.iterations_used)
}

pub fn order_csv(out: &mut dyn Write, rs: &RootSystem, orders: &[Option<f64>]) -> io::Result<()> {
    writeln!(out, "index,root_re,root_im,multiplicity,order")?;
    for (i, order) in orders.iter().enumerate() {
        let root = rs.roots()[i];
        let cell = order.map_or_else(|| "n/a".to_owned(), sci);
        writeln!(
            out,
            "{},{},{},{},{cell}",
            i + 1,
            sci(root.re),
            sci(root.im),
            rs.multiplicities()[i]
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(sci(-0.1), "-1.0000000000000001e-1");
        assert_eq!(sci(0.0), "0.0000000000000000e0");
        assert_eq!(sci(1e-300), "1.0000000000000000e-300");
    }

    #[test]
    fn canonical_json_uses_the_fixed_float_form() {
        let doc = OrderDocument {
            status: "Converged".into(),
            iterations_used: 2,
            roots: vec![[1.0, -0.5]],
            multiplicities: vec![2],
            orders: vec![None],
        };
        assert_eq!(
            to_canonical_json(&doc),
            r#"{"status":"Converged","iterations_used":2,"roots":[[1.0000000000000000e0,-5.0000000000000000e-1]],"multiplicities":[2],"orders":[null]}"#
        );
    }

    #[test]
    fn labels() {
        assert_eq!(short_complex(Complex64::new(-2.0, 0.0)), "-2");
        assert_eq!(short_complex(Complex64::new(0.5, -1.0)), "0.5-1i");
    }
}
