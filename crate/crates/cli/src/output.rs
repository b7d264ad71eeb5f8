//! Text, JSON and CSV renderings. Floats in text and CSV carry 17
//! significant digits; JSON uses the shortest round-trip form.

use std::io::{self, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use sinint::transforms::{ConvergenceReport, ExtrapolationStatus};
use sinint::triangles::CoefficientRow;

use crate::verify::SuiteReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// An exact row; numerators are arbitrary-size JSON integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowRecord {
    pub kind: String,
    pub n: u64,
    pub scale_log2: u64,
    pub entries: Vec<(u64, Number)>,
}

impl RowRecord {
    pub fn new(kind: &str, n: u64, scale_log2: u64, entries: Vec<(u64, BigInt)>) -> Self {
        let entries = entries
            .into_iter()
            .map(|(m, c)| (m, Number::from_str(&c.to_string()).expect("integers are valid JSON numbers")))
            .collect();
        RowRecord {
            kind: kind.to_string(),
            n,
            scale_log2,
            entries,
        }
    }

    pub fn from_row(kind: &str, row: &CoefficientRow) -> Self {
        let entries = row
            .entries
            .iter()
            .map(|e| (e.multiplier, e.coefficient.numerator.clone()))
            .collect();
        RowRecord::new(kind, row.index, row.scale_log2(), entries)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralRecord {
    pub op: String,
    pub n: u64,
    pub value: f64,
    pub oracle_value: Option<f64>,
    pub abs_diff: Option<f64>,
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_sci(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

fn json_line<T: Serialize>(out: &mut impl Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

pub fn write_row(out: &mut impl Write, format: Format, row: &RowRecord) -> io::Result<()> {
    match format {
        Format::Json => json_line(out, row),
        Format::Csv => {
            writeln!(out, "m,numerator")?;
            for (m, c) in &row.entries {
                writeln!(out, "{m},{c}")?;
            }
            Ok(())
        }
        Format::Text => {
            writeln!(out, "kind={} n={} scale_log2={}", row.kind, row.n, row.scale_log2)?;
            for (m, c) in &row.entries {
                writeln!(out, "{m} {c}")?;
            }
            Ok(())
        }
    }
}

pub fn write_integrals(out: &mut impl Write, format: Format, records: &[IntegralRecord]) -> io::Result<()> {
    match format {
        Format::Json => json_line(out, &records),
        Format::Csv => {
            writeln!(out, "op,n,value,oracle_value,abs_diff")?;
            for r in records {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.op,
                    r.n,
                    sci(r.value),
                    opt_sci(r.oracle_value),
                    opt_sci(r.abs_diff)
                )?;
            }
            Ok(())
        }
        Format::Text => {
            for r in records {
                write!(out, "{} n={} value={}", r.op, r.n, sci(r.value))?;
                if let (Some(o), Some(d)) = (r.oracle_value, r.abs_diff) {
                    write!(out, " oracle={} abs_diff={}", sci(o), sci(d))?;
                }
                writeln!(out)?;
            }
            Ok(())
        }
    }
}

fn status_name(s: ExtrapolationStatus) -> &'static str {
    match s {
        ExtrapolationStatus::Disabled => "disabled",
        ExtrapolationStatus::Applied => "applied",
        ExtrapolationStatus::InsufficientTerms => "insufficient_terms",
        ExtrapolationStatus::DivergentFit => "divergent_fit",
    }
}

pub fn write_reports(out: &mut impl Write, format: Format, reports: &[ConvergenceReport]) -> io::Result<()> {
    match format {
        Format::Json => json_line(out, &reports),
        Format::Csv => {
            writeln!(out, "J,partial_sum,raw_error,extrapolated_value,extrapolated_error")?;
            for r in reports {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.terms_used,
                    sci(r.partial_sum),
                    sci(r.raw_error),
                    opt_sci(r.extrapolated_value),
                    opt_sci(r.extrapolated_error)
                )?;
            }
            Ok(())
        }
        Format::Text => {
            for r in reports {
                write!(
                    out,
                    "J={} partial_sum={} known_limit={} raw_error={}",
                    r.terms_used,
                    sci(r.partial_sum),
                    sci(r.known_limit),
                    sci(r.raw_error)
                )?;
                if let (Some(p), Some(v), Some(e)) =
                    (r.tail_exponent_fit, r.extrapolated_value, r.extrapolated_error)
                {
                    write!(out, " p={} extrapolated={} extrapolated_error={}", sci(p), sci(v), sci(e))?;
                }
                writeln!(out, " extrapolation={}", status_name(r.extrapolation))?;
            }
            Ok(())
        }
    }
}

pub fn write_suite(out: &mut impl Write, format: Format, report: &SuiteReport) -> io::Result<()> {
    match format {
        Format::Json => json_line(out, report),
        Format::Csv => {
            writeln!(out, "check,measured,tolerance,passed")?;
            for c in &report.checks {
                writeln!(out, "{},{},{},{}", c.name, sci(c.measured), sci(c.tolerance), c.passed)?;
            }
            Ok(())
        }
        Format::Text => {
            for c in &report.checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{verdict} {} measured={} tolerance={}",
                    c.name,
                    sci(c.measured),
                    sci(c.tolerance)
                )?;
            }
            let verdict = if report.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict} suite {} ({} checks)", report.suite, report.checks.len())
        }
    }
}
