//! `sinint` command-line front end.
//!
//! Exit codes: 0 success, 2 verification failure, 64 usage error.

mod output;
mod verify;

use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sinint::closedform::{integral_even, integral_invsq, integral_log, integral_odd};
use sinint::oracle::{definite_integral, IntegrandKind, MIN_TOL};
use sinint::transforms::{
    known_limit, report_from_terms, series_terms, EvalOptions, SeriesId, MIN_TERMS,
};
use sinint::triangles::{ballot_coefficient, row, RowKind};
use sinint::Error;

use output::{Format, IntegralRecord, RowRecord};

const EXIT_VERIFY: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "sinint", version, about = "Sine-integral double series and their coefficient triangles")]
struct Cli {
    /// Emit JSON
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dump an exact coefficient row
    Triangle {
        #[arg(long, value_enum)]
        kind: TriangleKind,
        #[arg(long)]
        n: u64,
    },
    /// Closed-form definite integral over [0, 1], optionally checked by quadrature
    Integral {
        #[arg(long, value_enum)]
        kind: IntegralKind,
        /// A single index N or an inclusive range A..B
        #[arg(long, value_parser = parse_index_range)]
        n: RangeInclusive<u64>,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Partial sums of Theorem 1, 2 or 3
    Theorem {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Oracle sweeps; exits 2 on any tolerance breach
    Verify {
        #[arg(long, value_enum)]
        suite: verify::Suite,
    },
    /// Σ a_j ∫₀¹ x^(2j+2)/asin² x dx against ∫₀¹ x/asin x dx
    SeriesSec2 {
        #[command(flatten)]
        series: SeriesArgs,
    },
}

#[derive(Debug, clap::Args)]
struct SeriesArgs {
    /// Term budgets, comma separated; all are prefixes of one evaluation
    #[arg(long, value_delimiter = ',', required = true)]
    terms: Vec<usize>,
    #[arg(long)]
    extrapolate: bool,
    /// Permit budgets above the default cap
    #[arg(long)]
    allow_large: bool,
    /// Minimum outer terms per parallel work item
    #[arg(long, default_value_t = 16)]
    chunk: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TriangleKind {
    Ballot,
    Invsq,
    Odd,
    Even,
    Log,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IntegralKind {
    Odd,
    Even,
    Invsq,
    Log,
}

fn parse_index_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad index '{t}': {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(format!("empty range {a}..{b}"));
            }
            Ok(a..=b)
        }
        None => {
            let n = parse(s)?;
            Ok(n..=n)
        }
    }
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verify(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Verify(format!("write failed: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli.command, format, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => ExitCode::from(EXIT_VERIFY),
        (Err(Failure::Usage(msg)), _) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        (Err(Failure::Verify(msg)), _) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        (Ok(_), Err(e)) => {
            eprintln!("error: write failed: {e}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}

/// Runs one subcommand; Ok(false) means a verification check failed.
fn run(command: Command, format: Format, out: &mut impl Write) -> Result<bool, Failure> {
    match command {
        Command::Triangle { kind, n } => {
            output::write_row(out, format, &triangle(kind, n)?)?;
            Ok(true)
        }
        Command::Integral { kind, n, verify, tol } => {
            if verify && !(tol >= MIN_TOL) {
                return Err(Failure::Usage(format!("--tol must be >= {MIN_TOL:e}")));
            }
            let mut records = Vec::new();
            for i in n {
                records.push(integral(kind, i, verify, tol)?);
            }
            output::write_integrals(out, format, &records)?;
            Ok(records.iter().all(|r| r.abs_diff.is_none_or(|d| d <= tol)))
        }
        Command::Theorem { id, series } => {
            run_series(SeriesId::theorem(id)?, &series, format, out)?;
            Ok(true)
        }
        Command::SeriesSec2 { series } => {
            run_series(SeriesId::Sec2, &series, format, out)?;
            Ok(true)
        }
        Command::Verify { suite } => {
            let report = verify::run_suite(suite)?;
            output::write_suite(out, format, &report)?;
            Ok(report.passed)
        }
    }
}

fn triangle(kind: TriangleKind, n: u64) -> Result<RowRecord, Failure> {
    let record = match kind {
        TriangleKind::Ballot => {
            let entries = (0..=n / 2)
                .map(|k| ballot_coefficient(n, k).map(|c| (k, c)))
                .collect::<Result<Vec<_>, _>>()?;
            RowRecord::new("ballot", n, 0, entries)
        }
        TriangleKind::Invsq => RowRecord::from_row("invsq", &row(RowKind::InvsqSi, n)?),
        TriangleKind::Odd => RowRecord::from_row("odd", &row(RowKind::OddSi, n)?),
        TriangleKind::Even => RowRecord::from_row("even", &row(RowKind::EvenCi, n)?),
        TriangleKind::Log => RowRecord::from_row("log", &row(RowKind::LogEi, n)?),
    };
    Ok(record)
}

fn integral(kind: IntegralKind, n: u64, verify: bool, tol: f64) -> Result<IntegralRecord, Failure> {
    let (op, value, oracle_kind) = match kind {
        IntegralKind::Odd => ("integral_odd", integral_odd(n)?.value, IntegrandKind::OddPowerOverAsin),
        IntegralKind::Even => ("integral_even", integral_even(n)?.value, IntegrandKind::EvenPowerOverAsin),
        IntegralKind::Invsq => ("integral_invsq", integral_invsq(n)?.value, IntegrandKind::PowerOverAsinSq),
        IntegralKind::Log => ("integral_log", integral_log(n)?.value, IntegrandKind::PowerOverLog),
    };
    let (oracle_value, abs_diff) = if verify {
        let q = definite_integral(oracle_kind, n, (tol * 1e-2).max(MIN_TOL))?;
        (Some(q.value), Some((q.value - value).abs()))
    } else {
        (None, None)
    };
    Ok(IntegralRecord {
        op: op.to_string(),
        n,
        value,
        oracle_value,
        abs_diff,
    })
}

fn run_series(series: SeriesId, args: &SeriesArgs, format: Format, out: &mut impl Write) -> Result<(), Failure> {
    let mut opts = EvalOptions {
        extrapolate: args.extrapolate,
        parallel_chunk: args.chunk.max(1),
        ..EvalOptions::default()
    };
    if args.allow_large {
        opts.max_terms = usize::MAX;
    }
    if let Some(&j) = args.terms.iter().find(|&&j| j < MIN_TERMS) {
        return Err(Failure::Usage(format!(
            "term budget must be >= {}, got {j}",
            MIN_TERMS
        )));
    }
    let max_terms = args.terms.iter().copied().max().unwrap_or(0);
    let terms = series_terms(series, max_terms, &opts)?;
    let limit = known_limit(series)?;
    let reports: Vec<_> = args
        .terms
        .iter()
        .map(|&j| report_from_terms(series, limit, &terms[..j], &opts))
        .collect();
    output::write_reports(out, format, &reports)?;
    Ok(())
}
