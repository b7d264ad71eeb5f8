//! Oracle sweeps behind `sinint verify`.

use clap::ValueEnum;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use sinint::closedform::{
    antideriv_even, antideriv_invsq, antideriv_log, antideriv_odd, integral_even, integral_invsq,
    integral_log, integral_odd,
};
use sinint::oracle::{definite_integral, differentiate, integrand, IntegrandKind};
use sinint::triangles::{even_row, float_weights, invsq_row, log_row, odd_row, row, RowKind};
use sinint::Result;

const INTEGRAL_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-12;
const DERIVATIVE_REL_TOL: f64 = 1e-6;
const DERIVATIVE_ABS_FLOOR: f64 = 1e-9;
const DERIVATIVE_STEP: f64 = 1e-3;
const FLOAT_PATH_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Antiderivatives,
    Integrals,
    Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: String, measured: f64, tolerance: f64) -> Check {
    Check {
        passed: measured <= tolerance,
        name,
        measured,
        tolerance,
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let (name, checks) = match suite {
        Suite::Antiderivatives => ("antiderivatives", antiderivatives()?),
        Suite::Integrals => ("integrals", integrals()?),
        Suite::Rows => ("rows", rows()?),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn sample_points() -> impl Iterator<Item = f64> {
    (0..20).map(|i| 0.05 + 0.9 * i as f64 / 19.0)
}

/// Worst violation of |F'(x) − f(x)| ≤ rel·|f(x)| + floor, as a multiple of the allowance.
fn derivative_ratio(
    f_anti: impl Fn(f64) -> Result<f64>,
    f: impl Fn(f64) -> f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in sample_points() {
        f_anti(x)?;
        let d = differentiate(|t| f_anti(t).unwrap_or(f64::NAN), x, DERIVATIVE_STEP)?;
        let target = f(x);
        let allowed = DERIVATIVE_REL_TOL * target.abs() + DERIVATIVE_ABS_FLOOR;
        worst = worst.max((d - target).abs() / allowed);
    }
    Ok(worst)
}

fn antiderivatives() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in [0u64, 1, 3, 6] {
        let f = integrand(IntegrandKind::OddPowerOverAsin, n)?;
        let r = derivative_ratio(|x| antideriv_odd(n, x), f)?;
        checks.push(check(format!("d/dx antideriv_odd({n})"), r, 1.0));
    }
    for n in [0u64, 1, 3, 6] {
        // x^0/asin x has no integrand builder on [0, 1]; it is 1/asin x
        let r = if n == 0 {
            derivative_ratio(|x| antideriv_even(0, x), |x: f64| 1.0 / x.asin())?
        } else {
            derivative_ratio(|x| antideriv_even(n, x), integrand(IntegrandKind::EvenPowerOverAsin, n)?)?
        };
        checks.push(check(format!("d/dx antideriv_even({n})"), r, 1.0));
    }
    for k in [1u64, 3, 4] {
        let f = integrand(IntegrandKind::PowerOverAsinSq, k)?;
        let r = derivative_ratio(|x| antideriv_invsq(k, x), f)?;
        checks.push(check(format!("d/dx antideriv_invsq({k})"), r, 1.0));
    }
    for n in [0u64, 1, 2, 5] {
        let r = derivative_ratio(|x| antideriv_log(n, x), move |x: f64| x.powi(n as i32) / x.ln_1p())?;
        checks.push(check(format!("d/dx antideriv_log({n})"), r, 1.0));
    }
    Ok(checks)
}

fn integrals() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut sweep = |name: &str, kind: IntegrandKind, range: std::ops::RangeInclusive<u64>, closed: &dyn Fn(u64) -> Result<f64>| -> Result<()> {
        for n in range {
            let q = definite_integral(kind, n, ORACLE_TOL)?;
            let diff = (closed(n)? - q.value).abs();
            checks.push(check(format!("{name}({n})"), diff, INTEGRAL_TOL));
        }
        Ok(())
    };
    sweep("integral_odd", IntegrandKind::OddPowerOverAsin, 0..=20, &|n| Ok(integral_odd(n)?.value))?;
    sweep("integral_even", IntegrandKind::EvenPowerOverAsin, 1..=20, &|n| Ok(integral_even(n)?.value))?;
    sweep("integral_invsq", IntegrandKind::PowerOverAsinSq, 1..=15, &|n| Ok(integral_invsq(n)?.value))?;
    sweep("integral_log", IntegrandKind::PowerOverLog, 1..=15, &|n| Ok(integral_log(n)?.value))?;
    Ok(checks)
}

fn mismatch(found: &[BigInt], expected: &[i64]) -> f64 {
    if found.len() != expected.len() {
        return f64::INFINITY;
    }
    found
        .iter()
        .zip(expected)
        .filter(|(a, b)| **a != BigInt::from(**b))
        .count() as f64
}

fn rows() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let reference: [(&str, Vec<BigInt>, u64, &[i64], u64); 4] = [
        ("odd_row(6)", odd_row(6).numerators(), odd_row(6).scale_log2(), &[1, -12, 65, -208, 429, -572, 429], 13),
        ("even_row(6)", even_row(6).numerators(), even_row(6).scale_log2(), &[1, -11, 54, -154, 275, -297, 132], 12),
        ("invsq_row(3)", invsq_row(3)?.numerators(), invsq_row(3)?.scale_log2(), &[-5, 27, -25, 7], 6),
        ("invsq_row(4)", invsq_row(4)?.numerators(), invsq_row(4)?.scale_log2(), &[-14, 84, -100, 49, -9], 8),
    ];
    for (name, found, scale, expected, expected_scale) in reference {
        let mut bad = mismatch(&found, expected);
        if scale != expected_scale {
            bad += 1.0;
        }
        checks.push(check(format!("{name} numerators and scale"), bad, 0.0));
    }
    let nonzero = (1..=30)
        .filter(|&n| even_row(n).signed_sum() != BigInt::from(0) || log_row(n).signed_sum() != BigInt::from(0))
        .count();
    checks.push(check("zero signed sums, even and log rows 1..=30".into(), nonzero as f64, 0.0));
    for kind in [RowKind::OddSi, RowKind::EvenCi, RowKind::InvsqSi] {
        let mut worst: f64 = 0.0;
        for n in (480..=544).step_by(16) {
            let exact = row(kind, n)?.weights();
            let float = float_weights(kind, n)?;
            for (e, f) in exact.iter().zip(&float) {
                if e.abs() > 1e-290 {
                    worst = worst.max((e - f).abs() / e.abs());
                }
            }
        }
        checks.push(check(
            format!("{} float path vs exact, rows 480..=544", kind.name()),
            worst,
            FLOAT_PATH_REL_TOL,
        ));
    }
    Ok(checks)
}
