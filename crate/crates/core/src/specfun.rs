//! Sine, cosine and exponential integrals on the real axis.
//!
//! * `si(x)  = ∫₀ˣ sin t / t dt`
//! * `ci(x)  = γ + ln x + ∫₀ˣ (cos t − 1) / t dt`, x > 0
//! * `ei(z)  = γ + ln z + Σ_{k≥1} zᵏ / (k·k!)`, z > 0
//!
//! Si and Ci use their power series for |x| ≤ 4 and the continued fraction
//! for E₁(ix) beyond, which gives the auxiliary functions f and g to full
//! double precision from x = 4 upward. Both regimes stay within a few ulps
//! of the true value, so the switch is invisible at 1e-15.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Result};
use crate::summation::NeumaierSum;

/// Euler–Mascheroni constant to 50 digits.
///
/// The digits are reproduced independently in the test suite from the
/// Euler–Maclaurin expansion of H_n − ln n in 60-digit fixed point.
pub const EULER_GAMMA_DIGITS: &str = "0.57721566490153286060651209008240243104215933593992";

/// Euler–Mascheroni constant rounded to f64.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_MAX: f64 = 4.0;
const CF_MAX_ITER: usize = 1000;
const CF_EPS: f64 = 4.0 * f64::EPSILON;
const EI_MAX_TERMS: usize = 10_000;

/// A special-function value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub value: f64,
    pub abs_error_estimate: f64,
}

/// Sine integral Si(x).
pub fn si(x: f64) -> Result<SpecialValue> {
    if !x.is_finite() {
        return Err(domain(format!("si requires a finite argument, got {x}")));
    }
    let (v, e) = si_abs(x.abs());
    Ok(SpecialValue {
        value: if x < 0.0 { -v } else { v },
        abs_error_estimate: e,
    })
}

/// Cosine integral Ci(x), x > 0.
pub fn ci(x: f64) -> Result<SpecialValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("ci requires 0 < x < inf, got {x}")));
    }
    let (v, e) = if x <= SERIES_MAX {
        ci_series(x)
    } else {
        let (_, c, e) = auxiliary_cf(x);
        (c, e)
    };
    Ok(SpecialValue {
        value: v,
        abs_error_estimate: e,
    })
}

/// Exponential integral Ei(z), z > 0.
pub fn ei(z: f64) -> Result<SpecialValue> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain(format!("ei requires 0 < z < inf, got {z}")));
    }
    let (series, series_err) = ei_power_sum(z);
    let log_part = EULER_GAMMA + z.ln();
    let value = series + log_part;
    if !value.is_finite() {
        return Err(domain(format!("ei({z}) overflows f64")));
    }
    Ok(SpecialValue {
        value,
        abs_error_estimate: series_err + 2.0 * f64::EPSILON * log_part.abs(),
    })
}

/// Si(x) as a bare f64; x must be finite.
#[inline]
pub(crate) fn si_value(x: f64) -> f64 {
    let v = si_abs(x.abs()).0;
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Ci(x) as a bare f64; x must be positive and finite.
#[inline]
pub(crate) fn ci_value(x: f64) -> f64 {
    if x <= SERIES_MAX {
        ci_series(x).0
    } else {
        auxiliary_cf(x).1
    }
}

/// Σ_{k≥1} zᵏ/(k·k!) with its rounding estimate. Zero at z = 0.
pub(crate) fn ei_power_sum(z: f64) -> (f64, f64) {
    let mut acc = NeumaierSum::new();
    let mut power_over_fact = 1.0;
    let mut n_terms = 0usize;
    for k in 1..=EI_MAX_TERMS {
        power_over_fact *= z / k as f64;
        let term = power_over_fact / k as f64;
        acc.add(term);
        n_terms = k;
        if term.abs() < 1e-17 * acc.value().abs() {
            break;
        }
    }
    let s = acc.value();
    // each term carries ~(k+1) roundings from the running product
    let growth = (n_terms as f64).sqrt() + 2.0;
    (s, growth * f64::EPSILON * s.abs())
}

fn si_abs(x: f64) -> (f64, f64) {
    if x <= SERIES_MAX {
        si_series(x)
    } else {
        let (s, _, e) = auxiliary_cf(x);
        (s, e)
    }
}

fn si_series(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 0.0);
    }
    let x2 = x * x;
    let mut power = x; // x^(2k+1)/(2k+1)!
    let mut acc = NeumaierSum::new();
    let mut abs_sum = 0.0;
    let mut last = 0.0;
    for k in 0..60u32 {
        if k > 0 {
            let a = (2 * k) as f64;
            power *= -x2 / (a * (a + 1.0));
        }
        let term = power / (2 * k + 1) as f64;
        acc.add(term);
        abs_sum += term.abs();
        last = term.abs();
        if last < 1e-18 * acc.value().abs() {
            break;
        }
    }
    (acc.value(), last + 2.0 * f64::EPSILON * abs_sum)
}

fn ci_series(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let mut power = 1.0; // (-1)^k x^(2k)/(2k)!
    let mut acc = NeumaierSum::new();
    acc.add(EULER_GAMMA);
    acc.add(x.ln());
    let mut abs_sum = EULER_GAMMA + x.ln().abs();
    let mut last = 0.0;
    for k in 1..60u32 {
        let a = (2 * k) as f64;
        power *= -x2 / ((a - 1.0) * a);
        let term = power / a;
        acc.add(term);
        abs_sum += term.abs();
        last = term.abs();
        if last < 1e-18 * abs_sum {
            break;
        }
    }
    (acc.value(), last + 2.0 * f64::EPSILON * abs_sum)
}

/// Modified Lentz evaluation of E₁(ix)·e^{ix}; returns (Si, Ci, error).
///
/// With E₁(ix) = −Ci(x) + i(Si(x) − π/2) and h = E₁(ix)e^{ix} = g(x) − i f(x)
/// in terms of the auxiliary functions.
fn auxiliary_cf(x: f64) -> (f64, f64, f64) {
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..CF_MAX_ITER {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < CF_EPS {
            break;
        }
    }
    let (s, co) = x.sin_cos();
    let e1 = Complex64::new(co, -s) * h;
    let err = 4.0 * f64::EPSILON * (FRAC_PI_2 + h.norm());
    (FRAC_PI_2 + e1.im, -e1.re, err)
}
