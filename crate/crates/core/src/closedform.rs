//! Closed-form antiderivatives and definite integrals on [0, 1].
//!
//! Every evaluator converts its coefficient row to normalized weights and
//! sums the row from the smallest multiplier to the largest with
//! compensated summation.
//!
//! Definite forms take their endpoint limits analytically:
//!
//! * at x = 1, asin x = π/2 and √(1−x²) = 0;
//! * at x → 0⁺, Si terms vanish, while Ci(m·θ) and Ei(m·L) behave like
//!   γ + ln m + ln θ. Even and log rows (n ≥ 1) have a zero signed sum, so
//!   the γ + ln θ parts cancel and the lower limit is Σ c·ln m.

use std::f64::consts::FRAC_PI_2;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::specfun::{ci_value, ei, si_value};
use crate::summation::NeumaierSum;
use crate::triangles::{
    log_row, row_multipliers, row_weights, RowKind, DEFAULT_EXACT_THRESHOLD,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralMethod {
    /// Direct evaluation of the antiderivative at both ends.
    ClosedForm,
    /// Lower limit taken through the zero-row-sum cancellation.
    ClosedFormCancelled,
}

/// A definite integral over [0, 1] evaluated in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralValue {
    pub value: f64,
    pub method: IntegralMethod,
    pub row_index: u64,
}

/// Σ wᵢ·f(mᵢ) in ascending multiplier order.
pub(crate) fn sum_by_multiplier(
    weights: &[f64],
    multipliers: &[u64],
    mut f: impl FnMut(u64) -> f64,
) -> f64 {
    let mut acc = NeumaierSum::new();
    if multipliers.windows(2).all(|w| w[0] < w[1]) {
        for (w, &m) in weights.iter().zip(multipliers) {
            acc.add(w * f(m));
        }
    } else if multipliers.windows(2).all(|w| w[0] > w[1]) {
        for (w, &m) in weights.iter().zip(multipliers).rev() {
            acc.add(w * f(m));
        }
    } else {
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by_key(|&i| multipliers[i]);
        for i in order {
            acc.add(weights[i] * f(multipliers[i]));
        }
    }
    acc.value()
}

fn unit_interval_check(name: &str, x: f64, open_left: bool, open_right: bool) -> Result<()> {
    let left_ok = if open_left { x > 0.0 } else { x >= 0.0 };
    let right_ok = if open_right { x < 1.0 } else { x <= 1.0 };
    if left_ok && right_ok {
        Ok(())
    } else {
        let l = if open_left { '(' } else { '[' };
        let r = if open_right { ')' } else { ']' };
        Err(domain(format!("{name} needs x in {l}0, 1{r}, got {x}")))
    }
}

/// Antiderivative of x^(2n+1)/asin x that vanishes at x = 0.
pub fn antideriv_odd(n: u64, x: f64) -> Result<f64> {
    unit_interval_check("antideriv_odd", x, false, false)?;
    let theta = x.asin();
    let w = row_weights(RowKind::OddSi, n, DEFAULT_EXACT_THRESHOLD)?;
    let m = row_multipliers(RowKind::OddSi, n);
    Ok(sum_by_multiplier(&w, &m, |mult| si_value(mult as f64 * theta)))
}

/// Antiderivative of x^(2n)/asin x as a Ci expansion; diverges at 0 only for n = 0.
pub fn antideriv_even(n: u64, x: f64) -> Result<f64> {
    unit_interval_check("antideriv_even", x, true, false)?;
    let theta = x.asin();
    let w = row_weights(RowKind::EvenCi, n, DEFAULT_EXACT_THRESHOLD)?;
    let m = row_multipliers(RowKind::EvenCi, n);
    Ok(sum_by_multiplier(&w, &m, |mult| ci_value(mult as f64 * theta)))
}

/// Antiderivative of x^(2k)/asin² x, including its algebraic term.
pub fn antideriv_invsq(k: u64, x: f64) -> Result<f64> {
    if k < 1 {
        return Err(domain("antideriv_invsq needs k >= 1"));
    }
    unit_interval_check("antideriv_invsq", x, true, true)?;
    let theta = x.asin();
    let w = row_weights(RowKind::InvsqSi, k, DEFAULT_EXACT_THRESHOLD)?;
    let m = row_multipliers(RowKind::InvsqSi, k);
    let si_part = sum_by_multiplier(&w, &m, |mult| si_value(mult as f64 * theta));
    let algebraic = -(1.0 - x * x).sqrt() * x.powi(2 * k as i32) / theta;
    Ok(algebraic + si_part)
}

/// Antiderivative of xⁿ/ln(1+x) as an Ei expansion, x > 0.
pub fn antideriv_log(n: u64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("antideriv_log needs x > 0, got {x}")));
    }
    let l = x.ln_1p();
    let row = log_row(n);
    let mut acc = NeumaierSum::new();
    for e in &row.entries {
        let c = e.coefficient.to_f64();
        acc.add(c * ei(e.multiplier as f64 * l)?.value);
    }
    Ok(acc.value())
}

/// ∫₀¹ x^(2n+1)/asin x dx = 2^−(2n+1) Σ_k c_k Si(π(n+1−k)).
pub fn integral_odd(n: u64) -> Result<IntegralValue> {
    integral_odd_with(n, DEFAULT_EXACT_THRESHOLD, |m| si_value(m as f64 * FRAC_PI_2))
}

/// [`integral_odd`] with a caller-chosen exact/float switch and Si source.
///
/// `si_half_pi(m)` must return Si(m·π/2).
pub fn integral_odd_with(
    n: u64,
    exact_threshold: u64,
    si_half_pi: impl FnMut(u64) -> f64,
) -> Result<IntegralValue> {
    let w = row_weights(RowKind::OddSi, n, exact_threshold)?;
    let m = row_multipliers(RowKind::OddSi, n);
    Ok(IntegralValue {
        value: sum_by_multiplier(&w, &m, si_half_pi),
        method: IntegralMethod::ClosedForm,
        row_index: n,
    })
}

/// ∫₀¹ x^(2n)/asin x dx = 2^−2n Σ_k c_k [Ci(mπ/2) − ln m], n ≥ 1.
///
/// n = 0 is rejected: 1/asin x ~ 1/x at the origin, so the integral diverges.
pub fn integral_even(n: u64) -> Result<IntegralValue> {
    if n < 1 {
        return Err(Error::Unsupported(
            "integral_even(0): the integral of 1/asin x over [0,1] diverges at 0".into(),
        ));
    }
    let w = row_weights(RowKind::EvenCi, n, DEFAULT_EXACT_THRESHOLD)?;
    let m = row_multipliers(RowKind::EvenCi, n);
    let value = sum_by_multiplier(&w, &m, |mult| {
        ci_value(mult as f64 * FRAC_PI_2) - (mult as f64).ln()
    });
    Ok(IntegralValue {
        value,
        method: IntegralMethod::ClosedFormCancelled,
        row_index: n,
    })
}

/// lim_{x→0⁺} antideriv_even(n, x) = 2^−2n Σ_k c_k ln m, n ≥ 1.
pub fn even_lower_limit(n: u64) -> Result<f64> {
    if n < 1 {
        return Err(domain("even_lower_limit needs n >= 1"));
    }
    let w = row_weights(RowKind::EvenCi, n, DEFAULT_EXACT_THRESHOLD)?;
    let m = row_multipliers(RowKind::EvenCi, n);
    Ok(sum_by_multiplier(&w, &m, |mult| (mult as f64).ln()))
}

/// ∫₀¹ x^(2k)/asin² x dx, k ≥ 1. The algebraic term vanishes at both ends.
pub fn integral_invsq(k: u64) -> Result<IntegralValue> {
    integral_invsq_with(k, DEFAULT_EXACT_THRESHOLD, |m| si_value(m as f64 * FRAC_PI_2))
}

/// [`integral_invsq`] with a caller-chosen exact/float switch and Si(m·π/2) source.
pub fn integral_invsq_with(
    k: u64,
    exact_threshold: u64,
    si_half_pi: impl FnMut(u64) -> f64,
) -> Result<IntegralValue> {
    if k < 1 {
        return Err(domain("integral_invsq needs k >= 1"));
    }
    let w = row_weights(RowKind::InvsqSi, k, exact_threshold)?;
    let m = row_multipliers(RowKind::InvsqSi, k);
    Ok(IntegralValue {
        value: sum_by_multiplier(&w, &m, si_half_pi),
        method: IntegralMethod::ClosedForm,
        row_index: k,
    })
}

/// ∫₀¹ xⁿ/ln(1+x) dx = Σ_k C(n,k)(−1)^(k+n) [Ei((k+1) ln 2) − ln(k+1)], n ≥ 1.
///
/// Evaluated with the Ei power series regrouped by power: writing
/// Ei(z) = γ + ln z + Σ_j z^j/(j·j!), the γ and ln terms cancel against
/// ln(k+1) and the zero row sum, leaving Σ_j Δ_j (ln 2)^j/(j·j!) with
/// Δ_j = Σ_k c_k (k+1)^j exact, nonnegative and zero for j < n. Every term
/// is positive, so nothing cancels in floating point.
pub fn integral_log(n: u64) -> Result<IntegralValue> {
    if n < 1 {
        return Err(domain("integral_log needs n >= 1"));
    }
    let row = log_row(n);
    let coeffs: Vec<BigInt> = row.numerators();
    let bases: Vec<BigInt> = (1..=n + 1).map(BigInt::from).collect();
    let mut powers: Vec<BigInt> = vec![BigInt::from(1); coeffs.len()];
    let l = std::f64::consts::LN_2;
    let mut acc = NeumaierSum::new();
    let mut l_pow_over_fact = 1.0;
    for j in 1..=2000u64 {
        for (p, b) in powers.iter_mut().zip(&bases) {
            *p *= b;
        }
        l_pow_over_fact *= l / j as f64;
        if j < n {
            continue;
        }
        let delta: BigInt = coeffs.iter().zip(&powers).map(|(c, p)| c * p).sum();
        debug_assert!(j > n || !delta.is_zero());
        let term = delta.to_f64().unwrap_or(f64::INFINITY) * l_pow_over_fact / j as f64;
        acc.add(term);
        if term < 1e-18 * acc.value() {
            break;
        }
    }
    Ok(IntegralValue {
        value: acc.value(),
        method: IntegralMethod::ClosedFormCancelled,
        row_index: n,
    })
}

/// The literal Ei-difference form of [`integral_log`], summed term by term.
///
/// Mathematically identical, but the alternating Ei values reach ~3ⁿ in
/// magnitude, so rounding grows with n; kept as a cross-check.
pub fn integral_log_direct(n: u64) -> Result<f64> {
    if n < 1 {
        return Err(domain("integral_log_direct needs n >= 1"));
    }
    let row = log_row(n);
    let l = std::f64::consts::LN_2;
    let mut acc = NeumaierSum::new();
    for e in &row.entries {
        let m = e.multiplier as f64;
        acc.add(e.coefficient.to_f64() * (ei(m * l)?.value - m.ln()));
    }
    Ok(acc.value())
}

/// lim_{x→0⁺} antideriv_log(n, x) = Σ_k C(n,k)(−1)^(k+n) ln(k+1), n ≥ 1.
pub fn log_lower_limit(n: u64) -> Result<f64> {
    if n < 1 {
        return Err(domain("log_lower_limit needs n >= 1"));
    }
    let row = log_row(n);
    Ok(row
        .entries
        .iter()
        .map(|e| e.coefficient.to_f64() * (e.multiplier as f64).ln())
        .fold(NeumaierSum::new(), |mut acc, v| {
            acc.add(v);
            acc
        })
        .value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::si;
    use std::f64::consts::PI;

    #[test]
    fn odd_antiderivative_vanishes_at_zero() {
        for n in [0, 1, 5, 20] {
            assert_eq!(antideriv_odd(n, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn odd_integral_small_rows() {
        let si_pi = si(PI).unwrap().value;
        let si_2pi = si(2.0 * PI).unwrap().value;
        assert!((integral_odd(0).unwrap().value - si_pi / 2.0).abs() < 1e-15);
        let i1 = integral_odd(1).unwrap().value;
        assert!((i1 - (2.0 * si_pi - si_2pi) / 8.0).abs() < 1e-15);
        assert!((antideriv_odd(0, 1.0).unwrap() - si_pi / 2.0).abs() < 1e-15);
    }

    #[test]
    fn odd_integrals_decrease() {
        let values: Vec<f64> = (0..40).map(|n| integral_odd(n).unwrap().value).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn even_antiderivative_has_finite_lower_limit() {
        for n in [1, 3, 6] {
            let a = antideriv_even(n, 1e-6).unwrap();
            let b = antideriv_even(n, 1e-7).unwrap();
            assert!((a - b).abs() < 1e-5);
            assert!((antideriv_even(n, 1e-8).unwrap() - even_lower_limit(n).unwrap()).abs() < 1e-9);
        }
        // single-term row keeps its logarithmic divergence
        assert!(antideriv_even(0, 1e-12).unwrap() < -25.0);
    }

    #[test]
    fn even_integral_zero_is_unsupported() {
        assert!(matches!(integral_even(0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn invsq_integral_three_by_hand() {
        let s = |m: f64| si(m * PI / 2.0).unwrap().value;
        let expect = (-5.0 * s(1.0) + 27.0 * s(3.0) - 25.0 * s(5.0) + 7.0 * s(7.0)) / 64.0;
        assert!((integral_invsq(3).unwrap().value - expect).abs() < 1e-15);
    }

    #[test]
    fn invsq_antiderivative_vanishes_near_zero() {
        for k in 1..6 {
            assert!(antideriv_invsq(k, 1e-6).unwrap().abs() < 1e-5);
        }
    }

    #[test]
    fn log_integral_routes_agree() {
        for n in 1..=12 {
            let stable = integral_log(n).unwrap().value;
            let direct = integral_log_direct(n).unwrap();
            assert!((stable - direct).abs() < 1e-10, "n={n}: {stable} vs {direct}");
        }
        let e1 = ei(std::f64::consts::LN_2).unwrap().value;
        let e2 = ei(2.0 * std::f64::consts::LN_2).unwrap().value;
        let expect = e2 - e1 - std::f64::consts::LN_2;
        assert!((integral_log(1).unwrap().value - expect).abs() < 1e-14);
    }

    #[test]
    fn domain_checks() {
        assert!(antideriv_odd(1, -0.1).is_err());
        assert!(antideriv_odd(1, 1.1).is_err());
        assert!(antideriv_even(1, 0.0).is_err());
        assert!(antideriv_invsq(1, 1.0).is_err());
        assert!(antideriv_invsq(0, 0.5).is_err());
        assert!(antideriv_log(1, 0.0).is_err());
        assert!(integral_invsq(0).is_err());
        assert!(integral_log(0).is_err());
    }

    #[test]
    fn log_antiderivative_single_term() {
        let v = antideriv_log(0, 1.0).unwrap();
        assert_eq!(v, ei(std::f64::consts::LN_2).unwrap().value);
    }
}
