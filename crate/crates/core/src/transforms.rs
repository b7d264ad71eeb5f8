//! Double series obtained by integrating power series divided by asin x.
//!
//! Each outer term is a power-series coefficient times a closed-form
//! integral over [0, 1]:
//!
//! * Theorem 1:  1   = Σ_{j≥0} a_j · I(j)         with asin x = Σ a_j x^(2j+1)
//! * Theorem 2:  π/2 = Σ_{k≥0} 4·b_k · I(k+1)     with asin² x = Σ b_k x^(2k+2)
//! * Theorem 3:  π/4 = Σ_{n≥1} 2·b_(n−1) · I(n)
//! * Sec2:       ∫₀¹ x/asin x dx = Σ_{j≥0} a_j · J(j+1)
//!
//! where I(n) = ∫₀¹ x^(2n+1)/asin x dx and J(k) = ∫₀¹ x^(2k)/asin² x dx.
//!
//! Theorem 2 is normalized to its stated form: that double sum is four times
//! the integrated x·asin x series, whose own limit is π/8.
//!
//! Outer terms are independent; they may be evaluated in parallel but are
//! always reduced sequentially in index order, so the partial sums do not
//! depend on the chunk size.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{integral_invsq_with, integral_odd_with};
use crate::error::{domain, Result};
use crate::exact::{binomial, central_binomial_ratio, factorial, ratio_to_f64};
use crate::oracle::{definite_integral, IntegrandKind};
use crate::specfun::si_value;
use crate::summation::{naive_sum, NeumaierSum};
use crate::triangles::DEFAULT_EXACT_THRESHOLD;

/// Default cap on the number of outer terms; O(J²) inner work beyond it.
pub const DEFAULT_MAX_TERMS: usize = 20_000;
/// Smallest budget accepted by the evaluators.
pub const MIN_TERMS: usize = 8;
/// Fewest points the tail fit will use.
pub const MIN_FIT_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesId {
    Theorem1,
    Theorem2,
    Theorem3,
    Sec2,
}

impl SeriesId {
    pub fn theorem(id: u8) -> Result<Self> {
        match id {
            1 => Ok(SeriesId::Theorem1),
            2 => Ok(SeriesId::Theorem2),
            3 => Ok(SeriesId::Theorem3),
            _ => Err(domain(format!("theorem id must be 1, 2 or 3, got {id}"))),
        }
    }

    /// First outer index of the series.
    pub fn first_index(self) -> u64 {
        match self {
            SeriesId::Theorem3 => 1,
            _ => 0,
        }
    }
}

/// One outer term of a double series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub outer_index: u64,
    pub term_value: f64,
    pub inner_terms_evaluated: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Neumaier summation of the outer terms; plain summation otherwise.
    pub compensated: bool,
    pub extrapolate: bool,
    /// Minimum number of outer terms per parallel work item.
    pub parallel_chunk: usize,
    /// Rows above this index use the float weight recurrence.
    pub exact_threshold: u64,
    /// Term budget above which evaluation is refused.
    pub max_terms: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            compensated: true,
            extrapolate: true,
            parallel_chunk: 16,
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtrapolationStatus {
    Disabled,
    Applied,
    /// Too few usable terms in the last decade; raw values only.
    InsufficientTerms,
    /// Fitted exponent ≤ 1, so the fitted tail does not converge.
    DivergentFit,
}

/// Algebraic tail model term_t ≈ A·t^(−p), t = 1-based term position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub first_position: usize,
    pub last_position: usize,
    pub tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub series: SeriesId,
    pub terms_used: usize,
    pub partial_sum: f64,
    pub tail_exponent_fit: Option<f64>,
    pub extrapolated_value: Option<f64>,
    pub known_limit: f64,
    pub raw_error: f64,
    pub extrapolated_error: Option<f64>,
    pub extrapolation: ExtrapolationStatus,
}

// ---------------------------------------------------------------------------
// power-series coefficients

/// Exact coefficient of x^(2j+1) in asin x: (2j)!/(4^j (j!)² (2j+1)).
pub fn arcsine_coeff_exact(j: u64) -> BigRational {
    let num = BigInt::from(binomial(2 * j, j));
    let den = (BigInt::one() << (2 * j)) * BigInt::from(2 * j + 1);
    BigRational::new(num, den)
}

/// Coefficient of x^(2j+1) in asin x.
pub fn arcsine_coeff(j: u64) -> f64 {
    arcsine_coeff_with(j, DEFAULT_EXACT_THRESHOLD)
}

/// [`arcsine_coeff`] with an explicit exact/float switch.
pub fn arcsine_coeff_with(j: u64, exact_threshold: u64) -> f64 {
    if j <= exact_threshold {
        let c = arcsine_coeff_exact(j);
        ratio_to_f64(c.numer(), c.denom())
    } else {
        central_binomial_ratio(j) / (2 * j + 1) as f64
    }
}

/// Exact coefficient of x^(2k+2) in asin² x: 4^k (k!)² / ((2k+1)! (k+1)).
pub fn arcsine_sq_coeff_exact(k: u64) -> BigRational {
    let kf = BigInt::from(factorial(k));
    let num = (BigInt::one() << (2 * k)) * &kf * &kf;
    let den = BigInt::from(factorial(2 * k + 1)) * BigInt::from(k + 1);
    BigRational::new(num, den)
}

/// The same coefficient in central-binomial form: 4^(k+1) / (2 (k+1)² C(2k+2, k+1)).
pub fn arcsine_sq_coeff_central_form(k: u64) -> BigRational {
    let m = k + 1;
    let num = BigInt::one() << (2 * m);
    let den = BigInt::from(2 * m * m) * BigInt::from(binomial(2 * m, m));
    BigRational::new(num, den)
}

/// Coefficient of x^(2k+2) in asin² x.
pub fn arcsine_sq_coeff(k: u64) -> f64 {
    arcsine_sq_coeff_with(k, DEFAULT_EXACT_THRESHOLD)
}

pub fn arcsine_sq_coeff_with(k: u64, exact_threshold: u64) -> f64 {
    if k <= exact_threshold {
        let c = arcsine_sq_coeff_central_form(k);
        ratio_to_f64(c.numer(), c.denom())
    } else {
        1.0 / (central_binomial_ratio(k) * (2 * k + 1) as f64 * (k + 1) as f64)
    }
}

// ---------------------------------------------------------------------------
// Si(m·π/2) lookup

/// Si(m·π/2) for m = 0..=max_m.
#[derive(Debug, Clone)]
pub struct SiHalfPiTable {
    values: Vec<f64>,
}

impl SiHalfPiTable {
    pub fn new(max_m: u64) -> Self {
        let values = (0..=max_m).map(|m| si_value(m as f64 * FRAC_PI_2)).collect();
        SiHalfPiTable { values }
    }

    #[inline]
    pub fn get(&self, m: u64) -> f64 {
        self.values[m as usize]
    }
}

fn table_for(series: SeriesId, last_index: u64) -> SiHalfPiTable {
    let max_m = match series {
        SeriesId::Theorem1 | SeriesId::Theorem3 => 2 * last_index + 2,
        SeriesId::Theorem2 => 2 * last_index + 4,
        SeriesId::Sec2 => 2 * last_index + 3,
    };
    SiHalfPiTable::new(max_m)
}

// ---------------------------------------------------------------------------
// outer terms

fn check_index(series: SeriesId, index: u64) -> Result<()> {
    if index < series.first_index() {
        return Err(domain(format!(
            "{series:?} starts at index {}, got {index}",
            series.first_index()
        )));
    }
    Ok(())
}

fn term_with_table(
    series: SeriesId,
    index: u64,
    exact_threshold: u64,
    table: &SiHalfPiTable,
) -> Result<SeriesTerm> {
    check_index(series, index)?;
    let si = |m: u64| table.get(m);
    let (coeff, inner, inner_terms) = match series {
        SeriesId::Theorem1 => (
            arcsine_coeff_with(index, exact_threshold),
            integral_odd_with(index, exact_threshold, si)?.value,
            index + 1,
        ),
        SeriesId::Theorem2 => (
            4.0 * arcsine_sq_coeff_with(index, exact_threshold),
            integral_odd_with(index + 1, exact_threshold, si)?.value,
            index + 2,
        ),
        SeriesId::Theorem3 => (
            2.0 * arcsine_sq_coeff_with(index - 1, exact_threshold),
            integral_odd_with(index, exact_threshold, si)?.value,
            index + 1,
        ),
        SeriesId::Sec2 => (
            arcsine_coeff_with(index, exact_threshold),
            integral_invsq_with(index + 1, exact_threshold, si)?.value,
            index + 2,
        ),
    };
    Ok(SeriesTerm {
        outer_index: index,
        term_value: coeff * inner,
        inner_terms_evaluated: inner_terms,
    })
}

/// One outer term, built as series coefficient × closed-form integral.
pub fn theorem_term(series: SeriesId, index: u64) -> Result<SeriesTerm> {
    check_index(series, index)?;
    let table = table_for(series, index);
    term_with_table(series, index, DEFAULT_EXACT_THRESHOLD, &table)
}

/// One outer term of Theorems 1–3 summed exactly as the theorem states it.
///
/// The rational prefactor of every inner term is formed exactly from
/// factorials and binomials, rounded once, then multiplied by Si(π·m).
/// Shares nothing with [`theorem_term`] beyond Si itself.
pub fn theorem_term_literal(series: SeriesId, index: u64) -> Result<SeriesTerm> {
    check_index(series, index)?;
    let big = |v: u64| BigInt::from(v);
    let (prefactor, top, inner_range): (BigRational, u64, Vec<u64>) = match series {
        SeriesId::Theorem1 => {
            let j = index;
            let jf = BigInt::from(factorial(j));
            let den = (BigInt::one() << (4 * j)) * &jf * &jf * big(2 * j + 1);
            (BigRational::new(BigInt::from(factorial(2 * j)), den), 2 * j + 1, (0..=j).collect())
        }
        SeriesId::Theorem2 => {
            let k = index;
            let kf = BigInt::from(factorial(k));
            let den = BigInt::from(factorial(2 * k + 1)) * big(k + 1);
            (BigRational::new(&kf * &kf, den), 2 * k + 3, (0..=k + 1).collect())
        }
        SeriesId::Theorem3 => {
            let n = index;
            let den = big(n * n) * BigInt::from(binomial(2 * n, n));
            (BigRational::new(BigInt::one(), den), 2 * n + 1, (0..=n).collect())
        }
        SeriesId::Sec2 => {
            return Err(domain("the arcsine-squared series has no literal double-sum form"));
        }
    };

    let mut parts = Vec::with_capacity(inner_range.len());
    let mut binom = BigInt::one();
    for &k in &inner_range {
        if k > 0 {
            binom = binom * big(top - k + 1) / big(k);
        }
        // Si argument multiple, the linear factor, its denominator and the sign exponent
        let (pi_multiple, lin, lin_den, sign_exp) = match series {
            SeriesId::Theorem1 => {
                let j = index;
                (j + 1 - k, j - k + 1, 2 * j - k + 2, k + j)
            }
            SeriesId::Theorem2 => {
                let kk = index;
                (kk + 2 - k, kk + 2 - k, 2 * kk + 4 - k, k + kk + 1)
            }
            SeriesId::Theorem3 => {
                let n = index;
                (n + 1 - k, n - k + 1, 2 * n - k + 2, k + n)
            }
            SeriesId::Sec2 => unreachable!(),
        };
        let mut c = &prefactor * BigRational::new(&binom * big(lin), big(lin_den));
        if sign_exp % 2 == 1 {
            c = -c;
        }
        let weight = ratio_to_f64(c.numer(), c.denom());
        parts.push((pi_multiple, weight));
    }
    parts.sort_by_key(|&(m, _)| m);
    let mut acc = NeumaierSum::new();
    for (m, w) in &parts {
        acc.add(w * si_value(*m as f64 * std::f64::consts::PI));
    }
    Ok(SeriesTerm {
        outer_index: index,
        term_value: acc.value(),
        inner_terms_evaluated: parts.len() as u64,
    })
}

/// Limit the series converges to.
pub fn known_limit(series: SeriesId) -> Result<f64> {
    match series {
        SeriesId::Theorem1 => Ok(1.0),
        SeriesId::Theorem2 => Ok(FRAC_PI_2),
        SeriesId::Theorem3 => Ok(FRAC_PI_4),
        SeriesId::Sec2 => sec2_known_limit(),
    }
}

/// ∫₀¹ x/asin x dx by adaptive quadrature at tolerance 1e-13.
pub fn sec2_known_limit() -> Result<f64> {
    Ok(definite_integral(IntegrandKind::OddPowerOverAsin, 0, 1e-13)?.value)
}

fn check_budget(terms: usize, opts: &EvalOptions) -> Result<()> {
    if terms < MIN_TERMS {
        return Err(domain(format!("term budget must be >= {MIN_TERMS}, got {terms}")));
    }
    if terms > opts.max_terms {
        return Err(domain(format!(
            "term budget {terms} exceeds the cap {}; raise max_terms to allow it",
            opts.max_terms
        )));
    }
    Ok(())
}

/// The first `terms` outer terms of a series, in index order.
pub fn series_terms(series: SeriesId, terms: usize, opts: &EvalOptions) -> Result<Vec<SeriesTerm>> {
    check_budget(terms, opts)?;
    let first = series.first_index();
    let last = first + terms as u64 - 1;
    let table = table_for(series, last);
    let threshold = opts.exact_threshold;
    (0..terms)
        .into_par_iter()
        .with_min_len(opts.parallel_chunk.max(1))
        .map(|i| term_with_table(series, first + i as u64, threshold, &table))
        .collect()
}

/// Least-squares fit of ln term = ln A − p ln t over the last decade of terms.
pub fn fit_tail(terms: &[SeriesTerm]) -> std::result::Result<TailFit, ExtrapolationStatus> {
    let total = terms.len();
    let start = (total / 10).max(1); // 0-based position of t = start + 1
    let points: Vec<(f64, f64)> = terms[start..]
        .iter()
        .enumerate()
        .filter(|(_, t)| t.term_value > 0.0)
        .map(|(i, t)| (((start + i + 1) as f64).ln(), t.term_value.ln()))
        .collect();
    if points.len() < MIN_FIT_POINTS || points.len() < total - start {
        return Err(ExtrapolationStatus::InsufficientTerms);
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let exponent = -slope;
    let amplitude = (my - slope * mx).exp();
    if !(exponent > 1.0) {
        return Err(ExtrapolationStatus::DivergentFit);
    }
    // Σ_{t>J} A t^−p by Euler–Maclaurin from N = J + 1
    let big_n = (total + 1) as f64;
    let p = exponent;
    let tail = amplitude
        * (big_n.powf(1.0 - p) / (p - 1.0) + 0.5 * big_n.powf(-p) + p * big_n.powf(-p - 1.0) / 12.0);
    Ok(TailFit {
        exponent,
        amplitude,
        first_position: start + 1,
        last_position: total,
        tail,
    })
}

/// Report for the first `terms_used` entries of a precomputed term list.
pub fn report_from_terms(
    series: SeriesId,
    known_limit: f64,
    terms: &[SeriesTerm],
    opts: &EvalOptions,
) -> ConvergenceReport {
    let values = terms.iter().map(|t| t.term_value);
    let partial_sum = if opts.compensated {
        let mut acc = NeumaierSum::new();
        acc.extend(values);
        acc.value()
    } else {
        naive_sum(values)
    };
    let raw_error = (known_limit - partial_sum).abs();
    let (fit, status) = if opts.extrapolate {
        match fit_tail(terms) {
            Ok(f) => (Some(f), ExtrapolationStatus::Applied),
            Err(s) => (None, s),
        }
    } else {
        (None, ExtrapolationStatus::Disabled)
    };
    let extrapolated_value = fit.map(|f| partial_sum + f.tail);
    ConvergenceReport {
        series,
        terms_used: terms.len(),
        partial_sum,
        tail_exponent_fit: fit.map(|f| f.exponent),
        extrapolated_value,
        known_limit,
        raw_error,
        extrapolated_error: extrapolated_value.map(|v| (v - known_limit).abs()),
        extrapolation: status,
    }
}

/// Partial sum of a double series with optional tail extrapolation.
pub fn evaluate_series(series: SeriesId, terms: usize, opts: &EvalOptions) -> Result<ConvergenceReport> {
    let list = series_terms(series, terms, opts)?;
    Ok(report_from_terms(series, known_limit(series)?, &list, opts))
}

/// Theorem 1, 2 or 3 evaluated with `terms` outer terms.
pub fn evaluate_theorem(theorem_id: u8, terms: usize, opts: &EvalOptions) -> Result<ConvergenceReport> {
    evaluate_series(SeriesId::theorem(theorem_id)?, terms, opts)
}

/// Σ_j a_j ∫₀¹ x^(2j+2)/asin² x dx against the quadrature value of ∫₀¹ x/asin x dx.
pub fn derived_series_sec2(terms: usize, opts: &EvalOptions) -> Result<ConvergenceReport> {
    evaluate_series(SeriesId::Sec2, terms, opts)
}

/// True when every term in the list is strictly positive.
pub fn all_positive(terms: &[SeriesTerm]) -> bool {
    terms.iter().all(|t| t.term_value > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::si;
    use std::f64::consts::PI;

    #[test]
    fn arcsine_coefficients() {
        assert_eq!(arcsine_coeff(0), 1.0);
        assert!((arcsine_coeff(1) - 1.0 / 6.0).abs() < 1e-17);
        let exact = arcsine_coeff_with(100, 512);
        let float = arcsine_coeff_with(100, 0);
        assert!((exact - float).abs() <= 1e-13 * exact);
    }

    #[test]
    fn arcsine_square_coefficients() {
        assert_eq!(arcsine_sq_coeff(0), 1.0);
        assert!((arcsine_sq_coeff(1) - 1.0 / 3.0).abs() < 1e-17);
        for k in 0..=50 {
            assert_eq!(arcsine_sq_coeff_exact(k), arcsine_sq_coeff_central_form(k));
        }
    }

    #[test]
    fn first_terms_by_hand() {
        let si_pi = si(PI).unwrap().value;
        let si_2pi = si(2.0 * PI).unwrap().value;
        let t1 = theorem_term(SeriesId::Theorem1, 0).unwrap().term_value;
        assert!((t1 - si_pi / 2.0).abs() < 1e-15);
        let t2 = theorem_term(SeriesId::Theorem2, 0).unwrap().term_value;
        assert!((t2 - (si_pi - si_2pi / 2.0)).abs() < 1e-15);
        let t3 = theorem_term(SeriesId::Theorem3, 1).unwrap().term_value;
        assert!((t3 - (si_pi / 2.0 - si_2pi / 4.0)).abs() < 1e-15);
        assert!((t3 - 0.5714).abs() < 1e-4);
    }

    #[test]
    fn literal_and_integral_paths_agree_on_small_indices() {
        for series in [SeriesId::Theorem1, SeriesId::Theorem2, SeriesId::Theorem3] {
            for i in series.first_index()..series.first_index() + 30 {
                let a = theorem_term(series, i).unwrap().term_value;
                let b = theorem_term_literal(series, i).unwrap().term_value;
                assert!((a - b).abs() <= 1e-12 * a.abs(), "{series:?} {i}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn index_and_budget_errors() {
        assert!(theorem_term(SeriesId::Theorem3, 0).is_err());
        assert!(theorem_term_literal(SeriesId::Sec2, 3).is_err());
        assert!(evaluate_theorem(4, 100, &EvalOptions::default()).is_err());
        assert!(evaluate_theorem(1, 7, &EvalOptions::default()).is_err());
        let opts = EvalOptions {
            max_terms: 100,
            ..EvalOptions::default()
        };
        assert!(evaluate_theorem(1, 101, &opts).is_err());
    }

    #[test]
    fn tiny_budget_reports_raw_only() {
        let r = evaluate_theorem(1, 8, &EvalOptions::default()).unwrap();
        assert_eq!(r.extrapolation, ExtrapolationStatus::InsufficientTerms);
        assert!(r.extrapolated_value.is_none());
        assert!(r.partial_sum < 1.0);
        assert!(r.partial_sum > theorem_term(SeriesId::Theorem1, 0).unwrap().term_value);
    }
}
