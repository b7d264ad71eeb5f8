//! Exact coefficient triangles behind the antiderivative expansions.
//!
//! Four row kinds are produced, all ordered by k ascending:
//!
//! | kind      | integrand            | entry k                                              | scale     |
//! |-----------|----------------------|------------------------------------------------------|-----------|
//! | `OddSi`   | x^(2n+1) / asin x    | (−1)^(k+n) ballot(2n+1, k), Si multiplier 2n+2−2k    | 2^(2n+1)  |
//! | `EvenCi`  | x^(2n) / asin x      | (−1)^(k+n) ballot(2n, k),   Ci multiplier 2n+1−2k    | 2^(2n)    |
//! | `InvsqSi` | x^(2k) / asin² x     | (−1)^n invsq(k, n), Si multiplier 2n−1; then 2k+1    | 2^(2k)    |
//! | `LogEi`   | xⁿ / ln(1+x)         | (−1)^(k+n) C(n, k), Ei multiplier k+1                | 1         |
//!
//! Rows are generated with exact big integers. Consumers that only need
//! the normalized weights `numerator / 2^scale` can use [`row_weights`],
//! which switches to a float recurrence above a configurable index.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::exact::{binomial, central_binomial_ratio, exact_div, ldexp, scaled_to_f64};

/// Default index above which [`row_weights`] uses the float recurrence.
pub const DEFAULT_EXACT_THRESHOLD: u64 = 512;

/// Signed integer numerator over a power-of-two scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCoefficient {
    pub numerator: BigInt,
    pub scale_log2: u64,
}

impl ExactCoefficient {
    pub fn to_f64(&self) -> f64 {
        scaled_to_f64(&self.numerator, self.scale_log2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    OddSi,
    EvenCi,
    InvsqSi,
    LogEi,
}

impl RowKind {
    pub fn name(self) -> &'static str {
        match self {
            RowKind::OddSi => "odd_si",
            RowKind::EvenCi => "even_ci",
            RowKind::InvsqSi => "invsq_si",
            RowKind::LogEi => "log_ei",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowEntry {
    /// The integer m in Si(m·asin x), Ci(m·asin x) or Ei(m·ln(1+x)).
    pub multiplier: u64,
    pub coefficient: ExactCoefficient,
}

/// One antiderivative expansion: ordered (multiplier, coefficient) pairs
/// sharing a single scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientRow {
    pub kind: RowKind,
    pub index: u64,
    pub entries: Vec<RowEntry>,
}

impl CoefficientRow {
    pub fn scale_log2(&self) -> u64 {
        self.entries
            .first()
            .map(|e| e.coefficient.scale_log2)
            .unwrap_or(0)
    }

    pub fn multipliers(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.multiplier).collect()
    }

    pub fn numerators(&self) -> Vec<BigInt> {
        self.entries
            .iter()
            .map(|e| e.coefficient.numerator.clone())
            .collect()
    }

    /// Exact sum of the signed numerators.
    pub fn signed_sum(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::zero(), |acc, e| acc + &e.coefficient.numerator)
    }

    /// Normalized weights `numerator / 2^scale`, in entry order.
    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.coefficient.to_f64()).collect()
    }

    fn build(kind: RowKind, index: u64, scale_log2: u64, items: Vec<(u64, BigInt)>) -> Self {
        let entries = items
            .into_iter()
            .map(|(multiplier, numerator)| RowEntry {
                multiplier,
                coefficient: ExactCoefficient {
                    numerator,
                    scale_log2,
                },
            })
            .collect();
        CoefficientRow {
            kind,
            index,
            entries,
        }
    }
}

fn sign(exponent: u64) -> BigInt {
    if exponent % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Catalan-triangle entry C(n,k)·(n−2k+1)/(n−k+1), for 0 ≤ k ≤ ⌊n/2⌋.
pub fn ballot_coefficient(n: u64, k: u64) -> Result<BigInt> {
    if k > n / 2 {
        return Err(domain(format!("ballot_coefficient needs k <= n/2, got n={n}, k={k}")));
    }
    Ok(ballot_from_binomial(BigInt::from(binomial(n, k)), n, k))
}

fn ballot_from_binomial(binom: BigInt, n: u64, k: u64) -> BigInt {
    let num = binom * BigInt::from(n - 2 * k + 1);
    exact_div(&num, &BigInt::from(n - k + 1)).expect("ballot numbers are integers")
}

/// Entry (1−2n)²/(k+1−n)·C(2k, k+n) of the inverse-square triangle, 1 ≤ n ≤ k.
pub fn invsq_coefficient(k: u64, n: u64) -> Result<BigInt> {
    if n < 1 || n > k {
        return Err(domain(format!("invsq_coefficient needs 1 <= n <= k, got k={k}, n={n}")));
    }
    Ok(invsq_from_binomial(BigInt::from(binomial(2 * k, k + n)), k, n))
}

fn invsq_from_binomial(binom: BigInt, k: u64, n: u64) -> BigInt {
    let odd = BigInt::from(2 * n - 1);
    let num = binom * &odd * &odd;
    exact_div(&num, &BigInt::from(k + 1 - n)).expect("inverse-square entries are integers")
}

/// Walk the ballot row N = `top` for k = 0..=last, reusing the binomial recurrence.
fn ballot_run(top: u64, last: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(last as usize + 1);
    let mut binom = BigInt::one();
    for k in 0..=last {
        if k > 0 {
            binom = binom * BigInt::from(top - k + 1) / BigInt::from(k);
        }
        out.push(ballot_from_binomial(binom.clone(), top, k));
    }
    out
}

/// Row for ∫ x^(2n+1)/asin x dx = 2^−(2n+1) Σ_k c_k Si((2n+2−2k) asin x).
pub fn odd_row(n: u64) -> CoefficientRow {
    let items = ballot_run(2 * n + 1, n)
        .into_iter()
        .enumerate()
        .map(|(k, b)| {
            let k = k as u64;
            (2 * n + 2 - 2 * k, sign(k + n) * b)
        })
        .collect();
    CoefficientRow::build(RowKind::OddSi, n, 2 * n + 1, items)
}

/// Row for ∫ x^(2n)/asin x dx = 2^−2n Σ_k c_k Ci((2n+1−2k) asin x).
pub fn even_row(n: u64) -> CoefficientRow {
    let items = ballot_run(2 * n, n)
        .into_iter()
        .enumerate()
        .map(|(k, b)| {
            let k = k as u64;
            (2 * n + 1 - 2 * k, sign(k + n) * b)
        })
        .collect();
    CoefficientRow::build(RowKind::EvenCi, n, 2 * n, items)
}

/// Si part of ∫ x^(2k)/asin² x dx: multipliers 1, 3, …, 2k−1 then 2k+1.
pub fn invsq_row(k: u64) -> Result<CoefficientRow> {
    if k < 1 {
        return Err(domain("invsq_row needs k >= 1"));
    }
    let mut items = Vec::with_capacity(k as usize + 1);
    // C(2k, k+n) for n = 1.. by the downward binomial recurrence
    let mut binom = BigInt::from(binomial(2 * k, k + 1));
    for n in 1..=k {
        if n > 1 {
            binom = binom * BigInt::from(k - n + 1) / BigInt::from(k + n);
        }
        items.push((2 * n - 1, sign(n) * invsq_from_binomial(binom.clone(), k, n)));
    }
    items.push((2 * k + 1, sign(k + 1) * BigInt::from(2 * k + 1)));
    Ok(CoefficientRow::build(RowKind::InvsqSi, k, 2 * k, items))
}

/// Row for ∫ xⁿ/ln(1+x) dx = Σ_k c_k Ei((k+1) ln(1+x)).
pub fn log_row(n: u64) -> CoefficientRow {
    let mut items = Vec::with_capacity(n as usize + 1);
    let mut binom = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            binom = binom * BigInt::from(n - k + 1) / BigInt::from(k);
        }
        items.push((k + 1, sign(k + n) * binom.clone()));
    }
    CoefficientRow::build(RowKind::LogEi, n, 0, items)
}

/// Exact row of the given kind.
pub fn row(kind: RowKind, index: u64) -> Result<CoefficientRow> {
    match kind {
        RowKind::OddSi => Ok(odd_row(index)),
        RowKind::EvenCi => Ok(even_row(index)),
        RowKind::InvsqSi => invsq_row(index),
        RowKind::LogEi => Ok(log_row(index)),
    }
}

/// Normalized weights of a row, exact up to `exact_threshold` and from the
/// float recurrence above it. Log rows are always exact.
pub fn row_weights(kind: RowKind, index: u64, exact_threshold: u64) -> Result<Vec<f64>> {
    if index <= exact_threshold || kind == RowKind::LogEi {
        Ok(row(kind, index)?.weights())
    } else {
        float_weights(kind, index)
    }
}

/// Float recurrence for the normalized weights.
///
/// Each row is anchored on the central binomial ratio C(2m,m)/4^m and
/// walked outward with exact small-integer ratios, one rounding per step.
pub fn float_weights(kind: RowKind, index: u64) -> Result<Vec<f64>> {
    let n = index;
    let alternating = |e: u64| if e % 2 == 0 { 1.0 } else { -1.0 };
    match kind {
        RowKind::OddSi => {
            // B_k = C(2n+1,k)/2^(2n+1)
            let mut w = vec![0.0; n as usize + 1];
            let mut b = central_binomial_ratio(n) * (2 * n + 1) as f64 / (2 * (n + 1)) as f64;
            for k in (0..=n).rev() {
                if k < n {
                    b *= (k + 1) as f64 / (2 * n + 1 - k) as f64;
                }
                let factor = (2 * n - 2 * k + 2) as f64 / (2 * n - k + 2) as f64;
                w[k as usize] = alternating(k + n) * b * factor;
            }
            Ok(w)
        }
        RowKind::EvenCi => {
            let mut w = vec![0.0; n as usize + 1];
            let mut b = central_binomial_ratio(n);
            for k in (0..=n).rev() {
                if k < n {
                    b *= (k + 1) as f64 / (2 * n - k) as f64;
                }
                let factor = (2 * n - 2 * k + 1) as f64 / (2 * n - k + 1) as f64;
                w[k as usize] = alternating(k + n) * b * factor;
            }
            Ok(w)
        }
        RowKind::InvsqSi => {
            if n < 1 {
                return Err(domain("invsq weights need k >= 1"));
            }
            let k = n;
            let mut w = Vec::with_capacity(k as usize + 1);
            let mut d = central_binomial_ratio(k);
            for j in 1..=k {
                d *= (k - j + 1) as f64 / (k + j) as f64;
                let odd = (2 * j - 1) as f64;
                w.push(alternating(j) * odd * odd / (k + 1 - j) as f64 * d);
            }
            w.push(alternating(k + 1) * ldexp((2 * k + 1) as f64, -2 * k as i64));
            Ok(w)
        }
        RowKind::LogEi => Ok(log_row(n).weights()),
    }
}

/// Multipliers of a row without building its coefficients.
pub fn row_multipliers(kind: RowKind, index: u64) -> Vec<u64> {
    let n = index;
    match kind {
        RowKind::OddSi => (0..=n).map(|k| 2 * n + 2 - 2 * k).collect(),
        RowKind::EvenCi => (0..=n).map(|k| 2 * n + 1 - 2 * k).collect(),
        RowKind::InvsqSi => (1..=n).map(|j| 2 * j - 1).chain(std::iter::once(2 * n + 1)).collect(),
        RowKind::LogEi => (0..=n).map(|k| k + 1).collect(),
    }
}

/// True when consecutive numerators alternate in sign.
pub fn row_is_alternating(row: &CoefficientRow) -> bool {
    row.entries
        .windows(2)
        .all(|w| w[0].coefficient.numerator.is_positive() != w[1].coefficient.numerator.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ballot_reference_rows() {
        let r13: Vec<_> = (0..=6).map(|k| ballot_coefficient(13, k).unwrap()).collect();
        assert_eq!(r13, ints(&[1, 12, 65, 208, 429, 572, 429]));
        let r12: Vec<_> = (0..=6).map(|k| ballot_coefficient(12, k).unwrap()).collect();
        assert_eq!(r12, ints(&[1, 11, 54, 154, 275, 297, 132]));
        assert_eq!(ballot_coefficient(0, 0).unwrap(), BigInt::one());
        assert!(ballot_coefficient(13, 7).is_err());
    }

    #[test]
    fn invsq_reference_entries() {
        let k3: Vec<_> = (1..=3).map(|n| invsq_coefficient(3, n).unwrap()).collect();
        assert_eq!(k3, ints(&[5, 27, 25]));
        let k4: Vec<_> = (1..=4).map(|n| invsq_coefficient(4, n).unwrap()).collect();
        assert_eq!(k4, ints(&[14, 84, 100, 49]));
        assert_eq!(invsq_coefficient(1, 1).unwrap(), BigInt::one());
        assert!(invsq_coefficient(3, 0).is_err());
        assert!(invsq_coefficient(3, 4).is_err());
    }

    #[test]
    fn odd_row_six() {
        let row = odd_row(6);
        assert_eq!(row.multipliers(), vec![14, 12, 10, 8, 6, 4, 2]);
        assert_eq!(row.numerators(), ints(&[1, -12, 65, -208, 429, -572, 429]));
        assert_eq!(row.scale_log2(), 13);
    }

    #[test]
    fn small_odd_rows() {
        let r0 = odd_row(0);
        assert_eq!(r0.multipliers(), vec![2]);
        assert_eq!(r0.numerators(), ints(&[1]));
        assert_eq!(r0.scale_log2(), 1);
        let r1 = odd_row(1);
        assert_eq!(r1.multipliers(), vec![4, 2]);
        assert_eq!(r1.numerators(), ints(&[-1, 2]));
    }

    #[test]
    fn even_row_six() {
        let row = even_row(6);
        assert_eq!(row.multipliers(), vec![13, 11, 9, 7, 5, 3, 1]);
        assert_eq!(row.numerators(), ints(&[1, -11, 54, -154, 275, -297, 132]));
        assert_eq!(row.scale_log2(), 12);
        let r0 = even_row(0);
        assert_eq!((r0.multipliers(), r0.numerators(), r0.scale_log2()), (vec![1], ints(&[1]), 0));
    }

    #[test]
    fn invsq_reference_rows() {
        let r3 = invsq_row(3).unwrap();
        assert_eq!(r3.multipliers(), vec![1, 3, 5, 7]);
        assert_eq!(r3.numerators(), ints(&[-5, 27, -25, 7]));
        assert_eq!(r3.scale_log2(), 6);
        let r4 = invsq_row(4).unwrap();
        assert_eq!(r4.multipliers(), vec![1, 3, 5, 7, 9]);
        assert_eq!(r4.numerators(), ints(&[-14, 84, -100, 49, -9]));
        assert_eq!(r4.scale_log2(), 8);
        let r1 = invsq_row(1).unwrap();
        assert_eq!(r1.numerators(), ints(&[-1, 3]));
        assert!(invsq_row(0).is_err());
    }

    #[test]
    fn log_rows() {
        let r1 = log_row(1);
        assert_eq!(r1.multipliers(), vec![1, 2]);
        assert_eq!(r1.numerators(), ints(&[-1, 1]));
        let r0 = log_row(0);
        assert_eq!((r0.multipliers(), r0.numerators()), (vec![1], ints(&[1])));
    }

    #[test]
    fn zero_signed_sums() {
        for n in 1..=30 {
            assert!(even_row(n).signed_sum().is_zero(), "even row {n}");
            assert!(log_row(n).signed_sum().is_zero(), "log row {n}");
        }
        assert!(!odd_row(3).signed_sum().is_zero());
    }

    #[test]
    fn multipliers_match_generated_rows() {
        for n in 1..12 {
            for kind in [RowKind::OddSi, RowKind::EvenCi, RowKind::InvsqSi, RowKind::LogEi] {
                assert_eq!(row(kind, n).unwrap().multipliers(), row_multipliers(kind, n));
            }
        }
    }

    #[test]
    fn rows_alternate_in_sign() {
        for n in 1..20 {
            assert!(row_is_alternating(&odd_row(n)));
            assert!(row_is_alternating(&even_row(n)));
            assert!(row_is_alternating(&invsq_row(n).unwrap()));
            assert!(row_is_alternating(&log_row(n)));
        }
    }

    #[test]
    fn float_path_tracks_exact_rows_at_small_index() {
        for kind in [RowKind::OddSi, RowKind::EvenCi, RowKind::InvsqSi] {
            for n in [1u64, 2, 7, 40, 200] {
                let exact = row(kind, n).unwrap().weights();
                let float = float_weights(kind, n).unwrap();
                for (e, f) in exact.iter().zip(&float) {
                    if e.abs() > 1e-290 {
                        assert!((e - f).abs() <= 1e-12 * e.abs(), "{kind:?} {n}: {e} vs {f}");
                    }
                }
            }
        }
    }
}
