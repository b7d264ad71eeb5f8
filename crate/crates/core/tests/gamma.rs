//! The embedded Euler–Mascheroni digits against an independent fixed-point
//! evaluation: γ = H_n − ln n − 1/(2n) + Σ B_2k / (2k n^2k), n = 2^10.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use sinint::specfun::{EULER_GAMMA, EULER_GAMMA_DIGITS};

const DIGITS: u32 = 60;

fn scale() -> BigInt {
    BigInt::from(10u32).pow(DIGITS)
}

/// ln 2 = Σ_{k≥1} 1 / (k 2^k) in fixed point.
fn ln2_fixed(s: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut pow = BigInt::from(2u32);
    let mut k = 1u32;
    loop {
        let term = s / (&pow * k);
        if term.is_zero() {
            return acc;
        }
        acc += term;
        pow *= 2u32;
        k += 1;
    }
}

fn gamma_fixed() -> BigInt {
    let s = scale();
    let n: u32 = 1024;
    let harmonic: BigInt = (1..=n).map(|k| &s / k).sum();
    let ln_n = ln2_fixed(&s) * 10u32;
    let mut g = harmonic - ln_n - &s / (2 * n);
    // B_2 .. B_14 as (numerator, denominator)
    let bernoulli: [(i64, i64); 7] = [(1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730), (7, 6)];
    let n_big = BigInt::from(n);
    let mut n_pow = BigInt::one();
    for (i, (num, den)) in bernoulli.iter().enumerate() {
        let two_k = 2 * (i as i64 + 1);
        n_pow = n_pow * &n_big * &n_big;
        g += &s * num / (BigInt::from(*den * two_k) * &n_pow);
    }
    g
}

#[test]
fn embedded_digits_match_independent_evaluation() {
    let independent = gamma_fixed().to_string();
    // "0." followed by the first 30 decimals
    let embedded: String = EULER_GAMMA_DIGITS[2..32].to_string();
    assert_eq!(&independent[..30], embedded, "independent value {independent}");
}

#[test]
fn f64_constant_is_the_rounded_digits() {
    let parsed: f64 = EULER_GAMMA_DIGITS.parse().unwrap();
    assert_eq!(parsed, EULER_GAMMA);
    assert!(EULER_GAMMA_DIGITS.len() >= 32);
}
