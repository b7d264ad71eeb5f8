//! Big-integer helpers and the exact-to-float boundary.
//!
//! Conversions here lose at most one ulp (plus a 2^-64 truncation) for
//! results in the normal range; subnormal results lose the usual gradual
//! underflow precision.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// `x * 2^e` without intermediate overflow or underflow.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    const STEP: i64 = 1000;
    while e > STEP {
        x *= 2f64.powi(STEP as i32);
        e -= STEP;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -STEP {
        x *= 2f64.powi(-STEP as i32);
        e += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// `num / den` rounded to f64. Panics on a zero denominator.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let a = num.magnitude();
    let b = den.magnitude();
    // scale so the integer quotient carries 65 or 66 significant bits
    let shift = b.bits() as i64 - a.bits() as i64 + 65;
    let q = if shift >= 0 {
        (a << shift as u64) / b
    } else {
        a / (b << (-shift) as u64)
    };
    let mag = ldexp(q.to_f64().expect("quotient fits in f64"), -shift);
    if negative {
        -mag
    } else {
        mag
    }
}

/// `num / 2^scale_log2` rounded to f64.
pub fn scaled_to_f64(num: &BigInt, scale_log2: u64) -> f64 {
    let bits = num.bits();
    if bits <= 64 {
        return ldexp(num.to_f64().expect("small integer"), -(scale_log2 as i64));
    }
    let drop = bits - 64;
    let (sign, mag) = (num.sign(), num.magnitude());
    let top = (mag >> drop).to_f64().expect("64-bit mantissa");
    let v = ldexp(top, drop as i64 - scale_log2 as i64);
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

/// Exact binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Exact quotient `num / den`, returning `None` when it leaves a remainder.
pub fn exact_div(num: &BigInt, den: &BigInt) -> Option<BigInt> {
    let (q, r) = num.div_rem(den);
    r.is_zero().then_some(q)
}

/// Exact factorial.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

const CENTRAL_ASYMPTOTIC_MIN: u64 = 128;

/// Float approximation of C(2m, m) / 4^m, relative error below 3e-14 for all m.
///
/// Small m multiply the exact ratios (2i-1)/(2i); from m = 128 on the
/// Stirling-type expansion is truncated after the m^-6 term, whose
/// remainder is below 1e-19.
pub fn central_binomial_ratio(m: u64) -> f64 {
    if m < CENTRAL_ASYMPTOTIC_MIN {
        let mut r = 1.0;
        for i in 1..=m {
            r *= (2 * i - 1) as f64 / (2 * i) as f64;
        }
        return r;
    }
    let inv = 1.0 / m as f64;
    let series = 1.0
        + inv
            * (-1.0 / 8.0
                + inv
                    * (1.0 / 128.0
                        + inv
                            * (5.0 / 1024.0
                                + inv
                                    * (-21.0 / 32768.0
                                        + inv * (-399.0 / 262144.0 + inv * (869.0 / 4194304.0))))));
    series / (std::f64::consts::PI * m as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::ToBigInt;

    #[test]
    fn ldexp_crosses_the_exponent_range() {
        assert_eq!(ldexp(1.0, 1023), 2f64.powi(1023));
        assert_eq!(ldexp(1.0, -1074), f64::from_bits(1));
        assert_eq!(ldexp(3.0, 2000 - 2000), 3.0);
        assert_eq!(ldexp(2f64.powi(1000), -2000), 2f64.powi(-1000));
    }

    #[test]
    fn ratio_conversion_is_correctly_scaled() {
        let one_third = ratio_to_f64(&1.to_bigint().unwrap(), &3.to_bigint().unwrap());
        assert_eq!(one_third, 1.0 / 3.0);
        let big = BigInt::from(binomial(2000, 1000));
        let r = ratio_to_f64(&big, &(BigInt::one() << 1999u32));
        assert!((r - 2.0 * central_binomial_ratio(1000)).abs() < 1e-15 * r);
        assert_eq!(ratio_to_f64(&(-7).to_bigint().unwrap(), &2.to_bigint().unwrap()), -3.5);
    }

    #[test]
    fn scaled_conversion_handles_huge_numerators() {
        let n = BigInt::from(binomial(3001, 1500));
        let v = scaled_to_f64(&n, 3001);
        let expect = central_binomial_ratio(1500) * 3001.0 / 1501.0 / 2.0;
        assert!((v - expect).abs() < 1e-14 * expect);
        assert_eq!(scaled_to_f64(&BigInt::from(-12), 13), -12.0 / 8192.0);
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(13, 6), BigUint::from(1716u32));
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(factorial(10), BigUint::from(3628800u32));
    }

    #[test]
    fn central_ratio_matches_exact_on_both_sides_of_the_switch() {
        for m in [0u64, 1, 5, 60, 127, 128, 129, 300, 700] {
            let exact = ratio_to_f64(&BigInt::from(binomial(2 * m, m)), &(BigInt::one() << (2 * m)));
            let approx = central_binomial_ratio(m);
            assert!(
                (approx - exact).abs() <= 3e-14 * exact,
                "m={m}: {approx} vs {exact}"
            );
        }
    }
}
