//! Independent numerical checks: adaptive quadrature, Richardson-refined
//! differentiation and the raw integrands of every definite form.
//!
//! Nothing here evaluates Si, Ci, Ei or a coefficient row. The integrands
//! are built from `asin`, `ln_1p` and powers only, with their removable
//! limits at x = 0 written out explicitly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};
use crate::specfun::EULER_GAMMA;
use crate::summation::NeumaierSum;

/// Smallest tolerance [`integrate`] accepts.
pub const MIN_TOL: f64 = 1e-13;
/// Interval budget before [`integrate`] gives up.
pub const MAX_SUBDIVISIONS: usize = 1_000_000;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub abs_error_bound: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn sample<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite(x))
    }
}

/// 21-point Kronrod rule with the embedded 10-point Gauss estimate.
///
/// The panel error is |K − G| plus a 50ε·∫|f| rounding floor; the Gauss
/// difference overstates the Kronrod error on smooth panels, which keeps
/// the reported bound honest.
fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = sample(f, center)?;
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs = WGK[10] * fc.abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = sample(f, center - dx)?;
        let f2 = sample(f, center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs() + 50.0 * f64::EPSILON * abs * half.abs();
    Ok(Panel { a, b, value, error })
}

/// Adaptive Gauss–Kronrod integration of `f` over [a, b] to absolute tolerance `tol`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `tol`. Running out of panels or splittable width
/// is an error, never a silently inaccurate value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureEstimate> {
    if !(tol >= MIN_TOL) {
        return Err(domain(format!("quadrature tolerance must be >= {MIN_TOL:e}, got {tol:e}")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(domain("quadrature needs finite limits"));
    }
    if a == b {
        return Ok(QuadratureEstimate {
            value: 0.0,
            abs_error_bound: 0.0,
            subdivisions: 0,
        });
    }

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let first = gauss_kronrod(&f, a, b)?;
    let mut total_error = first.error;
    heap.push(first);
    let mut subdivisions = 1usize;

    while total_error > tol {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b)) {
            // cannot split further; if this alone breaks the budget, stop now
            let stuck = worst.error > tol;
            frozen.push(worst);
            if stuck {
                break;
            }
            continue;
        }
        if subdivisions >= MAX_SUBDIVISIONS {
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod(&f, worst.a, mid)?;
        let right = gauss_kronrod(&f, mid, worst.b)?;
        subdivisions += 1;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if subdivisions % 4096 == 0 {
            total_error = heap.iter().chain(&frozen).map(|p| p.error).sum();
        }
    }

    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    let abs_error_bound: f64 = panels.iter().map(|p| p.error).sum();
    if abs_error_bound > tol {
        return Err(Error::QuadratureFailed {
            error_bound: abs_error_bound,
            tol,
            subdivisions,
        });
    }
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut acc = NeumaierSum::new();
    for p in &panels {
        acc.add(p.value);
    }
    Ok(QuadratureEstimate {
        value: acc.value(),
        abs_error_bound,
        subdivisions,
    })
}

/// Central difference at steps h and 2h combined by one Richardson step.
///
/// Samples f on [x − 2h, x + 2h]; truncation error is O(h⁴).
pub fn differentiate<F: Fn(f64) -> f64>(f: F, x: f64, base_step: f64) -> Result<f64> {
    if !(base_step > 0.0) {
        return Err(domain("differentiation step must be positive"));
    }
    let h = base_step;
    let d1 = (sample(&f, x + h)? - sample(&f, x - h)?) / (2.0 * h);
    let d2 = (sample(&f, x + 2.0 * h)? - sample(&f, x - 2.0 * h)?) / (4.0 * h);
    Ok((4.0 * d1 - d2) / 3.0)
}

/// The integrand families behind the definite forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrandKind {
    /// x^(2n+1) / asin x, n ≥ 0
    OddPowerOverAsin,
    /// x^(2n) / asin x, n ≥ 1
    EvenPowerOverAsin,
    /// x^(2k) / asin² x, k ≥ 1
    PowerOverAsinSq,
    /// xⁿ / ln(1+x), n ≥ 1
    PowerOverLog,
}

impl IntegrandKind {
    pub fn min_index(self) -> u64 {
        match self {
            IntegrandKind::OddPowerOverAsin => 0,
            _ => 1,
        }
    }

    /// Value assigned at x = 0, where each formula is 0/0.
    pub fn limit_at_zero(self, index: u64) -> f64 {
        let unit_case = match self {
            IntegrandKind::OddPowerOverAsin => index == 0,
            IntegrandKind::EvenPowerOverAsin => false,
            IntegrandKind::PowerOverAsinSq => index == 1,
            IntegrandKind::PowerOverLog => index == 1,
        };
        if unit_case {
            1.0
        } else {
            0.0
        }
    }
}

/// Integrand of the given family with its limit at 0 filled in.
pub fn integrand(
    kind: IntegrandKind,
    index: u64,
) -> Result<impl Fn(f64) -> f64 + Send + Sync + Copy> {
    if index < kind.min_index() {
        return Err(domain(format!(
            "{kind:?} needs index >= {}, got {index}",
            kind.min_index()
        )));
    }
    let at_zero = kind.limit_at_zero(index);
    Ok(move |x: f64| {
        if x == 0.0 {
            return at_zero;
        }
        match kind {
            IntegrandKind::OddPowerOverAsin => x.powi(2 * index as i32 + 1) / x.asin(),
            IntegrandKind::EvenPowerOverAsin => x.powi(2 * index as i32) / x.asin(),
            IntegrandKind::PowerOverAsinSq => {
                let a = x.asin();
                x.powi(2 * index as i32) / (a * a)
            }
            IntegrandKind::PowerOverLog => x.powi(index as i32) / x.ln_1p(),
        }
    })
}

/// Quadrature of an integrand family over [0, 1].
pub fn definite_integral(kind: IntegrandKind, index: u64, tol: f64) -> Result<QuadratureEstimate> {
    integrate(integrand(kind, index)?, 0.0, 1.0, tol)
}

/// Si(x) = ∫₀ˣ sin t / t dt by quadrature.
pub fn si_by_quadrature(x: f64, tol: f64) -> Result<QuadratureEstimate> {
    integrate(|t: f64| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, tol)
}

/// Ci(x) = γ + ln x − ∫₀ˣ 2 sin²(t/2) / t dt by quadrature, x > 0.
pub fn ci_by_quadrature(x: f64, tol: f64) -> Result<QuadratureEstimate> {
    if !(x > 0.0) {
        return Err(domain("ci_by_quadrature needs x > 0"));
    }
    let q = integrate(
        |t: f64| {
            if t == 0.0 {
                0.0
            } else {
                let s = (0.5 * t).sin();
                -2.0 * s * s / t
            }
        },
        0.0,
        x,
        tol,
    )?;
    Ok(QuadratureEstimate {
        value: EULER_GAMMA + x.ln() + q.value,
        ..q
    })
}

/// Ei(z) = γ + ln z + ∫₀ᶻ (eᵗ − 1) / t dt by quadrature, z > 0.
pub fn ei_by_quadrature(z: f64, tol: f64) -> Result<QuadratureEstimate> {
    if !(z > 0.0) {
        return Err(domain("ei_by_quadrature needs z > 0"));
    }
    let q = integrate(|t: f64| if t == 0.0 { 1.0 } else { t.exp_m1() / t }, 0.0, z, tol)?;
    Ok(QuadratureEstimate {
        value: EULER_GAMMA + z.ln() + q.value,
        ..q
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_integrand() {
        let q = integrate(|_| 1.0, 0.0, 1.0, 1e-13).unwrap();
        assert!((q.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn sine_integral_at_pi() {
        let q = si_by_quadrature(PI, 1e-13).unwrap();
        assert!((q.value - 1.851_937_051_982_466_2).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = integrate(|x: f64| x * x, 1.0, 0.0, 1e-13).unwrap();
        assert!((q.value + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_tiny_tolerance_and_bad_samples() {
        assert!(integrate(|x| x, 0.0, 1.0, 1e-15).is_err());
        assert!(matches!(
            integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1e-10),
            Err(Error::NonFinite(_))
        ));
        assert!(differentiate(|x: f64| x.ln(), 0.0, 1e-3).is_err());
    }

    #[test]
    fn divergent_integrand_fails_loudly() {
        // 1/x blow-up: refinement chases the pole until it fails
        let r = integrate(|x: f64| if x == 0.0 { 0.0 } else { 1.0 / x }, 0.0, 1.0, 1e-10);
        assert!(
            matches!(r, Err(Error::QuadratureFailed { .. }) | Err(Error::NonFinite(_))),
            "{r:?}"
        );
    }

    #[test]
    fn derivative_of_square() {
        let d = differentiate(|x| x * x, 3.0, 1e-3).unwrap();
        assert!((d - 6.0).abs() < 1e-9);
    }

    #[test]
    fn encoded_limits() {
        let f = integrand(IntegrandKind::OddPowerOverAsin, 0).unwrap();
        assert_eq!(f(0.0), 1.0);
        let g = integrand(IntegrandKind::PowerOverAsinSq, 1).unwrap();
        assert_eq!(g(0.0), 1.0);
        let h = integrand(IntegrandKind::PowerOverLog, 1).unwrap();
        assert_eq!(h(0.0), 1.0);
        assert!(integrand(IntegrandKind::EvenPowerOverAsin, 0).is_err());
        assert!(integrand(IntegrandKind::PowerOverLog, 0).is_err());
    }

    #[test]
    fn encoded_limits_match_nearby_values() {
        let kinds = [
            IntegrandKind::OddPowerOverAsin,
            IntegrandKind::EvenPowerOverAsin,
            IntegrandKind::PowerOverAsinSq,
            IntegrandKind::PowerOverLog,
        ];
        for kind in kinds {
            for index in kind.min_index()..kind.min_index() + 5 {
                let f = integrand(kind, index).unwrap();
                assert!((f(1e-9) - f(0.0)).abs() < 1e-6, "{kind:?} {index}");
            }
        }
    }
}
