//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature on finite and
//! semi-infinite intervals.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate satisfies `error <= max(abs, rel * |value|)`.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_478_398,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Segment { a, b, value, error }
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("non-finite interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let first = kronrod21(&f, a, b);
    if !first.value.is_finite() {
        return Err(Error::Domain(format!("integrand not finite on [{a}, {b}]")));
    }
    let mut heap = BinaryHeap::new();
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);
    let mut evaluations = 21;

    while error > tol.target(value) {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Accuracy {
                estimate: error,
                target: tol.target(value),
                context: format!(" after {MAX_INTERVALS} subintervals on [{a}, {b}]"),
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval collapsed to adjacent floats
            return Err(Error::Accuracy {
                estimate: error,
                target: tol.target(value),
                context: format!(" (subinterval underflow near {mid})"),
            });
        }
        let left = kronrod21(&f, worst.a, mid);
        let right = kronrod21(&f, mid, worst.b);
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if !value.is_finite() {
            return Err(Error::Domain(format!("integrand not finite near {mid}")));
        }
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(Integral {
        value,
        error,
        evaluations,
    })
}

/// Integrate `f` over `[a, ∞)` through the map `x = a + (1 - t) / t`, `t ∈ (0, 1]`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: Tolerance) -> Result<Integral> {
    let mapped = |t: f64| {
        let x = a + (1.0 - t) / t;
        let fx = f(x);
        if fx == 0.0 {
            0.0
        } else {
            fx / (t * t)
        }
    };
    integrate(mapped, 0.0, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TIGHT: Tolerance = Tolerance::new(1e-14, 1e-12);

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, TIGHT).unwrap();
        assert!((r.value - 13.5).abs() < 1e-13);
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        let r = integrate(
            |x: f64| 1.0 / x.sqrt(),
            0.0,
            1.0,
            Tolerance::new(1e-10, 1e-10),
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn exponential_tail() {
        let r = integrate_to_infinity(|x: f64| (-x).exp(), 0.0, TIGHT).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let g = integrate_to_infinity(|x: f64| (-x * x).exp(), 0.0, TIGHT).unwrap();
        assert!((g.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, TIGHT).unwrap().value, 0.0);
    }

    #[test]
    fn nan_integrand_is_reported() {
        assert!(matches!(
            integrate(|_| f64::NAN, 0.0, 1.0, TIGHT),
            Err(Error::Domain(_))
        ));
    }
}
