//! Log-gamma for real and complex arguments.
//!
//! Both use the Stirling series after an upward shift `lnΓ(z) = lnΓ(z + N) − Σ ln(z + k)`.
//! With principal-branch logarithms the shifted sum reproduces the principal
//! branch of `lnΓ`, analytic off the non-positive real axis. A vertical line
//! with `Re z < 0` crosses that cut, where the log jumps by a multiple of 2πi
//! while `Γ` itself stays continuous.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_{2k} / (2k (2k − 1))` for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_62;

/// Below this modulus the argument is shifted upward before applying Stirling.
const STIRLING_MIN_MODULUS: f64 = 15.0;

fn is_pole(re: f64, im: f64) -> bool {
    im == 0.0 && re <= 0.0 && re == re.round()
}

fn stirling_tail(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut acc = Complex64::new(0.0, 0.0);
    for c in STIRLING {
        acc += term * c;
        term *= inv2;
    }
    acc
}

/// Principal branch of `ln Γ(z)`.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if is_pole(z.re, z.im) {
        return Err(Error::Domain(format!("gamma pole at {}", z.re)));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 1.0 || w.norm() < STIRLING_MIN_MODULUS {
        shift += w.ln();
        w += 1.0;
    }
    let main = (w - 0.5) * w.ln() - w + HALF_LN_2PI + stirling_tail(w);
    Ok(main - shift)
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    let mut w = x;
    let mut shift = 1.0;
    let mut log_shift = 0.0;
    while w < STIRLING_MIN_MODULUS {
        shift *= w;
        if shift > 1e280 {
            log_shift += shift.ln();
            shift = 1.0;
        }
        w += 1.0;
    }
    log_shift += shift.ln();
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut term = inv;
    let mut tail = 0.0;
    for c in STIRLING {
        tail += c * term;
        term *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + HALF_LN_2PI + tail - log_shift)
}

/// Real gamma function; negative non-integer arguments use reflection.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || is_pole(x, 0.0) {
        return Err(Error::Domain(format!(
            "gamma pole or non-finite argument {x}"
        )));
    }
    if x > 0.0 {
        if x == x.round() && x <= 25.0 {
            // exact factorial for small integers
            return Ok((1..x as u64).map(|k| k as f64).product());
        }
        return Ok(ln_gamma(x)?.exp());
    }
    let sin = (std::f64::consts::PI * x).sin();
    Ok(std::f64::consts::PI / (sin * gamma(1.0 - x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn trivial_values() {
        assert!(log_gamma_complex(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma_complex(c(2.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma_complex(c(0.5, 0.0)).unwrap();
        assert!((half.re - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        assert_eq!(half.im, 0.0);
    }

    // Reference values: mpmath.loggamma at 30 significant digits.
    #[test]
    fn matches_extended_precision_reference() {
        let cases = [
            (
                c(3.0, 4.0),
                c(-1.756_626_784_603_784_1, 4.742_664_438_034_657_9),
            ),
            (c(0.5, 0.0), c(0.572_364_942_924_700_09, 0.0)),
        ];
        for (z, want) in cases {
            let got = log_gamma_complex(z).unwrap();
            assert!(rel(got, want) < 1e-13, "{z}: {got} vs {want}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(
                log_gamma_complex(c(x, 0.0)),
                Err(Error::Domain(_))
            ));
            assert!(gamma(x).is_err());
        }
        assert!(log_gamma_complex(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn real_gamma_values() {
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!((gamma(2.5).unwrap() - 1.329_340_388_179_137).abs() < 1e-14);
        assert!((gamma(-0.5).unwrap() + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!((ln_gamma(100.0).unwrap() - 359.134_205_369_575_4).abs() < 1e-11);
    }

    #[test]
    fn continuous_along_vertical_lines() {
        // Off the negative real axis the principal branch has no 2πi jumps.
        for re in [0.25, 1.0, 7.5] {
            let mut prev = log_gamma_complex(c(re, -40.0)).unwrap();
            let mut t = -40.0;
            while t < 40.0 {
                t += 0.05;
                let cur = log_gamma_complex(c(re, t)).unwrap();
                assert!((cur.im - prev.im).abs() < 0.5, "jump at {re}+{t}i");
                prev = cur;
            }
        }
        // Lines with Re z < 0 cross the cut on the negative real axis; Γ itself stays continuous.
        let mut prev = log_gamma_complex(c(-2.5, -3.0)).unwrap().exp();
        let mut t = -3.0;
        while t < 3.0 {
            t += 0.01;
            let cur = log_gamma_complex(c(-2.5, t)).unwrap().exp();
            assert!(
                (cur - prev).norm() < 0.05 * prev.norm().max(cur.norm()),
                "Γ jump at t={t}"
            );
            prev = cur;
        }
    }

    proptest! {
        #[test]
        fn recurrence(re in -6.0f64..30.0, im in -60.0f64..60.0) {
            prop_assume!(im.abs() > 1e-3 || re > 0.0);
            let z = c(re, im);
            let lhs = log_gamma_complex(z + 1.0).unwrap();
            let rhs = log_gamma_complex(z).unwrap() + z.ln();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0), "{} {}", lhs, rhs);
        }

        #[test]
        fn real_and_complex_agree(x in 1e-3f64..150.0) {
            let r = ln_gamma(x).unwrap();
            let z = log_gamma_complex(c(x, 0.0)).unwrap();
            prop_assert!((r - z.re).abs() <= 1e-13 * r.abs().max(1.0));
        }
    }
}
