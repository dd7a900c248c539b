//! Gauss hypergeometric function on the real segment `z < 1`.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 200_000;

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy {
        estimate: term.abs(),
        target: 1e-17,
        context: format!(" (2F1 series at z={z})"),
    })
}

/// `₂F₁(a, b; c; z)` for `|z| < 1`, and for `z ≤ −1/2` through the Pfaff
/// transformation `(1 − z)^{−a} ₂F₁(a, c − b; c; z / (z − 1))`.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if c <= 0.0 && c == c.round() {
        return Err(Error::Domain(format!(
            "2F1 with non-positive integer c = {c}"
        )));
    }
    if z < -0.5 {
        return Ok((1.0 - z).powf(-a) * series(a, c - b, c, z / (z - 1.0))?);
    }
    if z.abs() < 1.0 {
        return series(a, b, c, z);
    }
    Err(Error::Unsupported(format!("2F1 evaluation at z = {z}")))
}

/// `ln(1 + x)` through the identity `ln(1 + x) = x ₂F₁(1, 1; 2; −x)`.
///
/// For `x > 1` the argument is inverted first: `ln(1 + x) = ln x + ln(1 + 1/x)`.
pub fn gauss_2f1_log1p(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain(format!(
            "gauss_2f1_log1p requires x >= 0, got {x}"
        )));
    }
    if x <= 1.0 {
        Ok(x * hyp2f1(1.0, 1.0, 2.0, -x)?)
    } else {
        let inv = 1.0 / x;
        Ok(x.ln() + inv * hyp2f1(1.0, 1.0, 2.0, -inv)?)
    }
}
