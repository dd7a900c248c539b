use std::f64::consts::LN_2;

use crate::channel::{composite_pdf, AlphaMuParams, MisalignmentGeometry};
use crate::error::Result;
use crate::quad::{integrate, integrate_to_infinity, Tolerance};
use crate::specfun::ln_upper_incomplete_gamma;

use super::constants::CapacityConstants;
use super::result::{CapacityResult, Method};

pub const QUADRATURE_TOL: Tolerance = Tolerance::new(1e-10, 1e-8);

/// Beyond `X x^α = TAIL_SPLIT` the integrand is handled by the semi-infinite rule.
const TAIL_SPLIT: f64 = 50.0;

/// Break points in `(0, x*)`: the SNR knee `Δ^{−1/2}` and its decades, then `x*` itself.
fn breakpoints(delta: f64, x_star: f64) -> Vec<f64> {
    let knee = delta.powf(-0.5);
    let mut points: Vec<f64> = [0.01, 0.1, 1.0, 10.0]
        .iter()
        .map(|k| k * knee)
        .chain([0.25 * x_star, 0.5 * x_star])
        .filter(|&p| p > 0.0 && p < x_star)
        .collect();
    points.push(x_star);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

fn integrate_split<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Result<f64> {
    let mut total = 0.0;
    let mut left = 0.0;
    for &right in points {
        total += integrate(&f, left, right, tol)?.value;
        left = right;
    }
    total += integrate_to_infinity(&f, left, tol)?.value;
    Ok(total)
}

/// `(Θ / ln 2) ∫₀^∞ x^Λ ln(1 + Δx²) Γ(Φ, X x^α) dx` with the default tolerance.
pub fn capacity_quadrature(c: &CapacityConstants) -> Result<CapacityResult> {
    capacity_quadrature_with(c, QUADRATURE_TOL)
}

/// [`capacity_quadrature`] with a caller-chosen tolerance.
///
/// The integrand is evaluated in log space, so `Θ` beyond the `f64` range is harmless.
pub fn capacity_quadrature_with(c: &CapacityConstants, tol: Tolerance) -> Result<CapacityResult> {
    c.validate()?;
    let CapacityConstants {
        alpha,
        delta,
        lambda,
        phi,
        x,
        ln_theta,
        ..
    } = *c;
    let integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let ln_tail = match ln_upper_incomplete_gamma(phi, x * t.powf(alpha)) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let log = ln_theta + lambda * t.ln() + (delta * t * t).ln_1p().ln() + ln_tail;
        log.exp() / LN_2
    };
    let x_star = (TAIL_SPLIT / x).powf(1.0 / alpha);
    let value = integrate_split(integrand, &breakpoints(delta, x_star), tol)
        .map_err(|e| e.with_context(format!("capacity quadrature, {c:?}")))?;
    Ok(CapacityResult::deterministic(
        value.max(0.0),
        Method::Quadrature,
    ))
}

/// `∫₀^∞ log₂(1 + Δx²) f_{h_fp}(x) dx` against the composite density.
pub fn capacity_from_density(
    delta: f64,
    geom: &MisalignmentGeometry,
    fading: &AlphaMuParams,
    tol: Tolerance,
) -> Result<CapacityResult> {
    let integrand = |t: f64| (delta * t * t).ln_1p() / LN_2 * composite_pdf(t, geom, fading);
    let scale = fading.hhat * geom.a0();
    let x_star = scale * (TAIL_SPLIT / fading.mu).powf(1.0 / fading.alpha);
    let value = integrate_split(integrand, &breakpoints(delta, x_star), tol)?;
    Ok(CapacityResult::deterministic(value, Method::Quadrature))
}
