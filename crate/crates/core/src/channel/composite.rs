//! Density of the product `h_fp = h_f · h_p` of α-μ fading and misalignment.
//!
//! ```text
//! f(x) = ξ A_o^{−ξ} μ^{ξ/α} ĥ^{−ξ} x^{ξ−1} Γ(Φ, μ x^α / (ĥ A_o)^α) / Γ(μ),   Φ = (αμ − ξ)/α
//! ```
//!
//! [`composite_pdf_numeric`] evaluates the defining product-density integral
//! `∫₀^{A_o} f_{h_f}(x/y) f_{h_p}(y) dy / y` directly and is kept as an
//! independent check on the closed form.

use crate::error::Result;
use crate::quad::{integrate, integrate_to_infinity, Tolerance};
use crate::specfun::{ln_gamma, ln_upper_incomplete_gamma};

use super::fading::AlphaMuParams;
use super::misalignment::MisalignmentGeometry;

const NUMERIC_TOL: Tolerance = Tolerance::new(1e-15, 1e-11);

/// Closed-form density of `h_f · h_p`.
pub fn composite_pdf(x: f64, geom: &MisalignmentGeometry, fading: &AlphaMuParams) -> f64 {
    if x <= 0.0 || !x.is_finite() {
        return 0.0;
    }
    let AlphaMuParams { alpha, mu, hhat } = *fading;
    let (xi, a0) = (geom.xi(), geom.a0());
    let phi = (alpha * mu - xi) / alpha;
    let z = mu * (x / (hhat * a0)).powf(alpha);
    let ln_tail = match ln_upper_incomplete_gamma(phi, z) {
        Ok(v) => v,
        Err(_) => return 0.0,
    };
    let log = xi.ln() - xi * a0.ln() + xi / alpha * mu.ln() - xi * hhat.ln()
        + (xi - 1.0) * x.ln()
        + ln_tail
        - ln_gamma(mu).expect("mu validated positive");
    log.exp()
}

/// Density of `h_f · h_p` by adaptive quadrature of the product-density integral.
///
/// With `y = A_o e^{−v}` the integral becomes `∫₀^∞ f_{h_f}(x e^v / A_o) ξ A_o^{−1} e^{−(ξ−1)v} dv`,
/// which is split at the maximum of the integrand.
pub fn composite_pdf_numeric(
    x: f64,
    geom: &MisalignmentGeometry,
    fading: &AlphaMuParams,
) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Ok(0.0);
    }
    let AlphaMuParams { alpha, mu, hhat } = *fading;
    let (xi, a0) = (geom.xi(), geom.a0());
    let ln_norm = alpha.ln() + mu * mu.ln() - hhat.ln() - ln_gamma(mu)? + xi.ln() - a0.ln();
    let ln_t0 = (x / (a0 * hhat)).ln();
    let integrand = |v: f64| {
        let ln_t = ln_t0 + v;
        let log = ln_norm + (alpha * mu - 1.0) * ln_t - mu * (alpha * ln_t).exp() - (xi - 1.0) * v;
        log.exp()
    };

    let phi = (alpha * mu - xi) / alpha;
    let peak = if phi > 0.0 {
        ((phi / mu).ln() / alpha - ln_t0).max(0.0)
    } else {
        0.0
    };
    // the h_p weight alone decays on the scale 1/(ξ−1) in v
    let width = 1.0 / (xi - 1.0).abs().max(1.0);
    let mut breaks = vec![
        0.0,
        peak,
        peak + width,
        peak + 8.0 * width,
        peak + 64.0 * width,
    ];
    breaks.dedup();
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        total += integrate(integrand, pair[0], pair[1], NUMERIC_TOL)?.value;
    }
    total +=
        integrate_to_infinity(integrand, *breaks.last().expect("non-empty"), NUMERIC_TOL)?.value;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fading::alpha_mu_pdf;

    fn case(alpha: f64, mu: f64, hhat: f64, xi: f64) -> (MisalignmentGeometry, AlphaMuParams) {
        (
            MisalignmentGeometry::with_shape(0.05, 0.12, xi).unwrap(),
            AlphaMuParams::new(alpha, mu, hhat).unwrap(),
        )
    }

    #[test]
    fn scale_property() {
        let (g, f) = case(2.0, 4.0, 1.0, 4.0);
        let c = 1.7;
        let scaled = AlphaMuParams { hhat: c, ..f };
        for x in [0.05, 0.3, 0.9] {
            let lhs = composite_pdf(x, &g, &scaled);
            let rhs = composite_pdf(x / c, &g, &f) / c;
            assert!((lhs - rhs).abs() < 1e-12 * rhs);
        }
    }

    #[test]
    fn tight_jitter_collapses_to_scaled_fading() {
        let g = derive_tight();
        let f = AlphaMuParams::new(2.0, 2.0, 1.0).unwrap();
        for x in [0.2, 0.6, 1.0] {
            let want = alpha_mu_pdf(x / g.a0(), &f) / g.a0();
            let got = composite_pdf_numeric(x, &g, &f).unwrap();
            assert!((got - want).abs() < 1e-3 * want, "{x}: {got} vs {want}");
            assert!((composite_pdf(x, &g, &f) - want).abs() < 1e-3 * want);
        }
    }

    fn derive_tight() -> MisalignmentGeometry {
        crate::channel::misalignment::derive_misalignment(0.05, 0.12, 1e-5).unwrap()
    }

    #[test]
    fn zero_outside_support() {
        let (g, f) = case(2.0, 4.0, 1.0, 4.0);
        assert_eq!(composite_pdf(0.0, &g, &f), 0.0);
        assert_eq!(composite_pdf(-1.0, &g, &f), 0.0);
        assert_eq!(composite_pdf_numeric(-1.0, &g, &f).unwrap(), 0.0);
    }
}
