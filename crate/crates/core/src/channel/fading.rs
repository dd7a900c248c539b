//! α-μ (generalized gamma) multipath fading.
//!
//! ```text
//! f(x) = α μ^μ x^{αμ−1} exp(−μ x^α / ĥ^α) / (ĥ^{αμ} Γ(μ)),   x > 0
//! ```
//!
//! Rayleigh is `α = 2, μ = 1`; Nakagami-m is `α = 2, μ = m`; Weibull is `μ = 1`.
//! If `G ~ Gamma(μ, 1)` then `ĥ (G/μ)^{1/α}` has this law.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::specfun::{ln_gamma, regularized_lower_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaMuParams {
    pub alpha: f64,
    pub mu: f64,
    /// α-root mean of the envelope, `E[X^α]^{1/α}`.
    pub hhat: f64,
}

impl AlphaMuParams {
    pub fn new(alpha: f64, mu: f64, hhat: f64) -> Result<Self> {
        let p = Self { alpha, mu, hhat };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("fading.alpha", self.alpha)?;
        require_positive("fading.mu", self.mu)?;
        require_positive("fading.hhat", self.hhat)
    }

    /// Order `(αμ − ξ)/α` of the incomplete gamma in the composite density.
    pub fn composite_order(&self, xi: f64) -> f64 {
        (self.alpha * self.mu - xi) / self.alpha
    }

    /// True when misalignment shape `xi` exceeds `αμ`, making the composite order negative.
    pub fn negative_order(&self, xi: f64) -> bool {
        self.composite_order(xi) < 0.0
    }
}

pub fn alpha_mu_pdf(x: f64, fading: &AlphaMuParams) -> f64 {
    if x <= 0.0 || !x.is_finite() {
        return 0.0;
    }
    let AlphaMuParams { alpha, mu, hhat } = *fading;
    let t = x / hhat;
    let log = alpha.ln() + mu * mu.ln() + (alpha * mu - 1.0) * t.ln()
        - mu * t.powf(alpha)
        - hhat.ln()
        - ln_gamma(mu).expect("mu validated positive");
    log.exp()
}

/// `P(μ, μ (x/ĥ)^α)`.
pub fn alpha_mu_cdf(x: f64, fading: &AlphaMuParams) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    let z = fading.mu * (x / fading.hhat).powf(fading.alpha);
    regularized_lower_gamma(fading.mu, z).expect("arguments validated")
}

/// Reusable α-μ sampler.
#[derive(Debug, Clone, Copy)]
pub struct AlphaMuSampler {
    gamma: Gamma<f64>,
    inv_alpha: f64,
    mu: f64,
    hhat: f64,
}

impl AlphaMuSampler {
    pub fn new(fading: &AlphaMuParams) -> Result<Self> {
        fading.validate()?;
        let gamma =
            Gamma::new(fading.mu, 1.0).map_err(|e| Error::invalid("fading.mu", e.to_string()))?;
        Ok(Self {
            gamma,
            inv_alpha: 1.0 / fading.alpha,
            mu: fading.mu,
            hhat: fading.hhat,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.hhat * (self.gamma.sample(rng) / self.mu).powf(self.inv_alpha)
    }
}

/// Draw one α-μ envelope. Building an [`AlphaMuSampler`] once is cheaper for many draws.
pub fn sample_alpha_mu<R: Rng + ?Sized>(fading: &AlphaMuParams, rng: &mut R) -> Result<f64> {
    Ok(AlphaMuSampler::new(fading)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_to_infinity, Tolerance};
    use crate::rng::stream;

    fn p(alpha: f64, mu: f64, hhat: f64) -> AlphaMuParams {
        AlphaMuParams::new(alpha, mu, hhat).unwrap()
    }

    #[test]
    fn rayleigh_reduction() {
        let f = p(2.0, 1.0, 1.0);
        for x in [0.01f64, 0.3, 1.0, 2.5] {
            let want = 2.0 * x * (-x * x).exp();
            assert!((alpha_mu_pdf(x, &f) - want).abs() < 1e-14 * want.max(1.0));
        }
    }

    #[test]
    fn weibull_reduction() {
        let (k, lambda) = (1.7, 1.3);
        // Weibull(k, λ) equals α-μ with α = k, μ = 1, ĥ = λ.
        let f = p(k, 1.0, lambda);
        for x in [0.05f64, 0.5, 1.2, 3.0] {
            let want = k / lambda * (x / lambda).powf(k - 1.0) * (-(x / lambda).powf(k)).exp();
            assert!((alpha_mu_pdf(x, &f) - want).abs() < 1e-14);
            let cdf = 1.0 - (-(x / lambda).powf(k)).exp();
            assert!((alpha_mu_cdf(x, &f) - cdf).abs() < 1e-14);
        }
    }

    #[test]
    fn density_normalizes() {
        for (a, m) in [(2.0, 4.0), (1.5, 2.0), (3.0, 0.8)] {
            let f = p(a, m, 1.0);
            let split = 1.0;
            let tol = Tolerance::new(1e-13, 1e-13);
            let head = crate::quad::integrate(|x| alpha_mu_pdf(x, &f), 0.0, split, tol).unwrap();
            let tail = integrate_to_infinity(|x| alpha_mu_pdf(x, &f), split, tol).unwrap();
            assert!((head.value + tail.value - 1.0).abs() < 1e-10, "({a},{m})");
        }
    }

    #[test]
    fn composite_order_flag() {
        let f = p(2.0, 4.0, 1.0);
        assert_eq!(f.composite_order(4.0), 2.0);
        assert!(!f.negative_order(8.0));
        assert!(f.negative_order(8.5));
    }

    #[test]
    fn rejects_bad_parameters() {
        for (a, m, h) in [(0.0, 1.0, 1.0), (2.0, -1.0, 1.0), (2.0, 1.0, f64::NAN)] {
            assert!(matches!(
                AlphaMuParams::new(a, m, h),
                Err(Error::InvalidParameter { .. })
            ));
        }
    }

    #[test]
    fn alpha_moment_and_ecdf() {
        let f = p(2.5, 0.7, 1.4);
        let sampler = AlphaMuSampler::new(&f).unwrap();
        let mut rng = stream(3, 1);
        let n = 200_000;
        let mut xs: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        let m: Vec<f64> = xs.iter().map(|x| x.powf(f.alpha)).collect();
        let mean = m.iter().sum::<f64>() / n as f64;
        let var = m.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - f.hhat.powf(f.alpha)).abs() < 3.0 * se);

        xs.sort_by(f64::total_cmp);
        let worst = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let c = alpha_mu_cdf(x, &f);
                (c - i as f64 / n as f64)
                    .abs()
                    .max((c - (i + 1) as f64 / n as f64).abs())
            })
            .fold(0.0, f64::max);
        assert!(worst < 4.0 / (n as f64).sqrt(), "{worst}");
    }
}
