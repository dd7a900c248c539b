use serde::Serialize;

use crate::channel::{
    deterministic_gain, AbsorptionProvider, AlphaMuParams, Environment, LinkParams,
    MisalignmentGeometry,
};
use crate::error::{require_positive, Error, Result};
use crate::specfun::ln_gamma;

/// Constants of the capacity expressions.
///
/// | field   | value                                        |
/// |---------|----------------------------------------------|
/// | `delta` | `h_l² P/N_o`                                 |
/// | `lambda`| `ξ − 1`                                      |
/// | `phi`   | `(αμ − ξ)/α`                                 |
/// | `x`     | `μ / (ĥ A_o)^α`                              |
/// | `theta` | `ξ A_o^{−ξ} μ^{ξ/α} ĥ^{−ξ} / Γ(μ)`           |
///
/// `ln_theta` is authoritative: `theta` overflows for strongly peaked misalignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityConstants {
    pub alpha: f64,
    pub delta: f64,
    pub lambda: f64,
    pub phi: f64,
    pub x: f64,
    pub theta: f64,
    pub ln_theta: f64,
}

impl CapacityConstants {
    /// Constants for deterministic SNR gain `delta`, misalignment `geom` and fading `fading`.
    pub fn from_parts(
        delta: f64,
        geom: &MisalignmentGeometry,
        fading: &AlphaMuParams,
    ) -> Result<Self> {
        require_positive("delta", delta)?;
        fading.validate()?;
        let AlphaMuParams { alpha, mu, hhat } = *fading;
        let (xi, a0) = (geom.xi(), geom.a0());
        let ln_theta =
            xi.ln() - xi * a0.ln() + xi / alpha * mu.ln() - xi * hhat.ln() - ln_gamma(mu)?;
        Ok(Self {
            alpha,
            delta,
            lambda: xi - 1.0,
            phi: (alpha * mu - xi) / alpha,
            x: mu * (-alpha * (hhat * a0).ln()).exp(),
            theta: ln_theta.exp(),
            ln_theta,
        })
    }

    /// Same constants with a different deterministic SNR gain.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        require_positive("delta", delta)?;
        Ok(Self { delta, ..*self })
    }

    /// Misalignment shape `ξ = Λ + 1`.
    pub fn xi(&self) -> f64 {
        self.lambda + 1.0
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("constants.alpha", self.alpha)?;
        require_positive("constants.delta", self.delta)?;
        require_positive("constants.x", self.x)?;
        require_positive("constants.xi", self.xi())?;
        if !self.phi.is_finite() || !self.ln_theta.is_finite() {
            return Err(Error::invalid(
                "constants",
                "phi and ln_theta must be finite",
            ));
        }
        Ok(())
    }
}

/// Build the constants from the full link description.
pub fn build_constants(
    link: &LinkParams,
    env: &Environment,
    provider: &AbsorptionProvider,
    geom: &MisalignmentGeometry,
    fading: &AlphaMuParams,
) -> Result<CapacityConstants> {
    link.validate()?;
    let h_l = deterministic_gain(link, env, provider)?;
    CapacityConstants::from_parts(snr_instant(h_l, link.snr0), geom, fading)
}

/// Instantaneous SNR `|h|² P/N_o`.
pub fn snr_instant(h: f64, snr0: f64) -> f64 {
    h * h * snr0
}
