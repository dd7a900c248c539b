use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

use super::absorption::AbsorptionProvider;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Deterministic link description in SI / linear units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkParams {
    /// Carrier frequency, Hz.
    pub frequency: f64,
    /// TX–RX distance, m.
    pub distance: f64,
    /// Transmit antenna gain, linear.
    pub gain_tx: f64,
    /// Receive antenna gain, linear.
    pub gain_rx: f64,
    /// Transmit power over noise power, linear.
    pub snr0: f64,
}

impl LinkParams {
    pub fn new(
        frequency: f64,
        distance: f64,
        gain_tx: f64,
        gain_rx: f64,
        snr0: f64,
    ) -> Result<Self> {
        let link = Self {
            frequency,
            distance,
            gain_tx,
            gain_rx,
            snr0,
        };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("link.frequency", self.frequency)?;
        require_positive("link.distance", self.distance)?;
        require_positive("link.gain_tx", self.gain_tx)?;
        require_positive("link.gain_rx", self.gain_rx)?;
        require_positive("link.snr0", self.snr0)
    }
}

/// Atmospheric state used by the absorption provider.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// K.
    pub temperature: f64,
    /// Pa.
    pub pressure: f64,
    /// Relative humidity as a fraction in `[0, 1]`.
    pub relative_humidity: f64,
}

impl Default for Environment {
    /// 296 K, 101 325 Pa, 50 % relative humidity.
    fn default() -> Self {
        Self {
            temperature: 296.0,
            pressure: 101_325.0,
            relative_humidity: 0.5,
        }
    }
}

impl Environment {
    pub fn new(temperature: f64, pressure: f64, relative_humidity: f64) -> Result<Self> {
        let env = Self {
            temperature,
            pressure,
            relative_humidity,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("env.temperature", self.temperature)?;
        require_positive("env.pressure", self.pressure)?;
        if !(0.0..=1.0).contains(&self.relative_humidity) {
            return Err(Error::invalid(
                "env.relative_humidity",
                format!("must lie in [0, 1], got {}", self.relative_humidity),
            ));
        }
        Ok(())
    }
}

/// Free-space amplitude gain `c √(G_t G_r) / (4π f d)`.
pub fn free_space_gain(link: &LinkParams) -> f64 {
    SPEED_OF_LIGHT * (link.gain_tx * link.gain_rx).sqrt()
        / (4.0 * PI * link.frequency * link.distance)
}

/// Molecular absorption amplitude gain `exp(−κ d / 2)`.
pub fn absorption_gain(kappa: f64, distance: f64) -> Result<f64> {
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(Error::invalid(
            "absorption.kappa",
            format!("must be >= 0, got {kappa}"),
        ));
    }
    require_positive("link.distance", distance)?;
    Ok((-0.5 * kappa * distance).exp())
}

/// Deterministic path gain `h_l = h_fl · h_al`.
pub fn deterministic_gain(
    link: &LinkParams,
    env: &Environment,
    provider: &AbsorptionProvider,
) -> Result<f64> {
    let kappa = provider.kappa(link.frequency, env)?;
    Ok(free_space_gain(link) * absorption_gain(kappa, link.distance)?)
}

/// Convert decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
