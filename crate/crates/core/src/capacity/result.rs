use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::ClosedForm, Method::Quadrature, Method::MonteCarlo];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Capacity in bits/s/Hz with provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub value: f64,
    pub method: Method,
    /// Standard error of a Monte-Carlo estimate; 0 for deterministic methods.
    pub std_error: f64,
    /// Monte-Carlo sample count; 0 for deterministic methods.
    pub sample_count: u64,
    /// Set when the sample count is too small for the standard error to be trusted.
    pub low_sample_warning: bool,
}

impl CapacityResult {
    pub(crate) fn deterministic(value: f64, method: Method) -> Self {
        Self {
            value,
            method,
            std_error: 0.0,
            sample_count: 0,
            low_sample_warning: false,
        }
    }
}
