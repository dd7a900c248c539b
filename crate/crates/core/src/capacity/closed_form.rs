use std::f64::consts::LN_2;

use crate::error::Result;
use crate::specfun::{fox_h_scaled, FoxHSpec};

use super::constants::CapacityConstants;
use super::result::{CapacityResult, Method};

/// The `H^{4,1}_{3,4}` kernel of the closed form.
///
/// Upper rows `(−ξ/2, α/2), (1 − ξ/2, α/2), (1, 1)`; lower rows
/// `(0, 1), (Φ, 1), (−ξ/2, α/2), (−ξ/2, α/2)`.
pub fn capacity_spec(c: &CapacityConstants) -> Result<FoxHSpec> {
    let half_xi = 0.5 * c.xi();
    let half_alpha = 0.5 * c.alpha;
    FoxHSpec::new(
        4,
        1,
        vec![
            (-half_xi, half_alpha),
            (1.0 - half_xi, half_alpha),
            (1.0, 1.0),
        ],
        vec![
            (0.0, 1.0),
            (c.phi, 1.0),
            (-half_xi, half_alpha),
            (-half_xi, half_alpha),
        ],
    )
}

/// `C = Θ Δ^{−ξ/2} / (2 ln 2) · H^{4,1}_{3,4}[X Δ^{−α/2}]`, assembled in log space.
pub fn capacity_closed_form(c: &CapacityConstants) -> Result<CapacityResult> {
    c.validate()?;
    let context = |e: crate::Error| e.with_context(format!("{c:?}"));
    let spec = capacity_spec(c).map_err(context)?;
    let ln_delta = c.delta.ln();
    let ln_z = c.x.ln() - 0.5 * c.alpha * ln_delta;
    let h = fox_h_scaled(&spec, ln_z.exp()).map_err(context)?;
    let value =
        h.mantissa * (h.log_scale + c.ln_theta - 0.5 * c.xi() * ln_delta).exp() / (2.0 * LN_2);
    Ok(CapacityResult::deterministic(
        value.max(0.0),
        Method::ClosedForm,
    ))
}
