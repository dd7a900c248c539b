//! Ergodic capacity `E[log₂(1 + Δ h_fp²)]` in bits/s/Hz, where `Δ = h_l² P/N_o`
//! and `h_fp = h_f · h_p`.
//!
//! Three independent evaluations are provided:
//!
//! * [`capacity_closed_form`]: a single Fox H-function,
//!   `C = Θ Δ^{−ξ/2} / (2 ln 2) · H^{4,1}_{3,4}[X Δ^{−α/2}]`.
//! * [`capacity_quadrature`]: `C = (Θ / ln 2) ∫₀^∞ x^Λ ln(1 + Δx²) Γ(Φ, X x^α) dx`.
//! * [`capacity_monte_carlo`]: sample averages over the channel model.

mod closed_form;
mod constants;
mod monte_carlo;
mod quadrature;
mod result;

pub use closed_form::{capacity_closed_form, capacity_spec};
pub use constants::{build_constants, snr_instant, CapacityConstants};
pub use monte_carlo::{
    capacity_monte_carlo, monte_carlo_from_delta, MC_CHUNK, MC_MIN_RELIABLE_SAMPLES,
};
pub use quadrature::{
    capacity_from_density, capacity_quadrature, capacity_quadrature_with, QUADRATURE_TOL,
};
pub use result::{CapacityResult, Method};
