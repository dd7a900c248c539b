//! Special functions: complex log-gamma, incomplete gamma, Gauss
//! hypergeometric, and the Fox H / Meijer G functions.

pub mod foxh;
pub mod hyp2f1;
pub mod incgamma;
pub mod loggamma;

pub use foxh::{
    fox_h, fox_h_on_contour, fox_h_scaled, meijer_g, plan_contour, plan_contour_at, ContourPlan,
    FoxHSpec, Scaled,
};
pub use hyp2f1::{gauss_2f1_log1p, hyp2f1};
pub use incgamma::{
    ln_upper_incomplete_gamma, lower_incomplete_gamma, regularized_lower_gamma,
    upper_incomplete_gamma,
};
pub use loggamma::{gamma, ln_gamma, log_gamma_complex};
