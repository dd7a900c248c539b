//! Channel model: deterministic path gain, molecular absorption,
//! pointing-error misalignment, α-μ multipath fading and their product.

pub mod absorption;
pub mod composite;
pub mod fading;
pub mod link;
pub mod misalignment;

pub use absorption::{AbsorptionProvider, AbsorptionTable, TABLE_BAND_HZ, TABLE_HEADER};
pub use composite::{composite_pdf, composite_pdf_numeric};
pub use fading::{alpha_mu_cdf, alpha_mu_pdf, sample_alpha_mu, AlphaMuParams, AlphaMuSampler};
pub use link::{
    absorption_gain, db_to_linear, deterministic_gain, free_space_gain, Environment, LinkParams,
    SPEED_OF_LIGHT,
};
pub use misalignment::{
    derive_misalignment, hp_cdf, hp_of_r, hp_pdf, rayleigh_from_uniform, sample_radial,
    MisalignmentGeometry,
};
