//! Ergodic capacity of THz wireless links under deterministic path loss,
//! molecular absorption, pointing-error misalignment fading and α-μ multipath
//! fading.
//!
//! Capacity is available three ways that check one another:
//! a Fox H-function closed form ([`capacity::capacity_closed_form`]), direct
//! quadrature of the capacity integral ([`capacity::capacity_quadrature`]) and
//! Monte-Carlo simulation ([`capacity::capacity_monte_carlo`]).

pub mod capacity;
pub mod channel;
pub mod error;
pub mod quad;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
