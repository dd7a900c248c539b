//! Command-line front end for THz fiber-extender capacity studies.
//!
//! The binary `thzlink` wraps these modules; they are public so that the
//! integration and acceptance tests can drive the same code paths.

pub mod absorption;
pub mod app;
pub mod compare;
pub mod config;
pub mod error;
pub mod report;
pub mod sweep;

pub use error::{exit, CliError, CliResult};
