//! Command-line harness around the `asympolar` library: JSON matrix input,
//! CSV convergence reports and the acceptance self-test.

pub mod commands;
pub mod config;
pub mod error;
pub mod selftest;

pub use error::CliError;
