//! Batch verification driver: turns a [`RunConfig`] into a [`VerificationReport`]
//! for each of the four suites of `ecsusy-core`.

pub mod args;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;

pub use config::{GridConfig, RunConfig, Tolerances};
pub use error::CliError;
pub use report::{CheckRecord, Comparison, Summary, VerificationReport};
pub use suites::{cmd_shifted_ho, cmd_verify_core, cmd_verify_deform, cmd_verify_tables, Command};
