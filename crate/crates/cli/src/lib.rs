//! Command-line front end for `poincare-core`: scenario configs,
//! trajectory CSV files and verification reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod trajectory_csv;

pub use commands::run;
pub use config::{Scenario, ScenarioConfig};
pub use error::CliError;
pub use report::VerificationReport;
