//! Experiment driver behind the `qsceom` binary.

pub mod cmd;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod run;

pub use config::Config;
pub use error::{CliError, Result};
