//! Batch driver: run configurations, subcommands and report files.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use error::CliError;
