use alexandrov_core::GeomError;
use thiserror::Error;

/// Failures that stop a run before a verdict; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("below entropy threshold: c = {c} must exceed {threshold}")]
    BelowThreshold { c: f64, threshold: f64 },

    #[error(transparent)]
    Geom(#[from] GeomError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
