//! Error type shared by every module in the crate.

use thiserror::Error;

/// All the ways a simulation can fail.
///
/// `Protocol` and `Synchrony` indicate a broken transmission contract or an
/// implementation bug; they are never a property of the input data.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or value failed validation.
    #[error("validation: {0}")]
    Validation(String),

    /// A trace or manifest file has malformed content.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// The sensor/station message contract was broken: a missing bootstrap
    /// transmission or an out-of-order step index.
    #[error("protocol violation: {0}")]
    Protocol(String),

    /// Sensor and base station recorded different values for the same step.
    #[error(
        "synchrony violation at step {k}: sensor recorded {sensor}, station recorded {station}"
    )]
    Synchrony { k: u64, sensor: f64, station: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
