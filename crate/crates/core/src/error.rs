//! Crate-wide error type.
//!
//! Two broad families matter to callers: configuration problems (bad file,
//! failed field validation) and domain problems (preconditions violated,
//! searches exhausted). The CLI maps the former to exit code 2 and the
//! latter to exit code 3.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Configuration file could not be read or parsed.
    #[error("config error: {0}")]
    Config(String),

    /// A configuration or domain-type invariant failed; names the field.
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    /// An operation precondition was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// The minimum-attenuation search hit its ceiling without success.
    #[error("AR attenuation search exhausted: target unreachable within {ceiling_db} dB")]
    SearchExhausted { ceiling_db: f64 },

    /// A pipeline error, annotated with the sweep point that produced it.
    #[error("at sweep point {x_value}: {source}")]
    SweepPoint {
        x_value: f64,
        #[source]
        source: Box<Error>,
    },

    /// File I/O failure, annotated with the path.
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Error::Config(message.into())
    }

    /// Attach the sweep point at which a pipeline error occurred.
    pub fn at_sweep_point(self, x_value: f64) -> Self {
        Error::SweepPoint {
            x_value,
            source: Box::new(self),
        }
    }

    /// True for errors the CLI reports as configuration failures (exit 2).
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Validation { .. })
    }
}
