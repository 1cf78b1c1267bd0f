use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the radiation, counting and fitting routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the function.
    #[error("{name} must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("invalid constants: {0}")]
    Constants(String),

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The requested enumeration would exceed the configured guard.
    #[error("enumeration of W({n}, {p}) refused: more than {limit} compositions")]
    EnumerationTooLarge { n: u64, p: u64, limit: u64 },

    /// Integrating the Rayleigh-Jeans law over all frequencies diverges.
    #[error("Rayleigh-Jeans energy density diverges without a frequency cutoff (ultraviolet catastrophe)")]
    UltravioletCatastrophe,

    /// A command-line value failed validation.
    #[error("{flag}: {message}")]
    InvalidArgument { flag: String, message: String },

    #[error("ill-posed fit: {0}")]
    IllPosed(String),

    #[error("fit did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks `value > 0` (and finite), naming the argument on failure.
pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            requirement: "positive and finite",
            value,
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            requirement: "non-negative and finite",
            value,
        })
    }
}
