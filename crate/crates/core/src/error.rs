use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its declared invariant. `field` names it.
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    /// An argument lies outside the domain of a closed-form expression.
    #[error("{quantity} = {value} is outside [{lo}, {hi}]")]
    Domain {
        quantity: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// Malformed tabular or structured input.
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by user input rather than the environment.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}

/// Rejects non-finite or non-positive values.
pub(crate) fn require_positive(field: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::validation(field, format!("{value} is not finite")));
    }
    if value <= 0.0 {
        return Err(Error::validation(field, format!("{value} must be > 0")));
    }
    Ok(())
}

pub(crate) fn require_non_negative(field: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::validation(field, format!("{value} is not finite")));
    }
    if value < 0.0 {
        return Err(Error::validation(field, format!("{value} must be >= 0")));
    }
    Ok(())
}
