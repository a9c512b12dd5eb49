use std::fmt;

use quadlat::Error;

/// Failure of a job, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Exit 2.
    Malformed(String),
    /// Exit 3.
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Malformed(_) => 2,
            Self::Unsupported(_) => 3,
        }
    }

    /// Attribute a library error to the input field `field`.
    pub fn from_core(field: &str, e: Error) -> Self {
        match e {
            Error::Unsupported(m) => Self::Unsupported(format!("{field}: {m}")),
            Error::Invalid(m) => Self::Malformed(format!("{field}: {m}")),
            Error::GapTooSmall(_) => Self::Unsupported(format!("{field}: {e}")),
            _ => Self::Malformed(format!("{field}: {e}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Malformed(m) => write!(f, "malformed input: {m}"),
            Self::Unsupported(m) => write!(f, "unsupported request: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub trait Context<T> {
    fn context(self, field: &str) -> Result<T, CliError>;
}

impl<T> Context<T> for quadlat::Result<T> {
    fn context(self, field: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError::from_core(field, e))
    }
}
