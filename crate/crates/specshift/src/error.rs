use std::fmt;

/// Failures of the runner, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Missing or unreadable input file (exit 2).
    Input(String),
    /// Malformed or invalid configuration (exit 2).
    Config(String),
    /// Numerical failure inside a suite (exit 1).
    Compute(specshift_core::Error),
    /// Writing an output artifact failed (exit 1).
    Output(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Config(_) => 2,
            CliError::Compute(_) | CliError::Output(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "input error: {s}"),
            CliError::Config(s) => write!(f, "configuration error: {s}"),
            CliError::Compute(e) => write!(f, "computation failed: {e}"),
            CliError::Output(s) => write!(f, "output error: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<specshift_core::Error> for CliError {
    fn from(e: specshift_core::Error) -> Self {
        CliError::Compute(e)
    }
}
