use spectral_pencil::Error as CoreError;
use thiserror::Error;

/// Exit code for a run whose checks all held.
pub const EXIT_PASS: i32 = 0;
/// Exit code for a failed mathematical check.
pub const EXIT_MATH: i32 = 1;
/// Exit code for bad input or usage.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}")]
    Input(CoreError),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("{0}")]
    Math(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::GenerationFailed { .. } | CliError::Math(_) => EXIT_MATH,
        }
    }
}

impl From<CoreError> for CliError {
    /// Malformed or inconsistent input is a usage error; anything raised
    /// while computing on valid input is a mathematical failure.
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Schema { .. }
            | CoreError::Json { .. }
            | CoreError::InvalidArgument(_)
            | CoreError::InvalidTolerance(_)
            | CoreError::DimensionMismatch(_)
            | CoreError::NotSquare { .. } => CliError::Input(e),
            _ => CliError::Math(e),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
