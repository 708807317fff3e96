use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<hadamard_proj::metric::GeometryError> for CliError {
    fn from(e: hadamard_proj::metric::GeometryError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<hadamard_proj::convex::ProjectionError> for CliError {
    fn from(e: hadamard_proj::convex::ProjectionError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_FAILED,
        }
    }
}
