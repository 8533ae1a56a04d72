use thiserror::Error;

/// Failure of a subcommand, carrying the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("physicality error: {0}")]
    Physicality(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Physicality(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<rbvar_core::Error> for CliError {
    fn from(e: rbvar_core::Error) -> Self {
        use rbvar_core::Error as E;
        let msg = e.to_string();
        match e {
            E::Physicality(_) | E::DimensionMismatch { .. } => CliError::Physicality(msg),
            E::InvalidParameter(_) | E::UnsupportedMode(_) => CliError::Config(msg),
            E::NoLimit { .. } | E::UnstableRatio { .. } | E::Numerical(_) | E::Internal(_) => {
                CliError::Numerical(msg)
            }
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("json: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
