use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] halfelastica::Error),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 0 success, 2 usage or domain error, 3 closure not found, 4 invariant
    /// mismatch, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use halfelastica::Error as E;
        match self {
            CliError::Usage(_) | CliError::Json(_) => 2,
            CliError::Core(E::Domain(_) | E::Admissibility { .. } | E::InvalidSpec { .. }) => 2,
            CliError::Core(E::NotClosed(_)) | CliError::Mismatch(_) => 4,
            CliError::NotFound(_) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
