use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] voter_qsd::Error),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("consistency check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// `1` for bad input, `2` for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => 2,
            CliError::CheckFailed(_) => 2,
            _ => 1,
        }
    }
}
