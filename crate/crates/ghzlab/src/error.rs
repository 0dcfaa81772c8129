use ghzlab_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl AppError {
    /// Process exit code: 2 for bad input, 3 for anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Param(_) => 2,
            _ => 3,
        }
    }
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DimensionOutOfRange(_)
            | CoreError::InvalidPartyCount(..)
            | CoreError::SizeOverflow { .. }
            | CoreError::IndexOutOfRange { .. }
            | CoreError::MalformedSettings(_)
            | CoreError::LengthMismatch { .. } => AppError::Param(e.to_string()),
            _ => AppError::Internal(e.to_string()),
        }
    }
}
