use thiserror::Error;

use crate::cm::CmError;
use crate::group::GroupError;
use crate::pohlmann::EnumError;
use crate::witness::WitnessError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid instance: {0}")]
    Group(#[from] GroupError),
    #[error("invalid instance: {0}")]
    Cm(#[from] CmError),
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalogEntry(String),
    #[error("{0}: group has no central involution")]
    NoCentralInvolution(String),
    #[error("bad catalog parameters: {0}")]
    CatalogParams(String),
    #[error("{0}")]
    Enumeration(#[from] EnumError),
    #[error("{0}")]
    Witness(#[from] WitnessError),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Enumeration(EnumError::CapExceeded { .. })
            | Error::Witness(WitnessError::Enum(EnumError::CapExceeded { .. }))
            | Error::Cm(CmError::CapExceeded { .. }) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
