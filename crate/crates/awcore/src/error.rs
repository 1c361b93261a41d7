use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported regime: {0}")]
    Unsupported(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("convention error: {0}")]
    Convention(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
