use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite argument in {0}")]
    NonFinite(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole solver failed: {0}")]
    Solver(String),
    #[error("degenerate resonant state: vanishing normalization at kappa = {0}")]
    DegenerateState(num_complex::Complex64),
    #[error("invalid initial state: {0}")]
    InvalidSpec(String),
    #[error("representation invalid: {0}")]
    Representation(String),
    #[error("data integrity: {0}")]
    DataIntegrity(String),
    #[error("slope fit: {0}")]
    Fit(String),
    #[error("oracle accuracy: {0}")]
    OracleAccuracy(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
