use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid functions are not conformable")]
    NotConformable,

    #[error("Hermite flavors differ; convert explicitly before combining")]
    FlavorMismatch,

    #[error("blow-up guard tripped at step {step}: sup norm {sup:e} exceeds {limit:e}")]
    BlowUp { step: usize, sup: f64, limit: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
