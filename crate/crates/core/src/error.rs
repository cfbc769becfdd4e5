use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("negative eigenvalue {value:.3e} below tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("invalid qubit partition: {0}")]
    InvalidPartition(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("parameter vector has length {actual}, ansatz expects {expected}")]
    ParameterLength { expected: usize, actual: usize },

    #[error("preserved system has {available} qubits, joint support needs {required}")]
    PreservedTooSmall { required: usize, available: usize },

    #[error("non-finite cost value {value} at epoch {epoch}")]
    NonFinite { epoch: usize, value: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed trace: {0}")]
    Trace(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
