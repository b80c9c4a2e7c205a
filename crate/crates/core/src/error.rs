use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite complex value ({re}, {im})")]
    NonFinite { re: f64, im: f64 },

    #[error("invalid tolerance {0}: must lie in (0, 1e-3)")]
    InvalidTolerance(f64),

    #[error("vector length {0} is not a power of two")]
    BadLength(usize),

    #[error("state has zero norm")]
    ZeroState,

    #[error("vector norm {0} is not within 1e-6 of 1")]
    NotNormalized(f64),

    #[error("{qubits} qubits exceeds the dense-vector cap of {cap}")]
    VectorCap { qubits: usize, cap: usize },

    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),

    #[error("basis string {0:?} is not a {1}-bit bitstring")]
    BadBasis(String, usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
