use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("non-unitary matrix: residual {residual:.3e} exceeds {tol:.1e}")]
    NonUnitary { residual: f64, tol: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("gate {index}: {message}")]
    InvalidGate { index: usize, message: String },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("synthesis failure: reconstruction residual {residual:.3e}")]
    SynthesisFailure { residual: f64 },
    #[error("sampler for class {tag} exhausted {attempts} attempts")]
    SamplerExhausted { tag: &'static str, attempts: usize },
    #[error("gate budget {0} out of range 0..=7")]
    BudgetOutOfRange(usize),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
