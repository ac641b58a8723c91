use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field elements belong to different contexts (n = {left} vs n = {right})")]
    CtxMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("n = {n} is not admissible for a self-dual Gauss-period basis")]
    NotAdmissible { n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("n = {n} exceeds the limit {limit} for {what}")]
    TooLarge { what: &'static str, n: usize, limit: usize },

    #[error("random bit source exhausted after {consumed} bits")]
    EntropyExhausted { consumed: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("non-Clifford gate {0} cannot be simulated by the tableau")]
    NonClifford(String),

    #[error("ancilla wire {wire} is not restored")]
    AncillaNotRestored { wire: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
