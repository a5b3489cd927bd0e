use thiserror::Error;

/// Errors surfaced by the library's fallible operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("edge-count cap exceeded: |alpha| = {got} > cap {cap}")]
    CapExceeded { got: usize, cap: usize },

    #[error("basis-size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("q1 = 1 not supported here; use the planted-clique w recursion")]
    CliqueMode,

    #[error("moment matrix numerically indefinite: min eigenvalue {0}")]
    IndefiniteMatrix(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
