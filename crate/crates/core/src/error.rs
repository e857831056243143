use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("index {index} is more than {reach} nodes outside an axis of length {n}")]
    GhostOutOfRange { index: isize, n: usize, reach: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("non-finite value {value} at node {node}")]
    NonFinite { node: usize, value: f64 },
    #[error("non-finite value after step {step}")]
    Diverged { step: usize },
    #[error("CFL violation: ratio {ratio:.6} exceeds bound {bound}")]
    Cfl { ratio: f64, bound: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown test id `{0}`")]
    UnknownTest(String),
    #[error("no exact solution available for {0}")]
    NoOracle(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
