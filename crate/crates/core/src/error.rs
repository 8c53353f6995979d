use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index set must be nonempty")]
    EmptyIndexSet,
    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("support sets differ in size: |I| = {rows}, |J| = {cols}")]
    SizeMismatch { rows: usize, cols: usize },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("bad arguments: {0}")]
    BadArguments(String),
    #[error("sample budget {budget} is smaller than the number of entries {entries}")]
    BudgetTooSmall { budget: u64, entries: u64 },
    #[error("sample budget exhausted after {rounds} doubling rounds")]
    BudgetExhausted { rounds: u32 },
    #[error("no positive gap found after {samples} samples")]
    NoPositiveGap { samples: u64 },
    #[error("smallest singular value not certified positive after {samples} samples")]
    NoPositiveSigma { samples: u64 },
    #[error("dimension {dim} exceeds the enumeration limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("every support forces a zero gap")]
    Infeasible,
    #[error("unknown instance kind `{0}`")]
    UnknownKind(String),
    #[error("bad dimensions for {kind}: {detail}")]
    BadDims { kind: String, detail: String },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("entry ({row}, {col}) = {value} lies outside [-1, 1]")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },
    #[error("config error: {0}")]
    Config(String),
    #[error("io error on {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("horizon {horizon}, replication {replication}: {source}")]
    Replication {
        horizon: u64,
        replication: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Errors raised by the sampling algorithms themselves, as opposed to bad input.
    pub fn is_algorithmic(&self) -> bool {
        match self {
            Error::BudgetExhausted { .. }
            | Error::NoPositiveGap { .. }
            | Error::NoPositiveSigma { .. }
            | Error::SingularMatrix
            | Error::Infeasible => true,
            Error::Replication { source, .. } => source.is_algorithmic(),
            _ => false,
        }
    }
}
