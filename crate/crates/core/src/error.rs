use thiserror::Error;

/// Errors produced by tensor construction, enumeration, and polytope machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("entry count {got} does not match product of dims {expected}")]
    EntryCountMismatch { got: usize, expected: usize },
    #[error("zero extent in dims")]
    ZeroExtent,
    #[error("order {got} not supported here (need {need})")]
    BadOrder { got: usize, need: &'static str },
    #[error("tensor is not cubical")]
    NotCubical,
    #[error("axis {axis} out of range for order {order}")]
    AxisOutOfRange { axis: usize, order: usize },
    #[error("index {value} out of range [1, {extent}] on axis {axis}")]
    IndexOutOfRange {
        axis: usize,
        value: usize,
        extent: usize,
    },
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),
    #[error("sequence length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("level k={k} out of range for order {order}")]
    LevelOutOfRange { k: usize, order: usize },
    #[error("tensor has an entry outside {{0, 1}}")]
    NotZeroOne,
    #[error("negative entry at {0:?}")]
    NegativeEntry(Vec<usize>),
    #[error("input is not a permutation matrix")]
    NotPermutationMatrix,
    #[error("unknown builtin tensor {0:?}")]
    UnknownBuiltin(String),
    #[error("tensor does not satisfy the polytope constraints")]
    NotInPolytope,
    #[error("dimension n={n} beyond configured ceiling {max} for {what}")]
    DimensionGuard { n: usize, max: usize, what: &'static str },
    #[error("resource guard exceeded: {visited} nodes visited, budget {budget}")]
    ResourceGuard { visited: u64, budget: u64 },
    #[error("invalid character table: {0}")]
    InvalidCharacter(String),
    #[error("unknown weight function {0:?}")]
    UnknownWeight(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("polytope is unbounded or its constraint cone is not pointed")]
    UnboundedPolytope,
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Exit code the CLI maps this error to: 2 for resource-guard stops, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceGuard { .. } | Error::DimensionGuard { .. } => 2,
            _ => 1,
        }
    }
}
