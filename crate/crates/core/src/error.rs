use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("pmf not normalized: entries sum to {sum}")]
    NotNormalized { sum: f64 },
    #[error("pmf entry at ({x}, {y}) is {value}; probabilities must be non-negative and finite")]
    InvalidProbability { x: usize, y: usize, value: f64 },
    #[error("non-rectangular table: {0}")]
    NonRectangular(String),
    #[error("function table entry at ({x}, {y}) is {value}, outside z alphabet of size {z_size}")]
    TableOutOfRange { x: usize, y: usize, value: usize, z_size: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("sequence length {found} does not match block length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("symbol {symbol} at position {position} is outside alphabet of size {size}")]
    SymbolOutOfRange { position: usize, symbol: usize, size: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("budget exceeded: {required} required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("bin depth {k} exceeds the cap of {cap} bits")]
    RateCap { k: u64, cap: u32 },
    #[error("decode succeeded; there is no error event to classify")]
    NotAnError,
    #[error("cell {cell} (n={n}, r1={r1}, r2={r2}): {source}")]
    Cell {
        cell: usize,
        n: usize,
        r1: f64,
        r2: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True when the error stems from a budget or cap being exceeded rather
    /// than from malformed input.
    pub fn is_budget(&self) -> bool {
        match self {
            Error::BudgetExceeded { .. } | Error::RateCap { .. } => true,
            Error::Cell { source, .. } => source.is_budget(),
            _ => false,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
