use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` appears more than once")]
    DuplicateVariable(String),
    #[error("variable set must not be empty")]
    EmptyVariableSet,
    #[error("variable sets overlap on `{0}`")]
    OverlappingSets(String),
    #[error("invalid probability table: {0}")]
    InvalidTable(String),
    #[error("information quantity {0} is negative beyond rounding tolerance")]
    NegativeInformation(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },
    #[error("alphabet mismatch: expected size {expected}, found {found}")]
    AlphabetMismatch { expected: usize, found: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(
        "capacity iteration did not converge after {iterations} iterations (last estimate {last})"
    )]
    NonConvergence { last: f64, iterations: usize },
    #[error("codebook has no entry for encoder input {0}")]
    CodebookMiss(usize),
    #[error("map is not injective: inputs {first} and {second} both map to {image}")]
    NonInjective {
        first: usize,
        second: usize,
        image: usize,
    },
    #[error("probability mass outside the required support: {0}")]
    OffSupport(String),
    #[error("support is empty after applying constraints")]
    EmptySupport,
    #[error("state space too large: {cells} cells (limit {limit})")]
    TooLarge { cells: usize, limit: usize },
    #[error("unknown case `{0}` (expected I, II, III or IV)")]
    UnknownCase(String),
    #[error("codebook file line {line}: {reason}")]
    CodebookParse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
