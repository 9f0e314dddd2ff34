use thiserror::Error;

/// Errors raised by the library. Indices in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("entry ({row}, {col}) = {value} is not in {domain}")]
    Domain {
        row: usize,
        col: usize,
        value: f64,
        domain: &'static str,
    },

    #[error("factor component {index} = {value} is not in {domain}")]
    FactorDomain {
        index: usize,
        value: f64,
        domain: &'static str,
    },

    #[error("{what}: dimension {size} exceeds the enumeration cap {cap}; use the heuristic solvers instead")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("gadget with p={p} needs a {rows}x{cols} matrix ({entries} entries), above the cap of {cap} entries")]
    GadgetTooLarge {
        p: usize,
        rows: usize,
        cols: usize,
        entries: usize,
        cap: usize,
    },

    #[error("{0}")]
    ZeroFactor(&'static str),

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("nothing to do: {0}")]
    NoOp(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
}

/// The distinct ways a text input can be malformed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header: {0}")]
    Header(String),
    #[error("row {row} has {found} of {expected} expected entries")]
    RowLength {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("non-numeric token '{0}'")]
    Token(String),
    #[error("non-finite value '{0}'")]
    NonFinite(String),
    #[error("{0}")]
    Record(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dims(rows: usize, cols: usize) -> String {
    format!("{rows}x{cols}")
}
