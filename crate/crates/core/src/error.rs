use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("vertex index {index} out of range for order {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("gain has modulus {modulus}, expected 1")]
    NonUnitGain { modulus: f64 },
    #[error("vertex sequence is not a cycle of the graph")]
    NotACycle,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graphs do not share the same underlying edge set")]
    SupportMismatch,
    #[error("graphs have different orders ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("search budget of {budget} steps exhausted")]
    Timeout { budget: u64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("order {n} exceeds the enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("matrix is not a weighing matrix")]
    NotAWeighingMatrix,
    #[error("matrix is not Hermitian with zero diagonal")]
    NotHermitian,
    #[error("input does not square to a multiple of the identity")]
    NotSquareRootOfKI,
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("order {0} is invalid for this construction")]
    InvalidOrder(usize),
    #[error("{0} is not a prime congruent to 3 mod 4")]
    NotGaussianPrime(u64),
    #[error("graph does not have exactly two distinct eigenvalues")]
    NotTwoEigenvalue,
    #[error("least eigenvalue is not negative")]
    NonNegativeThetaMin,
    #[error("inner product ({u}, {v}) has modulus {modulus}, near neither 0 nor alpha")]
    AngleViolation { u: usize, v: usize, modulus: f64 },
    #[error("column {column} has norm {norm}, expected 1")]
    NormViolation { column: usize, norm: f64 },
    #[error("invalid partition: {0}")]
    PartitionInvalid(String),
    #[error("part {part} is not tight")]
    PartNotTight { part: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Failure while reading one of the text formats; `line` is 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    DuplicateEdge { u: usize, v: usize },
    SelfLoop { vertex: usize },
    IndexOutOfRange { index: usize, n: usize },
    NonUnitGain { modulus: f64 },
    NormViolation { column: usize, norm: f64 },
}

impl ParseError {
    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError { line, kind: ParseErrorKind::Syntax(msg.into()) }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::DuplicateEdge { u, v } => write!(f, "duplicate edge ({u}, {v})"),
            ParseErrorKind::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            ParseErrorKind::IndexOutOfRange { index, n } => {
                write!(f, "index {index} out of range for {n}")
            }
            ParseErrorKind::NonUnitGain { modulus } => {
                write!(f, "gain modulus {modulus} is not 1")
            }
            ParseErrorKind::NormViolation { column, norm } => {
                write!(f, "vector {column} has norm {norm}")
            }
        }
    }
}

impl std::error::Error for ParseError {}
