use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("origin is not an interior point of the polytope")]
    OriginNotInterior,
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: i128 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("pivot exponent {exponent} outside {{-1, 0, 1}}")]
    PivotExponentOutOfRange { exponent: i64 },
    #[error("invalid mutation data: {0}")]
    InvalidMutationData(String),
    #[error("polynomial does not match the decomposition x*g1*g2 + g3 + g4/x")]
    InvalidDecomposition,
    #[error("torus-fixed point is singular (|det| = {det})")]
    SingularFixedPoint { det: i64 },
    #[error("blow-up leaves the family of reflexive polygons")]
    LeavesCanonicalFamily,
    #[error("vertices ({0:?}, {1:?}) are not adjacent")]
    NotAdjacent(Vec<i64>, Vec<i64>),
    #[error("schema error in row {row:?}, field `{field}`: {message}")]
    Schema {
        row: Option<u32>,
        field: String,
        message: String,
    },
    #[error("unknown catalog row {0}")]
    UnknownRow(u32),
    #[error("inconsistent catalog: {0}")]
    InconsistentCatalog(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn schema(row: Option<u32>, field: &str, message: impl Into<String>) -> Self {
        Error::Schema {
            row,
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
