use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("signature has no locus components")]
    EmptySignature,

    #[error("operation requires finite multiplicities, got an infinite component")]
    InfiniteMultiplicity,

    #[error("stratum of {size} components is deeper than the ambient dimension {dim}")]
    SubsetTooLarge { size: usize, dim: u32 },

    #[error("component index {index} out of range for {len} components")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("component index {0} listed twice")]
    DuplicateIndex(usize),

    #[error("dimension 1 is served from fixture data; the abelian presentation needs n >= 2")]
    DimOne,

    #[error("invalid locus component: {0}")]
    InvalidComponent(String),

    #[error("operation requires a linear locus (all degrees 1)")]
    NonlinearLocus,

    #[error("not uniformizable: prime power {prime}^{exponent} divides only {count} of the f-values (needs {needed})")]
    NotUniformizable { prime: u64, exponent: u32, count: usize, needed: usize },

    #[error("quotient group is infinite (free rank {free_rank})")]
    InfiniteQuotient { free_rank: usize },

    #[error("relation vector has length {got}, expected {expected}")]
    RelationLength { got: usize, expected: usize },

    #[error("internal inconsistency: {0} is not an integer")]
    NonIntegerResult(String),

    #[error("signature is not Calabi-Yau (defect {0})")]
    NotCalabiYau(String),

    #[error("invalid sub-orbifold: {0}")]
    InvalidSubOrbifold(String),

    #[error("covering conservation violated: |source| = {source_order}, |lift| * c^n = {lifted}")]
    ConservationViolation { source_order: String, lifted: String },

    #[error("golden file: {0}")]
    Golden(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Golden(e.to_string())
    }
}
