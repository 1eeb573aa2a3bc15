use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point domain {found} does not match kernel domain {expected}")]
    DomainMismatch { expected: String, found: String },

    #[error("point outside the kernel domain: {0}")]
    OutOfDomain(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("kernel evaluation failed at index pair ({i}, {j}): {source}")]
    GramEntry {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("negative feature distance {value:e}: the function is not positive semidefinite")]
    NotAKernelEvidence { value: f64 },

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("points {i} and {j} are not distinct")]
    DuplicatePoints { i: usize, j: usize },

    #[error("no separating functional after {tries} tries (best gap {best_gap:e})")]
    SeparationFailed { tries: usize, best_gap: f64 },

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("alphabet mismatch: {left} vs {right} generators")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("generator index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("word length {0} exceeds the supported maximum")]
    WordTooLong(usize),

    #[error("grid of {0} points exceeds the configured cap")]
    GridTooLarge(usize),

    #[error("least-squares solve failed: {0}")]
    SolveFailure(String),

    #[error("kernel {0} is not real-valued")]
    NonRealKernel(String),

    #[error("wrong model form: {0}")]
    WrongForm(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DomainMismatch { .. } => "DomainMismatch",
            Error::OutOfDomain(_) => "OutOfDomain",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::GramEntry { source, .. } => source.kind(),
            Error::NotAKernelEvidence { .. } => "NotAKernelEvidence",
            Error::EigenFailure => "EigenFailure",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::DuplicatePoints { .. } => "DuplicatePoints",
            Error::SeparationFailed { .. } => "SeparationFailed",
            Error::Divergent(_) => "Divergent",
            Error::AlphabetMismatch { .. } => "AlphabetMismatch",
            Error::Parse(_) => "ParseError",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::WordTooLong(_) => "WordTooLong",
            Error::GridTooLarge(_) => "GridTooLarge",
            Error::SolveFailure(_) => "SolveFailure",
            Error::NonRealKernel(_) => "NonRealKernel",
            Error::WrongForm(_) => "WrongForm",
        }
    }
}
