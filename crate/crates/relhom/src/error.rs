use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("scalar parse error: {0:?} is not of the form -?[0-9]+(/[1-9][0-9]*)?")]
    ScalarParse(String),

    #[error("division by zero in field arithmetic")]
    DivisionByZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("quiver error: {0}")]
    Quiver(String),

    #[error("relation error: {0}")]
    Relation(String),

    #[error("path enumeration exceeded bound: {0}")]
    PathBound(String),

    #[error("algebra is not visibly finite-dimensional: {0}")]
    NotFiniteDimensional(String),

    #[error("module error: {0}")]
    Module(String),

    #[error("algebra mismatch: operands live over different algebra presentations")]
    AlgebraMismatch,

    #[error("map is not a module homomorphism: intertwining fails at arrow {arrow}")]
    NotIntertwining { arrow: String },

    #[error("complex error: {0}")]
    Complex(String),

    #[error("chain map does not commute with differentials at degree {0}")]
    NotChainMap(i64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("admissibility failure: right approximation of {what} is not epic at stage {stage}")]
    Admissibility { what: String, stage: usize },

    #[error("cdim of a term exceeds bound {bound}")]
    CdimExceeded { bound: usize },

    #[error("perp membership fails: Ext^{degree}(-, generator {generator}) has dimension {dim}")]
    PerpFailure {
        degree: usize,
        generator: usize,
        dim: usize,
    },

    #[error("Gorenstein certificate is inconclusive at bound {bound}")]
    InconclusiveCertificate { bound: usize },

    #[error("Gorenstein certificate refuted: {0}")]
    RefutedCertificate(String),

    #[error("certificate verification failed: {0}")]
    CertificateInvalid(String),

    #[error("conflation rejected: {0}")]
    ConflationRejected(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
