use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps these onto its exit codes: degenerate-input variants to 2,
/// `NotAMorphism` and `InvalidCertificate` to 3, `ResourceCeiling` to 4, and
/// everything else to 1.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degenerate point: all coordinates are zero")]
    DegeneratePoint,

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("all coefficients are zero")]
    ZeroMap,

    #[error("polynomial is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("not a morphism: {0}")]
    NotAMorphism(String),

    #[error("point lies in the base locus of the map")]
    BaseLocus,

    #[error("inconsistent interpolation data: {0}")]
    InconsistentValues(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("resource ceiling exceeded: {0}")]
    ResourceCeiling(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
