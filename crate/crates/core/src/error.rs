use thiserror::Error;

/// Errors produced by the plumbing, root and obstruction computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid plumbing graph: {0}")]
    InvalidGraph(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is singular (det = {det})")]
    Singular { det: String },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("invalid Seifert data: {0}")]
    InvalidSeifert(String),

    #[error("invalid continued fraction input: {0}")]
    InvalidFraction(String),

    #[error("graph is not star-shaped about vertex {0}")]
    NotStarShaped(i64),

    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,

    #[error("graph is not almost-rational at vertex {0}")]
    NotAlmostRational(i64),

    #[error("tau sequence not certified stable within cutoff {cutoff}")]
    Unstabilized { cutoff: usize },

    #[error("iteration cap {cap} exceeded in {context}")]
    IterationCap { cap: usize, context: &'static str },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("lattice box has {points} points, above the cap of {cap}")]
    BoxTooLarge { points: u128, cap: u128 },

    #[error("invalid surgery presentation: {0}")]
    InvalidPresentation(String),

    #[error("no Lagrangian filling with tb = {0}: tb must be odd and at least -1")]
    InvalidThurstonBennequin(i64),

    #[error("no basis element at grading {0}")]
    NoBasisAtGrading(String),

    #[error("obstruction model is inconsistent: {0}")]
    Inconsistent(String),

    #[error("unsupported format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
