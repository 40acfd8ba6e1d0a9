//! Error type shared by every module in the crate.

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A raw coordinate vector does not match the rank of the group spec.
    #[error("dimension mismatch: spec has rank {expected}, got {got} coordinates")]
    DimensionMismatch { expected: usize, got: usize },

    /// Two operands live over different group specs.
    #[error("group spec mismatch between operands")]
    SpecMismatch,

    /// A group spec failed validation (empty factor list, modulus < 2, ...).
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    /// An operation that needs at least one element was given an empty set.
    #[error("{0} requires a nonempty set")]
    EmptyInput(&'static str),

    /// An input exceeds a hard size cap.
    #[error("{what}: size {got} exceeds cap {cap}")]
    Resource {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    /// Fourier operations need a fully finite spec; integer factors must be
    /// embedded into a torus first.
    #[error("operation requires a fully finite group spec; embed integer factors first")]
    RequiresEmbedding,

    /// An element falls outside the wraparound-free window of a torus embedding.
    #[error("coordinates {0:?} fall outside the embedding guarantee window")]
    OutsideEmbeddingWindow(Vec<i64>),

    /// Coordinate arithmetic left the representable integer range.
    #[error("integer overflow in coordinate arithmetic")]
    CoordinateOverflow,

    /// A numeric or mode parameter is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A documented precondition does not hold for the given input.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
