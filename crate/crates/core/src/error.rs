use alloc::string::String;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent shape / index data.
    #[error("shape error: {0}")]
    Shape(String),
    /// Textual shape could not be parsed.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    /// An operation was called outside of its domain.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The shape is outside the range an operation supports.
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    /// Operands live in ambient spaces of different size.
    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    /// Configured size caps were exceeded.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// Random sampling kept hitting degenerate points.
    #[error("singular sample: {0}")]
    SingularSample(String),
    /// Two independent computations disagree, or an internal identity failed.
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    /// An exact integer quantity does not fit the output type.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = core::result::Result<T, Error>;
