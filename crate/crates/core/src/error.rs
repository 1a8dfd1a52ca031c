use core::fmt;

/// Errors raised by kernel construction and the chaos calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Entry buffer length does not match `d^(m+n)`.
    ShapeLength { expected: usize, found: usize },
    /// Two tensors that must share a shape do not.
    ShapeMismatch {
        left: (usize, usize, usize),
        right: (usize, usize, usize),
    },
    /// Operands live over different Hilbert-space dimensions.
    DimensionMismatch { left: usize, right: usize },
    /// A kernel entry is NaN or infinite.
    NonFinite { index: usize },
    /// Contraction counts exceed the available slots.
    ContractionArity {
        i: usize,
        j: usize,
        max_i: usize,
        max_j: usize,
    },
    /// An argument lies outside the domain of the operation.
    Domain(&'static str),
    /// Polynomial expansion would exceed the configured total degree.
    DegreeLimit { degree: usize, limit: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeLength { expected, found } => {
                write!(f, "expected {expected} kernel entries, found {found}")
            }
            Error::ShapeMismatch { left, right } => write!(
                f,
                "shape mismatch: (d={}, m={}, n={}) vs (d={}, m={}, n={})",
                left.0, left.1, left.2, right.0, right.1, right.2
            ),
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::NonFinite { index } => write!(f, "non-finite kernel entry at {index}"),
            Error::ContractionArity { i, j, max_i, max_j } => write!(
                f,
                "contraction ({i},{j}) out of range, at most ({max_i},{max_j}) allowed"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::DegreeLimit { degree, limit } => {
                write!(f, "polynomial degree {degree} exceeds limit {limit}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
