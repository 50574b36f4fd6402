use alloc::string::String;
use core::fmt;

use crate::exact::QVec;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the core.
///
/// Errors fall into two classes: malformed input (shapes, zero vectors,
/// non-integral data where a lattice vector is required) and violated
/// preconditions (a cone that is not strongly convex, an ε outside the
/// combinatorial-stability window, an oracle that does not cover a needed
/// direction). [`Error::is_precondition`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DimensionMismatch { expected: usize, found: usize },
    ZeroVector,
    NotIntegral,
    InvalidInput(String),
    /// Every coefficient of the deformation vanishes.
    OriginPoint,
    /// The Futaki oracle has no value for this direction.
    OracleGap(QVec),
    Precondition(String),
}

impl Error {
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::OriginPoint | Error::OracleGap(_) | Error::Precondition(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ZeroVector => f.write_str("zero vector where a nonzero vector is required"),
            Error::NotIntegral => f.write_str("vector has non-integer entries"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::OriginPoint => f.write_str("point is the origin"),
            Error::OracleGap(v) => write!(f, "futaki oracle has no value for direction {v}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
