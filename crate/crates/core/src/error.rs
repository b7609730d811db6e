use core::fmt;

/// Errors raised by the exact routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NotSquare { rows: usize, cols: usize },
    OddDimension(usize),
    NotAntisymmetric,
    /// A size-limited computation was asked for more than it allows.
    SizeAboveCap { size: usize, cap: usize },
    /// A parameter fell outside the operation's domain.
    OutOfDomain(&'static str),
    NotIncreasing,
    /// Two routes that must agree did not, or an integral quantity came out
    /// fractional.
    Inconsistent(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, expected a square matrix")
            }
            Error::OddDimension(n) => write!(f, "Pfaffian needs an even dimension, got {n}"),
            Error::NotAntisymmetric => f.write_str("matrix is not antisymmetric"),
            Error::SizeAboveCap { size, cap } => {
                write!(f, "size {size} exceeds the configured cap of {cap}")
            }
            Error::OutOfDomain(what) => write!(f, "argument out of domain: {what}"),
            Error::NotIncreasing => f.write_str("index sequence must be strictly increasing"),
            Error::Inconsistent(what) => write!(f, "internal inconsistency: {what}"),
        }
    }
}

impl core::error::Error for Error {}
