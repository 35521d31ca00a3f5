use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Failures of the core engine. All are input or precondition errors;
/// mathematical check failures are reported as data, not errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    Parse(String),
    /// Tangent dimension outside the supported range.
    Dimension { n: usize, reason: &'static str },
    /// Tensors or matrices that must agree in shape do not.
    Shape { expected: String, found: String },
    IndexOutOfRange { index: usize, n: usize },
    NotSymmetric { i: usize, j: usize },
    /// A tensor lacks a symmetry the operation depends on (1-based tuple).
    Symmetry { kind: &'static str, at: Vec<usize> },
    DegeneratePlane,
    InvalidModel(String),
    /// A theorem-branch constraint cannot be met by the given inputs.
    Constraint(String),
    UnknownCase(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::Parse(s) => write!(f, "cannot parse {s:?} as a rational"),
            Error::Dimension { n, reason } => write!(f, "dimension n={n} not supported: {reason}"),
            Error::Shape { expected, found } => {
                write!(f, "shape mismatch: expected {expected}, found {found}")
            }
            Error::IndexOutOfRange { index, n } => {
                write!(f, "index {index} out of range 1..={n}")
            }
            Error::NotSymmetric { i, j } => {
                write!(f, "matrix not symmetric at ({}, {})", i + 1, j + 1)
            }
            Error::Symmetry { kind, at } => write!(f, "tensor is not {kind} at {at:?}"),
            Error::DegeneratePlane => write!(f, "vectors do not span a 2-plane"),
            Error::InvalidModel(s) => write!(f, "invalid model: {s}"),
            Error::Constraint(s) => write!(f, "branch constraint violated: {s}"),
            Error::UnknownCase(s) => write!(f, "unknown case id {s:?}"),
        }
    }
}

impl core::error::Error for Error {}
