use alloc::vec::Vec;
use core::fmt;

/// Errors raised by frame, graph and equivalence operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A value was NaN or infinite.
    NonFinite,
    /// Structural problem with an input (empty frame, ragged rows, bad parameter).
    InvalidInput(&'static str),
    InvalidTolerance,
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    SizeMismatch {
        left: usize,
        right: usize,
    },
    IndexOutOfRange {
        index: usize,
        n: usize,
    },
    NotHermitian {
        row: usize,
        col: usize,
    },
    NotPsd {
        min_eigenvalue: f64,
    },
    NotUnitPhase {
        index: usize,
    },
    /// A vector has zero norm but nonzero overlap with another vector.
    ZeroVector {
        index: usize,
    },
    NotInSpan,
    DivisionByZero {
        cycle: Vec<usize>,
    },
    MissingCycleProduct {
        cycle: Vec<usize>,
    },
    InconsistentModulus {
        row: usize,
        col: usize,
        expected: f64,
        found: f64,
    },
    NotRealEquiangular,
    SearchBudgetExceeded {
        nodes: u64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite => write!(f, "non-finite value in input"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InvalidTolerance => write!(f, "tolerances must be finite and strictly positive"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::SizeMismatch { left, right } => {
                write!(f, "size mismatch: {left} vectors vs {right} vectors")
            }
            Error::IndexOutOfRange { index, n } => {
                write!(f, "index {index} out of range for {n} vectors")
            }
            Error::NotHermitian { row, col } => {
                write!(f, "matrix is not Hermitian at entry ({row}, {col})")
            }
            Error::NotPsd { min_eigenvalue } => {
                write!(
                    f,
                    "matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})"
                )
            }
            Error::NotUnitPhase { index } => write!(f, "phase {index} does not have unit modulus"),
            Error::ZeroVector { index } => {
                write!(f, "vector {index} has zero norm but nonzero inner products")
            }
            Error::NotInSpan => write!(f, "target cycle is not in the span of the basis cycles"),
            Error::DivisionByZero { cycle } => {
                write!(f, "vanishing product along cycle {cycle:?}")
            }
            Error::MissingCycleProduct { cycle } => {
                write!(f, "missing cycle product for cycle {cycle:?}")
            }
            Error::InconsistentModulus {
                row,
                col,
                expected,
                found,
            } => write!(
                f,
                "solved entry ({row}, {col}) has modulus {found}, expected {expected}"
            ),
            Error::NotRealEquiangular => {
                write!(f, "Gramian is not that of real equiangular unit vectors")
            }
            Error::SearchBudgetExceeded { nodes } => {
                write!(f, "search budget exhausted after {nodes} nodes")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
