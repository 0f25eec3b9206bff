use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidArgument(String),
    /// The operation is defined only for a narrower class of spin species.
    UnsupportedSpecies(String),
    /// Input matrix is not symmetric within tolerance.
    NotSymmetric {
        max_asymmetry: f64,
    },
    /// Jacobi sweeps hit the cap before the off-diagonal norm converged.
    NoConvergence {
        sweeps: usize,
        off_diagonal: f64,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Requested qubit frequency lies below the gap.
    OutOfBand {
        frequency_ghz: f64,
        gap_ghz: f64,
    },
    /// Design matrix columns are (numerically) collinear.
    DegenerateBasis {
        condition_number: f64,
    },
    InsufficientData {
        rows: usize,
        required: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::UnsupportedSpecies(msg) => write!(f, "unsupported species: {msg}"),
            Error::NotSymmetric { max_asymmetry } => {
                write!(f, "matrix is not symmetric (max |H - H^T| = {max_asymmetry:e})")
            }
            Error::NoConvergence {
                sweeps,
                off_diagonal,
            } => write!(
                f,
                "eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})"
            ),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::OutOfBand {
                frequency_ghz,
                gap_ghz,
            } => write!(
                f,
                "frequency {frequency_ghz} GHz is below the qubit gap {gap_ghz} GHz"
            ),
            Error::DegenerateBasis { condition_number } => write!(
                f,
                "degenerate basis: design matrix condition number {condition_number:e}"
            ),
            Error::InsufficientData { rows, required } => {
                write!(f, "insufficient data: {rows} rows, at least {required} required")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
