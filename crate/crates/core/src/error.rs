use alloc::string::String;
use core::fmt;

/// Errors surfaced by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A coefficient was NaN or infinite.
    NonFinite { index: usize },
    /// Exponent of the ambient norm must satisfy `p >= 1`.
    InvalidExponent { p: f64 },
    /// Two vectors from different ambient spaces were combined.
    ExponentMismatch { left: f64, right: f64 },
    /// A point lies outside the operator's domain.
    OutsideDomain { norm: f64, bound: f64 },
    /// Scalar argument outside `[-1, 1]`.
    ScalarOutsideInterval { t: f64 },
    /// A weight vector does not describe a valid multi-index.
    InvalidMultiIndex(String),
    /// The supplied reference point is not an approximate fixed point.
    NotApproxFixedPoint { residual: f64, tol: f64 },
    /// No admissible index in a selection window; the reference point is
    /// not fixed or the averaged inequality fails on this orbit.
    ExtractionFailed {
        window_start: usize,
        window_end: usize,
    },
    /// The trace carries no reference point / distance sequence.
    MissingReference,
    /// Candidate set for center minimization was empty.
    EmptyCandidateSet,
    /// The canonical duality map is single-valued only for `p > 1`.
    DualityUndefined { p: f64 },
    /// Generic precondition failure with a short description.
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { index } => {
                write!(f, "non-finite coefficient at index {index}")
            }
            Error::InvalidExponent { p } => {
                write!(f, "invalid norm exponent p = {p} (need p >= 1)")
            }
            Error::ExponentMismatch { left, right } => {
                write!(f, "ambient-space mismatch: p = {left} vs p = {right}")
            }
            Error::OutsideDomain { norm, bound } => {
                write!(f, "point outside domain: norm {norm} exceeds bound {bound}")
            }
            Error::ScalarOutsideInterval { t } => {
                write!(f, "scalar argument {t} outside [-1, 1]")
            }
            Error::InvalidMultiIndex(msg) => write!(f, "invalid multi-index: {msg}"),
            Error::NotApproxFixedPoint { residual, tol } => write!(
                f,
                "reference point is not an approximate fixed point: residual {residual} > {tol}"
            ),
            Error::ExtractionFailed {
                window_start,
                window_end,
            } => write!(
                f,
                "no admissible index in window [{window_start}, {window_end}]: \
                 the reference is not a fixed point or the averaged inequality fails here"
            ),
            Error::MissingReference => {
                write!(f, "trace has no reference point / distance sequence")
            }
            Error::EmptyCandidateSet => write!(f, "candidate set is empty"),
            Error::DualityUndefined { p } => write!(
                f,
                "canonical duality map undefined for p = {p} (single-valued only for p > 1)"
            ),
            Error::Precondition(msg) => write!(f, "{msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
