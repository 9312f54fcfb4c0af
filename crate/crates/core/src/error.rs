//! Crate-wide error type.
//!
//! One enum covers the whole lab: callers dispatch on the variant to
//! distinguish invalid input from numerical failure (the CLI maps the
//! two groups to different exit codes).

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its stated precondition.
    InvalidParameter { what: String },
    /// A spec failed structural validation; `path` points at the field.
    Validation { path: String, reason: String },
    /// Dimension mismatch between operator and subspace or blocks.
    Shape { context: String },
    /// The requested operation is not defined for this operator variant.
    Unsupported { what: String },
    /// Sampling too coarse for the symbol bandwidth.
    Aliasing { node_count: usize, required: usize },
    /// Fourier window index beyond the Nyquist range of the sampling.
    WindowOutOfRange { index: i64, half_range: i64 },
    /// Point is on (or within `epsilon` of) the symbol curve.
    OnCurve { distance: f64, epsilon: f64 },
    /// Resolvent requested at a (numerically) spectral point.
    SingularResolvent { condition: f64 },
    /// An eigenvalue sits in the guard annulus around the contour.
    ContourCollision { eigenvalue_gap: f64, radius: f64 },
    /// A computed quantity missed its accuracy contract.
    Precision { what: String, value: f64, bound: f64 },
    /// Iterative eigensolver exceeded its iteration cap.
    NoConvergence { what: String },
    /// Subspace is not invariant within tolerance.
    NotInvariant { defect: f64, tolerance: f64 },
    /// Basis matrix is numerically rank deficient.
    RankDeficientBasis { sigma_ratio: f64 },
    /// Grid exceeds the hard cell-count cap.
    GridTooLarge { cells: usize, limit: usize },
    /// A verification cannot be decided from the available exact data.
    NotVerifiable { reason: String },
    /// A theorem hypothesis fails on this input (distinct from a
    /// theorem violation).
    HypothesisViolation { reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { what } => write!(f, "invalid parameter: {what}"),
            Error::Validation { path, reason } => {
                write!(f, "invalid spec at {path}: {reason}")
            }
            Error::Shape { context } => write!(f, "shape mismatch: {context}"),
            Error::Unsupported { what } => write!(f, "unsupported: {what}"),
            Error::Aliasing {
                node_count,
                required,
            } => write!(
                f,
                "sampling with {node_count} nodes would alias; need at least {required}"
            ),
            Error::WindowOutOfRange { index, half_range } => write!(
                f,
                "coefficient index {index} outside the Nyquist range [-{half_range}, {half_range}]"
            ),
            Error::OnCurve { distance, epsilon } => write!(
                f,
                "point lies within {distance:.3e} of the symbol curve (epsilon {epsilon:.1e})"
            ),
            Error::SingularResolvent { condition } => write!(
                f,
                "resolvent is singular or ill-conditioned (condition estimate {condition:.3e})"
            ),
            Error::ContourCollision {
                eigenvalue_gap,
                radius,
            } => write!(
                f,
                "eigenvalue at relative distance {eigenvalue_gap:.3e} from the contour of radius {radius}"
            ),
            Error::Precision { what, value, bound } => {
                write!(f, "{what} = {value:.3e} exceeds bound {bound:.1e}")
            }
            Error::NoConvergence { what } => write!(f, "no convergence: {what}"),
            Error::NotInvariant { defect, tolerance } => write!(
                f,
                "subspace is not invariant: defect {defect:.3e} > tolerance {tolerance:.1e}"
            ),
            Error::RankDeficientBasis { sigma_ratio } => write!(
                f,
                "basis matrix is rank deficient (sigma_min/sigma_max = {sigma_ratio:.3e})"
            ),
            Error::GridTooLarge { cells, limit } => {
                write!(f, "grid has {cells} cells, above the cap of {limit}")
            }
            Error::NotVerifiable { reason } => write!(f, "not verifiable: {reason}"),
            Error::HypothesisViolation { reason } => {
                write!(f, "hypothesis violation: {reason}")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// True for the variants that signal malformed input rather than a
    /// numerical failure mid-computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Validation { .. }
                | Error::Shape { .. }
                | Error::Unsupported { .. }
                | Error::Aliasing { .. }
                | Error::WindowOutOfRange { .. }
                | Error::GridTooLarge { .. }
                | Error::NotInvariant { .. }
                | Error::RankDeficientBasis { .. }
        )
    }
}
