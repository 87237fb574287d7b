use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {point} lies within {distance:e} of the spectrum")]
    Singular { point: Complex64, distance: f64 },

    #[error("pole {pole} lies within {distance:e} of the spectrum")]
    PoleOnSpectrum { pole: Complex64, distance: f64 },

    #[error("evaluation point {point} is a pole")]
    AtPole { point: Complex64 },

    #[error("pole {pole} is enclosed by the contour")]
    PoleEnclosed { pole: String },

    #[error("contour passes within {distance:e} of eigenvalue {eigenvalue}")]
    ContourTooClose { eigenvalue: Complex64, distance: f64 },

    #[error("eigenvalue {eigenvalue} has winding number {winding} with respect to the contour")]
    NotEnclosed { eigenvalue: Complex64, winding: i32 },

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("region is not convex")]
    NotConvex,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// True for failures caused by conditioning or spectral position rather
    /// than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::PoleOnSpectrum { .. }
                | Error::AtPole { .. }
                | Error::PoleEnclosed { .. }
                | Error::ContourTooClose { .. }
                | Error::NotEnclosed { .. }
                | Error::NoConvergence
                | Error::NonFinite { .. }
        )
    }
}
