//! Complex matrix primitives and the rational functional calculus.

mod calculus;
mod matrix;
mod poly;
mod rational;

pub use calculus::{
    eval_many_on_matrix, eval_matrix_rational, eval_on_matrix, eval_on_matrix_cauchy,
    eval_on_matrix_cauchy_adaptive, eval_scalar, opnorm, pole_size, resolvent, Circle, Contour,
    MatrixRational, CONTOUR_CLEARANCE, DEFAULT_QUADRATURE_POINTS, MAX_QUADRATURE_POINTS,
    MIN_QUADRATURE_POINTS, SPECTRAL_GUARD,
};
pub use matrix::{ComplexMatrix, C64};
pub use poly::Polynomial;
pub use rational::{PoleTerm, ScalarRational, POLE_GUARD};
