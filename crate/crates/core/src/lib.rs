//! Executable spectral-set criteria for dense complex matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`matcalc`]: matrices, rational functions and the functional calculus.
//! * [`geometry`]: generalized disks, Möbius maps, piecewise-circular domains.
//! * [`classify`]: operator-versus-region tests (good disks, numerical range,
//!   ρ-contractions, resolvent hypotheses, hyponormality).
//! * [`blaschke`]: finite Blaschke products and the similarity to a contraction.
//! * [`ksearch`]: von Neumann ratios, K lower bounds, pole splitting, shrinking.
//! * [`gallery`]: explicit examples and counterexamples with checkable claims.
//! * [`io`]: JSON file formats.

// `!(x <= y)` is used deliberately so that NaN fails the comparison.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blaschke;
pub mod classify;
pub mod error;
pub mod ext;
pub mod gallery;
pub mod geometry;
pub mod io;
pub mod ksearch;
pub mod matcalc;
mod util;

pub use error::{Error, Result};
pub use ext::ExtComplex;
