use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::json;

use super::report::{ClassifyReport, Witness};
use crate::error::{Error, Result};
use crate::geometry::GeneralizedDisk;
use crate::matcalc::{resolvent, ComplexMatrix};
use crate::util::argmin;
use crate::ext::ExtComplex;

/// `1e-9` absolute plus `1e-9·‖T‖`.
pub fn default_tolerance(t: &ComplexMatrix) -> f64 {
    1e-9 * (1.0 + t.opnorm().unwrap_or(0.0))
}

/// Good-disk test: `‖T - a‖ ≤ r`, `‖(T - a)^{-1}‖ ≤ 1/r`, or
/// `Re α(T - a) ≥ 0` according to the variant.
pub fn is_good_disk(t: &ComplexMatrix, d: &GeneralizedDisk, tol: f64) -> Result<ClassifyReport> {
    let margin = match *d {
        GeneralizedDisk::Closed { center, radius } => radius - t.shift(-center).opnorm()?,
        GeneralizedDisk::Exterior { center, radius } => {
            1.0 / radius - resolvent(t, ExtComplex::Finite(center))?.opnorm()?
        }
        GeneralizedDisk::HalfPlane { anchor, direction } => {
            t.shift(-anchor).scale(direction).min_hermitian_eigenvalue()
        }
    };
    Ok(ClassifyReport::new(margin, Witness::None, tol))
}

/// Rotated top eigenvalue `λ_max(Re e^{-iθ}T)` with the point `⟨Tx, x⟩`
/// for its eigenvector.
fn support_point(t: &ComplexMatrix, theta: f64) -> (f64, C64) {
    let rot = t.scale(C64::from_polar(1.0, -theta));
    let (val, x) = rot.top_hermitian_eigenpair();
    let tx = t.mul_vec(&x);
    (val, x.dotc(&tx))
}

/// Samples of `∂W(T)` at `n_angles` uniformly spaced support directions.
pub fn numerical_range_boundary(t: &ComplexMatrix, n_angles: usize) -> Result<Vec<C64>> {
    if n_angles < 8 {
        return Err(Error::InvalidArgument(format!(
            "numerical range needs at least 8 angles, got {n_angles}"
        )));
    }
    Ok((0..n_angles)
        .into_par_iter()
        .map(|k| support_point(t, TAU * k as f64 / n_angles as f64).1)
        .collect())
}

/// Numerical radius sampled on `n_angles` directions.
pub fn numerical_radius(t: &ComplexMatrix, n_angles: usize) -> f64 {
    (0..n_angles)
        .map(|k| support_point(t, TAU * k as f64 / n_angles as f64).0)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `W(T) ⊆ ∩ D_j` for closed disks and half-planes, by comparing support
/// functions. Half-planes are checked at their single finite direction.
pub fn w_contained_in(
    t: &ComplexMatrix,
    region: &[GeneralizedDisk],
    n_angles: usize,
    tol: f64,
) -> Result<ClassifyReport> {
    if region.is_empty() {
        return Err(Error::InvalidArgument("empty target region".into()));
    }
    if region.iter().any(|d| !d.is_convex()) {
        return Err(Error::NotConvex);
    }
    if n_angles == 0 {
        return Err(Error::InvalidArgument("need at least one angle".into()));
    }
    let thetas: Vec<f64> = (0..n_angles).map(|k| TAU * k as f64 / n_angles as f64).collect();
    let has_disk = region.iter().any(|d| matches!(d, GeneralizedDisk::Closed { .. }));
    let tops: Vec<f64> = if has_disk {
        thetas.par_iter().map(|&th| support_point(t, th).0).collect()
    } else {
        Vec::new()
    };
    let mut best = (f64::INFINITY, Witness::None);
    for d in region {
        match *d {
            GeneralizedDisk::Closed { center, radius } => {
                let slack: Vec<f64> = thetas
                    .iter()
                    .zip(&tops)
                    .map(|(&th, &top)| (C64::from_polar(1.0, -th) * center).re + radius - top)
                    .collect();
                let (i, m) = argmin(&slack);
                if m < best.0 {
                    best = (m, Witness::Angle { theta: thetas[i] });
                }
            }
            GeneralizedDisk::HalfPlane { anchor, direction } => {
                // sup of Re(e^{-iθ} z) is finite only for e^{-iθ} = -α
                let m = t.shift(-anchor).scale(direction).min_hermitian_eigenvalue();
                if m < best.0 {
                    best = (m, Witness::Angle { theta: (-direction).conj().arg() });
                }
            }
            GeneralizedDisk::Exterior { .. } => unreachable!(),
        }
    }
    Ok(ClassifyReport::new(best.0, best.1, tol).with_grid(json!({ "angles": n_angles })))
}

/// `λ_min(T*T - TT*) ≥ -tol`.
pub fn is_hyponormal(t: &ComplexMatrix, tol: f64) -> ClassifyReport {
    let ts = t.adjoint();
    let defect = &(&ts * t) - &(t * &ts);
    ClassifyReport::new(defect.min_hermitian_eigenvalue(), Witness::None, tol)
}

/// `(‖(T - λ)^{-1}‖, 1/dist(λ, σ(T)))`; equal for hyponormal `T`.
pub fn hyponormal_resolvent_identity(t: &ComplexMatrix, lambda: C64) -> Result<(f64, f64)> {
    let lhs = resolvent(t, ExtComplex::Finite(lambda))?.opnorm()?;
    let rhs = 1.0 / t.spectral_distance(lambda)?;
    Ok((lhs, rhs))
}
