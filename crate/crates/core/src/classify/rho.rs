use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::disks::{is_good_disk, w_contained_in};
use super::report::{ClassifyReport, Witness};
use crate::error::{Error, Result};
use crate::geometry::GeneralizedDisk;
use crate::matcalc::ComplexMatrix;
use crate::util::{argmin, compass_min};

/// Closest approach of refined Poisson radii to 1.
const MAX_RADIUS: f64 = 1.0 - 1e-9;

/// Sample sets for the continuum quantifiers of the ρ-contraction criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoGrid {
    /// Poisson radii in `(0, 1)`.
    pub radii: Vec<f64>,
    /// Angles in `[0, 2π)`, used for `t`, support directions and `arg μ`.
    pub angles: Vec<f64>,
    /// Tangency points on the unit circle.
    pub tangency: Vec<C64>,
    /// Number of `|μ|` values; the centers themselves depend on ρ.
    pub mu_moduli: usize,
    /// Local refinement of the worst grid point.
    pub refine: bool,
}

impl Default for RhoGrid {
    fn default() -> Self {
        Self::with_sizes(64, 256, 256, 128)
    }
}

impl RhoGrid {
    /// Radii `1 - 0.99·10^{-6k/(n-1)}`, uniform angles and tangency points.
    pub fn with_sizes(n_radii: usize, n_angles: usize, n_tangency: usize, mu_moduli: usize) -> Self {
        let radii = (0..n_radii)
            .map(|k| {
                let e = if n_radii > 1 { 6.0 * k as f64 / (n_radii - 1) as f64 } else { 0.0 };
                1.0 - 0.99 * 10f64.powf(-e)
            })
            .collect();
        let uniform = |n: usize| (0..n).map(move |k| TAU * k as f64 / n as f64);
        Self {
            radii,
            angles: uniform(n_angles).collect(),
            tangency: uniform(n_tangency).map(|t| C64::from_polar(1.0, t)).collect(),
            mu_moduli,
            refine: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() || self.angles.is_empty() || self.tangency.is_empty() || self.mu_moduli == 0 {
            return Err(Error::InvalidArgument("ρ grid lists must be nonempty".into()));
        }
        if let Some(r) = self.radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidArgument(format!("Poisson radius {r} outside (0, 1)")));
        }
        Ok(())
    }

    /// `|μ|` values for the disk route at ρ: log-spaced on
    /// `[(ρ-1)/(2-ρ), 10(ρ-1)/(2-ρ) + 10]` when `ρ < 2`, and with `|μ| - 1`
    /// log-spaced up to `1/(ρ-2)` when `ρ > 2`.
    pub fn mu_moduli_for(&self, rho: f64) -> Vec<f64> {
        let n = self.mu_moduli;
        let logspace = |lo: f64, hi: f64| -> Vec<f64> {
            if n == 1 {
                return vec![lo];
            }
            (0..n)
                .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
                .collect()
        };
        if rho < 2.0 {
            let m0 = (rho - 1.0) / (2.0 - rho);
            logspace(m0, 10.0 * m0 + 10.0)
        } else {
            let r = 1.0 / (rho - 2.0);
            let mut v: Vec<f64> = logspace(r, r * 1e-3).into_iter().map(|s| 1.0 + s).collect();
            v.reverse();
            v
        }
    }

    /// The centers `μ` sampled at ρ.
    pub fn mu_samples(&self, rho: f64) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.mu_moduli * self.angles.len());
        for m in self.mu_moduli_for(rho) {
            for &phi in &self.angles {
                out.push(C64::from_polar(m, phi));
            }
        }
        out
    }

    fn describe(&self) -> serde_json::Value {
        json!({
            "radii": self.radii.len(),
            "angles": self.angles.len(),
            "tangency": self.tangency.len(),
            "mu_moduli": self.mu_moduli,
            "refine": self.refine,
        })
    }
}

/// `K_{r,t}(T) = (I - re^{it}T*)^{-1} + (I - re^{-it}T)^{-1} - I`,
/// symmetrized.
pub fn poisson_kernel(t: &ComplexMatrix, r: f64, angle: f64) -> Result<ComplexMatrix> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("Poisson radius {r} outside (0, 1)")));
    }
    let n = t.dim();
    let id = ComplexMatrix::identity(n);
    let m = &id - &t.scale(C64::from_polar(r, -angle));
    let a = m.inverse().map_err(|_| Error::Singular {
        point: C64::from_polar(1.0 / r, angle),
        distance: m.min_singular_value(),
    })?;
    let k = &(&a + &a.adjoint()) - &id;
    Ok(k.hermitian_part())
}

fn poisson_min_eig(t: &ComplexMatrix, r: f64, angle: f64) -> f64 {
    poisson_kernel(t, r, angle)
        .map(|k| k.min_hermitian_eigenvalue())
        .unwrap_or(f64::NEG_INFINITY)
}

/// `Err` carries the false report when σ(T) leaves the closed unit disk.
fn spectral_precheck(t: &ComplexMatrix, tol: f64) -> Result<std::result::Result<(), ClassifyReport>> {
    let eig = t.eigenvalues()?;
    let (i, slack) = argmin(&eig.iter().map(|z| 1.0 - z.norm()).collect::<Vec<_>>());
    if slack < -tol {
        return Ok(Err(ClassifyReport::new(slack, Witness::Eigenvalue { value: eig[i] }, tol)
            .with_grid(json!({ "stage": "spectrum" }))));
    }
    Ok(Ok(()))
}

/// ρ-contraction test through `K_{r,t}(T) + (ρ-1)I ≥ 0`.
pub fn is_rho_contraction_poisson(
    t: &ComplexMatrix,
    rho: f64,
    grid: &RhoGrid,
    tol: f64,
) -> Result<ClassifyReport> {
    if !(rho >= 1.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("ρ must be ≥ 1, got {rho}")));
    }
    grid.validate()?;
    if let Err(report) = spectral_precheck(t, tol)? {
        return Ok(report);
    }
    let points: Vec<(f64, f64)> = grid
        .radii
        .iter()
        .flat_map(|&r| grid.angles.iter().map(move |&a| (r, a)))
        .collect();
    let values: Vec<f64> = points.par_iter().map(|&(r, a)| poisson_min_eig(t, r, a)).collect();
    let (i, mut best) = argmin(&values);
    let (mut r, mut a) = points[i];
    if grid.refine && best.is_finite() {
        let u0 = -(1.0 - r).log10();
        let du = 6.0 / grid.radii.len().max(2) as f64;
        let dt = TAU / grid.angles.len() as f64;
        let f = |x: &[f64]| poisson_min_eig(t, (1.0 - 10f64.powf(-x[0])).min(MAX_RADIUS), x[1]);
        let (x, fx) = compass_min(f, &[u0, a], &[du, dt], &[0.0, a - TAU], &[9.0, a + TAU], 30);
        if fx < best {
            best = fx;
            r = (1.0 - 10f64.powf(-x[0])).min(MAX_RADIUS);
            a = x[1].rem_euclid(TAU);
        }
    }
    Ok(ClassifyReport::new(best + rho - 1.0, Witness::Kernel { r, t: a }, tol)
        .with_grid(json!({ "route": "poisson", "rho": rho, "sizes": grid.describe() })))
}

/// Slack of the μ-route inequality at center `mu`.
fn mu_slack(t: &ComplexMatrix, rho: f64, mu: C64) -> f64 {
    let shifted = t.shift(-mu);
    if rho < 2.0 {
        mu.norm() + 1.0 - shifted.opnorm().unwrap_or(f64::INFINITY)
    } else {
        let smin = shifted.min_singular_value();
        if smin <= 0.0 {
            return f64::NEG_INFINITY;
        }
        1.0 / (mu.norm() - 1.0) - 1.0 / smin
    }
}

/// ρ-contraction test through the disk families: `‖μ - T‖ ≤ |μ| + 1` for
/// `ρ < 2`, `W(T) ⊆ 𝔻̄` for `ρ = 2`, `‖(μ - T)^{-1}‖ ≤ 1/(|μ| - 1)` for
/// `ρ > 2`. At `ρ = 1` this is `‖T‖ ≤ 1`.
pub fn is_rho_contraction_disks(
    t: &ComplexMatrix,
    rho: f64,
    grid: &RhoGrid,
    tol: f64,
) -> Result<ClassifyReport> {
    if !(rho >= 1.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("ρ must be ≥ 1, got {rho}")));
    }
    grid.validate()?;
    if rho == 1.0 {
        return Ok(ClassifyReport::new(1.0 - t.opnorm()?, Witness::None, tol)
            .with_grid(json!({ "route": "contraction", "rho": rho })));
    }
    if let Err(report) = spectral_precheck(t, tol)? {
        return Ok(report);
    }
    if rho == 2.0 {
        let report = w_contained_in(t, &[GeneralizedDisk::unit()], grid.angles.len(), tol)?;
        return Ok(report.with_grid(json!({
            "route": "support_function", "rho": rho, "angles": grid.angles.len()
        })));
    }
    let moduli = grid.mu_moduli_for(rho);
    let mus = grid.mu_samples(rho);
    let values: Vec<f64> = mus.par_iter().map(|&mu| mu_slack(t, rho, mu)).collect();
    let (i, mut best) = argmin(&values);
    let mut witness = Witness::Mu { mu: mus[i] };
    if grid.refine && best.is_finite() {
        let (lo, hi) = (moduli[0].min(moduli[moduli.len() - 1]), moduli[0].max(moduli[moduli.len() - 1]));
        let phi = mus[i].arg();
        let dm = (hi - lo) / moduli.len() as f64;
        let dp = TAU / grid.angles.len() as f64;
        let f = |x: &[f64]| mu_slack(t, rho, C64::from_polar(x[0], x[1]));
        let (x, fx) = compass_min(f, &[mus[i].norm(), phi], &[dm, dp], &[lo, phi - TAU], &[hi, phi + TAU], 30);
        if fx < best {
            best = fx;
            witness = Witness::Mu { mu: C64::from_polar(x[0], x[1]) };
        }
    }
    if rho < 2.0 {
        // |μ| → ∞ along arg μ = φ: slack → 1 - λ_max(Re(-e^{-iφ}T))
        let asym: Vec<f64> = grid
            .angles
            .par_iter()
            .map(|&phi| 1.0 - t.scale(-C64::from_polar(1.0, -phi)).max_hermitian_eigenvalue())
            .collect();
        let (j, a) = argmin(&asym);
        if a < best {
            best = a;
            witness = Witness::MuAsymptotic { phi: grid.angles[j] };
        }
    }
    Ok(ClassifyReport::new(best, witness, tol).with_grid(json!({
        "route": "mu", "rho": rho, "mu_range": [moduli[0], moduli[moduli.len() - 1]],
        "sizes": grid.describe(),
    })))
}

/// ρ-contraction test as goodness of every sampled tangent region `D_a(ρ)`.
/// At `ρ = 2` this is the tangent half-plane sweep.
pub fn is_rho_contraction_tangent(
    t: &ComplexMatrix,
    rho: f64,
    grid: &RhoGrid,
    tol: f64,
) -> Result<ClassifyReport> {
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("ρ must be > 1, got {rho}")));
    }
    grid.validate()?;
    if let Err(report) = spectral_precheck(t, tol)? {
        return Ok(report);
    }
    let margins: Vec<f64> = grid
        .tangency
        .par_iter()
        .map(|&a| match is_good_disk(t, &d_a_rho(a, rho)?, tol) {
            Ok(r) => Ok(r.margin),
            Err(e) if e.is_numerical() => Ok(f64::NEG_INFINITY),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let (i, m) = argmin(&margins);
    Ok(ClassifyReport::new(m, Witness::Tangency { a: grid.tangency[i] }, tol)
        .with_grid(json!({ "route": "tangent", "rho": rho, "tangency": grid.tangency.len() })))
}

/// The region `D_a(ρ)`: tangent to the unit circle at `a` and containing the
/// unit disk. A closed disk for `ρ < 2`, a half-plane at `ρ = 2`, the
/// outside of a disk for `ρ > 2`.
pub fn d_a_rho(a: C64, rho: f64) -> Result<GeneralizedDisk> {
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("ρ must be > 1, got {rho}")));
    }
    if (a.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("tangency point {a} is not unimodular")));
    }
    if rho < 2.0 {
        let r = 1.0 / (2.0 - rho);
        GeneralizedDisk::closed(a * (1.0 - r), r)
    } else if rho == 2.0 {
        GeneralizedDisk::half_plane(a, -a.conj())
    } else {
        let r = 1.0 / (rho - 2.0);
        GeneralizedDisk::exterior(a * (1.0 + r), r)
    }
}
