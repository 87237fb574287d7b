use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::report::Verdict;
use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use crate::geometry::PiecewiseCircularDomain;
use crate::matcalc::{resolvent, ComplexMatrix};

/// Resolvent bound on one boundary piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcSlack {
    pub arc: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    pub samples: usize,
    /// Smallest `1/R - ‖(T - μ)^{-1}‖` over the samples.
    pub margin: f64,
    pub verdict: Verdict,
    pub worst_lambda: C64,
    pub worst_mu: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub passed: bool,
    pub arcs: Vec<ArcSlack>,
    pub spectral_inclusion: bool,
    /// Eigenvalues outside the closure of the domain.
    pub outside: Vec<C64>,
    pub tolerance: f64,
}

/// Checks `‖(T - μ_k(λ))^{-1}‖ ≤ 1/R_k` at every sampled pair of the
/// exterior data, and `σ(T) ⊆ Ω̄`.
pub fn theorem2_hypotheses(
    t: &ComplexMatrix,
    dom: &PiecewiseCircularDomain,
    tol: f64,
) -> Result<Theorem2Report> {
    if dom.exterior().is_empty() {
        return Err(Error::Precondition("domain carries no exterior-disk data".into()));
    }
    let mut arcs = Vec::new();
    for data in dom.exterior() {
        if data.centers.is_empty() {
            return Err(Error::Precondition(format!("piece {} has no sampled centers", data.arc)));
        }
        let mut worst = (f64::INFINITY, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for &(lambda, mu) in &data.centers {
            let slack = 1.0 / data.radius - resolvent(t, ExtComplex::Finite(mu))?.opnorm()?;
            if slack < worst.0 {
                worst = (slack, lambda, mu);
            }
        }
        arcs.push(ArcSlack {
            arc: data.arc,
            radius: data.radius,
            samples: data.centers.len(),
            margin: worst.0,
            verdict: Verdict::from_margin(worst.0, tol),
            worst_lambda: worst.1,
            worst_mu: worst.2,
        });
    }
    let outside: Vec<C64> = t
        .eigenvalues()?
        .into_iter()
        .filter(|z| !dom.contains_closure(*z, tol.max(1e-9)))
        .collect();
    let spectral_inclusion = outside.is_empty();
    Ok(Theorem2Report {
        passed: spectral_inclusion && arcs.iter().all(|a| a.verdict.holds()),
        arcs,
        spectral_inclusion,
        outside,
        tolerance: tol,
    })
}
