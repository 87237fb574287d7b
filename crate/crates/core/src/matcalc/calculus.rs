//! Rational functional calculus on matrices.
//!
//! The primary route is termwise evaluation of the pole-residue expansion
//! with powers of resolvents. [`eval_on_matrix_cauchy`] is the independent
//! route: trapezoidal quadrature of the Cauchy integral over circles.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use super::rational::ScalarRational;
use crate::error::{Error, Result};
use crate::ext::ExtComplex;

/// Relative spectral guard: a pole closer than `SPECTRAL_GUARD * (1 + ‖T‖)`
/// to an eigenvalue is rejected.
pub const SPECTRAL_GUARD: f64 = 1e-12;

/// Minimal distance between a contour and an eigenvalue.
pub const CONTOUR_CLEARANCE: f64 = 1e-6;

pub fn opnorm(t: &ComplexMatrix) -> Result<f64> {
    t.opnorm()
}

fn guard_radius(t: &ComplexMatrix) -> Result<f64> {
    Ok(SPECTRAL_GUARD * (1.0 + t.opnorm()?))
}

/// `(T - λI)^{-1}`, or `T` itself for `λ = ∞`.
pub fn resolvent(t: &ComplexMatrix, lambda: ExtComplex) -> Result<ComplexMatrix> {
    match lambda {
        ExtComplex::Infinity => Ok(t.clone()),
        ExtComplex::Finite(l) => {
            let d = t.spectral_distance(l)?;
            if d <= guard_radius(t)? {
                return Err(Error::Singular {
                    point: l,
                    distance: d,
                });
            }
            t.shift(-l).inverse().map_err(|_| Error::Singular {
                point: l,
                distance: d,
            })
        }
    }
}

/// `max_{λ∈Λ} ‖p_λ(T)‖`.
pub fn pole_size(t: &ComplexMatrix, poles: &[ExtComplex]) -> Result<f64> {
    if poles.is_empty() {
        return Err(Error::InvalidArgument("pole set is empty".into()));
    }
    let mut best = 0.0f64;
    for &l in poles {
        best = best.max(resolvent(t, l)?.opnorm()?);
    }
    Ok(best)
}

pub fn eval_scalar(f: &ScalarRational, z: C64) -> Result<C64> {
    f.eval(z)
}

/// Powers of `p_λ(T)` computed once per pole, shared across functions.
struct ResolventPowers {
    pole: ExtComplex,
    powers: Vec<ComplexMatrix>,
}

fn resolvent_powers(
    t: &ComplexMatrix,
    fs: &[&ScalarRational],
) -> Result<Vec<ResolventPowers>> {
    let guard = guard_radius(t)?;
    let eig = t.eigenvalues()?;
    let mut table: Vec<(ExtComplex, u32)> = Vec::new();
    for f in fs {
        for (p, m) in f.poles() {
            match table.iter_mut().find(|(q, _)| *q == p) {
                Some((_, k)) => *k = (*k).max(m),
                None => table.push((p, m)),
            }
        }
    }
    let mut out = Vec::with_capacity(table.len());
    for (pole, m) in table {
        let base = match pole {
            ExtComplex::Infinity => t.clone(),
            ExtComplex::Finite(l) => {
                let d = eig.iter().map(|e| (e - l).norm()).fold(f64::INFINITY, f64::min);
                if d <= guard {
                    return Err(Error::PoleOnSpectrum {
                        pole: l,
                        distance: d,
                    });
                }
                t.shift(-l).inverse().map_err(|_| Error::PoleOnSpectrum {
                    pole: l,
                    distance: d,
                })?
            }
        };
        let mut powers = Vec::with_capacity(m as usize);
        powers.push(base.clone());
        for k in 1..m as usize {
            let next = &powers[k - 1] * &base;
            powers.push(next);
        }
        out.push(ResolventPowers { pole, powers });
    }
    Ok(out)
}

fn assemble(f: &ScalarRational, dim: usize, table: &[ResolventPowers]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(dim).scale(f.constant_term());
    for term in f.terms() {
        let entry = table
            .iter()
            .find(|r| r.pole == term.pole)
            .expect("pole tabulated");
        acc = &acc + &entry.powers[term.power as usize - 1].scale(term.coeff);
    }
    acc
}

/// `f(T) = c0 I + Σ c_{λ,j} p_λ(T)^j`.
pub fn eval_on_matrix(f: &ScalarRational, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let table = resolvent_powers(t, &[f])?;
    Ok(assemble(f, t.dim(), &table))
}

/// Evaluates several functions at one matrix, sharing the resolvent powers.
pub fn eval_many_on_matrix(
    fs: &[&ScalarRational],
    t: &ComplexMatrix,
) -> Result<Vec<ComplexMatrix>> {
    let table = resolvent_powers(t, fs)?;
    Ok(fs.iter().map(|f| assemble(f, t.dim(), &table)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: C64,
    pub radius: f64,
    /// `+1` counterclockwise, `-1` clockwise.
    pub orientation: i8,
}

/// Union of disjoint oriented circles with a per-circle quadrature size.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    circles: Vec<Circle>,
    points: usize,
}

pub const MIN_QUADRATURE_POINTS: usize = 64;
pub const DEFAULT_QUADRATURE_POINTS: usize = 512;
pub const MAX_QUADRATURE_POINTS: usize = 8192;

impl Contour {
    pub fn new(circles: Vec<Circle>, points: usize) -> Result<Self> {
        if circles.is_empty() {
            return Err(Error::InvalidArgument("contour has no circles".into()));
        }
        if points < MIN_QUADRATURE_POINTS {
            return Err(Error::InvalidArgument(format!(
                "quadrature needs at least {MIN_QUADRATURE_POINTS} points per circle"
            )));
        }
        for c in &circles {
            if !(c.radius > 0.0 && c.radius.is_finite()) || c.orientation.abs() != 1 {
                return Err(Error::InvalidArgument(format!("bad circle {c:?}")));
            }
        }
        for (i, a) in circles.iter().enumerate() {
            for b in &circles[..i] {
                let d = (a.center - b.center).norm();
                let apart = d > a.radius + b.radius;
                let nested = d < (a.radius - b.radius).abs();
                if !(apart || nested) {
                    return Err(Error::InvalidArgument(
                        "contour circles must be pairwise disjoint".into(),
                    ));
                }
            }
        }
        Ok(Self { circles, points })
    }

    /// Single counterclockwise circle.
    pub fn circle(center: C64, radius: f64, points: usize) -> Result<Self> {
        Self::new(
            vec![Circle {
                center,
                radius,
                orientation: 1,
            }],
            points,
        )
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn with_points(&self, points: usize) -> Result<Self> {
        Self::new(self.circles.clone(), points)
    }

    pub fn winding_number(&self, z: C64) -> i32 {
        self.circles
            .iter()
            .filter(|c| (z - c.center).norm() < c.radius)
            .map(|c| i32::from(c.orientation))
            .sum()
    }

    pub fn distance_to(&self, z: C64) -> f64 {
        self.circles
            .iter()
            .map(|c| ((z - c.center).norm() - c.radius).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// `(1/2πi) ∮ f(ζ) (ζI - T)^{-1} dζ` by the composite trapezoidal rule.
pub fn eval_on_matrix_cauchy(
    f: &ScalarRational,
    t: &ComplexMatrix,
    contour: &Contour,
) -> Result<ComplexMatrix> {
    for e in t.eigenvalues()? {
        let d = contour.distance_to(e);
        if d < CONTOUR_CLEARANCE {
            return Err(Error::ContourTooClose {
                eigenvalue: e,
                distance: d,
            });
        }
        let w = contour.winding_number(e);
        if w != 1 {
            return Err(Error::NotEnclosed {
                eigenvalue: e,
                winding: w,
            });
        }
    }
    for p in f.finite_poles() {
        if contour.winding_number(p) != 0 || contour.distance_to(p) < CONTOUR_CLEARANCE {
            return Err(Error::PoleEnclosed {
                pole: p.to_string(),
            });
        }
    }
    let n = contour.points();
    let dim = t.dim();
    let mut acc = nalgebra::DMatrix::<C64>::zeros(dim, dim);
    for c in contour.circles() {
        for k in 0..n {
            let theta = 2.0 * PI * k as f64 / n as f64;
            let u = C64::from_polar(1.0, theta);
            let zeta = c.center + c.radius * u;
            let weight = f.eval(zeta)? * c.radius * u * f64::from(c.orientation) / n as f64;
            // (ζ I - T)^{-1}
            let r = t.scale(C64::new(-1.0, 0.0)).shift(zeta).inverse()?;
            acc += r.as_dmatrix() * weight;
        }
    }
    ComplexMatrix::from_dmatrix(acc)
}

/// Doubles the quadrature size from 512 until successive results differ by
/// less than `1e-9` or 8192 points are reached. Returns the result and the
/// point count used.
pub fn eval_on_matrix_cauchy_adaptive(
    f: &ScalarRational,
    t: &ComplexMatrix,
    circles: Vec<Circle>,
) -> Result<(ComplexMatrix, usize)> {
    let mut n = DEFAULT_QUADRATURE_POINTS;
    let mut prev = eval_on_matrix_cauchy(f, t, &Contour::new(circles.clone(), n)?)?;
    while n < MAX_QUADRATURE_POINTS {
        n *= 2;
        let next = eval_on_matrix_cauchy(f, t, &Contour::new(circles.clone(), n)?)?;
        let diff = next.max_abs_diff(&prev);
        prev = next;
        if diff < 1e-9 {
            break;
        }
    }
    Ok((prev, n))
}

/// An `s × s` matrix of scalar rational functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<ScalarRational>>", into = "Vec<Vec<ScalarRational>>")]
pub struct MatrixRational {
    entries: Vec<Vec<ScalarRational>>,
}

impl TryFrom<Vec<Vec<ScalarRational>>> for MatrixRational {
    type Error = Error;
    fn try_from(entries: Vec<Vec<ScalarRational>>) -> Result<Self> {
        MatrixRational::new(entries)
    }
}

impl From<MatrixRational> for Vec<Vec<ScalarRational>> {
    fn from(m: MatrixRational) -> Self {
        m.entries
    }
}

impl MatrixRational {
    pub fn new(entries: Vec<Vec<ScalarRational>>) -> Result<Self> {
        let s = entries.len();
        if s == 0 {
            return Err(Error::InvalidArgument("empty matrix function".into()));
        }
        if let Some(row) = entries.iter().find(|r| r.len() != s) {
            return Err(Error::NotSquare {
                rows: s,
                cols: row.len(),
            });
        }
        Ok(Self { entries })
    }

    pub fn scalar(f: ScalarRational) -> Self {
        Self {
            entries: vec![vec![f]],
        }
    }

    pub fn diagonal(fs: Vec<ScalarRational>) -> Self {
        let s = fs.len();
        let entries = fs
            .into_iter()
            .enumerate()
            .map(|(i, f)| {
                (0..s)
                    .map(|j| if i == j { f.clone() } else { ScalarRational::zero() })
                    .collect()
            })
            .collect();
        Self { entries }
    }

    pub fn identity(s: usize) -> Self {
        Self::diagonal(vec![ScalarRational::one(); s])
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarRational {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<ScalarRational>] {
        &self.entries
    }

    /// Union of the entries' poles with highest powers.
    pub fn poles(&self) -> Vec<(ExtComplex, u32)> {
        let mut out: Vec<(ExtComplex, u32)> = Vec::new();
        for f in self.entries.iter().flatten() {
            for (p, m) in f.poles() {
                match out.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, k)) => *k = (*k).max(m),
                    None => out.push((p, m)),
                }
            }
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|f| f.scale(c)).collect())
                .collect(),
        }
    }

    /// Pointwise value, an `s × s` matrix.
    pub fn eval_at(&self, z: C64) -> Result<ComplexMatrix> {
        let s = self.size();
        let mut flat = Vec::with_capacity(s * s);
        for row in &self.entries {
            for f in row {
                flat.push(f.eval(z)?);
            }
        }
        ComplexMatrix::from_row_major(s, &flat)
    }
}

/// `[f_ij(T)]` as an `(s·dim) × (s·dim)` block matrix.
pub fn eval_matrix_rational(f: &MatrixRational, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let fs: Vec<&ScalarRational> = f.entries.iter().flatten().collect();
    let values = eval_many_on_matrix(&fs, t)?;
    let s = f.size();
    let blocks: Vec<Vec<ComplexMatrix>> = values.chunks(s).map(|c| c.to_vec()).collect();
    ComplexMatrix::from_blocks(&blocks)
}
