//! Finite Blaschke products, the model-space basis `s_k`, and the similarity
//! that turns `T` into a contraction when `‖B(T)‖ ≤ 1`.

use std::f64::consts::TAU;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcalc::{eval_many_on_matrix, ComplexMatrix, Polynomial, ScalarRational};

/// Largest admissible zero modulus.
pub const MAX_ZERO_MODULUS: f64 = 1.0 - 1e-12;
/// Slack allowed in `‖B(T)‖ ≤ 1`.
pub const NORM_SLACK: f64 = 1e-10;
/// Spectral slack for `σ(T) ⊆ 𝔻̄`.
const SPECTRAL_SLACK: f64 = 1e-9;
const DENOM_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `(z - λ)/(1 - λ̄z)`.
    #[default]
    Plain,
    /// `(λ̄/|λ|)(λ - z)/(1 - λ̄z)`; zeros at the origin stay plain.
    Mascioni,
}

/// `e^{iθ} Π b_{λ_j}(z)`. A factor `z^k` is written as `k` zeros at `0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    pub theta: f64,
    pub zeros: Vec<C64>,
    #[serde(default)]
    pub normalization: Normalization,
}

impl BlaschkeProduct {
    pub fn new(theta: f64, zeros: Vec<C64>, normalization: Normalization) -> Result<Self> {
        let b = Self { theta, zeros, normalization };
        b.validate()?;
        Ok(b)
    }

    /// `z^k`.
    pub fn power(k: usize) -> Self {
        Self { theta: 0.0, zeros: vec![C64::new(0.0, 0.0); k], normalization: Normalization::Plain }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() {
            return Err(Error::InvalidArgument("θ must be finite".into()));
        }
        for (j, z) in self.zeros.iter().enumerate() {
            if !(z.norm() <= MAX_ZERO_MODULUS) {
                return Err(Error::InvalidArgument(format!(
                    "zero {j} = {z} has modulus {}; zeros need |λ| < 1 (at most 1 - 1e-12)",
                    z.norm()
                )));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Unimodular constant in front of the plain factor at `λ`.
    fn factor_constant(&self, lambda: C64) -> C64 {
        match self.normalization {
            Normalization::Mascioni if lambda.norm() > 0.0 => -lambda.conj() / lambda.norm(),
            _ => C64::new(1.0, 0.0),
        }
    }

    /// `e^{iθ}` times all per-factor constants.
    fn leading_constant(&self) -> C64 {
        self.zeros
            .iter()
            .fold(C64::from_polar(1.0, self.theta), |acc, &l| acc * self.factor_constant(l))
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        let mut acc = C64::from_polar(1.0, self.theta);
        for &l in &self.zeros {
            let den = 1.0 - l.conj() * z;
            if den.norm() < DENOM_GUARD {
                return Err(Error::AtPole { point: z });
            }
            acc *= self.factor_constant(l) * (z - l) / den;
        }
        Ok(acc)
    }

    /// `B` in pole-residue form; its poles are the points `1/λ̄_j`.
    pub fn to_rational(&self) -> Result<ScalarRational> {
        rational_from_parts(self.leading_constant(), &self.zeros, &self.zeros)
    }
}

/// `c · Π_{numer}(z - λ) / Π_{denom}(1 - λ̄z)`.
fn rational_from_parts(c: C64, numer: &[C64], denom: &[C64]) -> Result<ScalarRational> {
    let mut scale = c;
    let mut poles: Vec<(C64, u32)> = Vec::new();
    for &l in denom.iter().filter(|l| l.norm() > 0.0) {
        // 1 - λ̄z = -λ̄ (z - 1/λ̄)
        scale /= -l.conj();
        let p = 1.0 / l.conj();
        match poles.iter_mut().find(|(q, _)| *q == p) {
            Some((_, m)) => *m += 1,
            None => poles.push((p, 1)),
        }
    }
    let num = Polynomial::from_roots(numer);
    let num = Polynomial::new(num.coeffs().iter().map(|a| a * scale).collect());
    ScalarRational::from_factored(&num, &poles)
}

fn check_spectrum(t: &ComplexMatrix) -> Result<()> {
    let rho = t.spectral_radius()?;
    if rho > 1.0 + SPECTRAL_SLACK {
        return Err(Error::Precondition(format!(
            "spectrum leaves the closed unit disk (spectral radius {rho})"
        )));
    }
    Ok(())
}

/// `B(T) = e^{iθ} Π c_j (T - λ_j)(I - λ̄_j T)^{-1}`.
pub fn blaschke_on_matrix(b: &BlaschkeProduct, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_spectrum(t)?;
    let n = t.dim();
    let id = ComplexMatrix::identity(n);
    let mut acc = id.scale(C64::from_polar(1.0, b.theta));
    for &l in &b.zeros {
        let den = &id - &t.scale(l.conj());
        let inv = den.inverse().map_err(|_| Error::PoleOnSpectrum {
            pole: 1.0 / l.conj(),
            distance: 0.0,
        })?;
        acc = &acc * &(&t.shift(-l) * &inv).scale(b.factor_constant(l));
    }
    Ok(acc)
}

/// The orthonormal basis `s_1, …, s_n` of the model space of `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBasis {
    pub zeros: Vec<C64>,
    pub functions: Vec<ScalarRational>,
}

/// `s_k(z) = (1 - |λ_k|²)^{1/2} / (1 - λ̄_k z) · Π_{j<k} b_j(z)` with plain
/// factors. The normalization of `B` only changes unimodular constants, so
/// either convention is accepted.
pub fn model_basis(b: &BlaschkeProduct) -> Result<ModelBasis> {
    b.validate()?;
    if b.zeros.is_empty() {
        return Err(Error::InvalidArgument("model space of a constant product is trivial".into()));
    }
    let functions = (0..b.zeros.len())
        .map(|k| {
            let lk = b.zeros[k];
            let c = C64::new((1.0 - lk.norm_sqr()).sqrt(), 0.0);
            rational_from_parts(c, &b.zeros[..k], &b.zeros[..=k])
        })
        .collect::<Result<_>>()?;
    Ok(ModelBasis { zeros: b.zeros.clone(), functions })
}

impl ModelBasis {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn eval(&self, z: C64) -> Result<Vec<C64>> {
        self.functions.iter().map(|f| f.eval(z)).collect()
    }

    /// Hardy-space Gram matrix by `points`-point quadrature on the circle.
    pub fn gram_matrix(&self, points: usize) -> Result<ComplexMatrix> {
        let n = self.len();
        let mut g = vec![vec![C64::new(0.0, 0.0); n]; n];
        for p in 0..points {
            let v = self.eval(C64::from_polar(1.0, TAU * p as f64 / points as f64))?;
            for i in 0..n {
                for j in 0..n {
                    g[i][j] += v[i] * v[j].conj();
                }
            }
        }
        let scale = C64::new(1.0 / points as f64, 0.0);
        ComplexMatrix::from_rows(&g.into_iter().map(|r| r.into_iter().map(|x| x * scale).collect()).collect::<Vec<_>>())
    }

    pub fn on_matrix(&self, t: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
        let refs: Vec<&ScalarRational> = self.functions.iter().collect();
        eval_many_on_matrix(&refs, t)
    }
}

/// `|1 - conj(B(w))B(z) - (1 - w̄z) Σ conj(s_k(w)) s_k(z)|`.
pub fn kernel_identity_residual(b: &BlaschkeProduct, z: C64, w: C64) -> Result<f64> {
    let basis = model_basis(b)?;
    let (sz, sw) = (basis.eval(z)?, basis.eval(w)?);
    let lhs = 1.0 - b.eval(w)?.conj() * b.eval(z)?;
    let sum: C64 = sz.iter().zip(&sw).map(|(a, c)| c.conj() * a).sum();
    Ok((lhs - (1.0 - w.conj() * z) * sum).norm())
}

/// Residual of `Σ‖s_k(T)h‖² - Σ‖s_k(T)Th‖² = ‖h‖² - ‖B(T)h‖²`.
pub fn defect_identity_residual(b: &BlaschkeProduct, t: &ComplexMatrix, h: &DVector<C64>) -> Result<f64> {
    if h.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: h.len() });
    }
    let bt = blaschke_on_matrix(b, t)?;
    let s = model_basis(b)?.on_matrix(t)?;
    let th = t.mul_vec(h);
    let lhs: f64 = s.iter().map(|sk| sk.mul_vec(h).norm_squared() - sk.mul_vec(&th).norm_squared()).sum();
    let rhs = h.norm_squared() - bt.mul_vec(h).norm_squared();
    Ok((lhs - rhs).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    /// Positive square root of `M = Σ s_k(T)* s_k(T)`.
    pub s: ComplexMatrix,
    /// `‖S T S^{-1}‖`.
    pub contraction_norm: f64,
    pub condition_number: f64,
    /// `‖B(T)‖`.
    pub blaschke_norm: f64,
}

/// `S = M^{1/2}` with `M = Σ s_k(T)* s_k(T)`, so that `S T S^{-1}` is a
/// contraction whenever `‖B(T)‖ ≤ 1`.
pub fn similarity_transform(b: &BlaschkeProduct, t: &ComplexMatrix) -> Result<Similarity> {
    let bt = blaschke_on_matrix(b, t)?;
    let blaschke_norm = bt.opnorm()?;
    if blaschke_norm > 1.0 + NORM_SLACK {
        return Err(Error::Precondition(format!("‖B(T)‖ = {blaschke_norm} exceeds 1")));
    }
    let s_t = model_basis(b)?.on_matrix(t)?;
    let smin = s_t[0].min_singular_value();
    if smin < 1e-10 {
        return Err(Error::Degenerate(format!(
            "s_1(T) is numerically singular (smallest singular value {smin:e})"
        )));
    }
    let n = t.dim();
    let m = s_t
        .iter()
        .fold(ComplexMatrix::zeros(n), |acc, sk| &acc + &(&sk.adjoint() * sk))
        .hermitian_part();
    let s = m.hermitian_sqrt()?;
    let sv = s.singular_values();
    let condition_number = sv.iter().cloned().fold(0.0, f64::max) / sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let s_inv = s.inverse()?;
    let contraction_norm = (&(&s * t) * &s_inv).opnorm()?;
    Ok(Similarity { s, contraction_norm, condition_number, blaschke_norm })
}
