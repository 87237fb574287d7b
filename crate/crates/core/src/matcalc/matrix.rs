//! Dense complex square matrices.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// Dense square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut flat = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_row_major(dim, &flat)
    }

    /// Convenience constructor for real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_dmatrix(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::NotSquare {
                rows: inner.nrows(),
                cols: inner.ncols(),
            });
        }
        if inner.nrows() == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        check_finite(&inner)?;
        Ok(Self { inner })
    }

    pub(crate) fn from_dmatrix_unchecked(inner: DMatrix<C64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self { inner }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_dmatrix_unchecked(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_dmatrix_unchecked(DMatrix::zeros(dim, dim))
    }

    pub fn diagonal(values: &[C64]) -> Self {
        Self::from_dmatrix_unchecked(DMatrix::from_diagonal(&DVector::from_row_slice(values)))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.inner
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.inner[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_dmatrix_unchecked(self.inner.adjoint())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_dmatrix_unchecked(&self.inner * c)
    }

    /// `self + c I`.
    pub fn shift(&self, c: C64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..self.dim() {
            m[(i, i)] += c;
        }
        Self::from_dmatrix_unchecked(m)
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_dmatrix_unchecked((&self.inner + self.inner.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.inner.trace()
    }

    pub fn mul_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.inner * v
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        check_finite(&self.inner).is_ok()
    }

    /// Spectral norm: the largest singular value.
    pub fn opnorm(&self) -> Result<f64> {
        check_finite(&self.inner)?;
        Ok(self.singular_values().into_iter().fold(0.0, f64::max))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.inner.singular_values().iter().copied().collect()
    }

    pub fn min_singular_value(&self) -> f64 {
        self.singular_values()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues from the complex Schur form, in diagonal order.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        check_finite(&self.inner)?;
        if self.dim() == 1 {
            return Ok(vec![self.inner[(0, 0)]]);
        }
        let schur = Schur::try_new(self.inner.clone(), SCHUR_EPS, SCHUR_MAX_ITER)
            .ok_or(Error::NoConvergence)?;
        let (_, t) = schur.unpack();
        Ok((0..self.dim()).map(|i| t[(i, i)]).collect())
    }

    /// Smallest distance from `z` to an eigenvalue.
    pub fn spectral_distance(&self, z: C64) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .into_iter()
            .map(|l| (l - z).norm())
            .fold(f64::INFINITY, f64::min))
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .into_iter()
            .map(|l| l.norm())
            .fold(0.0, f64::max))
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self
            .inner
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("matrix is singular".into()))?;
        check_finite(&inv)?;
        Ok(Self::from_dmatrix_unchecked(inv))
    }

    /// Real eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = self.hermitian_part();
        let mut ev: Vec<f64> = h.inner.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_hermitian_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()[0]
    }

    pub fn max_hermitian_eigenvalue(&self) -> f64 {
        *self.hermitian_eigenvalues().last().expect("nonempty")
    }

    /// Largest eigenvalue of the Hermitian part with a unit eigenvector.
    pub fn top_hermitian_eigenpair(&self) -> (f64, DVector<C64>) {
        let eig = SymmetricEigen::new(self.hermitian_part().inner);
        let (idx, val) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        (val, eig.eigenvectors.column(idx).into_owned())
    }

    /// Principal square root of a positive semidefinite Hermitian matrix.
    pub fn hermitian_sqrt(&self) -> Result<Self> {
        let eig = SymmetricEigen::new(self.hermitian_part().inner);
        if let Some(neg) = eig.eigenvalues.iter().find(|&&v| v < 0.0) {
            if *neg < -1e-12 * (1.0 + eig.eigenvalues.amax()) {
                return Err(Error::Precondition(format!(
                    "matrix is not positive semidefinite (eigenvalue {neg:e})"
                )));
            }
        }
        let roots = eig.eigenvalues.map(|v| C64::new(v.max(0.0).sqrt(), 0.0));
        let v = &eig.eigenvectors;
        let s = v * DMatrix::from_diagonal(&roots) * v.adjoint();
        Ok(Self::from_dmatrix_unchecked(s).hermitian_part())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Block matrix assembled from a square grid of equally sized blocks.
    pub fn from_blocks(blocks: &[Vec<ComplexMatrix>]) -> Result<Self> {
        let s = blocks.len();
        let n = blocks
            .first()
            .and_then(|r| r.first())
            .map(|b| b.dim())
            .ok_or_else(|| Error::InvalidArgument("empty block grid".into()))?;
        let mut m = DMatrix::zeros(s * n, s * n);
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != s {
                return Err(Error::NotSquare {
                    rows: s,
                    cols: row.len(),
                });
            }
            for (j, b) in row.iter().enumerate() {
                if b.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: b.dim(),
                    });
                }
                m.view_mut((i * n, j * n), (n, n)).copy_from(&b.inner);
            }
        }
        Ok(Self::from_dmatrix_unchecked(m))
    }
}

fn check_finite(m: &DMatrix<C64>) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix_unchecked(&self.inner + &rhs.inner)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix_unchecked(&self.inner - &rhs.inner)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix_unchecked(&self.inner * &rhs.inner)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix_unchecked(-&self.inner)
    }
}

/// On-disk layout: `{"dim": n, "entries": [[[re, im], ...], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixFile {
    dim: usize,
    entries: Vec<Vec<C64>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile { dim: self.dim(), entries: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(d)?;
        if file.entries.len() != file.dim {
            return Err(serde::de::Error::custom(format!(
                "\"dim\" is {} but \"entries\" has {} rows",
                file.dim,
                file.entries.len()
            )));
        }
        ComplexMatrix::from_rows(&file.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, 0.0)], vec![c(-1.0, 0.5), c(3.0, 0.0)]]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"dim":2,"entries":[[[1.0,2.0],[0.0,0.0]],[[-1.0,0.5],[3.0,0.0]]]}"#);
        assert_eq!(serde_json::from_str::<ComplexMatrix>(&text).unwrap(), m);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"dim":3,"entries":[[[1,0]]]}"#).is_err());
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(matches!(
            ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)]]),
            Err(Error::NotSquare { .. })
        ));
        let err = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(f64::NAN, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 0, col: 1 }));
    }

    #[test]
    fn schur_eigenvalues_of_triangular_and_rotation() {
        let t = ComplexMatrix::from_real_rows(&[&[1.0, 5.0], &[0.0, -2.0]]).unwrap();
        let mut ev = t.eigenvalues().unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - c(-2.0, 0.0)).norm() < 1e-12);
        assert!((ev[1] - c(1.0, 0.0)).norm() < 1e-12);

        let rot = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        let mut ev = rot.eigenvalues().unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.5, 0.5)],
            vec![c(0.5, -0.5), c(3.0, 0.0)],
        ])
        .unwrap();
        let s = m.hermitian_sqrt().unwrap();
        assert!((&s * &s).max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn blocks_assemble_in_row_major_order() {
        let a = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2);
        let b = ComplexMatrix::from_blocks(&[vec![a.clone(), a.scale(c(2.0, 0.0))], vec![z, a]])
            .unwrap();
        assert_eq!(b.dim(), 4);
        assert_eq!(b.get(0, 2), c(2.0, 0.0));
        assert_eq!(b.get(2, 0), c(0.0, 0.0));
        assert_eq!(b.get(3, 3), c(1.0, 0.0));
    }
}
