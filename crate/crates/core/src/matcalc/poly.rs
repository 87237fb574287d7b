//! Dense complex polynomials, coefficients in ascending degree.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `(z - root)`.
    pub fn linear(root: C64) -> Self {
        Self::new(vec![-root, C64::new(1.0, 0.0)])
    }

    /// `z^k`.
    pub fn monomial(k: usize, c: C64) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_roots(roots: &[C64]) -> Self {
        roots
            .iter()
            .fold(Self::constant(C64::new(1.0, 0.0)), |acc, &r| {
                &acc * &Self::linear(r)
            })
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(C64::new(1.0, 0.0)), |acc, _| &acc * self)
    }

    /// Coefficients of the Taylor expansion about `a`: `p(a + u) = Σ t_k u^k`.
    pub fn taylor_at(&self, a: C64) -> Vec<C64> {
        // repeated synthetic division
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            for i in (k..n - 1).rev() {
                let hi = work[i + 1];
                work[i] += a * hi;
            }
            out.push(work[k]);
        }
        out
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dn = d.coeffs.len();
        if self.coeffs.len() < dn {
            return (Self::zero(), self.clone());
        }
        let lead = d.coeffs[dn - 1];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C64::new(0.0, 0.0); rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dn - 1] / lead;
            quot[k] = c;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= c * dc;
            }
        }
        rem.truncate(dn - 1);
        (Self::new(quot), Self::new(rem))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Power-series quotient `a / b` truncated to `n` terms; requires `b[0] != 0`.
pub(crate) fn series_div(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    let mut q = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut acc = a.get(k).copied().unwrap_or_default();
        for i in 1..=k {
            if let Some(&bi) = b.get(i) {
                acc -= bi * q[k - i];
            }
        }
        q[k] = acc / b[0];
    }
    q
}
