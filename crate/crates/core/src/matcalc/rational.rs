//! Scalar rational functions in pole-residue form.
//!
//! A function is stored as
//!
//! ```text
//! f(z) = c0 + Σ c_{λ,j} p_λ(z)^j,     p_λ(z) = 1/(z - λ),  p_∞(z) = z
//! ```
//!
//! which is the basis the matrix calculus evaluates in. The numerator /
//! denominator form is derived on demand by [`ScalarRational::to_ratio`] and
//! serves as an independent evaluation route.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::poly::{series_div, Polynomial};
use crate::error::{Error, Result};
use crate::ext::ExtComplex;

/// Relative distance below which a point counts as sitting on a pole.
pub const POLE_GUARD: f64 = 1e-12;

/// One term `coeff * p_pole^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleTerm {
    pub pole: ExtComplex,
    pub power: u32,
    pub coeff: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr", into = "RationalRepr")]
pub struct ScalarRational {
    constant: C64,
    terms: Vec<PoleTerm>,
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    constant: C64,
    #[serde(default)]
    terms: Vec<PoleTerm>,
}

impl TryFrom<RationalRepr> for ScalarRational {
    type Error = Error;
    fn try_from(r: RationalRepr) -> Result<Self> {
        ScalarRational::from_terms(r.constant, r.terms)
    }
}

impl From<ScalarRational> for RationalRepr {
    fn from(f: ScalarRational) -> Self {
        RationalRepr {
            constant: f.constant,
            terms: f.terms,
        }
    }
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Binomial coefficient C(-j, n) = (-1)^n C(j+n-1, n).
fn neg_binomial(j: u32, n: u32) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * binomial(j + n - 1, n)
}

impl ScalarRational {
    pub fn from_terms(constant: C64, terms: Vec<PoleTerm>) -> Result<Self> {
        if !(constant.re.is_finite() && constant.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite constant".into()));
        }
        for t in &terms {
            if t.power == 0 {
                return Err(Error::InvalidArgument("term power must be >= 1".into()));
            }
            if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
                return Err(Error::InvalidArgument("non-finite term coefficient".into()));
            }
            if let ExtComplex::Finite(p) = t.pole {
                if !(p.re.is_finite() && p.im.is_finite()) {
                    return Err(Error::InvalidArgument("non-finite pole".into()));
                }
            }
        }
        let mut f = Self {
            constant,
            terms: Vec::new(),
        };
        for t in terms {
            f.push_term(t.pole, t.power, t.coeff);
        }
        f.prune();
        Ok(f)
    }

    pub fn constant(c: C64) -> Self {
        Self {
            constant: c,
            terms: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(zero())
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// `p_λ(z) = 1/(z - λ)`, or `z` for `λ = ∞`.
    pub fn p(pole: ExtComplex) -> Self {
        Self::pole_term(pole, 1, C64::new(1.0, 0.0))
    }

    /// `coeff * p_λ^power`.
    pub fn pole_term(pole: ExtComplex, power: u32, coeff: C64) -> Self {
        let mut f = Self::zero();
        if power == 0 {
            f.constant = coeff;
        } else {
            f.push_term(pole, power, coeff);
        }
        f.prune();
        f
    }

    /// The identity function `z`.
    pub fn z() -> Self {
        Self::p(ExtComplex::Infinity)
    }

    /// Polynomial with ascending coefficients.
    pub fn polynomial(coeffs: &[C64]) -> Self {
        let mut f = Self::constant(coeffs.first().copied().unwrap_or_default());
        for (j, &c) in coeffs.iter().enumerate().skip(1) {
            f.push_term(ExtComplex::Infinity, j as u32, c);
        }
        f.prune();
        f
    }

    /// `numerator / Π (z - λ_k)^{m_k}` converted by residue extraction at
    /// each pole with its multiplicity.
    pub fn from_factored(numerator: &Polynomial, poles: &[(C64, u32)]) -> Result<Self> {
        for (i, (a, ma)) in poles.iter().enumerate() {
            if *ma == 0 {
                return Err(Error::InvalidArgument("pole multiplicity must be >= 1".into()));
            }
            if poles[..i].iter().any(|(b, _)| b == a) {
                return Err(Error::InvalidArgument(format!("pole {a} listed twice")));
            }
        }
        let denom = poles.iter().fold(Polynomial::constant(C64::new(1.0, 0.0)), |acc, &(a, m)| {
            &acc * &Polynomial::linear(a).pow(m as usize)
        });
        let (quot, rem) = numerator.div_rem(&denom);
        let mut f = Self::polynomial(quot.coeffs());
        for (i, &(a, m)) in poles.iter().enumerate() {
            let others = poles
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .fold(Polynomial::constant(C64::new(1.0, 0.0)), |acc, (_, &(b, mb))| {
                    &acc * &Polynomial::linear(b).pow(mb as usize)
                });
            let num_t = rem.taylor_at(a);
            let den_t = others.taylor_at(a);
            let series = series_div(&num_t, &den_t, m as usize);
            for (n, g) in series.into_iter().enumerate() {
                f.push_term(ExtComplex::Finite(a), m - n as u32, g);
            }
        }
        f.prune();
        Ok(f)
    }

    pub fn constant_term(&self) -> C64 {
        self.constant
    }

    pub fn terms(&self) -> &[PoleTerm] {
        &self.terms
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct poles with their highest power.
    pub fn poles(&self) -> Vec<(ExtComplex, u32)> {
        let mut out: Vec<(ExtComplex, u32)> = Vec::new();
        for t in &self.terms {
            match out.iter_mut().find(|(p, _)| *p == t.pole) {
                Some((_, m)) => *m = (*m).max(t.power),
                None => out.push((t.pole, t.power)),
            }
        }
        out
    }

    pub fn finite_poles(&self) -> Vec<C64> {
        self.poles().into_iter().filter_map(|(p, _)| p.as_finite()).collect()
    }

    pub fn has_pole_at_infinity(&self) -> bool {
        self.terms.iter().any(|t| t.pole.is_infinite())
    }

    fn push_term(&mut self, pole: ExtComplex, power: u32, coeff: C64) {
        match self
            .terms
            .iter_mut()
            .find(|t| t.pole == pole && t.power == power)
        {
            Some(t) => t.coeff += coeff,
            None => self.terms.push(PoleTerm { pole, power, coeff }),
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|t| t.coeff != zero());
    }

    /// Pointwise value from the pole-residue form.
    pub fn eval(&self, z: C64) -> Result<C64> {
        let mut acc = self.constant;
        for t in &self.terms {
            match t.pole {
                ExtComplex::Infinity => acc += t.coeff * z.powu(t.power),
                ExtComplex::Finite(l) => {
                    let d = z - l;
                    if d.norm() <= POLE_GUARD * (1.0 + l.norm()) {
                        return Err(Error::AtPole { point: z });
                    }
                    acc += t.coeff / d.powu(t.power);
                }
            }
        }
        Ok(acc)
    }

    /// Pointwise value from the numerator / denominator form.
    pub fn eval_ratio(&self, z: C64) -> Result<C64> {
        for p in self.finite_poles() {
            if (z - p).norm() <= POLE_GUARD * (1.0 + p.norm()) {
                return Err(Error::AtPole { point: z });
            }
        }
        let (num, den) = self.to_ratio();
        Ok(num.eval(z) / den.eval(z))
    }

    /// Numerator and monic denominator `Π (z - λ)^{m_λ}` over finite poles.
    pub fn to_ratio(&self) -> (Polynomial, Polynomial) {
        let poles: Vec<(C64, u32)> = self
            .poles()
            .into_iter()
            .filter_map(|(p, m)| p.as_finite().map(|a| (a, m)))
            .collect();
        let one = Polynomial::constant(C64::new(1.0, 0.0));
        let factor = |skip: Option<usize>| -> Polynomial {
            poles
                .iter()
                .enumerate()
                .filter(|(k, _)| Some(*k) != skip)
                .fold(one.clone(), |acc, (_, &(a, m))| {
                    &acc * &Polynomial::linear(a).pow(m as usize)
                })
        };
        let den = factor(None);
        let mut num = den.scale(self.constant);
        for t in &self.terms {
            let piece = match t.pole {
                ExtComplex::Infinity => &Polynomial::monomial(t.power as usize, t.coeff) * &den,
                ExtComplex::Finite(a) => {
                    let k = poles.iter().position(|(p, _)| *p == a).expect("pole listed");
                    let m = poles[k].1;
                    let own = Polynomial::linear(a).pow((m - t.power) as usize);
                    (&own * &factor(Some(k))).scale(t.coeff)
                }
            };
            num = &num + &piece;
        }
        (num, den)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut f = Self {
            constant: self.constant * c,
            terms: self
                .terms
                .iter()
                .map(|t| PoleTerm {
                    coeff: t.coeff * c,
                    ..*t
                })
                .collect(),
        };
        f.prune();
        f
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut f = self.clone();
        f.constant += other.constant;
        for t in &other.terms {
            f.push_term(t.pole, t.power, t.coeff);
        }
        f.prune();
        f
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `α f + β g`.
    pub fn linear_combination(alpha: C64, f: &Self, beta: C64, g: &Self) -> Self {
        f.scale(alpha).add(&g.scale(beta))
    }

    /// Product computed term by term in pole-residue arithmetic.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::constant(self.constant * other.constant);
        for t in &other.terms {
            out.push_term(t.pole, t.power, t.coeff * self.constant);
        }
        for t in &self.terms {
            out.push_term(t.pole, t.power, t.coeff * other.constant);
        }
        for a in &self.terms {
            for b in &other.terms {
                out.add_term_product(a, b);
            }
        }
        out.prune();
        out
    }

    fn add_term_product(&mut self, a: &PoleTerm, b: &PoleTerm) {
        let c = a.coeff * b.coeff;
        match (a.pole, b.pole) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => {
                self.push_term(ExtComplex::Infinity, a.power + b.power, c);
            }
            (ExtComplex::Finite(l), ExtComplex::Finite(m)) if l == m => {
                self.push_term(a.pole, a.power + b.power, c);
            }
            (ExtComplex::Finite(l), ExtComplex::Finite(m)) => {
                let (i, j) = (a.power, b.power);
                let d = l - m;
                // principal part at l
                for n in 0..i {
                    let k = neg_binomial(j, n) * d.powi(-((j + n) as i32));
                    self.push_term(a.pole, i - n, c * k);
                }
                // principal part at m
                let e = -d;
                for n in 0..j {
                    let k = neg_binomial(i, n) * e.powi(-((i + n) as i32));
                    self.push_term(b.pole, j - n, c * k);
                }
            }
            (ExtComplex::Infinity, ExtComplex::Finite(l)) => {
                self.add_monomial_times_pole(a.power, l, b.power, c)
            }
            (ExtComplex::Finite(l), ExtComplex::Infinity) => {
                self.add_monomial_times_pole(b.power, l, a.power, c)
            }
        }
    }

    /// Adds `c z^i (z - l)^{-j}`.
    fn add_monomial_times_pole(&mut self, i: u32, l: C64, j: u32, c: C64) {
        // z^i = Σ_k C(i,k) l^{i-k} (z - l)^k
        for k in 0..=i {
            let ck = c * binomial(i, k) * l.powu(i - k);
            match k.cmp(&j) {
                std::cmp::Ordering::Less => self.push_term(ExtComplex::Finite(l), j - k, ck),
                std::cmp::Ordering::Equal => self.constant += ck,
                std::cmp::Ordering::Greater => {
                    // (z - l)^m = Σ_q C(m,q) z^q (-l)^{m-q}
                    let m = k - j;
                    for q in 0..=m {
                        let cq = ck * binomial(m, q) * (-l).powu(m - q);
                        if q == 0 {
                            self.constant += cq;
                        } else {
                            self.push_term(ExtComplex::Infinity, q, cq);
                        }
                    }
                }
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let mut f = Self::zero();
        for t in &self.terms {
            let j = t.power;
            match t.pole {
                ExtComplex::Infinity if j == 1 => f.constant += t.coeff,
                ExtComplex::Infinity => f.push_term(t.pole, j - 1, t.coeff * f64::from(j)),
                ExtComplex::Finite(_) => f.push_term(t.pole, j + 1, -t.coeff * f64::from(j)),
            }
        }
        f.prune();
        f
    }

    /// `z ↦ f(a z + b)` for `a != 0`.
    pub fn compose_affine(&self, a: C64, b: C64) -> Result<Self> {
        if a.norm() == 0.0 {
            return Err(Error::Degenerate("affine map with zero slope".into()));
        }
        let lin = Self::polynomial(&[b, a]);
        let mut out = Self::constant(self.constant);
        for t in &self.terms {
            match t.pole {
                ExtComplex::Infinity => {
                    let mut pw = Self::one();
                    for _ in 0..t.power {
                        pw = pw.mul(&lin);
                    }
                    out = out.add(&pw.scale(t.coeff));
                }
                ExtComplex::Finite(l) => {
                    // (a z + b - l)^{-j} = a^{-j} (z - (l - b)/a)^{-j}
                    let moved = (l - b) / a;
                    let c = t.coeff * a.powi(-(t.power as i32));
                    out.push_term(ExtComplex::Finite(moved), t.power, c);
                }
            }
        }
        out.prune();
        Ok(out)
    }
}
