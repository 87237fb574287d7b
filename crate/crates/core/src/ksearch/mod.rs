//! Von Neumann ratios, seeded lower-bound search for the spectral constant,
//! pole splitting and the shrinking map.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use crate::geometry::{pole_set_report, Domain};
use crate::matcalc::{
    eval_matrix_rational, eval_on_matrix, ComplexMatrix, MatrixRational, PoleTerm, ScalarRational,
};

/// Largest matrix size the search accepts.
pub const MAX_S: usize = 4;
/// Step schedule of the line search: halving from `STEP_START` while above
/// `STEP_END`.
pub const STEP_START: f64 = 0.5;
pub const STEP_END: f64 = 1e-4;
const LINE_STEPS: usize = 8;
const MEMBERSHIP_TOL: f64 = 1e-9;
const SPLIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Highest power of each `p_λ`.
    pub degree: usize,
    /// Size of the coefficient matrices.
    pub s: usize,
    /// Boundary samples for the supremum.
    pub grid: usize,
    pub restarts: usize,
    /// Sweeps over all coordinates per step size.
    pub refine_steps: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { degree: 3, s: 1, grid: 256, restarts: 8, refine_steps: 4, seed: 0 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("degree", self.degree),
            ("s", self.s),
            ("grid", self.grid),
            ("restarts", self.restarts),
            ("refine_steps", self.refine_steps),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidArgument(format!("search field {name} must be positive")));
        }
        if self.s > MAX_S {
            return Err(Error::InvalidArgument(format!("s = {} exceeds {MAX_S}", self.s)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Lower bound for the constant at matrix size `s`.
    #[serde(rename = "K_lower")]
    pub k_lower: f64,
    pub s: usize,
    /// Maximizer, normalized to boundary supremum 1.
    pub function: MatrixRational,
    pub boundary_sup: f64,
    /// Best value so far after the basis probes and after each restart.
    pub trace: Vec<f64>,
    /// Best value of each restart.
    pub restart_best: Vec<f64>,
    pub config: SearchConfig,
}

fn check_poles_outside(f: &MatrixRational, dom: &Domain) -> Result<()> {
    for (pole, _) in f.poles() {
        if dom.contains_closure(pole, MEMBERSHIP_TOL * dom.scale()) {
            return Err(Error::PoleEnclosed { pole: pole.to_string() });
        }
    }
    Ok(())
}

fn check_spectrum_inside(t: &ComplexMatrix, dom: &Domain) -> Result<()> {
    let tol = MEMBERSHIP_TOL * dom.scale();
    if let Some(z) = t.eigenvalues()?.into_iter().find(|z| !dom.contains_closure(ExtComplex::Finite(*z), tol)) {
        return Err(Error::Precondition(format!("eigenvalue {z} lies outside the closed domain")));
    }
    Ok(())
}

/// `max ‖F(z)‖` over `grid` boundary points.
pub fn sup_boundary(f: &MatrixRational, dom: &Domain, grid: usize) -> Result<f64> {
    check_poles_outside(f, dom)?;
    let pts = dom.boundary_grid(grid)?;
    let values = pts
        .par_iter()
        .map(|&z| f.eval_at(z)?.opnorm())
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// `‖f(T)‖ / sup_{∂Ω} ‖f‖`.
pub fn vn_ratio(f: &MatrixRational, t: &ComplexMatrix, dom: &Domain, grid: usize) -> Result<f64> {
    check_spectrum_inside(t, dom)?;
    let sup = sup_boundary(f, dom, grid)?;
    if sup == 0.0 {
        return Err(Error::Degenerate("function vanishes on the boundary grid".into()));
    }
    Ok(eval_matrix_rational(f, t)?.opnorm()? / sup)
}

/// Precomputed basis values at `T` and on the boundary grid.
struct Objective {
    basis: Vec<ScalarRational>,
    at_t: Vec<ComplexMatrix>,
    /// `on_grid[g][b]`.
    on_grid: Vec<Vec<C64>>,
    s: usize,
    n: usize,
}

impl Objective {
    /// Coefficients are `basis.len()` blocks of `s × s` row-major entries.
    fn block<'a>(&self, x: &'a [C64], b: usize) -> &'a [C64] {
        let s2 = self.s * self.s;
        &x[b * s2..(b + 1) * s2]
    }

    fn operator_norm(&self, x: &[C64]) -> f64 {
        let (s, n) = (self.s, self.n);
        if s == 1 {
            let m = self
                .at_t
                .iter()
                .zip(x)
                .fold(ComplexMatrix::zeros(n), |acc, (p, &c)| &acc + &p.scale(c));
            return m.opnorm().unwrap_or(f64::NAN);
        }
        let blocks: Vec<Vec<ComplexMatrix>> = (0..s)
            .map(|k| {
                (0..s)
                    .map(|l| {
                        self.at_t.iter().enumerate().fold(ComplexMatrix::zeros(n), |acc, (b, p)| {
                            &acc + &p.scale(self.block(x, b)[k * s + l])
                        })
                    })
                    .collect()
            })
            .collect();
        ComplexMatrix::from_blocks(&blocks).and_then(|m| m.opnorm()).unwrap_or(f64::NAN)
    }

    fn boundary_sup(&self, x: &[C64]) -> f64 {
        let s = self.s;
        self.on_grid
            .iter()
            .map(|vals| {
                if s == 1 {
                    vals.iter().zip(x).map(|(v, c)| v * c).sum::<C64>().norm()
                } else {
                    let mut m = vec![C64::new(0.0, 0.0); s * s];
                    for (b, v) in vals.iter().enumerate() {
                        for (e, c) in m.iter_mut().zip(self.block(x, b)) {
                            *e += v * c;
                        }
                    }
                    ComplexMatrix::from_row_major(s, &m).and_then(|m| m.opnorm()).unwrap_or(f64::NAN)
                }
            })
            .fold(0.0, f64::max)
    }

    fn ratio(&self, x: &[C64]) -> f64 {
        let sup = self.boundary_sup(x);
        if !(sup > 0.0) {
            return 0.0;
        }
        let r = self.operator_norm(x) / sup;
        if r.is_finite() {
            r
        } else {
            0.0
        }
    }

    fn to_function(&self, x: &[C64]) -> Result<MatrixRational> {
        let s = self.s;
        let entries = (0..s)
            .map(|k| {
                (0..s)
                    .map(|l| {
                        self.basis.iter().enumerate().fold(ScalarRational::zero(), |acc, (b, f)| {
                            acc.add(&f.scale(self.block(x, b)[k * s + l]))
                        })
                    })
                    .collect()
            })
            .collect();
        MatrixRational::new(entries)
    }
}

/// `{1} ∪ {p_λ^j : λ ∈ Λ, 1 ≤ j ≤ degree}`.
fn search_basis(poles: &[ExtComplex], degree: usize) -> Vec<ScalarRational> {
    let mut basis = vec![ScalarRational::one()];
    for &p in poles {
        for j in 1..=degree as u32 {
            basis.push(ScalarRational::pole_term(p, j, C64::new(1.0, 0.0)));
        }
    }
    basis
}

/// Cyclic coordinate line search on real and imaginary parts with a
/// halving step schedule. Returns the refined point and its value.
fn refine(obj: &Objective, mut x: Vec<C64>, sweeps: usize) -> (Vec<C64>, f64) {
    let norm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for c in x.iter_mut() {
        *c /= norm;
    }
    let mut fx = obj.ratio(&x);
    let mut h = STEP_START;
    while h >= STEP_END {
        for _ in 0..sweeps {
            let mut moved = false;
            for i in 0..x.len() {
                for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                    for sign in [1.0, -1.0] {
                        let mut steps = 0;
                        loop {
                            let mut y = x.clone();
                            y[i] += dir * (sign * h);
                            let fy = obj.ratio(&y);
                            if fy > fx {
                                x = y;
                                fx = fy;
                                moved = true;
                                steps += 1;
                                if steps < LINE_STEPS {
                                    continue;
                                }
                            }
                            break;
                        }
                        if steps > 0 {
                            break;
                        }
                    }
                }
            }
            if !moved {
                break;
            }
        }
        h *= 0.5;
    }
    (x, fx)
}

/// Seeded search for `sup ‖f(T)‖ / sup_{∂Ω} ‖f‖` over `f` spanned by the
/// pole basis, giving a lower bound for the spectral constant at size `s`.
pub fn k_lower_bound(
    t: &ComplexMatrix,
    dom: &Domain,
    poles: &[ExtComplex],
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    cfg.validate()?;
    let report = pole_set_report(poles, dom);
    if !report.valid {
        return Err(Error::InvalidArgument(format!(
            "invalid pole set: inside the domain {:?}, uncovered components {:?}",
            report.inside, report.uncovered
        )));
    }
    check_spectrum_inside(t, dom)?;
    let basis = search_basis(poles, cfg.degree);
    let at_t = basis.iter().map(|f| eval_on_matrix(f, t)).collect::<Result<Vec<_>>>()?;
    let grid = dom.boundary_grid(cfg.grid)?;
    let on_grid = grid
        .iter()
        .map(|&z| basis.iter().map(|f| f.eval(z)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let s = cfg.s;
    let obj = Objective { basis, at_t, on_grid, s, n: t.dim() };
    let dim = obj.basis.len() * s * s;

    // each basis function alone, with identity coefficients when s > 1
    let mut best_x: Vec<C64> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for b in 0..obj.basis.len() {
        let mut x = vec![C64::new(0.0, 0.0); dim];
        for k in 0..s {
            x[b * s * s + k * s + k] = C64::new(1.0, 0.0);
        }
        let v = obj.ratio(&x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let mut trace = vec![best];

    let results: Vec<(Vec<C64>, f64)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(idx as u64);
            let x: Vec<C64> = (0..dim)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            refine(&obj, x, cfg.refine_steps)
        })
        .collect();
    let mut restart_best = Vec::with_capacity(results.len());
    for (x, v) in results {
        restart_best.push(v);
        if v > best {
            best = v;
            best_x = x;
        }
        trace.push(best);
    }
    // polish the winner, so probes also get refined
    let (x, v) = refine(&obj, best_x.clone(), cfg.refine_steps);
    if v > best {
        best = v;
        best_x = x;
    }
    trace.push(best);

    let sup = obj.boundary_sup(&best_x);
    let normalized: Vec<C64> = best_x.iter().map(|c| c / sup).collect();
    let function = obj.to_function(&normalized)?;
    let boundary_sup = obj.boundary_sup(&normalized);
    Ok(SearchResult {
        k_lower: best,
        s,
        function,
        boundary_sup,
        trace,
        restart_best,
        config: cfg.clone(),
    })
}

/// Routes each pole's terms to the part whose closed domain excludes the
/// pole, preferring `f1`. The constant goes to `f1`.
pub fn split_by_poles(
    f: &ScalarRational,
    omega1: &Domain,
    omega2: &Domain,
) -> Result<(ScalarRational, ScalarRational)> {
    let mut first: Vec<PoleTerm> = Vec::new();
    let mut second: Vec<PoleTerm> = Vec::new();
    for term in f.terms() {
        let tol1 = SPLIT_TOL * omega1.scale();
        let tol2 = SPLIT_TOL * omega2.scale();
        if !omega1.contains_closure(term.pole, tol1) {
            first.push(*term);
        } else if !omega2.contains_closure(term.pole, tol2) {
            second.push(*term);
        } else {
            return Err(Error::PoleEnclosed { pole: term.pole.to_string() });
        }
    }
    Ok((
        ScalarRational::from_terms(f.constant_term(), first)?,
        ScalarRational::from_terms(C64::new(0.0, 0.0), second)?,
    ))
}

/// `‖f(T) - f_1(T) - f_2(T)‖` for the split of `f`.
pub fn verify_split_calculus(
    f: &ScalarRational,
    t: &ComplexMatrix,
    omega1: &Domain,
    omega2: &Domain,
) -> Result<f64> {
    let (f1, f2) = split_by_poles(f, omega1, omega2)?;
    let whole = eval_on_matrix(f, t)?;
    let parts = &eval_on_matrix(&f1, t)? + &eval_on_matrix(&f2, t)?;
    (&whole - &parts).opnorm()
}

/// `(1 - ε)(T - a) + a`.
pub fn shrink_operator(t: &ComplexMatrix, a: C64, eps: f64) -> Result<ComplexMatrix> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("ε = {eps} outside [0, 1)")));
    }
    Ok(t.shift(-a).scale(C64::new(1.0 - eps, 0.0)).shift(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeneralizedDisk;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn disk() -> Domain {
        Domain::unit_disk()
    }

    fn nil(a: f64) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, a], &[0.0, 0.0]]).unwrap()
    }

    fn scalar(f: ScalarRational) -> MatrixRational {
        MatrixRational::scalar(f)
    }

    #[test]
    fn boundary_sup_examples() {
        assert!((sup_boundary(&scalar(ScalarRational::z()), &disk(), 64).unwrap() - 1.0).abs() < 1e-15);
        let p2 = ScalarRational::p(ExtComplex::from(2.0));
        assert!((sup_boundary(&scalar(p2), &disk(), 64).unwrap() - 1.0).abs() < 1e-15);
        let inside = ScalarRational::p(ExtComplex::from(0.5));
        assert!(matches!(sup_boundary(&scalar(inside), &disk(), 64), Err(Error::PoleEnclosed { .. })));
    }

    #[test]
    fn ratio_examples() {
        let z = scalar(ScalarRational::z());
        assert!((vn_ratio(&z, &nil(5.0), &disk(), 64).unwrap() - 5.0).abs() < 1e-12);
        assert!(vn_ratio(&z, &nil(0.7), &disk(), 64).unwrap() <= 1.0);
        let k = scalar(ScalarRational::constant(c(2.0, 1.0)));
        assert!((vn_ratio(&k, &nil(9.0), &disk(), 64).unwrap() - 1.0).abs() < 1e-12);
        assert!(vn_ratio(&scalar(ScalarRational::zero()), &nil(0.5), &disk(), 64).is_err());
    }

    #[test]
    fn mascioni_lower_bound() {
        let cfg = SearchConfig { restarts: 2, ..SearchConfig::default() };
        let r = k_lower_bound(&nil(4.0), &disk(), &[ExtComplex::Infinity], &cfg).unwrap();
        assert!(r.k_lower >= 4.0 - 1e-6, "{}", r.k_lower);
        assert!(r.trace.windows(2).all(|w| w[1] >= w[0]));
        assert!((r.boundary_sup - 1.0).abs() < 1e-9);
        let again = k_lower_bound(&nil(4.0), &disk(), &[ExtComplex::Infinity], &cfg).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn matrix_valued_search_runs() {
        let cfg = SearchConfig { s: 2, restarts: 1, degree: 1, grid: 64, refine_steps: 1, seed: 3 };
        let r = k_lower_bound(&nil(2.0), &disk(), &[ExtComplex::Infinity], &cfg).unwrap();
        assert!(r.k_lower >= 2.0 - 1e-9 && r.function.size() == 2);
        assert!(k_lower_bound(&nil(2.0), &disk(), &[ExtComplex::from(0.0)], &cfg).is_err());
    }

    #[test]
    fn split_examples() {
        let f = ScalarRational::from_factored(
            &crate::matcalc::Polynomial::constant(c(1.0, 0.0)),
            &[(c(2.0, 0.0), 1), (c(-2.0, 0.0), 1)],
        )
        .unwrap();
        let o1 = Domain::Disks(vec![GeneralizedDisk::half_plane(c(1.0, 0.0), c(-1.0, 0.0)).unwrap()]);
        let o2 = Domain::Disks(vec![GeneralizedDisk::half_plane(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()]);
        let (f1, f2) = split_by_poles(&f, &o1, &o2).unwrap();
        let z = c(0.3, 0.7);
        assert!((f1.eval(z).unwrap() - 0.25 / (z - 2.0)).norm() < 1e-14);
        assert!((f2.eval(z).unwrap() + 0.25 / (z + 2.0)).norm() < 1e-14);
        let t = ComplexMatrix::diagonal(&[c(0.0, 0.0), c(0.0, 1.0)]);
        assert!(verify_split_calculus(&f, &t, &o1, &o2).unwrap() <= 1e-12);
        let (g1, g2) = split_by_poles(&f1, &o1, &o2).unwrap();
        assert_eq!((g1, g2.is_constant() && g2.constant_term() == c(0.0, 0.0)), (f1, true));
        let k = ScalarRational::constant(c(3.0, 0.0));
        let (k1, k2) = split_by_poles(&k, &o1, &o2).unwrap();
        assert_eq!(k1, k);
        assert_eq!(k2, ScalarRational::zero());
        assert_eq!(verify_split_calculus(&k, &t, &o1, &o2).unwrap(), 0.0);
        let both = ScalarRational::p(ExtComplex::from(0.0));
        assert!(split_by_poles(&both, &o1, &o2).is_err());
    }

    #[test]
    fn shrink_examples() {
        let t = nil(3.0);
        assert_eq!(shrink_operator(&t, c(0.2, 0.0), 0.0).unwrap().max_abs_diff(&t), 0.0);
        let id = ComplexMatrix::identity(2);
        let s = shrink_operator(&id, c(0.0, 0.0), 0.5).unwrap();
        assert!(s.max_abs_diff(&id.scale(c(0.5, 0.0))) < 1e-15);
        assert!(shrink_operator(&id, c(0.0, 0.0), 1.0).is_err());
    }
}
