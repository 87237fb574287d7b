//! Explicit examples and counterexamples, each with the numerical claims it
//! witnesses evaluated at construction.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blaschke::{blaschke_on_matrix, BlaschkeProduct};
use crate::classify::is_good_disk;
use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use crate::geometry::{
    canonical_map_to_unit_disk, pole_set_valid, BoundaryPiece, Domain, GeneralizedDisk,
};
use crate::ksearch::vn_ratio;
use crate::matcalc::{eval_on_matrix, ComplexMatrix, MatrixRational, ScalarRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

/// `measured ≤ threshold` or `measured ≥ threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub statement: String,
    pub measured: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: bool,
}

impl Claim {
    fn new(statement: impl Into<String>, measured: f64, relation: Relation, threshold: f64) -> Self {
        let passed = match relation {
            Relation::AtMost => measured <= threshold,
            Relation::AtLeast => measured >= threshold,
        };
        Self { statement: statement.into(), measured, relation, threshold, passed }
    }

    fn at_most(statement: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(statement, measured, Relation::AtMost, threshold)
    }

    fn at_least(statement: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(statement, measured, Relation::AtLeast, threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryItem {
    pub name: String,
    pub parameters: Value,
    pub operators: Vec<ComplexMatrix>,
    pub functions: Vec<ScalarRational>,
    pub claims: Vec<Claim>,
}

impl GalleryItem {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn claim(&self, needle: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.statement.contains(needle))
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn nilpotent(n: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, n], &[0.0, 0.0]]).expect("2x2")
}

/// `T_n = [[0, n], [0, 0]]` with `φ(z) = z²`: `φ(T_n) = 0` while the von
/// Neumann ratio of `z` is `n`.
pub fn mascioni_pair(n: f64) -> Result<GalleryItem> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidArgument(format!("n must be positive, got {n}")));
    }
    let t = nilpotent(n);
    let phi = BlaschkeProduct::power(2);
    let z = MatrixRational::scalar(ScalarRational::z());
    let ratio = vn_ratio(&z, &t, &Domain::unit_disk(), 256)?;
    let claims = vec![
        Claim::at_most("‖φ(T_n)‖ = 0 for φ(z) = z²", blaschke_on_matrix(&phi, &t)?.opnorm()?, 1e-12),
        Claim::at_most("|vn_ratio(z, T_n, 𝔻) - n|", (ratio - n).abs(), 1e-9 * n.max(1.0)),
        Claim::at_most("|‖T_n‖ - n|", (t.opnorm()? - n).abs(), 1e-12 * n.max(1.0)),
    ];
    Ok(GalleryItem {
        name: "mascioni_pair".into(),
        parameters: json!({ "n": n }),
        operators: vec![t],
        functions: vec![phi.to_rational()?],
        claims,
    })
}

/// `T = z0 I + N` with `N = ν ν⊥*` nilpotent, and `T_n = n(T - z0) + z0`.
/// Every `f` with `f'(z0) = 0` gives `f(T_n) = f(z0) I`.
pub fn derivative_zero_family(z0: C64, n: f64, nu: [C64; 2]) -> Result<GalleryItem> {
    if !(z0.norm() <= 10.0) {
        return Err(Error::InvalidArgument(format!("|z0| = {} exceeds 10", z0.norm())));
    }
    if !(n >= 1.0 && n.is_finite()) {
        return Err(Error::InvalidArgument(format!("n must be ≥ 1, got {n}")));
    }
    let len = (nu[0].norm_sqr() + nu[1].norm_sqr()).sqrt();
    if !(len > 0.0) {
        return Err(Error::InvalidArgument("direction ν must be nonzero".into()));
    }
    let perp = [-nu[1].conj(), nu[0].conj()];
    let nmat = ComplexMatrix::from_rows(&[
        vec![nu[0] * perp[0].conj(), nu[0] * perp[1].conj()],
        vec![nu[1] * perp[0].conj(), nu[1] * perp[1].conj()],
    ])?;
    let id = ComplexMatrix::identity(2);
    let t = &id.scale(z0) + &nmat;
    let tn = &id.scale(z0) + &nmat.scale(c(n, 0.0));
    let d = tn.shift(-z0);

    let square = ScalarRational::polynomial(&[z0 * z0, -2.0 * z0, c(1.0, 0.0)]);
    let mut functions = vec![square.clone()];
    let mut claims = vec![
        Claim::at_most("‖(T - z0)²‖ = 0", (&t.shift(-z0) * &t.shift(-z0)).opnorm()?, 1e-12 * len.powi(4)),
        Claim::at_most("‖(z - z0)²(T_n)‖ = 0", eval_on_matrix(&square, &tn)?.opnorm()?, 1e-10 * (n * len).powi(2)),
        Claim::at_most(
            "|‖T_n - z0‖ - n‖N‖|",
            (d.opnorm()? - n * nmat.opnorm()?).abs(),
            1e-12 * n * len * len,
        ),
    ];
    if (z0.norm() - 1.0).abs() > 1e-6 {
        let phi = crit_square(z0)?;
        let value = phi.eval(z0)?;
        let resid = (&eval_on_matrix(&phi, &tn)? - &id.scale(value)).opnorm()?;
        claims.push(Claim::at_most("‖φ(T_n) - φ(z0) I‖ for φ = ((z - z0)/(1 - z̄0 z))²", resid, 1e-10 * n.max(1.0)));
        functions.push(phi);
    }
    // a function with f'(z0) ≠ 0 follows f(z0) I + n f'(z0) N
    let lambda = z0 + 3.0;
    let p = ScalarRational::p(ExtComplex::Finite(lambda));
    let expected = &id.scale(p.eval(z0)?) + &nmat.scale(c(n, 0.0) * p.derivative().eval(z0)?);
    claims.push(Claim::at_most(
        "‖f(T_n) - f(z0) I - n f'(z0) N‖ for f = 1/(z - z0 - 3)",
        (&eval_on_matrix(&p, &tn)? - &expected).opnorm()?,
        1e-10 * n.max(1.0),
    ));
    functions.push(p);
    Ok(GalleryItem {
        name: "derivative_zero_family".into(),
        parameters: json!({ "z0": z0, "n": n, "nu": nu }),
        operators: vec![t, tn],
        functions,
        claims,
    })
}

/// `((z - z0)/(1 - z̄0 z))²`.
fn crit_square(z0: C64) -> Result<ScalarRational> {
    let b = BlaschkeProduct { theta: 0.0, zeros: vec![z0, z0], normalization: Default::default() };
    if z0.norm() < 1.0 {
        b.to_rational()
    } else {
        // the same formula, outside the Blaschke range
        let num = crate::matcalc::Polynomial::from_roots(&[z0, z0]);
        let scale = 1.0 / (z0.conj() * z0.conj());
        let num = crate::matcalc::Polynomial::new(num.coeffs().iter().map(|a| a * scale).collect());
        ScalarRational::from_factored(&num, &[(1.0 / z0.conj(), 2)])
    }
}

/// Upper-triangular `T` with eigenvalues `z1, z2` and eigenvectors `(1, 0)`
/// and `(cos a, sin a)`.
pub fn eigenvector_angle_example(z1: C64, z2: C64, angle: f64) -> Result<GalleryItem> {
    if (z1 - z2).norm() == 0.0 {
        return Err(Error::InvalidArgument("eigenvalues must differ".into()));
    }
    if !(angle > 0.0 && angle <= FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!("angle {angle} outside (0, π/2]")));
    }
    let v = ComplexMatrix::from_real_rows(&[&[1.0, angle.cos()], &[0.0, angle.sin()]])?;
    let t = &(&v * &ComplexMatrix::diagonal(&[z1, z2])) * &v.inverse()?;
    let mut eig = t.eigenvalues()?;
    eig.sort_by(|a, b| (a - z1).norm().total_cmp(&(b - z1).norm()));
    let spec_err = (eig[0] - z1).norm().max((eig[1] - z2).norm());
    let bound = (z1 - z2).norm() / (2.0 * angle.tan());
    let norm = t.opnorm()?;
    let mut claims = vec![
        Claim::at_most("σ(T) = {z1, z2}", spec_err, 1e-10 * (1.0 + norm)),
        Claim::at_least("‖T‖ - |z1 - z2|/(2 tan angle)", norm - bound, -1e-12 * norm),
    ];
    if angle == FRAC_PI_2 {
        claims.push(Claim::at_most("|‖T‖ - max(|z1|, |z2|)|", (norm - z1.norm().max(z2.norm())).abs(), 1e-12));
    }
    Ok(GalleryItem {
        name: "eigenvector_angle_example".into(),
        parameters: json!({ "z1": z1, "z2": z2, "angle": angle }),
        operators: vec![t],
        functions: vec![],
        claims,
    })
}

/// The region, center, rotations and functions of the three-disk example.
#[derive(Debug, Clone)]
pub struct ThreeDisk {
    pub vertices: [C64; 3],
    pub z0: C64,
    pub domain: Domain,
    /// `η_k(z) = z0 + rotation_k (z - z0)`.
    pub rotations: [C64; 3],
    pub phis: [ScalarRational; 3],
}

impl ThreeDisk {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 0.1) {
            return Err(Error::InvalidArgument(format!("ε = {eps} outside (0, 0.1]")));
        }
        let vertices = [c(0.0, 0.0), c(eps, 0.0), c(eps / 2.0, 3f64.sqrt() * eps / 2.0)];
        let z0 = (vertices[0] + vertices[1] + vertices[2]) / 3.0;
        let disks = vertices.iter().map(|&v| GeneralizedDisk::closed(v, 1.0)).collect::<Result<Vec<_>>>()?;
        let domain = Domain::intersection(disks)?;
        // η_k is the rotation about z0 taking z_k to z_1
        let rotations = vertices.map(|v| (vertices[0] - z0) / (v - z0));
        let phi1 = crit_square(z0)?;
        let phis = [
            phi1.clone(),
            phi1.compose_affine(rotations[1], z0 * (1.0 - rotations[1]))?,
            phi1.compose_affine(rotations[2], z0 * (1.0 - rotations[2]))?,
        ];
        Ok(Self { vertices, z0, domain, rotations, phis })
    }

    pub fn eta(&self, k: usize, z: C64) -> C64 {
        self.z0 + self.rotations[k] * (z - self.z0)
    }

    /// `φ_k` evaluated from its product formula, avoiding the cancellation
    /// of the pole-residue form.
    pub fn phi_direct(&self, k: usize, z: C64) -> C64 {
        let w = self.eta(k, z);
        let m = (w - self.z0) / (1.0 - self.z0.conj() * w);
        m * m
    }

    /// `φ_k'` from the product formula.
    pub fn dphi_direct(&self, k: usize, z: C64) -> C64 {
        let w = self.eta(k, z);
        let den = 1.0 - self.z0.conj() * w;
        let m = (w - self.z0) / den;
        2.0 * m * (1.0 - self.z0.norm_sqr()) / (den * den) * self.rotations[k]
    }

    /// Boundary pieces of `J_k`, the part of `∂Ω` on the circle about `z_k`.
    pub fn arc_pieces(&self, k: usize) -> Result<Vec<BoundaryPiece>> {
        let pw = self.domain.to_piecewise()?;
        Ok(pw
            .pieces()
            .iter()
            .filter(|p| matches!(p, BoundaryPiece::Arc(a) if (a.center - self.vertices[k]).norm() < 1e-12))
            .copied()
            .collect())
    }

    /// `n` points of `J_k` at interior parameters `margin..1-margin`.
    pub fn arc_samples(&self, k: usize, n: usize, margin: f64) -> Result<Vec<C64>> {
        let pieces = self.arc_pieces(k)?;
        let per = n.div_ceil(pieces.len().max(1));
        let mut out = Vec::new();
        for p in &pieces {
            for i in 0..per {
                let s = margin + (1.0 - 2.0 * margin) * (i as f64 + 0.5) / per as f64;
                out.push(p.point_at(s));
            }
        }
        out.truncate(n);
        Ok(out)
    }
}

/// `Ω = D_1 ∩ D_2 ∩ D_3` for unit disks about an equilateral triangle of side
/// `ε`, with `φ_1 = ((z - z0)/(1 - z̄0 z))²` and `φ_k = φ_1 ∘ η_k`.
pub fn three_disk_admissible(eps: f64) -> Result<GalleryItem> {
    let td = ThreeDisk::new(eps)?;
    let pw = td.domain.to_piecewise()?;
    let interior: Vec<C64> = pw
        .boundary_grid(96)
        .into_iter()
        .flat_map(|b| [0.25, 0.5, 0.75, 0.95].map(|s| td.z0 + (b - td.z0) * s))
        .chain(std::iter::once(td.z0))
        .collect();
    let mut claims = Vec::new();
    let fold_max = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
    for k in 0..3 {
        let on_arc = td.arc_samples(k, 64, 0.0)?;
        let formula_gap = on_arc
            .iter()
            .chain(&interior)
            .map(|&z| td.phis[k].eval(z).map(|v| (v - td.phi_direct(k, z)).norm()))
            .collect::<Result<Vec<_>>>()?;
        claims.push(Claim::at_most(
            format!("rational form of φ_{} matches its product formula", k + 1),
            fold_max(formula_gap),
            1e-9,
        ));
        let modulus_err = on_arc.iter().map(|&z| (td.phi_direct(k, z).norm() - 1.0).abs()).collect();
        claims.push(Claim::at_most(format!("max ||φ_{}| - 1| on J_{}", k + 1, k + 1), fold_max(modulus_err), 1e-10));
        let h = 1e-4;
        let fd = (td.phi_direct(k, td.z0 + h) - td.phi_direct(k, td.z0 - h)) / (2.0 * h);
        claims.push(Claim::at_most(format!("|φ_{}'(z0)| by central differences", k + 1), fd.norm(), 1e-8));
        let inner = interior.iter().map(|&z| td.phi_direct(k, z).norm()).collect();
        claims.push(Claim::at_most(format!("max |φ_{}| on interior samples (< 1)", k + 1), fold_max(inner), 1.0 - 1e-12));
        let away = td
            .arc_samples(k, 64, 0.05)?
            .iter()
            .map(|&z| td.dphi_direct(k, z).norm())
            .fold(f64::INFINITY, f64::min);
        claims.push(Claim::at_least(format!("min |φ_{}'| on J_{} away from corners", k + 1, k + 1), away, 1e-3));
        claims.push(Claim::at_most(format!("|η_{}(z0) - z0|", k + 1), (td.eta(k, td.z0) - td.z0).norm(), 1e-12));
        // each arc falls short of 2π/3 by about ε
        let length: f64 = td.arc_pieces(k)?.iter().map(|p| p.length()).sum();
        claims.push(Claim::at_most(format!("|length(J_{}) - 2π/3|", k + 1), (length - TAU / 3.0).abs(), 2.0 * eps));
    }
    Ok(GalleryItem {
        name: "three_disk_admissible".into(),
        parameters: json!({
            "epsilon": eps,
            "vertices": td.vertices,
            "z0": td.z0,
            "rotations": td.rotations.map(|r| r.arg()),
        }),
        operators: vec![],
        functions: td.phis.to_vec(),
        claims,
    })
}

/// Outer disk `|z| ≤ r0` with circular holes removed, the canonical maps
/// `φ_0 = z/r0` and `φ_k = r_k/(z - c_k)`, and a normal test operator.
pub fn douglas_paulsen_domain(r0: f64, holes: &[(C64, f64)]) -> Result<GalleryItem> {
    let outer = GeneralizedDisk::closed(c(0.0, 0.0), r0)?;
    for (i, &(ci, ri)) in holes.iter().enumerate() {
        if !(ci.norm() + ri < r0) {
            return Err(Error::InvalidArgument(format!("hole {i} is not strictly inside the outer circle")));
        }
        for (j, &(cj, rj)) in holes[..i].iter().enumerate() {
            if !((ci - cj).norm() > ri + rj) {
                return Err(Error::InvalidArgument(format!("holes {j} and {i} overlap")));
            }
        }
    }
    let mut disks = vec![outer];
    for &(ci, ri) in holes {
        disks.push(GeneralizedDisk::exterior(ci, ri)?);
    }
    let domain = Domain::intersection(disks.clone())?;
    let maps: Vec<ScalarRational> = disks.iter().map(|d| canonical_map_to_unit_disk(d).to_rational()).collect();

    let pw = domain.to_piecewise()?;
    let mut samples = pw.boundary_grid(256);
    for k in 1..=24 {
        for j in 0..48 {
            let z = C64::from_polar(r0 * k as f64 / 25.0, TAU * j as f64 / 48.0);
            if domain.contains_interior(ExtComplex::Finite(z), 1e-9) {
                samples.push(z);
            }
        }
    }
    let sup = maps
        .iter()
        .map(|f| {
            samples.iter().map(|&z| f.eval(z).map(|v| v.norm())).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .fold(0.0, f64::max);

    // diagonal test operator: interior samples near the outer circle
    let spectrum: Vec<C64> = (0..6)
        .map(|j| C64::from_polar(0.7 * r0 + 0.3 * max_hole_reach(holes, r0), TAU * j as f64 / 6.0 + 0.1))
        .filter(|z| domain.contains_interior(ExtComplex::Finite(*z), 1e-9))
        .collect();
    let t = ComplexMatrix::diagonal(&spectrum);
    let good = disks
        .iter()
        .map(|d| is_good_disk(&t, d, 1e-9).map(|r| r.margin))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let contraction = maps
        .iter()
        .map(|f| eval_on_matrix(f, &t)?.opnorm())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut poles: Vec<ExtComplex> = holes.iter().map(|h| ExtComplex::Finite(h.0)).collect();
    poles.push(ExtComplex::Infinity);

    let claims = vec![
        Claim::at_most("max |φ_k| on sampled closure", sup, 1.0 + 1e-12),
        Claim::at_least("min good-disk margin of T over all X_k", good, -1e-9),
        Claim::at_most("max ‖φ_k(T)‖", contraction, 1.0 + 1e-9),
        Claim::at_least(
            "pole set {hole centers, ∞} valid",
            if pole_set_valid(&poles, &domain) { 1.0 } else { 0.0 },
            1.0,
        ),
    ];
    Ok(GalleryItem {
        name: "douglas_paulsen_domain".into(),
        parameters: json!({ "r0": r0, "holes": holes, "test_spectrum": spectrum }),
        operators: vec![t],
        functions: maps,
        claims,
    })
}

/// A modulus between the holes and the outer circle, capped below `r0`.
fn max_hole_reach(holes: &[(C64, f64)], r0: f64) -> f64 {
    holes.iter().map(|(c, r)| c.norm() + r).fold(0.0, f64::max).min(r0) * 0.999 + 0.001 * r0
}

pub const ITEMS: [&str; 7] = [
    "mascioni_pair",
    "derivative_zero_family",
    "eigenvector_angle_example",
    "three_disk_admissible",
    "annulus",
    "three_holes",
    "three_disk_critical_point",
];

pub fn list() -> &'static [&'static str] {
    &ITEMS
}

/// Builds a named item with its default parameters.
pub fn run(name: &str) -> Result<GalleryItem> {
    match name {
        "mascioni_pair" => mascioni_pair(7.0),
        "derivative_zero_family" => derivative_zero_family(c(0.3, -0.2), 10.0, [c(1.0, 0.0), c(0.5, 0.5)]),
        "eigenvector_angle_example" => eigenvector_angle_example(c(0.0, 0.0), c(1.0, 0.0), 0.01),
        "three_disk_admissible" => three_disk_admissible(0.05),
        "annulus" => douglas_paulsen_domain(1.0, &[(c(0.0, 0.0), 0.5)]).map(|mut g| {
            g.name = "annulus".into();
            g
        }),
        "three_holes" => douglas_paulsen_domain(
            1.0,
            &[(c(0.5, 0.0), 0.15), (C64::from_polar(0.5, TAU / 3.0), 0.15), (C64::from_polar(0.5, -TAU / 3.0), 0.15)],
        )
        .map(|mut g| {
            g.name = "three_holes".into();
            g
        }),
        "three_disk_critical_point" => {
            let td = ThreeDisk::new(0.05)?;
            let mut g = derivative_zero_family(td.z0, 50.0, [c(0.0, 1.0), c(1.0, 0.0)])?;
            g.name = "three_disk_critical_point".into();
            Ok(g)
        }
        _ => Err(Error::InvalidArgument(format!(
            "unknown gallery item {name:?}; known: {}",
            ITEMS.join(", ")
        ))),
    }
}

/// All items, in list order.
pub fn run_all() -> Result<Vec<GalleryItem>> {
    ITEMS.iter().map(|n| run(n)).collect()
}
