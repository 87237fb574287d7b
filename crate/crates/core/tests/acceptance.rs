//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

mod common;

use std::f64::consts::{PI, SQRT_2, TAU};
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DVector;
use rand::Rng;
use serde_json::{json, Value};

use common::*;
use specset::blaschke::{blaschke_on_matrix, defect_identity_residual, kernel_identity_residual, similarity_transform, BlaschkeProduct};
use specset::classify::{
    is_good_disk, is_rho_contraction_disks, is_rho_contraction_poisson, numerical_radius,
    numerical_range_boundary, theorem2_hypotheses, RhoGrid,
};
use specset::gallery::ThreeDisk;
use specset::geometry::{mobius_image, Domain, GeneralizedDisk, MobiusMap};
use specset::ksearch::{k_lower_bound, shrink_operator, split_by_poles, verify_split_calculus, vn_ratio, SearchConfig};
use specset::matcalc::{
    eval_on_matrix, eval_on_matrix_cauchy, ComplexMatrix, Contour, MatrixRational, PoleTerm, Polynomial,
    ScalarRational, C64,
};
use specset::{Error, ExtComplex};

const MASTER_SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    summary: String,
    /// Measured values, compared verbatim by the determinism criterion.
    record: Value,
}

type Criterion = fn(u64) -> Outcome;

fn fmax(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn c1_mascioni(_: u64) -> Outcome {
    let mut k = Vec::new();
    let mut b = Vec::new();
    let cfg = SearchConfig { degree: 3, seed: 0, ..SearchConfig::default() };
    for n in [2.0, 4.0, 8.0] {
        let t = ComplexMatrix::from_real_rows(&[&[0.0, n], &[0.0, 0.0]]).unwrap();
        let res = k_lower_bound(&t, &Domain::unit_disk(), &[ExtComplex::Infinity], &cfg).unwrap();
        k.push(res.k_lower);
        b.push(blaschke_on_matrix(&BlaschkeProduct::power(2), &t).unwrap().opnorm().unwrap());
    }
    let pass = k.iter().zip([2.0, 4.0, 8.0]).all(|(k, n)| *k >= n - 1e-6) && b.iter().all(|x| *x <= 1e-12);
    Outcome {
        pass,
        summary: format!("Mascioni bound: K_lower = {k:?} for n = 2, 4, 8; ‖B(T_n)‖ ≤ {:.1e}", fmax(b.clone())),
        record: json!({ "k": k, "b": b }),
    }
}

fn c2_defect(seed: u64) -> Outcome {
    let mut r = rng(seed, 2);
    let (mut worst_res, mut worst_norm, mut applied) = (0.0f64, f64::NEG_INFINITY, 0usize);
    let mut record = Vec::new();
    let mut failures = 0;
    for i in 0..100 {
        let b = random_blaschke(&mut r, 6, 0.9);
        let n = r.random_range(1..=8);
        let t = if i % 2 == 0 {
            contraction(&mut r, n, 0.3)
        } else {
            // eigenvalues among the zeros: B(T) = 0 while T is far from a contraction
            let eig: Vec<C64> = (0..n).map(|_| b.zeros[r.random_range(0..b.zeros.len())]).collect();
            let v = &ComplexMatrix::identity(n) + &gaussian(&mut r, n).scale(c(0.4, 0.0));
            &(&v * &ComplexMatrix::diagonal(&eig)) * &v.inverse().unwrap()
        };
        let mut h = DVector::from_fn(n, |_, _| cnormal(&mut r));
        h /= C64::new(h.norm(), 0.0);
        let res = defect_identity_residual(&b, &t, &h).unwrap();
        worst_res = worst_res.max(res);
        let norm = match similarity_transform(&b, &t) {
            Ok(sim) => {
                applied += 1;
                worst_norm = worst_norm.max(sim.contraction_norm);
                if sim.contraction_norm > 1.0 + 1e-8 {
                    failures += 1;
                }
                sim.contraction_norm
            }
            Err(Error::Precondition(_)) => f64::NAN,
            Err(e) => panic!("case {i}: {e}"),
        };
        if res > 1e-10 {
            failures += 1;
        }
        record.push(json!([res, norm]));
    }
    Outcome {
        pass: failures == 0 && applied > 0,
        summary: format!(
            "defect identity: max residual {worst_res:.1e} over 100 cases; max ‖STS⁻¹‖ = {worst_norm:.9} over {applied} cases with ‖B(T)‖ ≤ 1"
        ),
        record: json!(record),
    }
}

fn c3_kernel(seed: u64) -> Outcome {
    let mut r = rng(seed, 3);
    let mut worst = 0.0f64;
    let mut record = Vec::new();
    for _ in 0..20 {
        let b = random_blaschke(&mut r, 6, 0.9);
        let mut m = 0.0f64;
        for _ in 0..500 {
            let (z, w) = (in_disk(&mut r, 1.05), in_disk(&mut r, 1.05));
            m = m.max(kernel_identity_residual(&b, z, w).unwrap());
        }
        worst = worst.max(m);
        record.push(m);
    }
    Outcome {
        pass: worst <= 1e-10,
        summary: format!("reproducing kernel: max residual {worst:.1e} over 20 products × 500 pairs"),
        record: json!(record),
    }
}

/// A generalized disk near the goodness threshold for `t`.
fn threshold_disk(r: &mut impl Rng, t: &ComplexMatrix) -> GeneralizedDisk {
    let n = t.dim();
    let u = r.random_range(0.7..1.3);
    match r.random_range(0..3) {
        0 => {
            let center = cnormal(r) * 0.5;
            GeneralizedDisk::closed(center, u * t.shift(-center).opnorm().unwrap()).unwrap()
        }
        1 => loop {
            let center = cnormal(r) * 2.0;
            let smin = t.shift(-center).min_singular_value();
            if smin > 1e-2 {
                break GeneralizedDisk::exterior(center, u * smin).unwrap();
            }
        },
        _ => {
            let dir = C64::from_polar(1.0, r.random_range(0.0..TAU));
            let m = t.scale(dir).hermitian_part().min_hermitian_eigenvalue();
            let shift = r.random_range(-0.3..0.3) * (1.0 + t.opnorm().unwrap()) / n as f64;
            GeneralizedDisk::half_plane((m + shift) / dir, dir).unwrap()
        }
    }
}

/// A generalized disk containing `d`.
fn superset(r: &mut impl Rng, d: &GeneralizedDisk) -> GeneralizedDisk {
    let s = r.random_range(0.0..0.5);
    let dir = C64::from_polar(1.0, r.random_range(0.0..TAU));
    match *d {
        GeneralizedDisk::Closed { center, radius } => match r.random_range(0..3) {
            0 => {
                let delta = r.random_range(0.0..0.5);
                GeneralizedDisk::closed(center + dir * delta, radius + delta + s).unwrap()
            }
            1 => GeneralizedDisk::half_plane(center - (radius + s) / dir, dir).unwrap(),
            _ => {
                let rho = r.random_range(0.1..2.0);
                GeneralizedDisk::exterior(center + dir * (radius + rho + s), rho).unwrap()
            }
        },
        GeneralizedDisk::Exterior { center, radius } => {
            let delta = r.random_range(0.0..0.4) * radius;
            let rho = (radius - delta) * r.random_range(0.2..1.0);
            GeneralizedDisk::exterior(center + dir * delta, rho).unwrap()
        }
        GeneralizedDisk::HalfPlane { anchor, direction } => {
            if r.random::<bool>() {
                GeneralizedDisk::half_plane(anchor - s / direction, direction).unwrap()
            } else {
                let rho = r.random_range(0.1..2.0);
                GeneralizedDisk::exterior(anchor - (rho + s) / direction, rho).unwrap()
            }
        }
    }
}

fn c4_good_disks(seed: u64) -> Outcome {
    let mut r = rng(seed, 4);
    let (mut compared, mut disagree) = (0usize, 0usize);
    let mut record = Vec::new();
    while record.len() < 200 {
        let n = r.random_range(1..=4);
        let t = gaussian(&mut r, n);
        let d = threshold_disk(&mut r, &t);
        let psi = MobiusMap::new(cnormal(&mut r), cnormal(&mut r), cnormal(&mut r), cnormal(&mut r)).unwrap();
        let pole_clear = match psi.pole() {
            ExtComplex::Finite(p) => t.spectral_distance(p).unwrap() > 0.2,
            ExtComplex::Infinity => true,
        };
        if !pole_clear {
            continue;
        }
        let (Ok(img), Ok(pt)) = (mobius_image(&psi, &d), psi.apply_matrix(&t)) else { continue };
        let a = is_good_disk(&t, &d, 1e-12).unwrap();
        let b = is_good_disk(&pt, &img, 1e-12).unwrap();
        if a.margin.abs() >= 1e-3 && b.margin.abs() >= 1e-3 {
            compared += 1;
            if a.holds() != b.holds() {
                disagree += 1;
            }
        }
        record.push(json!([a.margin, b.margin]));
    }
    let (mut mono_compared, mut mono_fail, mut mono_good) = (0usize, 0usize, 0usize);
    let mut mono = Vec::new();
    while mono.len() < 200 {
        let n = r.random_range(1..=4);
        let t = gaussian(&mut r, n);
        let d = threshold_disk(&mut r, &t);
        let big = superset(&mut r, &d);
        assert!(d.is_subset_of(&big, 1e-9), "{d:?} ⊄ {big:?}");
        let a = is_good_disk(&t, &d, 1e-12).unwrap();
        let b = is_good_disk(&t, &big, 1e-12).unwrap();
        if a.margin.abs() >= 1e-3 && b.margin.abs() >= 1e-3 {
            mono_compared += 1;
            mono_good += usize::from(a.holds());
            if a.holds() && !b.holds() {
                mono_fail += 1;
            }
        }
        mono.push(json!([a.margin, b.margin]));
    }
    Outcome {
        pass: disagree == 0 && mono_fail == 0 && compared >= 100 && mono_compared >= 100 && mono_good >= 50,
        summary: format!(
            "good disks: Möbius invariance {disagree} disagreements in {compared}/200 decided cases; monotonicity {mono_fail} violations in {mono_compared}/200 ({mono_good} with D good)"
        ),
        record: json!({ "mobius": record, "monotone": mono }),
    }
}

/// `min_{r,t} λmin(K_{r,t}) + ρ - 1` for `[[0, a], [0, 0]]`, computed from the
/// closed-form 2×2 inverse on a fine grid.
fn nilpotent_poisson_oracle(a: f64, rho: f64) -> f64 {
    let mut worst = f64::INFINITY;
    for k in 0..4096 {
        let radius = 1.0 - 10f64.powf(-9.0 * (k as f64 + 1.0) / 4096.0);
        for j in 0..64 {
            let w = C64::from_polar(radius, -TAU * j as f64 / 64.0);
            // (I - wT)^{-1} = [[1, wa], [0, 1]]
            let a12 = w * a;
            let min = hermitian2_min(1.0, a12, 1.0);
            worst = worst.min(min + rho - 1.0);
        }
    }
    worst
}

fn c5_rho_routes(seed: u64) -> Outcome {
    let mut r = rng(seed, 5);
    let grid = RhoGrid::default();
    let (mut compared, mut disagree) = (0usize, 0usize);
    let mut record = Vec::new();
    for _ in 0..50 {
        let n = r.random_range(1..=4);
        let eig: Vec<C64> = (0..n).map(|_| in_disk(&mut r, 0.95)).collect();
        let off = r.random_range(0.0..1.5);
        let t = triangular_model(&mut r, &eig, off);
        for rho in [1.5, 2.0, 3.0] {
            let p = is_rho_contraction_poisson(&t, rho, &grid, 1e-12).unwrap();
            let d = is_rho_contraction_disks(&t, rho, &grid, 1e-12).unwrap();
            if p.margin.abs() >= 1e-3 && d.margin.abs() >= 1e-3 {
                compared += 1;
                if p.holds() != d.holds() {
                    disagree += 1;
                }
            }
            record.push(json!([p.margin, d.margin]));
        }
    }
    let mut flips = Vec::new();
    let mut flip_ok = true;
    for rho in [1.5, 2.0, 3.0] {
        let (mut lo, mut hi) = (0.5 * rho, 2.0 * rho);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if nilpotent_poisson_oracle(mid, rho) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let threshold = 0.5 * (lo + hi);
        for (a, expect) in [(threshold - 0.05, true), (threshold + 0.05, false)] {
            let t = ComplexMatrix::from_real_rows(&[&[0.0, a], &[0.0, 0.0]]).unwrap();
            let p = is_rho_contraction_poisson(&t, rho, &grid, 1e-12).unwrap().holds();
            let d = is_rho_contraction_disks(&t, rho, &grid, 1e-12).unwrap().holds();
            flip_ok &= p == expect && d == expect;
        }
        flips.push(threshold);
    }
    Outcome {
        pass: disagree == 0 && flip_ok && compared > 0,
        summary: format!(
            "ρ routes: {disagree} disagreements in {compared}/150 decided cases; nilpotent thresholds {:?} for ρ = 1.5, 2, 3, verdicts flip: {flip_ok}",
            flips.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>()
        ),
        record: json!({ "margins": record, "thresholds": flips }),
    }
}

fn c6_numerical_range(_: u64) -> Outcome {
    let t = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
    let rep = is_rho_contraction_disks(&t, 2.0, &RhoGrid::default(), 1e-12).unwrap();
    let pts = numerical_range_boundary(&t, 256).unwrap();
    // support point of the unit disk in direction θ is e^{iθ}
    let exact: Vec<C64> = (0..256).map(|k| C64::from_polar(1.0, TAU * k as f64 / 256.0)).collect();
    let h = hausdorff(&pts, &exact);
    Outcome {
        pass: rep.holds() && rep.margin.abs() <= 1e-6 && h <= 1e-6,
        summary: format!("ρ = 2 and W(T): margin {:.1e}, Hausdorff distance to the unit circle samples {h:.1e}", rep.margin),
        record: json!([rep.margin, h]),
    }
}

fn c7_von_neumann(seed: u64) -> Outcome {
    let mut r = rng(seed, 7);
    let mut ratios = Vec::new();
    for _ in 0..100 {
        let n = r.random_range(2..=6);
        let t = contraction(&mut r, n, 0.8);
        let p = random_polynomial(&mut r, 10);
        ratios.push(vn_ratio(&MatrixRational::scalar(p), &t, &Domain::unit_disk(), 1024).unwrap());
    }
    let worst = fmax(ratios.clone());
    Outcome {
        pass: worst <= 1.0 + 1e-6,
        summary: format!("von Neumann ceiling: max ratio {worst:.9} over 100 contractions"),
        record: json!(ratios),
    }
}

fn c8_crouzeix_palencia(seed: u64) -> Outcome {
    let mut r = rng(seed, 8);
    let mut ratios = Vec::new();
    for i in 0..100 {
        let n = r.random_range(2..=6);
        let t = if i % 2 == 0 {
            gaussian(&mut r, n)
        } else {
            let eig: Vec<C64> = (0..n).map(|_| in_disk(&mut r, 1.0)).collect();
            triangular_model(&mut r, &eig, 2.0)
        };
        // sampled support values underestimate w(T) by at most a factor cos(π/n)
        let samples = 4096;
        let w = numerical_radius(&t, samples) / (PI / samples as f64).cos();
        let t = t.scale(C64::new(1.0 / w, 0.0));
        let p = random_polynomial(&mut r, 8);
        ratios.push(vn_ratio(&MatrixRational::scalar(p), &t, &Domain::unit_disk(), 1024).unwrap());
    }
    let worst = fmax(ratios.clone());
    Outcome {
        pass: worst <= 1.0 + SQRT_2 + 1e-6,
        summary: format!("Crouzeix–Palencia ceiling: max ratio {worst:.6} over 100 operators (ceiling {:.6})", 1.0 + SQRT_2),
        record: json!(ratios),
    }
}

fn c9_split(seed: u64) -> Outcome {
    let mut r = rng(seed, 9);
    let left = Domain::intersection(vec![GeneralizedDisk::half_plane(c(1.0, 0.0), c(-1.0, 0.0)).unwrap()]).unwrap();
    let right = Domain::intersection(vec![GeneralizedDisk::half_plane(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()]).unwrap();
    let mut residuals = Vec::new();
    let mut routed = true;
    let example = ScalarRational::from_factored(&Polynomial::constant(c(1.0, 0.0)), &[(c(2.0, 0.0), 1), (c(-2.0, 0.0), 1)]).unwrap();
    for i in 0..100 {
        let n = r.random_range(2..=6);
        let eig: Vec<C64> = (0..n).map(|_| c(r.random_range(-0.7..0.7), r.random_range(-1.0..1.0))).collect();
        let t = triangular_model(&mut r, &eig, 0.3);
        let f = if i == 0 {
            example.clone()
        } else {
            let terms = (0..4)
                .map(|k| {
                    let re = r.random_range(1.5..3.0) * if k < 2 { 1.0 } else { -1.0 };
                    PoleTerm {
                        pole: ExtComplex::finite(re, r.random_range(-2.0..2.0)),
                        power: r.random_range(1..=2),
                        coeff: cnormal(&mut r),
                    }
                })
                .collect();
            ScalarRational::from_terms(cnormal(&mut r), terms).unwrap()
        };
        let (f1, f2) = split_by_poles(&f, &left, &right).unwrap();
        routed &= f1.finite_poles().iter().all(|p| p.re > 1.0) && f2.finite_poles().iter().all(|p| p.re < -1.0);
        if i == 0 {
            // 1/((z-2)(z+2)) = 1/(4(z-2)) - 1/(4(z+2))
            let z = c(0.3, 0.7);
            let want1 = 0.25 / (z - 2.0);
            routed &= (f1.eval(z).unwrap() - want1).norm() < 1e-14;
        }
        residuals.push(verify_split_calculus(&f, &t, &left, &right).unwrap());
    }
    let worst = fmax(residuals.clone());
    Outcome {
        pass: worst <= 1e-10 && routed,
        summary: format!("split calculus: max ‖f(T) - f1(T) - f2(T)‖ = {worst:.1e} over 100 functions, poles routed: {routed}"),
        record: json!(residuals),
    }
}

fn c10_theorem2(seed: u64) -> Outcome {
    let mut r = rng(seed, 10);
    let radius = 20.0;
    let lens = Domain::intersection(vec![
        GeneralizedDisk::closed(c(0.0, 0.0), 1.25).unwrap(),
        GeneralizedDisk::closed(c(1.0, 0.0), 1.25).unwrap(),
    ])
    .unwrap();
    let pw = lens.to_piecewise().unwrap().with_normal_exterior(radius, 64).unwrap();
    let (mut all_ok, mut worst_gap, mut min_margin) = (true, 0.0f64, f64::INFINITY);
    let mut record = Vec::new();
    for _ in 0..10 {
        let n = r.random_range(2..=5);
        let mut eig = Vec::new();
        while eig.len() < n {
            let z = c(r.random_range(-0.3..1.3), r.random_range(-0.8..0.8));
            if lens.contains_interior(ExtComplex::Finite(z), 0.05) {
                eig.push(z);
            }
        }
        let t = normal(&mut r, &eig);
        let rep = theorem2_hypotheses(&t, &pw, 1e-12).unwrap();
        all_ok &= rep.passed;
        for (slack, data) in rep.arcs.iter().zip(pw.exterior()) {
            // ‖(μ - T)^{-1}‖ = 1/dist(μ, σ(T)) for normal T
            let oracle = data
                .centers
                .iter()
                .map(|&(_, mu)| 1.0 / radius - 1.0 / eig.iter().map(|l| (mu - l).norm()).fold(f64::INFINITY, f64::min))
                .fold(f64::INFINITY, f64::min);
            worst_gap = worst_gap.max((slack.margin - oracle).abs());
            min_margin = min_margin.min(slack.margin);
            record.push(slack.margin);
        }
    }
    Outcome {
        pass: all_ok && min_margin >= 0.0 && worst_gap <= 1e-8,
        summary: format!(
            "exterior-disk resolvent verifier on the lens: min arc slack {min_margin:.3e}, max deviation from the 1/distance formula {worst_gap:.1e}"
        ),
        record: json!(record),
    }
}

/// Angle subtended at `z_k` by the two corners on the circle about `z_k`.
fn arc_length_oracle(td: &ThreeDisk, k: usize) -> f64 {
    let corner = |i: usize, j: usize| {
        let (a, b) = (td.vertices[i], td.vertices[j]);
        let m = 0.5 * (a + b);
        let half = 0.5 * (b - a).norm();
        let nrm = (b - a) * C64::new(0.0, 1.0) / (b - a).norm();
        let off = (1.0 - half * half).sqrt();
        let third = td.vertices[3 - i - j];
        [m + nrm * off, m - nrm * off]
            .into_iter()
            .min_by(|p, q| (p - third).norm().total_cmp(&(q - third).norm()))
            .unwrap()
    };
    let others: Vec<usize> = (0..3).filter(|&j| j != k).collect();
    let (p, q) = (corner(k, others[0]), corner(k, others[1]));
    ((p - td.vertices[k]) / (q - td.vertices[k])).arg().abs()
}

fn c11_three_disk(_: u64) -> Outcome {
    let mut ok = true;
    let mut record = Vec::new();
    let mut lines = Vec::new();
    for eps in [0.01, 0.05] {
        let td = ThreeDisk::new(eps).unwrap();
        let (mut modulus, mut deriv, mut len_gap) = (0.0f64, 0.0f64, 0.0f64);
        let mut lengths = Vec::new();
        for k in 0..3 {
            for z in td.arc_samples(k, 200, 0.0).unwrap() {
                assert!(((z - td.vertices[k]).norm() - 1.0).abs() < 1e-12);
                modulus = modulus.max((td.phi_direct(k, z).norm() - 1.0).abs());
            }
            let h = 1e-4;
            let fd = (td.phi_direct(k, td.z0 + h) - td.phi_direct(k, td.z0 - h)) / (2.0 * h);
            deriv = deriv.max(fd.norm()).max(td.dphi_direct(k, td.z0).norm());
            let length: f64 = td.arc_pieces(k).unwrap().iter().map(|p| p.length()).sum();
            len_gap = len_gap.max((length - arc_length_oracle(&td, k)).abs());
            lengths.push(length);
        }
        ok &= modulus <= 1e-10 && deriv <= 1e-8 && len_gap <= 1e-10;
        if eps == 0.01 {
            ok &= lengths.iter().all(|l| (l - TAU / 3.0).abs() <= 0.1);
        }
        lines.push(format!("ε = {eps}: ||φ| - 1| ≤ {modulus:.1e}, |φ'(z0)| ≤ {deriv:.1e}, lengths {lengths:.4?}"));
        record.push(json!([modulus, deriv, lengths]));
    }
    Outcome { pass: ok, summary: format!("three-disk construction: {}", lines.join("; ")), record: json!(record) }
}

fn c12_cauchy(seed: u64) -> Outcome {
    let mut r = rng(seed, 12);
    let contour = Contour::circle(c(0.0, 0.0), 1.25, 1024).unwrap();
    let mut diffs = Vec::new();
    for _ in 0..100 {
        let n = r.random_range(1..=6);
        let eig: Vec<C64> = (0..n).map(|_| in_disk(&mut r, 0.9)).collect();
        let off = r.random_range(0.0..0.5);
        let t = triangular_model(&mut r, &eig, off);
        let mut terms: Vec<PoleTerm> = (0..r.random_range(1..=3))
            .map(|_| PoleTerm {
                pole: ExtComplex::Finite(C64::from_polar(r.random_range(1.7..3.0), r.random_range(0.0..TAU))),
                power: r.random_range(1..=2),
                coeff: cnormal(&mut r),
            })
            .collect();
        if r.random::<bool>() {
            terms.push(PoleTerm { pole: ExtComplex::Infinity, power: r.random_range(1..=2), coeff: cnormal(&mut r) });
        }
        let f = ScalarRational::from_terms(cnormal(&mut r), terms).unwrap();
        let a = eval_on_matrix(&f, &t).unwrap();
        let b = eval_on_matrix_cauchy(&f, &t, &contour).unwrap();
        diffs.push(a.max_abs_diff(&b));
    }
    let worst = fmax(diffs.clone());
    Outcome {
        pass: worst <= 1e-7,
        summary: format!("calculus oracles: max entrywise gap {worst:.1e} between partial fractions and 1024-point Cauchy quadrature"),
        record: json!(diffs),
    }
}

fn c13_shrink(seed: u64) -> Outcome {
    let mut r = rng(seed, 13);
    let mut gaps = Vec::new();
    for _ in 0..50 {
        let n = r.random_range(1..=6);
        let t = gaussian(&mut r, n);
        let a = cnormal(&mut r);
        let eps = r.random_range(0.0..0.95);
        let s = shrink_operator(&t, a, eps).unwrap();
        let want: Vec<C64> = t.eigenvalues().unwrap().iter().map(|l| (1.0 - eps) * (l - a) + a).collect();
        gaps.push(multiset_distance(&s.eigenvalues().unwrap(), &want));
    }
    let worst = fmax(gaps.clone());
    Outcome {
        pass: worst <= 1e-10,
        summary: format!("shrinking spectral mapping: max multiset distance {worst:.1e} over 50 operators"),
        record: json!(gaps),
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, bool, Criterion); 13] = [
        (1, true, c1_mascioni),
        (2, true, c2_defect),
        (3, true, c3_kernel),
        (4, true, c4_good_disks),
        (5, true, c5_rho_routes),
        (6, false, c6_numerical_range),
        (7, true, c7_von_neumann),
        (8, true, c8_crouzeix_palencia),
        (9, true, c9_split),
        (10, true, c10_theorem2),
        (11, false, c11_three_disk),
        (12, true, c12_cauchy),
        (13, true, c13_shrink),
    ];
    let mut all = true;
    let mut records = Vec::new();
    for (id, randomized, run) in criteria {
        let start = Instant::now();
        let out = run(MASTER_SEED);
        all &= out.pass;
        println!(
            "{} {id:>2} {} [{:.1}s]",
            if out.pass { "PASS" } else { "FAIL" },
            out.summary,
            start.elapsed().as_secs_f64()
        );
        if randomized {
            records.push((id, run, out.record.clone()));
        }
    }
    let start = Instant::now();
    let changed: Vec<u32> = records
        .iter()
        .filter(|(_, run, first)| run(MASTER_SEED).record != *first)
        .map(|(id, _, _)| *id)
        .collect();
    let det = changed.is_empty();
    all &= det;
    println!(
        "{} 14 determinism: {} randomized suites re-run with master seed {MASTER_SEED}, changed: {changed:?} [{:.1}s]",
        if det { "PASS" } else { "FAIL" },
        records.len(),
        start.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
