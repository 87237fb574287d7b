mod common;

use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use specset::blaschke::{blaschke_on_matrix, kernel_identity_residual, BlaschkeProduct, Normalization};
use specset::classify::{
    hyponormal_resolvent_identity, is_good_disk, is_hyponormal, is_rho_contraction_disks,
    is_rho_contraction_poisson, numerical_range_boundary, RhoGrid,
};
use specset::geometry::{mobius_image, Domain, GeneralizedDisk, MobiusMap};
use specset::ksearch::{k_lower_bound, shrink_operator, split_by_poles, vn_ratio, SearchConfig};
use specset::matcalc::{
    eval_on_matrix, eval_on_matrix_cauchy, ComplexMatrix, Contour, MatrixRational, PoleTerm, ScalarRational, C64,
};
use specset::ExtComplex;

fn small_grid() -> RhoGrid {
    RhoGrid::with_sizes(16, 64, 64, 32)
}

fn random_rational(r: &mut impl Rng, min_modulus: f64) -> ScalarRational {
    let terms = (0..r.random_range(1..=3))
        .map(|_| PoleTerm {
            pole: ExtComplex::Finite(C64::from_polar(r.random_range(min_modulus..min_modulus + 1.5), r.random_range(0.0..TAU))),
            power: r.random_range(1..=2),
            coeff: cnormal(r),
        })
        .collect();
    ScalarRational::from_terms(cnormal(r), terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn goodness_is_mobius_invariant(seed in any::<u64>(), n in 1usize..=3, kind in 0usize..3) {
        let mut r = rng(seed, 0);
        let t = gaussian(&mut r, n);
        let d = match kind {
            0 => GeneralizedDisk::closed(cnormal(&mut r) * 0.3, r.random_range(0.3..2.5)).unwrap(),
            1 => GeneralizedDisk::exterior(cnormal(&mut r) * 2.0, r.random_range(0.1..1.5)).unwrap(),
            _ => GeneralizedDisk::half_plane(cnormal(&mut r), C64::from_polar(1.0, r.random_range(0.0..TAU))).unwrap(),
        };
        let psi = MobiusMap::new(cnormal(&mut r), cnormal(&mut r), cnormal(&mut r), cnormal(&mut r)).unwrap();
        if let ExtComplex::Finite(p) = psi.pole() {
            prop_assume!(t.spectral_distance(p).unwrap() > 0.2);
        }
        let a = is_good_disk(&t, &d, 1e-12).unwrap();
        let b = is_good_disk(&psi.apply_matrix(&t).unwrap(), &mobius_image(&psi, &d).unwrap(), 1e-12).unwrap();
        prop_assume!(a.margin.abs() >= 1e-3 && b.margin.abs() >= 1e-3);
        prop_assert_eq!(a.holds(), b.holds(), "margins {} and {}", a.margin, b.margin);
    }

    #[test]
    fn good_closed_disks_grow(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed, 1);
        let t = gaussian(&mut r, n);
        let center = cnormal(&mut r) * 0.3;
        let radius = t.shift(-center).opnorm().unwrap() * r.random_range(1.0..1.5);
        let d = GeneralizedDisk::closed(center, radius).unwrap();
        prop_assert!(is_good_disk(&t, &d, 1e-12).unwrap().holds());
        let shift = C64::from_polar(r.random_range(0.0..0.5), r.random_range(0.0..TAU));
        let big = GeneralizedDisk::closed(center + shift, radius + shift.norm()).unwrap();
        prop_assert!(d.is_subset_of(&big, 1e-12));
        prop_assert!(is_good_disk(&t, &big, 1e-12).unwrap().holds());
    }

    #[test]
    fn rho_one_is_norm_test(seed in any::<u64>(), n in 1usize..=4, scale in 0.5f64..1.5) {
        let mut r = rng(seed, 2);
        let t = contraction(&mut r, n, 1.0).scale(C64::new(scale, 0.0));
        let rep = is_rho_contraction_disks(&t, 1.0, &small_grid(), 1e-12).unwrap();
        prop_assert!((rep.margin - (1.0 - scale)).abs() < 1e-12 || rep.witness != specset::classify::Witness::None);
        prop_assert_eq!(rep.holds(), scale <= 1.0 + 1e-12);
    }

    #[test]
    fn rho_contractions_are_nested(seed in any::<u64>(), n in 1usize..=3, rho in 1.0f64..3.5, step in 0.1f64..1.5) {
        let mut r = rng(seed, 3);
        let eig: Vec<C64> = (0..n).map(|_| in_disk(&mut r, 0.95)).collect();
        let off = r.random_range(0.0..1.2);
        let t = triangular_model(&mut r, &eig, off);
        let g = small_grid();
        let lo = is_rho_contraction_disks(&t, rho, &g, 1e-12).unwrap();
        prop_assume!(lo.margin >= 1e-6);
        let hi = is_rho_contraction_disks(&t, rho + step, &g, 1e-12).unwrap();
        prop_assert!(hi.holds(), "ρ = {} holds (margin {}), ρ = {} fails (margin {})", rho, lo.margin, rho + step, hi.margin);
    }

    #[test]
    fn poisson_detects_nilpotent_threshold(a in 0.2f64..5.0, rho in 1.2f64..4.0) {
        prop_assume!((a - rho).abs() > 0.02);
        let t = ComplexMatrix::from_real_rows(&[&[0.0, a], &[0.0, 0.0]]).unwrap();
        let rep = is_rho_contraction_poisson(&t, rho, &small_grid(), 1e-12).unwrap();
        prop_assert_eq!(rep.holds(), a < rho, "margin {}", rep.margin);
    }

    #[test]
    fn von_neumann_inequality(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed, 4);
        let t = contraction(&mut r, n, 0.5);
        let p = random_polynomial(&mut r, 6);
        let ratio = vn_ratio(&MatrixRational::scalar(p), &t, &Domain::unit_disk(), 512).unwrap();
        prop_assert!(ratio <= 1.0 + 1e-6, "ratio {}", ratio);
    }

    #[test]
    fn support_points_touch_support_lines(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed, 5);
        let t = gaussian(&mut r, n);
        let m = 32;
        for (k, z) in numerical_range_boundary(&t, m).unwrap().into_iter().enumerate() {
            let rot = C64::from_polar(1.0, -TAU * k as f64 / m as f64);
            let top = t.scale(rot).hermitian_part().max_hermitian_eigenvalue();
            prop_assert!(((rot * z).re - top).abs() < 1e-9);
        }
    }

    #[test]
    fn blaschke_unimodular_on_circle(seed in any::<u64>(), theta in 0.0f64..TAU) {
        let mut r = rng(seed, 6);
        let b = random_blaschke(&mut r, 5, 0.95);
        let on = C64::from_polar(1.0, theta);
        prop_assert!((b.eval(on).unwrap().norm() - 1.0).abs() < 1e-12);
        let inside = in_disk(&mut r, 0.99);
        prop_assert!(b.eval(inside).unwrap().norm() < 1.0 + 1e-12);
        prop_assert!(kernel_identity_residual(&b, inside, on).unwrap() < 1e-10);
    }

    #[test]
    fn blaschke_annihilates_matching_spectrum(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed, 7);
        let zeros: Vec<C64> = (0..n).map(|_| in_disk(&mut r, 0.8)).collect();
        let b = BlaschkeProduct::new(0.3, zeros.clone(), Normalization::Plain).unwrap();
        let t = normal(&mut r, &zeros);
        prop_assert!(blaschke_on_matrix(&b, &t).unwrap().opnorm().unwrap() < 1e-10);
    }

    #[test]
    fn calculus_is_multiplicative(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed, 8);
        let eig: Vec<C64> = (0..n).map(|_| in_disk(&mut r, 0.9)).collect();
        let t = triangular_model(&mut r, &eig, 0.4);
        let (f, g) = (random_rational(&mut r, 1.6), random_rational(&mut r, 1.6));
        let fg = eval_on_matrix(&f.mul(&g), &t).unwrap();
        let prod = &eval_on_matrix(&f, &t).unwrap() * &eval_on_matrix(&g, &t).unwrap();
        prop_assert!(fg.max_abs_diff(&prod) < 1e-9 * (1.0 + fg.frobenius_norm()));
        let sum = eval_on_matrix(&f.add(&g), &t).unwrap();
        let parts = &eval_on_matrix(&f, &t).unwrap() + &eval_on_matrix(&g, &t).unwrap();
        prop_assert!(sum.max_abs_diff(&parts) < 1e-12 * (1.0 + sum.frobenius_norm()));
    }

    #[test]
    fn partial_fractions_match_cauchy(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed, 9);
        let eig: Vec<C64> = (0..n).map(|_| in_disk(&mut r, 0.9)).collect();
        let t = triangular_model(&mut r, &eig, 0.3);
        let f = random_rational(&mut r, 1.8);
        let contour = Contour::circle(C64::new(0.0, 0.0), 1.3, 512).unwrap();
        let a = eval_on_matrix(&f, &t).unwrap();
        let b = eval_on_matrix_cauchy(&f, &t, &contour).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-8);
    }

    #[test]
    fn mobius_composition_on_matrices(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed, 10);
        let t = gaussian(&mut r, n);
        let phi = MobiusMap::new(cnormal(&mut r), cnormal(&mut r), cnormal(&mut r), cnormal(&mut r)).unwrap();
        let psi = MobiusMap::new(cnormal(&mut r), cnormal(&mut r), cnormal(&mut r), cnormal(&mut r)).unwrap();
        let Ok(inner) = phi.apply_matrix(&t) else { return Ok(()) };
        let (Ok(lhs), Ok(rhs)) = (psi.compose(&phi).apply_matrix(&t), psi.apply_matrix(&inner)) else { return Ok(()) };
        prop_assume!(inner.min_singular_value() > 1e-3 && lhs.frobenius_norm() < 1e4);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-7 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn split_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed, 11);
        let left = Domain::intersection(vec![GeneralizedDisk::half_plane(c(1.0, 0.0), c(-1.0, 0.0)).unwrap()]).unwrap();
        let right = Domain::intersection(vec![GeneralizedDisk::half_plane(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()]).unwrap();
        let terms = (0..4)
            .map(|k| PoleTerm {
                pole: ExtComplex::finite(r.random_range(1.2..3.0) * if k % 2 == 0 { 1.0 } else { -1.0 }, r.random_range(-1.0..1.0)),
                power: 1,
                coeff: cnormal(&mut r),
            })
            .collect();
        let f = ScalarRational::from_terms(cnormal(&mut r), terms).unwrap();
        let (f1, f2) = split_by_poles(&f, &left, &right).unwrap();
        let (g1, g2) = split_by_poles(&f1, &left, &right).unwrap();
        prop_assert_eq!(&g1, &f1);
        prop_assert!(g2.terms().is_empty() && g2.constant_term() == C64::new(0.0, 0.0));
        let z = c(r.random_range(-1.0..1.0), r.random_range(-2.0..2.0));
        prop_assert!((f.eval(z).unwrap() - f1.eval(z).unwrap() - f2.eval(z).unwrap()).norm() < 1e-12 * (1.0 + f.eval(z).unwrap().norm()));
    }

    #[test]
    fn shrinking_maps_spectrum(seed in any::<u64>(), n in 1usize..=5, eps in 0.0f64..0.99) {
        let mut r = rng(seed, 12);
        let t = gaussian(&mut r, n);
        let a = cnormal(&mut r);
        let s = shrink_operator(&t, a, eps).unwrap();
        let want: Vec<C64> = t.eigenvalues().unwrap().iter().map(|l| (1.0 - eps) * (l - a) + a).collect();
        prop_assert!(multiset_distance(&s.eigenvalues().unwrap(), &want) < 1e-10);
        prop_assert!(shrink_operator(&t, a, 0.0).unwrap().max_abs_diff(&t) < 1e-14 * (1.0 + a.norm()));
    }

    #[test]
    fn normal_operators_satisfy_resolvent_identity(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed, 13);
        let eig: Vec<C64> = (0..n).map(|_| cnormal(&mut r)).collect();
        let t = normal(&mut r, &eig);
        prop_assert!(is_hyponormal(&t, 1e-9).holds());
        let lambda = cnormal(&mut r) * 2.0;
        prop_assume!(t.spectral_distance(lambda).unwrap() > 1e-2);
        let (lhs, rhs) = hyponormal_resolvent_identity(&t, lambda).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kbound_is_seeded_and_beats_identity(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed, 14);
        let t = contraction(&mut r, n, 0.2).scale(C64::new(0.9, 0.0));
        let cfg = SearchConfig { restarts: 2, grid: 128, seed, ..SearchConfig::default() };
        let a = k_lower_bound(&t, &Domain::unit_disk(), &[ExtComplex::Infinity], &cfg).unwrap();
        let b = k_lower_bound(&t, &Domain::unit_disk(), &[ExtComplex::Infinity], &cfg).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.k_lower >= 1.0 - 1e-12);
        prop_assert!(a.trace.windows(2).all(|w| w[1] >= w[0]));
    }
}
