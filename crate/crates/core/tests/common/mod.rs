//! Seeded generators and small oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use specset::blaschke::{BlaschkeProduct, Normalization};
use specset::matcalc::{ComplexMatrix, ScalarRational, C64};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cnormal(r: &mut impl Rng) -> C64 {
    C64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

/// Uniform in the disk `|z| ≤ radius`.
pub fn in_disk(r: &mut impl Rng, radius: f64) -> C64 {
    C64::from_polar(radius * r.random::<f64>().sqrt(), r.random_range(0.0..std::f64::consts::TAU))
}

/// Gaussian entries with variance `1/n`.
pub fn gaussian(r: &mut impl Rng, n: usize) -> ComplexMatrix {
    let s = 1.0 / (n as f64).sqrt();
    let entries: Vec<C64> = (0..n * n).map(|_| cnormal(r) * s).collect();
    ComplexMatrix::from_row_major(n, &entries).unwrap()
}

/// `X / ‖X‖` scaled by `u ∈ [lo, 1]`.
pub fn contraction(r: &mut impl Rng, n: usize, lo: f64) -> ComplexMatrix {
    let x = gaussian(r, n);
    let u = if lo < 1.0 { r.random_range(lo..=1.0) } else { 1.0 };
    x.scale(C64::new(u / x.opnorm().unwrap(), 0.0))
}

/// Haar-like unitary from the QR factor of a Gaussian matrix.
pub fn unitary(r: &mut impl Rng, n: usize) -> ComplexMatrix {
    let q = gaussian(r, n).into_dmatrix().qr().q();
    ComplexMatrix::from_dmatrix(q).unwrap()
}

/// `U (diag(λ) + N) U*` with `N` strictly upper triangular of size `off`.
pub fn triangular_model(r: &mut impl Rng, eig: &[C64], off: f64) -> ComplexMatrix {
    let n = eig.len();
    let mut m = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = eig[i];
        for j in i + 1..n {
            m[(i, j)] = cnormal(r) * off;
        }
    }
    let u = unitary(r, n);
    let t = ComplexMatrix::from_dmatrix(m).unwrap();
    &(&u * &t) * &u.adjoint()
}

pub fn normal(r: &mut impl Rng, eig: &[C64]) -> ComplexMatrix {
    triangular_model(r, eig, 0.0)
}

pub fn random_blaschke(r: &mut impl Rng, max_zeros: usize, max_modulus: f64) -> BlaschkeProduct {
    let k = r.random_range(1..=max_zeros);
    let zeros = (0..k).map(|_| in_disk(r, max_modulus)).collect();
    let norm = if r.random::<bool>() { Normalization::Plain } else { Normalization::Mascioni };
    BlaschkeProduct::new(r.random_range(0.0..std::f64::consts::TAU), zeros, norm).unwrap()
}

pub fn random_polynomial(r: &mut impl Rng, max_degree: usize) -> ScalarRational {
    let d = r.random_range(1..=max_degree);
    let coeffs: Vec<C64> = (0..=d).map(|_| cnormal(r)).collect();
    ScalarRational::polynomial(&coeffs)
}

/// Greedy matching distance between two multisets of equal size.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut left: Vec<C64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for &z in a {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        worst = worst.max(d);
        left.swap_remove(k);
    }
    worst
}

/// Hausdorff distance between finite point sets.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let one_way = |p: &[C64], q: &[C64]| {
        p.iter()
            .map(|z| q.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Smallest eigenvalue of a 2×2 Hermitian matrix `[[a, b], [conj b, d]]`.
pub fn hermitian2_min(a: f64, b: C64, d: f64) -> f64 {
    0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt()
}
