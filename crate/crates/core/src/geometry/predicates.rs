//! Transversality, the exterior disk condition and the arc condition.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::arc::{intervals_meet, wrap, BoundaryPiece};
use super::disk::GeneralizedDisk;
use super::domain::{Domain, PiecewiseCircularDomain, CLOSURE_TOL};
use super::mobius::MobiusMap;
use crate::error::{Error, Result};
use crate::ext::ExtComplex;

/// Apertures `2π/m` tried by the sector search, largest first.
pub const APERTURE_GRID: [usize; 7] = [6, 8, 12, 16, 24, 32, 64];
/// Angular placements of the common offset per aperture.
pub const PLACEMENTS: usize = 720;

/// Open circular sector `{vertex + t e^{iθ} : 0 < t < radius, lower < θ < upper}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub vertex: C64,
    pub lower: f64,
    pub upper: f64,
    pub radius: f64,
}

impl Sector {
    pub fn aperture(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains_direction(&self, theta: f64) -> bool {
        let t = wrap(theta - self.lower);
        t > 0.0 && t < self.aperture()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalityReport {
    pub transversal: bool,
    /// `m` of the aperture `2π/m` at which a witness was found.
    pub aperture_m: Option<usize>,
    /// `[S0, S1l, S1r, S2l, S2r]` when transversal.
    pub sectors: Vec<Sector>,
    /// Largest `m` searched; refutations hold only at this resolution.
    pub resolution: usize,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Side {
    Inside,
    Outside,
    Boundary,
}

/// Local picture of a domain at a boundary point: directions in which the
/// boundary leaves, and the side of each gap between consecutive directions.
struct LocalPicture {
    dirs: Vec<f64>,
    gaps: Vec<Side>,
}

impl LocalPicture {
    fn side_of(&self, theta: f64) -> Side {
        let m = self.dirs.len();
        for i in 0..m {
            let lo = self.dirs[i];
            let width = if m == 1 { TAU } else { wrap(self.dirs[(i + 1) % m] - lo) };
            let t = wrap(theta - lo);
            if t > 0.0 && t < width {
                return self.gaps[i];
            }
        }
        Side::Boundary
    }
}

fn probe(dom: &Domain, p: C64, tol: f64) -> Side {
    let z = ExtComplex::Finite(p);
    if dom.contains_interior(z, tol) {
        Side::Inside
    } else if !dom.contains_closure(z, tol) {
        Side::Outside
    } else {
        Side::Boundary
    }
}

fn dedup_directions(mut dirs: Vec<f64>) -> Vec<f64> {
    for d in dirs.iter_mut() {
        *d = wrap(*d);
    }
    dirs.sort_by(f64::total_cmp);
    dirs.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if dirs.len() > 1 && TAU - dirs[dirs.len() - 1] + dirs[0] < 1e-9 {
        dirs.pop();
    }
    dirs
}

/// Boundary directions at `z0` and a probe radius small against the local
/// curvature.
fn boundary_directions(dom: &Domain, z0: C64) -> Result<(Vec<f64>, f64)> {
    let tol = CLOSURE_TOL * z0.norm().max(1.0);
    if !dom.on_boundary(z0, tol) {
        return Err(Error::Precondition(format!("{z0} is not on the domain boundary")));
    }
    let mut dirs = Vec::new();
    let mut rmin: f64 = 1.0;
    match dom {
        Domain::Disks(disks) => {
            let probe_tol = 1e-10 * dom.scale();
            let active: Vec<usize> = (0..disks.len())
                .filter(|&k| disks[k].signed_distance(ExtComplex::Finite(z0)).abs() <= tol)
                .collect();
            for &k in &active {
                let d = disks[k];
                let (tangents, r): (Vec<C64>, f64) = match d {
                    GeneralizedDisk::Closed { center, radius }
                    | GeneralizedDisk::Exterior { center, radius } => {
                        let n = (z0 - center) / (z0 - center).norm();
                        (vec![n * C64::new(0.0, 1.0), n * C64::new(0.0, -1.0)], radius)
                    }
                    GeneralizedDisk::HalfPlane { direction, .. } => {
                        let t = direction.conj() * C64::new(0.0, 1.0);
                        (vec![t, -t], f64::INFINITY)
                    }
                };
                rmin = rmin.min(r);
                let delta = 1e-4 * rmin.min(1.0);
                for t in tangents {
                    let q = match d {
                        GeneralizedDisk::Closed { center, radius }
                        | GeneralizedDisk::Exterior { center, radius } => {
                            let theta0 = (z0 - center).arg();
                            let sign = (t / (z0 - center) * C64::new(0.0, -1.0)).re.signum();
                            center + C64::from_polar(radius, theta0 + sign * delta / radius)
                        }
                        GeneralizedDisk::HalfPlane { .. } => z0 + t * delta,
                    };
                    let on_others = disks.iter().enumerate().all(|(j, o)| {
                        j == k || o.signed_distance(ExtComplex::Finite(q)) >= -probe_tol
                    });
                    if on_others {
                        dirs.push(t.arg());
                    }
                }
            }
        }
        Domain::Piecewise(p) => {
            for piece in p.pieces() {
                if piece.distance(z0) > tol {
                    continue;
                }
                rmin = rmin.min(piece.min_radius());
                if (piece.start() - z0).norm() <= tol {
                    dirs.push(piece.tangent_at(0.0).arg());
                } else if (piece.end() - z0).norm() <= tol {
                    dirs.push((-piece.tangent_at(1.0)).arg());
                } else {
                    let s = match piece {
                        BoundaryPiece::Arc(a) => {
                            let t = wrap(((z0 - a.center).arg() - a.from) * a.orientation());
                            (t / a.extent()).clamp(0.0, 1.0)
                        }
                        BoundaryPiece::Segment { start, end } => {
                            (((z0 - start) * (end - start).conj()).re / (end - start).norm_sqr())
                                .clamp(0.0, 1.0)
                        }
                    };
                    let tau = piece.tangent_at(s);
                    dirs.push(tau.arg());
                    dirs.push((-tau).arg());
                }
            }
        }
    }
    let dirs = dedup_directions(dirs);
    if dirs.is_empty() {
        return Err(Error::Precondition(format!("no boundary direction found at {z0}")));
    }
    Ok((dirs, 1e-4 * rmin.min(1.0)))
}

fn local_picture(dom: &Domain, z0: C64, delta: f64, dirs: Vec<f64>) -> LocalPicture {
    let tol = 1e-3 * delta * delta;
    let m = dirs.len();
    let gaps = (0..m)
        .map(|i| {
            let lo = dirs[i];
            let width = if m == 1 { TAU } else { wrap(dirs[(i + 1) % m] - lo) };
            probe(dom, z0 + C64::from_polar(delta, lo + 0.5 * width), tol)
        })
        .collect();
    LocalPicture { dirs, gaps }
}

/// Groups directions into at most two open sectors `(φ - s, φ - s + w)`.
fn cover(dirs: &[f64], w: f64, s: f64) -> Option<Vec<f64>> {
    let mut lows: Vec<f64> = Vec::new();
    for &phi in dirs {
        if lows.iter().any(|&lo| {
            let t = wrap(phi - lo);
            t > 1e-12 && t < w - 1e-12
        }) {
            continue;
        }
        lows.push(wrap(phi - s));
        if lows.len() > 2 {
            return None;
        }
    }
    (lows.len() == 2).then_some(lows)
}

fn open_disjoint(a: f64, b: f64, w: f64) -> bool {
    wrap(b - a) >= w - 1e-12 && wrap(a - b) >= w - 1e-12
}

/// Start of the first arc of directions of width `w` outside all sectors
/// and outside both domains.
fn free_run(lows: &[f64], w: f64, p1: &LocalPicture, p2: &LocalPicture) -> Option<f64> {
    let mut cuts: Vec<f64> = lows.iter().flat_map(|&lo| [wrap(lo), wrap(lo + w)]).collect();
    cuts.extend(p1.dirs.iter().chain(p2.dirs.iter()).copied());
    let mut cuts = dedup_directions(cuts);
    if cuts.is_empty() {
        cuts.push(0.0);
    }
    let m = cuts.len();
    let free: Vec<bool> = (0..m)
        .map(|i| {
            let lo = cuts[i];
            let width = if m == 1 { TAU } else { wrap(cuts[(i + 1) % m] - lo) };
            let mid = lo + 0.5 * width;
            let in_sector = lows.iter().any(|&l| {
                let t = wrap(mid - l);
                t > 0.0 && t < w
            });
            !in_sector && p1.side_of(mid) == Side::Outside && p2.side_of(mid) == Side::Outside
        })
        .collect();
    // walk runs of free elementary arcs, twice around for wrap-around
    for start in 0..m {
        if !free[start] || (free[(start + m - 1) % m] && m > 1) {
            continue;
        }
        let mut len = 0.0;
        let mut i = start;
        for _ in 0..m {
            if !free[i] {
                break;
            }
            len += if m == 1 { TAU } else { wrap(cuts[(i + 1) % m] - cuts[i]) };
            i = (i + 1) % m;
        }
        if len >= w - 1e-12 {
            return Some(cuts[start]);
        }
    }
    if free.iter().all(|&f| f) {
        return Some(cuts[0]);
    }
    None
}

/// Searches for the five-sector configuration at `z0`; `max_m` caps the
/// aperture grid.
pub fn transversal_at(
    omega1: &Domain,
    omega2: &Domain,
    z0: ExtComplex,
    max_m: usize,
) -> Result<TransversalityReport> {
    let (o1, o2, z) = match z0 {
        ExtComplex::Finite(z) => (omega1.clone(), omega2.clone(), z),
        ExtComplex::Infinity => {
            let inv = MobiusMap::inversion();
            let map = |d: &Domain| -> Result<Domain> {
                match d {
                    Domain::Disks(ds) => Ok(Domain::Disks(
                        ds.iter().map(|d| inv.image(d)).collect::<Result<_>>()?,
                    )),
                    Domain::Piecewise(_) => Err(Error::Precondition(
                        "∞ cannot lie on the boundary of a bounded piecewise domain".into(),
                    )),
                }
            };
            (map(omega1)?, map(omega2)?, C64::new(0.0, 0.0))
        }
    };
    let (d1, r1) = boundary_directions(&o1, z)?;
    let (d2, r2) = boundary_directions(&o2, z)?;
    let delta = r1.min(r2);
    let p1 = local_picture(&o1, z, delta, d1);
    let p2 = local_picture(&o2, z, delta, d2);
    let resolution = APERTURE_GRID.iter().copied().filter(|&m| m <= max_m).max().unwrap_or(0);

    let mut all = p1.dirs.clone();
    all.extend(p2.dirs.iter().copied());
    let all = dedup_directions(all);
    let tol = 1e-3 * delta * delta;
    let meets = (0..all.len()).any(|i| {
        let lo = all[i];
        let width = if all.len() == 1 { TAU } else { wrap(all[(i + 1) % all.len()] - lo) };
        let q = ExtComplex::Finite(z + C64::from_polar(delta, lo + 0.5 * width));
        o1.contains_interior(q, tol) && o2.contains_interior(q, tol)
    });
    if !meets {
        return Ok(TransversalityReport {
            transversal: false,
            aperture_m: None,
            sectors: Vec::new(),
            resolution,
            note: "Ω1 ∩ Ω2 does not accumulate at z0".into(),
        });
    }

    for &m in APERTURE_GRID.iter().filter(|&&m| m <= max_m) {
        let w = TAU / m as f64;
        for p in 0..PLACEMENTS {
            let s = w * (p as f64 + 0.5) / PLACEMENTS as f64;
            let (Some(l1), Some(l2)) = (cover(&p1.dirs, w, s), cover(&p2.dirs, w, s)) else {
                continue;
            };
            let lows = [l1[0], l1[1], l2[0], l2[1]];
            let disjoint = (0..4).all(|i| (i + 1..4).all(|j| open_disjoint(lows[i], lows[j], w)));
            if !disjoint {
                continue;
            }
            if let Some(s0) = free_run(&lows, w, &p1, &p2) {
                let sector = |lo: f64| Sector {
                    vertex: z,
                    lower: lo,
                    upper: lo + w,
                    radius: delta,
                };
                let sectors = std::iter::once(s0).chain(lows).map(sector).collect();
                return Ok(TransversalityReport {
                    transversal: true,
                    aperture_m: Some(m),
                    sectors,
                    resolution,
                    note: if matches!(z0, ExtComplex::Infinity) {
                        "sectors at 0 after z ↦ 1/z".into()
                    } else {
                        String::new()
                    },
                });
            }
        }
    }
    Ok(TransversalityReport {
        transversal: false,
        aperture_m: None,
        sectors: Vec::new(),
        resolution,
        note: format!("not transversal at this resolution (m ≤ {resolution})"),
    })
}

/// Whether the open disk `B(mu, r)` misses `Ω`; decided from the distance of
/// `mu` to every piece.
pub fn disk_misses_domain(dom: &PiecewiseCircularDomain, mu: C64, r: f64) -> bool {
    let slack = 1e-9 * r.max(1.0);
    dom.boundary_distance(mu) >= r - slack && !dom.contains_interior(mu, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExteriorDiskReport {
    pub passed: bool,
    pub radius: f64,
    /// Sampled boundary points with the center found, if any.
    pub centers: Vec<(C64, Option<C64>)>,
    pub failures: Vec<C64>,
}

/// Checks that every sampled boundary point (plus every junction) is touched
/// by an open disk of radius `r` missing `Ω`. Candidates lie along the
/// outward normal; at junctions both one-sided normals and their bisector
/// are tried.
pub fn exterior_disk_condition(
    dom: &PiecewiseCircularDomain,
    r: f64,
    samples: usize,
) -> ExteriorDiskReport {
    let mut points: Vec<(C64, Vec<C64>)> = dom
        .grid_with_pieces(samples)
        .into_iter()
        .map(|(z, k, s)| (z, vec![dom.piece(k).outward_normal_at(s)]))
        .collect();
    for (a, b) in dom.junctions() {
        let z = dom.piece(b).start();
        let na = dom.piece(a).outward_normal_at(1.0);
        let nb = dom.piece(b).outward_normal_at(0.0);
        let mut cands = vec![na, nb];
        if (na + nb).norm() > 1e-12 {
            cands.push((na + nb) / (na + nb).norm());
        }
        points.push((z, cands));
    }
    let mut centers = Vec::with_capacity(points.len());
    let mut failures = Vec::new();
    for (z, cands) in points {
        let found = cands.iter().map(|n| z + n * r).find(|&mu| disk_misses_domain(dom, mu, r));
        if found.is_none() {
            failures.push(z);
        }
        centers.push((z, found));
    }
    ExteriorDiskReport {
        passed: failures.is_empty(),
        radius: r,
        centers,
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcClause {
    pub arc: usize,
    pub has_data: bool,
    pub radius: f64,
    /// Every sampled `B(μ, R)` touches `Ω` at its `λ`.
    pub touches: bool,
    /// Radius of the smallest circle enclosing the sampled centers.
    pub enclosing_radius: f64,
    /// The sampled open disks share a point (`enclosing_radius < R`).
    pub common_intersection: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerClause {
    pub point: C64,
    pub incoming: usize,
    pub outgoing: usize,
    pub transversal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionAReport {
    pub passed: bool,
    pub arcs: Vec<ArcClause>,
    pub corners: Vec<CornerClause>,
}

/// Checks the per-arc exterior-disk data and transversality at junctions.
pub fn condition_a_check(dom: &PiecewiseCircularDomain) -> ConditionAReport {
    let scale = dom.bounding_radius().max(1.0);
    let arcs: Vec<ArcClause> = (0..dom.pieces().len())
        .map(|k| {
            let data: Vec<_> = dom.exterior().iter().filter(|e| e.arc == k).collect();
            if data.is_empty() {
                return ArcClause {
                    arc: k,
                    has_data: false,
                    radius: 0.0,
                    touches: false,
                    enclosing_radius: f64::INFINITY,
                    common_intersection: false,
                };
            }
            let r = data.iter().map(|e| e.radius).fold(f64::INFINITY, f64::min);
            let pairs: Vec<(C64, C64)> = data.iter().flat_map(|e| e.centers.iter().copied()).collect();
            let touches = !pairs.is_empty()
                && pairs.iter().all(|&(lambda, mu)| {
                    dom.piece(k).distance(lambda) <= CLOSURE_TOL * scale
                        && disk_misses_domain(dom, mu, r)
                });
            let mus: Vec<C64> = pairs.iter().map(|p| p.1).collect();
            let enclosing = min_enclosing_radius(&mus);
            ArcClause {
                arc: k,
                has_data: true,
                radius: r,
                touches,
                enclosing_radius: enclosing,
                common_intersection: !mus.is_empty() && enclosing < r,
            }
        })
        .collect();
    let corners: Vec<CornerClause> = dom
        .junctions()
        .into_iter()
        .map(|(a, b)| {
            // only the pieces near the junction matter: restrict both to a
            // short initial stretch before comparing direction intervals
            let (lb, wb) = local_directions(dom.piece(b));
            let (la, wa) = local_directions(&dom.piece(a).reversed());
            CornerClause {
                point: dom.piece(b).start(),
                incoming: a,
                outgoing: b,
                transversal: !intervals_meet(la, wa, lb, wb, 1e-9),
            }
        })
        .collect();
    let passed = arcs.iter().all(|a| a.touches && a.common_intersection)
        && corners.iter().all(|c| c.transversal);
    ConditionAReport { passed, arcs, corners }
}

fn local_directions(piece: &BoundaryPiece) -> (f64, f64) {
    const STRETCH: f64 = 1e-3;
    match piece {
        BoundaryPiece::Arc(a) if a.extent() > STRETCH => {
            let mut short = *a;
            short.to = a.from + a.orientation() * STRETCH;
            BoundaryPiece::Arc(short).leaving_directions()
        }
        _ => piece.leaving_directions(),
    }
}

/// Radius of the smallest circle containing all points (0 for one point).
pub fn min_enclosing_radius(points: &[C64]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let inside = |c: C64, r: f64, p: C64| (p - c).norm() <= r * (1.0 + 1e-12) + 1e-15;
    let mut c = points[0];
    let mut r = 0.0;
    for i in 1..points.len() {
        if inside(c, r, points[i]) {
            continue;
        }
        c = points[i];
        r = 0.0;
        for j in 0..i {
            if inside(c, r, points[j]) {
                continue;
            }
            c = (points[i] + points[j]) * 0.5;
            r = (points[i] - points[j]).norm() * 0.5;
            for k in 0..j {
                if inside(c, r, points[k]) {
                    continue;
                }
                (c, r) = circumcircle(points[i], points[j], points[k]);
            }
        }
    }
    r
}

fn circumcircle(a: C64, b: C64, c: C64) -> (C64, f64) {
    let (b, c2) = (b - a, c - a);
    let d = 2.0 * (b.re * c2.im - b.im * c2.re);
    if d.abs() < 1e-300 {
        let pairs = [(a, a + b), (a, a + c2), (a + b, a + c2)];
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm()))
            .unwrap();
        return ((p + q) * 0.5, (p - q).norm() * 0.5);
    }
    let ux = (c2.im * b.norm_sqr() - b.im * c2.norm_sqr()) / d;
    let uy = (b.re * c2.norm_sqr() - c2.re * b.norm_sqr()) / d;
    let u = C64::new(ux, uy);
    (a + u, u.norm())
}
