use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::arc::{BoundaryPiece, CircularArc};
use super::disk::GeneralizedDisk;
use crate::error::{Error, Result};
use crate::ext::ExtComplex;

/// Tolerance for endpoints of consecutive pieces, and for sampled exterior
/// centers sitting at distance `R` from their boundary point.
pub const CLOSURE_TOL: f64 = 1e-9;

/// Sampled exterior-disk data attached to one boundary piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExteriorData {
    /// Global piece index (pieces numbered curve by curve).
    pub arc: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    /// `(λ, μ)` pairs with `λ` on the piece and `|λ - μ| = R`.
    pub centers: Vec<(C64, C64)>,
}

/// A bounded region whose boundary is a finite union of closed curves made
/// of circular arcs and segments.
///
/// Curves are stored positively oriented: the region lies to the left of the
/// direction of travel, so the outer curve runs counter-clockwise and holes
/// run clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCircularDomain {
    pieces: Vec<BoundaryPiece>,
    curves: Vec<Vec<usize>>,
    outer: usize,
    exterior: Vec<ExteriorData>,
    complement_points: Vec<ExtComplex>,
}

impl PiecewiseCircularDomain {
    /// Builds a domain from curves of arcs given in any orientation.
    pub fn from_arcs(
        curves: Vec<Vec<CircularArc>>,
        exterior: Vec<ExteriorData>,
        complement_points: Vec<ExtComplex>,
    ) -> Result<Self> {
        for arc in curves.iter().flatten() {
            arc.validate()?;
        }
        let curves = curves
            .into_iter()
            .map(|c| c.into_iter().map(BoundaryPiece::Arc).collect())
            .collect();
        Self::from_pieces(curves, exterior, complement_points)
    }

    pub fn from_pieces(
        curves: Vec<Vec<BoundaryPiece>>,
        exterior: Vec<ExteriorData>,
        complement_points: Vec<ExtComplex>,
    ) -> Result<Self> {
        if curves.is_empty() || curves.iter().any(|c| c.is_empty()) {
            return Err(Error::Geometry("a domain needs at least one non-empty curve".into()));
        }
        let mut pieces = Vec::new();
        let mut index = Vec::new();
        for (ci, curve) in curves.iter().enumerate() {
            let first = pieces.len();
            for (k, piece) in curve.iter().enumerate() {
                let next = &curve[(k + 1) % curve.len()];
                let gap = (piece.end() - next.start()).norm();
                if gap > CLOSURE_TOL {
                    return Err(Error::Geometry(format!(
                        "curve {ci} does not close: piece {} ends {gap:.3e} away from the start of piece {}",
                        first + k,
                        first + (k + 1) % curve.len()
                    )));
                }
                if piece.length() <= 0.0 {
                    return Err(Error::Geometry(format!("piece {} has zero length", first + k)));
                }
            }
            pieces.extend_from_slice(curve);
            index.push((first..pieces.len()).collect::<Vec<_>>());
        }

        let mut dom = Self {
            pieces,
            curves: index,
            outer: 0,
            exterior: Vec::new(),
            complement_points: Vec::new(),
        };
        dom.normalize_orientation()?;

        for ext in &exterior {
            if ext.arc >= dom.pieces.len() {
                return Err(Error::Geometry(format!(
                    "exterior data refers to arc {} but the domain has {} arcs",
                    ext.arc,
                    dom.pieces.len()
                )));
            }
            if !(ext.radius > 0.0 && ext.radius.is_finite()) {
                return Err(Error::Geometry(format!(
                    "exterior radius for arc {} must be positive, got {}",
                    ext.arc, ext.radius
                )));
            }
            for (i, (lambda, mu)) in ext.centers.iter().enumerate() {
                let dev = ((lambda - mu).norm() - ext.radius).abs();
                if dev > CLOSURE_TOL * ext.radius.max(1.0) {
                    return Err(Error::Geometry(format!(
                        "exterior center {i} of arc {}: |λ - μ| differs from R = {} by {dev:.3e}",
                        ext.arc, ext.radius
                    )));
                }
            }
        }
        for (i, p) in complement_points.iter().enumerate() {
            if let ExtComplex::Finite(z) = p {
                if dom.contains_closure(*z, 0.0) {
                    return Err(Error::Geometry(format!(
                        "complement point {i} = {z} lies in the closed domain"
                    )));
                }
            }
        }
        dom.exterior = exterior;
        dom.complement_points = complement_points;
        Ok(dom)
    }

    fn curve_area(&self, curve: usize) -> f64 {
        self.curves[curve].iter().map(|&k| self.pieces[k].signed_area()).sum()
    }

    fn reverse_curve(&mut self, curve: usize) {
        for &k in &self.curves[curve] {
            self.pieces[k] = self.pieces[k].reversed();
        }
        self.curves[curve].reverse();
    }

    fn normalize_orientation(&mut self) -> Result<()> {
        let areas: Vec<f64> = (0..self.curves.len()).map(|c| self.curve_area(c)).collect();
        let outer = (0..areas.len())
            .max_by(|&a, &b| areas[a].abs().total_cmp(&areas[b].abs()))
            .unwrap_or(0);
        self.outer = outer;
        for (c, &area) in areas.iter().enumerate() {
            if area == 0.0 {
                return Err(Error::Geometry(format!("curve {c} encloses no area")));
            }
            if (c == outer) != (area > 0.0) {
                self.reverse_curve(c);
            }
        }
        for c in 0..self.curves.len() {
            if c == outer {
                continue;
            }
            let p = self.pieces[self.curves[c][0]].point_at(0.5);
            if self.curve_winding(outer, p) != Some(1) {
                return Err(Error::Geometry(format!(
                    "curve {c} is not nested inside the outer curve {outer}"
                )));
            }
        }
        Ok(())
    }

    /// A disk as a one-arc domain, with no exterior data.
    pub fn disk(center: C64, radius: f64) -> Result<Self> {
        Self::from_arcs(
            vec![vec![CircularArc::new(center, radius, 0.0, TAU)?]],
            Vec::new(),
            vec![ExtComplex::Infinity],
        )
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.pieces
    }

    pub fn piece(&self, k: usize) -> &BoundaryPiece {
        &self.pieces[k]
    }

    /// Piece indices of each curve, in order of travel.
    pub fn curves(&self) -> &[Vec<usize>] {
        &self.curves
    }

    pub fn outer_curve(&self) -> usize {
        self.outer
    }

    pub fn hole_count(&self) -> usize {
        self.curves.len() - 1
    }

    pub fn exterior(&self) -> &[ExteriorData] {
        &self.exterior
    }

    pub fn complement_points(&self) -> &[ExtComplex] {
        &self.complement_points
    }

    /// Replaces the exterior data by centers along the outward normal at
    /// `samples` points of every piece, all with radius `r`.
    pub fn with_normal_exterior(mut self, r: f64, samples: usize) -> Result<Self> {
        if !(r > 0.0) || samples == 0 {
            return Err(Error::InvalidArgument("need r > 0 and samples ≥ 1".into()));
        }
        self.exterior = (0..self.pieces.len())
            .map(|k| {
                let piece = &self.pieces[k];
                let centers = (0..samples)
                    .map(|i| {
                        let s = if samples == 1 { 0.5 } else { i as f64 / (samples - 1) as f64 };
                        let lambda = piece.point_at(s);
                        (lambda, lambda + piece.outward_normal_at(s) * r)
                    })
                    .collect();
                ExteriorData { arc: k, radius: r, centers }
            })
            .collect();
        Ok(self)
    }

    pub fn with_complement_points(mut self, points: Vec<ExtComplex>) -> Self {
        self.complement_points = points;
        self
    }

    /// Winding number of `curve` about `p`; `None` when `p` is on the curve.
    pub fn curve_winding(&self, curve: usize, p: C64) -> Option<i32> {
        let tol = 1e-14 * (1.0 + p.norm());
        let total: f64 = self.curves[curve]
            .iter()
            .map(|&k| self.pieces[k].arg_change(p, tol))
            .sum::<Option<f64>>()?;
        Some((total / TAU).round() as i32)
    }

    pub fn boundary_distance(&self, p: C64) -> f64 {
        self.pieces
            .iter()
            .map(|piece| piece.distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    fn inside_topologically(&self, p: C64) -> Option<bool> {
        if self.curve_winding(self.outer, p)? == 0 {
            return Some(false);
        }
        for c in 0..self.curves.len() {
            if c != self.outer && self.curve_winding(c, p)? != 0 {
                return Some(false);
            }
        }
        Some(true)
    }

    /// Points of `Ω` at distance more than `tol` from the boundary.
    pub fn contains_interior(&self, p: C64, tol: f64) -> bool {
        if self.boundary_distance(p) <= tol {
            return false;
        }
        self.inside_topologically(p).unwrap_or(false)
    }

    /// Points of `Ω̄` or within `tol` of the boundary.
    pub fn contains_closure(&self, p: C64, tol: f64) -> bool {
        if self.boundary_distance(p) <= tol {
            return true;
        }
        self.inside_topologically(p).unwrap_or(true)
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(BoundaryPiece::length).sum()
    }

    /// Largest modulus of a boundary point, sampled finely.
    pub fn bounding_radius(&self) -> f64 {
        self.pieces
            .iter()
            .flat_map(|p| (0..=64).map(move |i| p.point_at(i as f64 / 64.0).norm()))
            .fold(0.0, f64::max)
    }

    /// `n` points placed at equal arc-length spacing along the curves in
    /// order, starting at the first point of the first curve.
    pub fn boundary_grid(&self, n: usize) -> Vec<C64> {
        self.grid_with_pieces(n).into_iter().map(|(z, _, _)| z).collect()
    }

    pub(crate) fn grid_with_pieces(&self, n: usize) -> Vec<(C64, usize, f64)> {
        let order: Vec<usize> = self.curves.iter().flatten().copied().collect();
        let total = self.length();
        let mut out = Vec::with_capacity(n);
        let mut idx = 0;
        let mut start = 0.0;
        for i in 0..n {
            let s = total * i as f64 / n as f64;
            while idx + 1 < order.len() && s >= start + self.pieces[order[idx]].length() {
                start += self.pieces[order[idx]].length();
                idx += 1;
            }
            let k = order[idx];
            let len = self.pieces[k].length();
            let t = ((s - start) / len).clamp(0.0, 1.0);
            out.push((self.pieces[k].point_at(t), k, t));
        }
        out
    }

    /// Junctions `(incoming piece, outgoing piece)` within each curve.
    pub fn junctions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for curve in &self.curves {
            if curve.len() < 2 {
                continue;
            }
            for i in 0..curve.len() {
                out.push((curve[i], curve[(i + 1) % curve.len()]));
            }
        }
        out
    }

    /// Complement component containing `z`: 0 for the unbounded one, `1 + h`
    /// for hole `h` (holes counted in curve order, skipping the outer curve).
    pub fn component_of(&self, z: ExtComplex, tol: f64) -> Option<usize> {
        let ExtComplex::Finite(p) = z else {
            return Some(0);
        };
        if self.contains_closure(p, tol) {
            return None;
        }
        if self.curve_winding(self.outer, p)? == 0 {
            return Some(0);
        }
        let mut hole = 0;
        for c in 0..self.curves.len() {
            if c == self.outer {
                continue;
            }
            hole += 1;
            if self.curve_winding(c, p)? != 0 {
                return Some(hole);
            }
        }
        None
    }
}

/// A region given either as a finite intersection of generalized disks or as
/// a piecewise-circular domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Disks(Vec<GeneralizedDisk>),
    Piecewise(PiecewiseCircularDomain),
}

impl From<GeneralizedDisk> for Domain {
    fn from(d: GeneralizedDisk) -> Self {
        Domain::Disks(vec![d])
    }
}

impl From<PiecewiseCircularDomain> for Domain {
    fn from(d: PiecewiseCircularDomain) -> Self {
        Domain::Piecewise(d)
    }
}

impl Domain {
    pub fn unit_disk() -> Self {
        GeneralizedDisk::unit().into()
    }

    pub fn intersection(disks: Vec<GeneralizedDisk>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::InvalidArgument("intersection of no disks".into()));
        }
        for d in &disks {
            d.validate()?;
        }
        Ok(Domain::Disks(disks))
    }

    pub fn disks(&self) -> Option<&[GeneralizedDisk]> {
        match self {
            Domain::Disks(d) => Some(d),
            Domain::Piecewise(_) => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Domain::Disks(d) => d.iter().any(GeneralizedDisk::is_bounded),
            Domain::Piecewise(_) => true,
        }
    }

    pub fn contains_closure(&self, z: ExtComplex, tol: f64) -> bool {
        match (self, z) {
            (Domain::Disks(d), _) => d.iter().all(|d| d.signed_distance(z) >= -tol),
            (Domain::Piecewise(_), ExtComplex::Infinity) => false,
            (Domain::Piecewise(p), ExtComplex::Finite(z)) => p.contains_closure(z, tol),
        }
    }

    pub fn contains_interior(&self, z: ExtComplex, tol: f64) -> bool {
        match (self, z) {
            (Domain::Disks(d), _) => d.iter().all(|d| d.signed_distance(z) > tol),
            (Domain::Piecewise(_), ExtComplex::Infinity) => false,
            (Domain::Piecewise(p), ExtComplex::Finite(z)) => p.contains_interior(z, tol),
        }
    }

    /// Distance to the boundary, valid for points of the closure.
    pub fn boundary_distance(&self, z: C64) -> f64 {
        match self {
            Domain::Disks(d) => d
                .iter()
                .map(|d| d.signed_distance(ExtComplex::Finite(z)).abs())
                .fold(f64::INFINITY, f64::min),
            Domain::Piecewise(p) => p.boundary_distance(z),
        }
    }

    pub fn on_boundary(&self, z: C64, tol: f64) -> bool {
        self.contains_closure(ExtComplex::Finite(z), tol) && self.boundary_distance(z) <= tol
    }

    /// A length scale of the region, used to size probes.
    pub fn scale(&self) -> f64 {
        match self {
            Domain::Disks(d) => d
                .iter()
                .map(|d| match *d {
                    GeneralizedDisk::Closed { center, radius } => center.norm() + radius,
                    GeneralizedDisk::Exterior { center, radius } => center.norm() + radius,
                    GeneralizedDisk::HalfPlane { anchor, .. } => anchor.norm(),
                })
                .fold(1.0, f64::max),
            Domain::Piecewise(p) => p.bounding_radius().max(1.0),
        }
    }

    /// Boundary description as closed curves; rejects unbounded regions.
    pub fn to_piecewise(&self) -> Result<PiecewiseCircularDomain> {
        match self {
            Domain::Piecewise(p) => Ok(p.clone()),
            Domain::Disks(d) => disks_to_piecewise(d),
        }
    }

    /// `n` boundary points equally spaced in arc length.
    pub fn boundary_grid(&self, n: usize) -> Result<Vec<C64>> {
        if n == 0 {
            return Err(Error::InvalidArgument("boundary grid needs n ≥ 1".into()));
        }
        Ok(self.to_piecewise()?.boundary_grid(n))
    }

    /// Number of connected components of `Ĉ ∖ Ω̄`.
    pub fn component_count(&self) -> usize {
        match self {
            Domain::Disks(d) => {
                let groups = disk_complement_groups(d);
                let mut roots: Vec<usize> = groups.clone();
                roots.sort_unstable();
                roots.dedup();
                roots.len()
            }
            Domain::Piecewise(p) => 1 + p.hole_count(),
        }
    }

    /// Label of the complement component holding `z`, or `None` when `z` is
    /// in the closure (within `tol`).
    pub fn component_of(&self, z: ExtComplex, tol: f64) -> Option<usize> {
        match self {
            Domain::Disks(d) => {
                let groups = disk_complement_groups(d);
                d.iter()
                    .position(|d| d.signed_distance(z) < -tol)
                    .map(|k| groups[k])
            }
            Domain::Piecewise(p) => p.component_of(z, tol),
        }
    }

    /// Complement representatives declared with the domain, or one point per
    /// component computed from the description.
    pub fn default_pole_set(&self) -> Vec<ExtComplex> {
        match self {
            Domain::Piecewise(p) if !p.complement_points().is_empty() => p.complement_points().to_vec(),
            Domain::Piecewise(p) => {
                let mut out = vec![ExtComplex::Infinity];
                for c in 0..p.curves().len() {
                    if c != p.outer_curve() {
                        if let Some(z) = hole_point(p, c) {
                            out.push(ExtComplex::Finite(z));
                        }
                    }
                }
                out
            }
            Domain::Disks(d) => {
                let groups = disk_complement_groups(d);
                let mut seen = Vec::new();
                let mut out = Vec::new();
                for (k, disk) in d.iter().enumerate() {
                    if seen.contains(&groups[k]) {
                        continue;
                    }
                    seen.push(groups[k]);
                    out.push(match *disk {
                        GeneralizedDisk::Closed { .. } => ExtComplex::Infinity,
                        GeneralizedDisk::Exterior { center, .. } => ExtComplex::Finite(center),
                        GeneralizedDisk::HalfPlane { anchor, direction } => {
                            ExtComplex::Finite(anchor - direction.conj())
                        }
                    });
                }
                out
            }
        }
    }
}

/// Pole-set validity report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleSetReport {
    pub valid: bool,
    /// Indices of poles lying in the closed domain.
    pub inside: Vec<usize>,
    pub components: usize,
    /// Components containing no pole.
    pub uncovered: Vec<usize>,
}

pub fn pole_set_report(poles: &[ExtComplex], domain: &Domain) -> PoleSetReport {
    let tol = 1e-12 * domain.scale();
    let components = domain.component_count();
    let mut covered = vec![false; components];
    let mut inside = Vec::new();
    for (i, &p) in poles.iter().enumerate() {
        match domain.component_of(p, tol) {
            Some(c) if c < components => covered[c] = true,
            Some(_) => {}
            None => inside.push(i),
        }
    }
    let uncovered: Vec<usize> = (0..components).filter(|&c| !covered[c]).collect();
    PoleSetReport {
        valid: inside.is_empty() && uncovered.is_empty(),
        inside,
        components,
        uncovered,
    }
}

/// Every pole lies off `Ω̄` and every complement component holds a pole.
pub fn pole_set_valid(poles: &[ExtComplex], domain: &Domain) -> bool {
    pole_set_report(poles, domain).valid
}

fn hole_point(p: &PiecewiseCircularDomain, curve: usize) -> Option<C64> {
    // step inward from the hole boundary along the outward normal
    let k = p.curves()[curve][0];
    let piece = p.piece(k);
    let z = piece.point_at(0.5);
    let n = piece.outward_normal_at(0.5);
    let mut step = piece.length().min(piece.min_radius()) * 0.5;
    for _ in 0..40 {
        let q = z + n * step;
        if p.component_of(ExtComplex::Finite(q), 0.0).is_some_and(|c| c > 0) {
            return Some(q);
        }
        step *= 0.5;
    }
    None
}

/// Open complement of a generalized disk.
#[derive(Clone, Copy)]
enum Complement {
    Inside(C64, f64),
    Outside(C64, f64),
    Half(C64, C64),
}

fn complement(d: &GeneralizedDisk) -> Complement {
    match *d {
        GeneralizedDisk::Closed { center, radius } => Complement::Outside(center, radius),
        GeneralizedDisk::Exterior { center, radius } => Complement::Inside(center, radius),
        GeneralizedDisk::HalfPlane { anchor, direction } => Complement::Half(anchor, direction),
    }
}

fn complements_meet(a: Complement, b: Complement) -> bool {
    use Complement::*;
    match (a, b) {
        (Inside(c1, r1), Inside(c2, r2)) => (c1 - c2).norm() < r1 + r2,
        (Inside(c, r), Outside(a, s)) | (Outside(a, s), Inside(c, r)) => (c - a).norm() + r > s,
        (Outside(..), Outside(..)) => true,
        (Inside(c, r), Half(a, al)) | (Half(a, al), Inside(c, r)) => (al * (c - a)).re < r,
        (Outside(..), Half(..)) | (Half(..), Outside(..)) => true,
        (Half(a1, u), Half(a2, v)) => {
            if (u + v).norm() <= 1e-12 {
                (u * (a2 - a1)).re < 0.0
            } else {
                true
            }
        }
    }
}

/// Union-find labels grouping overlapping open complements; label = least
/// index in the group.
fn disk_complement_groups(disks: &[GeneralizedDisk]) -> Vec<usize> {
    let n = disks.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let comps: Vec<Complement> = disks.iter().map(complement).collect();
    for i in 0..n {
        for j in i + 1..n {
            if complements_meet(comps[i], comps[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Boundary of a generalized disk as a circle or a line.
#[derive(Clone, Copy)]
enum Boundary {
    Circle(C64, f64),
    /// Point and unit direction of travel (region on the left).
    Line(C64, C64),
}

fn boundary_of(d: &GeneralizedDisk) -> Boundary {
    match *d {
        GeneralizedDisk::Closed { center, radius } | GeneralizedDisk::Exterior { center, radius } => {
            Boundary::Circle(center, radius)
        }
        GeneralizedDisk::HalfPlane { anchor, direction } => {
            Boundary::Line(anchor, C64::new(0.0, -1.0) * direction.conj())
        }
    }
}

fn boundary_intersections(a: Boundary, b: Boundary) -> Vec<C64> {
    match (a, b) {
        (Boundary::Circle(c1, r1), Boundary::Circle(c2, r2)) => {
            let d = (c2 - c1).norm();
            if d == 0.0 || d > r1 + r2 + 1e-14 * (r1 + r2) || d < (r1 - r2).abs() - 1e-14 * (r1 + r2) {
                return Vec::new();
            }
            let u = (c2 - c1) / d;
            let along = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
            let h2 = r1 * r1 - along * along;
            if h2 <= 1e-24 * r1 * r1 {
                return vec![c1 + u * along];
            }
            let h = h2.sqrt();
            let base = c1 + u * along;
            let perp = u * C64::new(0.0, 1.0);
            vec![base + perp * h, base - perp * h]
        }
        (Boundary::Circle(c, r), Boundary::Line(p, u)) | (Boundary::Line(p, u), Boundary::Circle(c, r)) => {
            let w = p - c;
            let b = (u.conj() * w).re;
            let disc = b * b - (w.norm_sqr() - r * r);
            if disc < -1e-14 * r * r {
                Vec::new()
            } else if disc <= 1e-24 * r * r {
                vec![p - u * b]
            } else {
                let s = disc.sqrt();
                vec![p + u * (-b + s), p + u * (-b - s)]
            }
        }
        (Boundary::Line(p1, u1), Boundary::Line(p2, u2)) => {
            // p1 + t u1 = p2 + s u2
            let cross = (u2.conj() * u1).im;
            if cross.abs() < 1e-14 {
                return Vec::new();
            }
            let t = (u2.conj() * (p2 - p1)).im / cross;
            vec![p1 + u1 * t]
        }
    }
}

fn disks_to_piecewise(disks: &[GeneralizedDisk]) -> Result<PiecewiseCircularDomain> {
    let mut uniq: Vec<GeneralizedDisk> = Vec::new();
    for d in disks {
        d.validate()?;
        if !uniq.iter().any(|u| u.approx_eq(d, 1e-12)) {
            uniq.push(*d);
        }
    }
    if !uniq.iter().any(GeneralizedDisk::is_bounded) {
        return Err(Error::Geometry(
            "unbounded boundary requires a truncation parameter; add a bounding closed disk".into(),
        ));
    }
    let scale = Domain::Disks(uniq.clone()).scale();
    let tol = 1e-10 * scale;
    let keep = |k: usize, z: C64| {
        uniq.iter()
            .enumerate()
            .all(|(j, d)| j == k || d.signed_distance(ExtComplex::Finite(z)) >= -tol)
    };

    let mut pieces = Vec::new();
    for (k, disk) in uniq.iter().enumerate() {
        let bk = boundary_of(disk);
        let cuts: Vec<C64> = uniq
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .flat_map(|(_, d)| boundary_intersections(bk, boundary_of(d)))
            .collect();
        match bk {
            Boundary::Circle(center, radius) => {
                let ccw = matches!(disk, GeneralizedDisk::Closed { .. });
                let mut angles: Vec<f64> =
                    cuts.iter().map(|p| super::arc::wrap((p - center).arg())).collect();
                angles.sort_by(f64::total_cmp);
                angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
                if angles.len() > 1 && TAU - angles[angles.len() - 1] + angles[0] < 1e-12 {
                    angles.pop();
                }
                if angles.is_empty() {
                    if keep(k, center + C64::from_polar(radius, PI)) {
                        let (from, to) = if ccw { (0.0, TAU) } else { (0.0, -TAU) };
                        pieces.push(BoundaryPiece::Arc(CircularArc { center, radius, from, to }));
                    }
                    continue;
                }
                let m = angles.len();
                let mut arcs = Vec::new();
                for i in 0..m {
                    let a0 = angles[i];
                    let a1 = if i + 1 < m { angles[i + 1] } else { angles[0] + TAU };
                    if keep(k, center + C64::from_polar(radius, 0.5 * (a0 + a1))) {
                        let (from, to) = if ccw { (a0, a1) } else { (a1, a0) };
                        arcs.push(BoundaryPiece::Arc(CircularArc { center, radius, from, to }));
                    }
                }
                if !ccw {
                    arcs.reverse();
                }
                pieces.extend(arcs);
            }
            Boundary::Line(p, u) => {
                let mut ts: Vec<f64> = cuts.iter().map(|z| (u.conj() * (z - p)).re).collect();
                ts.sort_by(f64::total_cmp);
                ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * scale);
                for w in ts.windows(2) {
                    if keep(k, p + u * (0.5 * (w[0] + w[1]))) {
                        pieces.push(BoundaryPiece::Segment {
                            start: p + u * w[0],
                            end: p + u * w[1],
                        });
                    }
                }
            }
        }
    }
    if pieces.is_empty() {
        return Err(Error::Geometry("disk intersection has empty interior".into()));
    }

    let join = 1e-8 * scale;
    let mut used = vec![false; pieces.len()];
    let mut curves = Vec::new();
    while let Some(first) = used.iter().position(|u| !u) {
        used[first] = true;
        let mut curve = vec![pieces[first]];
        let origin = pieces[first].start();
        loop {
            let end = curve.last().map(BoundaryPiece::end).unwrap_or(origin);
            if (end - origin).norm() <= join {
                break;
            }
            let next = (0..pieces.len())
                .filter(|&j| !used[j])
                .map(|j| (j, (pieces[j].start() - end).norm()))
                .filter(|(_, d)| *d <= join)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            let Some((j, _)) = next else {
                return Err(Error::Geometry("boundary pieces of the disk intersection do not close".into()));
            };
            used[j] = true;
            curve.push(pieces[j]);
        }
        curves.push(curve);
    }
    PiecewiseCircularDomain::from_pieces(curves, Vec::new(), Vec::new())
}
