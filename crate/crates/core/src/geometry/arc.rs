use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arc of the circle `|z - center| = radius` swept from angle `from` to `to`.
/// Counter-clockwise when `to > from`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularArc {
    pub center: C64,
    pub radius: f64,
    pub from: f64,
    pub to: f64,
}

impl CircularArc {
    pub fn new(center: C64, radius: f64, from: f64, to: f64) -> Result<Self> {
        let arc = Self { center, radius, from, to };
        arc.validate()?;
        Ok(arc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "arc radius must be positive, got {}",
                self.radius
            )));
        }
        let extent = self.extent();
        if !(extent > 0.0 && extent <= TAU + 1e-12) || !self.from.is_finite() || !self.to.is_finite()
        {
            return Err(Error::InvalidArgument(format!(
                "arc angular extent must lie in (0, 2π], got {extent}"
            )));
        }
        Ok(())
    }

    /// `+1` counter-clockwise, `-1` clockwise.
    pub fn orientation(&self) -> f64 {
        if self.to >= self.from {
            1.0
        } else {
            -1.0
        }
    }

    pub fn extent(&self) -> f64 {
        (self.to - self.from).abs()
    }

    pub fn point(&self, angle: f64) -> C64 {
        self.center + C64::from_polar(self.radius, angle)
    }

    /// Whether `angle` lies on the swept range, up to `tol` radians.
    pub fn covers_angle(&self, angle: f64, tol: f64) -> bool {
        let t = ((angle - self.from) * self.orientation()).rem_euclid(TAU);
        t <= self.extent() + tol || t >= TAU - tol
    }

    pub fn reversed(&self) -> Self {
        Self {
            from: self.to,
            to: self.from,
            ..*self
        }
    }
}

/// A piece of a boundary curve: a circular arc or a straight segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryPiece {
    Arc(CircularArc),
    Segment { start: C64, end: C64 },
}

impl BoundaryPiece {
    pub fn start(&self) -> C64 {
        match self {
            Self::Arc(a) => a.point(a.from),
            Self::Segment { start, .. } => *start,
        }
    }

    pub fn end(&self) -> C64 {
        match self {
            Self::Arc(a) => a.point(a.to),
            Self::Segment { end, .. } => *end,
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Self::Arc(a) => a.radius * a.extent(),
            Self::Segment { start, end } => (end - start).norm(),
        }
    }

    /// Point at parameter `s ∈ [0, 1]`, proportional to arc length.
    pub fn point_at(&self, s: f64) -> C64 {
        match self {
            Self::Arc(a) => a.point(a.from + s * (a.to - a.from)),
            Self::Segment { start, end } => start + (end - start) * s,
        }
    }

    /// Unit tangent in the direction of travel.
    pub fn tangent_at(&self, s: f64) -> C64 {
        match self {
            Self::Arc(a) => {
                let theta = a.from + s * (a.to - a.from);
                C64::new(0.0, a.orientation()) * C64::from_polar(1.0, theta)
            }
            Self::Segment { start, end } => (end - start) / (end - start).norm(),
        }
    }

    /// Unit normal pointing away from the region, which lies to the left.
    pub fn outward_normal_at(&self, s: f64) -> C64 {
        self.tangent_at(s) * C64::new(0.0, -1.0)
    }

    pub fn reversed(&self) -> Self {
        match self {
            Self::Arc(a) => Self::Arc(a.reversed()),
            Self::Segment { start, end } => Self::Segment {
                start: *end,
                end: *start,
            },
        }
    }

    /// Euclidean distance from `p` to the piece.
    pub fn distance(&self, p: C64) -> f64 {
        match self {
            Self::Arc(a) => {
                let q = p - a.center;
                let endpoints = (p - self.start()).norm().min((p - self.end()).norm());
                if q.norm() == 0.0 {
                    return a.radius;
                }
                if a.covers_angle(q.arg(), 0.0) {
                    (q.norm() - a.radius).abs().min(endpoints)
                } else {
                    endpoints
                }
            }
            Self::Segment { start, end } => {
                let d = end - start;
                let t = (((p - start) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                (p - (start + d * t)).norm()
            }
        }
    }

    /// Net change of `arg(z - p)` along the piece; `None` when `p` is on it.
    pub fn arg_change(&self, p: C64, tol: f64) -> Option<f64> {
        if self.distance(p) <= tol {
            return None;
        }
        Some(match self {
            Self::Segment { start, end } => ((end - p) / (start - p)).arg(),
            Self::Arc(a) => {
                let q = p - a.center;
                let (t0, t1) = (a.from, a.to);
                if q.norm() < a.radius {
                    // arg(r e^{iθ} - q) = θ + Arg(1 - (q/r) e^{-iθ})
                    let w = q / a.radius;
                    let g = |t: f64| (C64::new(1.0, 0.0) - w * C64::from_polar(1.0, -t)).arg();
                    (t1 - t0) + g(t1) - g(t0)
                } else {
                    // arg(-q) + Arg(1 - (r/q) e^{iθ})
                    let w = C64::new(a.radius, 0.0) / q;
                    let g = |t: f64| (C64::new(1.0, 0.0) - w * C64::from_polar(1.0, t)).arg();
                    g(t1) - g(t0)
                }
            }
        })
    }

    /// Contribution `½ ∫ Im(conj(z) dz)` to the signed enclosed area.
    pub fn signed_area(&self) -> f64 {
        match self {
            Self::Segment { start, end } => 0.5 * (start.conj() * end).im,
            Self::Arc(a) => {
                let chord = C64::from_polar(1.0, a.to) - C64::from_polar(1.0, a.from);
                let lin = (a.center.conj() * C64::new(0.0, -1.0) * chord).re;
                0.5 * (a.radius * a.radius * (a.to - a.from) + a.radius * lin)
            }
        }
    }

    /// Directions `arg(z - start)` for `z` on the piece, as an interval
    /// `[lo, lo + width]` (width ≥ 0) measured counter-clockwise.
    pub fn leaving_directions(&self) -> (f64, f64) {
        let tau = self.tangent_at(0.0).arg();
        match self {
            Self::Segment { .. } => (tau, 0.0),
            Self::Arc(a) => {
                let half = 0.5 * a.extent();
                if a.orientation() > 0.0 {
                    (tau, half)
                } else {
                    (tau - half, half)
                }
            }
        }
    }

    pub fn min_radius(&self) -> f64 {
        match self {
            Self::Arc(a) => a.radius,
            Self::Segment { .. } => f64::INFINITY,
        }
    }
}

/// `x mod 2π` in `[0, 2π)`.
pub(crate) fn wrap(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Whether closed direction intervals `[a, a + wa]` and `[b, b + wb]` on the
/// circle meet, with `tol` radians of slack.
pub(crate) fn intervals_meet(a: f64, wa: f64, b: f64, wb: f64, tol: f64) -> bool {
    let d = wrap(b - a);
    d <= wa + tol || d >= TAU - wb - tol
}
