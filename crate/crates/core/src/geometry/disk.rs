use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtComplex;

/// A closed disk of the Riemann sphere.
///
/// `HalfPlane { anchor, direction }` is `{z : Re direction·(z - anchor) ≥ 0}`
/// together with `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GeneralizedDisk {
    Closed { center: C64, radius: f64 },
    Exterior { center: C64, radius: f64 },
    HalfPlane { anchor: C64, direction: C64 },
}

/// Hermitian form `[[A, B], [conj B, C]]` whose sublevel set
/// `A|z|² + 2 Re(conj(B) z) + C ≤ 0` is the disk.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HermitianForm {
    pub a: f64,
    pub b: C64,
    pub c: f64,
}

impl HermitianForm {
    #[cfg(test)]
    pub(crate) fn value(&self, z: ExtComplex) -> f64 {
        match z {
            ExtComplex::Infinity => self.a,
            ExtComplex::Finite(z) => self.a * z.norm_sqr() + 2.0 * (self.b.conj() * z).re + self.c,
        }
    }

    fn scale_norm(&self) -> f64 {
        self.a.abs().max(self.b.norm()).max(self.c.abs())
    }
}

impl GeneralizedDisk {
    pub fn closed(center: C64, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(Self::Closed { center, radius })
    }

    pub fn exterior(center: C64, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(Self::Exterior { center, radius })
    }

    pub fn half_plane(anchor: C64, direction: C64) -> Result<Self> {
        if (direction.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "half-plane direction must be unimodular, |α| = {}",
                direction.norm()
            )));
        }
        Ok(Self::HalfPlane { anchor, direction })
    }

    /// Unit disk `|z| ≤ 1`.
    pub fn unit() -> Self {
        Self::Closed {
            center: C64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Closed { radius, .. } | Self::Exterior { radius, .. } => check_radius(radius),
            Self::HalfPlane { anchor, direction } => Self::half_plane(anchor, direction).map(|_| ()),
        }
    }

    pub(crate) fn form(&self) -> HermitianForm {
        match *self {
            Self::Closed { center, radius } => HermitianForm {
                a: 1.0,
                b: -center,
                c: center.norm_sqr() - radius * radius,
            },
            Self::Exterior { center, radius } => HermitianForm {
                a: -1.0,
                b: center,
                c: radius * radius - center.norm_sqr(),
            },
            Self::HalfPlane { anchor, direction } => HermitianForm {
                a: 0.0,
                b: -direction.conj() * 0.5,
                c: (direction * anchor).re,
            },
        }
    }

    pub(crate) fn from_form(h: HermitianForm) -> Result<Self> {
        let scale = h.scale_norm();
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Degenerate("degenerate circle form".into()));
        }
        if h.a.abs() <= 1e-12 * scale {
            let alpha = -h.b.conj() * 2.0;
            let n = alpha.norm();
            if n <= 1e-14 * scale {
                return Err(Error::Degenerate("degenerate line form".into()));
            }
            let direction = alpha / n;
            // Re α(z - a) ≥ 0 with Re(α a) = c / (2|b|)
            let c = h.c / n;
            return Ok(Self::HalfPlane {
                anchor: direction.conj() * c,
                direction,
            });
        }
        let center = -h.b / h.a;
        let r2 = center.norm_sqr() - h.c / h.a;
        if !(r2 > 0.0) {
            return Err(Error::Degenerate("circle form with empty interior".into()));
        }
        let radius = r2.sqrt();
        Ok(if h.a > 0.0 {
            Self::Closed { center, radius }
        } else {
            Self::Exterior { center, radius }
        })
    }

    /// Closed membership; `∞` belongs to exterior disks and half-planes.
    pub fn contains(&self, z: ExtComplex) -> bool {
        self.contains_tol(z, 0.0)
    }

    /// Membership of the `tol`-neighbourhood (in the natural distance of each
    /// variant: modulus for disks, signed distance for half-planes).
    pub fn contains_tol(&self, z: ExtComplex, tol: f64) -> bool {
        self.signed_distance(z) >= -tol
    }

    /// Positive inside, zero on the boundary, negative outside. Euclidean
    /// distance to the boundary for finite points.
    pub fn signed_distance(&self, z: ExtComplex) -> f64 {
        match (*self, z) {
            (Self::Closed { .. }, ExtComplex::Infinity) => f64::NEG_INFINITY,
            (Self::Exterior { .. }, ExtComplex::Infinity) => f64::INFINITY,
            (Self::HalfPlane { .. }, ExtComplex::Infinity) => 0.0,
            (Self::Closed { center, radius }, ExtComplex::Finite(z)) => radius - (z - center).norm(),
            (Self::Exterior { center, radius }, ExtComplex::Finite(z)) => (z - center).norm() - radius,
            (Self::HalfPlane { anchor, direction }, ExtComplex::Finite(z)) => {
                (direction * (z - anchor)).re
            }
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Self::Closed { .. })
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self, Self::Exterior { .. })
    }

    /// A parametrization of the boundary circle or line, `t ∈ [0, 1)`.
    /// Lines are parametrized through `∞` via `tan`.
    pub fn boundary_point(&self, t: f64) -> ExtComplex {
        use std::f64::consts::PI;
        match *self {
            Self::Closed { center, radius } | Self::Exterior { center, radius } => {
                ExtComplex::Finite(center + C64::from_polar(radius, 2.0 * PI * t))
            }
            Self::HalfPlane { anchor, direction } => {
                let s = (PI * (t - 0.5)).tan();
                if !s.is_finite() || s.abs() > 1e15 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(anchor + C64::new(0.0, s) * direction.conj())
                }
            }
        }
    }

    /// A point strictly inside (finite).
    pub fn interior_point(&self) -> C64 {
        match *self {
            Self::Closed { center, .. } => center,
            Self::Exterior { center, radius } => center + C64::new(2.0 * radius, 0.0),
            Self::HalfPlane { anchor, direction } => anchor + direction.conj(),
        }
    }

    /// Set equality up to `tol` in the variant parameters.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (*self, *other) {
            (
                Self::Closed { center: a, radius: r },
                Self::Closed { center: b, radius: s },
            )
            | (
                Self::Exterior { center: a, radius: r },
                Self::Exterior { center: b, radius: s },
            ) => (a - b).norm() <= tol && (r - s).abs() <= tol,
            (
                Self::HalfPlane { anchor: a, direction: u },
                Self::HalfPlane { anchor: b, direction: v },
            ) => (u - v).norm() <= tol && (u * (a - b)).re.abs() <= tol,
            _ => false,
        }
    }

    /// Whether `self ⊆ other`, decided from the variant parameters.
    pub fn is_subset_of(&self, other: &Self, tol: f64) -> bool {
        match (*self, *other) {
            (Self::Closed { center: a, radius: r }, Self::Closed { center: b, radius: s }) => {
                (a - b).norm() + r <= s + tol
            }
            (Self::Closed { center: a, radius: r }, Self::Exterior { center: b, radius: s }) => {
                (a - b).norm() >= r + s - tol
            }
            (Self::Closed { center, radius }, Self::HalfPlane { anchor, direction }) => {
                (direction * (center - anchor)).re >= radius - tol
            }
            (Self::Exterior { center: a, radius: r }, Self::Exterior { center: b, radius: s }) => {
                // needs B(b, s) ⊆ B(a, r)
                (a - b).norm() + s <= r + tol
            }
            (
                Self::HalfPlane { anchor: a, direction: u },
                Self::HalfPlane { anchor: b, direction: v },
            ) => (u - v).norm() <= tol && (v * (a - b)).re >= -tol,
            (Self::HalfPlane { .. }, Self::Exterior { center, radius }) => {
                // the open disk B(center, radius) must miss the half-plane
                -self.signed_distance(ExtComplex::Finite(center)) >= radius - tol
            }
            _ => false,
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius must be positive, got {r}")))
    }
}
