use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::disk::{GeneralizedDisk, HermitianForm};
use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use crate::matcalc::{ComplexMatrix, ScalarRational};

/// `z ↦ (az + b) / (cz + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

const MIN_DETERMINANT: f64 = 1e-12;

impl MobiusMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let m = Self { a, b, c, d };
        if m.determinant().norm() < MIN_DETERMINANT {
            return Err(Error::Degenerate(format!(
                "Möbius determinant |ad - bc| = {:e}",
                m.determinant().norm()
            )));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self { a: l, b: o, c: o, d: l }
    }

    pub fn inversion() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self { a: o, b: l, c: l, d: o }
    }

    pub fn determinant(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        match z {
            ExtComplex::Infinity => {
                if self.c == C64::new(0.0, 0.0) {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(self.a / self.c)
                }
            }
            ExtComplex::Finite(z) => {
                let den = self.c * z + self.d;
                if den == C64::new(0.0, 0.0) {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// The point sent to `∞`.
    pub fn pole(&self) -> ExtComplex {
        if self.c == C64::new(0.0, 0.0) {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite(-self.d / self.c)
        }
    }

    /// The map as a pole-residue rational function.
    pub fn to_rational(&self) -> ScalarRational {
        let zero = C64::new(0.0, 0.0);
        if self.c == zero {
            ScalarRational::polynomial(&[self.b / self.d, self.a / self.d])
        } else {
            let pole = -self.d / self.c;
            let residue = -self.determinant() / (self.c * self.c);
            ScalarRational::constant(self.a / self.c).add(&ScalarRational::pole_term(
                ExtComplex::Finite(pole),
                1,
                residue,
            ))
        }
    }

    /// `(aT + b)(cT + d)^{-1}`.
    pub fn apply_matrix(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        crate::matcalc::eval_on_matrix(&self.to_rational(), t)
    }

    /// Image of a generalized disk, obtained by transporting its Hermitian
    /// form: `H' = M^{-*} H M^{-1}`.
    pub fn image(&self, disk: &GeneralizedDisk) -> Result<GeneralizedDisk> {
        let h = disk.form();
        // normalise determinant so the inverse is well scaled
        let det = self.determinant();
        if det.norm() < MIN_DETERMINANT {
            return Err(Error::Degenerate("Möbius determinant vanishes".into()));
        }
        let s = det.sqrt();
        let (a, b, c, d) = (self.a / s, self.b / s, self.c / s, self.d / s);
        // M^{-1} = [[d, -b], [-c, a]]
        let inv = [[d, -b], [-c, a]];
        let hm = [[C64::new(h.a, 0.0), h.b], [h.b.conj(), C64::new(h.c, 0.0)]];
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..2 {
                    for l in 0..2 {
                        acc += inv[k][i].conj() * hm[k][l] * inv[l][j];
                    }
                }
                out[i][j] = acc;
            }
        }
        GeneralizedDisk::from_form(HermitianForm {
            a: out[0][0].re,
            b: out[0][1],
            c: out[1][1].re,
        })
    }
}

/// `ψ(D)` for a Möbius map `ψ`.
pub fn mobius_image(psi: &MobiusMap, disk: &GeneralizedDisk) -> Result<GeneralizedDisk> {
    psi.image(disk)
}

/// The Möbius map taking `D` onto the closed unit disk: `(z - a)/r`,
/// `r/(z - a)`, or `(1 - w)/(1 + w)` with `w = α(z - a)`.
pub fn canonical_map_to_unit_disk(disk: &GeneralizedDisk) -> MobiusMap {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    match *disk {
        GeneralizedDisk::Closed { center, radius } => MobiusMap {
            a: one,
            b: -center,
            c: zero,
            d: C64::new(radius, 0.0),
        },
        GeneralizedDisk::Exterior { center, radius } => MobiusMap {
            a: zero,
            b: C64::new(radius, 0.0),
            c: one,
            d: -center,
        },
        GeneralizedDisk::HalfPlane { anchor, direction } => MobiusMap {
            a: -direction,
            b: one + direction * anchor,
            c: direction,
            d: one - direction * anchor,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn unit() -> GeneralizedDisk {
        GeneralizedDisk::unit()
    }

    #[test]
    fn inversion_maps_exterior_to_unit_disk() {
        let ext = GeneralizedDisk::exterior(c(0.0, 0.0), 1.0).unwrap();
        let img = mobius_image(&MobiusMap::inversion(), &ext).unwrap();
        assert!(img.approx_eq(&unit(), 1e-12), "{img:?}");
    }

    #[test]
    fn cayley_map_takes_right_half_plane_to_disk() {
        let psi = MobiusMap::new(c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let hp = GeneralizedDisk::half_plane(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(mobius_image(&psi, &hp).unwrap().approx_eq(&unit(), 1e-12));
    }

    #[test]
    fn canonical_maps_match_documented_forms() {
        let d = GeneralizedDisk::closed(c(2.0, 0.0), 3.0).unwrap();
        let psi = canonical_map_to_unit_disk(&d);
        assert_eq!(psi.apply(ExtComplex::from(5.0)), ExtComplex::from(1.0));
        assert_eq!(psi.apply(ExtComplex::from(2.0)), ExtComplex::from(0.0));

        let e = GeneralizedDisk::exterior(c(0.0, 0.0), 1.0).unwrap();
        let psi = canonical_map_to_unit_disk(&e);
        assert_eq!(psi.apply(ExtComplex::from(2.0)), ExtComplex::from(0.5));
        assert_eq!(psi.apply(ExtComplex::Infinity), ExtComplex::from(0.0));

        let h = GeneralizedDisk::half_plane(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let psi = canonical_map_to_unit_disk(&h);
        assert_eq!(psi.apply(ExtComplex::from(1.0)), ExtComplex::from(0.0));
        assert_eq!(psi.apply(ExtComplex::from(0.0)), ExtComplex::from(1.0));
        assert_eq!(psi.apply(ExtComplex::Infinity), ExtComplex::from(-1.0));

        for disk in [d, e, h] {
            let img = mobius_image(&canonical_map_to_unit_disk(&disk), &disk).unwrap();
            assert!(img.approx_eq(&unit(), 1e-9), "{disk:?} -> {img:?}");
        }
    }

    #[test]
    fn rational_form_agrees_with_pointwise_map() {
        let psi = MobiusMap::new(c(1.0, 2.0), c(-0.5, 0.0), c(0.3, -0.1), c(2.0, 1.0)).unwrap();
        let f = psi.to_rational();
        for z in [c(0.1, 0.2), c(-3.0, 1.0), c(10.0, -4.0)] {
            let ExtComplex::Finite(w) = psi.apply(ExtComplex::Finite(z)) else {
                panic!("finite expected")
            };
            assert!((f.eval(z).unwrap() - w).norm() < 1e-12);
        }
        let affine = MobiusMap::new(c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((affine.to_rational().eval(c(1.0, 1.0)).unwrap() - c(3.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_map_rejected() {
        assert!(MobiusMap::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)).is_err());
    }
}
