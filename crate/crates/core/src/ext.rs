//! Points of the Riemann sphere.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A point of the extended complex plane `C ∪ {∞}`.
///
/// Serialized as `[re, im]` for finite points and as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match *self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    /// Chordal distance on the Riemann sphere.
    pub fn chordal_distance(&self, other: &ExtComplex) -> f64 {
        match (*self, *other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
            (ExtComplex::Finite(z), ExtComplex::Infinity)
            | (ExtComplex::Infinity, ExtComplex::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

impl From<f64> for ExtComplex {
    fn from(x: f64) -> Self {
        ExtComplex::Finite(Complex64::new(x, 0.0))
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Finite(z) => write!(f, "{z}"),
            ExtComplex::Infinity => write!(f, "inf"),
        }
    }
}

/// Accepts `inf`, `∞`, and complex literals such as `2`, `-1.5e-3`, `3i`,
/// `-i` or `0.5-2i`.
impl FromStr for ExtComplex {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "inf" || s == "∞" {
            return Ok(ExtComplex::Infinity);
        }
        let bad = || format!("cannot read {text:?} as a complex number or inf");
        let real = |t: &str| t.parse::<f64>().ok().filter(|x| x.is_finite());
        let Some(body) = s.strip_suffix('i') else {
            return real(&s).map(ExtComplex::from).ok_or_else(bad);
        };
        // split before the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let cut = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match cut {
            Some(k) => (real(&body[..k]).ok_or_else(bad)?, &body[k..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => real(t).ok_or_else(bad)?,
        };
        Ok(ExtComplex::finite(re, im))
    }
}

impl Serialize for ExtComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtComplex::Finite(z) => [z.re, z.im].serialize(s),
            ExtComplex::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([f64; 2]),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Pair([re, im]) => Ok(ExtComplex::finite(re, im)),
            Repr::Tag(t) if t == "inf" => Ok(ExtComplex::Infinity),
            Repr::Tag(t) => Err(D::Error::custom(format!(
                "expected [re, im] or \"inf\", found {t:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        let cases = [
            ("inf", ExtComplex::Infinity),
            ("2", ExtComplex::finite(2.0, 0.0)),
            ("-1.5e-3", ExtComplex::finite(-1.5e-3, 0.0)),
            ("3i", ExtComplex::finite(0.0, 3.0)),
            ("-i", ExtComplex::finite(0.0, -1.0)),
            ("0.5-2i", ExtComplex::finite(0.5, -2.0)),
            ("1e-2+1e+1i", ExtComplex::finite(0.01, 10.0)),
            (" 1 + i ", ExtComplex::finite(1.0, 1.0)),
        ];
        for (text, want) in cases {
            assert_eq!(text.parse::<ExtComplex>().unwrap(), want, "{text}");
        }
        for bad in ["", "x", "1+", "nan", "1+2j", "i i"] {
            assert!(bad.parse::<ExtComplex>().is_err(), "{bad}");
        }
    }

    #[test]
    fn chordal_distance_to_infinity() {
        let z = ExtComplex::finite(0.0, 0.0);
        assert!((z.chordal_distance(&ExtComplex::Infinity) - 2.0).abs() < 1e-15);
    }
}
