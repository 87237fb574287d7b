use std::fmt;

use num_complex::Complex64 as C64;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// Outcome of a sampled criterion. `Boundary` means the margin lies within
/// the tolerance of zero, so the sample cannot decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Boundary,
}

impl Verdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        if margin.is_nan() {
            Verdict::False
        } else if margin.abs() <= tol {
            Verdict::Boundary
        } else if margin > 0.0 {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    /// `True` or `Boundary`: the criterion holds up to the tolerance.
    pub fn holds(self) -> bool {
        !matches!(self, Verdict::False)
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::True => s.serialize_bool(true),
            Verdict::False => s.serialize_bool(false),
            Verdict::Boundary => s.serialize_str("boundary"),
        }
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Verdict;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("true, false or \"boundary\"")
            }
            fn visit_bool<E: de::Error>(self, b: bool) -> std::result::Result<Verdict, E> {
                Ok(if b { Verdict::True } else { Verdict::False })
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Verdict, E> {
                match s {
                    "boundary" => Ok(Verdict::Boundary),
                    _ => Err(E::invalid_value(de::Unexpected::Str(s), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Grid point achieving the margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    None,
    /// Support direction `e^{iθ}`.
    Angle { theta: f64 },
    /// Poisson kernel parameters.
    Kernel { r: f64, t: f64 },
    /// Sampled center `μ`.
    Mu { mu: C64 },
    /// Limit `|μ| → ∞` along `arg μ = φ`.
    MuAsymptotic { phi: f64 },
    /// Tangency point of a `D_a(ρ)` region.
    Tangency { a: C64 },
    /// Eigenvalue violating a spectral precondition.
    Eigenvalue { value: C64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub verdict: Verdict,
    /// Smallest slack found, signed.
    pub margin: f64,
    pub witness: Witness,
    pub tolerance: f64,
    /// Description of the sampled grid; `null` for exact criteria.
    pub grid: serde_json::Value,
}

impl ClassifyReport {
    pub fn new(margin: f64, witness: Witness, tolerance: f64) -> Self {
        Self {
            verdict: Verdict::from_margin(margin, tolerance),
            margin,
            witness,
            tolerance,
            grid: serde_json::Value::Null,
        }
    }

    pub fn with_grid(mut self, grid: serde_json::Value) -> Self {
        self.grid = grid;
        self
    }

    /// `margin ≥ -tolerance`.
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}
