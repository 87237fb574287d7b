//! JSON file formats. Invariants are checked while deserializing, so every
//! rejection carries the line and column where it was detected.

use num_complex::Complex64 as C64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeProduct, Normalization};
use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use crate::geometry::{
    BoundaryPiece, CircularArc, Domain, ExteriorData, GeneralizedDisk, PiecewiseCircularDomain,
    CLOSURE_TOL,
};
use crate::matcalc::{ComplexMatrix, ScalarRational};

fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        if e.line() == 0 {
            // raised after the top-level value was read
            Error::Parse(format!("{what}: {e} at line {} (end of document)", text.lines().count().max(1)))
        } else {
            Error::Parse(format!("{what}: {e}"))
        }
    })
}

/// Locates a `NaN`, `Infinity` or `-Infinity` token outside strings, with
/// the indices of the enclosing arrays.
fn find_non_finite(text: &str) -> Option<(usize, usize, &'static str, Vec<usize>)> {
    let (mut line, mut col) = (1, 1);
    let mut in_string = false;
    let mut escaped = false;
    let mut stack: Vec<usize> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
        } else {
            match b {
                b'"' => in_string = true,
                b'[' => stack.push(0),
                b']' => {
                    stack.pop();
                }
                b',' => {
                    if let Some(top) = stack.last_mut().filter(|t| **t != usize::MAX) {
                        *top += 1;
                    }
                }
                b'{' => stack.push(usize::MAX),
                b'}' => {
                    stack.pop();
                }
                _ => {
                    for tok in ["NaN", "-Infinity", "Infinity"] {
                        if text[i..].starts_with(tok) {
                            let path = stack.iter().copied().filter(|&k| k != usize::MAX).collect();
                            return Some((line, col, tok, path));
                        }
                    }
                }
            }
        }
        if b == b'\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
        i += 1;
    }
    None
}

/// Matrix file: `{"dim": n, "entries": [[[re, im], ...], ...]}`.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    if let Some((line, col, tok, path)) = find_non_finite(text) {
        let part = match path.get(2) {
            Some(0) => "real part of ",
            Some(1) => "imaginary part of ",
            _ => "",
        };
        let entry = match (path.first(), path.get(1)) {
            (Some(i), Some(j)) => format!("{part}entry ({i}, {j})"),
            _ => "a value".into(),
        };
        return Err(Error::Parse(format!(
            "matrix: {entry} is {tok}; entries must be finite at line {line} column {col}"
        )));
    }
    parse(text, "matrix")
}

/// Rational file: `{"constant": [re, im], "terms": [{"pole", "power", "coeff"}]}`.
pub fn parse_rational(text: &str) -> Result<ScalarRational> {
    parse(text, "rational function")
}

#[derive(Deserialize)]
#[serde(try_from = "GeneralizedDiskRepr")]
struct CheckedDisk(GeneralizedDisk);

#[derive(Deserialize)]
#[serde(transparent)]
struct GeneralizedDiskRepr(GeneralizedDisk);

impl TryFrom<GeneralizedDiskRepr> for CheckedDisk {
    type Error = Error;
    fn try_from(d: GeneralizedDiskRepr) -> Result<Self> {
        d.0.validate()?;
        Ok(CheckedDisk(d.0))
    }
}

/// Disk file: `{"type": "closed" | "exterior" | "half_plane", ...}`.
pub fn parse_disk(text: &str) -> Result<GeneralizedDisk> {
    parse::<CheckedDisk>(text, "disk").map(|d| d.0)
}

#[derive(Serialize, Deserialize)]
#[serde(try_from = "Vec<CircularArc>")]
struct CurveArcs(Vec<CircularArc>);

impl TryFrom<Vec<CircularArc>> for CurveArcs {
    type Error = Error;
    fn try_from(arcs: Vec<CircularArc>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::Geometry("a curve needs at least one arc".into()));
        }
        for (k, a) in arcs.iter().enumerate() {
            a.validate().map_err(|e| Error::Geometry(format!("arc {k}: {e}")))?;
        }
        for k in 0..arcs.len() {
            let next = (k + 1) % arcs.len();
            let gap = (BoundaryPiece::Arc(arcs[k]).end() - BoundaryPiece::Arc(arcs[next]).start()).norm();
            if gap > CLOSURE_TOL {
                return Err(Error::Geometry(format!(
                    "arcs do not close: arc {k} ends {gap:.3e} away from the start of arc {next}"
                )));
            }
        }
        Ok(CurveArcs(arcs))
    }
}

#[derive(Serialize, Deserialize)]
struct CurveFile {
    arcs: CurveArcs,
}

#[derive(Serialize, Deserialize)]
struct ExteriorFile {
    arc: usize,
    #[serde(rename = "R")]
    radius: f64,
    centers: Vec<[f64; 4]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PiecewiseFile {
    curves: Vec<CurveFile>,
    #[serde(default)]
    exterior: Vec<ExteriorFile>,
    #[serde(default)]
    complement_points: Vec<ExtComplex>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DisksFile {
    disks: Vec<CheckedDisk>,
}

fn build_piecewise(p: PiecewiseFile) -> Result<PiecewiseCircularDomain> {
    let curves = p.curves.into_iter().map(|c| c.arcs.0).collect();
    let exterior = p
        .exterior
        .into_iter()
        .map(|e| ExteriorData {
            arc: e.arc,
            radius: e.radius,
            centers: e.centers.iter().map(|c| (C64::new(c[0], c[1]), C64::new(c[2], c[3]))).collect(),
        })
        .collect();
    PiecewiseCircularDomain::from_arcs(curves, exterior, p.complement_points)
}

/// Domain file: either `{"curves", "exterior", "complement_points"}` or
/// `{"disks": [...]}` for an intersection of generalized disks.
pub fn parse_domain(text: &str) -> Result<Domain> {
    let at_end = |e: Error| {
        Error::Parse(format!("domain: {e} at line {} (end of document)", text.lines().count().max(1)))
    };
    let value: serde_json::Value = parse(text, "domain")?;
    if value.get("disks").is_some() {
        let file: DisksFile = parse(text, "domain")?;
        return Domain::intersection(file.disks.into_iter().map(|d| d.0).collect()).map_err(at_end);
    }
    let file: PiecewiseFile = parse(text, "domain")?;
    build_piecewise(file).map(Domain::Piecewise).map_err(at_end)
}

/// Writes a piecewise domain in the file format. Only arc boundaries are
/// representable.
pub fn domain_to_json(dom: &PiecewiseCircularDomain) -> Result<serde_json::Value> {
    let curves = dom
        .curves()
        .iter()
        .map(|c| {
            c.iter()
                .map(|&k| match dom.piece(k) {
                    BoundaryPiece::Arc(a) => Ok(*a),
                    BoundaryPiece::Segment { .. } => Err(Error::Geometry(
                        "the domain file format holds arcs only; this boundary has segments".into(),
                    )),
                })
                .collect::<Result<Vec<_>>>()
                .map(|arcs| CurveFile { arcs: CurveArcs(arcs) })
        })
        .collect::<Result<Vec<_>>>()?;
    let exterior = dom
        .exterior()
        .iter()
        .map(|e| ExteriorFile {
            arc: e.arc,
            radius: e.radius,
            centers: e.centers.iter().map(|(l, m)| [l.re, l.im, m.re, m.im]).collect(),
        })
        .collect();
    let file = PiecewiseFile { curves, exterior, complement_points: dom.complement_points().to_vec() };
    serde_json::to_value(file).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Deserialize)]
#[serde(try_from = "C64")]
struct CheckedZero(C64);

impl TryFrom<C64> for CheckedZero {
    type Error = Error;
    fn try_from(z: C64) -> Result<Self> {
        if z.norm() <= crate::blaschke::MAX_ZERO_MODULUS {
            Ok(CheckedZero(z))
        } else {
            Err(Error::InvalidArgument(format!(
                "zero {z} has modulus {}; zeros need |λ| < 1 (at most 1 - 1e-12)",
                z.norm()
            )))
        }
    }
}

#[derive(Deserialize)]
struct BlaschkeRepr {
    #[serde(default)]
    theta: f64,
    zeros: Vec<CheckedZero>,
    #[serde(default)]
    normalization: Normalization,
}

#[derive(Deserialize)]
#[serde(try_from = "BlaschkeRepr")]
struct CheckedBlaschke(BlaschkeProduct);

impl TryFrom<BlaschkeRepr> for CheckedBlaschke {
    type Error = Error;
    fn try_from(r: BlaschkeRepr) -> Result<Self> {
        BlaschkeProduct::new(r.theta, r.zeros.into_iter().map(|z| z.0).collect(), r.normalization).map(CheckedBlaschke)
    }
}

/// Blaschke file: `{"theta": θ, "zeros": [[re, im], ...], "normalization": "plain" | "mascioni"}`.
pub fn parse_blaschke(text: &str) -> Result<BlaschkeProduct> {
    parse::<CheckedBlaschke>(text, "Blaschke product").map(|b| b.0)
}

/// Reads a file, prefixing errors with its path.
pub fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
