//! Text and JSON formats.
//!
//! Exact rationals are written as `"p/q"` strings so that JSON never rounds them;
//! floats are plain JSON numbers.

use serde_json::{json, Map, Value};

use seppack_core::certificate::{CertificatePair, SeparableCertificate};
use seppack_core::ell1::{BinaryCode, BitWord};
use seppack_core::linalg::{Functional, Matrix, Vector};
use seppack_core::planar::{PlanarPacking, Point, SymmetricPolygon};
use seppack_core::polyomino::{CellCluster, Lattice};
use seppack_core::scalar::{format_rational, parse_rational, Rational};
use seppack_core::spherical::SphericalCode;
use seppack_core::{Error as CoreError, Scalar};

/// Largest norm deviation that is silently normalised away when reading a code.
pub const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}

fn invalid(message: impl Into<String>) -> FormatError {
    FormatError::Invalid(message.into())
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(r) => Value::String(format_rational(r)),
        Scalar::Float(x) => json!(x),
    }
}

/// Strings are exact rationals, numbers are floats.
pub fn scalar_from_json(v: &Value) -> Result<Scalar, FormatError> {
    match v {
        Value::String(s) => Ok(Scalar::Exact(parse_rational(s)?)),
        Value::Number(n) => n
            .as_f64()
            .map(Scalar::Float)
            .ok_or_else(|| invalid(format!("number {n} is not representable"))),
        other => Err(invalid(format!("expected a rational string or a number, got {other}"))),
    }
}

/// Rationals in geometric data: `"p/q"` strings, or JSON integers.
pub fn rational_from_json(v: &Value) -> Result<Rational, FormatError> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("checked").into())),
        other => Err(invalid(format!("expected a rational string such as \"3/4\", got {other}"))),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| invalid(format!("{what} must be an array")))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, FormatError> {
    v.get(name).ok_or_else(|| invalid(format!("missing field {name:?}")))
}

pub fn certificate_to_json(cert: &SeparableCertificate) -> Value {
    let pairs: Vec<Value> = cert
        .pairs()
        .iter()
        .map(|p| {
            json!({
                "x": p.x.entries().iter().map(scalar_to_json).collect::<Vec<_>>(),
                "phi": p.phi.coefficients().iter().map(scalar_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "dimension": cert.dimension(), "pairs": pairs })
}

pub fn certificate_from_json(text: &str) -> Result<SeparableCertificate, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let dimension = field(&v, "dimension")?
        .as_u64()
        .ok_or_else(|| invalid("dimension must be a nonnegative integer"))? as usize;
    let mut pairs = Vec::new();
    for (i, p) in array(field(&v, "pairs")?, "pairs")?.iter().enumerate() {
        let read = |name: &str| -> Result<Vec<Scalar>, FormatError> {
            array(field(p, name)?, name)?
                .iter()
                .map(scalar_from_json)
                .collect::<Result<_, _>>()
                .map_err(|e| invalid(format!("pair {i}, {name}: {e}")))
        };
        pairs.push(CertificatePair {
            x: Vector::new(read("x")?)?,
            phi: Functional::new(read("phi")?)?,
        });
    }
    Ok(SeparableCertificate::new(dimension, pairs)?)
}

fn point_to_json(p: &Point) -> Value {
    json!([format_rational(&p.x), format_rational(&p.y)])
}

fn point_from_json(v: &Value) -> Result<Point, FormatError> {
    let xy = array(v, "a point")?;
    if xy.len() != 2 {
        return Err(invalid(format!("a point needs two coordinates, got {}", xy.len())));
    }
    Ok(Point::new(rational_from_json(&xy[0])?, rational_from_json(&xy[1])?))
}

pub fn body_to_json(body: &SymmetricPolygon) -> Value {
    json!({ "vertices": body.vertices().iter().map(point_to_json).collect::<Vec<_>>() })
}

/// Accepts `{"vertices": [...]}`.
pub fn body_from_value(v: &Value) -> Result<SymmetricPolygon, FormatError> {
    let vertices = array(field(v, "vertices")?, "vertices")?
        .iter()
        .map(point_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SymmetricPolygon::new(vertices)?)
}

/// A body document: either a bare body or a packing whose body is used.
pub fn body_from_json(text: &str) -> Result<SymmetricPolygon, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    match v.get("body") {
        Some(b) => body_from_value(b),
        None => body_from_value(&v),
    }
}

pub fn packing_to_json(p: &PlanarPacking) -> Value {
    json!({
        "body": body_to_json(p.body()),
        "centers": p.centers().iter().map(point_to_json).collect::<Vec<_>>(),
    })
}

pub fn packing_from_json(text: &str) -> Result<PlanarPacking, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let body = body_from_value(field(&v, "body")?)?;
    let centers = array(field(&v, "centers")?, "centers")?
        .iter()
        .map(point_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PlanarPacking::new(body, centers)?)
}

/// How [`parse_code_file`] treats vectors that are not of unit length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormPolicy {
    /// Normalise deviations up to [`NORM_TOLERANCE`], reject larger ones.
    Strict,
    /// Normalise every nonzero vector.
    Normalize,
}

/// Reads a code file: `#` comments, one vector of whitespace-separated decimals per
/// line, dimension fixed by the first vector.
pub fn parse_code_file(text: &str, alpha: Scalar, policy: NormPolicy) -> Result<SphericalCode, FormatError> {
    let mut vectors: Vec<Vec<f64>> = Vec::new();
    let mut dim = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let err = |message: String| FormatError::Line { line, message };
        let values = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| err(format!("not a finite decimal number: {tok:?}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let d = *dim.get_or_insert(values.len());
        if values.len() != d {
            return Err(err(format!("expected {d} coordinates, found {}", values.len())));
        }
        let norm = values.iter().map(|x| x * x).sum::<f64>().sqrt();
        let ok = match policy {
            NormPolicy::Strict => (norm - 1.0).abs() <= NORM_TOLERANCE,
            NormPolicy::Normalize => norm > 0.0,
        };
        if !ok {
            return Err(err(format!("vector norm {norm} is not 1 (tolerance {NORM_TOLERANCE})")));
        }
        vectors.push(values.iter().map(|x| x / norm).collect());
    }
    let dim = dim.ok_or_else(|| invalid("the code file contains no vectors"))?;
    let vectors = vectors
        .iter()
        .map(|v| Vector::from_f64(v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SphericalCode::new(dim, vectors, alpha)?)
}

/// The value of a `# alpha <value>` comment line, if the file declares one.
pub fn declared_alpha(text: &str) -> Option<&str> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|c| {
            let mut words = c.split_whitespace();
            (words.next() == Some("alpha")).then(|| words.next()).flatten()
        })
}

/// Writes a code in the format read by [`parse_code_file`]; floats round-trip exactly.
pub fn format_code_file(code: &SphericalCode, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    for v in code.vectors() {
        let row: Vec<String> = v.to_f64().iter().map(|x| format!("{x}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// One codeword per line as a `0`/`1` string; blank lines and `#` comments skipped.
pub fn parse_binary_code(text: &str) -> Result<BinaryCode, FormatError> {
    let mut words = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let w = BitWord::parse(content).map_err(|e| FormatError::Line {
            line: idx + 1,
            message: e.to_string(),
        })?;
        words.push(w);
    }
    Ok(BinaryCode::new(words)?)
}

/// One `x y` pair per line.
pub fn parse_cluster(text: &str, lattice: Lattice) -> Result<CellCluster, FormatError> {
    let mut cells = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let err = |message: String| FormatError::Line { line: idx + 1, message };
        let parts: Vec<&str> = content.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(err(format!("expected two integers, found {:?}", content)));
        }
        let coord = |s: &str| s.parse::<i64>().map_err(|_| err(format!("not an integer: {s:?}")));
        cells.push((coord(parts[0])?, coord(parts[1])?));
    }
    Ok(CellCluster::new(lattice, cells)?)
}

pub fn format_cluster(cluster: &CellCluster) -> String {
    cluster.cells().iter().map(|(x, y)| format!("{x} {y}\n")).collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect()))
        .collect();
    Value::Array(rows)
}

/// A JSON object from key/value pairs, preserving insertion order of the caller.
pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}
