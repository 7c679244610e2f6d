//! Numeric scalars: exact rationals or `f64`, tagged with their kind.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. `num_rational` keeps it reduced with a positive
/// denominator.
pub type Rational = BigRational;

/// Margin for float comparisons. Strict inequalities on float data must hold by
/// more than this.
pub const EPSILON: f64 = 1e-9;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`. Non-reduced forms are accepted and normalised; a zero
/// denominator is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational numerator in {text:?}")))?;
    let denom: BigInt = denom
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational denominator in {text:?}")))?;
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(numer, denom))
}

/// Formats as `"p/q"`, or `"p"` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rational_to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Exact,
    Float,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Exact => f.write_str("exact"),
            Kind::Float => f.write_str("float"),
        }
    }
}

/// Either an exact rational or a 64-bit float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn zero(kind: Kind) -> Self {
        match kind {
            Kind::Exact => Scalar::Exact(Rational::zero()),
            Kind::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(kind: Kind) -> Self {
        match kind {
            Kind::Exact => Scalar::Exact(Rational::one()),
            Kind::Float => Scalar::Float(1.0),
        }
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Scalar::Exact(rat(numer, denom))
    }

    pub fn integer(value: i64) -> Self {
        Scalar::Exact(int(value))
    }

    pub fn kind(&self) -> Kind {
        match self {
            Scalar::Exact(_) => Kind::Exact,
            Scalar::Float(_) => Kind::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Converts to the requested kind. Exact → float rounds; float → exact is
    /// refused.
    pub fn coerce(&self, kind: Kind) -> Result<Scalar> {
        match (self, kind) {
            (Scalar::Exact(_), Kind::Exact) | (Scalar::Float(_), Kind::Float) => Ok(self.clone()),
            (Scalar::Exact(r), Kind::Float) => Ok(Scalar::Float(rational_to_f64(r))),
            (Scalar::Float(_), Kind::Exact) => Err(Error::Kind(
                "cannot convert a float scalar to an exact rational".to_string(),
            )),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        binary(self, other, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        binary(self, other, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        binary(self, other, |a, b| a * b, |a, b| a * b)
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero("scalar division".to_string()));
        }
        binary(self, other, |a, b| a / b, |a, b| a / b)
    }

    /// Ordering between scalars of the same kind. Float NaN compares as an error.
    pub fn compare(&self, other: &Scalar) -> Result<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(a.cmp(b)),
            (Scalar::Float(a), Scalar::Float(b)) => a
                .partial_cmp(b)
                .ok_or_else(|| Error::Domain("NaN in float comparison".to_string())),
            _ => Err(mixed()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => f.write_str(&format_rational(r)),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(value: Rational) -> Self {
        Scalar::Exact(value)
    }
}

impl From<f64> for Scalar {
    fn from(value: f64) -> Self {
        Scalar::Float(value)
    }
}

pub(crate) fn mixed() -> Error {
    Error::Kind("exact and float scalars cannot be mixed".to_string())
}

fn binary(
    a: &Scalar,
    b: &Scalar,
    exact: impl FnOnce(&Rational, &Rational) -> Rational,
    float: impl FnOnce(f64, f64) -> f64,
) -> Result<Scalar> {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Ok(Scalar::Exact(exact(x, y))),
        (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(float(*x, *y))),
        _ => Err(mixed()),
    }
}

/// Common kind of a collection of scalars; an error if the kinds are mixed.
/// Empty input reports `Exact`.
pub fn common_kind<'a>(scalars: impl IntoIterator<Item = &'a Scalar>) -> Result<Kind> {
    let mut kind = None;
    for s in scalars {
        match kind {
            None => kind = Some(s.kind()),
            Some(k) if k != s.kind() => return Err(mixed()),
            _ => {}
        }
    }
    Ok(kind.unwrap_or(Kind::Exact))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_normalises_and_rejects_zero_denominator() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3/-6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::Float(0.5);
        assert!(matches!(a.add(&b), Err(Error::Kind(_))));
        assert_eq!(a.add(&a).unwrap(), Scalar::ratio(2, 3));
        assert!(common_kind([&a, &b]).is_err());
    }
}
