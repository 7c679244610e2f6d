//! Vectors, functionals and matrices over [`Scalar`], exact rank, the trace/Frobenius
//! rank bound, and seeded uniform sampling from the Euclidean unit ball.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::scalar::{common_kind, Kind, Rational, Scalar};

/// A point of `R^d`; all entries share one [`Kind`] when used in arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    entries: Vec<Scalar>,
}

impl Vector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("vectors must have positive dimension".to_string()));
        }
        Ok(Vector { entries })
    }

    pub fn exact(entries: impl IntoIterator<Item = Rational>) -> Result<Self> {
        Vector::new(entries.into_iter().map(Scalar::Exact).collect())
    }

    pub fn from_f64(entries: &[f64]) -> Result<Self> {
        Vector::new(entries.iter().copied().map(Scalar::Float).collect())
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        Vector::new(entries.iter().map(|&v| Scalar::integer(v)).collect())
    }

    /// The `i`-th standard basis vector of `R^dim`, exact.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        let mut entries = vec![Scalar::integer(0); dim];
        if i >= dim {
            return Err(Error::Domain(format!("basis index {i} out of range for dimension {dim}")));
        }
        entries[i] = Scalar::integer(1);
        Vector::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn kind(&self) -> Result<Kind> {
        common_kind(&self.entries)
    }

    pub fn neg(&self) -> Vector {
        Vector {
            entries: self.entries.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn coerce(&self, kind: Kind) -> Result<Vector> {
        Ok(Vector {
            entries: self.entries.iter().map(|s| s.coerce(kind)).collect::<Result<_>>()?,
        })
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Vector {
            entries: zip_with(&self.entries, &other.entries, Scalar::add)?,
        })
    }

    pub fn scale(&self, factor: &Scalar) -> Result<Vector> {
        Ok(Vector {
            entries: self.entries.iter().map(|e| e.mul(factor)).collect::<Result<_>>()?,
        })
    }

    pub fn dot(&self, other: &Vector) -> Result<Scalar> {
        dot(&self.entries, &other.entries)
    }

    pub fn norm_squared(&self) -> Result<Scalar> {
        self.dot(self)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(Scalar::to_f64).collect()
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Vector { entries }
    }
}

/// A linear functional on `R^d`, applied by the dot product.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    coefficients: Vec<Scalar>,
}

impl Functional {
    pub fn new(coefficients: Vec<Scalar>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Domain("functionals must have positive dimension".to_string()));
        }
        Ok(Functional { coefficients })
    }

    pub fn from_ints(coefficients: &[i64]) -> Result<Self> {
        Functional::new(coefficients.iter().map(|&v| Scalar::integer(v)).collect())
    }

    pub fn from_f64(coefficients: &[f64]) -> Result<Self> {
        Functional::new(coefficients.iter().copied().map(Scalar::Float).collect())
    }

    /// The functional whose coefficients are the entries of `v`.
    pub fn dual_of(v: &Vector) -> Functional {
        Functional {
            coefficients: v.entries.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Scalar] {
        &self.coefficients
    }

    pub fn kind(&self) -> Result<Kind> {
        common_kind(&self.coefficients)
    }

    pub fn apply(&self, x: &Vector) -> Result<Scalar> {
        dot(&self.coefficients, &x.entries)
    }

    pub fn neg(&self) -> Functional {
        Functional {
            coefficients: self.coefficients.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scale(&self, factor: &Scalar) -> Result<Functional> {
        Ok(Functional {
            coefficients: self
                .coefficients
                .iter()
                .map(|e| e.mul(factor))
                .collect::<Result<_>>()?,
        })
    }

    pub fn coerce(&self, kind: Kind) -> Result<Functional> {
        Ok(Functional {
            coefficients: self
                .coefficients
                .iter()
                .map(|s| s.coerce(kind))
                .collect::<Result<_>>()?,
        })
    }
}

/// Row-major matrix of scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            check_dim(cols, row.len())?;
            entries.extend(row);
        }
        Matrix::new(n, cols, entries)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::integer(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Scalar::integer(0); n * n];
        for i in 0..n {
            entries[i * n + i] = Scalar::integer(1);
        }
        Matrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Exact rank by fraction-free (Bareiss) elimination. Each row is first scaled
    /// by the lcm of its denominators, which leaves the rank unchanged.
    pub fn rank_exact(&self) -> Result<usize> {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self
                .row(i)
                .iter()
                .map(|s| {
                    s.as_exact().cloned().ok_or_else(|| {
                        Error::Kind("rank_exact needs rational entries".to_string())
                    })
                })
                .collect::<Result<Vec<Rational>>>()?;
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            rows.push(
                row.iter()
                    .map(|r| r.numer() * (&lcm / r.denom()))
                    .collect(),
            );
        }
        Ok(bareiss_rank(rows, self.cols))
    }

    /// `(Σ_i a_ii)^2 / Σ_{i,j} a_ij^2`, a lower bound on the rank of a non-zero square
    /// matrix.
    pub fn rank_lower_bound_trace(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Domain(format!(
                "rank bound needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let kind = common_kind(&self.entries)?;
        let mut trace = Scalar::zero(kind);
        for i in 0..self.rows {
            trace = trace.add(self.get(i, i))?;
        }
        let mut frobenius = Scalar::zero(kind);
        for e in &self.entries {
            frobenius = frobenius.add(&e.mul(e)?)?;
        }
        if frobenius.is_zero() {
            return Err(Error::DivisionByZero(
                "rank bound is undefined for the zero matrix".to_string(),
            ));
        }
        trace.mul(&trace)?.div(&frobenius)
    }
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let m = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == m {
            break;
        }
        let Some(pivot) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for i in rank + 1..m {
            for j in col + 1..cols {
                let value = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = value;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

fn zip_with(
    a: &[Scalar],
    b: &[Scalar],
    op: impl Fn(&Scalar, &Scalar) -> Result<Scalar>,
) -> Result<Vec<Scalar>> {
    a.iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Result<Scalar> {
    check_dim(a.len(), b.len())?;
    let kind = common_kind(a.iter().chain(b))?;
    match kind {
        Kind::Exact => {
            let mut acc = Rational::zero();
            for (x, y) in a.iter().zip(b) {
                if let (Scalar::Exact(x), Scalar::Exact(y)) = (x, y) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
            }
            Ok(Scalar::Exact(acc))
        }
        Kind::Float => Ok(Scalar::Float(
            a.iter().zip(b).map(|(x, y)| x.to_f64() * y.to_f64()).sum(),
        )),
    }
}

/// Uniform double in `[0, 1)` from the top 53 bits of one `u64` draw.
pub fn uniform_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A pair of independent standard normals by the Box–Muller transform, using
/// `libm` so results do not depend on the platform's libm.
fn gaussian_pair<R: RngCore + ?Sized>(rng: &mut R) -> (f64, f64) {
    // 1 - U lies in (0, 1], so the logarithm is finite.
    let u1 = 1.0 - uniform_f64(rng);
    let u2 = uniform_f64(rng);
    let radius = libm::sqrt(-2.0 * libm::log(u1));
    let angle = 2.0 * core::f64::consts::PI * u2;
    (radius * libm::cos(angle), radius * libm::sin(angle))
}

/// Uniform point of the unit ball of `R^d` as plain floats: a normalised
/// Gaussian direction scaled by `U^(1/d)`.
pub fn sample_unit_ball_f64<R: RngCore + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    assert!(dim >= 1, "dimension must be positive");
    loop {
        let mut direction = Vec::with_capacity(dim + 1);
        while direction.len() < dim {
            let (a, b) = gaussian_pair(rng);
            direction.push(a);
            direction.push(b);
        }
        direction.truncate(dim);
        let norm = libm::sqrt(direction.iter().map(|x| x * x).sum::<f64>());
        let radius = libm::pow(uniform_f64(rng), 1.0 / dim as f64);
        if norm > 0.0 {
            let scale = radius / norm;
            direction.iter_mut().for_each(|x| *x *= scale);
            return direction;
        }
    }
}

/// Uniform point of the unit ball of `R^d`, float kind.
pub fn sample_unit_ball<R: RngCore + ?Sized>(dim: usize, rng: &mut R) -> Result<Vector> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be positive".to_string()));
    }
    Vector::from_f64(&sample_unit_ball_f64(dim, rng))
}
