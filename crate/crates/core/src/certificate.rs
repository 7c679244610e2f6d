//! Point/functional certificates for large separable Hadwiger numbers of smooth
//! strictly convex bodies.
//!
//! A certificate is a family of pairs `(x_i, φ_i)` in `R^d` with `φ_i(x_i) = 1`,
//! `-1 ≤ φ_i(x_j) ≤ 0` for `i ≠ j`, and `φ_i(x_j) = -1` only for antipodal pairs
//! (`x_j = -x_i` and `φ_j = -φ_i`). Such a family exists exactly when some smooth
//! strictly convex body in `R^d` has a totally separable packing in which `n`
//! translates touch a central one.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::{Functional, Matrix, Vector};
use crate::report::{Condition, VerificationReport};
use crate::scalar::{common_kind, int, rat, Kind, Rational, Scalar, EPSILON};
use crate::spherical::{verify_code, SphericalCode};

#[derive(Debug, Clone, PartialEq)]
pub struct CertificatePair {
    pub x: Vector,
    pub phi: Functional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparableCertificate {
    dimension: usize,
    pairs: Vec<CertificatePair>,
}

impl SeparableCertificate {
    /// Checks dimensions and uniform scalar kind; the separation conditions are
    /// left to [`verify_certificate`].
    pub fn new(dimension: usize, pairs: Vec<CertificatePair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Domain("a certificate needs at least one pair".to_string()));
        }
        for pair in &pairs {
            for found in [pair.x.dim(), pair.phi.dim()] {
                if found != dimension {
                    return Err(Error::Dimension {
                        expected: dimension,
                        found,
                    });
                }
            }
        }
        common_kind(
            pairs
                .iter()
                .flat_map(|p| p.x.entries().iter().chain(p.phi.coefficients())),
        )?;
        Ok(SeparableCertificate { dimension, pairs })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn pairs(&self) -> &[CertificatePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn kind(&self) -> Kind {
        self.pairs[0].x.kind().unwrap_or(Kind::Exact)
    }

    /// The matrix `[φ_i(x_j)]`.
    pub fn pairing_matrix(&self) -> Result<Matrix> {
        let n = self.len();
        let mut entries = Vec::with_capacity(n * n);
        for a in &self.pairs {
            for b in &self.pairs {
                entries.push(a.phi.apply(&b.x)?);
            }
        }
        Matrix::new(n, n, entries)
    }

    fn is_antipodal(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.pairs[i], &self.pairs[j]);
        match self.kind() {
            Kind::Exact => b.x == a.x.neg() && b.phi == a.phi.neg(),
            Kind::Float => {
                let close = |u: &[Scalar], v: &[Scalar]| {
                    u.iter()
                        .zip(v)
                        .all(|(p, q)| (p.to_f64() + q.to_f64()).abs() <= EPSILON)
                };
                close(a.x.entries(), b.x.entries())
                    && close(a.phi.coefficients(), b.phi.coefficients())
            }
        }
    }
}

/// Checks every condition for every ordered pair and reports each violation.
/// Float certificates are checked with margin `1e-9` and flagged as numerical.
pub fn verify_certificate(cert: &SeparableCertificate) -> Result<VerificationReport> {
    let matrix = cert.pairing_matrix()?;
    let mut report = VerificationReport {
        numerical: cert.kind() == Kind::Float,
        ..VerificationReport::default()
    };
    let n = cert.len();
    for i in 0..n {
        for j in 0..n {
            let value = matrix.get(i, j);
            if let Some(condition) = classify(value, i == j, || cert.is_antipodal(i, j)) {
                report.push(i, j, condition, value.clone());
            }
        }
    }
    Ok(report)
}

fn classify(value: &Scalar, diagonal: bool, antipodal: impl FnOnce() -> bool) -> Option<Condition> {
    match value {
        Scalar::Exact(v) => {
            if diagonal {
                return (*v != int(1)).then_some(Condition::SelfPairing);
            }
            let minus_one = int(-1);
            if *v > int(0) {
                Some(Condition::CrossPairingPositive)
            } else if *v < minus_one {
                Some(Condition::CrossPairingBelowMinusOne)
            } else if *v == minus_one && !antipodal() {
                Some(Condition::NonAntipodalMinusOne)
            } else {
                None
            }
        }
        Scalar::Float(v) => {
            if diagonal {
                return ((v - 1.0).abs() > EPSILON).then_some(Condition::SelfPairing);
            }
            if *v > EPSILON {
                Some(Condition::CrossPairingPositive)
            } else if *v < -1.0 - EPSILON {
                Some(Condition::CrossPairingBelowMinusOne)
            } else if *v <= -1.0 + EPSILON && !antipodal() {
                Some(Condition::NonAntipodalMinusOne)
            } else {
                None
            }
        }
    }
}

/// Lifts a code `v_1, ..., v_m ⊂ R^(d-1)` with parameter `α` to the certificate
/// `x_i = (v_i, 1, 0)`, `φ_i = (v_i, -α, 0) / (1 - α)` in `R^(d + k)`, followed by
/// `k` antipodal pairs `±(e_j, e_j*)` on the extra coordinates.
///
/// Then `φ_i(x_j) = (⟨v_i, v_j⟩ - α) / (1 - α)`, which lies in `(-1, 0]` exactly when
/// `⟨v_i, v_j⟩ ∈ (-1 + 2α, α]`.
pub fn lift_from_code(code: &SphericalCode, k: usize) -> Result<SeparableCertificate> {
    let alpha = code.alpha_in_kind()?;
    let kind = code.kind();
    let one = Scalar::one(kind);
    if alpha.compare(&one)? != Ordering::Less {
        return Err(Error::Parameter(format!("alpha must be below 1, got {alpha}")));
    }
    let report = verify_code(code);
    if !report.accepted() {
        let v = &report.violations[0];
        return Err(Error::Precondition(format!(
            "code fails verification: {} at ({}, {}) with value {}",
            v.condition, v.i, v.j, v.witness
        )));
    }
    let scale = one.div(&one.sub(&alpha)?)?;
    let zero = Scalar::zero(kind);
    let dimension = code.dimension() + 1 + k;
    let mut pairs = Vec::with_capacity(code.len() + 2 * k);
    for v in code.vectors() {
        let mut x = v.entries().to_vec();
        x.push(one.clone());
        x.resize(dimension, zero.clone());
        let mut phi = v
            .entries()
            .iter()
            .map(|e| e.mul(&scale))
            .collect::<Result<Vec<_>>>()?;
        phi.push(alpha.neg().mul(&scale)?);
        phi.resize(dimension, zero.clone());
        pairs.push(CertificatePair {
            x: Vector::new(x)?,
            phi: Functional::new(phi)?,
        });
    }
    for j in 0..k {
        let mut e = alloc::vec![zero.clone(); dimension];
        e[code.dimension() + 1 + j] = one.clone();
        let x = Vector::new(e)?;
        let phi = Functional::dual_of(&x);
        let antipode = CertificatePair {
            x: x.neg(),
            phi: phi.neg(),
        };
        pairs.push(CertificatePair { x, phi });
        pairs.push(antipode);
    }
    SeparableCertificate::new(dimension, pairs)
}

/// Result of [`reduce_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    /// `a_ij = ((2 + ε) φ_i(x_j) + 1 - ε) / 3` over the surviving pairs.
    pub matrix: Matrix,
    /// Number of antipodal pairs removed.
    pub removed: usize,
    /// Indices of the surviving pairs in the input certificate.
    pub survivors: Vec<usize>,
}

/// Indices `(i, j)`, `i < j`, of the pairs with `φ_i(x_j) = -1`, matched greedily in
/// index order. In a valid certificate every index is in at most one such pair.
fn antipodal_matching(cert: &SeparableCertificate, matrix: &Matrix) -> Vec<(usize, usize)> {
    let n = cert.len();
    let mut used = alloc::vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if used[i] || used[j] {
                continue;
            }
            let hit = match matrix.get(i, j) {
                Scalar::Exact(v) => *v == int(-1),
                Scalar::Float(v) => (v + 1.0).abs() <= EPSILON,
            };
            if hit {
                used[i] = true;
                used[j] = true;
                out.push((i, j));
            }
        }
    }
    out
}

fn surviving(cert: &SeparableCertificate, matrix: &Matrix) -> (Vec<usize>, usize) {
    let matching = antipodal_matching(cert, matrix);
    let mut removed = alloc::vec![false; cert.len()];
    for &(i, j) in &matching {
        removed[i] = true;
        removed[j] = true;
    }
    let survivors = (0..cert.len()).filter(|&i| !removed[i]).collect();
    (survivors, matching.len())
}

/// Removes the antipodal pairs and maps the rest to a matrix with unit diagonal and
/// off-diagonal entries in `(-1/3, 1/3)`, whose rank is at most `d - k + 1`.
///
/// Fails with a precondition error when the certificate is not accepted or when
/// some surviving `φ_i(x_j) < -1 + ε`.
pub fn reduce_certificate(cert: &SeparableCertificate, epsilon: &Scalar) -> Result<Reduction> {
    let epsilon = epsilon.coerce(cert.kind())?;
    let kind = cert.kind();
    if epsilon.compare(&Scalar::zero(kind))? != Ordering::Greater
        || epsilon.compare(&Scalar::one(kind))? != Ordering::Less
    {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let report = verify_certificate(cert)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Precondition(format!(
            "certificate is not accepted: {} at ({}, {})",
            v.condition, v.i, v.j
        )));
    }
    let matrix = cert.pairing_matrix()?;
    let (survivors, removed) = surviving(cert, &matrix);
    let one = Scalar::one(kind);
    let floor = epsilon.sub(&one)?;
    let two_plus = epsilon.add(&Scalar::integer(2).coerce(kind)?)?;
    let offset = one.sub(&epsilon)?;
    let three = Scalar::integer(3).coerce(kind)?;
    let mut entries = Vec::with_capacity(survivors.len() * survivors.len());
    for &i in &survivors {
        for &j in &survivors {
            let value = matrix.get(i, j);
            if i != j && value.compare(&floor)? == Ordering::Less {
                return Err(Error::Precondition(format!(
                    "epsilon {epsilon} too large: phi_{i}(x_{j}) = {value} is below -1 + epsilon"
                )));
            }
            entries.push(two_plus.mul(value)?.add(&offset)?.div(&three)?);
        }
    }
    Ok(Reduction {
        matrix: Matrix::new(survivors.len(), survivors.len(), entries)?,
        removed,
        survivors,
    })
}

/// Default `ε` for [`reduce_certificate`]: `min (1 + φ_i(x_j))` over distinct
/// surviving pairs when that is below 1, and `1/2` otherwise (also when fewer
/// than two pairs survive).
pub fn max_admissible_epsilon(cert: &SeparableCertificate) -> Result<Scalar> {
    let matrix = cert.pairing_matrix()?;
    let (survivors, _) = surviving(cert, &matrix);
    let kind = cert.kind();
    let one = Scalar::one(kind);
    let mut best: Option<Scalar> = None;
    for &i in &survivors {
        for &j in &survivors {
            if i == j {
                continue;
            }
            let candidate = one.add(matrix.get(i, j))?;
            if best
                .as_ref()
                .map_or(Ok(true), |b| candidate.compare(b).map(|o| o == Ordering::Less))?
            {
                best = Some(candidate);
            }
        }
    }
    match best {
        Some(b) if b.compare(&one)? == Ordering::Less => {
            if b.compare(&Scalar::zero(kind))? != Ordering::Greater {
                return Err(Error::Precondition(
                    "a surviving pairing equals -1, so no epsilon is admissible".to_string(),
                ));
            }
            Ok(b)
        }
        _ => Scalar::ratio(1, 2).coerce(kind),
    }
}

/// For `d ∈ {5, 6, 7}`, the largest integer strictly below `8(d+1)/(8-d)`: an upper
/// bound on the separable Hadwiger number of any smooth strictly convex body in `R^d`.
pub fn hadwiger_upper_bound_smooth(d: u32) -> Result<u64> {
    if !(5..=7).contains(&d) {
        return Err(Error::Domain(format!(
            "the smooth upper bound is only stated for d in 5..=7, got {d}"
        )));
    }
    let bound = rank_bound(d);
    let floor = bound.floor();
    let below = if floor == bound { floor - int(1) } else { floor };
    Ok(below.to_integer().try_into().expect("small bound"))
}

/// `8(d+1)/(8-d)` for `d < 8`.
pub fn rank_bound(d: u32) -> Rational {
    assert!(d < 8, "the rank bound needs d < 8");
    rat(8 * (i64::from(d) + 1), 8 - i64::from(d))
}
