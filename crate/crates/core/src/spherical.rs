//! Spherical codes with inner products in `(-1 + 2α, α]`, and the randomized
//! deletion search that produces codes with all inner products inside `(-1/3, 1/3)`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{sample_unit_ball_f64, Vector};
use crate::report::{Condition, VerificationReport};
use crate::scalar::{common_kind, int, Kind, Scalar, EPSILON};

/// Unit vectors `v_1, ..., v_m` of `R^dimension` with a coherence parameter `alpha`.
///
/// Unit length is not enforced here; [`verify_code`] reports it.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCode {
    dimension: usize,
    vectors: Vec<Vector>,
    alpha: Scalar,
}

impl SphericalCode {
    pub fn new(dimension: usize, vectors: Vec<Vector>, alpha: Scalar) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Domain("code dimension must be positive".to_string()));
        }
        for v in &vectors {
            if v.dim() != dimension {
                return Err(Error::Dimension {
                    expected: dimension,
                    found: v.dim(),
                });
            }
        }
        common_kind(vectors.iter().flat_map(|v| v.entries()))?;
        if alpha.compare(&Scalar::one(alpha.kind()))? != Ordering::Less {
            return Err(Error::Parameter(format!("alpha must be below 1, got {alpha}")));
        }
        Ok(SphericalCode {
            dimension,
            vectors,
            alpha,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Kind of the vector entries (exact for an empty code).
    pub fn kind(&self) -> Kind {
        self.vectors
            .first()
            .and_then(|v| v.kind().ok())
            .unwrap_or(Kind::Exact)
    }

    /// `alpha` in the kind of the vectors. Float vectors with an exact alpha use
    /// its rounded value; exact vectors with a float alpha are an error.
    pub fn alpha_in_kind(&self) -> Result<Scalar> {
        self.alpha.coerce(self.kind())
    }

    /// Largest `|⟨v_i, v_j⟩|` over distinct pairs, as a float; 0 for fewer than two
    /// vectors.
    pub fn coherence(&self) -> f64 {
        let vs: Vec<Vec<f64>> = self.vectors.iter().map(Vector::to_f64).collect();
        let mut worst = 0.0f64;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                worst = worst.max(dot_f64(&vs[i], &vs[j]).abs());
            }
        }
        worst
    }
}

/// Checks unit norms and `⟨v_i, v_j⟩ ∈ (-1 + 2α, α]` for all distinct pairs.
///
/// Float codes allow `1e-9` on the non-strict conditions and require the strict
/// lower bound to hold by more than `1e-9`.
pub fn verify_code(code: &SphericalCode) -> VerificationReport {
    let mut report = VerificationReport {
        numerical: code.kind() == Kind::Float,
        ..VerificationReport::default()
    };
    let alpha = match code.alpha_in_kind() {
        Ok(a) => a,
        Err(_) => {
            // Exact vectors against a float alpha: compare in floats.
            let float = SphericalCode {
                dimension: code.dimension,
                vectors: code
                    .vectors
                    .iter()
                    .map(|v| v.coerce(Kind::Float).expect("exact to float"))
                    .collect(),
                alpha: code.alpha.clone(),
            };
            return verify_code(&float);
        }
    };
    match alpha {
        Scalar::Exact(alpha) => {
            let one = Scalar::integer(1);
            let lower = Scalar::Exact(alpha.clone() * int(2) - int(1));
            let upper = Scalar::Exact(alpha);
            for (i, v) in code.vectors.iter().enumerate() {
                let norm = v.norm_squared().expect("uniform kind");
                if norm != one {
                    report.push(i, i, Condition::NotUnit, norm);
                }
            }
            for i in 0..code.len() {
                for j in i + 1..code.len() {
                    let g = code.vectors[i].dot(&code.vectors[j]).expect("uniform kind");
                    if g.compare(&upper).expect("exact") == Ordering::Greater {
                        report.push(i, j, Condition::InnerProductTooHigh, g);
                    } else if g.compare(&lower).expect("exact") != Ordering::Greater {
                        report.push(i, j, Condition::InnerProductTooLow, g);
                    }
                }
            }
        }
        Scalar::Float(alpha) => {
            let vs: Vec<Vec<f64>> = code.vectors.iter().map(Vector::to_f64).collect();
            for (i, v) in vs.iter().enumerate() {
                let norm = libm::sqrt(dot_f64(v, v));
                if (norm - 1.0).abs() > EPSILON {
                    report.push(i, i, Condition::NotUnit, Scalar::Float(norm));
                }
            }
            let lower = -1.0 + 2.0 * alpha;
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let g = dot_f64(&vs[i], &vs[j]);
                    if g > alpha + EPSILON {
                        report.push(i, j, Condition::InnerProductTooHigh, Scalar::Float(g));
                    } else if g <= lower + EPSILON {
                        report.push(i, j, Condition::InnerProductTooLow, Scalar::Float(g));
                    }
                }
            }
        }
    }
    report
}

pub(crate) fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Parameters of the deletion argument in dimension `d`: `p = (√8/3)^d`,
/// `k = ⌈1/(2p)⌉` sampled points, and the expectation bound `k - p k²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeletionParameters {
    pub p: f64,
    pub k: usize,
    pub expected_survivors: f64,
}

pub fn deletion_parameters(dim: usize) -> Result<DeletionParameters> {
    if dim < 2 {
        return Err(Error::Domain(format!("deletion search needs d >= 2, got {dim}")));
    }
    let p = libm::pow(libm::sqrt(8.0) / 3.0, dim as f64);
    let k = libm::ceil(1.0 / (2.0 * p));
    if k > 1e7 {
        return Err(Error::TooLarge(format!("deletion search at d = {dim} samples {k} points")));
    }
    let k = k as usize;
    Ok(DeletionParameters {
        p,
        k,
        expected_survivors: k as f64 - p * (k * k) as f64,
    })
}

/// Inner-product margin kept by the final guard pass of [`deletion_search`].
pub const DELETION_MARGIN: f64 = EPSILON;

/// One deletion trial: sample `k` points of the unit ball, delete the higher index
/// of every pair with `‖x_i - x_j‖² ≤ 4/3` or `‖x_i + x_j‖² ≤ 4/3` (pairs in
/// lexicographic order, on the raw samples), normalize the survivors.
///
/// A guard pass then drops the higher index of any normalized pair whose inner
/// product is not inside `(-1/3 + 1e-9, 1/3 - 1e-9)`, so the output is valid with a
/// float margin even when a product lands next to `±1/3`.
pub fn deletion_search(dim: usize, seed: u64) -> Result<SphericalCode> {
    let params = deletion_parameters(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..params.k)
        .map(|_| sample_unit_ball_f64(dim, &mut rng))
        .collect();
    let threshold = 4.0 / 3.0;
    let mut alive = alloc::vec![true; points.len()];
    for i in 0..points.len() {
        if !alive[i] {
            continue;
        }
        let ni = dot_f64(&points[i], &points[i]);
        for j in i + 1..points.len() {
            if !alive[j] {
                continue;
            }
            let cross = 2.0 * dot_f64(&points[i], &points[j]);
            let nj = dot_f64(&points[j], &points[j]);
            if ni + nj - cross <= threshold || ni + nj + cross <= threshold {
                alive[j] = false;
            }
        }
    }
    let mut survivors: Vec<Vec<f64>> = Vec::new();
    for (p, _) in points.into_iter().zip(&alive).filter(|(_, a)| **a) {
        let norm = libm::sqrt(dot_f64(&p, &p));
        if norm == 0.0 {
            continue;
        }
        let unit: Vec<f64> = p.iter().map(|x| x / norm).collect();
        let bound = 1.0 / 3.0 - DELETION_MARGIN;
        if survivors
            .iter()
            .all(|s| dot_f64(s, &unit).abs() < bound)
        {
            survivors.push(unit);
        }
    }
    let vectors = survivors
        .iter()
        .map(|v| Vector::from_f64(v))
        .collect::<Result<Vec<_>>>()?;
    SphericalCode::new(dim, vectors, Scalar::ratio(1, 3))
}

/// Runs `trials` independent trials with seeds `seed, seed + 1, ...` and keeps the
/// largest code (earliest trial on ties).
pub fn deletion_search_trials(dim: usize, seed: u64, trials: usize) -> Result<SphericalCode> {
    if trials == 0 {
        return Err(Error::Parameter("at least one trial is required".to_string()));
    }
    let mut best = deletion_search(dim, seed)?;
    for t in 1..trials {
        let code = deletion_search(dim, seed.wrapping_add(t as u64))?;
        if code.len() > best.len() {
            best = code;
        }
    }
    Ok(best)
}
