use alloc::vec::Vec;
use core::fmt;

use crate::scalar::Scalar;

/// Which verified condition a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `φ_i(x_i) = 1`.
    SelfPairing,
    /// `φ_i(x_j) ≤ 0` for `i ≠ j`.
    CrossPairingPositive,
    /// `φ_i(x_j) ≥ -1` for `i ≠ j`.
    CrossPairingBelowMinusOne,
    /// `φ_i(x_j) = -1` without `x_j = -x_i` and `φ_j = -φ_i`.
    NonAntipodalMinusOne,
    /// A code vector that is not a unit vector.
    NotUnit,
    /// Inner product at or below `-1 + 2α`.
    InnerProductTooLow,
    /// Inner product above `α`.
    InnerProductTooHigh,
    /// `f_u(u) - f_u(u') < D` for the separating functional of `u`.
    SeparationGap,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::SelfPairing => "self-pairing",
            Condition::CrossPairingPositive => "cross-pairing-positive",
            Condition::CrossPairingBelowMinusOne => "cross-pairing-below-minus-one",
            Condition::NonAntipodalMinusOne => "non-antipodal-minus-one",
            Condition::NotUnit => "not-unit",
            Condition::InnerProductTooLow => "inner-product-too-low",
            Condition::InnerProductTooHigh => "inner-product-too-high",
            Condition::SeparationGap => "separation-gap",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub condition: Condition,
    pub witness: Scalar,
}

/// Outcome of a verifier. Accepted exactly when there are no violations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
    /// Set when the input was float data, so acceptance only holds up to the
    /// float margin.
    pub numerical: bool,
}

impl VerificationReport {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }

    /// True for an accepted report built from float data.
    pub fn numerically_accepted(&self) -> bool {
        self.accepted() && self.numerical
    }

    pub(crate) fn push(&mut self, i: usize, j: usize, condition: Condition, witness: Scalar) {
        self.violations.push(Violation {
            i,
            j,
            condition,
            witness,
        });
    }
}
