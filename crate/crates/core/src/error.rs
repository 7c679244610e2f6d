use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Exact and float scalars were mixed, or a float was passed where only
    /// exact values make sense.
    #[error("scalar kind error: {0}")]
    Kind(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("translates {i} and {j} overlap (gauge of the centre difference is {gauge})")]
    Overlap { i: usize, j: usize, gauge: String },
    #[error("construction gap on {lattice} lattice at n = {n}: got {achieved}, formula gives {expected}")]
    ConstructionGap {
        lattice: &'static str,
        n: usize,
        achieved: u64,
        expected: u64,
    },
    #[error("object too large to materialise: {0}")]
    TooLarge(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}
