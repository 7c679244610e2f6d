//! Constructions and exact verifiers for totally separable translative packings.
//!
//! The crate is `no_std` (it needs `alloc`) and covers four families of objects:
//!
//! - [`certificate`]: point/functional certificates witnessing a large separable
//!   Hadwiger number for a smooth strictly convex body, their lift from spherical
//!   codes, and the rank reduction used for the small-dimension upper bounds.
//! - [`spherical`]: spherical codes with inner products in `(-1 + 2α, α]`, and the
//!   probabilistic deletion search for codes with `|⟨u, v⟩| < 1/3`.
//! - [`ell1`]: Reed–Solomon based binary codes over `GF(2^k)` and the totally
//!   separable packings of `ℓ1` balls centred at their codewords.
//! - [`planar`] and [`polyomino`]: exact planar geometry for origin-symmetric
//!   rational polygons (gauge, contacts, quasi hexagons, π-measures, optimal
//!   packings) and the lattice clusters that realise the optimal contact numbers.
//!
//! Exact quantities use arbitrary-precision rationals ([`Rational`]). Float inputs
//! are accepted where the data is inherently numeric (spherical codes, float
//! certificates) and are compared with the margin [`EPSILON`].

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod certificate;
pub mod ell1;
pub mod error;
pub mod linalg;
pub mod planar;
pub mod polyomino;
pub mod report;
pub mod scalar;
pub mod spherical;

pub use error::{Error, Result};
pub use report::{Condition, VerificationReport, Violation};
pub use scalar::{Kind, Rational, Scalar, EPSILON};
