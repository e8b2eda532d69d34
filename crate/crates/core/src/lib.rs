//! Exact local Euler obstructions of complex affine varieties.
//!
//! Two independent routes are provided. The geometric route builds the
//! conormal cycle of a variety in the cotangent bundle and runs the Lê–Vogel
//! intersection tower ([`levogel`]). The combinatorial route works on a
//! stratification poset with complex-link data ([`strat`]). Everything is
//! exact: coefficients are rationals and all counts are arbitrary precision.

pub mod conormal;
pub mod cycles;
pub mod error;
pub mod factor;
pub mod levogel;
pub mod poly;
pub mod primes;
pub mod problem;
pub mod strat;

pub use error::{Error, Result};
pub use poly::{
    Ideal, Monomial, MonomialOrder, Point, Polynomial, Rational, VariableContext,
};
