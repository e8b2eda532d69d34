//! Sparse multivariate polynomials over the rationals and ideal operations
//! driven by reduced Gröbner bases.

mod context;
mod groebner;
mod hilbert;
mod ideal;
mod monomial;
mod parse;
mod polynomial;

pub use context::VariableContext;
pub use groebner::reduced_groebner_basis;
pub use hilbert::{hilbert_numerator, HilbertData};
pub use ideal::{int_point, Ideal};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_polynomial, parse_rational};
pub use polynomial::Polynomial;

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Rational = BigRational;
pub type Point = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational the way the parser reads it back.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn origin(n: usize) -> Point {
    vec![rat(0); n]
}
