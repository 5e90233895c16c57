//! Exact arithmetic: rationals, multivariate polynomials, rational
//! functions and the `h`-graded coefficient ring.

mod gcd;
mod hbar;
pub mod linalg;
mod monomial;
mod polynomial;
mod ratfunc;
mod scalar;

pub use gcd::gcd;
pub use hbar::HBarScalar;
pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use ratfunc::RationalFunction;
pub use scalar::{binomial, factorial, pow, Scalar};
