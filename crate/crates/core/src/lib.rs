//! Exact symbolic engine for projectively and conformally equivariant
//! quantization.
//!
//! Every type is generic over an exact [`Scalar`](exact::Scalar) field; the
//! aliases below fix it to arbitrary-precision rationals.

#[macro_use]
mod macros;

pub mod diffop;
pub mod equivariant;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod sample;
pub mod symbolcalc;

pub use error::{Error, Result};
pub use equivariant::{MapKind, Word};
pub use geometry::FlatStructure;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

pub type Polynomial = exact::Polynomial<Rational>;
pub type RationalFunction = exact::RationalFunction<Rational>;
pub type HBarScalar = exact::HBarScalar<Rational>;
pub type Symbol = symbolcalc::Symbol<Rational>;
pub type VectorField = symbolcalc::VectorField<Rational>;
pub type Weights = symbolcalc::Weights<Rational>;
pub type DiffOperator = diffop::DiffOperator<Rational>;
pub type Density = diffop::Density<Rational>;
pub type QuantizationMap = equivariant::QuantizationMap<Rational>;
pub type StarReport = equivariant::StarReport<Rational>;
pub type EquivarianceReport = equivariant::EquivarianceReport<Rational>;
pub type ConformalMetric = geometry::ConformalMetric<Rational>;
