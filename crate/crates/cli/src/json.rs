//! Machine-readable encodings. Coefficients are written as a pair of
//! canonical polynomial strings in `x1..x9`; every value decodes back to
//! the engine value it came from.

use equiquant_core::exact::{Monomial, Scalar};
use equiquant_core::{DiffOperator, HBarScalar, Rational, RationalFunction, Symbol, VectorField};
use serde::{Deserialize, Serialize};

use crate::parse::{parse_polynomial, ExprError};
use crate::render;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonCoefficient {
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    /// Exponents of `ξ` (symbols) or `∂` (operators).
    pub exponents: Vec<u32>,
    pub h_power: u32,
    pub coefficient: JsonCoefficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonSymbol {
    pub dimension: usize,
    pub terms: Vec<JsonTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonOperator {
    pub dimension: usize,
    pub lambda: String,
    pub mu: String,
    pub terms: Vec<JsonTerm>,
}

#[derive(Debug, thiserror::Error)]
pub enum DecodeError {
    #[error("bad coefficient: {0}")]
    Coefficient(#[from] ExprError),
    #[error("{0}")]
    Shape(String),
}

pub fn encode_function(f: &RationalFunction) -> JsonCoefficient {
    JsonCoefficient {
        num: render::polynomial(f.numerator()),
        den: render::polynomial(f.denominator()),
    }
}

pub fn decode_function(c: &JsonCoefficient, n: usize) -> Result<RationalFunction, DecodeError> {
    let num = parse_polynomial(&c.num, n)?;
    let den = parse_polynomial(&c.den, n)?;
    RationalFunction::new(num, den).map_err(|e| DecodeError::Shape(e.to_string()))
}

fn encode_terms<'a>(terms: impl DoubleEndedIterator<Item = (&'a Monomial, &'a HBarScalar)>) -> Vec<JsonTerm> {
    let mut out = Vec::new();
    for (m, c) in terms.rev() {
        for (k, rf) in c.coefficients().rev() {
            out.push(JsonTerm {
                exponents: m.exponents().to_vec(),
                h_power: k,
                coefficient: encode_function(rf),
            });
        }
    }
    out
}

fn decode_terms(terms: &[JsonTerm], n: usize) -> Result<Vec<(Monomial, HBarScalar)>, DecodeError> {
    terms
        .iter()
        .map(|t| {
            if t.exponents.len() != n {
                return Err(DecodeError::Shape(format!(
                    "term has {} exponents, dimension is {n}",
                    t.exponents.len()
                )));
            }
            let rf = decode_function(&t.coefficient, n)?;
            Ok((Monomial::new(t.exponents.clone()), HBarScalar::monomial(rf, t.h_power)))
        })
        .collect()
}

pub fn encode_symbol(s: &Symbol) -> JsonSymbol {
    JsonSymbol {
        dimension: s.nvars(),
        terms: encode_terms(s.terms()),
    }
}

pub fn decode_symbol(j: &JsonSymbol) -> Result<Symbol, DecodeError> {
    let mut s = Symbol::zero(j.dimension);
    for (m, c) in decode_terms(&j.terms, j.dimension)? {
        s.add_term(m, c);
    }
    Ok(s)
}

pub fn encode_operator(a: &DiffOperator) -> JsonOperator {
    JsonOperator {
        dimension: a.nvars(),
        lambda: a.source_weight().to_string(),
        mu: a.target_weight().to_string(),
        terms: encode_terms(a.terms()),
    }
}

pub fn decode_operator(j: &JsonOperator) -> Result<DiffOperator, DecodeError> {
    let weight = |s: &str| Rational::parse(s).ok_or_else(|| DecodeError::Shape(format!("bad weight {s:?}")));
    let mut a = DiffOperator::zero(j.dimension, weight(&j.lambda)?, weight(&j.mu)?);
    for (m, c) in decode_terms(&j.terms, j.dimension)? {
        a.add_term(m, c);
    }
    Ok(a)
}

pub fn encode_field(x: &VectorField) -> Vec<String> {
    x.components().iter().map(render::polynomial).collect()
}

pub fn decode_field(components: &[String]) -> Result<VectorField, DecodeError> {
    let n = components.len();
    let comps = components
        .iter()
        .map(|c| parse_polynomial(c, n))
        .collect::<Result<Vec<_>, _>>()?;
    VectorField::new(comps).map_err(|e| DecodeError::Shape(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_operator, parse_symbol};

    #[test]
    fn symbol_round_trip() {
        let s = parse_symbol("h^2*p1*p2 - (x1 + 1)/(x2^2 + 3)*h*p1 + 2/3*x1", 2).unwrap();
        let j = encode_symbol(&s);
        let text = serde_json::to_string(&j).unwrap();
        let back: JsonSymbol = serde_json::from_str(&text).unwrap();
        assert_eq!(decode_symbol(&back).unwrap(), s);
    }

    #[test]
    fn operator_round_trip() {
        let half = Rational::from_ratio(1, 2);
        let a = parse_operator("h*(x1^2*d1 + x1)/(1 + x1) + d1^2", 1, half.clone(), half).unwrap();
        let j = encode_operator(&a);
        assert_eq!(j.lambda, "1/2");
        assert_eq!(decode_operator(&j).unwrap(), a);
    }

    #[test]
    fn shape_errors() {
        let j = JsonSymbol {
            dimension: 2,
            terms: vec![JsonTerm {
                exponents: vec![1],
                h_power: 0,
                coefficient: JsonCoefficient { num: "1".into(), den: "1".into() },
            }],
        };
        assert!(decode_symbol(&j).is_err());
        let bad = JsonCoefficient { num: "p1".into(), den: "1".into() };
        assert!(decode_function(&bad, 1).is_err());
        let zero = JsonCoefficient { num: "1".into(), den: "0".into() };
        assert!(decode_function(&zero, 1).is_err());
    }
}
