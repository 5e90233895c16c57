//! Seeded random generation of test inputs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::exact::{HBarScalar, Monomial, Polynomial, Scalar};
use crate::symbolcalc::{Symbol, VectorField};

fn small_coefficient<K: Scalar, R: Rng + ?Sized>(rng: &mut R) -> K {
    let mut num = rng.gen_range(-4i64..=4);
    if num == 0 {
        num = 1;
    }
    K::from_ratio(num, rng.gen_range(1i64..=3))
}

fn random_monomial<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_degree: u32) -> Monomial {
    let d = rng.gen_range(0..=max_degree);
    Monomial::all_of_degree(nvars, d)
        .choose(rng)
        .cloned()
        .expect("at least one monomial")
}

/// A polynomial with between 1 and `max_terms` terms of degree at most
/// `max_degree` and small rational coefficients.
pub fn random_polynomial<K: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    max_degree: u32,
    max_terms: usize,
) -> Polynomial<K> {
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut p = Polynomial::zero(nvars);
    for _ in 0..count {
        p.add_term(random_monomial(rng, nvars, max_degree), small_coefficient(rng));
    }
    p
}

/// An `h`-free symbol with polynomial coefficients.
pub fn random_symbol<K: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    max_xi_degree: u32,
    max_terms: usize,
    coefficient_degree: u32,
) -> Symbol<K> {
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut s = Symbol::zero(nvars);
    for _ in 0..count {
        let xi = random_monomial(rng, nvars, max_xi_degree);
        let c = random_polynomial(rng, nvars, coefficient_degree, 2);
        s.add_term(xi, HBarScalar::from_poly(c));
    }
    s
}

pub fn random_vector_field<K: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    max_degree: u32,
) -> VectorField<K> {
    let comps = (0..nvars)
        .map(|_| random_polynomial(rng, nvars, max_degree, 2))
        .collect();
    VectorField::new(comps).expect("components match dimension")
}
