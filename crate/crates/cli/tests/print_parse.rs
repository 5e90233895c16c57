use equiquant::parse::{parse_function, parse_operator, parse_symbol};
use equiquant::render;
use equiquant_core::exact::{Monomial, Scalar};
use equiquant_core::{DiffOperator, HBarScalar, Polynomial, Rational, RationalFunction, Symbol};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-7i64..=7, 1i64..=5).prop_map(|(a, b)| Rational::from_ratio(a, b))
}

fn monomial(n: usize, max: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max, n).prop_map(Monomial::new)
}

fn polynomial(n: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(n, 2), rational()), 0..=3).prop_map(move |terms| {
        let mut p = Polynomial::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    })
}

fn function(n: usize) -> impl Strategy<Value = RationalFunction> {
    (polynomial(n), polynomial(n), any::<bool>()).prop_filter_map("nonzero denominator", move |(a, b, plain)| {
        if plain {
            Some(RationalFunction::from_poly(a))
        } else {
            RationalFunction::new(a, &b + &Polynomial::one(n)).ok()
        }
    })
}

fn terms(n: usize) -> impl Strategy<Value = Vec<(Monomial, RationalFunction, u32)>> {
    prop::collection::vec((monomial(n, 3), function(n), 0u32..3), 0..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symbols_reparse(ts in terms(3)) {
        let n = 3;
        let mut s = Symbol::zero(n);
        for (m, c, k) in ts {
            s.add_term(m, HBarScalar::monomial(c, k));
        }
        let text = render::symbol(&s);
        prop_assert_eq!(parse_symbol(&text, n).unwrap(), s.clone());
        prop_assert_eq!(render::symbol(&parse_symbol(&text, n).unwrap()), text);
    }

    #[test]
    fn operators_reparse(ts in terms(2), lambda in rational(), mu in rational()) {
        let mut a = DiffOperator::zero(2, lambda.clone(), mu.clone());
        for (m, c, k) in ts {
            a.add_term(m, HBarScalar::monomial(c, k));
        }
        let text = render::operator(&a);
        prop_assert_eq!(parse_operator(&text, 2, lambda, mu).unwrap(), a);
    }

    #[test]
    fn functions_reparse(f in function(3)) {
        let text = render::rational_function(&f);
        prop_assert_eq!(parse_function(&text, 3).unwrap(), f);
    }
}
