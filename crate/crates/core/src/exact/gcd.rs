//! Multivariate polynomial gcd by recursive content/primitive-part
//! remainder sequences.

use super::{Monomial, Polynomial, Scalar};

/// Greatest common divisor, normalized to leading coefficient 1 under
/// graded-lex order. `gcd(0, 0) = 0`.
pub fn gcd<K: Scalar>(a: &Polynomial<K>, b: &Polynomial<K>) -> Polynomial<K> {
    gcd_rec(a, b, 0).monic()
}

fn gcd_rec<K: Scalar>(a: &Polynomial<K>, b: &Polynomial<K>, from_axis: usize) -> Polynomial<K> {
    let n = a.nvars();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    if a.len() == 1 || b.len() == 1 {
        return monomial_gcd(a, b);
    }
    if a == b {
        return a.clone();
    }
    let Some(axis) = (from_axis..n).find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0) else {
        return Polynomial::one(n);
    };
    if a.degree_in(axis) == 0 {
        return gcd_rec(a, &content(b, axis), axis + 1);
    }
    if b.degree_in(axis) == 0 {
        return gcd_rec(&content(a, axis), b, axis + 1);
    }

    let ca = content(a, axis);
    let cb = content(b, axis);
    let common = gcd_rec(&ca, &cb, axis + 1);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(axis) < g.degree_in(axis) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = pseudo_remainder(&f, &g, axis);
        if r.is_zero() {
            break;
        }
        if r.degree_in(axis) == 0 {
            g = Polynomial::one(n);
            break;
        }
        f = g;
        g = primitive_part(&r, axis);
    }
    let g = primitive_part(&g, axis);
    &common * &g
}

/// gcd of two polynomials when at least one is a single term.
fn monomial_gcd<K: Scalar>(a: &Polynomial<K>, b: &Polynomial<K>) -> Polynomial<K> {
    let n = a.nvars();
    let mut m: Option<Monomial> = None;
    for (mono, _) in a.terms().chain(b.terms()) {
        m = Some(match m {
            None => mono.clone(),
            Some(prev) => prev.gcd(mono),
        });
    }
    Polynomial::from_term(n, m.unwrap_or_else(|| Monomial::one(n)), K::one())
}

/// gcd of the coefficients of `p` viewed as a polynomial in `x_axis`.
fn content<K: Scalar>(p: &Polynomial<K>, axis: usize) -> Polynomial<K> {
    let mut acc = Polynomial::zero(p.nvars());
    for c in p.coefficients_in(axis).into_values() {
        acc = gcd_rec(&acc, &c, axis + 1);
        if acc.is_constant() {
            return Polynomial::one(p.nvars());
        }
    }
    acc.monic()
}

fn primitive_part<K: Scalar>(p: &Polynomial<K>, axis: usize) -> Polynomial<K> {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p, axis);
    p.div_exact(&c).expect("content divides").monic()
}

/// Sparse pseudo-remainder of `f` by `g` in `x_axis`.
fn pseudo_remainder<K: Scalar>(f: &Polynomial<K>, g: &Polynomial<K>, axis: usize) -> Polynomial<K> {
    let n = f.nvars();
    let dg = g.degree_in(axis);
    let lcg = g.coefficients_in(axis).remove(&dg).expect("leading coefficient");
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(axis) >= dg {
        let dr = r.degree_in(axis);
        let lcr = r.coefficients_in(axis).remove(&dr).expect("leading coefficient");
        let shifted = g.mul_monomial(&Monomial::one(n).raise(axis, dr - dg), &K::one());
        r = &(&lcg * &r) - &(&lcr * &shifted);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Polynomial<BigRational>;

    fn x(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    #[test]
    fn univariate_gcd() {
        let one = P::one(1);
        let a = &(&x(1, 0) * &x(1, 0)) - &one;
        let b = &x(1, 0) - &one;
        assert_eq!(gcd(&a, &b), b);
    }

    #[test]
    fn multivariate_common_factor() {
        let n = 3;
        let one = P::one(n);
        let f = &(&(&x(n, 0) * &x(n, 1)) + &x(n, 2)) + &one;
        let g1 = &x(n, 0) - &(&x(n, 2) * &x(n, 2));
        let g2 = &(&x(n, 1) * &x(n, 1)) + &x(n, 0);
        let a = &f * &g1;
        let b = &(&f * &f) * &g2;
        assert_eq!(gcd(&a, &b), f.monic());
        assert_eq!(gcd(&g1, &g2), one);
    }

    #[test]
    fn gcd_with_monomials_and_constants() {
        let n = 2;
        let a = &(&x(n, 0) * &x(n, 0)) * &x(n, 1);
        let b = &(&x(n, 0) * &x(n, 1)) + &(&x(n, 0) * &x(n, 0));
        assert_eq!(gcd(&a, &b), x(n, 0));
        assert_eq!(gcd(&a, &P::constant(n, BigRational::from_ratio(3, 1))), P::one(n));
        assert!(gcd(&P::zero(n), &P::zero(n)).is_zero());
    }

    #[test]
    fn sphere_factor_powers() {
        let n = 3;
        let s = &(&(&(&x(n, 0) * &x(n, 0)) + &(&x(n, 1) * &x(n, 1))) + &(&x(n, 2) * &x(n, 2)))
            + &P::one(n);
        let a = &s.pow(3) * &x(n, 0);
        let b = &s.pow(2) * &(&x(n, 1) + &P::one(n));
        assert_eq!(gcd(&a, &b), s.pow(2));
    }
}
