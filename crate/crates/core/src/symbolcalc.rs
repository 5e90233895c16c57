//! Symbols on `T*R^n`: polynomial in the fibre variables `ξ`, with
//! `h`-graded rational-function coefficients, and the operators acting on
//! them.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::{HBarScalar, Monomial, Polynomial, RationalFunction, Scalar};

/// `Σ_α c_α(x, h) ξ^α`.
///
/// The density weight `δ` of the symbol space is not stored: the same
/// vector space carries every `S_δ`, and `δ` is passed to the operations
/// that depend on it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Symbol<K> {
    nvars: usize,
    terms: BTreeMap<Monomial, HBarScalar<K>>,
}

impl<K: Scalar> Symbol<K> {
    pub fn zero(nvars: usize) -> Self {
        Symbol {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_coefficient(HBarScalar::one(nvars))
    }

    /// A degree-0 symbol.
    pub fn from_coefficient(c: HBarScalar<K>) -> Self {
        let n = c.nvars();
        Self::from_term(Monomial::one(n), c)
    }

    pub fn from_poly(p: Polynomial<K>) -> Self {
        Self::from_coefficient(HBarScalar::from_poly(p))
    }

    pub fn from_term(xi: Monomial, c: HBarScalar<K>) -> Self {
        let nvars = c.nvars();
        assert_eq!(xi.nvars(), nvars, "multi-index length must equal dimension");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(xi, c);
        }
        Symbol { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, HBarScalar<K>)>) -> Self {
        let mut s = Self::zero(nvars);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// The fibre coordinate `ξ_axis`.
    pub fn xi(nvars: usize, axis: usize) -> Self {
        Self::from_term(Monomial::var(nvars, axis), HBarScalar::one(nvars))
    }

    /// The base coordinate `x_axis`.
    pub fn x(nvars: usize, axis: usize) -> Self {
        Self::from_poly(Polynomial::var(nvars, axis))
    }

    pub fn h(nvars: usize) -> Self {
        Self::from_coefficient(HBarScalar::h_pow(nvars, 1))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order of the `ξ` multi-index.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &HBarScalar<K>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, xi: &Monomial) -> HBarScalar<K> {
        self.terms
            .get(xi)
            .cloned()
            .unwrap_or_else(|| HBarScalar::zero(self.nvars))
    }

    pub fn add_term(&mut self, xi: Monomial, c: HBarScalar<K>) {
        debug_assert_eq!(xi.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&xi) {
            None => {
                self.terms.insert(xi, c);
            }
            Some(prev) => {
                let s = &prev + &c;
                if !s.is_zero() {
                    self.terms.insert(xi, s);
                }
            }
        }
    }

    /// Highest `ξ`-degree present; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn is_h_free(&self) -> bool {
        self.terms.values().all(HBarScalar::is_h_free)
    }

    /// The degree-`k` homogeneous component.
    pub fn component(&self, degree: u32) -> Self {
        Symbol {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components, degrees strictly increasing.
    pub fn homogeneous_components(&self) -> Vec<(u32, Self)> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(self.nvars))
                .terms
                .insert(m.clone(), c.clone());
        }
        out.into_iter().collect()
    }

    /// Applies `f` to each homogeneous component and sums the results.
    pub fn map_components(&self, mut f: impl FnMut(u32, &Self) -> Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, comp) in self.homogeneous_components() {
            out = &out + &f(k, &comp);
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&HBarScalar<K>) -> HBarScalar<K>) -> Self {
        Symbol::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    pub fn scale(&self, c: &K) -> Self {
        self.map_coefficients(|v| v.scale(c))
    }

    pub fn mul_scalar(&self, c: &HBarScalar<K>) -> Self {
        self.map_coefficients(|v| v * c)
    }

    pub fn mul_rf(&self, c: &RationalFunction<K>) -> Self {
        self.map_coefficients(|v| v.mul_rf(c))
    }

    /// Sends `h` to `-h` in every coefficient.
    pub fn conjugate(&self) -> Self {
        self.map_coefficients(HBarScalar::conjugate)
    }

    /// The coefficient of `h^power`, as an `h`-free symbol.
    pub fn h_coefficient(&self, power: u32) -> Self {
        self.map_coefficients(|c| HBarScalar::from_rf(c.coefficient(power)))
    }

    pub fn max_h_power(&self) -> Option<u32> {
        self.terms.values().filter_map(HBarScalar::max_power).max()
    }

    /// `∂/∂x_axis`.
    pub fn partial_x(&self, axis: usize) -> Self {
        self.map_coefficients(|c| c.partial(axis))
    }

    /// `∂/∂ξ_axis`.
    pub fn partial_xi(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(axis);
            if e > 0 {
                out.add_term(m.lower(axis).unwrap(), c.scale(&K::from_int(i64::from(e))));
            }
        }
        out
    }

    /// Multiplies each degree-`k` component by `h^k`.
    pub fn i_hbar_map(&self) -> Self {
        Symbol::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), c.shift(m.degree()))),
        )
    }

    /// `E = ξ_i ∂/∂ξ_i + n/2`: multiplies the degree-`k` component by
    /// `k + n/2`.
    pub fn euler_op(&self) -> Self {
        let half_n = K::from_ratio(self.nvars as i64, 2);
        Symbol::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| {
                let factor = K::from_int(i64::from(m.degree())) + half_n.clone();
                (m.clone(), c.scale(&factor))
            }),
        )
    }

    /// `D = Σ_i ∂²/∂ξ_i∂x_i`.
    pub fn divergence_op(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            for axis in 0..self.nvars {
                let e = m.exponent(axis);
                if e == 0 {
                    continue;
                }
                let dc = c.partial(axis);
                if !dc.is_zero() {
                    out.add_term(m.lower(axis).unwrap(), dc.scale(&K::from_int(i64::from(e))));
                }
            }
        }
        out
    }

    /// `T = ½ η^{ii} ∂²/∂ξ_i²` for a diagonal flat metric with the given
    /// signs.
    pub fn trace_op(&self, signs: &[i8]) -> Self {
        assert_eq!(signs.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            for (axis, &s) in signs.iter().enumerate() {
                let e = m.exponent(axis);
                if e < 2 {
                    continue;
                }
                let f = K::from_ratio(i64::from(s) * i64::from(e) * i64::from(e - 1), 2);
                out.add_term(m.lower(axis).unwrap().lower(axis).unwrap(), c.scale(&f));
            }
        }
        out
    }

    /// `L = η^{ii} ∂²/∂x_i²`.
    pub fn laplacian_x(&self, signs: &[i8]) -> Self {
        assert_eq!(signs.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (axis, &s) in signs.iter().enumerate() {
            let d2 = self.partial_x(axis).partial_x(axis);
            out = &out + &d2.scale(&K::from_int(i64::from(s)));
        }
        out
    }

    /// `{P, Q} = ∂P/∂ξ_i ∂Q/∂x_i − ∂P/∂x_i ∂Q/∂ξ_i`, so `{ξ_i, x_i} = 1`.
    pub fn poisson(&self, other: &Self) -> Result<Self> {
        check_dims(self.nvars, other.nvars)?;
        let mut out = Self::zero(self.nvars);
        for axis in 0..self.nvars {
            let a = &self.partial_xi(axis) * &other.partial_x(axis);
            let b = &self.partial_x(axis) * &other.partial_xi(axis);
            out = &(&out + &a) - &b;
        }
        Ok(out)
    }

    /// `L^δ_X P = {X^i ξ_i, P} + δ (∂_i X^i) P`.
    pub fn lie_derivative(&self, field: &VectorField<K>, delta: &K) -> Result<Self> {
        check_dims(self.nvars, field.nvars())?;
        let mut out = field.to_symbol().poisson(self)?;
        if !delta.is_zero() {
            let div = field.divergence().scale(delta);
            if !div.is_zero() {
                out = &out + &self.mul_rf(&RationalFunction::from_poly(div));
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[K]) -> Option<BTreeMap<(Monomial, u32), K>> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            for (k, v) in c.eval(point)? {
                out.insert((m.clone(), k), v);
            }
        }
        Some(out)
    }
}

pub(crate) fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::usage(format!("dimension mismatch: {a} vs {b}")))
    }
}

/// Free-function form of [`Symbol::euler_op`].
pub fn euler_op<K: Scalar>(p: &Symbol<K>) -> Symbol<K> {
    p.euler_op()
}

/// Free-function form of [`Symbol::divergence_op`].
pub fn divergence_op<K: Scalar>(p: &Symbol<K>) -> Symbol<K> {
    p.divergence_op()
}

/// Free-function form of [`Symbol::i_hbar_map`].
pub fn i_hbar_map<K: Scalar>(p: &Symbol<K>) -> Symbol<K> {
    p.i_hbar_map()
}

pub fn poisson<K: Scalar>(p: &Symbol<K>, q: &Symbol<K>) -> Result<Symbol<K>> {
    p.poisson(q)
}

pub fn lie_derivative_symbol<K: Scalar>(x: &VectorField<K>, delta: &K, p: &Symbol<K>) -> Result<Symbol<K>> {
    p.lie_derivative(x, delta)
}

pub fn homogeneous_components<K: Scalar>(p: &Symbol<K>) -> Vec<(u32, Symbol<K>)> {
    p.homogeneous_components()
}

impl<K: Scalar> Add for &Symbol<K> {
    type Output = Symbol<K>;
    fn add(self, rhs: &Symbol<K>) -> Symbol<K> {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<K: Scalar> Sub for &Symbol<K> {
    type Output = Symbol<K>;
    fn sub(self, rhs: &Symbol<K>) -> Symbol<K> {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<K: Scalar> Mul for &Symbol<K> {
    type Output = Symbol<K>;
    fn mul(self, rhs: &Symbol<K>) -> Symbol<K> {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        let mut out = Symbol::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl<K: Scalar> Neg for &Symbol<K> {
    type Output = Symbol<K>;
    fn neg(self) -> Symbol<K> {
        self.map_coefficients(|c| -c)
    }
}

forward_binop!(Symbol, Add, add);
forward_binop!(Symbol, Sub, sub);
forward_binop!(Symbol, Mul, mul);
forward_neg!(Symbol);

/// A polynomial vector field `X = X^i ∂_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VectorField<K> {
    components: Vec<Polynomial<K>>,
}

impl<K: Scalar> VectorField<K> {
    pub fn new(components: Vec<Polynomial<K>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::usage("vector field needs at least one component"));
        }
        if components.iter().any(|c| c.nvars() != n) {
            return Err(Error::usage("vector field components must live in n variables"));
        }
        Ok(VectorField { components })
    }

    /// `∂_axis`.
    pub fn translation(nvars: usize, axis: usize) -> Self {
        let mut c = vec![Polynomial::zero(nvars); nvars];
        c[axis] = Polynomial::one(nvars);
        VectorField { components: c }
    }

    /// `f ∂_axis`.
    pub fn along(axis: usize, f: Polynomial<K>) -> Self {
        let n = f.nvars();
        let mut c = vec![Polynomial::zero(n); n];
        c[axis] = f;
        VectorField { components: c }
    }

    /// The Euler field `x^j ∂_j`.
    pub fn euler(nvars: usize) -> Self {
        VectorField {
            components: (0..nvars).map(|i| Polynomial::var(nvars, i)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<K>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn scale_by(&self, f: &Polynomial<K>) -> Self {
        VectorField {
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        VectorField {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `∂_i X^i`.
    pub fn divergence(&self) -> Polynomial<K> {
        self.components
            .iter()
            .enumerate()
            .fold(Polynomial::zero(self.nvars()), |acc, (i, c)| &acc + &c.partial(i))
    }

    /// `X(f) = X^i ∂_i f`.
    pub fn apply(&self, f: &Polynomial<K>) -> Polynomial<K> {
        self.components
            .iter()
            .enumerate()
            .fold(Polynomial::zero(self.nvars()), |acc, (i, c)| &acc + &(c * &f.partial(i)))
    }

    /// `[X, Y]^i = X(Y^i) − Y(X^i)`.
    pub fn commutator(&self, other: &Self) -> Self {
        VectorField {
            components: (0..self.nvars())
                .map(|i| &self.apply(&other.components[i]) - &other.apply(&self.components[i]))
                .collect(),
        }
    }

    /// The degree-1 symbol `X^i ξ_i`.
    pub fn to_symbol(&self) -> Symbol<K> {
        let n = self.nvars();
        Symbol::from_terms(
            n,
            self.components
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), HBarScalar::from_poly(c.clone()))),
        )
    }

    /// Inverse of [`to_symbol`](Self::to_symbol): requires an `h`-free
    /// homogeneous degree-1 symbol with polynomial coefficients.
    pub fn from_symbol(s: &Symbol<K>) -> Option<Self> {
        let n = s.nvars();
        let mut components = vec![Polynomial::zero(n); n];
        for (m, c) in s.terms() {
            if m.degree() != 1 {
                return None;
            }
            let axis = (0..n).find(|&i| m.exponent(i) == 1)?;
            components[axis] = c.as_rf()?.as_polynomial()?.clone();
        }
        Some(VectorField { components })
    }

    /// Renders as `x1^2*d1 + x1*x2*d2`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = format!("d{}", i + 1);
            let s = if c.is_one() {
                d
            } else if c.len() == 1 {
                let r = c.render("x");
                if r == "-1" {
                    format!("-{d}")
                } else {
                    format!("{r}*{d}")
                }
            } else {
                format!("({})*{d}", c.render("x"))
            };
            parts.push(s);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

/// Density weights of an operator space `D_{λ,μ}`; `δ = μ − λ` is derived.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Weights<K> {
    pub lambda: K,
    pub mu: K,
}

impl<K: Scalar> Weights<K> {
    pub fn new(lambda: K, mu: K) -> Self {
        Weights { lambda, mu }
    }

    /// `λ = μ = 1/2`.
    pub fn half() -> Self {
        Weights::new(K::from_ratio(1, 2), K::from_ratio(1, 2))
    }

    /// `λ = (1 − δ)/2`, `μ = (1 + δ)/2`, the self-dual pair for `δ`.
    pub fn symmetric_for(delta: K) -> Self {
        let half = K::from_ratio(1, 2);
        Weights::new(
            (K::one() - delta.clone()) * half.clone(),
            (K::one() + delta) * half,
        )
    }

    pub fn delta(&self) -> K {
        self.mu.clone() - self.lambda.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type S = Symbol<BigRational>;
    type P = Polynomial<BigRational>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn euler_examples() {
        let p = &S::xi(2, 0) * &S::xi(2, 1);
        assert_eq!(p.euler_op(), p.scale(&q(3, 1)));
        assert_eq!(S::one(2).euler_op(), S::one(2));
        let p = &(&S::xi(3, 0) * &S::xi(3, 0)) + &S::xi(3, 0);
        let expect = &(&S::xi(3, 0) * &S::xi(3, 0)).scale(&q(7, 2)) + &S::xi(3, 0).scale(&q(5, 2));
        assert_eq!(p.euler_op(), expect);
    }

    #[test]
    fn divergence_examples() {
        let x1 = S::x(1, 0);
        let p = &x1 * &(&S::xi(1, 0) * &S::xi(1, 0));
        assert_eq!(p.divergence_op(), S::xi(1, 0).scale(&q(2, 1)));
        assert!(S::xi(2, 0).divergence_op().is_zero());
    }

    #[test]
    fn divergence_of_metric_symbol() {
        // oracle: expand Σ_ij g^{ij} ξ_i ξ_j over ordered pairs, differentiate
        let n = 2;
        let x = |i| P::var(n, i);
        let g = [[&x(0) * &x(1), x(0).pow(2)], [x(0).pow(2), &x(1) + &P::one(n)]];
        let mut h = S::zero(n);
        for i in 0..n {
            for j in 0..n {
                h = &h + &(&S::from_poly(g[i][j].clone()) * &(&S::xi(n, i) * &S::xi(n, j)));
            }
        }
        let mut expect = S::zero(n);
        for i in 0..n {
            let mut c = P::zero(n);
            for j in 0..n {
                c = &c + &g[i][j].partial(j);
            }
            expect = &expect + &(&S::from_poly(c.scale(&q(2, 1))) * &S::xi(n, i));
        }
        assert_eq!(h.divergence_op(), expect);
    }

    #[test]
    fn i_hbar_examples() {
        let h2 = HBarScalar::h_pow(2, 2);
        let p = &S::xi(2, 0) * &S::xi(2, 0);
        assert_eq!(p.i_hbar_map(), p.mul_scalar(&h2));
        let five = S::one(2).scale(&q(5, 1));
        assert_eq!(five.i_hbar_map(), five);
        let p = &S::xi(2, 0) + &(&S::xi(2, 0) * &S::xi(2, 1));
        let expect = &S::xi(2, 0).mul_scalar(&HBarScalar::h_pow(2, 1))
            + &(&S::xi(2, 0) * &S::xi(2, 1)).mul_scalar(&h2);
        assert_eq!(p.i_hbar_map(), expect);
    }

    #[test]
    fn poisson_examples() {
        assert_eq!(S::xi(1, 0).poisson(&S::x(1, 0)).unwrap(), S::one(1));
        let p = &S::xi(2, 0) * &S::x(2, 1);
        assert!(p.poisson(&p).unwrap().is_zero());
        let a = &S::xi(2, 0) * &S::xi(2, 1);
        let b = &S::x(2, 0) * &S::x(2, 1);
        let expect = &(&S::x(2, 1) * &S::xi(2, 1)) + &(&S::x(2, 0) * &S::xi(2, 0));
        assert_eq!(a.poisson(&b).unwrap(), expect);
        assert!(matches!(a.poisson(&S::x(1, 0)), Err(Error::Usage(_))));
    }

    #[test]
    fn lie_derivative_examples() {
        let p = &S::x(2, 0).scale(&q(3, 1)) * &(&S::xi(2, 1) * &S::x(2, 0));
        let t = VectorField::translation(2, 0);
        assert_eq!(p.lie_derivative(&t, &q(7, 3)).unwrap(), p.partial_x(0));
        let e = VectorField::along(0, P::var(1, 0));
        assert_eq!(S::xi(1, 0).lie_derivative(&e, &q(0, 1)).unwrap(), -S::xi(1, 0));
        assert_eq!(S::one(1).lie_derivative(&e, &q(1, 1)).unwrap(), S::one(1));
    }

    #[test]
    fn components() {
        let p = &S::xi(2, 0) + &(&S::xi(2, 1) * &S::xi(2, 1));
        let comps = p.homogeneous_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], (1, S::xi(2, 0)));
        assert_eq!(comps[1], (2, &S::xi(2, 1) * &S::xi(2, 1)));
        assert!(S::zero(2).homogeneous_components().is_empty());
        let p = &(&S::x(2, 0) * &S::xi(2, 0)) + &S::xi(2, 0);
        let comps = p.homogeneous_components();
        assert_eq!(comps, vec![(1, &(&S::x(2, 0) + &S::one(2)) * &S::xi(2, 0))]);
    }

    #[test]
    fn trace_and_laplacian() {
        // T(ξ1² − ξ2²) at signs (+,−) = 1 + 1
        let p = &(&S::xi(2, 0) * &S::xi(2, 0)) - &(&S::xi(2, 1) * &S::xi(2, 1));
        assert_eq!(p.trace_op(&[1, -1]), S::one(2).scale(&q(2, 1)));
        let f = &(&S::x(2, 0) * &S::x(2, 0)) + &(&S::x(2, 1) * &S::x(2, 1));
        assert_eq!(f.laplacian_x(&[1, 1]), S::one(2).scale(&q(4, 1)));
        assert!(f.laplacian_x(&[1, -1]).is_zero());
    }

    #[test]
    fn vector_field_round_trip() {
        let x = VectorField::new(vec![P::var(2, 0).pow(2), &P::var(2, 0) * &P::var(2, 1)]).unwrap();
        assert_eq!(VectorField::from_symbol(&x.to_symbol()), Some(x.clone()));
        assert_eq!(x.render(), "x1^2*d1 + x1*x2*d2");
        assert_eq!(x.divergence(), P::var(2, 0).scale(&q(3, 1)));
    }

    #[test]
    fn weights_delta() {
        let w = Weights::symmetric_for(q(1, 3));
        assert_eq!(w.delta(), q(1, 3));
        assert_eq!(w.lambda.clone() + w.mu.clone(), q(1, 1));
    }
}
