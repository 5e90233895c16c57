//! Normal-ordered differential operators between density spaces.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::{binomial, HBarScalar, Monomial, Polynomial, RationalFunction, Scalar};
use crate::symbolcalc::{check_dims, Symbol, VectorField};

/// `Σ_α a_α(x, h) ∂^α : F_λ → F_μ`, every coefficient to the left of every
/// derivative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiffOperator<K> {
    nvars: usize,
    source: K,
    target: K,
    terms: BTreeMap<Monomial, HBarScalar<K>>,
}

/// A tensor density `f |dx|^λ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Density<K> {
    pub weight: K,
    pub value: HBarScalar<K>,
}

impl<K: Scalar> Density<K> {
    pub fn new(weight: K, value: HBarScalar<K>) -> Self {
        Density { weight, value }
    }

    pub fn nvars(&self) -> usize {
        self.value.nvars()
    }

    /// `L_X f = X^i ∂_i f + λ (∂_i X^i) f`.
    pub fn lie_derivative(&self, field: &VectorField<K>) -> Result<Self> {
        let op = DiffOperator::density_action(field, self.weight.clone());
        op.apply(self)
    }
}

impl<K: Scalar> DiffOperator<K> {
    pub fn zero(nvars: usize, source: K, target: K) -> Self {
        DiffOperator {
            nvars,
            source,
            target,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(nvars: usize, weight: K) -> Self {
        Self::multiplication(HBarScalar::one(nvars), weight.clone(), weight)
    }

    /// Multiplication by `c`, as an operator `F_λ → F_μ`.
    pub fn multiplication(c: HBarScalar<K>, source: K, target: K) -> Self {
        let n = c.nvars();
        Self::from_terms(n, source, target, [(Monomial::one(n), c)])
    }

    /// `∂_axis` on `F_λ`.
    pub fn partial(nvars: usize, axis: usize, weight: K) -> Self {
        Self::from_terms(
            nvars,
            weight.clone(),
            weight,
            [(Monomial::var(nvars, axis), HBarScalar::one(nvars))],
        )
    }

    pub fn from_terms(
        nvars: usize,
        source: K,
        target: K,
        terms: impl IntoIterator<Item = (Monomial, HBarScalar<K>)>,
    ) -> Self {
        let mut op = Self::zero(nvars, source, target);
        for (m, c) in terms {
            op.add_term(m, c);
        }
        op
    }

    /// The normal-ordering inverse `σ⁻¹`: `a ξ^α ↦ a ∂^α`.
    pub fn from_symbol(p: &Symbol<K>, source: K, target: K) -> Self {
        DiffOperator {
            nvars: p.nvars(),
            source,
            target,
            terms: p.terms().map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// The normal-ordering map `σ`: `a ∂^α ↦ a ξ^α`.
    pub fn to_symbol(&self) -> Symbol<K> {
        Symbol::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// `L^λ_X = X^i ∂_i + λ div X` acting on `F_λ`.
    pub fn density_action(field: &VectorField<K>, weight: K) -> Self {
        let n = field.nvars();
        let mut op = Self::zero(n, weight.clone(), weight.clone());
        for (i, c) in field.components().iter().enumerate() {
            op.add_term(Monomial::var(n, i), HBarScalar::from_poly(c.clone()));
        }
        op.add_term(
            Monomial::one(n),
            HBarScalar::from_poly(field.divergence().scale(&weight)),
        );
        op
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn source_weight(&self) -> &K {
        &self.source
    }

    pub fn target_weight(&self) -> &K {
        &self.target
    }

    /// Same coefficients, relabelled as an operator `F_λ → F_μ`.
    pub fn with_weights(&self, source: K, target: K) -> Self {
        DiffOperator {
            nvars: self.nvars,
            source,
            target,
            terms: self.terms.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &HBarScalar<K>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &Monomial) -> HBarScalar<K> {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| HBarScalar::zero(self.nvars))
    }

    pub fn add_term(&mut self, alpha: Monomial, c: HBarScalar<K>) {
        debug_assert_eq!(alpha.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&alpha) {
            None => {
                self.terms.insert(alpha, c);
            }
            Some(prev) => {
                let s = &prev + &c;
                if !s.is_zero() {
                    self.terms.insert(alpha, s);
                }
            }
        }
    }

    /// Highest derivative order; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Terms of top order only.
    pub fn principal_part(&self) -> Self {
        let Some(k) = self.order() else {
            return self.clone();
        };
        DiffOperator {
            nvars: self.nvars,
            source: self.source.clone(),
            target: self.target.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&HBarScalar<K>) -> HBarScalar<K>) -> Self {
        Self::from_terms(
            self.nvars,
            self.source.clone(),
            self.target.clone(),
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

    fn check_same_space(&self, other: &Self) -> Result<()> {
        check_dims(self.nvars, other.nvars)?;
        if self.source != other.source || self.target != other.target {
            return Err(Error::usage(format!(
                "operators act between different density spaces: ({}, {}) vs ({}, {})",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    /// `self ∘ other`, normal-ordered by the Leibniz rule
    /// `a∂^β ∘ b∂^γ = Σ_{α≤β} C(β,α) a (∂^α b) ∂^{β−α+γ}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dims(self.nvars, other.nvars)?;
        if other.target != self.source {
            return Err(Error::usage(format!(
                "cannot compose: inner operator lands in weight {}, outer expects {}",
                other.target, self.source
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    /// Composition ignoring the density weights; result carries
    /// `(other.source, self.target)`.
    pub fn compose_unchecked(&self, other: &Self) -> Self {
        let n = self.nvars;
        let mut out = Self::zero(n, other.source.clone(), self.target.clone());
        for (gamma, b) in &other.terms {
            let mut derivs: HashMap<Monomial, HBarScalar<K>> = HashMap::new();
            derivs.insert(Monomial::one(n), b.clone());
            for (beta, a) in &self.terms {
                for alpha in beta.sub_multi_indices() {
                    let db = derivative(&mut derivs, &alpha);
                    if db.is_zero() {
                        continue;
                    }
                    let mut c = K::one();
                    for i in 0..n {
                        c = c * binomial::<K>(beta.exponent(i), alpha.exponent(i));
                    }
                    let idx = beta.div(&alpha).unwrap().mul(gamma);
                    out.add_term(idx, (a * &db).scale(&c));
                }
            }
        }
        out
    }

    /// Applies the operator to a density of the source weight.
    pub fn apply(&self, f: &Density<K>) -> Result<Density<K>> {
        check_dims(self.nvars, f.nvars())?;
        if f.weight != self.source {
            return Err(Error::usage(format!(
                "density of weight {} given to an operator on weight {}",
                f.weight, self.source
            )));
        }
        let mut derivs: HashMap<Monomial, HBarScalar<K>> = HashMap::new();
        derivs.insert(Monomial::one(self.nvars), f.value.clone());
        let mut acc = HBarScalar::zero(self.nvars);
        for (alpha, a) in &self.terms {
            let df = derivative(&mut derivs, alpha);
            acc = &acc + &(a * &df);
        }
        Ok(Density::new(self.target.clone(), acc))
    }

    /// `L_X(A) = L^μ_X ∘ A − A ∘ L^λ_X`.
    pub fn lie_derivative(&self, field: &VectorField<K>) -> Result<Self> {
        check_dims(self.nvars, field.nvars())?;
        let left = Self::density_action(field, self.target.clone()).compose_unchecked(self);
        let right = self.compose_unchecked(&Self::density_action(field, self.source.clone()));
        left.try_sub(&right)
    }

    /// Formal adjoint for the pairing `F_λ ⊗ F_{1−λ} → C`:
    /// `A* = Σ_α (−1)^{|α|} ∂^α ∘ conj(a_α)`.
    pub fn formal_adjoint(&self) -> Result<Self> {
        if self.source.clone() + self.target.clone() != K::one() {
            return Err(Error::domain(format!(
                "adjoint undefined: weights {} + {} != 1",
                self.source, self.target
            )));
        }
        let n = self.nvars;
        let mut out = Self::zero(n, self.source.clone(), self.target.clone());
        for (alpha, a) in &self.terms {
            let sign = if alpha.degree() % 2 == 0 { K::one() } else { -K::one() };
            let mut derivs: HashMap<Monomial, HBarScalar<K>> = HashMap::new();
            derivs.insert(Monomial::one(n), a.conjugate());
            for beta in alpha.sub_multi_indices() {
                let da = derivative(&mut derivs, &beta);
                if da.is_zero() {
                    continue;
                }
                let mut c = sign.clone();
                for i in 0..n {
                    c = c * binomial::<K>(alpha.exponent(i), beta.exponent(i));
                }
                out.add_term(alpha.div(&beta).unwrap(), da.scale(&c));
            }
        }
        Ok(out)
    }

    /// `(A + A*)/2`.
    pub fn symmetrize(&self) -> Result<Self> {
        let adj = self.formal_adjoint()?;
        Ok(self.try_add(&adj)?.scale(&K::from_ratio(1, 2)))
    }

    pub fn is_self_adjoint(&self) -> Result<bool> {
        Ok(&self.formal_adjoint()? == self)
    }
}

/// `∂^alpha` of the seed stored under the empty multi-index, memoised.
fn derivative<K: Scalar>(cache: &mut HashMap<Monomial, HBarScalar<K>>, alpha: &Monomial) -> HBarScalar<K> {
    if let Some(v) = cache.get(alpha) {
        return v.clone();
    }
    let axis = (0..alpha.nvars())
        .find(|&i| alpha.exponent(i) > 0)
        .expect("non-unit multi-index");
    let lower = alpha.lower(axis).unwrap();
    let base = derivative(cache, &lower);
    let d = base.partial(axis);
    cache.insert(alpha.clone(), d.clone());
    d
}

pub fn sigma<K: Scalar>(a: &DiffOperator<K>) -> Symbol<K> {
    a.to_symbol()
}

pub fn sigma_inverse<K: Scalar>(p: &Symbol<K>, lambda: K, mu: K) -> DiffOperator<K> {
    DiffOperator::from_symbol(p, lambda, mu)
}

pub fn compose<K: Scalar>(a: &DiffOperator<K>, b: &DiffOperator<K>) -> Result<DiffOperator<K>> {
    a.compose(b)
}

pub fn apply<K: Scalar>(a: &DiffOperator<K>, f: &Density<K>) -> Result<Density<K>> {
    a.apply(f)
}

pub fn lie_derivative_density<K: Scalar>(x: &VectorField<K>, f: &Density<K>) -> Result<Density<K>> {
    f.lie_derivative(x)
}

pub fn lie_derivative_operator<K: Scalar>(x: &VectorField<K>, a: &DiffOperator<K>) -> Result<DiffOperator<K>> {
    a.lie_derivative(x)
}

pub fn formal_adjoint<K: Scalar>(a: &DiffOperator<K>) -> Result<DiffOperator<K>> {
    a.formal_adjoint()
}

pub fn symmetrize<K: Scalar>(a: &DiffOperator<K>) -> Result<DiffOperator<K>> {
    a.symmetrize()
}

/// Helper for building operators with polynomial coefficients.
pub fn poly_term<K: Scalar>(p: Polynomial<K>, h_power: u32) -> HBarScalar<K> {
    HBarScalar::monomial(RationalFunction::from_poly(p), h_power)
}

impl<K: Scalar> Add for &DiffOperator<K> {
    type Output = DiffOperator<K>;
    /// Panics if the operands act between different spaces.
    fn add(self, rhs: &DiffOperator<K>) -> DiffOperator<K> {
        self.try_add(rhs).expect("operator addition")
    }
}

impl<K: Scalar> Sub for &DiffOperator<K> {
    type Output = DiffOperator<K>;
    fn sub(self, rhs: &DiffOperator<K>) -> DiffOperator<K> {
        self.try_sub(rhs).expect("operator subtraction")
    }
}

impl<K: Scalar> Neg for &DiffOperator<K> {
    type Output = DiffOperator<K>;
    fn neg(self) -> DiffOperator<K> {
        self.map_coefficients(|c| -c)
    }
}

forward_binop!(DiffOperator, Add, add);
forward_binop!(DiffOperator, Sub, sub);
forward_neg!(DiffOperator);

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Op = DiffOperator<BigRational>;
    type P = Polynomial<BigRational>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn zero() -> BigRational {
        q(0, 1)
    }

    fn mult(p: P, w: BigRational) -> Op {
        Op::multiplication(HBarScalar::from_poly(p), w.clone(), w)
    }

    fn dens(p: P, w: BigRational) -> Density<BigRational> {
        Density::new(w, HBarScalar::from_poly(p))
    }

    #[test]
    fn sigma_round_trip_examples() {
        let s = &Symbol::x(1, 0) * &(&Symbol::xi(1, 0) * &Symbol::xi(1, 0));
        let a = sigma_inverse(&s, zero(), zero());
        assert_eq!(a.coefficient(&Monomial::new(vec![2])), HBarScalar::from_poly(P::var(1, 0)));
        assert_eq!(sigma(&a), s);
        assert_eq!(sigma_inverse(&Symbol::one(2), zero(), zero()), Op::identity(2, zero()));
    }

    #[test]
    fn compose_leibniz() {
        let d1 = Op::partial(1, 0, zero());
        let x1 = mult(P::var(1, 0), zero());
        let expect = &x1.compose(&d1).unwrap() + &Op::identity(1, zero());
        assert_eq!(d1.compose(&x1).unwrap(), expect);
        assert_eq!(d1.compose(&Op::identity(1, zero())).unwrap(), d1);
    }

    #[test]
    fn compose_euler_squared() {
        // oracle: (x d)(x d) x^m = m^2 x^m, and (x²d² + x d) x^m = (m(m-1) + m) x^m
        let e = mult(P::var(1, 0), zero()).compose(&Op::partial(1, 0, zero())).unwrap();
        let sq = e.compose(&e).unwrap();
        let expect = Op::from_terms(
            1,
            zero(),
            zero(),
            [
                (Monomial::new(vec![2]), HBarScalar::from_poly(P::var(1, 0).pow(2))),
                (Monomial::new(vec![1]), HBarScalar::from_poly(P::var(1, 0))),
            ],
        );
        assert_eq!(sq, expect);
        for m in 0..6u32 {
            let f = dens(P::var(1, 0).pow(m), zero());
            let got = sq.apply(&f).unwrap();
            let want = P::var(1, 0).pow(m).scale(&q(i64::from(m * m), 1));
            assert_eq!(got.value, HBarScalar::from_poly(want));
        }
    }

    #[test]
    fn compose_weight_mismatch() {
        let a = Op::partial(1, 0, q(1, 2));
        let b = Op::partial(1, 0, zero());
        assert!(matches!(a.compose(&b), Err(Error::Usage(_))));
    }

    #[test]
    fn apply_examples() {
        let d1 = Op::partial(1, 0, zero());
        let got = d1.apply(&dens(P::var(1, 0).pow(2), zero())).unwrap();
        assert_eq!(got.value, HBarScalar::from_poly(P::var(1, 0).scale(&q(2, 1))));
        let f = dens(&P::var(2, 0) * &P::var(2, 1), zero());
        assert_eq!(Op::identity(2, zero()).apply(&f).unwrap(), f);
        let a = Op::from_terms(
            2,
            zero(),
            zero(),
            [(Monomial::new(vec![1, 1]), HBarScalar::from_poly(P::var(2, 1)))],
        );
        assert_eq!(a.apply(&f).unwrap().value, HBarScalar::from_poly(P::var(2, 1)));
        assert!(a.apply(&dens(P::one(2), q(1, 2))).is_err());
    }

    #[test]
    fn density_lie_derivative() {
        let t = VectorField::translation(1, 0);
        let f = dens(P::var(1, 0), q(3, 7));
        assert_eq!(f.lie_derivative(&t).unwrap().value, HBarScalar::one(1));
        let e = VectorField::along(0, P::var(1, 0));
        let lam = q(2, 5);
        let one = dens(P::one(1), lam.clone());
        assert_eq!(one.lie_derivative(&e).unwrap().value, HBarScalar::constant(1, lam));
        let x2 = VectorField::along(0, P::var(1, 0).pow(2));
        let f = dens(P::var(1, 0), q(1, 2));
        let want = P::var(1, 0).pow(2).scale(&q(2, 1));
        assert_eq!(f.lie_derivative(&x2).unwrap().value, HBarScalar::from_poly(want));
    }

    #[test]
    fn operator_lie_derivative() {
        let t = VectorField::translation(2, 0);
        let a = Op::from_terms(2, q(1, 3), q(2, 3), [(Monomial::new(vec![0, 2]), HBarScalar::one(2))]);
        assert!(a.lie_derivative(&t).unwrap().is_zero());
        let x = VectorField::new(vec![P::var(2, 1).pow(2), &P::var(2, 0) * &P::var(2, 1)]).unwrap();
        assert!(Op::identity(2, q(1, 4)).lie_derivative(&x).unwrap().is_zero());
        let e = VectorField::along(0, P::var(1, 0));
        let d1 = Op::partial(1, 0, zero());
        assert_eq!(d1.lie_derivative(&e).unwrap(), -&d1);
    }

    #[test]
    fn adjoint_examples() {
        let h = q(1, 2);
        let d1 = Op::partial(1, 0, h.clone());
        assert_eq!(d1.formal_adjoint().unwrap(), -&d1);
        let a = Op::multiplication(HBarScalar::monomial(RationalFunction::var(1, 0), 1), q(1, 3), q(2, 3));
        assert_eq!(a.formal_adjoint().unwrap(), a.map_coefficients(HBarScalar::conjugate));
        // (f ∂1)* = −f∂1 − ∂1 f
        let f = &P::var(1, 0).pow(2) + &P::one(1);
        let fd = mult(f.clone(), h.clone()).compose(&d1).unwrap();
        let expect = &(-&fd) - &mult(f.partial(0), h.clone());
        assert_eq!(fd.formal_adjoint().unwrap(), expect);
        assert!(matches!(
            Op::partial(1, 0, zero()).formal_adjoint(),
            Err(Error::MathDomain(_))
        ));
    }

    #[test]
    fn symmetrize_examples() {
        let h = q(1, 2);
        let d1 = Op::partial(1, 0, h.clone());
        assert!(d1.symmetrize().unwrap().is_zero());
        let hd1 = d1.mul_scalar(&HBarScalar::h_pow(1, 1));
        assert_eq!(hd1.symmetrize().unwrap(), hd1);
        assert!(hd1.is_self_adjoint().unwrap());
    }
}
