//! Sparse multivariate polynomials over a [`Scalar`] field.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Monomial, Scalar};
use crate::error::{Error, Result};

/// A polynomial in `x1..xn`, stored as a map from exponent vector to a
/// nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial<K> {
    nvars: usize,
    terms: BTreeMap<Monomial, K>,
}

impl<K: Scalar> Polynomial<K> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::from_term(nvars, Monomial::one(nvars), c)
    }

    /// The coordinate function `x_axis` (0-based).
    pub fn var(nvars: usize, axis: usize) -> Self {
        assert!(axis < nvars, "axis {axis} out of range for {nvars} variables");
        Self::from_term(nvars, Monomial::var(nvars, axis), K::one())
    }

    pub fn from_term(nvars: usize, mono: Monomial, c: K) -> Self {
        assert_eq!(mono.nvars(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value if this polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Leading term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &K)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> K {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(K::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, axis: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(axis)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a.clone() * c.clone()))
                .collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) if lc.is_one() => self.clone(),
            Some((_, lc)) => self.scale(&(K::one() / lc.clone())),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to `x_axis` (0-based).
    pub fn partial(&self, axis: usize) -> Self {
        assert!(axis < self.nvars, "axis {axis} out of range");
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(axis);
            if e > 0 {
                out.terms.insert(
                    m.lower(axis).unwrap(),
                    c.clone() * K::from_int(i64::from(e)),
                );
            }
        }
        out
    }

    /// Checked partial derivative; an out-of-range axis is a usage error.
    pub fn try_partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.nvars {
            return Err(Error::usage(format!(
                "axis {} out of range for dimension {}",
                axis + 1,
                self.nvars
            )));
        }
        Ok(self.partial(axis))
    }

    pub fn eval(&self, point: &[K]) -> K {
        assert_eq!(point.len(), self.nvars);
        let mut acc = K::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = t * super::scalar::pow(x, e);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` when it does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&(K::one() / c)));
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&lm)?;
            let qc = rc / lc.clone();
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients with respect to `x_axis`: degree -> polynomial free of
    /// `x_axis`.
    pub fn coefficients_in(&self, axis: usize) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent(axis))
                .or_insert_with(|| Self::zero(self.nvars))
                .add_term(m.with_exponent(axis, 0), c.clone());
        }
        out
    }

    /// Substitutes each variable by a polynomial (possibly in another ring).
    pub fn compose(&self, values: &[Polynomial<K>]) -> Polynomial<K> {
        assert_eq!(values.len(), self.nvars);
        let target = values.first().map(|v| v.nvars).unwrap_or(0);
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (v, &e) in values.iter().zip(m.exponents()) {
                if e > 0 {
                    t = &t * &v.pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Canonical text form: terms in descending graded-lex order, e.g.
    /// `x1^2 - 3/2*x1*x2 + 1`.
    pub fn render(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if m.is_one() {
                abs.to_string()
            } else if abs.is_one() {
                m.render(prefix)
            } else {
                format!("{}*{}", abs, m.render(prefix))
            };
            match (i, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }
}

impl<K: Scalar> Add for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn add(self, rhs: &Polynomial<K>) -> Polynomial<K> {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<K: Scalar> Sub for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn sub(self, rhs: &Polynomial<K>) -> Polynomial<K> {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<K: Scalar> Mul for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn mul(self, rhs: &Polynomial<K>) -> Polynomial<K> {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<K: Scalar> Neg for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

forward_binop!(Polynomial, Add, add);
forward_binop!(Polynomial, Sub, sub);
forward_binop!(Polynomial, Mul, mul);
forward_neg!(Polynomial);
