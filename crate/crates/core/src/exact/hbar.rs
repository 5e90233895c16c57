//! Polynomials in the formal symbol `h = iħ` with rational-function
//! coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Polynomial, RationalFunction, Scalar};

/// `Σ_k c_k h^k` with finitely many nonzero `c_k`.
///
/// Complex conjugation flips the sign of `h`; nothing else in the engine is
/// imaginary.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HBarScalar<K> {
    nvars: usize,
    coeffs: BTreeMap<u32, RationalFunction<K>>,
}

impl<K: Scalar> HBarScalar<K> {
    pub fn zero(nvars: usize) -> Self {
        HBarScalar {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_rf(RationalFunction::one(nvars))
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::from_rf(RationalFunction::constant(nvars, c))
    }

    pub fn from_rf(rf: RationalFunction<K>) -> Self {
        Self::monomial(rf, 0)
    }

    pub fn from_poly(p: Polynomial<K>) -> Self {
        Self::from_rf(RationalFunction::from_poly(p))
    }

    /// `rf · h^power`.
    pub fn monomial(rf: RationalFunction<K>, power: u32) -> Self {
        let nvars = rf.nvars();
        let mut coeffs = BTreeMap::new();
        if !rf.is_zero() {
            coeffs.insert(power, rf);
        }
        HBarScalar { nvars, coeffs }
    }

    /// The bare symbol `h^power`.
    pub fn h_pow(nvars: usize, power: u32) -> Self {
        Self::monomial(RationalFunction::one(nvars), power)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(RationalFunction::is_one)
    }

    /// Coefficients by ascending power of `h`.
    pub fn coefficients(&self) -> impl DoubleEndedIterator<Item = (u32, &RationalFunction<K>)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn coefficient(&self, power: u32) -> RationalFunction<K> {
        self.coeffs
            .get(&power)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(self.nvars))
    }

    pub fn min_power(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// The coefficient of `h^0` if no other power is present.
    pub fn as_rf(&self) -> Option<RationalFunction<K>> {
        match self.coeffs.len() {
            0 => Some(RationalFunction::zero(self.nvars)),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn is_h_free(&self) -> bool {
        self.coeffs.keys().all(|&k| k == 0)
    }

    /// Sends `h` to `-h`.
    pub fn conjugate(&self) -> Self {
        HBarScalar {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, c)| (k, if k % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Multiplies by `h^power`.
    pub fn shift(&self, power: u32) -> Self {
        HBarScalar {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k + power, c.clone())).collect(),
        }
    }

    /// Divides by `h^power` if every present power is at least `power`.
    pub fn unshift(&self, power: u32) -> Option<Self> {
        if self.min_power().is_some_and(|m| m < power) {
            return None;
        }
        Some(HBarScalar {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k - power, c.clone())).collect(),
        })
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        HBarScalar {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v.scale(c))).collect(),
        }
    }

    pub fn mul_rf(&self, rf: &RationalFunction<K>) -> Self {
        if rf.is_zero() {
            return Self::zero(self.nvars);
        }
        HBarScalar {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * rf)).collect(),
        }
    }

    /// Keeps only the coefficient of `h^power`.
    pub fn project(&self, power: u32) -> Self {
        Self::monomial(self.coefficient(power), power)
    }

    pub fn partial(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (&k, c) in &self.coeffs {
            out.insert_add(k, c.partial(axis));
        }
        out
    }

    pub fn eval(&self, point: &[K]) -> Option<BTreeMap<u32, K>> {
        self.coeffs
            .iter()
            .map(|(&k, c)| c.eval(point).map(|v| (k, v)))
            .collect()
    }

    fn insert_add(&mut self, power: u32, c: RationalFunction<K>) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&power) {
            None => {
                self.coeffs.insert(power, c);
            }
            Some(prev) => {
                let s = &prev + &c;
                if !s.is_zero() {
                    self.coeffs.insert(power, s);
                }
            }
        }
    }
}

impl<K: Scalar> From<RationalFunction<K>> for HBarScalar<K> {
    fn from(rf: RationalFunction<K>) -> Self {
        Self::from_rf(rf)
    }
}

impl<K: Scalar> Add for &HBarScalar<K> {
    type Output = HBarScalar<K>;
    fn add(self, rhs: &HBarScalar<K>) -> HBarScalar<K> {
        let mut out = self.clone();
        for (&k, c) in &rhs.coeffs {
            out.insert_add(k, c.clone());
        }
        out
    }
}

impl<K: Scalar> Sub for &HBarScalar<K> {
    type Output = HBarScalar<K>;
    fn sub(self, rhs: &HBarScalar<K>) -> HBarScalar<K> {
        let mut out = self.clone();
        for (&k, c) in &rhs.coeffs {
            out.insert_add(k, -c);
        }
        out
    }
}

impl<K: Scalar> Mul for &HBarScalar<K> {
    type Output = HBarScalar<K>;
    fn mul(self, rhs: &HBarScalar<K>) -> HBarScalar<K> {
        let mut out = HBarScalar::zero(self.nvars);
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &rhs.coeffs {
                out.insert_add(a + b, ca * cb);
            }
        }
        out
    }
}

impl<K: Scalar> Neg for &HBarScalar<K> {
    type Output = HBarScalar<K>;
    fn neg(self) -> HBarScalar<K> {
        HBarScalar {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

forward_binop!(HBarScalar, Add, add);
forward_binop!(HBarScalar, Sub, sub);
forward_binop!(HBarScalar, Mul, mul);
forward_neg!(HBarScalar);
