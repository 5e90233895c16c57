//! Rational functions: quotients of polynomials kept in lowest terms.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{gcd, Polynomial, Scalar};
use crate::error::{Error, Result};

/// `numerator / denominator` with the gcd cancelled and the denominator
/// monic under graded-lex order, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction<K> {
    num: Polynomial<K>,
    den: Polynomial<K>,
}

impl<K: Scalar> RationalFunction<K> {
    /// Normalizes `num / den`; a zero denominator is a math-domain error.
    pub fn new(num: Polynomial<K>, den: Polynomial<K>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator in rational function"));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial<K>, den: Polynomial<K>) -> Self {
        debug_assert!(!den.is_zero());
        let n = num.nvars();
        if num.is_zero() {
            return Self::zero(n);
        }
        if let Some(c) = den.as_constant() {
            return RationalFunction {
                num: num.scale(&(K::one() / c)),
                den: Polynomial::one(n),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = K::one() / lc;
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero(nvars: usize) -> Self {
        RationalFunction {
            num: Polynomial::zero(nvars),
            den: Polynomial::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::from_poly(Polynomial::constant(nvars, c))
    }

    pub fn from_poly(p: Polynomial<K>) -> Self {
        let n = p.nvars();
        RationalFunction {
            num: p,
            den: Polynomial::one(n),
        }
    }

    pub fn var(nvars: usize, axis: usize) -> Self {
        Self::from_poly(Polynomial::var(nvars, axis))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Polynomial<K> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<K> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial<K>> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<K> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, exp: i32) -> Result<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let e = exp.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Partial derivative with respect to `x_axis` (0-based), quotient rule.
    pub fn partial(&self, axis: usize) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.partial(axis));
        }
        let dn = self.num.partial(axis);
        let dd = self.den.partial(axis);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalized(num, &self.den * &self.den)
    }

    /// Value at a point; `None` when the denominator vanishes there.
    pub fn eval(&self, point: &[K]) -> Option<K> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    /// Equality decided by cross-multiplication, independent of the
    /// normalized representation.
    pub fn eq_cross(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// `num` or `(num)/(den)` in canonical polynomial form.
    pub fn render(&self, prefix: &str) -> String {
        if self.den.is_one() {
            self.num.render(prefix)
        } else {
            format!("({})/({})", self.num.render(prefix), self.den.render(prefix))
        }
    }
}

impl<K: Scalar> From<Polynomial<K>> for RationalFunction<K> {
    fn from(p: Polynomial<K>) -> Self {
        Self::from_poly(p)
    }
}

impl<K: Scalar> Add for &RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn add(self, rhs: &RationalFunction<K>) -> RationalFunction<K> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalFunction::from_poly(num);
            }
            return RationalFunction::normalized(num, self.den.clone());
        }
        if rhs.den.is_one() {
            return RationalFunction::normalized(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        if self.den.is_one() {
            return RationalFunction::normalized(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let b = self.den.div_exact(&g).expect("gcd divides");
        let d = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d) + &(&rhs.num * &b);
        RationalFunction::normalized(num, &b * &rhs.den)
    }
}

impl<K: Scalar> Sub for &RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn sub(self, rhs: &RationalFunction<K>) -> RationalFunction<K> {
        self + &(-rhs)
    }
}

impl<K: Scalar> Mul for &RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn mul(self, rhs: &RationalFunction<K>) -> RationalFunction<K> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.nvars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        let num = &a * &c;
        let den = &b * &d;
        let lc = den.leading_coefficient();
        let inv = K::one() / lc;
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }
}

impl<K: Scalar> Div for &RationalFunction<K> {
    type Output = RationalFunction<K>;
    /// Panics on division by zero; use [`RationalFunction::try_div`] to
    /// get an error instead.
    fn div(self, rhs: &RationalFunction<K>) -> RationalFunction<K> {
        self.try_div(rhs).expect("division by zero rational function")
    }
}

impl<K: Scalar> Neg for &RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn neg(self) -> RationalFunction<K> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_binop!(RationalFunction, Add, add);
forward_binop!(RationalFunction, Sub, sub);
forward_binop!(RationalFunction, Mul, mul);
forward_binop!(RationalFunction, Div, div);
forward_neg!(RationalFunction);
