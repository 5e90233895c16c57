//! The coefficient field every other type is generic over.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact field of characteristic zero.
///
/// Blanket-implemented for anything that looks like `num_rational::Ratio<_>`;
/// `BigRational` is the workhorse, `Rational64` is handy for small quick checks
/// but will overflow on anything with real coefficient growth.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Eq + Hash + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("integer fits the scalar type")
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_int(numer) / Self::from_int(denom)
    }

    /// Parses `"a"` or `"a/b"` in base 10.
    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.contains('/') {
            Self::from_str_radix(text, 10).ok()
        } else {
            Self::from_str_radix(&format!("{text}/1"), 10).ok()
        }
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + PartialEq
        + Eq
        + Hash
        + Num
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// `value^exp` by repeated squaring.
pub fn pow<K: Scalar>(value: &K, mut exp: u32) -> K {
    let mut base = value.clone();
    let mut acc = K::one();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        exp >>= 1;
    }
    acc
}

/// n! as a scalar.
pub fn factorial<K: Scalar>(n: u32) -> K {
    (1..=n).fold(K::one(), |acc, i| acc * K::from_int(i64::from(i)))
}

/// Binomial coefficient C(n, k) as a scalar.
pub fn binomial<K: Scalar>(n: u32, k: u32) -> K {
    if k > n {
        return K::zero();
    }
    let k = k.min(n - k);
    let mut acc = K::one();
    for i in 0..k {
        acc = acc * K::from_int(i64::from(n - i)) / K::from_int(i64::from(i + 1));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};

    #[test]
    fn parse_and_helpers() {
        let half = BigRational::parse("1/2").unwrap();
        assert_eq!(half, BigRational::from_ratio(2, 4));
        assert_eq!(pow(&half, 3), BigRational::from_ratio(1, 8));
        assert_eq!(factorial::<Rational64>(5), Rational64::from_int(120));
        assert_eq!(binomial::<Rational64>(5, 2), Rational64::from_int(10));
        assert_eq!(binomial::<Rational64>(2, 5), Rational64::from_int(0));
        assert!(BigRational::parse("x").is_none());
        assert_eq!(BigRational::parse("-3"), Some(BigRational::from_int(-3)));
        assert_eq!(BigRational::parse(" 0 "), Some(BigRational::from_int(0)));
    }
}
