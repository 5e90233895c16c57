use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial in `n` variables.
///
/// Ordered graded-lexicographically: total degree first, then the first
/// differing exponent (so `x1 > x2 > ... > 1` within a degree).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// The monomial `x_axis`.
    pub fn var(nvars: usize, axis: usize) -> Self {
        let mut e = vec![0; nvars];
        e[axis] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Lower the exponent on `axis` by one; `None` if it is already zero.
    pub fn lower(&self, axis: usize) -> Option<Monomial> {
        let e = self.0[axis].checked_sub(1)?;
        let mut out = self.0.clone();
        out[axis] = e;
        Some(Monomial(out))
    }

    pub fn raise(&self, axis: usize, by: u32) -> Monomial {
        let mut out = self.0.clone();
        out[axis] += by;
        Monomial(out)
    }

    pub fn with_exponent(&self, axis: usize, exp: u32) -> Monomial {
        let mut out = self.0.clone();
        out[axis] = exp;
        Monomial(out)
    }

    /// All exponent vectors `beta <= self` componentwise.
    pub fn sub_multi_indices(&self) -> Vec<Monomial> {
        let mut out = vec![Vec::with_capacity(self.nvars())];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=e).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Monomial).collect()
    }

    /// Every exponent vector of total degree exactly `degree`, descending.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(left);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(nvars, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    /// Every exponent vector of total degree at most `degree`.
    pub fn all_up_to_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        (0..=degree)
            .flat_map(|d| Self::all_of_degree(nvars, d))
            .collect()
    }

    /// `alpha!` = product of factorials of the exponents.
    pub fn factorial_u64(&self) -> u64 {
        self.0
            .iter()
            .map(|&e| (1..=u64::from(e)).product::<u64>())
            .product()
    }

    /// Renders as `x1^2*x3` with the given variable prefix; empty for 1.
    pub fn render(&self, prefix: &str) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{prefix}{}", i + 1)),
                _ => parts.push(format!("{prefix}{}^{e}", i + 1)),
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x1 = Monomial::new(vec![1, 0]);
        let x2 = Monomial::new(vec![0, 1]);
        let x2sq = Monomial::new(vec![0, 2]);
        assert!(x1 > x2);
        assert!(x2sq > x1);
        assert!(x2 > Monomial::one(2));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_up_to_degree(2, 3).len(), 10);
        assert_eq!(Monomial::new(vec![2, 1]).sub_multi_indices().len(), 6);
    }

    #[test]
    fn render_and_divide() {
        let m = Monomial::new(vec![2, 0, 1]);
        assert_eq!(m.render("x"), "x1^2*x3");
        assert_eq!(m.div(&Monomial::var(3, 0)), Some(Monomial::new(vec![1, 0, 1])));
        assert_eq!(m.div(&Monomial::var(3, 1)), None);
    }
}
