//! Flat projective/conformal structures, conformally flat metrics and the
//! quantum Hamiltonian of the geodesic flow.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::diffop::DiffOperator;
use crate::equivariant::QuantizationMap;
use crate::error::{Error, Result};
use crate::exact::{linalg, HBarScalar, Monomial, Polynomial, RationalFunction, Scalar};
use crate::symbolcalc::{Symbol, VectorField};

/// Which finite-dimensional Lie algebra of vector fields acts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FlatStructure {
    /// `sl(n+1)` acting by projective vector fields on `R^n`.
    Projective { n: usize },
    /// `o(p+1, q+1)` acting by conformal vector fields of the flat metric
    /// of signature `(p, q)`.
    Conformal { p: usize, q: usize },
}

impl FlatStructure {
    pub fn projective(n: usize) -> Self {
        FlatStructure::Projective { n }
    }

    pub fn conformal(p: usize, q: usize) -> Self {
        FlatStructure::Conformal { p, q }
    }

    pub fn dim(&self) -> usize {
        match *self {
            FlatStructure::Projective { n } => n,
            FlatStructure::Conformal { p, q } => p + q,
        }
    }

    /// Diagonal of the flat metric (`+1` everywhere for projective).
    pub fn signs(&self) -> Vec<i8> {
        match *self {
            FlatStructure::Projective { n } => vec![1; n],
            FlatStructure::Conformal { p, q } => signature_signs(p, q),
        }
    }

    pub fn is_conformal(&self) -> bool {
        matches!(self, FlatStructure::Conformal { .. })
    }

    /// Expected size of [`generators`](Self::generators).
    pub fn generator_count(&self) -> usize {
        let n = self.dim();
        match self {
            FlatStructure::Projective { .. } => n * (n + 2),
            FlatStructure::Conformal { .. } => (n + 1) * (n + 2) / 2,
        }
    }

    /// The generating vector fields in adapted coordinates.
    ///
    /// Projective: `∂_i`, `x^i ∂_j`, `x^i E`. Conformal: `∂_i`,
    /// `x_i ∂_j − x_j ∂_i` (`i < j`), `E`, `x_j x^j ∂_i − 2 x_i E`, with
    /// indices lowered by the flat metric.
    pub fn generators<K: Scalar>(&self) -> Vec<VectorField<K>> {
        let n = self.dim();
        let x = |i| Polynomial::<K>::var(n, i);
        let euler = VectorField::<K>::euler(n);
        let mut out = Vec::with_capacity(self.generator_count());
        for i in 0..n {
            out.push(VectorField::translation(n, i));
        }
        match self {
            FlatStructure::Projective { .. } => {
                for i in 0..n {
                    for j in 0..n {
                        out.push(VectorField::along(j, x(i)));
                    }
                }
                for i in 0..n {
                    out.push(euler.scale_by(&x(i)));
                }
            }
            FlatStructure::Conformal { .. } => {
                let signs = self.signs();
                let lower = |i: usize| x(i).scale(&K::from_int(i64::from(signs[i])));
                for i in 0..n {
                    for j in (i + 1)..n {
                        let a = VectorField::along(j, lower(i));
                        let b = VectorField::along(i, lower(j));
                        out.push(VectorField::new(
                            a.components()
                                .iter()
                                .zip(b.components())
                                .map(|(u, v)| u - v)
                                .collect(),
                        )
                        .expect("same dimension"));
                    }
                }
                out.push(euler.clone());
                let norm = (0..n).fold(Polynomial::zero(n), |acc, j| &acc + &(&lower(j) * &x(j)));
                for i in 0..n {
                    let a = VectorField::along(i, norm.clone());
                    let b = euler.scale_by(&lower(i).scale(&K::from_int(2)));
                    out.push(
                        VectorField::new(
                            a.components()
                                .iter()
                                .zip(b.components())
                                .map(|(u, v)| u - v)
                                .collect(),
                        )
                        .expect("same dimension"),
                    );
                }
            }
        }
        out
    }
}

impl fmt::Display for FlatStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatStructure::Projective { n } => write!(f, "projective(n={n})"),
            FlatStructure::Conformal { p, q } => write!(f, "conformal({p},{q})"),
        }
    }
}

pub(crate) fn signature_signs(p: usize, q: usize) -> Vec<i8> {
    std::iter::repeat_n(1, p).chain(std::iter::repeat_n(-1, q)).collect()
}

pub fn generators<K: Scalar>(structure: &FlatStructure) -> Vec<VectorField<K>> {
    structure.generators()
}

/// Checks that every commutator of two fields lies in the rational span of
/// the list.
pub fn is_closed_under_bracket<K: Scalar>(fields: &[VectorField<K>]) -> bool {
    if fields.is_empty() {
        return true;
    }
    let mut keys: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut flatten = |x: &VectorField<K>| -> BTreeMap<usize, K> {
        let mut v = BTreeMap::new();
        for (i, c) in x.components().iter().enumerate() {
            for (m, a) in c.terms() {
                let next = keys.len();
                let k = *keys.entry((i, m.clone())).or_insert(next);
                v.insert(k, a.clone());
            }
        }
        v
    };
    let base: Vec<_> = fields.iter().map(&mut flatten).collect();
    let brackets: Vec<_> = fields
        .iter()
        .flat_map(|a| fields.iter().map(move |b| a.commutator(b)))
        .collect();
    let brackets: Vec<_> = brackets.iter().map(&mut flatten).collect();
    let width = keys.len();
    let dense = |v: &BTreeMap<usize, K>| -> Vec<K> {
        let mut row = vec![K::zero(); width];
        for (&k, a) in v {
            row[k] = a.clone();
        }
        row
    };
    let rows: Vec<Vec<K>> = base.iter().map(dense).collect();
    let r = linalg::rank(&rows, width);
    brackets.iter().all(|b| {
        let mut ext = rows.clone();
        ext.push(dense(b));
        linalg::rank(&ext, width) == r
    })
}

/// A conformally flat metric `g = F η` with `η = diag(+1 ×p, −1 ×q)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConformalMetric<K> {
    p: usize,
    q: usize,
    factor: RationalFunction<K>,
}

impl<K: Scalar> ConformalMetric<K> {
    pub fn new(p: usize, q: usize, factor: RationalFunction<K>) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::usage("metric needs dimension at least 1"));
        }
        if factor.nvars() != p + q {
            return Err(Error::usage(format!(
                "conformal factor lives in {} variables, signature needs {}",
                factor.nvars(),
                p + q
            )));
        }
        if factor.is_zero() {
            return Err(Error::domain("conformal factor must not vanish identically"));
        }
        Ok(ConformalMetric { p, q, factor })
    }

    pub fn flat(p: usize, q: usize) -> Self {
        Self::new(p, q, RationalFunction::one(p + q)).expect("unit factor")
    }

    /// The round-sphere factor `4 / (1 + |x|²)²` (Euclidean signature).
    pub fn round_sphere(n: usize) -> Self {
        let r2 = (0..n).fold(Polynomial::one(n), |acc, i| &acc + &Polynomial::var(n, i).pow(2));
        let f = RationalFunction::new(Polynomial::constant(n, K::from_int(4)), r2.pow(2))
            .expect("nonzero denominator");
        Self::new(n, 0, f).expect("valid metric")
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn signs(&self) -> Vec<i8> {
        signature_signs(self.p, self.q)
    }

    pub fn factor(&self) -> &RationalFunction<K> {
        &self.factor
    }

    pub fn structure(&self) -> FlatStructure {
        FlatStructure::conformal(self.p, self.q)
    }

    /// `∂_i F / F`.
    pub fn log_derivative(&self, axis: usize) -> RationalFunction<K> {
        &self.factor.partial(axis) / &self.factor
    }

    /// `g_ij` (diagonal).
    pub fn metric_diagonal(&self) -> Vec<RationalFunction<K>> {
        self.signs()
            .iter()
            .map(|&s| self.factor.scale(&K::from_int(i64::from(s))))
            .collect()
    }

    /// `g^{ij} ξ_i ξ_j = F⁻¹ η^{ij} ξ_i ξ_j`.
    pub fn metric_symbol(&self) -> Symbol<K> {
        let n = self.dim();
        let inv = self.factor.inverse().expect("nonzero factor");
        Symbol::from_terms(
            n,
            self.signs().iter().enumerate().map(|(i, &s)| {
                (
                    Monomial::one(n).raise(i, 2),
                    HBarScalar::from_rf(inv.scale(&K::from_int(i64::from(s)))),
                )
            }),
        )
    }

    /// `Δ_g = |g|^{-1/2} ∂_i |g|^{1/2} g^{ij} ∂_j`, which for `g = F η`
    /// expands to `F⁻¹ η^{ii} (∂_i² + (n/2 − 1) ℓ_i ∂_i)` with
    /// `ℓ_i = ∂_i F / F`.
    pub fn laplace_beltrami(&self) -> DiffOperator<K> {
        let n = self.dim();
        let zero = K::zero();
        let inv = self.factor.inverse().expect("nonzero factor");
        let c = K::from_ratio(n as i64, 2) - K::one();
        let mut op = DiffOperator::zero(n, zero.clone(), zero);
        for (i, &s) in self.signs().iter().enumerate() {
            let a = inv.scale(&K::from_int(i64::from(s)));
            op.add_term(Monomial::one(n).raise(i, 2), HBarScalar::from_rf(a.clone()));
            op.add_term(
                Monomial::var(n, i),
                HBarScalar::from_rf(&a * &self.log_derivative(i).scale(&c)),
            );
        }
        op
    }

    /// Scalar curvature from the conformal-change formula
    /// `R = F⁻¹ (−(n−1) η^{ii} ∂_i ℓ_i − (n−1)(n−2)/4 · η^{ii} ℓ_i²)`.
    pub fn scalar_curvature(&self) -> Result<RationalFunction<K>> {
        let n = self.dim();
        if n < 2 {
            return Err(Error::domain("scalar curvature needs dimension at least 2"));
        }
        let nn = n as i64;
        let mut div = RationalFunction::zero(n);
        let mut sq = RationalFunction::zero(n);
        for (i, &s) in self.signs().iter().enumerate() {
            let l = self.log_derivative(i);
            let sign = K::from_int(i64::from(s));
            div = &div + &l.partial(i).scale(&sign);
            sq = &sq + &(&l * &l).scale(&sign);
        }
        let inner = &div.scale(&K::from_int(-(nn - 1))) + &sq.scale(&K::from_ratio(-(nn - 1) * (nn - 2), 4));
        Ok(&inner / &self.factor)
    }

    /// `|Vol_g|^{−μ} ∘ A ∘ |Vol_g|^{λ}` with `|Vol_g| = F^{n/2}`, as an
    /// operator on functions.
    ///
    /// `F^{−s} ∂_i F^{s} = ∂_i + s ℓ_i` keeps everything rational; the left
    /// over power `F^{(λ−μ)n/2}` must be integral.
    pub fn volume_conjugate(&self, a: &DiffOperator<K>) -> Result<DiffOperator<K>> {
        let n = self.dim();
        if a.nvars() != n {
            return Err(Error::usage("operator and metric dimensions differ"));
        }
        let half_n = K::from_ratio(n as i64, 2);
        let s = a.source_weight().clone() * half_n.clone();
        let excess = (a.source_weight().clone() - a.target_weight().clone()) * half_n;
        if !(excess.clone() % K::one()).is_zero() {
            return Err(Error::domain(format!(
                "conjugation leaves the non-rational factor F^({excess})"
            )));
        }
        let zero = K::zero();
        let shifted: Vec<DiffOperator<K>> = (0..n)
            .map(|i| {
                let mut d = DiffOperator::partial(n, i, zero.clone());
                d.add_term(
                    Monomial::one(n),
                    HBarScalar::from_rf(self.log_derivative(i).scale(&s)),
                );
                d
            })
            .collect();
        let mut powers: HashMap<Monomial, DiffOperator<K>> = HashMap::new();
        powers.insert(Monomial::one(n), DiffOperator::identity(n, zero.clone()));
        let mut out = DiffOperator::zero(n, zero.clone(), zero);
        for (alpha, c) in a.terms() {
            let p = shifted_power(&mut powers, &shifted, alpha);
            out = &out + &p.mul_scalar(c);
        }
        let excess = excess
            .to_i32()
            .ok_or_else(|| Error::domain("conjugation exponent out of range"))?;
        if excess != 0 {
            out = out.mul_rf(&self.factor.pow(excess)?);
        }
        Ok(out)
    }

    /// Quantizes `g^{ij} ξ_i ξ_j`, conjugates to functions and splits the
    /// result as `h² (Δ_g + U)`; returns the operator and `U`.
    pub fn quantum_hamiltonian(
        &self,
        map: &QuantizationMap<K>,
    ) -> Result<(DiffOperator<K>, RationalFunction<K>)> {
        let n = self.dim();
        let op = self.volume_conjugate(&map.quantize(&self.metric_symbol())?)?;
        let h2 = HBarScalar::h_pow(n, 2);
        let rest = &op - &self.laplace_beltrami().mul_scalar(&h2);
        let mut potential = RationalFunction::zero(n);
        for (alpha, c) in rest.terms() {
            let pure = c.unshift(2).and_then(|u| u.as_rf());
            match (alpha.is_one(), pure) {
                (true, Some(u)) => potential = u,
                _ => {
                    return Err(Error::domain(
                        "quantized Hamiltonian is not of the form h²(Δ_g + U)",
                    ))
                }
            }
        }
        Ok((op, potential))
    }

    /// `Ĥ − h²(Δ_g − n²/(4(n−1)(n+2)) R_g)` for the conformal quantizer;
    /// identically zero when the geodesic-flow formula holds.
    pub fn verify_geodesic_formula(&self) -> Result<DiffOperator<K>> {
        let map = QuantizationMap::conformal_order2(self.p, self.q)?;
        let (op, _) = self.quantum_hamiltonian(&map)?;
        let expected = self.expected_geodesic_hamiltonian()?;
        Ok(&op - &expected)
    }

    /// `h²(Δ_g − n²/(4(n−1)(n+2)) R_g)`.
    pub fn expected_geodesic_hamiltonian(&self) -> Result<DiffOperator<K>> {
        let n = self.dim() as i64;
        let c = K::from_ratio(n * n, 4 * (n - 1) * (n + 2));
        let r = self.scalar_curvature()?;
        let zero = K::zero();
        let pot = DiffOperator::multiplication(
            HBarScalar::from_rf(r.scale(&-c)),
            zero.clone(),
            zero,
        );
        Ok((&self.laplace_beltrami() + &pot).mul_scalar(&HBarScalar::h_pow(self.dim(), 2)))
    }
}

/// `Π_i (∂_i + s ℓ_i)^{α_i}`; the factors commute because `ℓ` is a gradient.
fn shifted_power<K: Scalar>(
    cache: &mut HashMap<Monomial, DiffOperator<K>>,
    factors: &[DiffOperator<K>],
    alpha: &Monomial,
) -> DiffOperator<K> {
    if let Some(p) = cache.get(alpha) {
        return p.clone();
    }
    let axis = (0..alpha.nvars())
        .find(|&i| alpha.exponent(i) > 0)
        .expect("non-unit multi-index");
    let lower = shifted_power(cache, factors, &alpha.lower(axis).unwrap());
    let p = factors[axis].compose_unchecked(&lower);
    cache.insert(alpha.clone(), p.clone());
    p
}

pub fn metric_symbol<K: Scalar>(metric: &ConformalMetric<K>) -> Symbol<K> {
    metric.metric_symbol()
}

pub fn laplace_beltrami<K: Scalar>(metric: &ConformalMetric<K>) -> DiffOperator<K> {
    metric.laplace_beltrami()
}

pub fn scalar_curvature<K: Scalar>(metric: &ConformalMetric<K>) -> Result<RationalFunction<K>> {
    metric.scalar_curvature()
}

pub fn volume_conjugate<K: Scalar>(a: &DiffOperator<K>, metric: &ConformalMetric<K>) -> Result<DiffOperator<K>> {
    metric.volume_conjugate(a)
}

pub fn quantum_hamiltonian<K: Scalar>(
    metric: &ConformalMetric<K>,
    map: &QuantizationMap<K>,
) -> Result<(DiffOperator<K>, RationalFunction<K>)> {
    metric.quantum_hamiltonian(map)
}

pub fn verify_geodesic_formula<K: Scalar>(metric: &ConformalMetric<K>) -> Result<DiffOperator<K>> {
    metric.verify_geodesic_formula()
}
