//! Equivariant quantization maps, their inverses and the star products they
//! induce.
//!
//! A map is stored as a table: for each ξ-degree `k`, a list of
//! constant-coefficient lowering operators ([`Word`]s) with rational
//! coefficients. Quantizing a symbol sends each homogeneous component
//! `P_k` to `σ⁻¹(h^k Σ_w c_w w(P_k))`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::exact::{factorial, linalg, pow, HBarScalar, Monomial, Polynomial, Scalar};
use crate::geometry::{signature_signs, FlatStructure};
use crate::symbolcalc::{check_dims, Symbol, VectorField, Weights};

/// An ordered product `M^m G^g D^d T^t L^l` of constant-coefficient
/// operators on symbols (`L` acts first):
///
/// * `D = ∂²/∂ξ_i∂x^i`
/// * `T = ½ η^{ij} ∂²/∂ξ_i∂ξ_j`
/// * `L = η^{ij} ∂²/∂x^i∂x^j`
/// * `G = η^{ij} ξ_i ∂/∂x^j`
/// * `M = η^{ij} ξ_i ξ_j` (multiplication)
///
/// `D`, `T`, `L` commute among themselves; `G` and `M` do not.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word {
    pub m: u32,
    pub g: u32,
    pub d: u32,
    pub t: u32,
    pub l: u32,
}

const LETTERS: [&str; 5] = ["M", "G", "D", "T", "L"];

impl Word {
    pub const IDENTITY: Word = Word { m: 0, g: 0, d: 0, t: 0, l: 0 };

    pub fn divergence(power: u32) -> Self {
        Word { d: power, ..Self::IDENTITY }
    }

    pub fn new(d: u32, t: u32, l: u32) -> Self {
        Word { d, t, l, ..Self::IDENTITY }
    }

    pub fn ordered(m: u32, g: u32, d: u32, t: u32, l: u32) -> Self {
        Word { m, g, d, t, l }
    }

    fn exponents(&self) -> [u32; 5] {
        [self.m, self.g, self.d, self.t, self.l]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Net decrease of ξ-degree.
    pub fn degree_drop(&self) -> i64 {
        i64::from(self.d) + 2 * i64::from(self.t) - i64::from(self.g) - 2 * i64::from(self.m)
    }

    /// Whether the word commutes with the Euler field, i.e. lowers ξ-degree
    /// and x-degree by the same amount.
    pub fn is_balanced(&self) -> bool {
        self.t == self.l + self.g + self.m
    }

    pub fn apply<K: Scalar>(&self, p: &Symbol<K>, signs: &[i8]) -> Symbol<K> {
        let mut out = p.clone();
        for _ in 0..self.l {
            out = out.laplacian_x(signs);
        }
        for _ in 0..self.t {
            out = out.trace_op(signs);
        }
        for _ in 0..self.d {
            out = out.divergence_op();
        }
        for _ in 0..self.g {
            out = gradient_op(&out, signs);
        }
        for _ in 0..self.m {
            out = square_op(&out, signs);
        }
        out
    }
}

fn gradient_op<K: Scalar>(p: &Symbol<K>, signs: &[i8]) -> Symbol<K> {
    let n = p.nvars();
    let mut out = Symbol::zero(n);
    for (i, &s) in signs.iter().enumerate() {
        let term = &Symbol::xi(n, i) * &p.partial_x(i);
        out = if s < 0 { &out - &term } else { &out + &term };
    }
    out
}

fn square_op<K: Scalar>(p: &Symbol<K>, signs: &[i8]) -> Symbol<K> {
    let n = p.nvars();
    let mut out = Symbol::zero(n);
    for (i, &s) in signs.iter().enumerate() {
        let term = &(&Symbol::xi(n, i) * &Symbol::xi(n, i)) * p;
        out = if s < 0 { &out - &term } else { &out + &term };
    }
    out
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (name, e) in LETTERS.iter().zip(self.exponents()) {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Letters must appear in the order `M G D T L`, each at most once.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::IDENTITY);
        }
        let mut exps = [0u32; 5];
        let mut next = 0;
        for factor in s.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((a, b)) => (
                    a.trim(),
                    b.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::usage(format!("bad exponent in word {s:?}")))?,
                ),
                None => (factor.trim(), 1),
            };
            let pos = LETTERS
                .iter()
                .position(|l| *l == name)
                .ok_or_else(|| Error::usage(format!("unknown letter {name:?} in word {s:?}")))?;
            if pos < next {
                return Err(Error::usage(format!("letters of {s:?} are not in M G D T L order")));
            }
            exps[pos] = exp;
            next = pos + 1;
        }
        let [m, g, d, t, l] = exps;
        Ok(Word { m, g, d, t, l })
    }
}

/// Where a [`QuantizationMap`] came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MapKind {
    /// The closed-form projective map at `λ = μ = 1/2`.
    ProjectiveHalf,
    /// `exp(h D / 2)`.
    Weyl,
    /// The explicit second-order conformal map at `λ = μ = 1/2`.
    ConformalOrder2,
    /// Produced by [`solve_equivariant_map`].
    Solved,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::ProjectiveHalf => "projective",
            MapKind::Weyl => "weyl",
            MapKind::ConformalOrder2 => "conformal-order2",
            MapKind::Solved => "solved",
        })
    }
}

/// A symbol-to-operator map given degree by degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantizationMap<K> {
    kind: MapKind,
    structure: Option<FlatStructure>,
    nvars: usize,
    weights: Weights<K>,
    signs: Vec<i8>,
    table: Vec<Vec<(Word, K)>>,
}

impl<K: Scalar> QuantizationMap<K> {
    /// Projectively equivariant map on half-densities, tabulated up to
    /// `max_degree` (higher degrees are generated on demand).
    pub fn projective_half(n: usize, max_degree: u32) -> Self {
        QuantizationMap {
            kind: MapKind::ProjectiveHalf,
            structure: Some(FlatStructure::projective(n)),
            nvars: n,
            weights: Weights::half(),
            signs: vec![1; n],
            table: (0..=max_degree).map(|k| projective_row(n, k)).collect(),
        }
    }

    /// The Weyl (symmetric) quantization.
    pub fn weyl(n: usize, max_degree: u32) -> Self {
        QuantizationMap {
            kind: MapKind::Weyl,
            structure: None,
            nvars: n,
            weights: Weights::half(),
            signs: vec![1; n],
            table: (0..=max_degree).map(weyl_row).collect(),
        }
    }

    /// The explicit conformally equivariant map on half-densities, defined
    /// through degree 2. Needs `p + q ≥ 3`.
    pub fn conformal_order2(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if n < 3 {
            return Err(Error::domain(format!(
                "conformal quantization needs p + q >= 3, got {n}"
            )));
        }
        let nn = n as i64;
        let half = K::from_ratio(1, 2);
        let table = vec![
            vec![(Word::IDENTITY, K::one())],
            vec![(Word::IDENTITY, K::one()), (Word::divergence(1), half.clone())],
            vec![
                (Word::IDENTITY, K::one()),
                (Word::divergence(1), half),
                (Word::divergence(2), K::from_ratio(nn, 8 * (nn + 1))),
                (Word::new(0, 1, 1), K::from_ratio(nn, 4 * (nn + 1) * (nn + 2))),
            ],
        ];
        Ok(QuantizationMap {
            kind: MapKind::ConformalOrder2,
            structure: Some(FlatStructure::conformal(p, q)),
            nvars: n,
            weights: Weights::half(),
            signs: signature_signs(p, q),
            table,
        })
    }

    /// A map from an explicit table; `table[k]` lists the words used at
    /// ξ-degree `k`.
    pub fn from_table(
        structure: Option<FlatStructure>,
        nvars: usize,
        weights: Weights<K>,
        table: Vec<Vec<(Word, K)>>,
    ) -> Result<Self> {
        for (k, row) in table.iter().enumerate() {
            validate_row(k as u32, row)?;
        }
        let signs = structure.map(|s| s.signs()).unwrap_or_else(|| vec![1; nvars]);
        Ok(QuantizationMap {
            kind: MapKind::Solved,
            structure,
            nvars,
            weights,
            signs,
            table,
        })
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn structure(&self) -> Option<FlatStructure> {
        self.structure
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn weights(&self) -> &Weights<K> {
        &self.weights
    }

    /// Highest tabulated degree.
    pub fn max_degree(&self) -> u32 {
        self.table.len() as u32 - 1
    }

    /// Whether degrees beyond the table are generated from a formula.
    pub fn is_unbounded(&self) -> bool {
        matches!(self.kind, MapKind::ProjectiveHalf | MapKind::Weyl)
    }

    pub fn table(&self) -> &[Vec<(Word, K)>] {
        &self.table
    }

    /// Words and coefficients at ξ-degree `k`.
    pub fn row(&self, k: u32) -> Result<Vec<(Word, K)>> {
        if let Some(row) = self.table.get(k as usize) {
            return Ok(row.clone());
        }
        match self.kind {
            MapKind::ProjectiveHalf => Ok(projective_row(self.nvars, k)),
            MapKind::Weyl => Ok(weyl_row(k)),
            _ => Err(Error::domain(format!(
                "{} map is only defined through degree {}, needed {k}",
                self.kind,
                self.max_degree()
            ))),
        }
    }

    /// Coefficient of `word` at degree `k`, zero if the word is absent.
    pub fn coefficient(&self, k: u32, word: Word) -> Result<K> {
        Ok(self
            .row(k)?
            .into_iter()
            .find(|(w, _)| *w == word)
            .map(|(_, c)| c)
            .unwrap_or_else(K::zero))
    }

    /// `h^k Σ_w c_w w(P_k)` for a homogeneous component of degree `k`.
    fn quantize_component(&self, k: u32, pk: &Symbol<K>) -> Result<Symbol<K>> {
        let mut out = Symbol::zero(self.nvars);
        for (w, c) in self.row(k)? {
            if c.is_zero() {
                continue;
            }
            out = &out + &w.apply(pk, &self.signs).scale(&c);
        }
        Ok(out.mul_scalar(&HBarScalar::h_pow(self.nvars, k)))
    }

    /// The operator `F_λ → F_μ` assigned to `p`.
    pub fn quantize(&self, p: &Symbol<K>) -> Result<DiffOperator<K>> {
        check_dims(self.nvars, p.nvars())?;
        let mut out = Symbol::zero(self.nvars);
        for (k, pk) in p.homogeneous_components() {
            out = &out + &self.quantize_component(k, &pk)?;
        }
        Ok(DiffOperator::from_symbol(
            &out,
            self.weights.lambda.clone(),
            self.weights.mu.clone(),
        ))
    }

    /// Inverse of [`quantize`](Self::quantize), by descending induction on
    /// ξ-degree: the top component of the remainder fixes the next piece of
    /// the symbol because every map preserves principal symbols.
    pub fn symbol_of(&self, a: &DiffOperator<K>) -> Result<Symbol<K>> {
        check_dims(self.nvars, a.nvars())?;
        if a.source_weight() != &self.weights.lambda || a.target_weight() != &self.weights.mu {
            return Err(Error::usage(format!(
                "operator acts {} -> {}, map expects {} -> {}",
                a.source_weight(),
                a.target_weight(),
                self.weights.lambda,
                self.weights.mu
            )));
        }
        let mut rest = a.to_symbol();
        let mut out = Symbol::zero(self.nvars);
        while let Some(k) = rest.degree() {
            let top = rest.component(k);
            let mut pk = Symbol::zero(self.nvars);
            for (m, c) in top.terms() {
                let c = c.unshift(k).ok_or_else(|| {
                    Error::domain(format!(
                        "operator is not in the image: order-{k} coefficient lacks the factor h^{k}"
                    ))
                })?;
                pk.add_term(m.clone(), c);
            }
            rest = &rest - &self.quantize_component(k, &pk)?;
            debug_assert!(rest.degree().is_none_or(|d| d < k));
            out = &out + &pk;
        }
        Ok(out)
    }

    /// `P ⋆ Q = Q⁻¹(Q(P) ∘ Q(Q))`; needs `λ = μ` so operators compose.
    pub fn star(&self, p: &Symbol<K>, q: &Symbol<K>) -> Result<Symbol<K>> {
        if self.weights.lambda != self.weights.mu {
            return Err(Error::usage(
                "star product needs an operator algebra: lambda must equal mu",
            ));
        }
        let a = self.quantize(p)?;
        let b = self.quantize(q)?;
        self.symbol_of(&a.compose(&b)?)
    }
}

fn validate_row<K: Scalar>(k: u32, row: &[(Word, K)]) -> Result<()> {
    let id = row.iter().find(|(w, _)| w.is_identity());
    if !id.is_some_and(|(_, c)| c.is_one()) {
        return Err(Error::usage(format!(
            "degree {k}: the identity word must carry coefficient 1"
        )));
    }
    let bad = row
        .iter()
        .find(|(w, _)| !w.is_identity() && !(1..=i64::from(k)).contains(&w.degree_drop()));
    if let Some((w, _)) = bad {
        return Err(Error::usage(format!(
            "degree {k}: word {w} must lower degree by 1 to {k}"
        )));
    }
    Ok(())
}

fn projective_row<K: Scalar>(n: usize, k: u32) -> Vec<(Word, K)> {
    (0..=k)
        .map(|m| {
            let e = K::from_int(i64::from(k - m)) + K::from_ratio(n as i64, 2);
            let c = projective_coefficient(m, &e).expect("denominators are positive at E = k - m + n/2");
            (Word::divergence(m), c)
        })
        .collect()
}

fn weyl_row<K: Scalar>(k: u32) -> Vec<(Word, K)> {
    (0..=k)
        .map(|m| {
            let c = K::one() / (factorial::<K>(m) * pow(&K::from_int(2), m));
            (Word::divergence(m), c)
        })
        .collect()
}

/// Rising factorial `(a)_m = a(a+1)⋯(a+m−1)`.
pub fn pochhammer<K: Scalar>(a: &K, m: u32) -> K {
    (0..m).fold(K::one(), |acc, j| acc * (a.clone() + K::from_int(i64::from(j))))
}

/// `(a)_m / ((b)_m m!)`, the `m`-th coefficient of the confluent series
/// `F(a; b | z)`.
pub fn confluent_series_coefficient<K: Scalar>(a: &K, b: &K, m: u32) -> Result<K> {
    let den = pochhammer(b, m);
    if den.is_zero() {
        return Err(Error::domain(format!("pole of the confluent series: ({b})_{m} = 0")));
    }
    Ok(pochhammer(a, m) / (den * factorial::<K>(m)))
}

/// `C_m(E) = (1/m!) Π_{j<m}(E + j + 1/2) / Π_{j=m}^{2m−1}(2E + j)`.
pub fn projective_coefficient<K: Scalar>(m: u32, e: &K) -> Result<K> {
    let half = K::from_ratio(1, 2);
    let num = pochhammer(&(e.clone() + half), m);
    let mut den = factorial::<K>(m);
    for j in m..2 * m {
        let f = K::from_int(2) * e.clone() + K::from_int(i64::from(j));
        if f.is_zero() {
            return Err(Error::domain(format!(
                "C_{m}({e}) has a vanishing denominator factor 2E + {j}"
            )));
        }
        den = den * f;
    }
    Ok(num / den)
}

/// The projectively equivariant quantization of `p` on half-densities.
pub fn quantize_projective_half<K: Scalar>(p: &Symbol<K>) -> Result<DiffOperator<K>> {
    let k = p.degree().unwrap_or(0);
    QuantizationMap::projective_half(p.nvars(), k).quantize(p)
}

/// The Weyl quantization of `p`.
pub fn quantize_weyl<K: Scalar>(p: &Symbol<K>) -> Result<DiffOperator<K>> {
    let k = p.degree().unwrap_or(0);
    QuantizationMap::weyl(p.nvars(), k).quantize(p)
}

/// The conformally equivariant quantization of a quadratic symbol.
pub fn quantize_conformal_order2<K: Scalar>(h: &Symbol<K>, p: usize, q: usize) -> Result<DiffOperator<K>> {
    check_dims(p + q, h.nvars())?;
    if !h.is_homogeneous(2) {
        return Err(Error::usage("conformal order-2 quantization needs a homogeneous quadratic symbol"));
    }
    QuantizationMap::conformal_order2(p, q)?.quantize(h)
}

pub fn symbol_of<K: Scalar>(a: &DiffOperator<K>, map: &QuantizationMap<K>) -> Result<Symbol<K>> {
    map.symbol_of(a)
}

/// The low orders of a star product.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StarReport<K> {
    /// Coefficient of `h^0`; always the pointwise product.
    pub order0: Symbol<K>,
    /// Coefficient of `h^1`.
    pub order1: Symbol<K>,
    /// Whether `order1 = ½ {P, Q}`.
    pub poisson_match: bool,
    /// Coefficients of `h^0 ..= h^truncation`.
    pub orders: Vec<Symbol<K>>,
    /// `Σ_{j ≤ truncation} orders[j] h^j`.
    pub product: Symbol<K>,
}

/// Computes `P ⋆ Q` under `map` and splits it by powers of `h`.
pub fn star_product<K: Scalar>(
    p: &Symbol<K>,
    q: &Symbol<K>,
    map: &QuantizationMap<K>,
    truncation: u32,
) -> Result<StarReport<K>> {
    let full = map.star(p, q)?;
    let n = map.nvars();
    let orders: Vec<Symbol<K>> = (0..=truncation).map(|j| full.h_coefficient(j)).collect();
    let order0 = full.h_coefficient(0);
    let order1 = full.h_coefficient(1);
    let half_bracket = p.poisson(q)?.scale(&K::from_ratio(1, 2));
    let mut product = Symbol::zero(n);
    for (j, s) in orders.iter().enumerate() {
        product = &product + &s.mul_scalar(&HBarScalar::h_pow(n, j as u32));
    }
    Ok(StarReport {
        poisson_match: order1 == half_bracket,
        order0,
        order1,
        orders,
        product,
    })
}

/// `Some(k)` with `δ = k/(n+1)`, `k ≥ n+1` an integer, when `δ` is a
/// resonance of the projective (or one-dimensional) structure.
pub fn resonance_index<K: Scalar>(structure: &FlatStructure, delta: &K) -> Result<Option<i64>> {
    let n = structure.dim();
    if structure.is_conformal() && n >= 2 {
        return Err(Error::Unsupported(
            "resonances of conformal structures in dimension >= 2 are not classified here".into(),
        ));
    }
    let scaled = delta.clone() * K::from_int(n as i64 + 1);
    if !(scaled.clone() % K::one()).is_zero() {
        return Ok(None);
    }
    let k = scaled.to_i64().ok_or_else(|| Error::domain("resonance index out of range"))?;
    Ok((k > n as i64).then_some(k))
}

/// Whether `δ` is resonant for `structure`.
pub fn resonance_check<K: Scalar>(structure: &FlatStructure, delta: &K) -> Result<bool> {
    Ok(resonance_index(structure, delta)?.is_some())
}

/// Candidate words at ξ-degree `k`, identity excluded: the `D^m` for a
/// projective structure; for a conformal one every balanced ordered word
/// lowering degree by 1 to `k`, those in `D, T, L` alone listed first.
/// Conformal candidates may be linearly dependent.
pub fn ansatz_words(structure: &FlatStructure, k: u32) -> Vec<Word> {
    match structure {
        FlatStructure::Projective { .. } => (1..=k).map(Word::divergence).collect(),
        FlatStructure::Conformal { .. } => {
            let mut out = Vec::new();
            for b in 0..=k / 2 {
                for a in 0..=(k - 2 * b) {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    out.push(Word::new(a, b, b));
                }
            }
            for b in 1..=k / 2 {
                for a in 0..=(k - 2 * b) {
                    for g in 0..=b {
                        for m in 0..=(b - g) {
                            let w = Word::ordered(m, g, a, b, b - g - m);
                            if (g, m) != (0, 0) && w.degree_drop() >= 1 {
                                out.push(w);
                            }
                        }
                    }
                }
            }
            out
        }
    }
}

/// Highest degree the conformal ansatz is offered for.
pub const CONFORMAL_MAX_DEGREE: u32 = 3;

/// Builds the equivariant map degree by degree: with unknown coefficients
/// on [`ansatz_words`], imposes `Q(L^δ_X P) = L_X Q(P)` for every generator
/// `X` and every probe monomial `P = x^β ξ^α` (`|α| = k`, `|β| ≤ k + 1`),
/// and solves the resulting linear system exactly.
pub fn solve_equivariant_map<K: Scalar>(
    structure: &FlatStructure,
    max_degree: u32,
    weights: &Weights<K>,
) -> Result<QuantizationMap<K>> {
    if structure.is_conformal() && max_degree > CONFORMAL_MAX_DEGREE {
        return Err(Error::usage(format!(
            "conformal ansatz is offered up to degree {CONFORMAL_MAX_DEGREE}"
        )));
    }
    let generators: Vec<VectorField<K>> = structure.generators();
    let mut table = Vec::new();
    for k in 0..=max_degree {
        table.push(solve_degree(structure, k, weights, &generators)?);
    }
    QuantizationMap::from_table(Some(*structure), structure.dim(), weights.clone(), table)
}

type EquationKey = (Monomial, u32, Monomial);

fn solve_degree<K: Scalar>(
    structure: &FlatStructure,
    k: u32,
    weights: &Weights<K>,
    generators: &[VectorField<K>],
) -> Result<Vec<(Word, K)>> {
    let n = structure.dim();
    let signs = structure.signs();
    let delta = weights.delta();
    let lift = |s: &Symbol<K>| DiffOperator::from_symbol(s, weights.lambda.clone(), weights.mu.clone());

    let xs = Monomial::all_up_to_degree(n, k + 1);
    let mut probes = Vec::new();
    for alpha in Monomial::all_of_degree(n, k) {
        for beta in &xs {
            probes.push(Symbol::from_term(
                alpha.clone(),
                HBarScalar::from_poly(Polynomial::from_term(n, beta.clone(), K::one())),
            ));
        }
    }

    let candidates = ansatz_words(structure, k);
    let words = independent_words(&candidates, &probes, &signs);

    let mut rows: Vec<Vec<K>> = Vec::new();
    let mut rhs: Vec<K> = Vec::new();
    for probe in &probes {
        let images: Vec<Symbol<K>> = words.iter().map(|w| w.apply(probe, &signs)).collect();
        for x in generators {
            let moved = probe.lie_derivative(x, &delta)?;
            let residual = |img: &Symbol<K>, moved_img: &Symbol<K>| -> Result<DiffOperator<K>> {
                lift(moved_img).try_sub(&lift(img).lie_derivative(x)?)
            };
            let mut eqs: HashMap<EquationKey, (Vec<K>, K)> = HashMap::new();
            let blank = || (vec![K::zero(); words.len()], K::zero());
            collect(&residual(probe, &moved)?, |key, v| {
                eqs.entry(key).or_insert_with(blank).1 = -v;
            });
            for (j, w) in words.iter().enumerate() {
                let rw = residual(&images[j], &w.apply(&moved, &signs))?;
                collect(&rw, |key, v| {
                    eqs.entry(key).or_insert_with(blank).0[j] = v;
                });
            }
            for (_, (row, b)) in eqs {
                rows.push(row);
                rhs.push(b);
            }
        }
    }

    let mut row = vec![(Word::IDENTITY, K::one())];
    let singular = |rank, consistent| Error::SingularSystem {
        degree: k,
        rank,
        unknowns: words.len(),
        consistent,
    };
    if words.is_empty() {
        return if rhs.iter().all(|b| b.is_zero()) {
            Ok(row)
        } else {
            Err(singular(0, false))
        };
    }
    match linalg::solve(&rows, &rhs, words.len()) {
        linalg::Solution::Unique(c) => {
            row.extend(words.into_iter().zip(c).filter(|(_, c)| !c.is_zero()));
            Ok(row)
        }
        linalg::Solution::Inconsistent { rank } => Err(singular(rank, false)),
        linalg::Solution::Underdetermined { rank, .. } => Err(singular(rank, true)),
    }
}

/// Leftmost subset of `candidates` acting independently on `probes`.
fn independent_words<K: Scalar>(candidates: &[Word], probes: &[Symbol<K>], signs: &[i8]) -> Vec<Word> {
    let mut rows: HashMap<(usize, Monomial, u32, Monomial), Vec<K>> = HashMap::new();
    for (j, w) in candidates.iter().enumerate() {
        for (pi, probe) in probes.iter().enumerate() {
            for (xi, c) in w.apply(probe, signs).terms() {
                for (hp, rf) in c.coefficients() {
                    let poly = rf.as_polynomial().expect("word images have polynomial coefficients");
                    for (m, v) in poly.terms() {
                        rows.entry((pi, xi.clone(), hp, m.clone()))
                            .or_insert_with(|| vec![K::zero(); candidates.len()])[j] = v.clone();
                    }
                }
            }
        }
    }
    let rows: Vec<Vec<K>> = rows.into_values().collect();
    linalg::independent_columns(&rows, candidates.len())
        .into_iter()
        .map(|j| candidates[j])
        .collect()
}

/// Feeds every rational coefficient of an operator with polynomial
/// coefficients to `sink`, keyed by (∂-index, h-power, x-monomial).
fn collect<K: Scalar>(op: &DiffOperator<K>, mut sink: impl FnMut(EquationKey, K)) {
    for (alpha, c) in op.terms() {
        for (hp, rf) in c.coefficients() {
            let poly = rf
                .as_polynomial()
                .expect("probe residuals have polynomial coefficients");
            for (m, v) in poly.terms() {
                sink((alpha.clone(), hp, m.clone()), v.clone());
            }
        }
    }
}

/// One failed equivariance check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation<K> {
    pub generator: usize,
    pub field: VectorField<K>,
    pub sample: usize,
    /// `Q(L^δ_X P) − L_X Q(P)`.
    pub residual: DiffOperator<K>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivarianceReport<K> {
    pub checks: usize,
    pub violations: Vec<Violation<K>>,
}

impl<K: Scalar> EquivarianceReport<K> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Indices of generators with at least one violation.
    pub fn failing_generators(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.violations.iter().map(|v| v.generator).collect();
        g.sort_unstable();
        g.dedup();
        g
    }
}

/// Checks `Q(L^δ_X P) = L_X Q(P)` for every generator of `structure` and
/// every sample.
pub fn equivariance_report<K: Scalar>(
    map: &QuantizationMap<K>,
    structure: &FlatStructure,
    samples: &[Symbol<K>],
) -> Result<EquivarianceReport<K>> {
    check_dims(map.nvars(), structure.dim())?;
    let delta = map.weights().delta();
    let mut report = EquivarianceReport {
        checks: 0,
        violations: Vec::new(),
    };
    let generators: Vec<VectorField<K>> = structure.generators();
    for (si, p) in samples.iter().enumerate() {
        let qp = map.quantize(p)?;
        for (gi, x) in generators.iter().enumerate() {
            let lhs = map.quantize(&p.lie_derivative(x, &delta)?)?;
            let rhs = qp.lie_derivative(x)?;
            report.checks += 1;
            if lhs != rhs {
                report.violations.push(Violation {
                    generator: gi,
                    field: x.clone(),
                    sample: si,
                    residual: lhs.try_sub(&rhs)?,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    type S = Symbol<Q>;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&q(7, 3), 0), q(1, 1));
        assert_eq!(pochhammer(&q(1, 1), 4), q(24, 1));
        assert_eq!(pochhammer(&q(1, 2), 2), q(3, 4));
    }

    #[test]
    fn confluent_examples() {
        assert_eq!(confluent_series_coefficient(&q(3, 1), &q(5, 7), 0).unwrap(), q(1, 1));
        for m in 0..6 {
            let a = q(5, 3);
            assert_eq!(
                confluent_series_coefficient(&a, &a, m).unwrap(),
                q(1, 1) / factorial::<Q>(m)
            );
        }
        assert_eq!(confluent_series_coefficient(&q(2, 1), &q(1, 1), 2).unwrap(), q(3, 2));
        assert!(matches!(
            confluent_series_coefficient(&q(1, 1), &q(-1, 1), 2),
            Err(Error::MathDomain(_))
        ));
    }

    #[test]
    fn projective_coefficient_examples() {
        assert_eq!(projective_coefficient(0, &q(9, 4)).unwrap(), q(1, 1));
        for e in [q(0, 1), q(1, 2), q(3, 1), q(-7, 5)] {
            assert_eq!(projective_coefficient(1, &e).unwrap(), q(1, 2));
        }
        for n in 1..6i64 {
            assert_eq!(
                projective_coefficient(2, &q(n, 2)).unwrap(),
                q(n + 1, 8 * (n + 2))
            );
        }
        assert!(matches!(
            projective_coefficient(2, &q(-1, 1)),
            Err(Error::MathDomain(_))
        ));
    }

    #[test]
    fn projective_coefficient_is_the_confluent_series() {
        // F(2E; E | z/4): coefficient of z^m is (2E)_m / ((E)_m m! 4^m)
        for m in 0..6u32 {
            for e in [q(1, 2), q(3, 2), q(2, 1), q(7, 3)] {
                let via_series = confluent_series_coefficient(&(q(2, 1) * e.clone()), &e, m).unwrap()
                    / pow(&q(4, 1), m);
                assert_eq!(projective_coefficient(m, &e).unwrap(), via_series);
            }
        }
    }

    #[test]
    fn degree_one_quantization() {
        // X^i ξ_i ↦ h(X^i ∂_i + ½ ∂_i X^i) under both maps
        let n = 2;
        let x = VectorField::new(vec![
            Polynomial::var(n, 0).pow(2),
            &Polynomial::var(n, 0) * &Polynomial::var(n, 1),
        ])
        .unwrap();
        let p = x.to_symbol();
        let h = HBarScalar::h_pow(n, 1);
        let expect = DiffOperator::density_action(&x, q(1, 2)).mul_scalar(&h);
        assert_eq!(quantize_projective_half(&p).unwrap(), expect);
        assert_eq!(quantize_weyl(&p).unwrap(), expect);
        let map = QuantizationMap::projective_half(n, 1);
        assert_eq!(map.symbol_of(&expect).unwrap(), p);
    }

    #[test]
    fn degree_zero_is_multiplication() {
        let f = S::from_poly(&Polynomial::var(2, 0).pow(3) + &Polynomial::var(2, 1));
        let op = quantize_projective_half(&f).unwrap();
        assert_eq!(op.to_symbol(), f);
        assert_eq!(quantize_weyl(&f).unwrap().to_symbol(), f);
    }

    #[test]
    fn symbol_of_rejects_missing_h() {
        let map = QuantizationMap::<Q>::projective_half(1, 2);
        let d1 = DiffOperator::partial(1, 0, q(1, 2));
        assert!(matches!(map.symbol_of(&d1), Err(Error::MathDomain(_))));
    }

    #[test]
    fn word_text_round_trip() {
        for w in [Word::IDENTITY, Word::divergence(1), Word::divergence(3), Word::new(1, 1, 1), Word::ordered(2, 1, 0, 3, 0)] {
            assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }
        assert_eq!(Word::new(2, 0, 0).to_string(), "D^2");
        assert_eq!(Word::new(0, 1, 1).to_string(), "T*L");
        assert_eq!(Word::ordered(1, 1, 0, 2, 0).to_string(), "M*G*T^2");
        assert_eq!("M*G*T^2".parse::<Word>().unwrap(), Word::ordered(1, 1, 0, 2, 0));
        assert!("T*G".parse::<Word>().is_err());
        assert!("X".parse::<Word>().is_err());
    }

    #[test]
    fn star_of_canonical_pair() {
        let map = QuantizationMap::<Q>::projective_half(1, 2);
        let r = star_product(&S::xi(1, 0), &S::x(1, 0), &map, 2).unwrap();
        assert_eq!(r.order0, &S::x(1, 0) * &S::xi(1, 0));
        assert_eq!(r.order1, S::one(1).scale(&q(1, 2)));
        assert!(r.poisson_match);
        assert!(r.orders[2].is_zero());
    }

    #[test]
    fn star_of_constant_coefficient_symbols_is_pointwise() {
        let map = QuantizationMap::<Q>::projective_half(2, 4);
        let p = &S::xi(2, 0) * &S::xi(2, 1);
        let r = &S::xi(2, 1) + &S::one(2).scale(&q(3, 1));
        assert_eq!(map.star(&p, &r).unwrap(), &p * &r);
    }

    #[test]
    fn resonance_examples() {
        let p2 = FlatStructure::projective(2);
        assert_eq!(resonance_index(&p2, &q(1, 1)).unwrap(), Some(3));
        assert!(!resonance_check(&p2, &q(2, 3)).unwrap());
        assert!(!resonance_check(&p2, &q(1, 2)).unwrap());
        let p1 = FlatStructure::projective(1);
        assert!(resonance_check(&p1, &q(3, 2)).unwrap());
        assert!(!resonance_check(&p1, &q(1, 2)).unwrap());
        assert!(matches!(
            resonance_check(&FlatStructure::conformal(2, 1), &q(1, 1)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn ansatz_word_lists() {
        assert_eq!(ansatz_words(&FlatStructure::projective(2), 3).len(), 3);
        let c = ansatz_words(&FlatStructure::conformal(3, 0), 2);
        assert_eq!(
            c,
            vec![Word::divergence(1), Word::divergence(2), Word::new(0, 1, 1), Word::ordered(0, 1, 0, 1, 0)]
        );
        let c3 = ansatz_words(&FlatStructure::conformal(3, 0), 3);
        assert_eq!(c3[4], Word::new(1, 1, 1));
        assert!(c3.iter().all(|w| w.is_balanced() && (1..=3).contains(&w.degree_drop())));
        assert!(c3.contains(&Word::ordered(0, 1, 0, 1, 0)));
    }

    #[test]
    fn solver_projective_degree_two() {
        let m = solve_equivariant_map(&FlatStructure::projective(2), 2, &Weights::<Q>::half()).unwrap();
        assert_eq!(m.coefficient(2, Word::divergence(1)).unwrap(), q(1, 2));
        // D² on ξ_iξ_j doubles: operator coefficient 3/16
        assert_eq!(m.coefficient(2, Word::divergence(2)).unwrap(), q(3, 32));
        assert_eq!(m.max_degree(), 2);
        assert!(m.row(3).is_err());
    }

    #[test]
    fn solver_conformal_degree_two() {
        let m = solve_equivariant_map(&FlatStructure::conformal(3, 0), 2, &Weights::<Q>::half()).unwrap();
        let expect = QuantizationMap::<Q>::conformal_order2(3, 0).unwrap();
        assert_eq!(m.table(), expect.table());
        assert_eq!(m.coefficient(2, Word::new(0, 1, 1)).unwrap(), q(3, 80));
    }

    #[test]
    fn solver_reports_resonance() {
        let w = Weights::new(q(3, 11), q(3, 11) + q(1, 1));
        match solve_equivariant_map(&FlatStructure::projective(2), 3, &w) {
            Err(Error::SingularSystem { degree, .. }) => assert_eq!(degree, 1),
            other => panic!("expected a singular system, got {other:?}"),
        }
        assert!(matches!(
            solve_equivariant_map(&FlatStructure::conformal(3, 0), 4, &Weights::<Q>::half()),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn equivariance_report_flags_weyl() {
        let s = FlatStructure::projective(2);
        let p = &S::x(2, 0) * &(&S::xi(2, 0) * &S::xi(2, 1));
        let proj = equivariance_report(&QuantizationMap::projective_half(2, 2), &s, std::slice::from_ref(&p)).unwrap();
        assert!(proj.passed());
        assert_eq!(proj.checks, 8);
        let weyl = equivariance_report(&QuantizationMap::weyl(2, 2), &s, &[p]).unwrap();
        // indices 6 and 7 are the quadratic fields x^i E
        let failing = weyl.failing_generators();
        assert!(!failing.is_empty() && failing.iter().all(|&g| g >= 6));
        let constant = S::x(2, 0);
        let translations = FlatStructure::projective(2);
        let r = equivariance_report(&QuantizationMap::weyl(2, 0), &translations, &[constant]).unwrap();
        assert!(r.violations.iter().all(|v| v.generator >= 2));
    }

    #[test]
    fn from_table_validation() {
        let bad = vec![vec![(Word::IDENTITY, q(2, 1))]];
        assert!(QuantizationMap::from_table(None, 1, Weights::half(), bad).is_err());
        let bad = vec![vec![(Word::IDENTITY, q(1, 1)), (Word::divergence(1), q(1, 1))]];
        assert!(QuantizationMap::from_table(None, 1, Weights::half(), bad).is_err());
    }

    #[test]
    fn conformal_order2_errors() {
        assert!(matches!(
            QuantizationMap::<Q>::conformal_order2(2, 0),
            Err(Error::MathDomain(_))
        ));
        let cubic = &S::xi(3, 0) * &(&S::xi(3, 0) * &S::xi(3, 0));
        assert!(matches!(quantize_conformal_order2(&cubic, 3, 0), Err(Error::Usage(_))));
    }
}
