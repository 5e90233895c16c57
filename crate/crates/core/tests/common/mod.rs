#![allow(dead_code)]

use equiquant_core::exact::Monomial;
use equiquant_core::{HBarScalar, Polynomial, Rational, RationalFunction, Symbol};
use proptest::prelude::*;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Local geometry of a diagonal metric `g_ij = F η_ij` at one point, built
/// with the general-purpose Christoffel/Ricci formulas.
pub struct PointGeometry {
    pub n: usize,
    pub g_inv: Vec<Vec<Rational>>,
    pub gamma: Vec<Vec<Vec<Rational>>>,
    pub ricci: Vec<Vec<Rational>>,
}

fn invert(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { q(1, 1) } else { q(0, 1) }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| a[r][c] != q(0, 1)).expect("invertible metric");
        a.swap(c, p);
        let inv = q(1, 1) / a[c][c].clone();
        for v in a[c].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for r in 0..n {
            if r != c && a[r][c] != q(0, 1) {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (v, pv) in a[r].iter_mut().zip(pivot) {
                    *v = v.clone() - f.clone() * pv;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

impl PointGeometry {
    pub fn new(factor: &RationalFunction, signs: &[i8], point: &[Rational]) -> Self {
        let n = signs.len();
        let at = |f: &RationalFunction| f.eval(point).expect("point off the singular locus");
        let entry = |i: usize, j: usize| -> RationalFunction {
            if i == j {
                factor.scale(&q(i64::from(signs[i]), 1))
            } else {
                RationalFunction::zero(n)
            }
        };
        let g: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| at(&entry(i, j))).collect()).collect();
        // dg[k][i][j] = ∂_k g_ij, ddg[k][l][i][j] = ∂_k ∂_l g_ij
        let dg: Vec<Vec<Vec<Rational>>> = (0..n)
            .map(|k| (0..n).map(|i| (0..n).map(|j| at(&entry(i, j).partial(k))).collect()).collect())
            .collect();
        let ddg: Vec<Vec<Vec<Vec<Rational>>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| {
                        (0..n)
                            .map(|i| (0..n).map(|j| at(&entry(i, j).partial(k).partial(l))).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let gi = invert(&g);
        // ∂_m g^{kl} = −g^{ka} ∂_m g_ab g^{bl}
        let dgi: Vec<Vec<Vec<Rational>>> = (0..n)
            .map(|m| {
                (0..n)
                    .map(|k| {
                        (0..n)
                            .map(|l| {
                                let mut s = q(0, 1);
                                for a in 0..n {
                                    for b in 0..n {
                                        s -= gi[k][a].clone() * dg[m][a][b].clone() * gi[b][l].clone();
                                    }
                                }
                                s
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let half = q(1, 2);
        // Γ^k_ij and ∂_m Γ^k_ij
        let mut gamma = vec![vec![vec![q(0, 1); n]; n]; n];
        let mut dgamma = vec![vec![vec![vec![q(0, 1); n]; n]; n]; n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let c = dg[i][j][l].clone() + dg[j][i][l].clone() - dg[l][i][j].clone();
                        gamma[k][i][j] = gamma[k][i][j].clone() + half.clone() * gi[k][l].clone() * c.clone();
                        for m in 0..n {
                            let dc = ddg[m][i][j][l].clone() + ddg[m][j][i][l].clone() - ddg[m][l][i][j].clone();
                            dgamma[m][k][i][j] = dgamma[m][k][i][j].clone()
                                + half.clone() * (dgi[m][k][l].clone() * c.clone() + gi[k][l].clone() * dc);
                        }
                    }
                }
            }
        }
        // R_ij = ∂_k Γ^k_ij − ∂_j Γ^k_ik + Γ^k_kl Γ^l_ij − Γ^k_jl Γ^l_ik
        let mut ricci = vec![vec![q(0, 1); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = q(0, 1);
                for k in 0..n {
                    s = s + dgamma[k][k][i][j].clone() - dgamma[j][k][i][k].clone();
                    for l in 0..n {
                        s = s + gamma[k][k][l].clone() * gamma[l][i][j].clone()
                            - gamma[k][j][l].clone() * gamma[l][i][k].clone();
                    }
                }
                ricci[i][j] = s;
            }
        }
        PointGeometry { n, g_inv: gi, gamma, ricci }
    }

    pub fn scalar_curvature(&self) -> Rational {
        let mut s = q(0, 1);
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.g_inv[i][j].clone() * self.ricci[i][j].clone();
            }
        }
        s
    }

    /// First-order coefficients of `Δ_g = g^{ij}(∂_i∂_j − Γ^k_ij ∂_k)`.
    pub fn laplacian_first_order(&self) -> Vec<Rational> {
        (0..self.n)
            .map(|k| {
                let mut s = q(0, 1);
                for i in 0..self.n {
                    for j in 0..self.n {
                        s -= self.g_inv[i][j].clone() * self.gamma[k][i][j].clone();
                    }
                }
                s
            })
            .collect()
    }
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| q(rng.gen_range(-7..=7), rng.gen_range(1..=5))).collect()
}

/// `(1 + Σ a_i x_i² + b x_1) / (1 + c x_n²)` with positive `a_i`, `c`.
pub fn random_factor<R: Rng>(rng: &mut R, n: usize) -> RationalFunction {
    let mut num = Polynomial::one(n);
    for i in 0..n {
        num = &num + &Polynomial::var(n, i).pow(2).scale(&q(rng.gen_range(1..=4), rng.gen_range(1..=3)));
    }
    num = &num + &Polynomial::var(n, 0).scale(&q(rng.gen_range(-2..=2), 3));
    let den = &Polynomial::one(n) + &Polynomial::var(n, n - 1).pow(2).scale(&q(rng.gen_range(1..=3), 2));
    RationalFunction::new(num, den).unwrap()
}

fn monomial_strategy(n: usize, max_degree: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_degree, n)
        .prop_filter("degree bound", move |e| e.iter().sum::<u32>() <= max_degree)
        .prop_map(Monomial::new)
}

pub fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(a, b)| q(a, b))
}

pub fn polynomial_strategy(n: usize, max_degree: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial_strategy(n, max_degree), rational_strategy()), 0..=max_terms)
        .prop_map(move |terms| {
            let mut p = Polynomial::zero(n);
            for (m, c) in terms {
                p.add_term(m, c);
            }
            p
        })
}

/// `h`-free symbols with polynomial coefficients.
pub fn symbol_strategy(
    n: usize,
    max_xi_degree: u32,
    coefficient_degree: u32,
    max_terms: usize,
) -> impl Strategy<Value = Symbol> {
    prop::collection::vec(
        (monomial_strategy(n, max_xi_degree), polynomial_strategy(n, coefficient_degree, 2)),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        let mut s = Symbol::zero(n);
        for (m, c) in terms {
            s.add_term(m, HBarScalar::from_poly(c));
        }
        s
    })
}

pub fn rational_function_strategy(n: usize) -> impl Strategy<Value = RationalFunction> {
    (polynomial_strategy(n, 2, 3), polynomial_strategy(n, 2, 2))
        .prop_filter_map("nonzero denominator", |(a, b)| {
            let den = &b + &Polynomial::one(b.nvars());
            RationalFunction::new(a, den).ok()
        })
}
