mod common;

use common::{q, random_factor, random_point, PointGeometry};
use equiquant_core::exact::Monomial;
use equiquant_core::{ConformalMetric, DiffOperator, Polynomial, RationalFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_against_oracle(metric: &ConformalMetric, rng: &mut ChaCha8Rng, points: usize) {
    let n = metric.dim();
    let r = metric.scalar_curvature().unwrap();
    let lap = metric.laplace_beltrami();
    let signs = metric.signs();
    for _ in 0..points {
        let p = random_point(rng, n);
        let oracle = PointGeometry::new(metric.factor(), &signs, &p);
        assert_eq!(r.eval(&p).unwrap(), oracle.scalar_curvature(), "R at {p:?}");
        let first = oracle.laplacian_first_order();
        for (k, expect) in first.iter().enumerate() {
            let c = lap.coefficient(&Monomial::var(n, k)).as_rf().unwrap();
            assert_eq!(&c.eval(&p).unwrap(), expect, "first-order coefficient {k} at {p:?}");
        }
        for i in 0..n {
            let c = lap.coefficient(&Monomial::one(n).raise(i, 2)).as_rf().unwrap();
            assert_eq!(c.eval(&p).unwrap(), oracle.g_inv[i][i]);
        }
    }
}

#[test]
fn sphere_curvature_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = ConformalMetric::round_sphere(3);
    assert_eq!(s.scalar_curvature().unwrap().as_constant(), Some(q(6, 1)));
    check_against_oracle(&s, &mut rng, 5);
}

#[test]
fn sphere_laplacian_in_the_plane_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    check_against_oracle(&ConformalMetric::round_sphere(2), &mut rng, 5);
}

#[test]
fn linear_factor_in_the_plane() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let f = RationalFunction::from_poly(&Polynomial::one(2) + &Polynomial::var(2, 0));
    let m = ConformalMetric::new(2, 0, f).unwrap();
    let oracle = PointGeometry::new(m.factor(), &m.signs(), &[q(1, 3), q(2, 1)]);
    assert_eq!(m.scalar_curvature().unwrap().eval(&[q(1, 3), q(2, 1)]).unwrap(), oracle.scalar_curvature());
    check_against_oracle(&m, &mut rng, 5);
}

#[test]
fn random_factors_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for (p, q_) in [(3, 0), (2, 1), (4, 0)] {
        let f = random_factor(&mut rng, p + q_);
        let m = ConformalMetric::new(p, q_, f).unwrap();
        check_against_oracle(&m, &mut rng, 5);
    }
}

#[test]
fn geodesic_formula_on_random_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..3 {
        let m = ConformalMetric::new(3, 0, random_factor(&mut rng, 3)).unwrap();
        assert!(m.verify_geodesic_formula().unwrap().is_zero());
    }
    let m = ConformalMetric::new(2, 1, random_factor(&mut rng, 3)).unwrap();
    assert!(m.verify_geodesic_formula().unwrap().is_zero());
}

#[test]
fn laplacian_on_half_densities_is_self_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let half = q(1, 2);
    for m in [ConformalMetric::round_sphere(3), ConformalMetric::new(3, 0, random_factor(&mut rng, 3)).unwrap()] {
        // conjugating with the inverse factor undoes the half-density identification
        let inverse = ConformalMetric::new(3, 0, m.factor().inverse().unwrap()).unwrap();
        let lap = m.laplace_beltrami().with_weights(half.clone(), half.clone());
        let on_half = inverse.volume_conjugate(&lap).unwrap().with_weights(half.clone(), half.clone());
        assert_eq!(on_half.formal_adjoint().unwrap(), on_half);
        let raw: DiffOperator = lap;
        assert!(!raw.is_self_adjoint().unwrap());
    }
}
