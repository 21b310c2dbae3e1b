use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_traits::ToPrimitive;

use wforms_core::exact::{int, rat, Rational};
use wforms_core::sphere::{integrate_poly, integrate_symbol, moment, MomentCache};
use wforms_core::{Poly, RationalSymbol};

/// Uniform points on `S^{n-1}` by normalizing Box–Muller Gaussians.
fn monte_carlo(alpha: &[u8], samples: usize, seed: u64) -> f64 {
    let n = alpha.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    let mut g = vec![0.0f64; n];
    for _ in 0..samples {
        for i in 0..n {
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen();
            g[i] = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        }
        let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut v = 1.0;
        for i in 0..n {
            v *= (g[i] / r).powi(alpha[i] as i32);
        }
        acc += v;
    }
    acc / samples as f64
}

#[test]
fn moments_in_dimension_six_against_monte_carlo() {
    let cases: [([u8; 6], Rational); 3] = [
        ([2, 0, 0, 0, 0, 0], rat(1, 6)),
        ([4, 0, 0, 0, 0, 0], rat(1, 16)),
        ([2, 2, 0, 0, 0, 0], rat(1, 48)),
    ];
    for (alpha, expected) in cases {
        let exact = moment(&alpha, 6);
        assert_eq!(exact, expected);
        let mc = monte_carlo(&alpha, 1_000_000, 7);
        let e = exact.to_f64().unwrap();
        assert!((mc - e).abs() < 2e-3, "{alpha:?}: mc {mc} vs {e}");
    }
}

#[test]
fn trivial_moments() {
    assert_eq!(moment(&[0; 6], 6), int(1));
    assert_eq!(moment(&[1, 0, 0, 0, 0, 0], 6), int(0));
    let total: Rational = (0..6)
        .map(|i| {
            let mut a = [0u8; 6];
            a[i] = 2;
            moment(&a, 6)
        })
        .sum();
    assert_eq!(total, int(1));
}

#[test]
fn polynomial_integrals() {
    let n = 6;
    let mut rho = Poly::zero(n);
    for i in 0..n {
        rho = rho.add(&Poly::var(n, i).pow(2));
    }
    assert_eq!(integrate_poly(&rho, n), int(1));
    assert_eq!(integrate_poly(&Poly::var(n, 0).mul(&Poly::var(n, 1)), n), int(0));
    // (ξ₁² + ξ₂²)² = ξ₁⁴ + 2ξ₁²ξ₂² + ξ₂⁴ → 2/16 + 2/48
    let q = Poly::var(n, 0).pow(2).add(&Poly::var(n, 1).pow(2)).pow(2);
    assert_eq!(integrate_poly(&q, n), rat(1, 8) + rat(1, 24));
    let qf: Vec<u8> = vec![4, 0, 0, 0, 0, 0];
    let mc = monte_carlo(&qf, 200_000, 3) * 2.0 + monte_carlo(&[2, 2, 0, 0, 0, 0], 200_000, 5) * 2.0;
    assert!((mc - (1.0 / 8.0 + 1.0 / 24.0)).abs() < 5e-3);
}

#[test]
fn symbol_integrals() {
    let n = 6;
    assert_eq!(integrate_symbol(&RationalSymbol::inverse_norm_power(n, 1), n), int(1));
    let s = RationalSymbol::xi(n, 0)
        .mul(&RationalSymbol::xi(n, 0))
        .mul(&RationalSymbol::inverse_norm_power(n, 1));
    assert_eq!(integrate_symbol(&s, n), rat(1, 6));
    let t = RationalSymbol::xi(n, 1)
        .mul(&RationalSymbol::xi(n, 1))
        .mul(&RationalSymbol::inverse_norm_power(n, 1));
    let sum = s.add(&t.scale(&int(3)));
    assert_eq!(integrate_symbol(&sum, n), rat(1, 6) + rat(3, 6));
}

#[test]
fn cache_agrees_with_direct_formula() {
    let cache = MomentCache::new(4);
    for a in [[2u8, 4, 0, 2], [0, 0, 6, 0], [2, 2, 2, 2]] {
        assert_eq!(cache.get(&a), moment(&a, 4));
        assert_eq!(cache.get(&a), moment(&a, 4));
    }
}

fn even_alpha(n: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, n).prop_map(|v| v.into_iter().map(|x| 2 * x).collect())
}

proptest! {
    #[test]
    fn permutation_invariance(alpha in even_alpha(6), seed in 0u64..1000) {
        let mut perm: Vec<u8> = alpha.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..perm.len()).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        prop_assert_eq!(moment(&alpha, 6), moment(&perm, 6));
    }

    #[test]
    fn raising_recursion(alpha in even_alpha(5), i in 0usize..5, n in 2usize..9) {
        let mut raised = alpha.clone();
        raised[i] += 2;
        let total: u32 = alpha.iter().map(|&a| a as u32).sum();
        let lhs = moment(&raised, n) * int(n as i64 + total as i64);
        let rhs = moment(&alpha, n) * int(alpha[i] as i64 + 1);
        prop_assert_eq!(lhs, rhs);
    }
}
