//! Sign conventions and symbolic rewrites checked against the jet oracle.

use std::collections::{BTreeMap, HashMap};

use wforms_core::exact::{int, Rational};
use wforms_tensor::eval::{Background, MetricKind, RandomJets};
use wforms_tensor::jet::{Jet, JetSpace};
use wforms_tensor::normal::{commute_derivatives, riemann_decompose};
use wforms_tensor::parse_expr;
use wforms_tensor::scalar::{Fp, Scalar};
use wforms_tensor::term::free_labels;
use wforms_tensor::{Engine, Expr, Head, Mode};

fn free_of(e: &Expr) -> Vec<u16> {
    let mut v: Vec<u16> = e.iter().flat_map(|(m, _)| free_labels(m)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Compares every component of two expressions with the same free indices.
fn agree<S: Scalar>(bg: &Background<S>, a: &Expr, b: &Expr) -> bool {
    let free = free_of(a);
    assert!(free_of(b).iter().all(|l| free.contains(l)));
    let n = bg.n;
    let total = n.pow(free.len() as u32);
    for mut k in 0..total {
        let mut at = BTreeMap::new();
        for &l in &free {
            at.insert(l, k % n);
            k /= n;
        }
        let va = bg.evaluate_at(a, &at).unwrap();
        let vb = bg.evaluate_at(b, &at).unwrap();
        if va != vb {
            eprintln!("mismatch at {at:?}: {va:?} vs {vb:?}");
            return false;
        }
    }
    true
}

fn p(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

/// Stereographic round metric `4/(1+|x|²)² δ`.
fn round_sphere(n: usize, degree: usize) -> Background<Rational> {
    let space = JetSpace::new(n, degree);
    let sp = &*space;
    let mut r2 = Jet::<Rational>::zero(sp, degree);
    for v in 0..n {
        let x = Jet::coordinate(sp, degree, v);
        r2 = r2.add(&x.mul(&x, sp));
    }
    // (1+u)^{-2} = Σ (k+1)(−u)^k
    let mut conf = Jet::constant(sp, degree, int(4));
    let mut power = Jet::constant(sp, degree, int(1));
    for k in 1..=degree {
        power = power.mul(&r2, sp).scale(&int(-1));
        conf = conf.add(&power.scale(&int(4 * (k as i64 + 1))));
    }
    let mut metric = vec![Jet::zero(sp, degree); n * n];
    for i in 0..n {
        metric[i * n + i] = conf.clone();
    }
    Background::new(space, metric, HashMap::new()).unwrap()
}

#[test]
fn round_sphere_has_the_expected_curvature_signs() {
    let bg = round_sphere(4, 3);
    // R_abcd = g_ac g_bd − g_ad g_bc with g(0) = 4I
    let r = p("R_{abcd}");
    let free = free_of(&r);
    for (vals, want) in [([0, 1, 0, 1], 16), ([0, 1, 1, 0], -16), ([0, 0, 1, 1], 0)] {
        let at: BTreeMap<u16, usize> = free.iter().copied().zip(vals).collect();
        assert_eq!(bg.evaluate_at(&r, &at).unwrap(), int(want));
    }
    // Rc = (n−1) g, positive
    let rc = p("Rc_{ab}");
    let at: BTreeMap<u16, usize> = free_of(&rc).into_iter().zip([2, 2]).collect();
    assert_eq!(bg.evaluate_at(&rc, &at).unwrap(), int(12));
    // W = 0 and V = g/2 on the round sphere
    assert_eq!(bg.evaluate(&p("W_{abcd} W_{abcd}")).unwrap(), int(0));
    let at: BTreeMap<u16, usize> = free_of(&p("V_{ab}")).into_iter().zip([1, 1]).collect();
    assert_eq!(bg.evaluate_at(&p("V_{ab}"), &at).unwrap(), int(2));
}

#[test]
fn weyl_tensor_is_trace_free() {
    let jets = RandomJets::new(6, 3, MetricKind::Generic, 1);
    let bg = jets.background::<Fp>();
    assert!(agree(&bg, &p("W_{abac}"), &Expr::zero()));
}

#[test]
fn weyl_divergence_matches_cotton_form() {
    let jets = RandomJets::new(6, 4, MetricKind::Generic, 2);
    let bg = jets.background::<Fp>();
    let lhs = p("W_{abcd;a}");
    let rhs = p("3 V_{bd;c} - 3 V_{bc;d}");
    assert!(agree(&bg, &lhs, &rhs));
}

#[test]
fn ricci_identity_on_third_derivatives() {
    let jets = RandomJets::new(6, 4, MetricKind::Generic, 3);
    let bg = jets.background::<Fp>();
    let e = p("f_{;ijk}");
    let (m, _) = e.iter().next().unwrap();
    let swapped = commute_derivatives(m, 0, 1).unwrap();
    assert!(agree(&bg, &e, &swapped));
    let swapped = commute_derivatives(m, 0, 0).unwrap();
    assert!(agree(&bg, &e, &swapped));
}

#[test]
fn ricci_identity_with_outer_derivatives() {
    let jets = RandomJets::new(6, 5, MetricKind::Generic, 4);
    let bg = jets.background::<Fp>();
    let e = p("V_{ab;cde}");
    let (m, _) = e.iter().next().unwrap();
    for pos in 0..2 {
        let swapped = commute_derivatives(m, 0, pos).unwrap();
        assert!(agree(&bg, &e, &swapped), "position {pos}");
    }
}

#[test]
fn double_commutation_is_the_identity() {
    let e = p("f_{;i} h_{;ijk}");
    let (m, _) = e.iter().next().unwrap();
    let once = commute_derivatives(m, 1, 1).unwrap();
    let mut twice = Expr::zero();
    for (mm, c) in once.iter() {
        if mm[1].head == Head::H && mm[1].derivs.len() == 3 {
            twice.add_scaled(&commute_derivatives(mm, 1, 1).unwrap(), c);
        } else {
            twice.add_term(mm.clone(), c.clone());
        }
    }
    let engine = Engine::new(6, Mode::General);
    assert!(engine.canonicalize(&twice.minus(&e)).is_zero());
    assert!(commute_derivatives(m, 1, 2).is_err());
    assert!(commute_derivatives(m, 5, 0).is_err());
}

#[test]
fn riemann_decomposition_is_sound() {
    let jets = RandomJets::new(6, 3, MetricKind::Generic, 5);
    let bg = jets.background::<Fp>();
    for s in ["R_{abcd}", "Rc_{ab}", "Sc", "R_{abcd;e}"] {
        let e = p(s);
        let d = riemann_decompose(&e, 6);
        assert!(d.iter().all(|(m, _)| m.iter().all(|f| !matches!(f.head, Head::R | Head::Rc | Head::Sc))));
        assert!(agree(&bg, &e, &d), "{s}");
    }
    let rc = riemann_decompose(&p("Rc_{ij}"), 6);
    assert_eq!(rc, p("4 V_{ij} + J g_{ij}"));
}

#[test]
fn oracle_agrees_in_exact_arithmetic_on_a_small_case() {
    let jets = RandomJets::new(3, 3, MetricKind::Generic, 6);
    let q = jets.background::<Rational>();
    let f = jets.background::<Fp>();
    let e = p("f_{;ij} h_{;ij} + 2 f_{;i} h_{;i} J - 1/3 f h V_{ij} V_{ij}");
    let exact = q.evaluate(&e).unwrap();
    assert_eq!(Fp::from_rational(&exact), f.evaluate(&e).unwrap());
}

#[test]
fn each_contraction_costs_one_inverse_metric() {
    // g = 4 (I + H): Christoffels unchanged, each contracted pair scales by 1/4
    let jets = RandomJets::new(4, 4, MetricKind::Generic, 5);
    let mut scaled = jets.clone();
    for g in scaled.metric.iter_mut() {
        *g = g.scale(&int(4));
    }
    let a = jets.background::<Fp>();
    let b = scaled.background::<Fp>();
    for (s, pairs) in [("f_{;i} h_{;i}", 1u32), ("f_{;ij} h_{;ij}", 2), ("f_{;ijk} h_{;ijk}", 3)] {
        let e = p(s);
        let want = a.evaluate(&e).unwrap() * Fp::from_rational(&Rational::new(1.into(), 4i64.pow(pairs).into()));
        assert_eq!(b.evaluate(&e).unwrap(), want, "{s}");
    }
}
