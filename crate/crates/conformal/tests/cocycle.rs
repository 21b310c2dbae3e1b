//! Hochschild coboundaries of bilinear forms.

use std::collections::HashMap;

use proptest::prelude::*;
use wforms_conformal::catalogue;
use wforms_conformal::{hochschild_coboundary, search_variants};
use wforms_core::exact::int;
use wforms_core::Rational;
use wforms_tensor::eval::{convert, Background, MetricKind, RandomJets};
use wforms_tensor::jet::Jet;
use wforms_tensor::scalar::Fp;
use wforms_tensor::{check_zero, parse_expr, Engine, Expr, Head, Mode, Status};

fn engine() -> Engine {
    Engine::new(6, Mode::General)
}

/// `Ω(a, b)` at the origin, with `a`, `b` bound as the arguments.
fn omega_at(jets: &RandomJets, omega: &Expr, a: &Jet<Fp>, b: &Jet<Fp>) -> Fp {
    let metric = jets.metric.iter().map(convert).collect();
    let funcs: HashMap<Head, Jet<Fp>> = [(Head::F, a.clone()), (Head::H, b.clone())].into();
    Background::new(jets.space.clone(), metric, funcs).unwrap().evaluate(omega).unwrap()
}

/// The coboundary bracket evaluated directly from product jets.
fn bracket_at(jets: &RandomJets, omega: &Expr) -> Fp {
    let sp = &*jets.space;
    let f: Vec<Jet<Fp>> = [Head::F0, Head::F1, Head::F2, Head::F3].iter().map(|h| convert(&jets.funcs[h])).collect();
    let a = omega_at(jets, omega, &f[2], &f[3]) * f[1].value();
    let b = omega_at(jets, omega, &f[1].mul(&f[2], sp), &f[3]);
    let c = omega_at(jets, omega, &f[1], &f[2].mul(&f[3], sp));
    let d = omega_at(jets, omega, &f[1], &f[2]) * f[3].value();
    f[0].value() * (a - b + c - d)
}

#[test]
fn coboundary_matches_product_jets() {
    let e = engine();
    let jets = RandomJets::new(6, 6, MetricKind::Generic, 11);
    let bg = jets.background::<Fp>();
    for omega in [
        parse_expr("f_{;ij} h_{;ij} J + f_{;i} h_{;ijj}").unwrap(),
        catalogue::ansatz_term("B").unwrap(),
        catalogue::omega6_confflat(),
    ] {
        let symbolic = bg.evaluate(&hochschild_coboundary(&e, &omega).unwrap()).unwrap();
        assert_eq!(symbolic, bracket_at(&jets, &omega));
    }
}

#[test]
fn gradient_pairing_is_a_cocycle() {
    let b = hochschild_coboundary(&engine(), &parse_expr("f_{;i} h_{;i}").unwrap()).unwrap();
    assert!(b.is_zero());
}

#[test]
fn hessian_weyl_term_gives_minus_two_times_its_structure() {
    let e = engine();
    let b = hochschild_coboundary(&e, &catalogue::ansatz_term("A").unwrap()).unwrap();
    let s = catalogue::structure(catalogue::ANSATZ_COBOUNDARY_STRUCTURES[1]);
    assert!(check_zero(&e, &b.minus(&s.scaled(&int(-2)))).holds());
}

#[test]
fn conformally_flat_coboundary_display_needs_one_reindexed_term() {
    let e = engine();
    let b = hochschild_coboundary(&e, &catalogue::omega6_confflat()).unwrap();
    let display = catalogue::confflat_coboundary_display();
    assert!(matches!(check_zero(&e, &b.minus(&display)), Status::Residue(_)));
    // the Weyl (undifferentiated) part agrees as printed
    let weyl_part: Expr = display
        .iter()
        .filter(|(m, _)| m.iter().all(|f| f.head != Head::W || f.derivs.is_empty()))
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    let b_weyl: Expr = b
        .iter()
        .filter(|(m, _)| m.iter().any(|f| f.head == Head::W))
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    assert!(check_zero(&e, &b_weyl.minus(&weyl_part)).holds());

    let found = search_variants(&e, &b, &display, 2);
    assert!(!found.is_empty());
    assert!(found.iter().all(|m| m.changes.len() == 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn weyl_terms_without_hessians_are_cocycles(c in -9i64..9, d in -9i64..9, e in -9i64..9, g in -9i64..9) {
        let omega = [("C", c), ("D", d), ("E", e), ("G", g)]
            .iter()
            .fold(Expr::zero(), |acc, (u, k)| acc.plus(&catalogue::ansatz_term(u).unwrap().scaled(&Rational::from_integer((*k).into()))));
        prop_assert!(hochschild_coboundary(&engine(), &omega).unwrap().is_zero());
    }
}
