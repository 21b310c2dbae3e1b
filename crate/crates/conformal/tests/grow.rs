//! Growing flat tables to conformally flat metrics.

use wforms_conformal::catalogue;
use wforms_conformal::{grow_flat, lift_table, refit, Solution};
use wforms_core::exact::int;
use wforms_core::flat_residue::{display_convention, omega_flat_direct};
use wforms_tensor::filtration::homogeneity;
use wforms_tensor::{parse_expr, Engine, Expr, Mode};

fn sum(patterns: &[wforms_conformal::FlatPattern]) -> Expr {
    patterns.iter().fold(Expr::zero(), |acc, p| acc.plus(&p.to_expr()))
}

#[test]
fn dimension_two_gives_minus_four_gradient_pairing() {
    let t = omega_flat_direct(2).unwrap();
    let engine = Engine::new(2, Mode::ConformallyFlat);
    let grown = grow_flat(&t).unwrap();
    assert_eq!(grown, engine.canonicalize(&parse_expr("-4 f_{;i} h_{;i}").unwrap()));
}

#[test]
fn dimension_four_is_eta_free() {
    let grown = grow_flat(&omega_flat_direct(4).unwrap()).unwrap();
    assert!(!grown.is_zero());
    assert_eq!(homogeneity(&grown), Some(4));
}

#[test]
fn lifted_order_six_table_is_the_index_display() {
    let engine = Engine::new(6, Mode::ConformallyFlat);
    let lifted = lift_table(&display_convention(&omega_flat_direct(6).unwrap())).unwrap();
    assert_eq!(lifted.len(), 8);
    assert_eq!(engine.canonicalize(&sum(&lifted)), engine.canonicalize(&catalogue::omega6_flat()));
}

#[test]
fn grown_order_six_form_is_the_conformally_flat_display() {
    let engine = Engine::new(6, Mode::ConformallyFlat);
    let grown = grow_flat(&display_convention(&omega_flat_direct(6).unwrap())).unwrap();
    assert_eq!(grown, engine.canonicalize(&catalogue::omega6_confflat()));
    assert_eq!(homogeneity(&grown), Some(6));

    // the misprinted Hessian term is pinned by the grown form
    let without = catalogue::omega6_confflat_with("0");
    let Solution::Consistent { values, free } = refit(
        &engine,
        &without,
        &[parse_expr("f_{;ij} h_{;jk} V_{ik}").unwrap()],
        &grown,
        "hessian term",
    ) else {
        panic!("the grown form is not reachable by one Hessian term");
    };
    assert!(free.is_empty());
    assert_eq!(values["c0"].as_constant(), Some(&int(-192)));
}

#[test]
fn rejects_mixed_order_tables() {
    let mut t = omega_flat_direct(2).unwrap();
    t.add(
        wforms_core::MultiIndex::from_slice(&[1, 0]),
        wforms_core::MultiIndex::from_slice(&[0, 0]),
        int(1),
    );
    assert!(grow_flat(&t).is_err());
}
