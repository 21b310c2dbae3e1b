//! Displayed variation and symmetric forms against the computed ones.

use wforms_conformal::catalogue;
use wforms_conformal::{conformal_variation, grow_flat, refit, search_variants, Solution};
use wforms_core::exact::int;
use wforms_core::flat_residue::{display_convention, omega_flat_direct};
use wforms_tensor::{check_zero, parse_expr, Engine, Expr, Mode, Status};

fn structures() -> Vec<Expr> {
    catalogue::ANSATZ_VARIATION_STRUCTURES.iter().map(|s| catalogue::structure(s)).collect()
}

#[test]
fn conformally_flat_variation_is_two_weyl_structures() {
    let e = Engine::new(6, Mode::General);
    let v = conformal_variation(&e, &catalogue::omega6_confflat()).unwrap();
    let s = structures();
    let fit = s[0].scaled(&int(32)).plus(&s[1].scaled(&int(-32)));
    assert!(check_zero(&e, &v.minus(&fit)).holds());
    // vanishes once W = 0
    let cf = Engine::new(6, Mode::ConformallyFlat);
    assert!(conformal_variation(&cf, &catalogue::omega6_confflat()).unwrap().is_zero());
}

#[test]
fn variation_display_holds_with_swapped_divergence_slots() {
    let e = Engine::new(6, Mode::General);
    let v = conformal_variation(&e, &catalogue::omega6_confflat()).unwrap();
    let display = catalogue::confflat_variation_display();
    assert!(matches!(check_zero(&e, &v.minus(&display)), Status::Residue(_)));
    let found = search_variants(&e, &v, &display, 2);
    assert!(!found.is_empty());
    for m in &found {
        assert_eq!(m.changes.len(), 2);
        assert!(m.changes.iter().all(|c| c.printed.contains(";l}")));
    }
}

#[test]
fn ansatz_terms_vary_into_the_displayed_structures() {
    let e = Engine::new(6, Mode::General);
    let s = structures();
    let var = |u: &str| conformal_variation(&e, &catalogue::ansatz_term(u).unwrap()).unwrap();
    let holds = |x: &Expr, y: Expr| check_zero(&e, &x.minus(&y)).holds();
    assert!(holds(&var("A"), s[1].scaled(&int(2))));
    assert!(holds(&var("B"), s[0].scaled(&int(-1)).plus(&s[1].scaled(&int(-3)))));
    assert!(holds(&var("C"), s[0].scaled(&int(-2)).plus(&s[2].scaled(&int(3)))));
    assert!(holds(&var("D"), s[2].scaled(&int(-1))));
    assert!(var("E").is_zero());
    assert!(var("G").is_zero());
}

#[test]
fn symmetric_display_differs_from_the_index_display() {
    let cf = Engine::new(6, Mode::ConformallyFlat);
    let grown = grow_flat(&display_convention(&omega_flat_direct(6).unwrap())).unwrap();
    let sym = catalogue::omega6_confflat_sym();
    assert!(matches!(check_zero(&cf, &sym.minus(&grown)), Status::Residue(_)));

    // the flat part is right; four curvature groups need other coefficients
    let terms: Vec<Expr> = catalogue::OMEGA6_SYM_CURVED.iter().map(|(_, t)| parse_expr(t).unwrap()).collect();
    let Solution::Consistent { values, free } =
        refit(&cf, &parse_expr(catalogue::OMEGA6_SYM_FLAT).unwrap(), &terms, &grown, "symmetric display")
    else {
        panic!("no refit");
    };
    assert!(free.is_empty());
    let changed: Vec<(usize, i64, String)> = catalogue::OMEGA6_SYM_CURVED
        .iter()
        .enumerate()
        .filter_map(|(k, (c, _))| {
            let v = values[&format!("c{k}")].as_constant().unwrap().clone();
            (v != int(*c)).then(|| (k, *c, v.to_string()))
        })
        .collect();
    assert_eq!(
        changed,
        vec![
            (2, 48, "96".to_string()),
            (5, 24, "0".to_string()),
            (6, -24, "0".to_string()),
            (7, 96, "32".to_string()),
        ]
    );
}

#[test]
fn displayed_difference_vanishes_without_weyl() {
    let cf = Engine::new(6, Mode::ConformallyFlat);
    assert!(cf.canonicalize(&catalogue::display_difference()).is_zero());
    let g = Engine::new(6, Mode::General);
    assert!(!g.canonicalize(&catalogue::display_difference()).is_zero());
}
