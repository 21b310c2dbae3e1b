//! The constant system, the assembled family and the candidate basis.

use std::collections::BTreeMap;

use proptest::prelude::*;
use wforms_conformal::catalogue;
use wforms_conformal::family::{
    assemble_family_with, check_family, constraint_system, pinned_constants, published_conditions, published_constants,
};
use wforms_conformal::{conformal_variation, eta_euler_lagrange, weyl_candidates, Affine, Solution};
use wforms_core::exact::{int, rat};
use wforms_core::Rational;
use wforms_tensor::{check_zero, parse_expr, Engine, Expr, Mode, Status};

fn engine() -> Engine {
    Engine::new(6, Mode::General)
}

fn solved() -> BTreeMap<String, Rational> {
    pinned_constants(&constraint_system(&engine()).unwrap().solve()).unwrap()
}

fn constants(v: [i64; 4]) -> BTreeMap<String, Rational> {
    ["A", "B", "C", "D"].iter().zip(v).map(|(u, x)| (u.to_string(), int(x))).collect()
}

#[test]
fn variation_and_cocycle_fix_a_b_c_d_and_leave_e_g_free() {
    let sys = constraint_system(&engine()).unwrap();
    assert!(sys.equations.iter().any(|e| e.provenance.starts_with("conformal variation")));
    assert!(sys.equations.iter().any(|e| e.provenance.starts_with("cocycle")));
    let Solution::Consistent { values, free } = sys.solve() else {
        panic!("inconsistent");
    };
    assert_eq!(free, vec!["E".to_string(), "G".to_string()]);
    assert_eq!(pinned_constants(&Solution::Consistent { values, free }).unwrap(), constants([64, 32, 0, 0]));
}

#[test]
fn variation_alone_leaves_a_one_parameter_family() {
    let mut sys = constraint_system(&engine()).unwrap();
    sys.equations.retain(|e| e.provenance.starts_with("conformal variation"));
    let Solution::Consistent { values, free } = sys.solve() else {
        panic!("inconsistent");
    };
    assert_eq!(free, vec!["D".to_string(), "E".to_string(), "G".to_string()]);
    let affine = |c: i64, d: Rational| Affine {
        constant: int(c),
        coeffs: [("D".to_string(), d)].into(),
    };
    assert_eq!(values["A"], affine(64, int(-1)));
    assert_eq!(values["B"], affine(32, rat(-2, 3)));
    assert_eq!(values["C"], affine(0, rat(1, 3)));
}

#[test]
fn published_conditions_solve_to_published_constants() {
    let sol = published_conditions().solve();
    assert_eq!(pinned_constants(&sol).unwrap(), published_constants());
    let Solution::Consistent { free, .. } = sol else { unreachable!() };
    assert_eq!(free, vec!["E".to_string(), "G".to_string()]);
}

#[test]
fn published_constants_leave_a_cotton_variation() {
    let e = engine();
    let fam = assemble_family_with(&published_constants(), &int(0), &int(0));
    let c = check_family(&e, &fam).unwrap();
    assert!(matches!(c.variation, Status::Residue(_)));
    assert!(matches!(c.integrated_variation, Status::Residue(_)));
    assert!(c.coboundary.holds());
    assert!(c.symmetry.holds());
}

#[test]
fn euler_lagrange_kills_divergences() {
    let e = engine();
    // ∇_k(η f_k h) and ∇_j∇_i(η f_i h_j)
    let div = parse_expr("eta_{;k} f_{;k} h + eta f_{;kk} h + eta f_{;k} h_{;k}").unwrap();
    assert!(check_zero(&e, &eta_euler_lagrange(&div).unwrap()).holds());
    let v = conformal_variation(&e, &parse_expr("f_{;i} h_{;ijj}").unwrap()).unwrap();
    assert!(!e.canonicalize(&eta_euler_lagrange(&v).unwrap()).is_zero());
    assert!(eta_euler_lagrange(&parse_expr("eta eta_{;i} f_{;i} h").unwrap()).is_err());
}

#[test]
fn hessian_contraction_is_the_only_new_weyl_candidate() {
    let basis = weyl_candidates(&engine(), &[(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]);
    assert_eq!(basis.basis.len(), 1);
    let want = engine().canonicalize(&catalogue::ansatz_term("A").unwrap());
    assert!(check_zero(&engine(), &basis.basis[0].minus(&want)).holds()
        || check_zero(&engine(), &basis.basis[0].plus(&want)).holds());
}

#[test]
fn third_derivative_relation_holds_in_one_printed_form_only() {
    let e = engine();
    let status: Vec<Status> = catalogue::RELATION_FORMS
        .iter()
        .map(|(l, r)| check_zero(&e, &parse_expr(l).unwrap().minus(&parse_expr(r).unwrap())))
        .collect();
    assert!(matches!(status[0], Status::Residue(_)));
    assert!(matches!(status[1], Status::RelationSpan(_)));
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..20, 1i64..9).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn every_member_is_invariant_symmetric_and_a_cocycle(e in small_rational(), g in small_rational()) {
        let fam: Expr = assemble_family_with(&solved(), &e, &g);
        let c = check_family(&engine(), &fam).unwrap();
        prop_assert_eq!(c.variation, Status::Zero);
        prop_assert_eq!(c.coboundary, Status::Zero);
        prop_assert!(c.symmetry.holds());
        prop_assert_eq!(c.homogeneity, Some(6));
    }
}
