use wforms_tensor::eval::{MetricKind, RandomJets};
use wforms_tensor::filtration::{filtration_degrees, in_filtration};
use wforms_tensor::scalar::Fp;
use wforms_tensor::{check_zero, parse_expr, Engine, Expr, Mode, Status};

fn p(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

#[test]
fn cyclic_identity_is_certified_and_vanishes_numerically() {
    let engine = Engine::new(6, Mode::General);
    let e = p("f0_{;i} f1_{;j} f2_{;k} f3_{;l} (W_{ijkl} + W_{iklj} + W_{iljk})");
    let jets = RandomJets::new(6, 3, MetricKind::Generic, 8);
    assert_eq!(jets.background::<Fp>().evaluate(&e).unwrap(), Fp(0));
    match check_zero(&engine, &e) {
        Status::RelationSpan(c) => assert!(!c.is_empty()),
        s => panic!("expected a relation-span certificate, got {s:?}"),
    }
}

#[test]
fn unequal_pair_leaves_a_residue() {
    let engine = Engine::new(6, Mode::General);
    let s = check_zero(&engine, &p("f_{;ij} h_{;kl} W_{ikjl} - f_{;i} h_{;i} J J J"));
    assert!(matches!(s, Status::Residue(r) if r.len() == 2));
}

#[test]
fn filtration_examples() {
    let e = p("f_{;i} h_{;i} W_{jklm} W_{jklm}");
    let (m, _) = e.iter().next().unwrap();
    assert_eq!(filtration_degrees(m), (2, 2));
    assert!(in_filtration(&e, 2));
    let e = p("f_{;i} h_{;jjkki}");
    let (m, _) = e.iter().next().unwrap();
    assert_eq!(filtration_degrees(m), (0, 6));
    let e = p("f_{;i} f_{;jkl} W_{ijlk}");
    let (m, _) = e.iter().next().unwrap();
    assert_eq!(filtration_degrees(m), (1, 4));
}

#[test]
fn reordered_third_derivative_against_weyl_lies_in_the_second_level() {
    // f_{;i} f_{;jkl} W_{ijlk}: the symmetric part of f_{;jkl} drops out, the
    // rest is curvature times first derivatives
    let engine = Engine::new(6, Mode::General);
    let c = engine.canonicalize(&p("f_{;i} f_{;jkl} W_{ijlk}"));
    assert!(!c.is_zero());
    assert!(in_filtration(&c, 2), "{c}");
}
