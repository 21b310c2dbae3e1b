use std::time::Instant;

use proptest::prelude::*;
use wforms_tensor::eval::{MetricKind, RandomJets};
use wforms_tensor::parse_expr;
use wforms_tensor::scalar::Fp;
use wforms_tensor::{Engine, Expr, Mode};

const GENERAL: &[&str] = &[
    "f_{;ijk} h_{;ikj}",
    "f_{;ijjkk} h_{;i}",
    "f_{;i} h_{;jijkk}",
    "f_{;ij} h_{;kikj}",
    "f_{;ij} h_{;kl} W_{ikjl}",
    "f_{;i} h_{;j} W_{ikjl;kl}",
    "f_{;i} h_{;j} W_{ikjl;lk}",
    "f_{;i} h_{;jkl} W_{ijlk}",
    "f_{;i} h_{;jkl} W_{ijkl}",
    "f_{;ij} h_{;k} W_{ilkj;l}",
    "f_{;i} h_{;j} R_{ikjk} J",
    "f_{;i} h_{;i} Sc Sc",
    "f_{;i} h_{;j} V_{ij;kk}",
    "f_{;i} h_{;j} V_{ik;jk}",
    "f_{;i} h_{;j} V_{ik;kj}",
    "f_{;i} h_{;i} J_{;jj}",
    "f_{;i} h_{;j} Rc_{ij;kk}",
    "f_{;i} h_{;j} W_{iklm} W_{jklm}",
    "f_{;i} h_{;j} W_{iklm} W_{jlkm}",
    "f_{;ijk} h_{;l} R_{likj}",
    "f_{;(ijk)} h_{;ijk} - f_{;ijk} h_{;ijk}",
    "g_{ij} f_{;i} h_{;j} J g_{kk}",
];

const FLAT: &[&str] = &[
    "f_{;ijjkk} h_{;i}",
    "f_{;ij} h_{;ikjk}",
    "f_{;i} h_{;jkk} V_{ij}",
    "f_{;ijj} h_{;k} V_{ik}",
    "f_{;i} h_{;j} V_{ij;kk}",
    "f_{;i} h_{;j} V_{ik;jk}",
    "f_{;i} h_{;j} V_{ik;kj}",
    "f_{;i} h_{;i} V_{jk;jk}",
    "f_{;i} h_{;i} J_{;jj}",
    "f_{;ij} h_{;k} V_{ij;k}",
    "f_{;i} h_{;j} R_{ikjl} V_{kl}",
];

fn check(mode: Mode, kind: MetricKind, corpus: &[&str], seeds: std::ops::Range<u64>) {
    let engine = Engine::new(6, mode);
    let jets: Vec<RandomJets> = seeds.map(|s| RandomJets::new(6, 6, kind, s)).collect();
    let bgs: Vec<_> = jets.iter().map(|j| j.background::<Fp>()).collect();
    for s in corpus {
        let e = parse_expr(s).unwrap();
        let t = Instant::now();
        let c = engine.canonicalize(&e);
        let elapsed = t.elapsed();
        assert_eq!(engine.canonicalize(&c), c, "not idempotent: {s}");
        for bg in &bgs {
            assert_eq!(bg.evaluate(&e).unwrap(), bg.evaluate(&c).unwrap(), "{s} -> {c}");
        }
        eprintln!("{s}  ->  {} terms in {elapsed:?}", c.len());
    }
}

#[test]
fn general_normal_form_is_sound() {
    check(Mode::General, MetricKind::Generic, GENERAL, 10..15);
}

#[test]
fn conformally_flat_normal_form_is_sound() {
    check(Mode::ConformallyFlat, MetricKind::ConformallyFlat, FLAT, 20..25);
}

#[test]
fn monoterm_examples() {
    let e = Engine::new(6, Mode::General);
    assert!(e.canonicalize(&parse_expr("f_{;i} h_{;j} V_{ij} - f_{;i} h_{;j} V_{ji}").unwrap()).is_zero());
    assert!(e.canonicalize(&parse_expr("f_{;i} h_{;j} f_{;k} h_{;l} (W_{ijkl} + W_{jikl})").unwrap()).is_zero());
    assert!(e.canonicalize(&parse_expr("f_{;jl} W_{ijil}").unwrap()).is_zero());
}

#[test]
fn preferred_orderings_coincide() {
    // f_{;ijjkk} and f_{;ijkjk} differ only by curvature terms, which vanish flat
    let e = Engine::new(6, Mode::ConformallyFlat);
    let a = e.canonicalize(&parse_expr("f_{;ijjkk} h_{;i}").unwrap());
    let b = e.canonicalize(&parse_expr("f_{;ijkjk} h_{;i}").unwrap());
    let flat = |x: &Expr| -> Expr {
        x.iter()
            .filter(|(m, _)| m.iter().all(|f| f.head.is_function()))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    };
    assert_eq!(flat(&a), flat(&b));
    assert!(!a.minus(&b).is_zero());
}

fn random_term() -> impl Strategy<Value = String> {
    let letters = ["i", "j", "k", "l"];
    (prop::collection::vec(0usize..4, 1..4), prop::collection::vec(0usize..4, 1..4), 0usize..3).prop_filter_map(
        "indices must pair up",
        move |(a, b, shape)| {
            let mut counts = [0; 4];
            for &x in a.iter().chain(&b) {
                counts[x] += 1;
            }
            let mut extra = String::new();
            let mut unpaired: Vec<usize> = (0..4).filter(|&x| counts[x] == 1).collect();
            if counts.iter().any(|&c| c > 2) {
                return None;
            }
            match shape {
                1 if unpaired.len() == 2 => {
                    extra = format!(" V_{{{}{}}}", letters[unpaired[0]], letters[unpaired[1]]);
                    unpaired.clear();
                }
                2 if unpaired.is_empty() => extra = " J".into(),
                _ => {}
            }
            if !unpaired.is_empty() {
                return None;
            }
            let fa: String = a.iter().map(|&x| letters[x]).collect();
            let hb: String = b.iter().map(|&x| letters[x]).collect();
            Some(format!("f_{{;{fa}}} h_{{;{hb}}}{extra}"))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn random_terms_keep_their_value(s in random_term()) {
        let engine = Engine::new(4, Mode::General);
        let jets = RandomJets::new(4, 6, MetricKind::Generic, 99);
        let bg = jets.background::<Fp>();
        let e = parse_expr(&s).unwrap();
        let c = engine.canonicalize(&e);
        prop_assert_eq!(bg.evaluate(&e).unwrap(), bg.evaluate(&c).unwrap());
        prop_assert_eq!(engine.canonicalize(&c), c);
    }
}
