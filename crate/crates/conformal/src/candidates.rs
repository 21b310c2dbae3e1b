//! Bilinear terms with one undifferentiated Weyl factor and four
//! derivatives on the functions, modulo terms of higher curvature degree.

use std::collections::BTreeSet;

use num_traits::One;
use wforms_core::Rational;
use wforms_tensor::filtration::filtration_degrees;
use wforms_tensor::linalg::{Echelon, SparseVec};
use wforms_tensor::relations::{reduce_modulo, relation_closure, relation_echelon};
use wforms_tensor::{Engine, Expr, Factor, Head, Label, Monomial};

/// Independent candidates, in normal form, with how many raw contractions
/// were enumerated.
#[derive(Clone, Debug)]
pub struct CandidateBasis {
    pub enumerated: usize,
    pub basis: Vec<Expr>,
}

/// Perfect matchings of `0..k` as label assignments.
fn matchings(k: usize) -> Vec<Vec<Label>> {
    fn go(slots: &mut Vec<Option<Label>>, next: Label, out: &mut Vec<Vec<Label>>) {
        let Some(first) = slots.iter().position(|s| s.is_none()) else {
            out.push(slots.iter().map(|s| s.expect("filled")).collect());
            return;
        };
        slots[first] = Some(next);
        for j in first + 1..slots.len() {
            if slots[j].is_none() {
                slots[j] = Some(next);
                go(slots, next + 1, out);
                slots[j] = None;
            }
        }
        slots[first] = None;
    }
    let mut out = Vec::new();
    go(&mut vec![None; k], 1, &mut out);
    out
}

/// Part of `e` in curvature degree exactly one.
fn degree_one(e: &Expr) -> Expr {
    e.iter()
        .filter(|(m, _)| filtration_degrees(m).0 == 1)
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect()
}

/// Span of `f_{;P} h_{;Q} W` with `|P| = p`, `|Q| = q`, `p + q = 4`, over
/// all complete contractions, modulo curvature degree two and the cyclic
/// identity.
pub fn weyl_candidates(engine: &Engine, bidegrees: &[(usize, usize)]) -> CandidateBasis {
    let mut raw: Vec<Expr> = Vec::new();
    for &(p, q) in bidegrees {
        for labels in matchings(p + q + 4) {
            let m: Monomial = vec![
                Factor::new(Head::F, &[], &labels[..p]),
                Factor::new(Head::H, &[], &labels[p..p + q]),
                Factor::new(Head::W, &labels[p + q..], &[]),
            ];
            let e = degree_one(&engine.canonicalize(&Expr::monomial(m, Rational::one())));
            if !e.is_zero() {
                raw.push(e);
            }
        }
    }
    let seeds: BTreeSet<Monomial> = raw.iter().flat_map(|e| e.iter().map(|(m, _)| m.clone())).collect();
    let relations: Vec<Expr> = relation_closure(engine, seeds.iter()).iter().map(degree_one).collect();
    let ech = relation_echelon(&relations);
    let mut span: Echelon<Monomial> = Echelon::new();
    let mut basis = Vec::new();
    for e in &raw {
        let r = reduce_modulo(&ech, e);
        let v: SparseVec<Monomial> = r.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        if !r.is_zero() && span.insert(&v).is_none() {
            basis.push(e.clone());
        }
    }
    CandidateBasis {
        enumerated: raw.len(),
        basis,
    }
}
