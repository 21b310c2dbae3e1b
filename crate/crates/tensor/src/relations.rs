//! Multiterm relations and identity certificates.
//!
//! The normal form handles monoterm symmetries, traces, divergences and the
//! Ricci identity. The remaining relation is the cyclic (first Bianchi)
//! identity of the Weyl tensor, `W_{abcd} + W_{acdb} + W_{adbc} = 0`, which is
//! applied as a linear span: generated on every `W` factor of the monomials
//! involved, closed under the monomials it produces, then solved exactly.

use std::collections::{BTreeSet, VecDeque};

use num_traits::One;
use wforms_core::Rational;

use crate::linalg::{Echelon, SparseVec};
use crate::normal::Engine;
use crate::term::{Expr, Head, Monomial};

/// Upper bound on the relation closure; generous for bilinear order-six
/// expressions.
const MAX_CLOSURE: usize = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    /// The difference has normal form zero.
    Zero,
    /// The difference is the listed combination of cyclic relations.
    RelationSpan(Vec<(Rational, Expr)>),
    /// The difference reduced modulo the relations.
    Residue(Expr),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Zero => "zero",
            Status::RelationSpan(_) => "relation-span",
            Status::Residue(_) => "residue",
        }
    }

    pub fn holds(&self) -> bool {
        !matches!(self, Status::Residue(_))
    }
}

/// Cyclic identities on each Weyl factor of `m`, in normal form.
pub fn bianchi_relations(engine: &Engine, m: &Monomial) -> Vec<Expr> {
    let mut out = Vec::new();
    for (i, f) in m.iter().enumerate() {
        if f.head != Head::W {
            continue;
        }
        let [a, b, c, d] = [f.slots[0], f.slots[1], f.slots[2], f.slots[3]];
        let mut rel = Expr::zero();
        for slots in [[a, b, c, d], [a, c, d, b], [a, d, b, c]] {
            let mut mm = m.clone();
            mm[i].slots = slots.into_iter().collect();
            rel.add_term(mm, Rational::one());
        }
        let rel = engine.canonicalize(&rel);
        if !rel.is_zero() {
            out.push(rel);
        }
    }
    out
}

fn to_vec(e: &Expr) -> SparseVec<Monomial> {
    e.iter().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Cyclic relations on `seeds` and on every monomial they produce, up to a
/// closure bound.
pub fn relation_closure<'a>(engine: &Engine, seeds: impl IntoIterator<Item = &'a Monomial>) -> Vec<Expr> {
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut queue: VecDeque<Monomial> = VecDeque::new();
    for m in seeds {
        if seen.insert(m.clone()) {
            queue.push_back(m.clone());
        }
    }
    let mut relations: Vec<Expr> = Vec::new();
    let mut rel_seen: BTreeSet<Vec<(Monomial, Rational)>> = BTreeSet::new();
    while let Some(m) = queue.pop_front() {
        if seen.len() > MAX_CLOSURE {
            break;
        }
        for rel in bianchi_relations(engine, &m) {
            let key: Vec<(Monomial, Rational)> = rel.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
            if !rel_seen.insert(key) {
                continue;
            }
            for (mm, _) in rel.iter() {
                if seen.insert(mm.clone()) {
                    queue.push_back(mm.clone());
                }
            }
            relations.push(rel);
        }
    }
    relations
}

/// The relations in echelon form; `reduce` of this gives a representative
/// modulo the span.
pub fn relation_echelon(relations: &[Expr]) -> Echelon<Monomial> {
    let mut ech: Echelon<Monomial> = Echelon::new();
    for r in relations {
        ech.insert(&to_vec(r));
    }
    ech
}

/// Remainder of a normal-form expression modulo the relation span.
pub fn reduce_modulo(ech: &Echelon<Monomial>, e: &Expr) -> Expr {
    ech.reduce(&to_vec(e)).0.into_iter().collect()
}

/// Decides whether `e` vanishes modulo the normal form and the cyclic
/// relations.
pub fn check_zero(engine: &Engine, e: &Expr) -> Status {
    let c = engine.canonicalize(e);
    if c.is_zero() {
        return Status::Zero;
    }
    let relations = relation_closure(engine, c.iter().map(|(m, _)| m));
    let ech = relation_echelon(&relations);
    match ech.express(&to_vec(&c)) {
        Ok(combo) => Status::RelationSpan(
            combo
                .into_iter()
                .map(|(k, lam)| (lam, relations[k].clone()))
                .collect(),
        ),
        Err(rem) => Status::Residue(rem.into_iter().collect()),
    }
}

/// `lhs ≡ rhs`: normal form of the difference, then the relation span.
pub fn verify_identity(engine: &Engine, lhs: &Expr, rhs: &Expr) -> Status {
    check_zero(engine, &lhs.minus(rhs))
}
