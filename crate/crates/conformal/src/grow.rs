//! Growing a flat bilinear form to conformally flat metrics.
//!
//! The flat table is first lifted to a combination of contraction patterns
//! `f_{;w_f} h_{;w_h}`. On `ĝ = e^{2η} g_flat` the flat iterated partials are
//! rewritten through `∂_d T_a = ∇̂_d T_a + Γ̂^m_{da} T_m` with
//! `Γ̂^m_{da} = δ^m_d η_a + δ^m_a η_d − ĝ_{da} η^m`, and second derivatives
//! of `η` are eliminated by `η_{;ab} = −V_{ab} − η_a η_b + ½ η_k η_k ĝ_{ab}`.
//! Flat contractions cost `e^{2η}` each and `dⁿx = e^{−nη} dvol̂`, so the
//! exponentials cancel for order `n` forms. Any `η` left afterwards means
//! the form is not conformally invariant in this class.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use wforms_core::exact::{int, rat};
use wforms_core::flat_residue::{expand_invariant, InvariantExpression, Pattern};
use wforms_core::{CoefficientTable, MultiIndex, Rational};
use wforms_tensor::linalg::{Echelon, SparseVec};
use wforms_tensor::normal::expand_symmetrized;
use wforms_tensor::term::fresh_label;
use wforms_tensor::{parse_expr, Engine, Expr, Factor, Head, Label, Mode, Monomial, FREE_BASE};

use crate::error::ConformalError;

const LETTERS: &[u8] = b"ijklmnopqrstuvwxyz";

/// `coeff · f_{;f} h_{;h}` in flat coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatPattern {
    pub coeff: Rational,
    pub f: String,
    pub h: String,
}

impl FlatPattern {
    /// Shared letters first, then self-contractions as adjacent pairs:
    /// `f_{;ijj} h_{;ikk}`.
    pub fn words(p: usize, q: usize, shared: usize) -> (String, String) {
        let mut next = 0;
        let mut take = || {
            let c = LETTERS[next] as char;
            next += 1;
            c
        };
        let cross: String = (0..shared).map(|_| take()).collect();
        let mut f = cross.clone();
        for _ in 0..(p - shared) / 2 {
            let c = take();
            f.extend([c, c]);
        }
        let mut h = cross;
        for _ in 0..(q - shared) / 2 {
            let c = take();
            h.extend([c, c]);
        }
        (f, h)
    }

    pub fn to_expr(&self) -> Expr {
        let side = |head: &str, w: &str| if w.is_empty() { head.to_string() } else { format!("{head}_{{;{w}}}") };
        parse_expr(&format!("{} {}", side("f", &self.f), side("h", &self.h)))
            .expect("pattern words are well formed")
            .scaled(&self.coeff)
    }
}

fn table_vec(t: &CoefficientTable) -> SparseVec<(MultiIndex, MultiIndex)> {
    t.iter().map(|(a, b, c)| ((a.clone(), b.clone()), c.clone())).collect()
}

/// Writes a flat `∂`-table as a combination of contraction patterns.
pub fn lift_table(table: &CoefficientTable) -> Result<Vec<FlatPattern>, ConformalError> {
    let n = table.n;
    let mut bidegrees: Vec<(usize, usize)> = table
        .iter()
        .map(|(a, b, _)| (a.order() as usize, b.order() as usize))
        .collect();
    bidegrees.sort_unstable();
    bidegrees.dedup();
    let mut basis: Vec<(String, String)> = Vec::new();
    for (p, q) in bidegrees {
        for shared in 0..=p.min(q) {
            if (p - shared) % 2 == 0 && (q - shared) % 2 == 0 {
                basis.push(FlatPattern::words(p, q, shared));
            }
        }
    }
    let mut ech = Echelon::new();
    for (f, h) in &basis {
        let e = InvariantExpression::default().term(
            Rational::one(),
            0,
            Pattern::Index {
                f: f.clone(),
                h: h.clone(),
            },
        );
        let t = expand_invariant(&e, n)?;
        if ech.insert(&table_vec(&t)).is_some() {
            return Err(ConformalError::NotInvariant(format!("dependent pattern f_{{;{f}}} h_{{;{h}}} in dimension {n}")));
        }
    }
    let combo = ech
        .express(&table_vec(table))
        .map_err(|rem| ConformalError::NotInvariant(format!("{} table entries left over", rem.len())))?;
    Ok(combo
        .into_iter()
        .map(|(k, c)| FlatPattern {
            coeff: c,
            f: basis[k].0.clone(),
            h: basis[k].1.clone(),
        })
        .collect())
}

fn free(s: usize) -> Label {
    FREE_BASE + s as Label
}

fn eta(derivs: &[Label]) -> Factor {
    Factor::new(Head::Eta, &[], derivs)
}

fn relabel(m: &[Factor], from: Label, to: Label) -> Monomial {
    m.iter()
        .map(|f| {
            let mut f = f.clone();
            f.relabel(&|l| if l == from { to } else { l });
            f
        })
        .collect()
}

/// `∂_d` of one monomial whose free labels `free(0..k)` are the flat
/// indices; `d = free(k)`.
fn flat_derivative(m: &[Factor], c: &Rational, k: usize, out: &mut Expr) {
    let d = free(k);
    let x = fresh_label(m);
    for (i, f) in m.iter().enumerate() {
        let mut rest = |with: Vec<Factor>, coeff: Rational| {
            let mut mm: Monomial = m[..i].to_vec();
            mm.extend(with);
            mm.extend_from_slice(&m[i + 1..]);
            out.add_term(mm, c * coeff);
        };
        match f.head {
            Head::G => {}
            Head::Eta => {
                debug_assert_eq!(f.derivs.len(), 1);
                let a = f.derivs[0];
                rest(vec![Factor::new(Head::V, &[a, d], &[])], int(-1));
                rest(vec![eta(&[a]), eta(&[d])], int(-1));
                rest(vec![eta(&[x]), eta(&[x]), Factor::new(Head::G, &[a, d], &[])], rat(1, 2));
            }
            _ => rest(vec![f.push_deriv(d)], Rational::one()),
        }
    }
    for s in 0..k {
        let a = free(s);
        let mut t = relabel(m, a, d);
        t.push(eta(&[a]));
        out.add_term(t, c.clone());
        let mut t = m.to_vec();
        t.push(eta(&[d]));
        out.add_term(t, c.clone());
        let mut t = relabel(m, a, x);
        t.push(eta(&[x]));
        t.push(Factor::new(Head::G, &[d, a], &[]));
        out.add_term(t, -c.clone());
    }
}

/// `T_0 … T_max` with `T_k = ∂^k u` written covariantly for `ĝ = e^{2η}δ`;
/// the flat indices of `T_k` are the free labels `FREE_BASE + 0..k`.
pub fn flat_derivatives(engine: &Engine, head: Head, max: usize) -> Vec<Expr> {
    let mut out = vec![Expr::monomial(vec![Factor::scalar(head)], Rational::one())];
    for k in 0..max {
        let prev = expand_symmetrized(&out[k]);
        let mut next = Expr::zero();
        for (m, c) in prev.iter() {
            flat_derivative(m, c, k, &mut next);
        }
        out.push(engine.canonicalize(&next));
    }
    out
}

/// Renames flat indices to the pattern word and shifts internal dummies.
fn instantiate(t: &Expr, word: &str, letter_label: &BTreeMap<char, Label>, shift: Label, head: Head) -> Expr {
    let map: Vec<Label> = word.chars().map(|ch| letter_label[&ch]).collect();
    t.iter()
        .map(|(m, c)| {
            let mm: Monomial = m
                .iter()
                .map(|f| {
                    let mut f = f.clone();
                    if f.head == Head::F {
                        f.head = head;
                    }
                    f.relabel(&|l| if l >= FREE_BASE { map[(l - FREE_BASE) as usize] } else { l + shift });
                    f
                })
                .collect();
            (mm, c.clone())
        })
        .collect()
}

/// Conformally flat normal form of the grown flat table `table` (in the `∂`
/// convention, all entries of total order `table.n`).
pub fn grow_flat(table: &CoefficientTable) -> Result<Expr, ConformalError> {
    let n = table.n;
    let engine = Engine::new(n, Mode::ConformallyFlat);
    if let Some((a, b, _)) = table.iter().find(|(a, b, _)| (a.order() + b.order()) as usize != n) {
        return Err(ConformalError::NotInvariant(format!(
            "entry of order {} in a dimension {n} table",
            a.order() + b.order()
        )));
    }
    let patterns = lift_table(table)?;
    let max = patterns.iter().map(|p| p.f.len().max(p.h.len())).max().unwrap_or(0);
    let t = flat_derivatives(&engine, Head::F, max);
    let terms: Vec<Expr> = patterns
        .par_iter()
        .map(|p| {
            // pattern letters get labels above any internal dummy
            let letter_label: BTreeMap<char, Label> = p
                .f
                .chars()
                .chain(p.h.chars())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .enumerate()
                .map(|(i, ch)| (ch, 800 + i as Label))
                .collect();
            let tf = instantiate(&t[p.f.len()], &p.f, &letter_label, 0, Head::F);
            let th = instantiate(&t[p.h.len()], &p.h, &letter_label, 400, Head::H);
            let mut prod = Expr::zero();
            for (a, ca) in tf.iter() {
                for (b, cb) in th.iter() {
                    let mut m = a.clone();
                    m.extend(b.iter().cloned());
                    prod.add_term(m, ca * cb * &p.coeff);
                }
            }
            engine.canonicalize(&prod)
        })
        .collect();
    let mut total = Expr::zero();
    for e in &terms {
        total.add_scaled(e, &Rational::one());
    }
    let residual = total.iter().filter(|(m, _)| m.iter().any(|f| f.head == Head::Eta)).count();
    if residual > 0 {
        return Err(ConformalError::ResidualEta(residual));
    }
    Ok(total)
}
