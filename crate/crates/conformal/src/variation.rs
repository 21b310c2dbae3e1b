//! First-order conformal variation `d/dt|_{t=0}` under `g ↦ e^{2tη} g`.
//!
//! An expression is read as the density `e · dvol` with every index
//! lowered. Per factor:
//!
//! * `δg_{ab} = 2η g_{ab}`, `δW_{abcd} = 2η W_{abcd}`,
//!   `δV_{ab} = −η_{;ab}`, `δJ = −2ηJ − η_{;kk}`, functions are invariant;
//! * each covariant derivative contributes `−δΓ^m_{da} S_{…m…}` per index,
//!   with `δΓ^m_{da} = δ^m_d η_a + δ^m_a η_d − g_{da} η^m`;
//! * each contracted pair costs `−2η` (inverse metric) and the volume form
//!   gives `nη`.
//!
//! `R`, `Rc` and `Sc` are decomposed first; symmetrized factors are expanded
//! into ordered ones.

use num_traits::One;
use wforms_core::exact::int;
use wforms_core::Rational;
use wforms_tensor::leibniz::differentiate_product;
use wforms_tensor::normal::{expand_symmetrized, riemann_decompose};
use wforms_tensor::term::{free_labels, fresh_label};
use wforms_tensor::{Engine, Expr, Factor, Head, Label, Monomial, FREE_BASE};

use crate::error::ConformalError;

fn eta(derivs: &[Label]) -> Factor {
    Factor::new(Head::Eta, &[], derivs)
}

/// Variation of the undifferentiated factor `base`, as products of factors.
fn vary_base(base: &Factor, fresh: Label) -> Result<Vec<(Rational, Monomial)>, ConformalError> {
    let s = &base.slots;
    Ok(match base.head {
        h if h.is_function() => Vec::new(),
        Head::G | Head::W => vec![(int(2), vec![eta(&[]), base.clone()])],
        Head::V => vec![(int(-1), vec![eta(&[s[0], s[1]])])],
        Head::J => vec![(int(-2), vec![eta(&[]), base.clone()]), (int(-1), vec![eta(&[fresh, fresh])])],
        h => return Err(ConformalError::Unsupported(format!("variation of {}", h.name()))),
    })
}

/// `∇_{d_m}⋯∇_{d_1}` applied to each product, added to `out`.
fn push_derived(out: &mut Vec<(Rational, Monomial)>, c: &Rational, prod: &[Factor], derivs: &[Label]) {
    for m in differentiate_product(prod, derivs) {
        out.push((c.clone(), m));
    }
}

/// Variation of one ordered factor, as products replacing it.
fn vary_factor(f: &Factor, fresh: Label) -> Result<Vec<(Rational, Monomial)>, ConformalError> {
    let mut base = f.clone();
    base.derivs.clear();
    let mut out = Vec::new();
    for (c, prod) in vary_base(&base, fresh)? {
        push_derived(&mut out, &c, &prod, &f.derivs);
    }
    // −Σ_k ∇_{d_m}⋯∇_{d_{k+1}} (δΓ^x_{d_k a} S_{…x…}) with S = base_{;d_1…d_{k−1}}
    for k in 0..f.derivs.len() {
        let d = f.derivs[k];
        let mut s = base.clone();
        s.derivs.extend_from_slice(&f.derivs[..k]);
        let outer = &f.derivs[k + 1..];
        for pos in 0..s.rank() {
            let a = s.index_at(pos);
            let mut moved = s.clone();
            moved.set_index_at(pos, d);
            push_derived(&mut out, &int(-1), &[eta(&[a]), moved], outer);
            push_derived(&mut out, &int(-1), &[eta(&[d]), s.clone()], outer);
            let mut traced = s.clone();
            traced.set_index_at(pos, fresh);
            push_derived(&mut out, &Rational::one(), &[Factor::new(Head::G, &[d, a], &[]), eta(&[fresh]), traced], outer);
        }
    }
    Ok(out)
}

fn dummy_pairs(m: &[Factor]) -> usize {
    m.iter().flat_map(|f| f.labels()).filter(|&l| l < FREE_BASE).count() / 2
}

/// Raw (unnormalized) first variation of `e · dvol` in dimension `n`.
pub fn conformal_variation_raw(e: &Expr, n: usize) -> Result<Expr, ConformalError> {
    if e.iter().any(|(m, _)| m.iter().any(|f| f.head == Head::Eta)) {
        return Err(ConformalError::Unsupported("expression already contains η".into()));
    }
    if let Some((m, _)) = e.iter().find(|(m, _)| !free_labels(m).is_empty()) {
        return Err(ConformalError::Unsupported(format!("{} free indices in a density", free_labels(m).len())));
    }
    let e = expand_symmetrized(&riemann_decompose(e, n));
    let mut out = Expr::zero();
    for (m, c) in e.iter() {
        let weight = n as i64 - 2 * dummy_pairs(m) as i64;
        let mut scaled = m.clone();
        scaled.push(eta(&[]));
        out.add_term(scaled, c * int(weight));
        let fresh = fresh_label(m);
        for i in 0..m.len() {
            for (k, prod) in vary_factor(&m[i], fresh)? {
                let mut mm: Monomial = m[..i].to_vec();
                mm.extend(prod);
                mm.extend_from_slice(&m[i + 1..]);
                out.add_term(mm, c * k);
            }
        }
    }
    Ok(out)
}

/// First variation in the engine's normal form.
pub fn conformal_variation(engine: &Engine, e: &Expr) -> Result<Expr, ConformalError> {
    Ok(engine.canonicalize(&conformal_variation_raw(e, engine.n)?))
}

/// `E` with `∫ e dvol = ∫ η E dvol` for every compactly supported `η`, for
/// `e` linear in `η`: each `η_{;d_1⋯d_k} X` becomes
/// `(−1)^k η ∇_{d_1}⋯∇_{d_k} X`. The returned expression omits the `η`.
pub fn eta_euler_lagrange(e: &Expr) -> Result<Expr, ConformalError> {
    let mut out = Expr::zero();
    for (m, c) in expand_symmetrized(e).iter() {
        let mut etas = m.iter().enumerate().filter(|(_, f)| f.head == Head::Eta);
        let (Some((at, f)), None) = (etas.next(), etas.next()) else {
            return Err(ConformalError::Unsupported("term is not linear in η".into()));
        };
        let rest: Monomial = m[..at].iter().chain(&m[at + 1..]).cloned().collect();
        // the last derivative on η comes off first
        let derivs: Vec<Label> = f.derivs.iter().rev().copied().collect();
        let sign = if derivs.len() % 2 == 0 { c.clone() } else { -c.clone() };
        if rest.is_empty() {
            if derivs.is_empty() {
                out.add_term(Vec::new(), sign);
            }
            continue;
        }
        for t in differentiate_product(&rest, &derivs) {
            out.add_term(t, sign.clone());
        }
    }
    Ok(out)
}
