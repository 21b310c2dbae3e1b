//! Normal form for tensor polynomials.
//!
//! A monomial is brought to normal form by, in order:
//! 1. expanding `R`, `Rc`, `Sc` into `W`, `V`, `J`, `g` and absorbing `g`;
//! 2. removing self-contractions: Weyl traces vanish, `V` traces become `J`,
//!    divergences of `V` and `W` become derivatives of `J` and `V`;
//! 3. replacing every ordered covariant derivative by the symmetrized one
//!    plus Ricci-identity corrections (for `V` on conformally flat metrics
//!    the index slots join the symmetrization, since `∇V` is symmetric there);
//! 4. canonical labeling.
//!
//! Curvature conventions: `R^i_{jkl} = ∂_kΓ^i_{lj} − ∂_lΓ^i_{kj} + …`,
//! `Rc_{ij} = R^k_{ikj}`, and for lowered indices
//! `R_{abcd} = W_{abcd} − V_{bc}g_{ad} + V_{bd}g_{ac} − V_{ad}g_{bc} + V_{ac}g_{bd}`.
//! The Ricci identity then reads
//! `S_{A;lk} = S_{A;kl} − Σ_s R_{m a_s k l} S_{A[a_s→m]}`.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use wforms_core::exact::int;
use wforms_core::Rational;

use crate::canon::{canonical, distinct_permutations};
use crate::error::TensorError;
use crate::term::{fresh_label, Expr, Factor, Head, Label, Monomial, SymKind, FREE_BASE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    General,
    /// `W = 0` and the Cotton tensor vanishes.
    ConformallyFlat,
}

/// Raw (unnormalized) terms: coefficient and monomial.
pub type RawTerms = Vec<(Rational, Monomial)>;

pub struct Engine {
    pub n: usize,
    pub mode: Mode,
    memo: RwLock<HashMap<Monomial, Arc<Expr>>>,
}

fn replace_factor(m: &[Factor], at: usize, with: Vec<Factor>) -> Monomial {
    let mut out: Monomial = Vec::with_capacity(m.len() + with.len());
    out.extend(m[..at].iter().cloned());
    out.extend(with);
    out.extend(m[at + 1..].iter().cloned());
    out
}

/// All ways to distribute `outer` (order preserved) over two factors.
fn leibniz_splits(outer: &[Label]) -> Vec<(Vec<Label>, Vec<Label>)> {
    let k = outer.len();
    (0..1usize << k)
        .map(|mask| {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, &l) in outer.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a.push(l);
                } else {
                    b.push(l);
                }
            }
            (a, b)
        })
        .collect()
}

/// Ricci identity on an ordered factor: swapping derivatives `p` and `p+1`.
/// Returns the swapped factor and the correction terms (each a replacement
/// list for the factor) such that `original = swapped + Σ corrections`.
pub fn ricci_swap(f: &Factor, p: usize, fresh: Label) -> (Factor, Vec<(Rational, Vec<Factor>)>) {
    assert!(p + 1 < f.derivs.len());
    let mut swapped = f.clone();
    swapped.derivs.swap(p, p + 1);
    let l = f.derivs[p];
    let k = f.derivs[p + 1];
    let outer: Vec<Label> = f.derivs[p + 2..].to_vec();
    let inner_rank = f.slots.len() + p;
    let mut corr = Vec::new();
    for s in 0..inner_rank {
        let a = f.index_at(s);
        let mut inner = Factor {
            head: f.head,
            sym: SymKind::Ordered,
            slots: f.slots.clone(),
            derivs: f.derivs[..p].iter().copied().collect(),
        };
        inner.set_index_at(s, fresh);
        let riem = Factor::new(Head::R, &[fresh, a, k, l], &[]);
        for (ra, sa) in leibniz_splits(&outer) {
            let mut r = riem.clone();
            r.derivs.extend(ra);
            let mut t = inner.clone();
            t.derivs.extend(sa);
            corr.push((-Rational::one(), vec![r, t]));
        }
    }
    (swapped, corr)
}

/// Writes `R`, `Rc` and `Sc` (with any derivatives) in terms of `W`, `V`,
/// `J` and `g`; `None` for other heads.
pub fn decompose_factor(n: usize, f: &Factor) -> Vec<(Rational, Vec<Factor>)> {
    let n = n as i64;
    let with = |head: Head, slots: &[Label]| Factor {
        head,
        sym: f.sym,
        slots: slots.iter().copied().collect(),
        derivs: f.derivs.clone(),
    };
    let g = |x: Label, y: Label| Factor::new(Head::G, &[x, y], &[]);
    match f.head {
        Head::R => {
            let [a, b, c, d] = [f.slots[0], f.slots[1], f.slots[2], f.slots[3]];
            vec![
                (Rational::one(), vec![with(Head::W, &[a, b, c, d])]),
                (-Rational::one(), vec![with(Head::V, &[b, c]), g(a, d)]),
                (Rational::one(), vec![with(Head::V, &[b, d]), g(a, c)]),
                (-Rational::one(), vec![with(Head::V, &[a, d]), g(b, c)]),
                (Rational::one(), vec![with(Head::V, &[a, c]), g(b, d)]),
            ]
        }
        Head::Rc => vec![
            (int(n - 2), vec![with(Head::V, &f.slots)]),
            (Rational::one(), vec![with(Head::J, &[]), g(f.slots[0], f.slots[1])]),
        ],
        Head::Sc => vec![(int(2 * (n - 1)), vec![with(Head::J, &[])])],
        _ => vec![(Rational::one(), vec![f.clone()])],
    }
}

/// Eliminates `R`, `Rc` and `Sc` in favour of `W`, `V`, `J`, `g`, leaving
/// everything else untouched.
pub fn riemann_decompose(e: &Expr, n: usize) -> Expr {
    let mut out = Expr::zero();
    for (m, c) in e.iter() {
        let mut partial: Vec<(Rational, Monomial)> = vec![(c.clone(), Vec::new())];
        for f in m {
            let parts = decompose_factor(n, f);
            let mut next = Vec::new();
            for (pc, pm) in &partial {
                for (k, with) in &parts {
                    let mut q = pm.clone();
                    q.extend(with.iter().cloned());
                    next.push((pc * k, q));
                }
            }
            partial = next;
        }
        for (k, q) in partial {
            out.add_term(q, k);
        }
    }
    out
}

/// Swaps derivatives `position` and `position + 1` of factor `factor` by the
/// Ricci identity: the swapped term plus one `R`-contraction per index of
/// the inner tensor (outer derivatives distributed by Leibniz).
pub fn commute_derivatives(m: &[Factor], factor: usize, position: usize) -> Result<Expr, TensorError> {
    let f = m.get(factor).ok_or(TensorError::FactorOutOfRange(factor))?;
    if position + 1 >= f.derivs.len() {
        return Err(TensorError::PositionOutOfRange {
            position,
            len: f.derivs.len(),
        });
    }
    if f.sym != SymKind::Ordered {
        return Err(TensorError::Malformed("derivatives of a symmetrized factor have no order to swap".into()));
    }
    let (swapped, corr) = ricci_swap(f, position, fresh_label(m));
    let mut out = Expr::monomial(replace_factor(m, factor, vec![swapped]), Rational::one());
    for (c, with) in corr {
        out.add_term(replace_factor(m, factor, with), c);
    }
    Ok(out)
}

/// Rewrites every symmetrized factor as the average of its ordered forms.
pub fn expand_symmetrized(e: &Expr) -> Expr {
    let mut out = Expr::zero();
    for (m, c) in e.iter() {
        let mut partial: Vec<(Rational, Monomial)> = vec![(c.clone(), Vec::new())];
        for f in m {
            if f.sym == SymKind::Ordered {
                for (_, p) in partial.iter_mut() {
                    p.push(f.clone());
                }
                continue;
            }
            let perms = match f.sym {
                SymKind::All => distinct_permutations(&f.labels().collect::<Vec<_>>()),
                _ => distinct_permutations(&f.derivs),
            };
            let w = Rational::new(BigInt::one(), BigInt::from(perms.len()));
            let mut next = Vec::with_capacity(partial.len() * perms.len());
            for (pc, pm) in &partial {
                for perm in &perms {
                    let mut g = f.clone();
                    g.sym = SymKind::Ordered;
                    if f.sym == SymKind::All {
                        for (k, &l) in perm.iter().enumerate() {
                            g.set_index_at(k, l);
                        }
                    } else {
                        g.derivs = perm.iter().copied().collect();
                    }
                    let mut q = pm.clone();
                    q.push(g);
                    next.push((pc * &w, q));
                }
            }
            partial = next;
        }
        for (k, q) in partial {
            out.add_term(q, k);
        }
    }
    out
}

impl Engine {
    pub fn new(n: usize, mode: Mode) -> Self {
        Engine {
            n,
            mode,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    pub fn canonicalize(&self, e: &Expr) -> Expr {
        let terms: Vec<(Monomial, Rational)> = e.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let parts: Vec<Expr> = terms
            .par_iter()
            .map(|(m, c)| self.normalize_monomial(m).scaled(c))
            .collect();
        let mut out = Expr::zero();
        for p in parts {
            out.add_scaled(&p, &Rational::one());
        }
        out
    }

    pub fn canonicalize_raw(&self, raw: &RawTerms) -> Expr {
        let parts: Vec<Expr> = raw
            .par_iter()
            .map(|(c, m)| self.normalize_monomial(m).scaled(c))
            .collect();
        let mut out = Expr::zero();
        for p in parts {
            out.add_scaled(&p, &Rational::one());
        }
        out
    }

    fn normalize_raw(&self, raw: RawTerms) -> Expr {
        let mut out = Expr::zero();
        for (c, m) in raw {
            if c.is_zero() {
                continue;
            }
            out.add_scaled(&self.normalize_monomial(&m), &c);
        }
        out
    }

    pub fn normalize_monomial(&self, m: &[Factor]) -> Expr {
        if m.iter().any(|f| f.sym == SymKind::All && self.mode == Mode::General) {
            // a totally symmetrized V only exists on conformally flat metrics
            panic!("fully symmetrized V factor passed to a general-metric engine");
        }
        let Some((key, sign)) = canonical(m) else {
            return Expr::zero();
        };
        let sign = int(sign as i64);
        if let Some(e) = self.memo.read().unwrap().get(&key) {
            return e.scaled(&sign);
        }
        let e = self.step(&key);
        let e = Arc::new(e);
        self.memo.write().unwrap().insert(key, e.clone());
        e.scaled(&sign)
    }

    fn step(&self, m: &Monomial) -> Expr {
        if let Some(raw) = self.expand_heads(m) {
            return self.normalize_raw(raw);
        }
        if let Some(raw) = self.reduce_contractions(m) {
            return self.normalize_raw(raw);
        }
        if let Some(raw) = self.symmetrize_one(m) {
            return self.normalize_raw(raw);
        }
        Expr::monomial(m.clone(), Rational::one())
    }

    /// Riemann decomposition, metric absorption and vanishing heads.
    fn expand_heads(&self, m: &Monomial) -> Option<RawTerms> {
        let n = self.n as i64;
        for (i, f) in m.iter().enumerate() {
            match f.head {
                Head::R | Head::Rc | Head::Sc => {
                    let mut parts = decompose_factor(self.n, f);
                    if self.mode == Mode::ConformallyFlat {
                        parts.retain(|(_, fs)| fs.iter().all(|g| g.head != Head::W));
                    }
                    return Some(parts.into_iter().map(|(c, with)| (c, replace_factor(m, i, with))).collect());
                }
                Head::W if self.mode == Mode::ConformallyFlat => return Some(Vec::new()),
                Head::G => {
                    if !f.derivs.is_empty() {
                        return Some(Vec::new());
                    }
                    let (a, b) = (f.slots[0], f.slots[1]);
                    if a == b {
                        return Some(vec![(int(n), replace_factor(m, i, vec![]))]);
                    }
                    // absorb: rename the partner occurrence of a dummy
                    let (from, to) = if a < FREE_BASE {
                        (a, b)
                    } else if b < FREE_BASE {
                        (b, a)
                    } else {
                        continue;
                    };
                    let mut rest = replace_factor(m, i, vec![]);
                    for g in rest.iter_mut() {
                        g.relabel(&|l| if l == from { to } else { l });
                    }
                    return Some(vec![(Rational::one(), rest)]);
                }
                Head::V if self.mode == Mode::ConformallyFlat && f.sym == SymKind::Derivs => {
                    return Some(self.desymmetrize(m, i));
                }
                _ => {}
            }
        }
        None
    }

    /// Replaces a symmetrized factor by the average of its ordered forms.
    fn desymmetrize(&self, m: &Monomial, i: usize) -> RawTerms {
        let f = &m[i];
        let perms = match f.sym {
            SymKind::All => distinct_permutations(&f.labels().collect::<Vec<_>>()),
            _ => distinct_permutations(&f.derivs),
        };
        let w = Rational::new(BigInt::one(), BigInt::from(perms.len()));
        perms
            .into_iter()
            .map(|p| {
                let mut g = f.clone();
                g.sym = SymKind::Ordered;
                match f.sym {
                    SymKind::All => {
                        for (k, &l) in p.iter().enumerate() {
                            g.set_index_at(k, l);
                        }
                    }
                    _ => g.derivs = p.into_iter().collect(),
                }
                (w.clone(), replace_factor(m, i, vec![g]))
            })
            .collect()
    }

    /// Moves derivative `p` of ordered factor `i` to position 0. Returns the
    /// moved monomial and the correction terms.
    fn move_inward(&self, m: &Monomial, i: usize, p: usize) -> (Monomial, RawTerms) {
        let mut cur = m.clone();
        let mut corr = RawTerms::new();
        let mut q = p;
        while q > 0 {
            let fresh = fresh_label(&cur);
            let (swapped, c) = ricci_swap(&cur[i], q - 1, fresh);
            for (k, with) in c {
                corr.push((k, replace_factor(&cur, i, with)));
            }
            cur[i] = swapped;
            q -= 1;
        }
        (cur, corr)
    }

    fn reduce_contractions(&self, m: &Monomial) -> Option<RawTerms> {
        for (i, f) in m.iter().enumerate() {
            let slot_pair = f.slots.len() == 2 && f.slots[0] == f.slots[1]
                || (f.slots.len() == 4 && {
                    let s = &f.slots;
                    (0..4).any(|x| (x + 1..4).any(|y| s[x] == s[y]))
                });
            let deriv_slot = f.derivs.iter().position(|d| f.slots.contains(d));
            let deriv_deriv = (0..f.derivs.len())
                .find(|&p| f.derivs[p + 1..].contains(&f.derivs[p]));
            match f.head {
                Head::W => {
                    if slot_pair {
                        return Some(Vec::new());
                    }
                    if let Some(d) = deriv_slot {
                        if f.sym != SymKind::Ordered {
                            return Some(self.desymmetrize(m, i));
                        }
                        return Some(self.weyl_divergence(m, i, d));
                    }
                }
                Head::V => {
                    let cf_reducible = self.mode == Mode::ConformallyFlat && deriv_deriv.is_some();
                    if !(slot_pair || deriv_slot.is_some() || cf_reducible) {
                        continue;
                    }
                    if slot_pair {
                        let j = Factor {
                            head: Head::J,
                            sym: if f.sym == SymKind::Ordered { SymKind::Ordered } else { SymKind::Derivs },
                            slots: Default::default(),
                            derivs: f.derivs.clone(),
                        }
                        .with_sym(if f.sym == SymKind::Ordered { SymKind::Ordered } else { SymKind::Derivs });
                        if f.sym == SymKind::All {
                            return Some(self.desymmetrize(m, i));
                        }
                        return Some(vec![(Rational::one(), replace_factor(m, i, vec![j]))]);
                    }
                    if f.sym != SymKind::Ordered {
                        return Some(self.desymmetrize(m, i));
                    }
                    if let Some(p) = deriv_slot {
                        let (moved, mut corr) = self.move_inward(m, i, p);
                        let g = &moved[i];
                        let d0 = g.derivs[0];
                        let other = if g.slots[0] == d0 { g.slots[1] } else { g.slots[0] };
                        let mut derivs = vec![other];
                        derivs.extend(g.derivs[1..].iter().copied());
                        let j = Factor::new(Head::J, &[], &derivs);
                        corr.push((Rational::one(), replace_factor(&moved, i, vec![j])));
                        return Some(corr);
                    }
                    // conformally flat: Δ-type contraction, trade for a divergence
                    let p = deriv_deriv.unwrap();
                    let (moved, mut corr) = self.move_inward(m, i, p);
                    let g = &moved[i];
                    let mut v = g.clone();
                    v.slots[1] = g.derivs[0];
                    v.derivs[0] = g.slots[1];
                    corr.push((Rational::one(), replace_factor(&moved, i, vec![v])));
                    return Some(corr);
                }
                _ => {}
            }
        }
        None
    }

    /// `∇^a W_{abcd} = (n−3)(∇_c V_{bd} − ∇_d V_{bc})` applied after moving the
    /// contracted derivative innermost.
    fn weyl_divergence(&self, m: &Monomial, i: usize, p: usize) -> RawTerms {
        let (moved, mut corr) = self.move_inward(m, i, p);
        let w = &moved[i];
        let d0 = w.derivs[0];
        let s = &w.slots;
        let k = s.iter().position(|&x| x == d0).unwrap();
        let (b, c, d, sign) = match k {
            0 => (s[1], s[2], s[3], 1),
            1 => (s[0], s[2], s[3], -1),
            2 => (s[3], s[0], s[1], 1),
            _ => (s[2], s[0], s[1], -1),
        };
        let kappa = int(sign * (self.n as i64 - 3));
        let outer: Vec<Label> = w.derivs[1..].to_vec();
        let v = |x: Label, y: Label, z: Label| {
            let mut derivs = vec![z];
            derivs.extend(outer.iter().copied());
            Factor::new(Head::V, &[x, y], &derivs)
        };
        corr.push((kappa.clone(), replace_factor(&moved, i, vec![v(b, d, c)])));
        corr.push((-kappa, replace_factor(&moved, i, vec![v(b, c, d)])));
        corr
    }

    /// Target symmetrization for an ordered factor, if any.
    fn target_sym(&self, f: &Factor) -> Option<SymKind> {
        if f.sym != SymKind::Ordered {
            return None;
        }
        match f.head {
            Head::V if self.mode == Mode::ConformallyFlat => (!f.derivs.is_empty()).then_some(SymKind::All),
            _ => (f.derivs.len() >= 2).then_some(SymKind::Derivs),
        }
    }

    /// Adjacent transposition `q, q+1` of the permutable list of `f`.
    fn permutable_swap(&self, f: &Factor, kind: SymKind, q: usize, fresh: Label) -> (Factor, Vec<(Rational, Vec<Factor>)>) {
        match kind {
            SymKind::All => {
                let mut g = f.clone();
                match q {
                    0 => {
                        g.slots.swap(0, 1);
                        (g, Vec::new())
                    }
                    1 => {
                        // Cotton tensor vanishes: ∇_c V_ab = ∇_b V_ac
                        std::mem::swap(&mut g.slots[1], &mut g.derivs[0]);
                        (g, Vec::new())
                    }
                    _ => ricci_swap(f, q - 2, fresh),
                }
            }
            _ => ricci_swap(f, q, fresh),
        }
    }

    /// `T = Sym T − (1/N!) Σ_σ (T_σ − T)`, with `T_σ − T` accumulated along a
    /// breadth-first tree of adjacent transpositions.
    fn symmetrize_one(&self, m: &Monomial) -> Option<RawTerms> {
        let (i, kind) = m
            .iter()
            .enumerate()
            .find_map(|(i, f)| self.target_sym(f).map(|k| (i, k)))?;
        let f = &m[i];
        let len = match kind {
            SymKind::All => f.rank(),
            _ => f.derivs.len(),
        };
        let fresh = fresh_label(m);
        // nodes: permutations of positions, as arrangements of the factor
        let start: Vec<usize> = (0..len).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut nodes: Vec<(Vec<usize>, Option<(usize, usize)>)> = vec![(start.clone(), None)];
        index.insert(start, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let perm = nodes[u].0.clone();
            for q in 0..len - 1 {
                let mut next = perm.clone();
                next.swap(q, q + 1);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), nodes.len());
                    nodes.push((next, Some((u, q))));
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        let mut size = vec![1usize; nodes.len()];
        for v in (1..nodes.len()).rev() {
            let (parent, _) = nodes[v].1.unwrap();
            size[parent] += size[v];
        }
        let arranged = |perm: &[usize]| {
            let mut g = f.clone();
            for (k, &src) in perm.iter().enumerate() {
                let l = match kind {
                    SymKind::All => f.index_at(src),
                    _ => f.derivs[src],
                };
                match kind {
                    SymKind::All => g.set_index_at(k, l),
                    _ => g.derivs[k] = l,
                }
            }
            g
        };
        let total = nodes.len();
        let inv_total = Rational::new(BigInt::one(), BigInt::from(total));
        let mut sym = f.clone();
        sym.sym = kind;
        let mut out: RawTerms = vec![(Rational::one(), replace_factor(m, i, vec![sym]))];
        // T_child − T_parent = −corr(parent, q); Σ_σ (T_σ − T) = Σ_edges size·(−corr)
        for v in 1..nodes.len() {
            let (parent, q) = nodes[v].1.unwrap();
            let pf = arranged(&nodes[parent].0);
            let (_, corr) = self.permutable_swap(&pf, kind, q, fresh);
            let w = &inv_total * int(size[v] as i64);
            for (c, with) in corr {
                out.push((&c * &w, replace_factor(m, i, with)));
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leibniz_split_count() {
        assert_eq!(leibniz_splits(&[1, 2, 3]).len(), 8);
    }

    #[test]
    fn scalar_second_derivatives_commute() {
        let e = Engine::new(6, Mode::General);
        let a = Expr::monomial(
            vec![Factor::new(Head::F, &[], &[0, 1]), Factor::new(Head::H, &[], &[0, 1])],
            Rational::one(),
        );
        let b = Expr::monomial(
            vec![Factor::new(Head::F, &[], &[1, 0]), Factor::new(Head::H, &[], &[0, 1])],
            Rational::one(),
        );
        assert!(e.canonicalize(&a.minus(&b)).is_zero());
    }
}
