//! Canonical labeling of a single monomial under its monoterm symmetries.
//!
//! Factors are sorted by shape; within a shape the order, each factor's
//! slot arrangement (from its symmetry group) and the dummy names are chosen
//! to minimize the encoded label sequence. Dummies are renamed `0, 1, …` by
//! first appearance. Groups here are tiny, so the search is exhaustive with
//! lexicographic pruning.

use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::term::{Factor, Head, Label, Monomial, SymKind, FREE_BASE};

type Slots = SmallVec<[Label; 4]>;
type Derivs = SmallVec<[Label; 6]>;

#[derive(Clone)]
struct Arrangement {
    slots: Slots,
    derivs: Derivs,
    sign: i8,
}

fn shape(f: &Factor) -> (Head, SymKind, usize, usize) {
    (f.head, f.sym, f.slots.len(), f.derivs.len())
}

/// Signed permutations of four slots generated by the Riemann monoterm
/// symmetries: antisymmetry in each pair and pair exchange.
const RIEMANN_GROUP: [([usize; 4], i8); 8] = [
    ([0, 1, 2, 3], 1),
    ([1, 0, 2, 3], -1),
    ([0, 1, 3, 2], -1),
    ([1, 0, 3, 2], 1),
    ([2, 3, 0, 1], 1),
    ([3, 2, 0, 1], -1),
    ([2, 3, 1, 0], -1),
    ([3, 2, 1, 0], 1),
];

/// All distinct orderings of a multiset of labels.
pub fn distinct_permutations(items: &[Label]) -> Vec<SmallVec<[Label; 8]>> {
    let mut sorted: SmallVec<[Label; 8]> = items.iter().copied().collect();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // next_permutation over the sorted multiset
    loop {
        let v = &mut sorted;
        let n = v.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
    out
}

fn slot_group(f: &Factor) -> Vec<(Slots, i8)> {
    match f.head {
        Head::W | Head::R => RIEMANN_GROUP
            .iter()
            .map(|(p, s)| (p.iter().map(|&k| f.slots[k]).collect(), *s))
            .collect(),
        Head::V | Head::Rc | Head::G => vec![
            (f.slots.clone(), 1),
            ([f.slots[1], f.slots[0]].into_iter().collect(), 1),
        ],
        _ => vec![(f.slots.clone(), 1)],
    }
}

fn arrangements(f: &Factor) -> Vec<Arrangement> {
    let mut out = Vec::new();
    match f.sym {
        SymKind::All => {
            let all: Vec<Label> = f.labels().collect();
            let k = f.slots.len();
            for p in distinct_permutations(&all) {
                out.push(Arrangement {
                    slots: p[..k].iter().copied().collect(),
                    derivs: p[k..].iter().copied().collect(),
                    sign: 1,
                });
            }
        }
        SymKind::Derivs | SymKind::Ordered => {
            let derivs: Vec<Derivs> = if f.sym == SymKind::Derivs {
                distinct_permutations(&f.derivs)
                    .into_iter()
                    .map(|p| p.into_iter().collect())
                    .collect()
            } else {
                vec![f.derivs.clone()]
            };
            for (slots, sign) in slot_group(f) {
                for d in &derivs {
                    out.push(Arrangement {
                        slots: slots.clone(),
                        derivs: d.clone(),
                        sign,
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Encoded {
    labels: SmallVec<[Label; 10]>,
}

struct Search<'a> {
    factors: &'a [Factor],
    order_shapes: Vec<(Head, SymKind, usize, usize)>,
    arr: Vec<Vec<Arrangement>>,
    best: Option<Vec<(usize, Encoded)>>,
    best_sign: i8,
    conflict: bool,
}

fn encode(a: &Arrangement, naming: &mut [Label], next: &mut Label) -> Encoded {
    let mut labels = SmallVec::new();
    for &l in a.slots.iter().chain(a.derivs.iter()) {
        if l >= FREE_BASE {
            labels.push(l);
        } else {
            let slot = &mut naming[l as usize];
            if *slot == Label::MAX {
                *slot = *next;
                *next += 1;
            }
            labels.push(*slot);
        }
    }
    Encoded { labels }
}

impl<'a> Search<'a> {
    fn compare_prefix(&self, cur: &[(usize, Encoded)]) -> Ordering {
        let Some(best) = &self.best else {
            return Ordering::Less;
        };
        for (a, b) in cur.iter().zip(best.iter()) {
            match a.1.cmp(&b.1) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    fn dfs(&mut self, used: u64, naming: &[Label], next: Label, cur: &mut Vec<(usize, Encoded)>, sign: i8) {
        let pos = cur.len();
        if pos == self.factors.len() {
            match self.compare_prefix(cur) {
                Ordering::Less => {
                    self.best = Some(cur.clone());
                    self.best_sign = sign;
                    self.conflict = false;
                }
                Ordering::Equal => {
                    if sign != self.best_sign {
                        self.conflict = true;
                    }
                }
                Ordering::Greater => {}
            }
            return;
        }
        let want = self.order_shapes[pos];
        let mut cands: Vec<(usize, usize, Encoded, Vec<Label>, Label)> = Vec::new();
        let mut min: Option<Encoded> = None;
        for (i, f) in self.factors.iter().enumerate() {
            if used & (1 << i) != 0 || shape(f) != want {
                continue;
            }
            for (k, a) in self.arr[i].iter().enumerate() {
                let mut nm = naming.to_vec();
                let mut nx = next;
                let e = encode(a, &mut nm, &mut nx);
                match &min {
                    Some(m) if e > *m => continue,
                    Some(m) if e < *m => {
                        cands.clear();
                        min = Some(e.clone());
                    }
                    None => min = Some(e.clone()),
                    _ => {}
                }
                cands.push((i, k, e, nm, nx));
            }
        }
        for (i, k, e, nm, nx) in cands {
            cur.push((i, e));
            if self.compare_prefix(cur) != Ordering::Greater {
                let s = sign * self.arr[i][k].sign;
                self.dfs(used | (1 << i), &nm, nx, cur, s);
            }
            cur.pop();
        }
    }
}

/// Canonical form of `m` and the sign relating it to `m`, or `None` when a
/// symmetry forces the monomial to vanish.
pub fn canonical(m: &[Factor]) -> Option<(Monomial, i8)> {
    assert!(m.len() <= 64, "monomial with more than 64 factors");
    let mut order_shapes: Vec<_> = m.iter().map(shape).collect();
    order_shapes.sort();
    let arr: Vec<Vec<Arrangement>> = m.iter().map(arrangements).collect();
    let max_label = m
        .iter()
        .flat_map(|f| f.labels())
        .filter(|&l| l < FREE_BASE)
        .max()
        .map_or(0, |l| l as usize + 1);
    let mut search = Search {
        factors: m,
        order_shapes,
        arr,
        best: None,
        best_sign: 1,
        conflict: false,
    };
    let naming = vec![Label::MAX; max_label];
    search.dfs(0, &naming, 0, &mut Vec::new(), 1);
    if search.conflict {
        return None;
    }
    let best = search.best?;
    let out = best
        .into_iter()
        .map(|(i, e)| {
            let f = &m[i];
            let k = f.slots.len();
            Factor {
                head: f.head,
                sym: f.sym,
                slots: e.labels[..k].iter().copied().collect(),
                derivs: e.labels[k..].iter().copied().collect(),
            }
        })
        .collect();
    Some((out, search.best_sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_permutations() {
        assert_eq!(distinct_permutations(&[1, 1, 2]).len(), 3);
        assert_eq!(distinct_permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }

    #[test]
    fn antisymmetric_against_symmetric_vanishes() {
        let f = Factor::new(Head::F, &[], &[0, 1]).with_sym(SymKind::Derivs);
        let w = Factor::new(Head::W, &[0, 1, 2, 3], &[]);
        let h = Factor::new(Head::H, &[], &[2, 3]).with_sym(SymKind::Derivs);
        assert!(canonical(&[f, w, h]).is_none());
    }

    #[test]
    fn renaming_is_irrelevant() {
        let a = vec![
            Factor::new(Head::F, &[], &[5]),
            Factor::new(Head::H, &[], &[7]),
            Factor::new(Head::V, &[5, 7], &[]),
        ];
        let b = vec![
            Factor::new(Head::V, &[2, 1], &[]),
            Factor::new(Head::H, &[], &[1]),
            Factor::new(Head::F, &[], &[2]),
        ];
        assert_eq!(canonical(&a), canonical(&b));
    }
}
