//! Sparse exact linear algebra: incremental row echelon form with
//! combination tracking.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::Zero;
use wforms_core::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    for (k, v) in x {
        let e = y.entry(k.clone()).or_insert_with(Rational::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

struct Row<K> {
    vec: SparseVec<K>,
    /// This row as a combination of inserted vectors.
    combo: SparseVec<usize>,
}

/// Span of inserted vectors, each row with pivot at its smallest key.
pub struct Echelon<K> {
    rows: Vec<Row<K>>,
    pivots: HashMap<K, usize>,
    inserted: usize,
}

impl<K: Ord + Clone + Hash> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: HashMap::new(),
            inserted: 0,
        }
    }
}

impl<K: Ord + Clone + Hash> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`; returns the remainder and the combination of inserted
    /// vectors that was subtracted.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut v = v.clone();
        let mut used: SparseVec<usize> = BTreeMap::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next().cloned(),
                Some(c) => v.range((std::ops::Bound::Excluded(c.clone()), std::ops::Bound::Unbounded)).next().map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { break };
            if let Some(&r) = self.pivots.get(&k) {
                let a = v[&k].clone();
                let row = &self.rows[r];
                axpy(&mut v, &-a.clone(), &row.vec);
                axpy(&mut used, &a, &row.combo);
            }
            cursor = Some(k);
        }
        (v, used)
    }

    /// Adds `v` with the next index; returns `Some(dependency)` if `v` was
    /// already in the span, where `dependency` writes `v` in earlier vectors.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let id = self.inserted;
        self.inserted += 1;
        let (rem, used) = self.reduce(v);
        if rem.is_empty() {
            return Some(used);
        }
        let (pk, pv) = rem.iter().next().map(|(k, v)| (k.clone(), v.clone())).unwrap();
        let inv = pv.recip();
        let vec: SparseVec<K> = rem.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        let mut combo: SparseVec<usize> = BTreeMap::new();
        combo.insert(id, inv.clone());
        axpy(&mut combo, &-inv, &used);
        self.pivots.insert(pk, self.rows.len());
        self.rows.push(Row { vec, combo });
        None
    }

    /// Writes `target` as a combination of inserted vectors, or returns the
    /// nonzero remainder.
    pub fn express(&self, target: &SparseVec<K>) -> Result<SparseVec<usize>, SparseVec<K>> {
        let (rem, used) = self.reduce(target);
        if rem.is_empty() {
            Ok(used)
        } else {
            Err(rem)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wforms_core::exact::int;

    fn v(pairs: &[(u32, i64)]) -> SparseVec<u32> {
        pairs.iter().map(|&(k, x)| (k, int(x))).collect()
    }

    #[test]
    fn expresses_combinations() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[(0, 1), (1, 2)])).is_none());
        assert!(e.insert(&v(&[(1, 1), (2, 1)])).is_none());
        let dep = e.insert(&v(&[(0, 1), (1, 3), (2, 1)])).unwrap();
        assert_eq!(dep, [(0, int(1)), (1, int(1))].into_iter().collect());
        let c = e.express(&v(&[(0, 2), (1, 1), (2, -3)])).unwrap();
        assert_eq!(c, [(0, int(2)), (1, int(-3))].into_iter().collect());
        assert!(e.express(&v(&[(3, 1)])).is_err());
    }
}
