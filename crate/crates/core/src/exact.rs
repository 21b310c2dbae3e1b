//! Exact rational scalars, multi-indices and the index-set enumerations that
//! drive the symbol-calculus sums.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::CoreError;

/// Exact rational scalar used for every coefficient in the system.
pub type Rational = BigRational;

/// `n/d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`; the result is reduced and has a positive
/// denominator.
pub fn parse_rational(s: &str) -> Result<Rational, CoreError> {
    let t = s.trim();
    let bad = || CoreError::ParseRational(s.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(t).map_err(|_| bad())?,
        )),
    }
}

/// Always `"p/q"`, including integers (`"12/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(2k-1)!!` style double factorial; `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

/// Binomial coefficient with the convention `C(n,k) = 0` for `k < 0` or
/// `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn sign_rational(negative: bool) -> Rational {
    if negative {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Multi-index `α = (α_1, …, α_n)` of non-negative integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(SmallVec<[u8; 8]>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, dim))
    }

    pub fn from_slice(entries: &[u8]) -> Self {
        MultiIndex(SmallVec::from_slice(entries))
    }

    /// `e_i` scaled by `k` in dimension `dim`.
    pub fn unit(dim: usize, i: usize, k: u8) -> Self {
        let mut m = Self::zero(dim);
        m.0[i] = k;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().map(|&a| a as u32).sum()
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// `α! = α_1! ⋯ α_n!`.
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &a| acc * factorial(a as u32))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut out = self.clone();
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o = o.checked_sub(*b)?;
        }
        Some(out)
    }

    /// Every multi-index `β ≤ self` (componentwise), lexicographic.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(self.dim())];
        for i in 0..self.dim() {
            let mut next = Vec::with_capacity(out.len() * (self.0[i] as usize + 1));
            for m in &out {
                for v in 0..=self.0[i] {
                    let mut m2 = m.clone();
                    m2.0[i] = v;
                    next.push(m2);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// The indices `i` repeated `α_i` times, e.g. `(2,0,1) -> [0,0,2]`.
    pub fn to_index_list(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order() as usize);
        for (i, &a) in self.0.iter().enumerate() {
            for _ in 0..a {
                out.push(i);
            }
        }
        out
    }

    pub fn from_index_list(dim: usize, list: &[usize]) -> Self {
        let mut m = Self::zero(dim);
        for &i in list {
            m.0[i] += 1;
        }
        m
    }

    /// Applies a coordinate permutation: `(π·α)_{π(i)} = α_i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut m = Self::zero(self.dim());
        for (i, &a) in self.0.iter().enumerate() {
            m.0[perm[i]] = a;
        }
        m
    }

    /// All multi-indices of exact order `k` in `dim` variables, in
    /// lexicographic order.
    pub fn all_of_order(dim: usize, k: u32) -> Vec<MultiIndex> {
        compositions(dim, k)
            .map(|c| MultiIndex(SmallVec::from_vec(c)))
            .collect()
    }
}

impl Index<usize> for MultiIndex {
    type Output = u8;
    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl IndexMut<usize> for MultiIndex {
    fn index_mut(&mut self, i: usize) -> &mut u8 {
        &mut self.0[i]
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), rhs.dim());
        MultiIndex(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MultiIndex {
    type Output = MultiIndex;
    fn sub(self, rhs: &MultiIndex) -> MultiIndex {
        self.checked_sub(rhs).expect("multi-index subtraction underflow")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl serde::Serialize for MultiIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for MultiIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<u8> = Vec::deserialize(d)?;
        Ok(MultiIndex(SmallVec::from_vec(v)))
    }
}

/// `α! = Π α_i!`.
pub fn mi_factorial(alpha: &MultiIndex) -> BigInt {
    alpha.factorial()
}

/// Lexicographically ascending compositions of `total` into `len`
/// non-negative parts: `(0,…,0,total)` first, `(total,0,…,0)` last.
pub fn compositions(len: usize, total: u32) -> Compositions {
    Compositions::new(len, total)
}

pub struct Compositions {
    current: Option<Vec<u8>>,
}

impl Compositions {
    fn new(len: usize, total: u32) -> Self {
        assert!(total <= u8::MAX as u32, "composition total too large");
        if len == 0 {
            return Compositions {
                current: if total == 0 { Some(Vec::new()) } else { None },
            };
        }
        let mut v = vec![0u8; len];
        v[len - 1] = total as u8;
        Compositions { current: Some(v) }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        let cur = self.current.take()?;
        let len = cur.len();
        let mut next = cur.clone();
        // rightmost i < len-1 with a non-empty tail
        let mut tail = 0u32;
        let mut found = None;
        for i in (0..len.saturating_sub(1)).rev() {
            tail += next[i + 1] as u32;
            if tail > 0 {
                found = Some(i);
                break;
            }
        }
        if let Some(i) = found {
            next[i] += 1;
            for x in next.iter_mut().skip(i + 1) {
                *x = 0;
            }
            next[len - 1] = (tail - 1) as u8;
            self.current = Some(next);
        }
        Some(cur)
    }
}

/// Lower bound on the order of one slot of an [`enumerate_splits`] tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotConstraint {
    pub min_order: u32,
}

impl SlotConstraint {
    pub const FREE: SlotConstraint = SlotConstraint { min_order: 0 };
    pub const NONZERO: SlotConstraint = SlotConstraint { min_order: 1 };
}

/// Every tuple of multi-indices (one per slot, each of length `dim`) whose
/// orders sum to `budget` and respect the per-slot minimum orders. Tuples
/// come out in lexicographic order of the concatenated entries and each
/// appears once.
pub fn enumerate_splits(
    budget: u32,
    dim: usize,
    slots: &[SlotConstraint],
) -> impl Iterator<Item = Vec<MultiIndex>> + '_ {
    let k = slots.len();
    compositions(k * dim, budget).filter_map(move |flat| {
        let parts: Vec<MultiIndex> = flat
            .chunks(dim.max(1))
            .take(k)
            .map(MultiIndex::from_slice)
            .collect();
        let ok = parts
            .iter()
            .zip(slots)
            .all(|(p, c)| p.order() >= c.min_order);
        ok.then_some(parts)
    })
}

/// Signed permutation parity of sorting `seq` (distinct entries): `true` when
/// odd.
pub fn permutation_is_odd<T: Ord>(seq: &[T]) -> bool {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

pub fn abs_rational(r: &Rational) -> Rational {
    r.abs()
}
