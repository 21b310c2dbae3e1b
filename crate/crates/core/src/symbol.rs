//! Homogeneous rational symbols `P(ξ)/|ξ|^{2m}` and matrices of them.
//!
//! The numerator lives in `n + 1` variables: `ξ_1, …, ξ_n` and a formal `ρ`
//! standing for `|ξ|²`. Keeping `ρ` formal makes repeated ξ-derivatives
//! sparse; [`RationalSymbol::expanded`] substitutes `ρ = |ξ|²` whenever an
//! honest polynomial is needed.

use std::fmt;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::CoreError;
use crate::exact::{int, MultiIndex, Rational};
use crate::poly::{Exponent, Poly};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalSymbol {
    dim: usize,
    numer: Poly,
    pole: u32,
    homogeneity: i32,
}

fn weights(dim: usize) -> Vec<u32> {
    let mut w = vec![1u32; dim];
    w.push(2);
    w
}

/// `|ξ|²` as a polynomial in `ξ_1..ξ_n, ρ` (ρ exponent zero).
pub fn xi_norm_squared(dim: usize) -> Poly {
    let mut p = Poly::zero(dim + 1);
    for i in 0..dim {
        let mut e: Exponent = SmallVec::from_elem(0, dim + 1);
        e[i] = 2;
        p.add_term(e, Rational::one());
    }
    p
}

impl RationalSymbol {
    /// Builds `numer / ρ^pole`; `numer` has `dim + 1` variables with `ρ` last.
    /// Returns `None` if the numerator is not homogeneous.
    pub fn new(dim: usize, numer: Poly, pole: u32) -> Option<Self> {
        assert_eq!(numer.nvars(), dim + 1, "numerator must carry the rho variable");
        let deg = if numer.is_zero() {
            0
        } else {
            numer.weighted_homogeneous_degree(&weights(dim))?
        };
        Some(RationalSymbol {
            dim,
            numer,
            pole,
            homogeneity: deg as i32 - 2 * pole as i32,
        })
    }

    /// Builds a symbol from a numerator polynomial in `ξ_1..ξ_n` only.
    pub fn from_xi_poly(dim: usize, p: &Poly, pole: u32) -> Option<Self> {
        assert_eq!(p.nvars(), dim);
        let map: Vec<usize> = (0..dim).collect();
        Self::new(dim, p.remap(dim + 1, &map), pole)
    }

    fn with_homogeneity(dim: usize, numer: Poly, pole: u32, homogeneity: i32) -> Self {
        RationalSymbol {
            dim,
            numer,
            pole,
            homogeneity,
        }
    }

    pub fn zero(dim: usize, homogeneity: i32) -> Self {
        Self::with_homogeneity(dim, Poly::zero(dim + 1), 0, homogeneity)
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::with_homogeneity(dim, Poly::constant(dim + 1, c), 0, 0)
    }

    /// `ξ_i`.
    pub fn xi(dim: usize, i: usize) -> Self {
        Self::with_homogeneity(dim, Poly::var(dim + 1, i), 0, 1)
    }

    /// `|ξ|^{-2m}`.
    pub fn inverse_norm_power(dim: usize, m: u32) -> Self {
        Self::with_homogeneity(dim, Poly::one(dim + 1), m, -2 * m as i32)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn numerator(&self) -> &Poly {
        &self.numer
    }

    pub fn pole(&self) -> u32 {
        self.pole
    }

    pub fn homogeneity(&self) -> i32 {
        self.homogeneity
    }

    pub fn is_zero(&self) -> bool {
        self.expanded().is_zero()
    }

    /// `∂/∂ξ_i`; homogeneity drops by one.
    pub fn xi_derivative(&self, i: usize) -> Self {
        let rho = self.dim;
        let n = &self.numer;
        // ρ (∂_i N + 2 ξ_i ∂_ρ N) − 2 m ξ_i N, over ρ^{m+1}
        let xi = Poly::var(self.dim + 1, i);
        let rho_var = Poly::var(self.dim + 1, rho);
        let inner = n
            .derivative(i)
            .add(&xi.mul(&n.derivative(rho)).scale(&int(2)));
        let mut numer = rho_var.mul(&inner);
        if self.pole > 0 {
            numer = numer.sub(&xi.mul(n).scale(&int(2 * self.pole as i64)));
        }
        Self::with_homogeneity(self.dim, numer, self.pole + 1, self.homogeneity - 1)
    }

    pub fn derivative_multi(&self, alpha: &MultiIndex) -> Self {
        let mut s = self.clone();
        for i in alpha.to_index_list() {
            s = s.xi_derivative(i);
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::with_homogeneity(
            self.dim,
            self.numer.mul(&other.numer),
            self.pole + other.pole,
            self.homogeneity + other.homogeneity,
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::with_homogeneity(self.dim, self.numer.scale(c), self.pole, self.homogeneity)
    }

    fn raised_numerator(&self, pole: u32) -> Poly {
        let rho = Poly::var(self.dim + 1, self.dim);
        self.numer.mul(&rho.pow(pole - self.pole))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(
            self.numer.is_zero() || other.numer.is_zero() || self.homogeneity == other.homogeneity,
            "adding symbols of different homogeneity"
        );
        let pole = self.pole.max(other.pole);
        let numer = self
            .raised_numerator(pole)
            .add(&other.raised_numerator(pole));
        let h = if self.numer.is_zero() {
            other.homogeneity
        } else {
            self.homogeneity
        };
        Self::with_homogeneity(self.dim, numer, pole, h)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Numerator with `ρ` replaced by `|ξ|²` (the ρ variable is kept with
    /// exponent zero).
    pub fn expanded(&self) -> Poly {
        self.numer.substitute(self.dim, &xi_norm_squared(self.dim))
    }

    /// Normal form: `ρ` expanded, common `|ξ|²` factors cancelled.
    pub fn normalize(&self) -> Self {
        let mut numer = self.expanded();
        let mut pole = self.pole;
        let r = xi_norm_squared(self.dim);
        if numer.is_zero() {
            return Self::zero(self.dim, self.homogeneity);
        }
        while pole > 0 {
            match numer.exact_div(&r) {
                Some(q) => {
                    numer = q;
                    pole -= 1;
                }
                None => break,
            }
        }
        Self::with_homogeneity(self.dim, numer, pole, self.homogeneity)
    }

    /// Equality as functions on `ξ ≠ 0`.
    pub fn symbol_eq(&self, other: &Self) -> bool {
        let r = xi_norm_squared(self.dim);
        let lhs = self.expanded().mul(&r.pow(other.pole));
        let rhs = other.expanded().mul(&r.pow(self.pole));
        lhs == rhs
    }

    /// Restriction to `|ξ| = 1` as a polynomial in `ξ_1..ξ_n`.
    pub fn on_sphere(&self) -> Poly {
        let keep: Vec<usize> = (0..self.dim).chain(std::iter::once(0)).collect();
        let p = self.numer.specialize(self.dim, &Rational::one());
        p.remap(self.dim, &keep)
    }

    /// Value at a nonzero rational point.
    pub fn eval(&self, xi: &[Rational]) -> Rational {
        let rho: Rational = xi.iter().map(|x| x * x).fold(Rational::zero(), |a, b| a + b);
        let mut pt = xi.to_vec();
        pt.push(rho.clone());
        let mut den = Rational::one();
        for _ in 0..self.pole {
            den *= &rho;
        }
        self.numer.eval(&pt) / den
    }
}

impl fmt::Debug for RationalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/rho^{} [h={}]", self.numer, self.pole, self.homogeneity)
    }
}

/// Matrix whose entries are rational symbols of a common homogeneity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixSymbol {
    dim: usize,
    rows: usize,
    cols: usize,
    homogeneity: i32,
    entries: Vec<RationalSymbol>,
}

impl MatrixSymbol {
    pub fn from_entries(
        dim: usize,
        rows: usize,
        cols: usize,
        homogeneity: i32,
        entries: Vec<RationalSymbol>,
    ) -> Self {
        assert_eq!(entries.len(), rows * cols);
        debug_assert!(entries
            .iter()
            .all(|e| e.numer.is_zero() || e.homogeneity == homogeneity));
        MatrixSymbol {
            dim,
            rows,
            cols,
            homogeneity,
            entries,
        }
    }

    pub fn identity(dim: usize, size: usize) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for r in 0..size {
            for c in 0..size {
                entries.push(if r == c {
                    RationalSymbol::constant(dim, Rational::one())
                } else {
                    RationalSymbol::zero(dim, 0)
                });
            }
        }
        Self::from_entries(dim, size, size, 0, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn homogeneity(&self) -> i32 {
        self.homogeneity
    }

    pub fn entry(&self, r: usize, c: usize) -> &RationalSymbol {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[RationalSymbol] {
        &self.entries
    }

    pub fn map(&self, homogeneity: i32, f: impl Fn(&RationalSymbol) -> RationalSymbol) -> Self {
        Self::from_entries(
            self.dim,
            self.rows,
            self.cols,
            homogeneity,
            self.entries.iter().map(f).collect(),
        )
    }

    pub fn xi_derivative(&self, i: usize) -> Self {
        self.map(self.homogeneity - 1, |e| e.xi_derivative(i))
    }

    pub fn derivative_multi(&self, alpha: &MultiIndex) -> Self {
        self.map(self.homogeneity - alpha.order() as i32, |e| {
            e.derivative_multi(alpha)
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(self.homogeneity, |e| e.scale(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let h = self.homogeneity + other.homogeneity;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = RationalSymbol::zero(self.dim, h);
                for k in 0..self.cols {
                    let a = self.entry(r, k);
                    let b = other.entry(k, c);
                    if a.numer.is_zero() || b.numer.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                entries.push(acc);
            }
        }
        Self::from_entries(self.dim, self.rows, other.cols, h, entries)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Self::from_entries(self.dim, self.rows, self.cols, self.homogeneity, entries)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.entry(r, c).clone());
            }
        }
        Self::from_entries(self.dim, self.cols, self.rows, self.homogeneity, entries)
    }

    pub fn trace(&self) -> Result<RationalSymbol, CoreError> {
        if self.rows != self.cols {
            return Err(CoreError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = RationalSymbol::zero(self.dim, self.homogeneity);
        for i in 0..self.rows {
            acc = acc.add(self.entry(i, i));
        }
        Ok(acc)
    }

    /// Entrywise equality as functions of ξ.
    pub fn symbol_eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.symbol_eq(b))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Writes the matrix as `Σ_m (x^m / ρ^p) C_m` with constant matrices
    /// `C_m`, one per numerator monomial, after lifting every entry to the
    /// common pole `p`.
    pub fn monomial_expansion(&self) -> MonomialExpansion {
        let pole = self.entries.iter().map(|e| e.pole).max().unwrap_or(0);
        let mut parts: std::collections::BTreeMap<Exponent, Vec<Rational>> = Default::default();
        let size = self.entries.len();
        for (idx, e) in self.entries.iter().enumerate() {
            let numer = e.raised_numerator(pole);
            for (exp, c) in numer.terms() {
                parts
                    .entry(exp.clone())
                    .or_insert_with(|| vec![Rational::zero(); size])[idx] += c;
            }
        }
        MonomialExpansion {
            dim: self.dim,
            rows: self.rows,
            cols: self.cols,
            pole,
            homogeneity: self.homogeneity,
            parts: parts
                .into_iter()
                .filter(|(_, m)| m.iter().any(|c| !c.is_zero()))
                .collect(),
        }
    }
}

/// A matrix symbol written as `Σ_m s_m(ξ) C_m` with scalar monomial symbols
/// `s_m = x^m / ρ^p` and constant coefficient matrices `C_m` (row-major).
#[derive(Clone, Debug)]
pub struct MonomialExpansion {
    pub dim: usize,
    pub rows: usize,
    pub cols: usize,
    pub pole: u32,
    pub homogeneity: i32,
    pub parts: Vec<(Exponent, Vec<Rational>)>,
}

impl MonomialExpansion {
    pub fn scalar_part(&self, m: usize) -> RationalSymbol {
        RationalSymbol::with_homogeneity(
            self.dim,
            Poly::monomial(self.parts[m].0.clone(), Rational::one()),
            self.pole,
            self.homogeneity,
        )
    }

    /// `tr(C_m C_{m'})` for all pairs (square matrices only).
    pub fn trace_gram(&self) -> Vec<Vec<Rational>> {
        assert_eq!(self.rows, self.cols);
        let s = self.rows;
        let k = self.parts.len();
        let mut g = vec![vec![Rational::zero(); k]; k];
        for a in 0..k {
            for b in a..k {
                let ca = &self.parts[a].1;
                let cb = &self.parts[b].1;
                let mut t = Rational::zero();
                for r in 0..s {
                    for c in 0..s {
                        let x = &ca[r * s + c];
                        if x.is_zero() {
                            continue;
                        }
                        let y = &cb[c * s + r];
                        if !y.is_zero() {
                            t += x * y;
                        }
                    }
                }
                g[a][b] = t.clone();
                g[b][a] = t;
            }
        }
        g
    }
}
