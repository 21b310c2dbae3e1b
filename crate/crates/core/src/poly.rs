//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::exact::Rational;

/// Exponent vector of a monomial; one entry per variable.
pub type Exponent = SmallVec<[u8; 16]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(SmallVec::from_elem(0, nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e: Exponent = SmallVec::from_elem(0, nvars);
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u8]) -> Rational {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_term(e.clone(), v * c);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Rational::one());
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] = k - 1;
            out.add_term(e2, c * Rational::from_integer(BigInt::from(k)));
        }
        out
    }

    /// Total degree of the highest-degree monomial; `None` for the zero
    /// polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&a| a as u32).sum())
            .max()
    }

    /// Degree with per-variable weights; `Some(d)` when every monomial has the
    /// same weighted degree `d`.
    pub fn weighted_homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: u32 = e.iter().zip(weights).map(|(&a, &w)| a as u32 * w).sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces variable `i` by the polynomial `q` (same variable set).
    pub fn substitute(&self, i: usize, q: &Poly) -> Poly {
        let max_k = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        let mut powers = vec![Poly::one(self.nvars)];
        for k in 1..=max_k as usize {
            let next = powers[k - 1].mul(q);
            powers.push(next);
        }
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut rest = e.clone();
            rest[i] = 0;
            let m = Poly::monomial(rest, c.clone());
            out = out.add(&m.mul(&powers[k]));
        }
        out
    }

    /// Sets variable `i` to the constant `value` (the variable is kept, with
    /// exponent 0 everywhere).
    pub fn specialize(&self, i: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..e[i] {
                t *= value;
            }
            let mut e2 = e.clone();
            e2[i] = 0;
            out.add_term(e2, t);
        }
        out
    }

    /// Reinterprets the polynomial in `nvars` variables, mapping old variable
    /// `j` to new variable `map[j]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2: Exponent = SmallVec::from_elem(0, nvars);
            for (j, &k) in e.iter().enumerate() {
                e2[map[j]] += k;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Exact division by `q`, returning `None` if `q` does not divide `self`.
    /// Uses lexicographic leading terms.
    pub fn exact_div(&self, q: &Poly) -> Option<Poly> {
        let (lq_e, lq_c) = q.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((le, lc)) = rem.terms.iter().next_back() {
            let mut e: Exponent = SmallVec::with_capacity(self.nvars);
            for (a, b) in le.iter().zip(lq_e.iter()) {
                if a < b {
                    return None;
                }
                e.push(a - b);
            }
            let c = lc / lq_c;
            let m = Poly::monomial(e, c);
            rem = rem.sub(&m.mul(q));
            quot = quot.add(&m);
        }
        Some(quot)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", i)?,
                    _ => write!(f, "*x{}^{}", i, k)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn product_and_derivative() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.coeff(&[1, 1]), int(2));
        let dp = p.derivative(0);
        assert_eq!(dp, x.scale(&int(2)).add(&y.scale(&int(2))));
    }

    #[test]
    fn substitute_and_divide() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let r = Poly::var(3, 2);
        let rho = x.pow(2).add(&y.pow(2));
        let p = r.mul(&x);
        let q = p.substitute(2, &rho);
        assert_eq!(q.exact_div(&rho).unwrap(), x);
        assert!(q.exact_div(&y).is_none());
    }
}
