//! Truncated Taylor jets at the origin of `R^n`.
//!
//! Coefficients are stored in graded order, so truncating to degree `d` is a
//! prefix. A jet's length records the degree up to which it is known exactly;
//! products are truncated to the smaller of the two, derivatives lose one.

use std::collections::HashMap;
use std::sync::Arc;

use crate::scalar::Scalar;

pub struct JetSpace {
    pub dim: usize,
    pub degree: usize,
    monomials: Vec<Vec<u8>>,
    /// `len_upto[d]` = number of monomials of degree `<= d`.
    len_upto: Vec<usize>,
    /// `(i, j, k)`: `x^i · x^j = x^k`, sorted by the degree of `k`.
    products: Vec<(u32, u32, u32)>,
    /// `prod_upto[d]` = number of product entries with result degree `<= d`.
    prod_upto: Vec<usize>,
    /// For each variable, `(source, target, factor)` of the derivative.
    derivs: Vec<Vec<(u32, u32, i64)>>,
}

impl JetSpace {
    pub fn new(dim: usize, degree: usize) -> Arc<Self> {
        let mut monomials: Vec<Vec<u8>> = Vec::new();
        let mut len_upto = Vec::new();
        for d in 0..=degree {
            let mut layer = Vec::new();
            fn rec(pos: usize, left: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
                if pos + 1 == cur.len() {
                    cur[pos] = left;
                    out.push(cur.clone());
                    return;
                }
                for k in (0..=left).rev() {
                    cur[pos] = k;
                    rec(pos + 1, left - k, cur, out);
                }
            }
            if dim == 0 {
                if d == 0 {
                    layer.push(Vec::new());
                }
            } else {
                rec(0, d as u8, &mut vec![0; dim], &mut layer);
            }
            monomials.extend(layer);
            len_upto.push(monomials.len());
        }
        let index: HashMap<Vec<u8>, u32> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let deg = |m: &[u8]| m.iter().map(|&x| x as usize).sum::<usize>();
        let mut products = Vec::new();
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                if deg(a) + deg(b) <= degree {
                    let c: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    products.push((i as u32, j as u32, index[&c]));
                }
            }
        }
        products.sort_by_key(|&(_, _, k)| (deg(&monomials[k as usize]), k));
        let mut prod_upto = vec![0; degree + 1];
        for d in 0..=degree {
            prod_upto[d] = products
                .iter()
                .take_while(|&&(_, _, k)| deg(&monomials[k as usize]) <= d)
                .count();
        }
        let mut derivs = vec![Vec::new(); dim];
        for (i, m) in monomials.iter().enumerate() {
            for (v, dv) in derivs.iter_mut().enumerate() {
                if m[v] > 0 {
                    let mut t = m.clone();
                    t[v] -= 1;
                    dv.push((i as u32, index[&t], m[v] as i64));
                }
            }
        }
        Arc::new(JetSpace {
            dim,
            degree,
            monomials,
            len_upto,
            products,
            prod_upto,
            derivs,
        })
    }

    pub fn len(&self, degree: usize) -> usize {
        self.len_upto[degree]
    }

    pub fn monomial(&self, i: usize) -> &[u8] {
        &self.monomials[i]
    }

    fn degree_of_len(&self, len: usize) -> Option<usize> {
        self.len_upto.iter().position(|&l| l == len)
    }
}

/// A jet known up to some degree (or nothing, if empty).
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    pub fn zero(space: &JetSpace, degree: usize) -> Self {
        Jet {
            coeffs: vec![S::zero(); space.len(degree)],
        }
    }

    pub fn constant(space: &JetSpace, degree: usize, c: S) -> Self {
        let mut j = Jet::zero(space, degree);
        j.coeffs[0] = c;
        j
    }

    /// The coordinate function `x_v`.
    pub fn coordinate(space: &JetSpace, degree: usize, v: usize) -> Self {
        let mut j = Jet::zero(space, degree);
        if degree >= 1 {
            j.coeffs[1 + v] = S::one();
        }
        j
    }

    pub fn value(&self) -> S {
        self.coeffs.first().cloned().expect("jet known to no order")
    }

    pub fn degree(&self, space: &JetSpace) -> usize {
        space.degree_of_len(self.coeffs.len()).expect("jet length is not a graded prefix")
    }

    pub fn truncate(&self, space: &JetSpace, degree: usize) -> Self {
        Jet {
            coeffs: self.coeffs[..space.len(degree).min(self.coeffs.len())].to_vec(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        Jet {
            coeffs: (0..n).map(|i| self.coeffs[i].clone() + o.coeffs[i].clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        Jet {
            coeffs: (0..n).map(|i| self.coeffs[i].clone() - o.coeffs[i].clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &Self, space: &JetSpace) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        if n == 0 {
            return Jet { coeffs: Vec::new() };
        }
        let d = space.degree_of_len(n).expect("jet length is not a graded prefix");
        let mut out = vec![S::zero(); n];
        for &(i, j, k) in &space.products[..space.prod_upto[d]] {
            let a = &self.coeffs[i as usize];
            if a.is_zero() {
                continue;
            }
            out[k as usize] += a.clone() * o.coeffs[j as usize].clone();
        }
        Jet { coeffs: out }
    }

    /// `∂/∂x_v`, known to one degree less.
    pub fn deriv(&self, v: usize, space: &JetSpace) -> Self {
        let d = self.degree(space);
        if d == 0 {
            return Jet { coeffs: Vec::new() };
        }
        let n = space.len(d - 1);
        let mut out = vec![S::zero(); n];
        for &(src, tgt, k) in &space.derivs[v] {
            if (src as usize) < self.coeffs.len() && (tgt as usize) < n {
                out[tgt as usize] = self.coeffs[src as usize].clone() * S::from_i64(k);
            }
        }
        Jet { coeffs: out }
    }

    /// `exp(self)` for a jet vanishing at the origin.
    pub fn exp(&self, space: &JetSpace) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp of a jet with nonzero constant term");
        let d = self.degree(space);
        let mut out = Jet::constant(space, d, S::one());
        let mut power = Jet::constant(space, d, S::one());
        let mut fact = S::one();
        for k in 1..=d {
            power = power.mul(self, space);
            fact = fact * S::from_i64(k as i64);
            out = out.add(&power.scale(&fact.inv()));
        }
        out
    }
}
