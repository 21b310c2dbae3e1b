//! Exact monomial integrals over the unit sphere `S^{n-1}` with the
//! normalized measure (total mass 1).

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{double_factorial, factorial, MultiIndex, Rational};
use crate::poly::Poly;
use crate::symbol::RationalSymbol;

/// `∫ ξ^α dξ` over the normalized sphere in dimension `n`:
/// `Π(α_i − 1)!! / Π_{j < |α|/2} (n + 2j)`, and 0 if some `α_i` is odd.
pub fn moment(alpha: &[u8], n: usize) -> Rational {
    if alpha.iter().any(|&a| a % 2 == 1) {
        return Rational::zero();
    }
    let mut num = BigInt::one();
    for &a in alpha {
        num *= double_factorial(a as i64 - 1);
    }
    let half: u32 = alpha.iter().map(|&a| a as u32).sum::<u32>() / 2;
    let mut den = BigInt::one();
    for j in 0..half {
        den *= BigInt::from(n as u64 + 2 * j as u64);
    }
    Rational::new(num, den)
}

pub fn moment_of(alpha: &MultiIndex, n: usize) -> Rational {
    moment(alpha.entries(), n)
}

/// Moment table keyed by the sorted nonzero exponents, shared across threads.
#[derive(Debug)]
pub struct MomentCache {
    n: usize,
    table: RwLock<HashMap<Vec<u8>, Rational>>,
}

impl MomentCache {
    pub fn new(n: usize) -> Self {
        MomentCache {
            n,
            table: RwLock::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, alpha: &[u8]) -> Rational {
        if alpha.iter().any(|&a| a % 2 == 1) {
            return Rational::zero();
        }
        let mut key: Vec<u8> = alpha.iter().copied().filter(|&a| a > 0).collect();
        key.sort_unstable();
        if let Some(v) = self.table.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = moment(&key, self.n);
        self.table.write().unwrap().insert(key, v.clone());
        v
    }

    /// `Σ_m c_m ∫ ξ^m` for a polynomial in the first `n` variables.
    pub fn integrate_poly(&self, p: &Poly) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in p.terms() {
            debug_assert!(e[self.n..].iter().all(|&k| k == 0));
            let m = self.get(&e[..self.n]);
            if !m.is_zero() {
                acc += c * m;
            }
        }
        acc
    }

    /// `∫ p q` without materializing the product.
    pub fn integrate_product(&self, p: &Poly, q: &Poly) -> Rational {
        let mut acc = Rational::zero();
        let mut buf = vec![0u8; self.n];
        for (e1, c1) in p.terms() {
            for (e2, c2) in q.terms() {
                let mut odd = false;
                for i in 0..self.n {
                    buf[i] = e1[i] + e2[i];
                    odd |= buf[i] % 2 == 1;
                }
                if odd {
                    continue;
                }
                acc += c1 * c2 * self.get(&buf);
            }
        }
        acc
    }

    /// On `|ξ| = 1` the denominator `|ξ|^{2m}` is 1, so only the numerator is
    /// integrated.
    pub fn integrate_symbol(&self, s: &RationalSymbol) -> Rational {
        assert_eq!(s.dim(), self.n);
        self.integrate_poly(&s.on_sphere())
    }
}

pub fn integrate_poly(p: &Poly, n: usize) -> Rational {
    MomentCache::new(n).integrate_poly(p)
}

pub fn integrate_symbol(s: &RationalSymbol, n: usize) -> Rational {
    MomentCache::new(n).integrate_symbol(s)
}

/// Area of the unit sphere `S^{n-1}` for even `n = 2m`, as `(c, m)` meaning
/// `c · π^m`; `|S^{2m-1}| = 2π^m/(m-1)!`.
pub fn sphere_area_pi_power(n: usize) -> (Rational, u32) {
    assert!(n >= 2 && n % 2 == 0, "area normalization needs even n >= 2");
    let m = (n / 2) as u32;
    (
        Rational::new(BigInt::from(2), factorial(m - 1)),
        m,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn values_in_dimension_six() {
        assert_eq!(moment(&[0; 6], 6), rat(1, 1));
        assert_eq!(moment(&[1, 0, 0, 0, 0, 0], 6), rat(0, 1));
        assert_eq!(moment(&[2, 0, 0, 0, 0, 0], 6), rat(1, 6));
        assert_eq!(moment(&[4, 0, 0, 0, 0, 0], 6), rat(1, 16));
        assert_eq!(moment(&[2, 2, 0, 0, 0, 0], 6), rat(1, 48));
    }

    #[test]
    fn areas() {
        assert_eq!(sphere_area_pi_power(2), (rat(2, 1), 1));
        assert_eq!(sphere_area_pi_power(4), (rat(2, 1), 2));
        assert_eq!(sphere_area_pi_power(6), (rat(1, 1), 3));
        assert_eq!(sphere_area_pi_power(8), (rat(1, 3), 4));
    }
}
