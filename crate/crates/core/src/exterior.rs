//! Exterior algebra of `ℂⁿ`: wedge and contraction by ξ as matrices of
//! symbols, the leading symbol of the sign operator on middle-degree forms,
//! and the trace function `ψ(ξ,η) = tr(σ(ξ)σ(η))`.

use crate::error::CoreError;
use crate::exact::{binomial, int, Rational};
use crate::poly::Poly;
use crate::symbol::{MatrixSymbol, RationalSymbol};

/// Increasing `k`-subsets of `{0, …, n-1}` in lexicographic order; subset
/// `S` stands for the basis form `e^S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormBasis {
    pub n: usize,
    pub k: usize,
    subsets: Vec<Vec<u8>>,
}

impl FormBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let mut subsets = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i as u8);
                rec(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        if k <= n {
            rec(n, k, 0, &mut cur, &mut subsets);
        }
        FormBasis { n, k, subsets }
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subset(&self, idx: usize) -> &[u8] {
        &self.subsets[idx]
    }

    pub fn index_of(&self, subset: &[u8]) -> Option<usize> {
        self.subsets.binary_search_by(|s| s.as_slice().cmp(subset)).ok()
    }
}

/// Coefficient matrices of `ε_ξ : Λ^k → Λ^{k+1}` as integer matrices per
/// direction: `ε_ξ = Σ_i ξ_i E_i`. Entry `(T, S)` of `E_i` is the sign of
/// `e^i ∧ e^S = ± e^T`.
fn wedge_coefficients(n: usize, k: usize) -> Vec<Vec<i8>> {
    let src = FormBasis::new(n, k);
    let dst = FormBasis::new(n, k + 1);
    let (rows, cols) = (dst.len(), src.len());
    let mut mats = vec![vec![0i8; rows * cols]; n];
    for c in 0..cols {
        let s = src.subset(c);
        for i in 0..n as u8 {
            if s.contains(&i) {
                continue;
            }
            let before = s.iter().filter(|&&x| x < i).count();
            let mut t = s.to_vec();
            t.push(i);
            t.sort_unstable();
            let r = dst.index_of(&t).expect("subset in basis");
            mats[i as usize][r * cols + c] = if before % 2 == 0 { 1 } else { -1 };
        }
    }
    mats
}

fn linear_matrix(n: usize, rows: usize, cols: usize, coeffs: &[Vec<i8>]) -> MatrixSymbol {
    let mut entries = Vec::with_capacity(rows * cols);
    for idx in 0..rows * cols {
        let mut p = Poly::zero(n);
        for (i, m) in coeffs.iter().enumerate() {
            if m[idx] != 0 {
                p.add_assign_scaled(&Poly::var(n, i), &int(m[idx] as i64));
            }
        }
        entries.push(if p.is_zero() {
            RationalSymbol::zero(n, 1)
        } else {
            RationalSymbol::from_xi_poly(n, &p, 0).expect("linear entry")
        });
    }
    MatrixSymbol::from_entries(n, rows, cols, 1, entries)
}

/// `ε_ξ : Λ^k → Λ^{k+1}` in the bases of increasing subsets.
pub fn epsilon_matrix(n: usize, k: usize) -> Result<MatrixSymbol, CoreError> {
    if k >= n {
        return Err(CoreError::DegreeOutOfRange { n, k });
    }
    let coeffs = wedge_coefficients(n, k);
    let rows = binomial(n as i64, k as i64 + 1);
    let cols = binomial(n as i64, k as i64);
    Ok(linear_matrix(
        n,
        usize::try_from(rows).unwrap(),
        usize::try_from(cols).unwrap(),
        &coeffs,
    ))
}

/// `ι_ξ : Λ^k → Λ^{k-1}`, the transpose of `ε_ξ : Λ^{k-1} → Λ^k`.
pub fn iota_matrix(n: usize, k: usize) -> Result<MatrixSymbol, CoreError> {
    if k == 0 || k > n {
        return Err(CoreError::DegreeOutOfRange { n, k });
    }
    Ok(epsilon_matrix(n, k - 1)?.transpose())
}

/// `ε_ξ ι_ξ − ι_ξ ε_ξ` on `Λ^k`, a matrix of quadratic forms in ξ.
pub fn clifford_difference(n: usize, k: usize) -> Result<MatrixSymbol, CoreError> {
    if k > n {
        return Err(CoreError::DegreeOutOfRange { n, k });
    }
    let size = usize::try_from(binomial(n as i64, k as i64)).unwrap();
    let zero = || {
        MatrixSymbol::from_entries(
            n,
            size,
            size,
            2,
            vec![RationalSymbol::zero(n, 2); size * size],
        )
    };
    let ei = if k > 0 {
        epsilon_matrix(n, k - 1)?.mul(&iota_matrix(n, k)?)
    } else {
        zero()
    };
    let ie = if k < n {
        iota_matrix(n, k + 1)?.mul(&epsilon_matrix(n, k)?)
    } else {
        zero()
    };
    Ok(ei.sub(&ie))
}

/// `σ_L^F(ξ) = |ξ|^{-2}(ε_ξ ι_ξ − ι_ξ ε_ξ)` on `Λ^{n/2}`.
pub fn leading_symbol_f(n: usize) -> Result<MatrixSymbol, CoreError> {
    if n % 2 == 1 {
        return Err(CoreError::OddDimension(n));
    }
    let d = clifford_difference(n, n / 2)?;
    Ok(d.map(0, |e| {
        RationalSymbol::new(n, e.numerator().clone(), 1).expect("homogeneous entry")
    }))
}

/// Coefficients `(a, b)` with
/// `tr(σ(ξ)σ(η)) = a ⟨ξ,η⟩²/(|ξ|²|η|²) + b`.
///
/// The trace numerator `P(ξ,η) = tr(D(ξ)D(η))` with `D = ει − ιε` is
/// computed as a polynomial in `2n` variables; `a` and `b` are read off two
/// coefficients and the identity `P = a⟨ξ,η⟩² + b|ξ|²|η|²` is then checked
/// exactly.
pub fn trace_pair(n: usize) -> Result<(Rational, Rational), CoreError> {
    if n % 2 == 1 {
        return Err(CoreError::OddDimension(n));
    }
    if n < 2 {
        return Err(CoreError::UnsupportedDimension(n));
    }
    let d = clifford_difference(n, n / 2)?;
    let size = d.rows();
    let xi_map: Vec<usize> = (0..n).chain(std::iter::once(2 * n)).collect();
    let eta_map: Vec<usize> = (n..2 * n).chain(std::iter::once(2 * n)).collect();
    // entries have no ρ, so the ρ slot is folded into a dummy variable 2n
    let nv = 2 * n + 1;
    let xi_entries: Vec<Poly> = d.entries().iter().map(|e| e.numerator().remap(nv, &xi_map)).collect();
    let eta_entries: Vec<Poly> = d.entries().iter().map(|e| e.numerator().remap(nv, &eta_map)).collect();
    let mut p = Poly::zero(nv);
    for r in 0..size {
        for c in 0..size {
            let x = &xi_entries[r * size + c];
            let y = &eta_entries[c * size + r];
            if x.is_zero() || y.is_zero() {
                continue;
            }
            p = p.add(&x.mul(y));
        }
    }

    let mut e = vec![0u8; nv];
    e[0] = 1;
    e[1] = 1;
    e[n] = 1;
    e[n + 1] = 1;
    let a = p.coeff(&e) / int(2);
    let mut e = vec![0u8; nv];
    e[0] = 2;
    e[n + 1] = 2;
    let b = p.coeff(&e);

    let mut inner = Poly::zero(nv);
    let mut xi2 = Poly::zero(nv);
    let mut eta2 = Poly::zero(nv);
    for i in 0..n {
        inner = inner.add(&Poly::var(nv, i).mul(&Poly::var(nv, n + i)));
        xi2 = xi2.add(&Poly::var(nv, i).pow(2));
        eta2 = eta2.add(&Poly::var(nv, n + i).pow(2));
    }
    let model = inner.pow(2).scale(&a).add(&xi2.mul(&eta2).scale(&b));
    let residual = p.sub(&model);
    if !residual.is_zero() {
        return Err(CoreError::TraceNotInSpan(format!("{:?}", residual)));
    }
    Ok((a, b))
}

/// The closed form `b = C(n-2,m-2) + C(n-2,m) - 2C(n-2,m-1)`,
/// `a = C(n,m) - b`, with `m = n/2`.
pub fn trace_pair_binomial(n: usize) -> (Rational, Rational) {
    let n = n as i64;
    let m = n / 2;
    let b = binomial(n - 2, m - 2) + binomial(n - 2, m) - binomial(n - 2, m - 1) * 2;
    let a = binomial(n, m) - &b;
    (Rational::from_integer(a), Rational::from_integer(b))
}

/// Checks `ε² = 0`, `ι² = 0` and `ει + ιε = |ξ|²` on `Λ^k`.
pub fn clifford_identities_hold(n: usize, k: usize) -> bool {
    let size = usize::try_from(binomial(n as i64, k as i64)).unwrap();
    let rho = RationalSymbol::new(n, Poly::var(n + 1, n), 0).unwrap();
    let mut target_entries = Vec::with_capacity(size * size);
    for r in 0..size {
        for c in 0..size {
            target_entries.push(if r == c {
                rho.clone()
            } else {
                RationalSymbol::zero(n, 2)
            });
        }
    }
    let target = MatrixSymbol::from_entries(n, size, size, 2, target_entries);
    let mut acc: Option<MatrixSymbol> = None;
    if k > 0 {
        let ei = epsilon_matrix(n, k - 1).unwrap().mul(&iota_matrix(n, k).unwrap());
        acc = Some(ei);
    }
    if k < n {
        let ie = iota_matrix(n, k + 1).unwrap().mul(&epsilon_matrix(n, k).unwrap());
        acc = Some(match acc {
            Some(a) => a.add(&ie),
            None => ie,
        });
    }
    let sum_ok = acc.map(|a| a.symbol_eq(&target)).unwrap_or(true);
    let eps_ok = if k + 2 <= n {
        epsilon_matrix(n, k + 1)
            .unwrap()
            .mul(&epsilon_matrix(n, k).unwrap())
            .is_zero()
    } else {
        true
    };
    let iota_ok = if k >= 2 {
        iota_matrix(n, k - 1)
            .unwrap()
            .mul(&iota_matrix(n, k).unwrap())
            .is_zero()
    } else {
        true
    };
    sum_ok && eps_ok && iota_ok
}

/// `true` when `σ_L^F(n)² = Id` and `tr σ_L^F(n) = 0`.
pub fn leading_symbol_is_involution(n: usize) -> bool {
    let s = leading_symbol_f(n).unwrap();
    let sq = s.mul(&s);
    let id = MatrixSymbol::identity(n, s.rows());
    let tr = s.trace().unwrap();
    sq.symbol_eq(&id) && tr.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_in_dimension_two() {
        let e0 = epsilon_matrix(2, 0).unwrap();
        assert_eq!((e0.rows(), e0.cols()), (2, 1));
        assert_eq!(e0.entry(0, 0), &RationalSymbol::xi(2, 0));
        assert_eq!(e0.entry(1, 0), &RationalSymbol::xi(2, 1));
        let e1 = epsilon_matrix(2, 1).unwrap();
        // ξ ∧ e¹ = ξ₂ e²∧e¹ = −ξ₂ e¹², ξ ∧ e² = ξ₁ e¹²
        assert!(e1.entry(0, 0).symbol_eq(&RationalSymbol::xi(2, 1).scale(&int(-1))));
        assert!(e1.entry(0, 1).symbol_eq(&RationalSymbol::xi(2, 0)));
        assert!(e1.mul(&e0).is_zero());
    }

    #[test]
    fn degree_errors() {
        assert!(epsilon_matrix(2, 2).is_err());
        assert!(iota_matrix(2, 0).is_err());
        assert!(leading_symbol_f(3).is_err());
    }
}
