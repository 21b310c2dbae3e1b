//! Leibniz-rule expansions.

use crate::error::TensorError;
use crate::term::{Expr, Factor, Head, Label, Monomial, SymKind};

/// `∇_{d_m}⋯∇_{d_1}(a_1⋯a_r)`: every derivative lands on one factor, in order.
/// Returns `r^m` products, unmerged.
pub fn differentiate_product(factors: &[Factor], derivs: &[Label]) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = vec![factors.to_vec()];
    for &d in derivs {
        let mut next = Vec::with_capacity(out.len() * factors.len());
        for m in &out {
            for k in 0..m.len() {
                let mut m2 = m.clone();
                m2[k].derivs.push(d);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

/// Splits of a derivative list into two order-preserving subsequences.
pub fn binary_splits(derivs: &[Label]) -> Vec<(Vec<Label>, Vec<Label>)> {
    let k = derivs.len();
    (0..1usize << k)
        .map(|mask| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for (i, &l) in derivs.iter().enumerate() {
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

/// Replaces every occurrence of the function `slot` by the product
/// `product.0 · product.1`, expanding its derivatives by the Leibniz rule.
/// A symmetrized derivative splits into symmetrized derivatives of the two
/// factors.
pub fn leibniz_substitute(e: &Expr, slot: Head, product: (Head, Head)) -> Result<Expr, TensorError> {
    for h in [slot, product.0, product.1] {
        if !h.is_function() {
            return Err(TensorError::UnknownHead(format!("{} is not a function tag", h.name())));
        }
    }
    let mut out = Expr::zero();
    for (m, c) in e.iter() {
        let mut partial: Vec<Monomial> = vec![Vec::new()];
        for f in m {
            if f.head != slot {
                for p in partial.iter_mut() {
                    p.push(f.clone());
                }
                continue;
            }
            let mut next = Vec::new();
            for (a, b) in binary_splits(&f.derivs) {
                let fa = Factor::new(product.0, &[], &a).with_sym(f.sym.min(SymKind::Derivs));
                let fb = Factor::new(product.1, &[], &b).with_sym(f.sym.min(SymKind::Derivs));
                for p in &partial {
                    let mut q = p.clone();
                    q.push(fa.clone());
                    q.push(fb.clone());
                    next.push(q);
                }
            }
            partial = next;
        }
        for p in partial {
            out.add_term(p, c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_counts() {
        let f = Factor::scalar(Head::F);
        let g = Factor::scalar(Head::H);
        assert_eq!(differentiate_product(&[f, g], &[1, 2, 3]).len(), 8);
        assert_eq!(binary_splits(&[1, 2, 3, 4, 5, 6]).len(), 64);
    }

    #[test]
    fn substitution_term_counts() {
        let count = |s: &str| {
            let e = crate::parse_expr(s).unwrap();
            leibniz_substitute(&e, Head::F, (Head::F1, Head::F2)).unwrap().len()
        };
        assert_eq!(count("f_{;i} h_{;i}"), 2);
        assert_eq!(count("f_{;ij} h_{;ij}"), 4);
        // six ordered derivatives: 2^6 splits, merged by the multiset of
        // labels each factor receives
        assert_eq!(count("f_{;ijklmn} h_{;ijklmn}"), 64);
        let sym = crate::parse_expr("f_{;(ij)} h_{;ij}").unwrap();
        assert!(leibniz_substitute(&sym, Head::F, (Head::G, Head::F2)).is_err());
    }
}
