//! Curvature/derivative grading of monomials.

use crate::term::{Expr, Factor};

/// `(k_R, k_∇)`: occurrences of curvature heads and covariant derivatives.
pub fn filtration_degrees(m: &[Factor]) -> (usize, usize) {
    let k_r = m.iter().filter(|f| f.head.is_curvature()).count();
    let k_d = m.iter().map(|f| f.derivs.len()).sum();
    (k_r, k_d)
}

/// Whether every term lies in the filtration level `k_R >= l`.
pub fn in_filtration(e: &Expr, l: usize) -> bool {
    e.iter().all(|(m, _)| filtration_degrees(m).0 >= l)
}

/// `2 k_R + k_∇` if it is the same for every term.
pub fn homogeneity(e: &Expr) -> Option<usize> {
    let mut it = e.iter().map(|(m, _)| {
        let (r, d) = filtration_degrees(m);
        2 * r + d
    });
    let first = it.next()?;
    it.all(|h| h == first).then_some(first)
}
