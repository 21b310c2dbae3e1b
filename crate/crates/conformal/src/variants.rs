//! Searching index-slot permutations of displayed curvature factors for the
//! reading that makes a displayed identity exact.

use std::collections::BTreeSet;

use num_traits::One;
use rayon::prelude::*;
use wforms_core::Rational;
use wforms_tensor::canon::distinct_permutations;
use wforms_tensor::{check_zero, to_text, Engine, Expr, Monomial, Status};

/// One displayed term read with permuted curvature slots.
#[derive(Clone, Debug, PartialEq)]
pub struct TermVariant {
    /// Index of the term in the display.
    pub term: usize,
    pub printed: String,
    pub replacement: String,
}

/// Replacements that together turn `display` into `computed`.
#[derive(Clone, Debug, PartialEq)]
pub struct VariantMatch {
    pub changes: Vec<TermVariant>,
    pub status: Status,
}

/// Readings of `m` with the slots of one curvature factor permuted, distinct
/// in normal form and different from `m` itself.
fn readings(engine: &Engine, m: &Monomial, c: &Rational) -> Vec<Expr> {
    let original = engine.canonicalize(&Expr::monomial(m.clone(), c.clone()));
    let mut seen: BTreeSet<String> = [to_text(&original)].into();
    let mut out = Vec::new();
    for (i, f) in m.iter().enumerate() {
        if !f.head.is_curvature() || f.slots.len() < 2 {
            continue;
        }
        for perm in distinct_permutations(&f.slots) {
            let mut mm = m.clone();
            mm[i].slots = perm.iter().copied().collect();
            let e = Expr::monomial(mm, c.clone());
            let canon = engine.canonicalize(&e);
            if seen.insert(to_text(&canon)) {
                out.push(e);
            }
        }
    }
    out
}

/// All sets of at most `max_changes` replaced terms that make
/// `computed = display` hold, fewest changes first.
pub fn search_variants(engine: &Engine, computed: &Expr, display: &Expr, max_changes: usize) -> Vec<VariantMatch> {
    let terms: Vec<(Monomial, Rational)> = display.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    let options: Vec<Vec<Expr>> = terms.iter().map(|(m, c)| readings(engine, m, c)).collect();
    let base = computed.minus(display);
    let mut found = Vec::new();
    let mut frontier: Vec<(Vec<(usize, usize)>, Expr)> = vec![(Vec::new(), base)];
    for _ in 0..max_changes {
        let next: Vec<(Vec<(usize, usize)>, Expr)> = frontier
            .iter()
            .flat_map(|(picked, diff)| {
                let start = picked.last().map_or(0, |p| p.0 + 1);
                (start..terms.len())
                    .flat_map(|t| (0..options[t].len()).map(move |k| (t, k)))
                    .map(|(t, k)| {
                        let (m, c) = &terms[t];
                        let mut d = diff.clone();
                        d.add_term(m.clone(), c.clone());
                        d.add_scaled(&options[t][k], &-Rational::one());
                        let mut p = picked.clone();
                        p.push((t, k));
                        (p, d)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let hits: Vec<VariantMatch> = next
            .par_iter()
            .filter_map(|(picked, d)| {
                let status = check_zero(engine, d);
                status.holds().then(|| VariantMatch {
                    changes: picked
                        .iter()
                        .map(|&(t, k)| TermVariant {
                            term: t,
                            printed: to_text(&Expr::monomial(terms[t].0.clone(), terms[t].1.clone())),
                            replacement: to_text(&options[t][k]),
                        })
                        .collect(),
                    status,
                })
            })
            .collect();
        found.extend(hits);
        if !found.is_empty() {
            break;
        }
        frontier = next;
    }
    found
}
