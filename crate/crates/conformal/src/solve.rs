//! Expressions linear in unknown constants, the linear systems they
//! generate, and exact solving with provenance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use wforms_core::Rational;
use wforms_tensor::relations::{reduce_modulo, relation_closure, relation_echelon};
use wforms_tensor::{to_text, Engine, Expr};

/// `constant + Σ_u u · parts[u]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnsatzExpr {
    pub constant: Expr,
    pub parts: BTreeMap<String, Expr>,
}

impl AnsatzExpr {
    pub fn constant(e: Expr) -> Self {
        AnsatzExpr {
            constant: e,
            parts: BTreeMap::new(),
        }
    }

    pub fn with(mut self, unknown: &str, e: Expr) -> Self {
        self.parts.entry(unknown.to_string()).or_default().add_scaled(&e, &Rational::one());
        self
    }

    pub fn plus(&self, o: &AnsatzExpr) -> AnsatzExpr {
        let mut out = self.clone();
        out.constant.add_scaled(&o.constant, &Rational::one());
        for (u, e) in &o.parts {
            out.parts.entry(u.clone()).or_default().add_scaled(e, &Rational::one());
        }
        out
    }

    pub fn try_map<E>(&self, f: impl Fn(&Expr) -> Result<Expr, E>) -> Result<AnsatzExpr, E> {
        Ok(AnsatzExpr {
            constant: f(&self.constant)?,
            parts: self.parts.iter().map(|(u, e)| Ok((u.clone(), f(e)?))).collect::<Result<_, E>>()?,
        })
    }

    pub fn unknowns(&self) -> impl Iterator<Item = &String> {
        self.parts.keys()
    }

    /// Substitutes values; unknowns without a value are dropped.
    pub fn substitute(&self, values: &BTreeMap<String, Rational>) -> Expr {
        let mut out = self.constant.clone();
        for (u, e) in &self.parts {
            if let Some(v) = values.get(u) {
                out.add_scaled(e, v);
            }
        }
        out
    }
}

/// `Σ coeffs[u] · u = rhs`, with where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub coeffs: BTreeMap<String, Rational>,
    pub rhs: Rational,
    pub provenance: String,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (u, c) in &self.coeffs {
            let s = c.to_string();
            let (sign, mag) = match s.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", s),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if mag == "1" {
                write!(f, "{u}")?;
            } else {
                write!(f, "{mag} {u}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " = {}   [{}]", self.rhs, self.provenance)
    }
}

/// `constant + Σ coeffs[u] · u` over the free unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub constant: Rational,
    pub coeffs: BTreeMap<String, Rational>,
}

impl Affine {
    pub fn as_constant(&self) -> Option<&Rational> {
        self.coeffs.is_empty().then_some(&self.constant)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (u, c) in &self.coeffs {
            write!(f, " + ({}) {u}", c)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Consistent {
        values: BTreeMap<String, Affine>,
        free: Vec<String>,
    },
    /// `Σ λ_k · equation_k` has all coefficients zero and right side
    /// `residual ≠ 0`.
    Inconsistent {
        combination: Vec<(usize, Rational)>,
        residual: Rational,
    },
}

#[derive(Clone, Debug, Default)]
pub struct ConstraintSystem {
    pub unknowns: Vec<String>,
    pub equations: Vec<Equation>,
}

impl ConstraintSystem {
    pub fn new(unknowns: &[&str]) -> Self {
        ConstraintSystem {
            unknowns: unknowns.iter().map(|s| s.to_string()).collect(),
            equations: Vec::new(),
        }
    }

    pub fn push(&mut self, eq: Equation) {
        for u in eq.coeffs.keys() {
            if !self.unknowns.contains(u) {
                self.unknowns.push(u.clone());
            }
        }
        self.equations.push(eq);
    }

    /// One equation per monomial of `a` after normal form and reduction
    /// modulo the cyclic relations; returns how many were added.
    pub fn require_vanishing(&mut self, engine: &Engine, a: &AnsatzExpr, label: &str) -> usize {
        let canon = a.try_map(|e| Ok::<_, ()>(engine.canonicalize(e))).expect("infallible");
        let mut seeds: BTreeSet<_> = canon.constant.iter().map(|(m, _)| m.clone()).collect();
        for e in canon.parts.values() {
            seeds.extend(e.iter().map(|(m, _)| m.clone()));
        }
        let ech = relation_echelon(&relation_closure(engine, seeds.iter()));
        let reduced = canon.try_map(|e| Ok::<_, ()>(reduce_modulo(&ech, e))).expect("infallible");
        let mut keys: BTreeSet<_> = reduced.constant.iter().map(|(m, _)| m.clone()).collect();
        for e in reduced.parts.values() {
            keys.extend(e.iter().map(|(m, _)| m.clone()));
        }
        let mut added = 0;
        for m in keys {
            let coeffs: BTreeMap<String, Rational> = reduced
                .parts
                .iter()
                .map(|(u, e)| (u.clone(), e.coeff(&m)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let rhs = -reduced.constant.coeff(&m);
            let shown = to_text(&Expr::monomial(m.clone(), Rational::one()));
            self.push(Equation {
                coeffs,
                rhs,
                provenance: format!("{label}: coefficient of {shown}"),
            });
            added += 1;
        }
        added
    }

    /// Exact Gauss–Jordan elimination with the combination of original
    /// equations tracked for the inconsistency certificate.
    pub fn solve(&self) -> Solution {
        let cols = &self.unknowns;
        let idx = |u: &String| cols.iter().position(|c| c == u).expect("unknown registered");
        // row: (coefficients, rhs, combination of input equations)
        let mut rows: Vec<(Vec<Rational>, Rational, BTreeMap<usize, Rational>)> = self
            .equations
            .iter()
            .enumerate()
            .map(|(k, eq)| {
                let mut v = vec![Rational::zero(); cols.len()];
                for (u, c) in &eq.coeffs {
                    v[idx(u)] = c.clone();
                }
                (v, eq.rhs.clone(), [(k, Rational::one())].into_iter().collect())
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for c in 0..cols.len() {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r].0[c].recip();
            scale_row(&mut rows[r], &inv);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !row.0[c].is_zero() {
                    let f = -row.0[c].clone();
                    axpy_row(row, &f, &pivot_row);
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        if let Some(bad) = rows[r..].iter().find(|row| !row.1.is_zero()) {
            return Solution::Inconsistent {
                combination: bad.2.iter().map(|(k, v)| (*k, v.clone())).collect(),
                residual: bad.1.clone(),
            };
        }
        let pivot_cols: BTreeSet<usize> = pivots.iter().map(|p| p.1).collect();
        let free: Vec<String> = (0..cols.len()).filter(|c| !pivot_cols.contains(c)).map(|c| cols[c].clone()).collect();
        let mut values = BTreeMap::new();
        for &(row, c) in &pivots {
            let coeffs = free
                .iter()
                .map(|u| (u.clone(), -rows[row].0[idx(u)].clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            values.insert(
                cols[c].clone(),
                Affine {
                    constant: rows[row].1.clone(),
                    coeffs,
                },
            );
        }
        Solution::Consistent { values, free }
    }
}

/// Coefficients `c_k` with `fixed + Σ c_k terms[k] = target` (unknowns named
/// `c0, c1, …`).
pub fn refit(engine: &Engine, fixed: &Expr, terms: &[Expr], target: &Expr, label: &str) -> Solution {
    let names: Vec<String> = (0..terms.len()).map(|k| format!("c{k}")).collect();
    let a = names
        .iter()
        .zip(terms)
        .fold(AnsatzExpr::constant(fixed.minus(target)), |a, (u, t)| a.with(u, t.clone()));
    let mut sys = ConstraintSystem::new(&names.iter().map(String::as_str).collect::<Vec<_>>());
    sys.require_vanishing(engine, &a, label);
    sys.solve()
}

type Row = (Vec<Rational>, Rational, BTreeMap<usize, Rational>);

fn scale_row(row: &mut Row, s: &Rational) {
    for x in row.0.iter_mut() {
        *x *= s;
    }
    row.1 *= s;
    for v in row.2.values_mut() {
        *v *= s;
    }
}

fn axpy_row(row: &mut Row, a: &Rational, x: &Row) {
    for (y, xv) in row.0.iter_mut().zip(&x.0) {
        *y += a * xv;
    }
    row.1 += a * &x.1;
    for (k, v) in &x.2 {
        let e = row.2.entry(*k).or_insert_with(Rational::zero);
        *e += a * v;
        if e.is_zero() {
            row.2.remove(k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wforms_core::exact::int;

    fn eq(c: &[(&str, i64)], rhs: i64, p: &str) -> Equation {
        Equation {
            coeffs: c.iter().map(|(u, v)| (u.to_string(), int(*v))).collect(),
            rhs: int(rhs),
            provenance: p.into(),
        }
    }

    #[test]
    fn pins_and_frees() {
        let mut s = ConstraintSystem::new(&["A", "B", "C"]);
        s.push(eq(&[("A", 1), ("B", 1)], 3, "x"));
        s.push(eq(&[("A", 1), ("B", -1)], 1, "y"));
        let Solution::Consistent { values, free } = s.solve() else {
            panic!("consistent")
        };
        assert_eq!(values["A"].as_constant(), Some(&int(2)));
        assert_eq!(values["B"].as_constant(), Some(&int(1)));
        assert_eq!(free, vec!["C".to_string()]);
    }

    #[test]
    fn certifies_inconsistency() {
        let mut s = ConstraintSystem::new(&["A"]);
        s.push(eq(&[("A", 2)], 2, "x"));
        s.push(eq(&[("A", 1)], 3, "y"));
        let Solution::Inconsistent { combination, residual } = s.solve() else {
            panic!("inconsistent")
        };
        // the certificate combination really cancels every unknown
        let mut a = Rational::zero();
        let mut rhs = Rational::zero();
        for (k, l) in &combination {
            a += l * &s.equations[*k].coeffs["A"];
            rhs += l * &s.equations[*k].rhs;
        }
        assert!(a.is_zero());
        assert_eq!(rhs, residual);
        assert!(!residual.is_zero());
    }

    #[test]
    fn affine_in_free_unknowns() {
        let mut s = ConstraintSystem::new(&["B", "C"]);
        s.push(eq(&[("B", 1), ("C", 2)], -32, "x"));
        let Solution::Consistent { values, free } = s.solve() else {
            panic!()
        };
        assert_eq!(free, vec!["C".to_string()]);
        assert_eq!(values["B"].constant, int(-32));
        assert_eq!(values["B"].coeffs["C"], int(-2));
    }
}
