//! Tensor monomials in abstract-index notation.
//!
//! Every index is stored lowered; the metric is absorbed, so variance only
//! matters when printing. A label below [`FREE_BASE`] is a dummy and must
//! occur exactly twice in its monomial; labels at or above it are free.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use smallvec::SmallVec;
use wforms_core::Rational;

pub type Label = u16;

/// Labels `>= FREE_BASE` are free indices.
pub const FREE_BASE: Label = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    F,
    H,
    Eta,
    F0,
    F1,
    F2,
    F3,
    G,
    W,
    V,
    J,
    R,
    Rc,
    Sc,
}

impl Head {
    pub const ALL: [Head; 14] = [
        Head::F,
        Head::H,
        Head::Eta,
        Head::F0,
        Head::F1,
        Head::F2,
        Head::F3,
        Head::G,
        Head::W,
        Head::V,
        Head::J,
        Head::R,
        Head::Rc,
        Head::Sc,
    ];

    pub fn arity(self) -> usize {
        match self {
            Head::W | Head::R => 4,
            Head::V | Head::Rc | Head::G => 2,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Head::F => "f",
            Head::H => "h",
            Head::Eta => "eta",
            Head::F0 => "f0",
            Head::F1 => "f1",
            Head::F2 => "f2",
            Head::F3 => "f3",
            Head::G => "g",
            Head::W => "W",
            Head::V => "V",
            Head::J => "J",
            Head::R => "R",
            Head::Rc => "Rc",
            Head::Sc => "Sc",
        }
    }

    pub fn from_name(s: &str) -> Option<Head> {
        Head::ALL.iter().copied().find(|h| h.name() == s)
    }

    /// Scalar functions that carry no curvature: f, h, η, f₀…f₃.
    pub fn is_function(self) -> bool {
        matches!(
            self,
            Head::F | Head::H | Head::Eta | Head::F0 | Head::F1 | Head::F2 | Head::F3
        )
    }

    /// Counted as an occurrence of `R` by the filtration.
    pub fn is_curvature(self) -> bool {
        matches!(self, Head::W | Head::V | Head::J | Head::R | Head::Rc | Head::Sc)
    }
}

/// Which slots of a factor are symmetrized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymKind {
    /// Derivatives applied in the stored order: `slots[0]` first.
    Ordered,
    /// Derivative slots symmetrized.
    Derivs,
    /// Index and derivative slots symmetrized together (only meaningful for
    /// `V` on conformally flat metrics, where `∇V` is totally symmetric).
    All,
}

/// `head_{slots ; derivs}`; `derivs[0]` is applied first, so
/// `f_{;ij}` is `∇_j ∇_i f`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub head: Head,
    pub sym: SymKind,
    pub slots: SmallVec<[Label; 4]>,
    pub derivs: SmallVec<[Label; 6]>,
}

impl Factor {
    pub fn new(head: Head, slots: &[Label], derivs: &[Label]) -> Self {
        debug_assert_eq!(slots.len(), head.arity());
        Factor {
            head,
            sym: SymKind::Ordered,
            slots: slots.iter().copied().collect(),
            derivs: derivs.iter().copied().collect(),
        }
    }

    pub fn scalar(head: Head) -> Self {
        Factor::new(head, &[], &[])
    }

    pub fn with_sym(mut self, sym: SymKind) -> Self {
        self.sym = if self.permutable_len() < 2 { SymKind::Ordered } else { sym };
        self
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.slots.iter().chain(self.derivs.iter()).copied()
    }

    pub fn rank(&self) -> usize {
        self.slots.len() + self.derivs.len()
    }

    /// Number of slots a symmetrization would act on.
    pub fn permutable_len(&self) -> usize {
        match self.sym {
            SymKind::All => self.rank(),
            _ => self.derivs.len(),
        }
    }

    /// Index at position `k` of the concatenated `slots ++ derivs` list.
    pub fn index_at(&self, k: usize) -> Label {
        if k < self.slots.len() {
            self.slots[k]
        } else {
            self.derivs[k - self.slots.len()]
        }
    }

    pub fn set_index_at(&mut self, k: usize, l: Label) {
        if k < self.slots.len() {
            self.slots[k] = l;
        } else {
            let s = self.slots.len();
            self.derivs[k - s] = l;
        }
    }

    pub fn push_deriv(&self, d: Label) -> Factor {
        let mut f = self.clone();
        f.derivs.push(d);
        f
    }

    pub fn relabel(&mut self, map: &impl Fn(Label) -> Label) {
        for l in self.slots.iter_mut().chain(self.derivs.iter_mut()) {
            *l = map(*l);
        }
    }
}

pub type Monomial = Vec<Factor>;

pub fn max_dummy(m: &[Factor]) -> Option<Label> {
    m.iter().flat_map(|f| f.labels()).filter(|&l| l < FREE_BASE).max()
}

/// First dummy label not used in `m`.
pub fn fresh_label(m: &[Factor]) -> Label {
    max_dummy(m).map_or(0, |l| l + 1)
}

/// Labels occurring exactly once, sorted.
pub fn free_labels(m: &[Factor]) -> Vec<Label> {
    let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
    for l in m.iter().flat_map(|f| f.labels()) {
        *counts.entry(l).or_default() += 1;
    }
    counts.into_iter().filter(|&(_, c)| c == 1).map(|(l, _)| l).collect()
}

/// Checks slot counts and the dummy/free label discipline.
pub fn check_monomial(m: &[Factor]) -> Result<(), String> {
    let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
    for f in m {
        if f.slots.len() != f.head.arity() {
            return Err(format!(
                "{} expects {} index slots, found {}",
                f.head.name(),
                f.head.arity(),
                f.slots.len()
            ));
        }
        for l in f.labels() {
            *counts.entry(l).or_default() += 1;
        }
    }
    for (l, c) in counts {
        match (l < FREE_BASE, c) {
            (true, 2) | (false, 1) => {}
            (true, _) => return Err(format!("dummy label {l} occurs {c} times")),
            (false, _) => return Err(format!("free label {l} occurs {c} times")),
        }
    }
    Ok(())
}

/// Finite linear combination of monomials with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut e = Expr::zero();
        e.add_term(m, c);
        e
    }

    pub fn scalar(c: Rational) -> Self {
        Expr::monomial(Vec::new(), c)
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

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Expr, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn plus(&self, other: &Expr) -> Expr {
        let mut e = self.clone();
        e.add_scaled(other, &Rational::one());
        e
    }

    pub fn minus(&self, other: &Expr) -> Expr {
        let mut e = self.clone();
        e.add_scaled(other, &-Rational::one());
        e
    }

    pub fn scaled(&self, c: &Rational) -> Expr {
        let mut e = Expr::zero();
        e.add_scaled(self, c);
        e
    }

    /// Product of two expressions; dummies of `other` are shifted past
    /// those of `self` term by term. Free labels are left alone, so shared
    /// free labels become contractions only if the caller arranged it.
    pub fn times(&self, other: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (a, ca) in &self.terms {
            let shift = fresh_label(a);
            for (b, cb) in &other.terms {
                let mut m = a.clone();
                for f in b {
                    let mut f = f.clone();
                    f.relabel(&|l| if l < FREE_BASE { l + shift } else { l });
                    m.push(f);
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Expr) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            out.add_scaled(&f(m), c);
        }
        out
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }
}

impl FromIterator<(Monomial, Rational)> for Expr {
    fn from_iter<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut e = Expr::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::to_text(self))
    }
}
