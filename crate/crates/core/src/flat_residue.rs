//! Flat-space residue forms `Ω_n(f,h) = Σ A_{a,b} ∂^a f ∂^b h dⁿx` as exact
//! coefficient tables, computed by two independent routes, plus the
//! expansion of invariant contraction patterns and flat integration by
//! parts.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, RwLock};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::calculus::{sigma_minus_n_product, trace_density, JetSymbol, JetTag, SymbolPart};
use crate::error::CoreError;
use crate::exact::{
    enumerate_splits, format_rational, int, parse_rational, MultiIndex, Rational, SlotConstraint,
};
use crate::exterior::{leading_symbol_f, trace_pair};
use crate::poly::{Exponent, Poly};
use crate::sphere::MomentCache;
use crate::symbol::RationalSymbol;

/// Which derivative the table multi-indices refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `∂_x^a`
    Partial,
    /// `D_x^a = (−i)^{|a|} ∂_x^a`
    #[serde(rename = "D")]
    D,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    pub n: usize,
    pub convention: Convention,
    entries: BTreeMap<(MultiIndex, MultiIndex), Rational>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    convention: Convention,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    a: Vec<u8>,
    b: Vec<u8>,
    c: String,
}

/// One differing key between two tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDiff {
    pub a: MultiIndex,
    pub b: MultiIndex,
    pub left: Rational,
    pub right: Rational,
}

impl CoefficientTable {
    pub fn new(n: usize, convention: Convention) -> Self {
        CoefficientTable {
            n,
            convention,
            entries: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, a: MultiIndex, b: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let v = self.entries.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.entries.remove(&key);
        }
    }

    pub fn get(&self, a: &MultiIndex, b: &MultiIndex) -> Rational {
        self.entries
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &Rational)> {
        self.entries.iter().map(|((a, b), c)| (a, b, c))
    }

    /// Every key has `|a|, |b| ≥ 1` and `|a| + |b| = n`.
    pub fn validate(&self) -> Result<(), CoreError> {
        for (a, b) in self.entries.keys() {
            if a.order() < 1 || b.order() < 1 || (a.order() + b.order()) as usize != self.n {
                return Err(CoreError::BadKey {
                    a: a.entries().to_vec(),
                    b: b.entries().to_vec(),
                    n: self.n,
                });
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .all(|((a, b), c)| &self.get(b, a) == c)
    }

    /// Converts between `∂` and `D` multi-indices: each entry picks up
    /// `(−1)^{(|a|+|b|)/2}`.
    pub fn to_convention(&self, convention: Convention) -> CoefficientTable {
        if convention == self.convention {
            return self.clone();
        }
        let mut out = CoefficientTable::new(self.n, convention);
        for ((a, b), c) in &self.entries {
            let total = a.order() + b.order();
            debug_assert!(total % 2 == 0);
            let c = if (total / 2) % 2 == 1 { -c.clone() } else { c.clone() };
            out.entries.insert((a.clone(), b.clone()), c);
        }
        out
    }

    pub fn scaled(&self, s: &Rational) -> CoefficientTable {
        let mut out = CoefficientTable::new(self.n, self.convention);
        for ((a, b), c) in &self.entries {
            out.add(a.clone(), b.clone(), c * s);
        }
        out
    }

    pub fn diff(&self, other: &CoefficientTable) -> Vec<TableDiff> {
        let other = other.to_convention(self.convention);
        let keys: std::collections::BTreeSet<_> =
            self.entries.keys().chain(other.entries.keys()).cloned().collect();
        keys.into_iter()
            .filter_map(|(a, b)| {
                let l = self.get(&a, &b);
                let r = other.get(&a, &b);
                (l != r).then_some(TableDiff { a, b, left: l, right: r })
            })
            .collect()
    }

    /// Pretty JSON with lexicographically ordered entries and `"p/q"`
    /// coefficients.
    pub fn to_json(&self) -> String {
        let doc = TableJson {
            n: self.n,
            convention: self.convention,
            entries: self
                .entries
                .iter()
                .map(|((a, b), c)| EntryJson {
                    a: a.entries().to_vec(),
                    b: b.entries().to_vec(),
                    c: format_rational(c),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<CoefficientTable, CoreError> {
        let doc: TableJson =
            serde_json::from_str(s).map_err(|e| CoreError::MalformedTable(e.to_string()))?;
        let mut t = CoefficientTable::new(doc.n, doc.convention);
        for e in doc.entries {
            if e.a.len() != doc.n || e.b.len() != doc.n {
                return Err(CoreError::MalformedTable("multi-index length".into()));
            }
            t.add(
                MultiIndex::from_slice(&e.a),
                MultiIndex::from_slice(&e.b),
                parse_rational(&e.c)?,
            );
        }
        t.validate()?;
        Ok(t)
    }

    /// Swaps the roles of f and h.
    pub fn swapped(&self) -> CoefficientTable {
        let mut out = CoefficientTable::new(self.n, self.convention);
        for ((a, b), c) in &self.entries {
            out.add(b.clone(), a.clone(), c.clone());
        }
        out
    }
}

/// Coefficients of the `D_x` expansion attached directly to `∂` monomials,
/// which is how the displayed invariant formulas for `Ω_6` read. For
/// `n ≡ 2 (mod 4)` this is the negative of the `∂`-convention table.
pub fn display_convention(t: &CoefficientTable) -> CoefficientTable {
    let mut d = t.to_convention(Convention::D);
    d.convention = Convention::Partial;
    d
}

/// Canonical representative of the orbit of `(γ, δ)` under simultaneous
/// coordinate permutations: columns `(γ_i, δ_i)` sorted descending.
fn orbit_key(g: &MultiIndex, d: &MultiIndex) -> (MultiIndex, MultiIndex) {
    let mut cols: SmallVec<[(u8, u8); 8]> = (0..g.dim()).map(|i| (g[i], d[i])).collect();
    cols.sort_unstable_by(|x, y| y.cmp(x));
    let g2: Vec<u8> = cols.iter().map(|c| c.0).collect();
    let d2: Vec<u8> = cols.iter().map(|c| c.1).collect();
    (MultiIndex::from_slice(&g2), MultiIndex::from_slice(&d2))
}

/// A reflection `ξ_i ↦ −ξ_i` shows the integrals vanish unless every
/// `γ_i + δ_i` is even.
fn parity_allows(g: &MultiIndex, d: &MultiIndex) -> bool {
    (0..g.dim()).all(|i| (g[i] + d[i]) % 2 == 0)
}

/// `M(γ, δ) = ∫ tr(∂^γ σ_L ∂^δ σ_L)` computed from the exterior-algebra
/// matrices: `σ_L = Σ_m s_m C_m` with scalar monomial symbols `s_m` and
/// constant matrices `C_m`, so that
/// `M = Σ_{m,m'} tr(C_m C_{m'}) ∫ ∂^γ s_m ∂^δ s_{m'}`.
struct SigmaTraceIntegrals {
    gram: Vec<Vec<Rational>>,
    parts: Vec<RationalSymbol>,
    moments: MomentCache,
    derivs: RwLock<HashMap<MultiIndex, Arc<DerivEntry>>>,
}

struct DerivEntry {
    symbols: Vec<RationalSymbol>,
    on_sphere: Vec<Poly>,
}

impl SigmaTraceIntegrals {
    fn new(n: usize) -> Result<Self, CoreError> {
        let sigma = leading_symbol_f(n)?;
        let exp = sigma.monomial_expansion();
        let gram = exp.trace_gram();
        let parts = (0..exp.parts.len()).map(|m| exp.scalar_part(m)).collect();
        Ok(SigmaTraceIntegrals {
            gram,
            parts,
            moments: MomentCache::new(n),
            derivs: RwLock::new(HashMap::new()),
        })
    }

    fn derivative(&self, g: &MultiIndex) -> Arc<DerivEntry> {
        if let Some(e) = self.derivs.read().unwrap().get(g) {
            return e.clone();
        }
        let symbols: Vec<RationalSymbol> = if g.is_zero() {
            self.parts.clone()
        } else {
            let i = (0..g.dim()).rev().find(|&i| g[i] > 0).unwrap();
            let mut parent = g.clone();
            parent[i] -= 1;
            let p = self.derivative(&parent);
            p.symbols.iter().map(|s| s.xi_derivative(i)).collect()
        };
        let on_sphere = symbols.iter().map(|s| s.on_sphere()).collect();
        let e = Arc::new(DerivEntry { symbols, on_sphere });
        self.derivs.write().unwrap().insert(g.clone(), e.clone());
        e
    }

    fn value(&self, g: &MultiIndex, d: &MultiIndex) -> Rational {
        if !parity_allows(g, d) {
            return Rational::zero();
        }
        let dg = self.derivative(g);
        let dd = self.derivative(d);
        let n = g.dim();
        let mut total = Poly::zero(n);
        for (m, pg) in dg.on_sphere.iter().enumerate() {
            if pg.is_zero() {
                continue;
            }
            let mut q = Poly::zero(n);
            for (m2, pd) in dd.on_sphere.iter().enumerate() {
                let c = &self.gram[m][m2];
                if !c.is_zero() && !pd.is_zero() {
                    q.add_assign_scaled(pd, c);
                }
            }
            if !q.is_zero() {
                total = total.add(&pg.mul(&q));
            }
        }
        self.moments.integrate_poly(&total)
    }
}

/// Integrates a scalar (traced) jet symbol over the sphere, producing the
/// table in the D convention. Every term must carry exactly one f-jet and
/// one h-jet.
pub fn integrate_density(js: &JetSymbol) -> Result<CoefficientTable, CoreError> {
    let n = js.n;
    let needs_sigma = js
        .terms
        .iter()
        .any(|t| matches!(t.part, SymbolPart::SigmaTrace { .. }));
    let mut values: HashMap<(MultiIndex, MultiIndex), Rational> = HashMap::new();
    if needs_sigma {
        let engine = SigmaTraceIntegrals::new(n)?;
        let keys: HashSet<(MultiIndex, MultiIndex)> = js
            .terms
            .iter()
            .filter_map(|t| match &t.part {
                SymbolPart::SigmaTrace { left, right } if parity_allows(left, right) => {
                    Some(orbit_key(left, right))
                }
                _ => None,
            })
            .collect();
        let mut keys: Vec<_> = keys.into_iter().collect();
        keys.sort();
        // warm the derivative cache level by level so threads share work
        let mut firsts: Vec<MultiIndex> = keys.iter().map(|k| k.0.clone()).collect();
        firsts.sort();
        firsts.dedup();
        firsts.par_iter().for_each(|g| {
            engine.derivative(g);
        });
        values = keys
            .par_iter()
            .map(|(g, d)| ((g.clone(), d.clone()), engine.value(g, d)))
            .collect();
    }
    let moments = MomentCache::new(n);
    let mut table = CoefficientTable::new(n, Convention::D);
    for t in &js.terms {
        let (Some(a), Some(b)) = (t.jet_index(JetTag::F), t.jet_index(JetTag::H)) else {
            return Err(CoreError::MalformedTable("term without an f-jet and an h-jet".into()));
        };
        let v = match &t.part {
            SymbolPart::Scalar(s) => moments.integrate_symbol(s),
            SymbolPart::SigmaTrace { left, right } => {
                if !parity_allows(left, right) {
                    continue;
                }
                values[&orbit_key(left, right)].clone()
            }
            _ => {
                return Err(CoreError::MalformedTable(
                    "matrix part must be traced before integration".into(),
                ));
            }
        };
        table.add(a.clone(), b.clone(), &t.coeff * v);
    }
    Ok(table)
}

/// `Ω_n` flat from the product-symbol sum, in the `∂` convention.
pub fn omega_flat_direct(n: usize) -> Result<CoefficientTable, CoreError> {
    check_dimension(n)?;
    let js = trace_density(&sigma_minus_n_product(n)?)?;
    let t = integrate_density(&js)?.to_convention(Convention::Partial);
    t.validate()?;
    Ok(t)
}

fn check_dimension(n: usize) -> Result<(), CoreError> {
    if n % 2 == 1 {
        return Err(CoreError::OddDimension(n));
    }
    if !(2..=8).contains(&n) {
        return Err(CoreError::UnsupportedDimension(n));
    }
    Ok(())
}

/// `N / (ρ_ξ^p ρ_η^q)` with numerator in `ξ (0..n), η (n..2n), ρ_ξ (2n),
/// ρ_η (2n+1)`.
#[derive(Clone, Debug)]
struct BiSymbol {
    n: usize,
    numer: Poly,
    poles: [u32; 2],
}

impl BiSymbol {
    /// Derivative in `ξ_i` (`block = 0`) or `η_i` (`block = 1`).
    fn derivative(&self, block: usize, i: usize) -> BiSymbol {
        let n = self.n;
        let nv = 2 * n + 2;
        let var = block * n + i;
        let rho = 2 * n + block;
        let p = self.poles[block];
        let x = Poly::var(nv, var);
        let inner = self
            .numer
            .derivative(var)
            .add(&x.mul(&self.numer.derivative(rho)).scale(&int(2)));
        let mut numer = Poly::var(nv, rho).mul(&inner);
        if p > 0 {
            numer = numer.sub(&x.mul(&self.numer).scale(&int(2 * p as i64)));
        }
        let mut poles = self.poles;
        poles[block] += 1;
        BiSymbol { n, numer, poles }
    }

    /// Restriction to `η = ξ`, `|ξ| = 1`.
    fn on_diagonal_sphere(&self) -> Poly {
        let n = self.n;
        let one = Rational::one();
        let p = self
            .numer
            .specialize(2 * n, &one)
            .specialize(2 * n + 1, &one);
        let map: Vec<usize> = (0..n).chain(0..n).chain([0, 0]).collect();
        p.remap(n, &map)
    }
}

/// `ψ(ξ,η) = a⟨ξ,η⟩²/(|ξ|²|η|²) + b` as a sum of bi-symbols.
fn psi_parts(n: usize, a: &Rational, b: &Rational) -> Vec<BiSymbol> {
    let nv = 2 * n + 2;
    let mut inner = Poly::zero(nv);
    for i in 0..n {
        inner = inner.add(&Poly::var(nv, i).mul(&Poly::var(nv, n + i)));
    }
    vec![
        BiSymbol {
            n,
            numer: inner.pow(2).scale(a),
            poles: [1, 1],
        },
        BiSymbol {
            n,
            numer: Poly::constant(nv, b.clone()),
            poles: [0, 0],
        },
    ]
}

struct PsiIntegrals {
    psi: Vec<BiSymbol>,
    moments: MomentCache,
    xi_derivs: RwLock<HashMap<MultiIndex, Arc<Vec<BiSymbol>>>>,
}

impl PsiIntegrals {
    fn xi_derivative(&self, beta: &MultiIndex) -> Arc<Vec<BiSymbol>> {
        if let Some(v) = self.xi_derivs.read().unwrap().get(beta) {
            return v.clone();
        }
        let v: Vec<BiSymbol> = if beta.is_zero() {
            self.psi.clone()
        } else {
            let i = (0..beta.dim()).rev().find(|&i| beta[i] > 0).unwrap();
            let mut parent = beta.clone();
            parent[i] -= 1;
            self.xi_derivative(&parent)
                .iter()
                .map(|s| s.derivative(0, i))
                .collect()
        };
        let v = Arc::new(v);
        self.xi_derivs.write().unwrap().insert(beta.clone(), v.clone());
        v
    }

    /// `∫ ∂^β_ξ ∂^δ_η ψ |_{η=ξ}`.
    fn value(&self, beta: &MultiIndex, delta: &MultiIndex) -> Rational {
        if !parity_allows(beta, delta) {
            return Rational::zero();
        }
        let base = self.xi_derivative(beta);
        let mut acc = Rational::zero();
        for part in base.iter() {
            let mut s = part.clone();
            for i in delta.to_index_list() {
                s = s.derivative(1, i);
                if s.numer.is_zero() {
                    break;
                }
            }
            if !s.numer.is_zero() {
                acc += self.moments.integrate_poly(&s.on_diagonal_sphere());
            }
        }
        acc
    }
}

/// `Ω_n` flat from the Taylor expansion of `ψ(ξ,η) = tr(σ(ξ)σ(η))`:
/// `Σ A_{a,b} u^a v^b = ∫ T'_nψ(ξ,ξ,u+v,v) − T'_nψ(ξ,ξ,v,v)`, in the `∂`
/// convention.
pub fn omega_flat_taylor(n: usize) -> Result<CoefficientTable, CoreError> {
    check_dimension(n)?;
    let (a, b) = trace_pair(n)?;
    omega_flat_taylor_with(n, &a, &b)
}

/// Taylor route for an arbitrary pair `(a, b)` in `ψ`.
pub fn omega_flat_taylor_with(
    n: usize,
    a: &Rational,
    b: &Rational,
) -> Result<CoefficientTable, CoreError> {
    let engine = PsiIntegrals {
        psi: psi_parts(n, a, b),
        moments: MomentCache::new(n),
        xi_derivs: RwLock::new(HashMap::new()),
    };
    let slots = [SlotConstraint::NONZERO, SlotConstraint::NONZERO];
    let pairs: Vec<Vec<MultiIndex>> = enumerate_splits(n as u32, n, &slots).collect();
    let mut keys: Vec<(MultiIndex, MultiIndex)> = pairs
        .iter()
        .filter(|p| parity_allows(&p[0], &p[1]))
        .map(|p| orbit_key(&p[0], &p[1]))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    keys.sort();
    let values: HashMap<(MultiIndex, MultiIndex), Rational> = keys
        .par_iter()
        .map(|(g, d)| ((g.clone(), d.clone()), engine.value(g, d)))
        .collect();

    // P(u,v) in 2n variables: u = 0..n, v = n..2n
    let nv = 2 * n;
    let mut shifted_powers: HashMap<MultiIndex, Poly> = HashMap::new();
    let mut p = Poly::zero(nv);
    for pair in &pairs {
        let (beta, delta) = (&pair[0], &pair[1]);
        if !parity_allows(beta, delta) {
            continue;
        }
        let val = &values[&orbit_key(beta, delta)];
        if val.is_zero() {
            continue;
        }
        let diff = shifted_powers.entry(beta.clone()).or_insert_with(|| {
            let mut uv = Poly::one(nv);
            let mut v_only = Poly::one(nv);
            for i in 0..n {
                let s = Poly::var(nv, i).add(&Poly::var(nv, n + i));
                uv = uv.mul(&s.pow(beta[i] as u32));
                v_only = v_only.mul(&Poly::var(nv, n + i).pow(beta[i] as u32));
            }
            uv.sub(&v_only)
        });
        let mut vd: Exponent = SmallVec::from_elem(0, nv);
        for i in 0..n {
            vd[n + i] = delta[i];
        }
        let scale = val / Rational::from_integer(beta.factorial() * delta.factorial());
        let term = diff.mul(&Poly::monomial(vd, scale));
        p = p.add(&term);
    }
    let mut table = CoefficientTable::new(n, Convention::D);
    for (e, c) in p.terms() {
        let a = MultiIndex::from_slice(&e[..n]);
        let b = MultiIndex::from_slice(&e[n..]);
        table.add(a, b, c.clone());
    }
    let t = table.to_convention(Convention::Partial);
    t.validate()?;
    Ok(t)
}

/// Named flat contraction patterns; `Δ = −Σ ∂_k²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// `⟨df, dh⟩`
    Inner,
    /// `Δf · Δh`
    LaplaceProduct,
    /// `⟨∇Δf, ∇Δh⟩`
    GradLaplace,
    /// `⟨∇df, ∇dh⟩`
    HessianInner,
    /// `⟨∇²df, ∇²dh⟩`
    ThirdInner,
    /// Explicit index words: `f_{;w_f} h_{;w_h}` with every letter appearing
    /// exactly twice overall (summed).
    Index { f: String, h: String },
}

impl Pattern {
    /// Parses `inner`, `laplace-product`, `grad-laplace`, `hessian-inner`,
    /// `third-inner` or `f_{ijj} h_{ikk}`-style index words.
    pub fn from_name(name: &str) -> Result<Pattern, CoreError> {
        let s = name.trim();
        match s {
            "inner" => return Ok(Pattern::Inner),
            "laplace-product" => return Ok(Pattern::LaplaceProduct),
            "grad-laplace" => return Ok(Pattern::GradLaplace),
            "hessian-inner" => return Ok(Pattern::HessianInner),
            "third-inner" => return Ok(Pattern::ThirdInner),
            _ => {}
        }
        let bad = || CoreError::UnknownPattern(name.to_string());
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(bad());
        }
        let word = |p: &str, head: &str| -> Option<String> {
            let inner = p.strip_prefix(head)?.strip_prefix("_{")?.strip_suffix('}')?;
            let w: String = inner.chars().filter(|c| *c != ';').collect();
            w.chars().all(|c| c.is_ascii_lowercase()).then_some(w)
        };
        let f = word(parts[0], "f").ok_or_else(bad)?;
        let h = word(parts[1], "h").ok_or_else(bad)?;
        let pat = Pattern::Index { f, h };
        pat.words().map_err(|_| bad())?;
        Ok(pat)
    }

    fn words(&self) -> Result<Vec<Word>, CoreError> {
        let (f, h) = match self {
            Pattern::Inner => ("i", "i"),
            Pattern::LaplaceProduct => ("ii", "jj"),
            Pattern::GradLaplace => ("ijj", "ikk"),
            Pattern::HessianInner => ("ij", "ij"),
            Pattern::ThirdInner => ("ijk", "ijk"),
            Pattern::Index { f, h } => (f.as_str(), h.as_str()),
        };
        let mut counts: BTreeMap<char, usize> = BTreeMap::new();
        for c in f.chars().chain(h.chars()) {
            *counts.entry(c).or_default() += 1;
        }
        if counts.values().any(|&k| k != 2) {
            return Err(CoreError::UnknownPattern(format!("f_{{{f}}} h_{{{h}}}")));
        }
        let labels: Vec<char> = counts.keys().copied().collect();
        let id = |c: char| labels.iter().position(|&x| x == c).unwrap() as u8;
        Ok(vec![Word {
            coeff: Rational::one(),
            f: f.chars().map(id).collect(),
            h: h.chars().map(id).collect(),
            labels: labels.len() as u8,
        }])
    }
}

/// `coeff · ∂_{f-word} f · ∂_{h-word} h`, labels summed over `0..n`.
#[derive(Clone, Debug)]
struct Word {
    coeff: Rational,
    f: Vec<u8>,
    h: Vec<u8>,
    labels: u8,
}

/// `Δ(F·H) = −Σ_k (F_{kk} H + 2 F_k H_k + F H_{kk})`.
fn laplacian_of_words(words: &[Word]) -> Vec<Word> {
    let mut out = Vec::with_capacity(words.len() * 3);
    for w in words {
        let k = w.labels;
        let mut a = w.clone();
        a.f.extend([k, k]);
        a.labels += 1;
        a.coeff = -w.coeff.clone();
        let mut b = w.clone();
        b.f.push(k);
        b.h.push(k);
        b.labels += 1;
        b.coeff = -w.coeff.clone() * int(2);
        let mut c = w.clone();
        c.h.extend([k, k]);
        c.labels += 1;
        c.coeff = -w.coeff.clone();
        out.extend([a, b, c]);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTerm {
    pub coeff: Rational,
    /// Number of outer Laplacians `Δ^p` applied to the product.
    pub laplacians: u32,
    pub pattern: Pattern,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantExpression {
    pub terms: Vec<InvariantTerm>,
}

impl InvariantExpression {
    pub fn term(mut self, coeff: Rational, laplacians: u32, pattern: Pattern) -> Self {
        self.terms.push(InvariantTerm {
            coeff,
            laplacians,
            pattern,
        });
        self
    }
}

/// Flat coordinate expansion in the `∂` convention.
pub fn expand_invariant(e: &InvariantExpression, n: usize) -> Result<CoefficientTable, CoreError> {
    let mut table = CoefficientTable::new(n, Convention::Partial);
    for t in &e.terms {
        let mut words = t.pattern.words()?;
        for _ in 0..t.laplacians {
            words = laplacian_of_words(&words);
        }
        for w in &words {
            let c = &w.coeff * &t.coeff;
            let mut assign = vec![0usize; w.labels as usize];
            loop {
                let mut a = MultiIndex::zero(n);
                let mut b = MultiIndex::zero(n);
                for &l in &w.f {
                    a[assign[l as usize]] += 1;
                }
                for &l in &w.h {
                    b[assign[l as usize]] += 1;
                }
                table.add(a, b, c.clone());
                // odometer over label assignments
                let mut pos = 0;
                while pos < assign.len() {
                    assign[pos] += 1;
                    if assign[pos] < n {
                        break;
                    }
                    assign[pos] = 0;
                    pos += 1;
                }
                if pos == assign.len() {
                    break;
                }
            }
        }
    }
    Ok(table)
}

/// The second display of the order-6 flat form:
/// `12Δ²⟨df,dh⟩ − 6Δ(ΔfΔh) − 12⟨∇Δf,∇Δh⟩ + 24Δ⟨∇df,∇dh⟩ + 16⟨∇²df,∇²dh⟩`.
pub fn omega6_flat_invariant() -> InvariantExpression {
    InvariantExpression::default()
        .term(int(12), 2, Pattern::Inner)
        .term(int(-6), 1, Pattern::LaplaceProduct)
        .term(int(-12), 0, Pattern::GradLaplace)
        .term(int(24), 1, Pattern::HessianInner)
        .term(int(16), 0, Pattern::ThirdInner)
}

/// The first (index) display of the order-6 flat form.
pub fn omega6_flat_index_form() -> InvariantExpression {
    let idx = |f: &str, h: &str| Pattern::Index {
        f: f.into(),
        h: h.into(),
    };
    InvariantExpression::default()
        .term(int(12), 0, idx("i", "ijjkk"))
        .term(int(12), 0, idx("ijjkk", "i"))
        .term(int(24), 0, idx("ij", "ijkk"))
        .term(int(24), 0, idx("ijkk", "ij"))
        .term(int(6), 0, idx("ii", "jjkk"))
        .term(int(6), 0, idx("iijj", "kk"))
        .term(int(24), 0, idx("ijj", "ikk"))
        .term(int(16), 0, idx("ijk", "ijk"))
}

/// Constant-coefficient operator `Σ_b c_b ∂^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTable {
    pub n: usize,
    entries: BTreeMap<MultiIndex, Rational>,
}

impl OperatorTable {
    pub fn new(n: usize) -> Self {
        OperatorTable {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, b: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let v = self.entries.entry(b.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.entries.remove(&b);
        }
    }

    pub fn get(&self, b: &MultiIndex) -> Rational {
        self.entries.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `λ` with `self = λ · other`, if it exists and `other ≠ 0`.
    pub fn proportionality(&self, other: &OperatorTable) -> Option<Rational> {
        let (k, v) = other.entries.iter().next()?;
        let lambda = self.get(k) / v;
        let keys: std::collections::BTreeSet<_> =
            self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter()
            .all(|k| self.get(k) == &lambda * other.get(k))
            .then_some(lambda)
    }

    /// `Δ^p = (−1)^p Σ_{|γ|=p} (p!/γ!) ∂^{2γ}`.
    pub fn laplacian_power(n: usize, p: u32) -> OperatorTable {
        let mut t = OperatorTable::new(n);
        let sign = if p % 2 == 1 { -Rational::one() } else { Rational::one() };
        let pf = crate::exact::factorial(p);
        for g in MultiIndex::all_of_order(n, p) {
            let two_g = &g + &g;
            let c = Rational::new(pf.clone(), g.factorial()) * &sign;
            t.add(two_g, c);
        }
        t
    }
}

/// Moves every derivative off `f` (`∫ ∂^a f · G = (−1)^{|a|} ∫ f ∂^a G`),
/// giving the operator `P` with `∫ Ω(f,h) = ∫ f P(h)`. Input must be in the
/// `∂` convention.
pub fn ibp_extract(t: &CoefficientTable) -> OperatorTable {
    let t = t.to_convention(Convention::Partial);
    let mut out = OperatorTable::new(t.n);
    for (a, b, c) in t.iter() {
        let sign = if a.order() % 2 == 1 { -c.clone() } else { c.clone() };
        out.add(a + b, sign);
    }
    out
}

/// Same extraction with the roles of f and h exchanged (derivatives moved
/// off `h`).
pub fn ibp_extract_on_f(t: &CoefficientTable) -> OperatorTable {
    ibp_extract(&t.swapped())
}

/// `|c|` of the largest table entry, handy for reports.
pub fn max_abs_entry(t: &CoefficientTable) -> Rational {
    t.iter()
        .map(|(_, _, c)| c.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
}
