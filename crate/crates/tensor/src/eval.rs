//! Component oracle: evaluates tensor expressions at the origin of a
//! coordinate chart from jets of the metric and the scalar functions.
//!
//! The metric must satisfy `g(0) = c·I`; each contracted pair then carries
//! `c^{-1}`. Everything else (Christoffel symbols, curvature, iterated
//! covariant derivatives) is computed from the jets with no shortcuts.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wforms_core::Rational;

use crate::canon::distinct_permutations;
use crate::error::TensorError;
use crate::jet::{Jet, JetSpace};
use crate::scalar::Scalar;
use crate::term::{free_labels, Expr, Factor, Head, Label, SymKind, FREE_BASE};

type Field<S> = Arc<Vec<Jet<S>>>;

pub struct Background<S: Scalar> {
    pub space: Arc<JetSpace>,
    pub n: usize,
    scale: S,
    scale_inv: S,
    g: Vec<Jet<S>>,
    gamma: Vec<Jet<S>>,
    funcs: HashMap<Head, Jet<S>>,
    base: HashMap<Head, Field<S>>,
    fields: Mutex<HashMap<(Head, usize), Field<S>>>,
    values: Mutex<HashMap<(Head, SymKind, usize), Arc<Vec<S>>>>,
}

fn mat_mul<S: Scalar>(a: &[Jet<S>], b: &[Jet<S>], n: usize, sp: &JetSpace) -> Vec<Jet<S>> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc: Option<Jet<S>> = None;
            for k in 0..n {
                let t = a[i * n + k].mul(&b[k * n + j], sp);
                acc = Some(match acc {
                    None => t,
                    Some(x) => x.add(&t),
                });
            }
            out.push(acc.unwrap());
        }
    }
    out
}

fn sum<S: Scalar>(terms: impl IntoIterator<Item = Jet<S>>) -> Jet<S> {
    let mut it = terms.into_iter();
    let first = it.next().expect("empty sum");
    it.fold(first, |a, b| a.add(&b))
}

impl<S: Scalar> Background<S> {
    /// `metric` is row-major `n × n`; `funcs` binds the scalar function heads.
    pub fn new(space: Arc<JetSpace>, metric: Vec<Jet<S>>, funcs: HashMap<Head, Jet<S>>) -> Result<Self, TensorError> {
        let n = space.dim;
        let sp = &*space;
        if metric.len() != n * n {
            return Err(TensorError::Malformed("metric must have n² entries".into()));
        }
        let scale = metric[0].value();
        for i in 0..n {
            for j in 0..n {
                let v = metric[i * n + j].value();
                let want = if i == j { scale.clone() } else { S::zero() };
                if v != want {
                    return Err(TensorError::Malformed("metric at the origin must be a multiple of the identity".into()));
                }
            }
        }
        let scale_inv = scale.inv();
        let deg = sp.degree;
        // g⁻¹ = c⁻¹ Σ (−H/c)^k with H = g − cI nilpotent in the jet ring
        let mut h = metric.clone();
        for i in 0..n {
            h[i * n + i] = h[i * n + i].sub(&Jet::constant(sp, deg, scale.clone()));
        }
        let step: Vec<Jet<S>> = h.iter().map(|x| x.scale(&(-scale_inv.clone()))).collect();
        let mut term: Vec<Jet<S>> = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    Jet::constant(sp, deg, scale_inv.clone())
                } else {
                    Jet::zero(sp, deg)
                }
            })
            .collect();
        let mut ginv = term.clone();
        for _ in 0..deg {
            term = mat_mul(&term, &step, n, sp);
            ginv = ginv.iter().zip(&term).map(|(a, b)| a.add(b)).collect();
        }
        let dg: Vec<Vec<Jet<S>>> = (0..n).map(|v| metric.iter().map(|x| x.deriv(v, sp)).collect()).collect();
        let half = S::from_i64(2).inv();
        let mut gamma = Vec::with_capacity(n * n * n);
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let g = sum((0..n).map(|l| {
                        let t = dg[i][l * n + j].add(&dg[j][l * n + i]).sub(&dg[l][i * n + j]);
                        ginv[m * n + l].mul(&t, sp)
                    }));
                    gamma.push(g.scale(&half));
                }
            }
        }
        let mut bg = Background {
            space: space.clone(),
            n,
            scale,
            scale_inv,
            g: metric,
            gamma,
            funcs,
            base: HashMap::new(),
            fields: Mutex::new(HashMap::new()),
            values: Mutex::new(HashMap::new()),
        };
        bg.curvature(&ginv);
        Ok(bg)
    }

    fn gam(&self, m: usize, i: usize, j: usize) -> &Jet<S> {
        &self.gamma[(m * self.n + i) * self.n + j]
    }

    fn curvature(&mut self, ginv: &[Jet<S>]) {
        let n = self.n;
        let sp = &*self.space;
        let idx4 = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
        // R^i_{jkl}
        let mut rup = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut r = self.gam(i, l, j).deriv(k, sp).sub(&self.gam(i, k, j).deriv(l, sp));
                        for m in 0..n {
                            r = r.add(&self.gam(i, k, m).mul(self.gam(m, l, j), sp));
                            r = r.sub(&self.gam(i, l, m).mul(self.gam(m, k, j), sp));
                        }
                        rup.push(r);
                    }
                }
            }
        }
        let mut riem = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        riem.push(sum((0..n).map(|m| self.g[i * n + m].mul(&rup[idx4(m, j, k, l)], sp))));
                    }
                }
            }
        }
        let mut rc = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                rc.push(sum((0..n).map(|k| rup[idx4(k, i, k, j)].clone())));
            }
        }
        let sc = sum((0..n * n).map(|k| ginv[k].mul(&rc[k], sp)));
        let nn = n as i64;
        let j = sc.scale(&S::from_i64(2 * (nn - 1)).inv());
        let inv_n2 = S::from_i64(nn - 2).inv();
        let v: Vec<Jet<S>> = (0..n * n)
            .map(|k| rc[k].sub(&j.mul(&self.g[k], sp)).scale(&inv_n2))
            .collect();
        let g = &self.g;
        let mut w = Vec::with_capacity(n.pow(4));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let t = riem[idx4(a, b, c, d)]
                            .add(&v[b * n + c].mul(&g[a * n + d], sp))
                            .sub(&v[b * n + d].mul(&g[a * n + c], sp))
                            .add(&v[a * n + d].mul(&g[b * n + c], sp))
                            .sub(&v[a * n + c].mul(&g[b * n + d], sp));
                        w.push(t);
                    }
                }
            }
        }
        self.base.insert(Head::R, Arc::new(riem));
        self.base.insert(Head::Rc, Arc::new(rc));
        self.base.insert(Head::Sc, Arc::new(vec![sc]));
        self.base.insert(Head::J, Arc::new(vec![j]));
        self.base.insert(Head::V, Arc::new(v));
        self.base.insert(Head::W, Arc::new(w));
        self.base.insert(Head::G, Arc::new(self.g.clone()));
    }

    pub fn scale(&self) -> &S {
        &self.scale
    }

    pub fn function(&self, h: Head) -> Option<&Jet<S>> {
        self.funcs.get(&h)
    }

    /// `∇^k` of a head, components ordered as `slots ++ derivs`.
    pub fn field(&self, head: Head, k: usize) -> Result<Field<S>, TensorError> {
        if let Some(f) = self.fields.lock().unwrap().get(&(head, k)) {
            return Ok(f.clone());
        }
        let f = if k == 0 {
            if head.is_function() {
                let j = self
                    .funcs
                    .get(&head)
                    .ok_or_else(|| TensorError::UnknownHead(format!("no jet bound for {}", head.name())))?;
                Arc::new(vec![j.clone()])
            } else {
                self.base[&head].clone()
            }
        } else if head == Head::G {
            let d = self.space.degree;
            Arc::new(vec![Jet::zero(&self.space, d); self.n.pow(2 + k as u32)])
        } else {
            let prev = self.field(head, k - 1)?;
            Arc::new(self.nabla(&prev, head.arity() + k - 1))
        };
        if f.iter().any(|j| j.coeffs.is_empty()) {
            return Err(TensorError::InsufficientJet {
                have: self.space.degree,
                need: self.space.degree + 1,
            });
        }
        self.fields.lock().unwrap().insert((head, k), f.clone());
        Ok(f)
    }

    fn nabla(&self, t: &[Jet<S>], rank: usize) -> Vec<Jet<S>> {
        let n = self.n;
        let sp = &*self.space;
        let mut out = Vec::with_capacity(t.len() * n);
        let mut digits = vec![0usize; rank];
        for (flat, comp) in t.iter().enumerate() {
            let mut x = flat;
            for s in (0..rank).rev() {
                digits[s] = x % n;
                x /= n;
            }
            for d in 0..n {
                let mut acc = comp.deriv(d, sp);
                for s in 0..rank {
                    let stride = n.pow((rank - 1 - s) as u32);
                    let base = flat - digits[s] * stride;
                    for m in 0..n {
                        let g = self.gam(m, d, digits[s]);
                        if g.coeffs.iter().all(|c| c.is_zero()) {
                            continue;
                        }
                        acc = acc.sub(&g.mul(&t[base + m * stride], sp));
                    }
                }
                out.push(acc);
            }
        }
        out
    }

    /// Values at the origin of a factor shape, symmetrized as requested.
    fn values(&self, head: Head, sym: SymKind, k: usize) -> Result<Arc<Vec<S>>, TensorError> {
        if let Some(v) = self.values.lock().unwrap().get(&(head, sym, k)) {
            return Ok(v.clone());
        }
        let field = self.field(head, k)?;
        let ordered: Vec<S> = field.iter().map(|j| j.value()).collect();
        let rank = head.arity() + k;
        let n = self.n;
        let out = match sym {
            SymKind::Ordered => ordered,
            _ => {
                let from = if sym == SymKind::All { 0 } else { head.arity() };
                let mut memo: HashMap<Vec<u16>, S> = HashMap::new();
                let mut out = Vec::with_capacity(ordered.len());
                for flat in 0..ordered.len() {
                    let mut digits = vec![0u16; rank];
                    let mut x = flat;
                    for s in (0..rank).rev() {
                        digits[s] = (x % n) as u16;
                        x /= n;
                    }
                    let mut key = digits.clone();
                    key[from..].sort_unstable();
                    if let Some(v) = memo.get(&key) {
                        out.push(v.clone());
                        continue;
                    }
                    let perms = distinct_permutations(&key[from..]);
                    let mut acc = S::zero();
                    for p in &perms {
                        let mut idx = 0usize;
                        for s in 0..rank {
                            let dgt = if s < from { key[s] } else { p[s - from] };
                            idx = idx * n + dgt as usize;
                        }
                        acc += ordered[idx].clone();
                    }
                    let v = acc * S::from_i64(perms.len() as i64).inv();
                    memo.insert(key, v.clone());
                    out.push(v);
                }
                out
            }
        };
        let out = Arc::new(out);
        self.values.lock().unwrap().insert((head, sym, k), out.clone());
        Ok(out)
    }

    fn factor_values(&self, f: &Factor) -> Result<Arc<Vec<S>>, TensorError> {
        self.values(f.head, f.sym, f.derivs.len())
    }

    /// Value of a scalar expression at the origin.
    pub fn evaluate(&self, e: &Expr) -> Result<S, TensorError> {
        for (m, _) in e.iter() {
            let free = free_labels(m);
            if !free.is_empty() {
                return Err(TensorError::NotScalar(free));
            }
        }
        self.evaluate_at(e, &BTreeMap::new())
    }

    /// Value of the component selected by `free` (label → coordinate).
    pub fn evaluate_at(&self, e: &Expr, free: &BTreeMap<Label, usize>) -> Result<S, TensorError> {
        let n = self.n;
        let mut total = S::zero();
        for (m, c) in e.iter() {
            let vals: Vec<Arc<Vec<S>>> = m.iter().map(|f| self.factor_values(f)).collect::<Result<_, _>>()?;
            let mut dummies: Vec<Label> = m.iter().flat_map(|f| f.labels()).filter(|&l| l < FREE_BASE).collect();
            dummies.sort_unstable();
            dummies.dedup();
            let pos = |l: Label| dummies.binary_search(&l).ok();
            // per factor: (dummy slot or fixed coordinate) for each index
            let plans: Vec<Vec<Result<usize, usize>>> = m
                .iter()
                .map(|f| {
                    f.labels()
                        .map(|l| match pos(l) {
                            Some(p) => Ok(Ok(p)),
                            None => free
                                .get(&l)
                                .copied()
                                .map(Err)
                                .ok_or_else(|| TensorError::NotScalar(vec![l])),
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?;
            let mut assign = vec![0usize; dummies.len()];
            let mut acc = S::zero();
            loop {
                let mut prod = S::one();
                for (plan, v) in plans.iter().zip(&vals) {
                    let mut idx = 0usize;
                    for p in plan {
                        idx = idx * n
                            + match p {
                                Ok(d) => assign[*d],
                                Err(x) => *x,
                            };
                    }
                    prod = prod * v[idx].clone();
                    if prod.is_zero() {
                        break;
                    }
                }
                acc += prod;
                // odometer
                let mut k = 0;
                while k < assign.len() {
                    assign[k] += 1;
                    if assign[k] < n {
                        break;
                    }
                    assign[k] = 0;
                    k += 1;
                }
                if k == assign.len() {
                    break;
                }
            }
            let mut w = S::from_rational(c);
            // one inverse metric c⁻¹δ per contracted pair
            for _ in 0..dummies.len() {
                w = w * self.scale_inv.clone();
            }
            total += w * acc;
        }
        Ok(total)
    }
}

/// Maps a rational jet into another coefficient field.
pub fn convert<S: Scalar>(j: &Jet<Rational>) -> Jet<S> {
    Jet {
        coeffs: j.coeffs.iter().map(S::from_rational).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    /// `g = I + H` with `H` a random symmetric polynomial matrix, `H(0) = 0`.
    Generic,
    /// `g = e^{2φ} I` with a random polynomial `φ`, `φ(0) = 0`.
    ConformallyFlat,
}

/// Random rational jets for a metric and scalar functions.
#[derive(Clone)]
pub struct RandomJets {
    pub space: Arc<JetSpace>,
    pub metric: Vec<Jet<Rational>>,
    pub funcs: HashMap<Head, Jet<Rational>>,
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-4..=4);
    let den: i64 = rng.gen_range(1..=3);
    Rational::new(num.into(), den.into())
}

pub fn random_poly(space: &JetSpace, degree: usize, rng: &mut ChaCha8Rng, constant: bool) -> Jet<Rational> {
    let mut j = Jet::<Rational>::zero(space, degree);
    for (i, c) in j.coeffs.iter_mut().enumerate() {
        if i == 0 && !constant {
            continue;
        }
        *c = small_rational(rng);
    }
    j
}

impl RandomJets {
    pub fn new(n: usize, degree: usize, kind: MetricKind, seed: u64) -> Self {
        let space = JetSpace::new(n, degree);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sp = &*space;
        let metric = match kind {
            MetricKind::Generic => {
                let mut m = vec![Jet::<Rational>::zero(sp, degree); n * n];
                for i in 0..n {
                    for j in i..n {
                        let mut h = random_poly(sp, degree, &mut rng, false);
                        if i == j {
                            h.coeffs[0] = Rational::from_integer(1.into());
                        }
                        m[i * n + j] = h.clone();
                        m[j * n + i] = h;
                    }
                }
                m
            }
            MetricKind::ConformallyFlat => {
                let phi = random_poly(sp, degree, &mut rng, false);
                let e = phi.scale(&Rational::from_integer(2.into())).exp(sp);
                let mut m = vec![Jet::<Rational>::zero(sp, degree); n * n];
                for i in 0..n {
                    m[i * n + i] = e.clone();
                }
                m
            }
        };
        let mut funcs = HashMap::new();
        for h in Head::ALL.iter().filter(|h| h.is_function()) {
            funcs.insert(*h, random_poly(sp, degree, &mut rng, true));
        }
        RandomJets { space, metric, funcs }
    }

    pub fn background<S: Scalar>(&self) -> Background<S> {
        let metric = self.metric.iter().map(convert).collect();
        let funcs = self.funcs.iter().map(|(h, j)| (*h, convert(j))).collect();
        Background::new(self.space.clone(), metric, funcs).expect("random metric is diagonal at the origin")
    }
}

/// Evaluates `e` on a background built from `jets`.
pub fn evaluate_components<S: Scalar>(e: &Expr, jets: &RandomJets) -> Result<S, TensorError> {
    jets.background::<S>().evaluate(e)
}
