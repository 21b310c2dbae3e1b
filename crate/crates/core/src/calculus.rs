//! Symbols of commutators `[F, f]` and of the product `[F,f][F,h]` with
//! formal jet coefficients `D_x^a f`, `D_x^b h` (`D = −i∂`).
//!
//! Only the flat tower is available: `σ^F_{-j} = 0` for `j ≥ 1` and the
//! leading symbol is x-independent, so every `D_x` acting on a symbol
//! vanishes.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::CoreError;
use crate::exact::{enumerate_splits, MultiIndex, Rational, SlotConstraint};
use crate::exterior::leading_symbol_f;
use crate::symbol::{MatrixSymbol, RationalSymbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JetTag {
    F,
    H,
}

/// `D_x^index` applied to the function named by `tag`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetMonomial {
    pub tag: JetTag,
    pub index: MultiIndex,
}

#[derive(Clone, Debug)]
pub enum SymbolPart {
    Scalar(RationalSymbol),
    Matrix(MatrixSymbol),
    /// `∂^left σ_L · ∂^right σ_L`, kept unexpanded.
    SigmaProduct { left: MultiIndex, right: MultiIndex },
    /// `tr(∂^left σ_L · ∂^right σ_L)`, kept unexpanded.
    SigmaTrace { left: MultiIndex, right: MultiIndex },
}

impl SymbolPart {
    pub fn homogeneity(&self) -> i32 {
        match self {
            SymbolPart::Scalar(s) => s.homogeneity(),
            SymbolPart::Matrix(m) => m.homogeneity(),
            SymbolPart::SigmaProduct { left, right } | SymbolPart::SigmaTrace { left, right } => {
                -((left.order() + right.order()) as i32)
            }
        }
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self, SymbolPart::Matrix(_) | SymbolPart::SigmaProduct { .. })
    }
}

#[derive(Clone, Debug)]
pub struct JetTerm {
    pub coeff: Rational,
    pub jets: Vec<JetMonomial>,
    pub part: SymbolPart,
}

impl JetTerm {
    /// `(|a|, |b|)`: total jet order on f and on h.
    pub fn bidegree(&self) -> (u32, u32) {
        let mut d = (0, 0);
        for j in &self.jets {
            match j.tag {
                JetTag::F => d.0 += j.index.order(),
                JetTag::H => d.1 += j.index.order(),
            }
        }
        d
    }

    pub fn jet_index(&self, tag: JetTag) -> Option<&MultiIndex> {
        self.jets.iter().find(|j| j.tag == tag).map(|j| &j.index)
    }
}

#[derive(Clone, Debug)]
pub struct JetSymbol {
    pub n: usize,
    pub terms: Vec<JetTerm>,
}

impl JetSymbol {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Replaces lazy σ-products by explicit matrices (or traces by explicit
    /// scalars). Only practical for small `n`.
    pub fn materialize(&self) -> Result<JetSymbol, CoreError> {
        let sigma = leading_symbol_f(self.n)?;
        let mut cache: std::collections::HashMap<MultiIndex, MatrixSymbol> = Default::default();
        let mut deriv = |a: &MultiIndex| -> MatrixSymbol {
            cache
                .entry(a.clone())
                .or_insert_with(|| sigma.derivative_multi(a))
                .clone()
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let part = match &t.part {
                SymbolPart::SigmaProduct { left, right } => {
                    SymbolPart::Matrix(deriv(left).mul(&deriv(right)))
                }
                SymbolPart::SigmaTrace { left, right } => {
                    SymbolPart::Scalar(deriv(left).mul(&deriv(right)).trace()?)
                }
                other => other.clone(),
            };
            terms.push(JetTerm {
                coeff: t.coeff.clone(),
                jets: t.jets.clone(),
                part,
            });
        }
        Ok(JetSymbol { n: self.n, terms })
    }
}

fn inverse_factorial(alpha: &MultiIndex) -> Rational {
    Rational::new(BigInt::one(), alpha.factorial())
}

/// `σ_{-k}([S,f]) = Σ_{1≤|β|≤k} (1/β!) D^β(f) ∂_ξ^β σ^S_{-(k-|β|)}` for an
/// x-independent tower `tower[j] = σ^S_{-j}` (missing entries are zero).
pub fn commutator_sigma_with_tower(
    k: u32,
    n: usize,
    tower: &[Option<MatrixSymbol>],
) -> Result<JetSymbol, CoreError> {
    if k < 1 {
        return Err(CoreError::OrderTooSmall(k));
    }
    let mut terms = Vec::new();
    for order in 1..=k {
        let j = (k - order) as usize;
        let Some(Some(source)) = tower.get(j) else {
            continue;
        };
        for beta in MultiIndex::all_of_order(n, order) {
            terms.push(JetTerm {
                coeff: inverse_factorial(&beta),
                jets: vec![JetMonomial {
                    tag: JetTag::F,
                    index: beta.clone(),
                }],
                part: SymbolPart::Matrix(source.derivative_multi(&beta)),
            });
        }
    }
    Ok(JetSymbol { n, terms })
}

/// Order `−k` part of `σ([F, f])` in the flat case, where only the leading
/// symbol is nonzero and the sum collapses to `|β| = k`.
pub fn commutator_sigma(k: u32, n: usize) -> Result<JetSymbol, CoreError> {
    let sigma = leading_symbol_f(n)?;
    commutator_sigma_with_tower(k, n, &[Some(sigma)])
}

/// Flat `σ_{-n}([F,f][F,h]) = Σ (1/α!β!δ!) D^β f · D^{α+δ} h ·
/// ∂^{α+β} σ_L · ∂^δ σ_L` over `|α|+|β|+|δ| = n`, `|β|, |δ| ≥ 1`.
/// Terms come in the enumeration order of `(α, β, δ)`; symbol parts are lazy.
pub fn sigma_minus_n_product(n: usize) -> Result<JetSymbol, CoreError> {
    if n % 2 == 1 {
        return Err(CoreError::OddDimension(n));
    }
    let slots = [
        SlotConstraint::FREE,
        SlotConstraint::NONZERO,
        SlotConstraint::NONZERO,
    ];
    let terms = enumerate_splits(n as u32, n, &slots)
        .map(|parts| {
            let (alpha, beta, delta) = (&parts[0], &parts[1], &parts[2]);
            let coeff = inverse_factorial(alpha) * inverse_factorial(beta) * inverse_factorial(delta);
            JetTerm {
                coeff,
                jets: vec![
                    JetMonomial {
                        tag: JetTag::F,
                        index: beta.clone(),
                    },
                    JetMonomial {
                        tag: JetTag::H,
                        index: alpha + delta,
                    },
                ],
                part: SymbolPart::SigmaProduct {
                    left: alpha + beta,
                    right: delta.clone(),
                },
            }
        })
        .collect();
    Ok(JetSymbol { n, terms })
}

/// Matrix trace of every term's symbol part.
pub fn trace_density(js: &JetSymbol) -> Result<JetSymbol, CoreError> {
    let mut terms = Vec::with_capacity(js.terms.len());
    for t in &js.terms {
        let part = match &t.part {
            SymbolPart::Matrix(m) => SymbolPart::Scalar(m.trace()?),
            SymbolPart::SigmaProduct { left, right } => SymbolPart::SigmaTrace {
                left: left.clone(),
                right: right.clone(),
            },
            other => other.clone(),
        };
        terms.push(JetTerm {
            coeff: t.coeff.clone(),
            jets: t.jets.clone(),
            part,
        });
    }
    Ok(JetSymbol { n: js.n, terms })
}

/// Collects scalar terms with identical jets: returns, per jet list, the
/// summed scalar symbol. Requires every part to be `Scalar`.
pub fn collect_scalar(js: &JetSymbol) -> std::collections::BTreeMap<Vec<JetMonomial>, RationalSymbol> {
    let mut out: std::collections::BTreeMap<Vec<JetMonomial>, RationalSymbol> = Default::default();
    for t in &js.terms {
        let SymbolPart::Scalar(s) = &t.part else {
            panic!("collect_scalar needs scalar parts");
        };
        let s = s.scale(&t.coeff);
        let mut key = t.jets.clone();
        key.sort();
        match out.get_mut(&key) {
            Some(acc) => *acc = acc.add(&s),
            None => {
                out.insert(key, s);
            }
        }
    }
    out.retain(|_, s| !s.is_zero());
    out
}
