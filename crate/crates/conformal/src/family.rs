//! The order-six family: conformally flat form plus Weyl terms, the linear
//! conditions on their constants, and the checks a member must pass.

use std::collections::BTreeMap;

use wforms_core::exact::int;
use wforms_core::Rational;
use wforms_tensor::filtration::homogeneity;
use wforms_tensor::{check_zero, Engine, Expr, Head, Mode, Status};

use crate::catalogue;
use crate::error::ConformalError;
use crate::hochschild::{hochschild_coboundary, rename_arguments};
use crate::solve::{AnsatzExpr, ConstraintSystem, Equation, Solution};
use crate::variation::{conformal_variation, eta_euler_lagrange};

/// Unknowns in the order they are reported.
pub const UNKNOWNS: [&str; 6] = ["A", "B", "C", "D", "E", "G"];

/// `Ω_{6,cf} + Σ_u u · term_u` over the Weyl ansatz.
pub fn ansatz() -> AnsatzExpr {
    catalogue::ANSATZ.iter().fold(AnsatzExpr::constant(catalogue::omega6_confflat()), |a, (u, _)| {
        a.with(u, catalogue::ansatz_term(u).expect("catalogue name"))
    })
}

/// Variation and cocycle equations for the ansatz, variation first.
pub fn constraint_system(engine: &Engine) -> Result<ConstraintSystem, ConformalError> {
    let a = ansatz();
    let (var, cob) = rayon::join(
        || a.try_map(|e| conformal_variation(engine, e)),
        || a.try_map(|e| hochschild_coboundary(engine, e)),
    );
    let mut sys = ConstraintSystem::new(&UNKNOWNS);
    sys.require_vanishing(engine, &var?, "conformal variation");
    sys.require_vanishing(engine, &cob?, "cocycle");
    Ok(sys)
}

pub fn solve_constants(sys: &ConstraintSystem) -> Solution {
    sys.solve()
}

/// The published conditions on `A … D`, as printed.
pub fn published_conditions() -> ConstraintSystem {
    let eq = |c: &[(&str, i64)], rhs: i64, p: &str| Equation {
        coeffs: c.iter().map(|(u, v)| (u.to_string(), int(*v))).collect(),
        rhs: int(rhs),
        provenance: p.into(),
    };
    let mut s = ConstraintSystem::new(&UNKNOWNS);
    s.push(eq(&[("B", 1), ("C", 2)], -32, "conformal variation"));
    s.push(eq(&[("B", 3), ("A", -2)], -32, "conformal variation"));
    s.push(eq(&[("D", 1), ("C", -3)], 0, "conformal variation"));
    s.push(eq(&[("B", 3)], 96, "cocycle"));
    s.push(eq(&[("A", 2)], 128, "cocycle"));
    s
}

/// Values of `A … D` from a solution that pins them.
pub fn pinned_constants(sol: &Solution) -> Result<BTreeMap<String, Rational>, ConformalError> {
    let Solution::Consistent { values, .. } = sol else {
        return Err(ConformalError::Unsupported("inconsistent constraint system".into()));
    };
    UNKNOWNS[..4]
        .iter()
        .map(|u| {
            let v = values
                .get(*u)
                .and_then(|a| a.as_constant())
                .ok_or_else(|| ConformalError::Unsupported(format!("{u} is not determined")))?;
            Ok((u.to_string(), v.clone()))
        })
        .collect()
}

pub fn published_constants() -> BTreeMap<String, Rational> {
    catalogue::PUBLISHED_CONSTANTS.iter().map(|(u, v)| (u.to_string(), int(*v))).collect()
}

/// `Ω_{6,cf} + A·… + D·… + E·… + G·…` with `A … D` from `constants`.
pub fn assemble_family_with(constants: &BTreeMap<String, Rational>, e: &Rational, g: &Rational) -> Expr {
    let mut values = constants.clone();
    values.insert("E".into(), e.clone());
    values.insert("G".into(), g.clone());
    ansatz().substitute(&values)
}

/// The family with the constants forced by the variation and cocycle
/// conditions, solved in dimension six.
pub fn assemble_family(e: &Rational, g: &Rational) -> Result<Expr, ConformalError> {
    let engine = Engine::new(6, Mode::General);
    let constants = pinned_constants(&constraint_system(&engine)?.solve())?;
    Ok(assemble_family_with(&constants, e, g))
}

/// Results of the member checks.
#[derive(Clone, Debug)]
pub struct FamilyCheck {
    pub variation: Status,
    /// Euler–Lagrange form of the variation in `η`: vanishes iff the
    /// integrated variation does.
    pub integrated_variation: Status,
    pub coboundary: Status,
    pub symmetry: Status,
    pub homogeneity: Option<usize>,
}

impl FamilyCheck {
    pub fn holds(&self) -> bool {
        self.variation.holds() && self.coboundary.holds() && self.symmetry.holds() && self.homogeneity == Some(6)
    }
}

pub fn check_family(engine: &Engine, omega: &Expr) -> Result<FamilyCheck, ConformalError> {
    let ((var, cob), sym) = rayon::join(
        || rayon::join(|| conformal_variation(engine, omega), || hochschild_coboundary(engine, omega)),
        || {
            let swapped = rename_arguments(omega, Head::H, Head::F);
            check_zero(engine, &omega.minus(&swapped))
        },
    );
    let var = var?;
    let integrated = check_zero(engine, &eta_euler_lagrange(&var)?);
    Ok(FamilyCheck {
        variation: check_zero(engine, &var),
        integrated_variation: integrated,
        coboundary: check_zero(engine, &cob?),
        symmetry: sym,
        homogeneity: homogeneity(omega),
    })
}
