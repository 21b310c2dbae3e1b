//! Verification suites.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use num_traits::Zero;
use rayon::prelude::*;
use wforms_conformal::catalogue;
use wforms_conformal::family::{
    assemble_family_with, check_family, constraint_system, pinned_constants, published_constants, UNKNOWNS,
};
use wforms_conformal::{
    conformal_variation, grow_flat, hochschild_coboundary, refit, search_variants, weyl_candidates, Solution,
    VariantMatch,
};
use wforms_core::exact::int;
use wforms_core::exterior::{trace_pair, trace_pair_binomial};
use wforms_core::flat_residue::{display_convention, omega_flat_direct, omega_flat_taylor};
use wforms_core::Rational;
use wforms_tensor::filtration::homogeneity;
use wforms_tensor::{check_zero, parse_expr, to_text, Engine, Expr, Mode, Status};

use crate::config::RunConfig;
use crate::report::{CheckReport, SuiteReport};

pub const SUITES: [&str; 8] = [
    "trace-constants",
    "flat-routes",
    "grow6",
    "variation6",
    "cocycle6",
    "family",
    "filtration",
    "difference-term",
];

/// Which constants `A … D` the family suite assembles with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constants {
    /// Solved from the variation and cocycle conditions.
    Solved,
    Published,
}

pub fn run_suite(name: &str, cfg: &RunConfig, constants: Constants) -> Result<SuiteReport> {
    let checks = match name {
        "trace-constants" => trace_constants()?,
        "flat-routes" => flat_routes(cfg.n)?,
        "grow6" => grow6()?,
        "variation6" => variation6()?,
        "cocycle6" => cocycle6()?,
        "family" => family(cfg, constants)?,
        "filtration" => filtration()?,
        "difference-term" => difference_term()?,
        other => bail!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")),
    };
    Ok(SuiteReport {
        suite: name.into(),
        checks,
    })
}

fn general() -> Engine {
    Engine::new(6, Mode::General)
}

fn confflat() -> Engine {
    Engine::new(6, Mode::ConformallyFlat)
}

fn trace_constants() -> Result<Vec<CheckReport>> {
    [2, 4, 6, 8]
        .par_iter()
        .map(|&n| {
            let (a, b) = trace_pair(n)?;
            let (fa, fb) = trace_pair_binomial(n);
            Ok(CheckReport::boolean(
                &format!("trace pair n={n}"),
                a == fa && b == fb,
                format!("matrices ({a}, {b}); binomial formula ({fa}, {fb})"),
            ))
        })
        .collect()
}

fn flat_routes(n: usize) -> Result<Vec<CheckReport>> {
    let (d, t) = rayon::join(|| omega_flat_direct(n), || omega_flat_taylor(n));
    let (d, t) = (d?, t?);
    let diff = d.diff(&t);
    Ok(vec![CheckReport::boolean(
        &format!("direct and Taylor routes n={n}"),
        diff.is_empty(),
        format!("{} entries, {} differing", d.len(), diff.len()),
    )])
}

pub fn grown_omega6() -> Result<Expr> {
    Ok(grow_flat(&display_convention(&omega_flat_direct(6)?))?)
}

fn grow6() -> Result<Vec<CheckReport>> {
    let grown = grown_omega6()?;
    let display = catalogue::omega6_confflat();
    Ok(vec![
        CheckReport::from_status("grown form against the conformally flat display", &check_zero(&confflat(), &grown.minus(&display)))
            .note(format!("misprinted Hessian term read as {}", catalogue::HESSIAN_V_REPAIRED)),
        CheckReport::boolean("grown form is η-free and of weight 6", homogeneity(&grown) == Some(6), format!("{} terms", grown.len())),
    ])
}

fn variant_notes(r: CheckReport, found: &[VariantMatch]) -> CheckReport {
    if !r.holds() && found.is_empty() {
        return r.note("no reading with permuted curvature slots (up to two terms) closes the identity");
    }
    found.iter().fold(r, |r, m| {
        let changes: Vec<String> = m
            .changes
            .iter()
            .map(|c| format!("{} -> {}", c.printed, c.replacement))
            .collect();
        r.note(format!("exact with: {}", changes.join("; ")))
    })
}

/// Coefficients of `e` in `structures`, if it lies in their span.
fn structure_coefficients(engine: &Engine, e: &Expr, structures: &[Expr]) -> Option<Vec<Rational>> {
    match refit(engine, &Expr::zero(), structures, e, "fit") {
        Solution::Consistent { values, .. } => (0..structures.len())
            .map(|k| values.get(&format!("c{k}")).map_or(Some(Rational::zero()), |a| a.as_constant().cloned()))
            .collect(),
        Solution::Inconsistent { .. } => None,
    }
}

fn affine_text(terms: &[(Rational, &str)]) -> String {
    let mut s = String::new();
    for (c, u) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let neg = c < &Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        s += match (s.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        if mag != int(1) {
            s += &mag.to_string();
        }
        s += u;
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn variation6() -> Result<Vec<CheckReport>> {
    let g = general();
    let s: Vec<Expr> = catalogue::ANSATZ_VARIATION_STRUCTURES.iter().map(|x| catalogue::structure(x)).collect();
    let v = conformal_variation(&g, &catalogue::omega6_confflat())?;
    let display = catalogue::confflat_variation_display();
    let literal = CheckReport::from_status("variation of the conformally flat form against its display", &check_zero(&g, &v.minus(&display)));
    let literal = variant_notes(literal, &search_variants(&g, &v, &display, 2));

    let cf_fit = structure_coefficients(&g, &v, &s);
    let cf_check = CheckReport::boolean(
        "variation of the conformally flat form in the structures S0, S1, S2",
        cf_fit.is_some(),
        cf_fit.as_ref().map_or("not in the span".into(), |c| {
            affine_text(&[(c[0].clone(), " S0"), (c[1].clone(), " S1"), (c[2].clone(), " S2")]).trim().to_string()
        }),
    );

    // per-structure coefficient as a combination of A … D
    let mut per: Vec<Vec<(Rational, &str)>> = vec![Vec::new(); 3];
    let mut in_span = true;
    for u in ["A", "B", "C", "D"] {
        let du = conformal_variation(&g, &catalogue::ansatz_term(u).expect("ansatz name"))?;
        match structure_coefficients(&g, &du, &s) {
            Some(c) => {
                for k in 0..3 {
                    per[k].push((c[k].clone(), u));
                }
            }
            None => in_span = false,
        }
    }
    let mut ansatz_check = CheckReport::boolean(
        "variation of the Weyl ansatz in the structures S0, S1, S2",
        in_span,
        (0..3).map(|k| format!("S{k}: {}", affine_text(&per[k]))).collect::<Vec<_>>().join("; "),
    )
    .note("displayed coefficients: S0: B + 2C; S1: 3B - 2A; S2: D - 3C");
    for (u, _) in &catalogue::ANSATZ[4..] {
        let du = conformal_variation(&g, &catalogue::ansatz_term(u).expect("ansatz name"))?;
        ansatz_check = ansatz_check.note(format!("variation of the {u} term: {}", if du.is_zero() { "0".into() } else { to_text(&du) }));
    }

    let sys = constraint_system(&g)?;
    let eqs = CheckReport::boolean(
        "variation conditions",
        true,
        sys.equations
            .iter()
            .filter(|e| e.provenance.starts_with("conformal variation"))
            .map(|e| format!("{}", DisplayEq(e)))
            .collect::<Vec<_>>()
            .join("; "),
    );
    Ok(vec![literal, cf_check, ansatz_check, eqs])
}

/// An equation without its provenance.
struct DisplayEq<'a>(&'a wforms_conformal::Equation);

impl std::fmt::Display for DisplayEq<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<(Rational, &str)> = self.0.coeffs.iter().map(|(u, c)| (c.clone(), u.as_str())).collect();
        write!(f, "{} = {}", affine_text(&terms), self.0.rhs)
    }
}

fn cocycle6() -> Result<Vec<CheckReport>> {
    let g = general();
    let b = hochschild_coboundary(&g, &catalogue::omega6_confflat())?;
    let display = catalogue::confflat_coboundary_display();
    let literal = CheckReport::from_status("coboundary of the conformally flat form against its display", &check_zero(&g, &b.minus(&display)));
    let mut out = vec![variant_notes(literal, &search_variants(&g, &b, &display, 2))];

    let s1 = catalogue::structure(catalogue::ANSATZ_COBOUNDARY_STRUCTURES[1]);
    let ba = hochschild_coboundary(&g, &catalogue::ansatz_term("A").expect("ansatz name"))?;
    out.push(CheckReport::from_status("coboundary of the A term is -2 times its structure", &check_zero(&g, &ba.minus(&s1.scaled(&int(-2))))));
    let bb = hochschild_coboundary(&g, &catalogue::ansatz_term("B").expect("ansatz name"))?;
    let bcf_cotton: Expr = b.iter().filter(|(m, _)| !m.iter().any(|f| f.head == wforms_tensor::Head::W)).map(|(m, c)| (m.clone(), c.clone())).collect();
    out.push(CheckReport::from_status(
        "Cotton part of the conformally flat coboundary is -32 times the B coboundary",
        &check_zero(&g, &bcf_cotton.plus(&bb.scaled(&int(32)))),
    ));
    for u in ["C", "D", "E", "G"] {
        let bu = hochschild_coboundary(&g, &catalogue::ansatz_term(u).expect("ansatz name"))?;
        out.push(CheckReport::from_status(&format!("coboundary of the {u} term"), &check_zero(&g, &bu)));
    }
    let sys = constraint_system(&g)?;
    out.push(CheckReport::boolean(
        "cocycle conditions",
        true,
        sys.equations
            .iter()
            .filter(|e| e.provenance.starts_with("cocycle"))
            .map(|e| format!("{}", DisplayEq(e)))
            .collect::<Vec<_>>()
            .join("; "),
    ));
    Ok(out)
}

pub fn family_constants(constants: Constants) -> Result<BTreeMap<String, Rational>> {
    Ok(match constants {
        Constants::Solved => pinned_constants(&constraint_system(&general())?.solve())?,
        Constants::Published => published_constants(),
    })
}

fn family(cfg: &RunConfig, constants: Constants) -> Result<Vec<CheckReport>> {
    let g = general();
    let values = family_constants(constants)?;
    let fam = assemble_family_with(&values, &cfg.e, &cfg.g);
    let c = check_family(&g, &fam)?;
    let label = UNKNOWNS[..4].iter().map(|u| format!("{u}={}", values[*u])).collect::<Vec<_>>().join(", ");
    let label = format!("{label}, E={}, G={}", cfg.e, cfg.g);
    Ok(vec![
        CheckReport::from_status("first conformal variation", &c.variation).note(label),
        CheckReport::from_status("integrated first conformal variation (Euler-Lagrange in η)", &c.integrated_variation),
        CheckReport::from_status("Hochschild coboundary", &c.coboundary),
        CheckReport::from_status("symmetry under f <-> h", &c.symmetry),
        CheckReport::boolean("every term has 2 k_R + k_∇ = 6", c.homogeneity == Some(6), c.homogeneity.map_or("mixed".into(), |w| w.to_string())),
    ])
}

fn filtration() -> Result<Vec<CheckReport>> {
    let g = general();
    let basis = weyl_candidates(&g, &[(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]);
    let a = catalogue::ansatz_term("A").expect("ansatz name");
    let unique = basis.basis.len() == 1
        && (check_zero(&g, &basis.basis[0].minus(&a)).holds() || check_zero(&g, &basis.basis[0].plus(&a)).holds());
    let mut out = vec![CheckReport::boolean(
        "new Weyl candidates at k_R = 1, k_∇ = 4 modulo k_R >= 2",
        unique,
        basis.basis.iter().map(to_text).collect::<Vec<_>>().join(", "),
    )
    .note(format!("{} contractions enumerated", basis.enumerated))];
    for (k, (l, r)) in catalogue::RELATION_FORMS.iter().enumerate() {
        let (l, r) = (parse_expr(l)?, parse_expr(r)?);
        let status = check_zero(&g, &l.minus(&r));
        let mut rep = CheckReport::from_status(&format!("third-derivative relation, printed form {}", k + 1), &status)
            .note(format!("{} = {}", to_text(&l), to_text(&r)));
        if let Status::Residue(_) = status {
            rep = rep.note(format!("left side in normal form: {}", to_text(&g.canonicalize(&l))));
        }
        out.push(rep);
    }
    let cf = catalogue::omega6_confflat();
    out.push(CheckReport::boolean("conformally flat form has weight 6", homogeneity(&cf) == Some(6), homogeneity(&cf).map_or("mixed".into(), |w| w.to_string())));
    Ok(out)
}

fn difference_term() -> Result<Vec<CheckReport>> {
    let (g, cf) = (general(), confflat());
    let diff = catalogue::display_difference();
    let sym = catalogue::omega6_confflat_sym();
    let index = catalogue::omega6_confflat();
    let mut out = vec![CheckReport::from_status("displayed difference under W = 0", &check_zero(&cf, &diff))];
    let flat = CheckReport::from_status("symmetric display against the index display, W = 0", &check_zero(&cf, &sym.minus(&index)));
    let terms: Vec<Expr> = catalogue::OMEGA6_SYM_CURVED.iter().map(|(_, t)| parse_expr(t)).collect::<Result<_, _>>()?;
    let flat = match refit(&cf, &parse_expr(catalogue::OMEGA6_SYM_FLAT)?, &terms, &index, "symmetric display") {
        Solution::Consistent { values, free } if free.is_empty() => {
            catalogue::OMEGA6_SYM_CURVED.iter().enumerate().fold(flat, |r, (k, (c, t))| {
                let v = values[&format!("c{k}")].as_constant().cloned().unwrap_or_default();
                if v == int(*c) {
                    r
                } else {
                    r.note(format!("group {t}: printed {c}, consistent value {v}"))
                }
            })
        }
        _ => flat.note("no coefficient refit of the curvature groups matches"),
    };
    out.push(flat);
    out.push(CheckReport::from_status(
        "symmetric display minus index display against the displayed difference",
        &check_zero(&g, &sym.minus(&index).minus(&diff)),
    ));
    Ok(out)
}
