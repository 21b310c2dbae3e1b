//! Subcommand bodies. Each returns the rendered output and the exit code.

use anyhow::{bail, Context, Result};
use num_traits::Zero;
use serde_json::{json, Value};
use wforms_conformal::family::{constraint_system, published_conditions};
use wforms_conformal::{ConstraintSystem, Equation, Solution};
use wforms_core::exact::{format_rational, parse_rational};
use wforms_core::flat_residue::{omega_flat_direct, omega_flat_taylor};
use wforms_core::sphere::sphere_area_pi_power;
use wforms_core::{CoefficientTable, MultiIndex, Rational};
use wforms_tensor::{Engine, Mode};

use crate::config::{Format, Measure, RunConfig};
use crate::suites::{run_suite, Constants};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RESIDUE: i32 = 1;

pub struct Outcome {
    pub output: String,
    pub code: i32,
}

fn table_value(t: &CoefficientTable) -> Value {
    serde_json::from_str(&t.to_json()).expect("table json")
}

fn derivative_latex(head: &str, a: &MultiIndex) -> String {
    let parts: Vec<String> = a
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, k)| **k > 0)
        .map(|(i, k)| if *k == 1 { format!("\\partial_{}", i + 1) } else { format!("\\partial_{}^{{{k}}}", i + 1) })
        .collect();
    format!("{}{head}", parts.join(""))
}

fn rational_latex(c: &Rational) -> String {
    if c.denom() == &1.into() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

pub fn cmd_flat(cfg: &RunConfig) -> Result<Outcome> {
    let (d, t) = rayon::join(|| omega_flat_direct(cfg.n), || omega_flat_taylor(cfg.n));
    let (d, t) = (d?, t?);
    let diff = d.diff(&t);
    let (scale, pi_power) = match cfg.measure {
        Measure::Normalized => (Rational::from_integer(1.into()), 0),
        Measure::Area => sphere_area_pi_power(cfg.n),
    };
    let d_out = d.scaled(&scale);
    let t_out = t.scaled(&scale);
    let pi = |k: u32| match k {
        0 => String::new(),
        1 => "\\pi".into(),
        k => format!("\\pi^{{{k}}}"),
    };
    let output = match cfg.format {
        Format::Json => {
            let doc = json!({
                "n": cfg.n,
                "measure": match cfg.measure { Measure::Normalized => "normalized", Measure::Area => "area" },
                "pi_power": pi_power,
                "direct": table_value(&d_out),
                "taylor": table_value(&t_out),
                "diff": diff.iter().map(|x| json!({
                    "a": x.a.entries(), "b": x.b.entries(),
                    "direct": format_rational(&x.left), "taylor": format_rational(&x.right),
                })).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Text => {
            let mut s = format!("# n={} entries={} differing={} pi_power={pi_power}\n", cfg.n, d_out.len(), diff.len());
            for (a, b, c) in d_out.iter() {
                s += &format!("{:?} {:?} {}\n", a.entries(), b.entries(), c);
            }
            s
        }
        Format::Latex => {
            let mut s = String::new();
            for (k, (a, b, c)) in d_out.iter().enumerate() {
                let neg = c < &Rational::zero();
                let mag = if neg { -c.clone() } else { c.clone() };
                s += match (k == 0, neg) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                };
                s += &format!("{}{}\\,{}\\,{}", rational_latex(&mag), pi(pi_power), derivative_latex("f", a), derivative_latex("h", b));
            }
            format!("\\[ {} \\]\n", if s.is_empty() { "0".into() } else { s })
        }
    };
    Ok(Outcome {
        output,
        code: if diff.is_empty() { EXIT_OK } else { EXIT_RESIDUE },
    })
}

pub fn cmd_verify(suites: &[String], cfg: &RunConfig, constants: Constants) -> Result<Outcome> {
    let mut output = String::new();
    let mut ok = true;
    let mut reports = Vec::new();
    for s in suites {
        let r = run_suite(s, cfg, constants)?;
        ok &= r.holds();
        reports.push(r);
    }
    if cfg.format == Format::Json && reports.len() > 1 {
        output = serde_json::to_string_pretty(&reports)? + "\n";
    } else {
        for r in &reports {
            output += &r.render(cfg.format);
        }
    }
    Ok(Outcome {
        output,
        code: if ok { EXIT_OK } else { EXIT_RESIDUE },
    })
}

/// Parses `"3B - 2A = -32"` into an equation over the named unknowns.
pub fn parse_constraint(s: &str) -> Result<Equation> {
    let (lhs, rhs) = s.split_once('=').with_context(|| format!("constraint {s:?} has no '='"))?;
    let rhs = parse_rational(rhs.trim()).with_context(|| format!("right side of {s:?}"))?;
    let mut eq = Equation {
        coeffs: Default::default(),
        rhs,
        provenance: format!("injected: {}", s.trim()),
    };
    let compact: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = compact.as_str();
    if rest.is_empty() {
        bail!("constraint {s:?} has an empty left side");
    }
    while !rest.is_empty() {
        let (neg, body) = match rest.as_bytes()[0] {
            b'-' => (true, &rest[1..]),
            b'+' => (false, &rest[1..]),
            _ => (false, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let split = term.find(|c: char| c.is_ascii_alphabetic()).with_context(|| format!("term {term:?} names no unknown"))?;
        let (coef, name) = term.split_at(split);
        let coef = coef.trim_end_matches('*');
        let mut c = if coef.is_empty() { Rational::from_integer(1.into()) } else { parse_rational(coef)? };
        if neg {
            c = -c;
        }
        if !name.chars().all(|ch| ch.is_ascii_alphanumeric()) {
            bail!("bad unknown name {name:?}");
        }
        *eq.coeffs.entry(name.to_string()).or_insert_with(Rational::zero) += c;
    }
    eq.coeffs.retain(|_, c| !c.is_zero());
    Ok(eq)
}

pub fn render_solution(sys: &ConstraintSystem, sol: &Solution, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let eqs: Vec<Value> = sys
                .equations
                .iter()
                .map(|e| {
                    json!({
                        "coefficients": e.coeffs.iter().map(|(u, c)| (u.clone(), Value::String(format_rational(c)))).collect::<serde_json::Map<_, _>>(),
                        "rhs": format_rational(&e.rhs),
                        "provenance": e.provenance,
                    })
                })
                .collect();
            let solution = match sol {
                Solution::Consistent { values, free } => json!({
                    "status": "consistent",
                    "values": values.iter().map(|(u, a)| (u.clone(), json!({
                        "constant": format_rational(&a.constant),
                        "free_coefficients": a.coeffs.iter().map(|(f, c)| (f.clone(), Value::String(format_rational(c)))).collect::<serde_json::Map<_, _>>(),
                    }))).collect::<serde_json::Map<_, _>>(),
                    "free": free,
                }),
                Solution::Inconsistent { combination, residual } => json!({
                    "status": "inconsistent",
                    "combination": combination.iter().map(|(k, l)| json!({"equation": k, "multiplier": format_rational(l)})).collect::<Vec<_>>(),
                    "residual": format_rational(residual),
                }),
            };
            serde_json::to_string_pretty(&json!({ "equations": eqs, "solution": solution }))? + "\n"
        }
        Format::Text | Format::Latex => {
            let mut s = String::from("equations:\n");
            for (k, e) in sys.equations.iter().enumerate() {
                s += &format!("  ({k}) {e}\n");
            }
            match sol {
                Solution::Consistent { values, free } => {
                    s += "solution:\n";
                    for (u, a) in values {
                        s += &format!("  {u} = {a}\n");
                    }
                    s += &format!("  free: {}\n", if free.is_empty() { "none".into() } else { free.join(", ") });
                }
                Solution::Inconsistent { combination, residual } => {
                    s += "inconsistent: ";
                    let parts: Vec<String> = combination.iter().map(|(k, l)| format!("({l})*({k})")).collect();
                    s += &format!("{} gives 0 = {residual}\n", parts.join(" + "));
                }
            }
            s
        }
    })
}

pub fn cmd_solve(published: bool, injected: &[String], format: Format) -> Result<Outcome> {
    let mut sys = if published {
        published_conditions()
    } else {
        constraint_system(&Engine::new(6, Mode::General))?
    };
    for c in injected {
        sys.push(parse_constraint(c)?);
    }
    let sol = sys.solve();
    let code = match sol {
        Solution::Consistent { .. } => EXIT_OK,
        Solution::Inconsistent { .. } => EXIT_RESIDUE,
    };
    Ok(Outcome {
        output: render_solution(&sys, &sol, format)?,
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use wforms_core::exact::int;

    #[test]
    fn parses_linear_constraints() {
        let e = parse_constraint("3B - 2A = -32").unwrap();
        assert_eq!(e.coeffs["B"], int(3));
        assert_eq!(e.coeffs["A"], int(-2));
        assert_eq!(e.rhs, int(-32));
        let e = parse_constraint("E = 1/2").unwrap();
        assert_eq!(e.coeffs["E"], int(1));
        assert!(parse_constraint("3 = 4").is_err());
        assert!(parse_constraint("B + 2C").is_err());
    }
}
