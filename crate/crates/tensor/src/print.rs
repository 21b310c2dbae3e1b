//! Plain-text and LaTeX rendering.
//!
//! Text output uses lowered indices throughout. LaTeX output raises the
//! second occurrence of every dummy so contractions read as in semicolon
//! notation, e.g. `f_{;i}h^{;i}`.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed};
use wforms_core::Rational;

use crate::term::{Expr, Factor, Head, Label, SymKind, FREE_BASE};

const DUMMY_LETTERS: &[char] = &[
    'i', 'j', 'k', 'l', 'm', 'n', 'p', 'q', 'r', 's', 't', 'u', 'v', 'w', 'x', 'y', 'z', 'a', 'b', 'c', 'd', 'e',
];

/// Free label for an index name: a letter with an optional numeric suffix
/// below 99.
pub fn free_label(name: &str) -> Option<Label> {
    let mut chars = name.chars();
    let c = chars.next()?;
    if !c.is_ascii_lowercase() {
        return None;
    }
    let rest = chars.as_str();
    let suffix = if rest.is_empty() {
        0
    } else {
        let v: u16 = rest.parse().ok()?;
        if v >= 99 {
            return None;
        }
        v + 1
    };
    Some(FREE_BASE + (c as u16 - 'a' as u16) * 100 + suffix)
}

pub fn free_name(l: Label) -> String {
    let k = l - FREE_BASE;
    let c = (b'a' + (k / 100) as u8) as char;
    match k % 100 {
        0 => c.to_string(),
        s => format!("{c}{}", s - 1),
    }
}

fn namer(m: &[Factor]) -> HashMap<Label, String> {
    let mut names = HashMap::new();
    let taken: BTreeSet<String> = m
        .iter()
        .flat_map(|f| f.labels())
        .filter(|&l| l >= FREE_BASE)
        .map(free_name)
        .collect();
    let mut pool = DUMMY_LETTERS
        .iter()
        .map(|c| c.to_string())
        .chain((0..).flat_map(|k| DUMMY_LETTERS.iter().map(move |c| format!("{c}{k}"))))
        .filter(|s| !taken.contains(s));
    for l in m.iter().flat_map(|f| f.labels()) {
        if l >= FREE_BASE {
            names.entry(l).or_insert_with(|| free_name(l));
        } else {
            names.entry(l).or_insert_with(|| pool.next().expect("unbounded name pool"));
        }
    }
    names
}

fn head_text(h: Head) -> &'static str {
    h.name()
}

fn factor_text(f: &Factor, names: &HashMap<Label, String>) -> String {
    let mut s = head_text(f.head).to_string();
    if f.rank() == 0 {
        return s;
    }
    let join = |ls: &[Label]| ls.iter().map(|l| names[l].as_str()).collect::<String>();
    let slots = join(&f.slots);
    let derivs = join(&f.derivs);
    let body = match f.sym {
        SymKind::All => format!("({slots};{derivs})"),
        SymKind::Derivs => format!("{slots};({derivs})"),
        SymKind::Ordered if f.derivs.is_empty() => slots,
        SymKind::Ordered => format!("{slots};{derivs}"),
    };
    s.push_str("_{");
    s.push_str(&body);
    s.push('}');
    s
}

fn coeff_text(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Text form accepted by [`crate::parse::parse_expr`].
pub fn to_text(e: &Expr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in e.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let names = namer(m);
        let body: Vec<String> = m.iter().map(|f| factor_text(f, &names)).collect();
        if body.is_empty() {
            out.push_str(&coeff_text(&a));
        } else {
            if !a.is_one() {
                out.push_str(&coeff_text(&a));
                out.push(' ');
            }
            out.push_str(&body.join(" "));
        }
    }
    out
}

fn head_latex(h: Head) -> &'static str {
    match h {
        Head::Eta => "\\eta",
        Head::F0 => "f_0",
        Head::F1 => "f_1",
        Head::F2 => "f_2",
        Head::F3 => "f_3",
        Head::Rc => "\\mathrm{Rc}",
        Head::Sc => "\\mathrm{Sc}",
        _ => h.name(),
    }
}

fn factor_latex(f: &Factor, names: &HashMap<Label, String>, seen: &mut BTreeSet<Label>) -> String {
    let mut s = head_latex(f.head).to_string();
    if f.rank() == 0 {
        return s;
    }
    if matches!(f.head, Head::F0 | Head::F1 | Head::F2 | Head::F3) {
        s = format!("{{{s}}}");
    }
    // (text, raised) runs
    let mut runs: Vec<(String, bool)> = Vec::new();
    let mut push = |t: String, up: bool| match runs.last_mut() {
        Some((buf, u)) if *u == up => buf.push_str(&t),
        _ => runs.push((t, up)),
    };
    let open_all = f.sym == SymKind::All;
    let total = f.rank();
    for k in 0..total {
        let l = f.index_at(k);
        let up = l < FREE_BASE && !seen.insert(l);
        let mut t = String::new();
        if k == 0 && open_all {
            t.push('(');
        }
        if k == f.slots.len() {
            t.push(';');
            if f.sym == SymKind::Derivs {
                t.push('(');
            }
        }
        t.push_str(&names[&l]);
        if k + 1 == total && f.sym != SymKind::Ordered {
            t.push(')');
        }
        push(t, up);
    }
    for (k, (t, up)) in runs.iter().enumerate() {
        if k > 0 {
            s.push_str("{}");
        }
        s.push_str(if *up { "^{" } else { "_{" });
        s.push_str(t);
        s.push('}');
    }
    s
}

fn coeff_latex(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

/// LaTeX in semicolon notation.
pub fn to_latex(e: &Expr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in e.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let names = namer(m);
        let mut seen = BTreeSet::new();
        let body: Vec<String> = m.iter().map(|f| factor_latex(f, &names, &mut seen)).collect();
        if body.is_empty() || !a.is_one() {
            out.push_str(&coeff_latex(&a));
            if !body.is_empty() {
                out.push_str("\\,");
            }
        }
        out.push_str(&body.join(""));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_expr;

    #[test]
    fn latex_uses_semicolon_notation() {
        let e = parse_expr("-3/2 f_{;ij} h_{;k} W_{ikjl;l}").unwrap();
        let s = to_latex(&e);
        assert!(s.starts_with("-\\frac{3}{2}"), "{s}");
        assert!(s.contains(";"), "{s}");
        assert_eq!(to_latex(&Expr::zero()), "0");
    }
}
