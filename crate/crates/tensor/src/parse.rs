//! Plain-text abstract-index grammar.
//!
//! ```text
//! expr    = [ sign ] term { sign term } ;
//! sign    = "+" | "-" ;
//! term    = [ rational ] [ "*" ] primary { [ "*" ] primary } | rational ;
//! rational= digits [ "/" digits ] ;
//! primary = factor | "(" expr ")" [ dgroup ] ;
//! factor  = head { group } ;
//! head    = "f" | "h" | "eta" | "f0" | "f1" | "f2" | "f3" | "g"
//!         | "W" | "V" | "J" | "R" | "Rc" | "Sc" ;
//! group   = ( "_" | "^" ) ( "{" body "}" | index ) | "{" "}" ;
//! body    = { index | ";" | "(" | ")" } ;
//! dgroup  = ( "_" | "^" ) "{" ";" { index } "}" ;
//! index   = lowercase-letter { digit } ;
//! ```
//!
//! Indices before the first `;` fill the head's slots, later ones are
//! covariant derivatives applied left to right. Variance (`_` or `^`) is
//! accepted and ignored: all indices are stored lowered. An index name that
//! occurs twice in a term is a dummy; once, it is free. Parentheses inside a
//! group symmetrize: `h_{;(ijk)}` over the derivatives, `V_{(ij;k)}` over all
//! slots. A derivative group after a parenthesized sum is expanded by the
//! Leibniz rule, so `(f_{;i} h_{;i})_{;j}` is `f_{;ij} h_{;i} + f_{;i} h_{;ij}`.
//! `−` is accepted for `-`, and whitespace is ignored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use wforms_core::Rational;

use crate::error::TensorError;
use crate::leibniz::differentiate_product;
use crate::print::free_label;
use crate::term::{check_monomial, Expr, Factor, Head, Label, SymKind};

/// Factor with index names not yet resolved to labels.
#[derive(Clone, Debug)]
struct NamedFactor {
    head: Head,
    sym: SymKind,
    slots: Vec<String>,
    derivs: Vec<String>,
}

type NamedTerm = (Rational, Vec<NamedFactor>);

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, TensorError> {
    Err(TensorError::Parse { pos, msg: msg.into() })
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), TensorError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{c}'"))
        }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Some(false)
            }
            Some('-') | Some('−') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Vec<NamedTerm>, TensorError> {
        let mut out = Vec::new();
        let mut neg = self.sign().unwrap_or(false);
        loop {
            let mut t = self.term()?;
            if neg {
                for (c, _) in t.iter_mut() {
                    *c = -c.clone();
                }
            }
            out.extend(t);
            match self.sign() {
                Some(s) => neg = s,
                None => break,
            }
        }
        Ok(out)
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    fn term(&mut self) -> Result<Vec<NamedTerm>, TensorError> {
        let start = self.pos;
        let mut coeff = Rational::one();
        let mut had_coeff = false;
        if let Some(n) = self.digits() {
            had_coeff = true;
            coeff = if self.eat('/') {
                let d = self.digits().ok_or(TensorError::Parse {
                    pos: self.pos,
                    msg: "expected denominator".into(),
                })?;
                if d == BigInt::from(0) {
                    return err(self.pos, "zero denominator");
                }
                Rational::new(n, d)
            } else {
                Rational::from_integer(n)
            };
        }
        let mut acc: Vec<NamedTerm> = vec![(coeff, Vec::new())];
        let mut any = false;
        loop {
            self.eat('*');
            let Some(c) = self.peek() else { break };
            let part = if c == '(' {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                match self.peek() {
                    Some('_') | Some('^') => self.product_derivative(inner)?,
                    _ => inner,
                }
            } else if c.is_ascii_alphabetic() {
                let f = self.factor()?;
                vec![(Rational::one(), vec![f])]
            } else {
                break;
            };
            any = true;
            let mut next = Vec::with_capacity(acc.len() * part.len());
            for (ca, fa) in &acc {
                for (cb, fb) in &part {
                    let mut f = fa.clone();
                    f.extend(fb.iter().cloned());
                    next.push((ca * cb, f));
                }
            }
            acc = next;
        }
        if !any && !had_coeff {
            return err(start, "expected a term");
        }
        Ok(acc)
    }

    fn product_derivative(&mut self, inner: Vec<NamedTerm>) -> Result<Vec<NamedTerm>, TensorError> {
        let start = self.pos;
        let mut names = Vec::new();
        let mut seen_semi = false;
        while matches!(self.peek(), Some('_') | Some('^')) {
            self.pos += 1;
            self.expect('{')?;
            loop {
                match self.peek() {
                    Some('}') => {
                        self.pos += 1;
                        break;
                    }
                    Some(';') => {
                        self.pos += 1;
                        seen_semi = true;
                    }
                    Some(c) if c.is_ascii_lowercase() => {
                        if !seen_semi {
                            return err(self.pos, "a parenthesized product takes only derivative indices");
                        }
                        names.push(self.index()?);
                    }
                    _ => return err(self.pos, "unexpected character in derivative group"),
                }
            }
            self.eat_empty_braces();
        }
        if names.is_empty() {
            return err(start, "empty derivative group");
        }
        // label placeholder: position in `names`
        let mut out = Vec::new();
        for (c, fs) in inner {
            let raw: Vec<Factor> = fs
                .iter()
                .map(|f| Factor {
                    head: f.head,
                    sym: SymKind::Ordered,
                    slots: Default::default(),
                    derivs: Default::default(),
                })
                .collect();
            let idx: Vec<Label> = (0..names.len() as Label).collect();
            for m in differentiate_product(&raw, &idx) {
                let mut fs2 = fs.clone();
                for (k, f) in m.iter().enumerate() {
                    if f.derivs.is_empty() {
                        continue;
                    }
                    if fs2[k].sym != SymKind::Ordered {
                        return err(start, "cannot differentiate a symmetrized factor through a product");
                    }
                    for &d in &f.derivs {
                        fs2[k].derivs.push(names[d as usize].clone());
                    }
                }
                out.push((c.clone(), fs2));
            }
        }
        Ok(out)
    }

    fn eat_empty_braces(&mut self) {
        let save = self.pos;
        if self.eat('{') && self.eat('}') {
            return;
        }
        self.pos = save;
    }

    fn index(&mut self) -> Result<String, TensorError> {
        self.skip_ws();
        let mut s = String::new();
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_lowercase() => {
                s.push(*c);
                self.pos += 1;
            }
            _ => return err(self.pos, "expected an index letter"),
        }
        while let Some(c) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                s.push(*c);
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(s)
    }

    fn head(&mut self) -> Result<Head, TensorError> {
        self.skip_ws();
        let start = self.pos;
        let rest: String = self.chars[self.pos..].iter().take(3).collect();
        for name in ["eta", "Rc", "Sc", "f0", "f1", "f2", "f3", "f", "h", "g", "W", "V", "J", "R"] {
            if rest.starts_with(name) {
                self.pos += name.chars().count();
                return Ok(Head::from_name(name).unwrap());
            }
        }
        err(start, format!("unknown head at {rest:?}"))
    }

    fn factor(&mut self) -> Result<NamedFactor, TensorError> {
        let start = self.pos;
        let head = self.head()?;
        let mut slots = Vec::new();
        let mut derivs = Vec::new();
        let mut in_derivs = false;
        let mut sym = SymKind::Ordered;
        let mut open = false;
        loop {
            // no whitespace between a head and its groups
            match self.chars.get(self.pos) {
                Some('{') => {
                    self.pos += 1;
                    self.expect('}')?;
                    continue;
                }
                Some('_') | Some('^') => self.pos += 1,
                _ => break,
            }
            if self.eat('{') {
                loop {
                    match self.peek() {
                        Some('}') => {
                            self.pos += 1;
                            break;
                        }
                        Some(';') => {
                            self.pos += 1;
                            in_derivs = true;
                        }
                        Some('(') => {
                            self.pos += 1;
                            if sym != SymKind::Ordered {
                                return err(self.pos, "nested symmetrization");
                            }
                            sym = if in_derivs { SymKind::Derivs } else { SymKind::All };
                            open = true;
                        }
                        Some(')') => {
                            self.pos += 1;
                            if !open {
                                return err(self.pos, "unbalanced ')'");
                            }
                            open = false;
                        }
                        Some(c) if c.is_ascii_lowercase() => {
                            if sym != SymKind::Ordered && !open {
                                return err(self.pos, "symmetrization must enclose the trailing indices");
                            }
                            let name = self.index()?;
                            if in_derivs {
                                derivs.push(name);
                            } else {
                                slots.push(name);
                            }
                        }
                        _ => return err(self.pos, "unexpected character in index group"),
                    }
                }
            } else {
                let name = self.index()?;
                if in_derivs {
                    derivs.push(name);
                } else {
                    slots.push(name);
                }
            }
        }
        if open {
            return err(self.pos, "unclosed '('");
        }
        if slots.len() != head.arity() {
            return Err(TensorError::Malformed(format!(
                "{} expects {} index slots, found {} (at byte {start})",
                head.name(),
                head.arity(),
                slots.len()
            )));
        }
        if sym == SymKind::All && head != Head::V {
            return err(start, "total symmetrization is only defined for V");
        }
        Ok(NamedFactor { head, sym, slots, derivs })
    }
}

fn resolve(fs: &[NamedFactor]) -> Result<Vec<Factor>, TensorError> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for f in fs {
        for n in f.slots.iter().chain(f.derivs.iter()) {
            *counts.entry(n.as_str()).or_default() += 1;
        }
    }
    let mut dummies: BTreeMap<String, Label> = BTreeMap::new();
    let mut out = Vec::new();
    for f in fs {
        let mut map = |n: &str| -> Result<Label, TensorError> {
            match counts[n] {
                1 => free_label(n).ok_or_else(|| TensorError::Malformed(format!("bad index name {n:?}"))),
                2 => {
                    let next = dummies.len() as Label;
                    Ok(*dummies.entry(n.to_string()).or_insert(next))
                }
                c => Err(TensorError::Malformed(format!("index {n} occurs {c} times"))),
            }
        };
        let slots = f.slots.iter().map(|n| map(n)).collect::<Result<Vec<_>, _>>()?;
        let derivs = f.derivs.iter().map(|n| map(n)).collect::<Result<Vec<_>, _>>()?;
        out.push(Factor::new(f.head, &slots, &derivs).with_sym(f.sym));
    }
    check_monomial(&out).map_err(TensorError::Malformed)?;
    Ok(out)
}

/// Parses an expression in the text grammar.
pub fn parse_expr(s: &str) -> Result<Expr, TensorError> {
    let mut p = Parser {
        chars: s.chars().collect(),
        pos: 0,
    };
    let terms = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    let mut e = Expr::zero();
    for (c, fs) in terms {
        e.add_term(resolve(&fs)?, c);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::print::to_text;

    #[test]
    fn round_trip() {
        let e = parse_expr("12 f_{;i} h_{;ijjkk} - 3/2 V_{(ij;k)} V_{ij;k}").unwrap();
        assert_eq!(parse_expr(&to_text(&e)).unwrap(), e);
    }

    #[test]
    fn product_derivative_expands() {
        let a = parse_expr("(f_{;i} h_{;i})_{;j}").unwrap();
        let b = parse_expr("f_{;ij} h_{;i} + f_{;i} h_{;ij}").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_triple_index() {
        assert!(parse_expr("f_{;i} h_{;ii}").is_err());
        assert!(parse_expr("V_{i}").is_err());
    }
}
