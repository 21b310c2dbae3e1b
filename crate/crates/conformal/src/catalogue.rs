//! Displayed order-six expressions, transcribed into the text grammar.
//!
//! Raised indices are lowered (the metric is parallel), `Δ = −∇^a∇_a`
//! signs are multiplied out, and `(X)_{;ij}` denotes derivatives of a
//! product, expanded by the Leibniz rule when parsed.

use wforms_core::exact::int;
use wforms_tensor::{parse_expr, Expr};

fn p(s: &str) -> Expr {
    parse_expr(s).unwrap_or_else(|e| panic!("catalogue entry does not parse: {e}\n{s}"))
}

/// Flat part of the order-six form, in its index display.
pub const OMEGA6_FLAT: &str = "12 f_{;i} h_{;ijjkk} + 12 f_{;ijjkk} h_{;i} + 24 f_{;ij} h_{;ijkk} \
    + 24 f_{;ijkk} h_{;ij} + 6 f_{;ii} h_{;jjkk} + 6 f_{;iijj} h_{;kk} + 24 f_{;ijj} h_{;ikk} \
    + 16 f_{;ijk} h_{;ijk}";

/// The printed `−192 f_{;ij} h^{;j}{}_k V^{jk}` repeats `j` three times; the
/// Hessians are symmetric, so every reading with one `j` renamed to the free
/// slot gives this term.
pub const HESSIAN_V_REPAIRED: &str = "-192 f_{;ij} h_{;jk} V_{ik}";

/// Curvature terms of the conformally flat index display, except the
/// misprinted Hessian term.
pub const OMEGA6_CONFFLAT_CURVED: &str = "-72 f_{;ijj} h_{;i} J - 72 f_{;i} h_{;ijj} J \
    - 24 f_{;ii} h_{;jj} J - 96 f_{;ij} h_{;ij} J + 96 f_{;i} h_{;i} J J \
    + 24 f_{;ii} h_{;j} J_{;j} + 24 f_{;i} h_{;jj} J_{;i} - 24 f_{;ij} h_{;i} J_{;j} - 24 f_{;i} h_{;ij} J_{;j} \
    - 24 f_{;i} h_{;i} J_{;jj} + 64 f_{;i} h_{;j} J V_{ij} \
    - 32 f_{;ijj} h_{;k} V_{ik} - 32 f_{;i} h_{;jkk} V_{ij} \
    + 64 f_{;ijk} h_{;i} V_{jk} + 64 f_{;i} h_{;ijk} V_{jk} \
    + 96 f_{;ij} h_{;kk} V_{ij} + 96 f_{;ii} h_{;jk} V_{jk} \
    - 64 f_{;i} h_{;i} V_{jk} V_{jk} + 128 f_{;i} h_{;j} V_{ik} V_{jk}";

/// Flat part of the symmetric (operator) display:
/// `12Δ²⟨df,dh⟩ − 6Δ(ΔfΔh) − 12⟨∇Δf,∇Δh⟩ + 24Δ⟨∇df,∇dh⟩ + 16⟨∇²df,∇²dh⟩`.
pub const OMEGA6_SYM_FLAT: &str = "12 (f_{;i} h_{;i})_{;jjkk} + 6 (f_{;ii} h_{;jj})_{;kk} \
    - 12 f_{;jji} h_{;kki} - 24 (f_{;ij} h_{;ij})_{;kk} + 16 f_{;ijk} h_{;ijk}";

/// Curvature part of the symmetric display, one displayed group per entry.
pub const OMEGA6_SYM_CURVED: [(i64, &str); 13] = [
    (-72, "(f_{;i} h_{;i})_{;jj} J"),
    (-24, "f_{;ii} h_{;jj} J"),
    (48, "f_{;ij} h_{;ij} J"),
    (96, "f_{;i} h_{;i} J J"),
    (-24, "f_{;i} h_{;i} J_{;jj}"),
    (24, "f_{;jj} h_{;i} J_{;i} + h_{;jj} f_{;i} J_{;i}"),
    (-24, "(f_{;i} h_{;i})_{;j} J_{;j}"),
    (96, "h_{;kk} f_{;ij} V_{ij} + f_{;kk} h_{;ij} V_{ij}"),
    (-32, "(f_{;kk} h_{;i})_{;j} V_{ij} + (h_{;kk} f_{;i})_{;j} V_{ij}"),
    (64, "(f_{;k} h_{;k})_{;ij} V_{ij}"),
    (-64, "f_{;i} h_{;i} V_{jk} V_{jk}"),
    (-128, "f_{;i} h_{;j} V_{jk} V_{ki}"),
    (64, "f_{;ij} h_{;jk} V_{ki}"),
];

/// Claimed difference between the symmetric and index displays.
pub const DISPLAY_DIFFERENCE: &str = "96 f_{;ij} h_{;kl} W_{iljk} \
    - 32 f_{;ij} h_{;k} W_{ijkl;l} - 32 f_{;i} h_{;jk} W_{ijkl;l}";

/// Displayed first conformal variation of the conformally flat form.
pub const CONFFLAT_VARIATION: &str = "-32 eta_{;i} f_{;j} h_{;k} W_{ijkl;l} - 32 eta_{;i} f_{;j} h_{;k} W_{ikjl;l} \
    - 32 eta_{;i} f_{;jk} h_{;l} W_{ijkl} + 32 eta_{;i} f_{;j} h_{;kl} W_{ikjl}";

/// Displayed Hochschild coboundary integrand of the conformally flat form.
pub const CONFFLAT_COBOUNDARY: &str = "f0 (-96 f1_{;j} f2_{;i} f3_{;k} W_{ijkl;l} - 96 f1_{;j} f2_{;i} f3_{;k} W_{ikjl;l} \
    + 128 f1_{;jk} f2_{;i} f3_{;l} W_{ijkl} + 128 f1_{;j} f2_{;i} f3_{;kl} W_{ikjl})";

/// Structures multiplying `B + 2C`, `3B − 2A` and `D − 3C` in the displayed
/// variation of the ansatz.
pub const ANSATZ_VARIATION_STRUCTURES: [&str; 3] = [
    "eta_{;i} f_{;j} h_{;k} W_{ijkl;l} + eta_{;i} f_{;j} h_{;k} W_{ikjl;l}",
    "eta_{;i} f_{;jk} h_{;l} W_{ijkl} + eta_{;i} f_{;j} h_{;kl} W_{ilkj}",
    "eta_{;ij} f_{;k} h_{;l} W_{ikjl}",
];

/// Structures multiplying `3B` and `−2A` in the coboundary of the ansatz.
pub const ANSATZ_COBOUNDARY_STRUCTURES: [&str; 2] = [
    "f0 f1_{;j} f2_{;i} f3_{;k} W_{ijkl;l} + f0 f1_{;j} f2_{;i} f3_{;k} W_{ikjl;l}",
    "f0 f1_{;jk} f2_{;i} f3_{;l} W_{ijkl} + f0 f1_{;j} f2_{;i} f3_{;kl} W_{ikjl}",
];

/// Names and terms of the Weyl ansatz `A … G`.
pub const ANSATZ: [(&str, &str); 6] = [
    ("A", "f_{;ij} h_{;kl} W_{ikjl}"),
    ("B", "f_{;ij} h_{;k} W_{iljk;l} + h_{;ij} f_{;k} W_{iljk;l}"),
    ("C", "f_{;i} h_{;j} W_{ikjl;kl}"),
    ("D", "f_{;i} h_{;j} V_{kl} W_{ikjl}"),
    ("E", "f_{;i} h_{;i} W_{jklm} W_{jklm}"),
    ("G", "f_{;i} h_{;j} W_{iklm} W_{jklm}"),
];

/// Published constants for `A … D`.
pub const PUBLISHED_CONSTANTS: [(&str, i64); 4] = [("A", 64), ("B", 32), ("C", -32), ("D", -96)];

/// The third-derivative relation in its two printed index forms: the left
/// sides differ by the order of the last two Weyl slots, the right sides by
/// the contraction of the quadratic Weyl term.
pub const RELATION_FORMS: [(&str, &str); 2] = [
    (
        "f_{;i} h_{;jkl} W_{ijlk}",
        "f_{;i} h_{;j} V_{kl} W_{ikjl} + f_{;i} h_{;j} W_{iklm} W_{jklm}",
    ),
    (
        "f_{;i} h_{;jkl} W_{ijkl}",
        "f_{;i} h_{;j} V_{kl} W_{ikjl} + f_{;i} h_{;j} W_{iklm} W_{jlkm}",
    ),
];

pub fn omega6_flat() -> Expr {
    p(OMEGA6_FLAT)
}

/// The conformally flat index display with the repaired Hessian term.
pub fn omega6_confflat() -> Expr {
    omega6_confflat_with(HESSIAN_V_REPAIRED)
}

/// The conformally flat index display with `hessian_term` in place of the
/// misprinted term.
pub fn omega6_confflat_with(hessian_term: &str) -> Expr {
    p(OMEGA6_FLAT).plus(&p(OMEGA6_CONFFLAT_CURVED)).plus(&p(hessian_term))
}

pub fn omega6_confflat_sym() -> Expr {
    OMEGA6_SYM_CURVED
        .iter()
        .fold(p(OMEGA6_SYM_FLAT), |acc, (c, t)| acc.plus(&p(t).scaled(&int(*c))))
}

pub fn display_difference() -> Expr {
    p(DISPLAY_DIFFERENCE)
}

pub fn confflat_variation_display() -> Expr {
    p(CONFFLAT_VARIATION)
}

pub fn confflat_coboundary_display() -> Expr {
    p(CONFFLAT_COBOUNDARY)
}

pub fn ansatz_term(name: &str) -> Option<Expr> {
    ANSATZ.iter().find(|(n, _)| *n == name).map(|(_, s)| p(s))
}

pub fn structure(s: &str) -> Expr {
    p(s)
}
