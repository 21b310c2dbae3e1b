//! Abstract-index tensor polynomials on Riemannian manifolds: normal forms
//! under index symmetries and the Ricci identity, Weyl decomposition,
//! multiterm relations, filtration degrees, and a numeric component oracle.

pub mod canon;
pub mod error;
pub mod eval;
pub mod filtration;
pub mod jet;
pub mod leibniz;
pub mod linalg;
pub mod normal;
pub mod parse;
pub mod print;
pub mod relations;
pub mod scalar;
pub mod term;

pub use error::TensorError;
pub use normal::{Engine, Mode};
pub use parse::parse_expr;
pub use print::{to_latex, to_text};
pub use term::{Expr, Factor, Head, Label, Monomial, SymKind, FREE_BASE};
pub use relations::{check_zero, verify_identity, Status};
