//! Exact symbol calculus for the residue forms of the conformal Fredholm
//! module: rational arithmetic, exterior-algebra symbols, sphere moments and
//! flat coefficient tables.

pub mod calculus;
pub mod error;
pub mod exact;
pub mod exterior;
pub mod flat_residue;
pub mod poly;
pub mod sphere;
pub mod symbol;

pub use error::CoreError;
pub use exact::{binomial, enumerate_splits, mi_factorial, MultiIndex, Rational, SlotConstraint};
pub use flat_residue::{CoefficientTable, Convention};
pub use poly::Poly;
pub use symbol::{MatrixSymbol, RationalSymbol};
