//! Curved residue forms: growing flat formulas to conformally flat metrics,
//! first conformal variations, Hochschild coboundaries, and solving for the
//! Weyl-term constants.

pub mod candidates;
pub mod catalogue;
pub mod error;
pub mod family;
pub mod grow;
pub mod hochschild;
pub mod solve;
pub mod variants;
pub mod variation;

pub use error::ConformalError;
pub use grow::{grow_flat, lift_table, FlatPattern};
pub use hochschild::{hochschild_coboundary, hochschild_coboundary_raw};
pub use solve::{refit, Affine, AnsatzExpr, ConstraintSystem, Equation, Solution};
pub use variants::{search_variants, TermVariant, VariantMatch};
pub use variation::{conformal_variation, conformal_variation_raw, eta_euler_lagrange};
pub use family::{assemble_family, assemble_family_with, check_family, constraint_system, solve_constants, FamilyCheck};
pub use candidates::{weyl_candidates, CandidateBasis};
