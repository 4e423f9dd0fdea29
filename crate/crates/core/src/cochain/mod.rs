//! Multilinear cochains between tensor powers of algebra section spaces,
//! represented as evaluable expression trees, together with the
//! Gerstenhaber circle product and bracket and the Hochschild differential.
//!
//! Equality of cochains is decided on finite monomial grids.

mod expr;
mod gerstenhaber;
mod grid;
mod hochschild;
mod literal;
pub mod random;

pub use expr::{AlgRef, Cochain, MonomialMap, Node, Signature, SlotFactor};
pub use gerstenhaber::{circle, circle_i, g_bracket, GElement};
pub use grid::{
    check_identity, equal_default, equal_on_grid, zero_on_grid, Counterexample, GridSpec, MonomialGrid,
    DEFAULT_BOUND,
};
pub use hochschild::{assoc_defect, hochschild_d, parity_sign, BimoduleStructure};
pub use literal::{CochainLiteral, Registry, SlotLiteral, TermLiteral};
