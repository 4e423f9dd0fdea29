//! The L∞[1] algebra governing simultaneous deformations of a span: Voronov
//! derived brackets twisted by the legs, their explicit form, Koszul signs,
//! the generalized Jacobi identities and Maurer–Cartan residuals.

mod bracket;
mod element;
mod jacobi;
mod mc;
mod sign;
mod voronov;

pub use bracket::{binary_g_sign, bracket, linf_bracket, Route};
pub use element::LInfElement;
pub use jacobi::jacobi_defect;
pub use mc::{mc_residual, mc_residual_exp, validate_mc_candidate, McResidual};
pub use sign::{koszul_sign, unshuffles};
pub use voronov::VoronovData;

#[cfg(test)]
mod tests;
