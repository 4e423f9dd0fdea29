//! Exact symbolic deformation calculus for spans of associative algebras
//! `A_U <- A_W -> A_V`.
//!
//! The crate is organised bottom-up:
//!
//! * [`ratlaurent`]: exact rationals, sparse Laurent polynomials, algebra
//!   cones, substitution morphisms and truncated ε-series.
//! * [`cochain`]: multilinear cochains as evaluable expression trees, the
//!   Gerstenhaber circle product and bracket, the Hochschild differential.
//! * [`gs`]: span diagrams and the reduced, truncated Gerstenhaber–Schack
//!   complex.
//! * [`linf`]: Voronov derived brackets, the L∞[1] structure on
//!   `g̃[1] ⊕ a`, and Maurer–Cartan residuals.
//! * [`quantize`]: Poisson bivectors and the second-order Kontsevich star
//!   product.
//! * [`suite`]: the acceptance battery.
//! * [`zk`]: the surfaces `Z_k = Tot O(-k)` over the projective line, their
//!   classical and noncommutative deformations and the second-order
//!   simultaneous obstruction.

pub mod cochain;
pub mod error;
pub mod gs;
pub mod linf;
pub mod quantize;
pub mod ratlaurent;
pub mod suite;
pub mod zk;

pub use error::{Error, Result};
