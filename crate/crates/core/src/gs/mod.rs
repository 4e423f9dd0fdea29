//! Span diagrams `A_U ← A_W → A_V` of associative algebras and their
//! reduced, truncated Gerstenhaber–Schack complex.
//!
//! For a span the nerve has only the two nondegenerate arrows `W → U` and
//! `W → V`, so a cochain of total degree `n` is a diagonal triple in
//! `C^{0,n+1}` plus a pair in `C^{1,n}`.

mod complex;
mod config;
mod diagram;

pub use complex::{
    components, gs_d, hochschild_diag, hochschild_pair, reduced_truncated_guard, simplicial_d, APair, Diagonal,
    GsCochain, GuardReport, Simplex,
};
pub(crate) use complex::after_legs;
pub use config::{AlgebraConfig, DiagramConfig, MorphismConfig, VariableConfig};
pub use diagram::{verify_diagram, Chart, DiagramFailure, DiagramReport, SpanDiagram};
