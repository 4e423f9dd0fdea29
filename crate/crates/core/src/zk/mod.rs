//! The surfaces `Z_k = Tot O(-k)` over the projective line: canonical
//! charts, Poisson generators, classical and noncommutative deformations,
//! the second-order simultaneous obstruction and its Čech class.

mod cech;
mod classical;
mod geometry;
mod linalg;
mod obstruction;
mod quantization;
mod verdict;

pub use cech::{cech_h1_decide, h1_dimension, CechClass};
pub use classical::{psi_by_substitution, ClassicalDeformation};
pub use geometry::{build_zk, poisson_generators, t, u, v, z, zeta, PoissonOnZk, ZkGeometry};
pub use quantization::{undeformed_m, undeformed_phi, ZkQuantization};
pub use obstruction::{
    hkr_bivector, obstruction_closed_form, obstruction_second_order, simultaneous_residual, HkrBivector,
};
pub use linalg::{solve, Echelon, SparseVec};
pub use verdict::{simultaneous_verdict, CechSummary, TableEntry, VerdictReport, TABLE_BOUND};
