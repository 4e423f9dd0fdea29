//! Poisson bivectors on coordinate charts and the Kontsevich star product
//! through second order.

mod bivector;
mod star;

pub use bivector::{poisson_bracket, schouten_self, Bivector};
pub use star::{
    b1_cochain, b2_cochain, kontsevich_star2, kontsevich_star2_weighted, star_assoc_defect, AssocReport,
    KontsevichWeights, StarProduct,
};
