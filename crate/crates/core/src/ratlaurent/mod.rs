//! Exact rational arithmetic, sparse multivariate Laurent polynomials,
//! algebra cones, substitution morphisms and ε-truncated series.

mod algebra;
mod parse;
mod poly;
mod series;
mod var;

pub use algebra::{AlgebraSpec, Cone, MorphismSpec};
pub use parse::{parse_poly, parse_poly_in, parse_rational};
pub use poly::{rat, LaurentPoly, Monomial, Rational};
pub use series::{eps_mul, EpsFamily};
pub use var::Var;
