//! Random polydifferential cochains for property tests and the CLI suite.

use std::sync::Arc;

use rand::Rng;

use super::expr::{AlgRef, Cochain, SlotFactor};
use crate::ratlaurent::{rat, Cone, LaurentPoly, Monomial, MorphismSpec};

#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    pub max_terms: usize,
    pub max_deriv: u32,
    pub max_coeff_exp: i64,
}

impl Default for RandomShape {
    fn default() -> RandomShape {
        RandomShape {
            max_terms: 3,
            max_deriv: 2,
            max_coeff_exp: 2,
        }
    }
}

/// A random coefficient monomial inside the cone of `a`.
pub fn random_monomial(rng: &mut impl Rng, a: &AlgRef, max_exp: i64) -> Monomial {
    Monomial::from_pairs(a.variables.iter().map(|&(x, c)| {
        let lo = match c {
            Cone::NonNeg => 0,
            Cone::AnyInt => -max_exp,
        };
        (x, rng.gen_range(lo..=max_exp))
    }))
}

/// A random element of `a` with up to `terms` monomials.
pub fn random_poly(rng: &mut impl Rng, a: &AlgRef, terms: usize, max_exp: i64) -> LaurentPoly {
    let n = rng.gen_range(1..=terms.max(1));
    LaurentPoly::from_terms((0..n).map(|_| {
        let c = rng.gen_range(-3i64..=3);
        (random_monomial(rng, a, max_exp), rat(if c == 0 { 1 } else { c }, 1))
    }))
}

/// A random sum of terms `c · Π_j ∂^{α_j}(f_j(s_j))` where `f_j` is
/// `pullbacks[j]` (identity when `None`).
pub fn random_cochain(
    rng: &mut impl Rng,
    sources: &[AlgRef],
    target: &AlgRef,
    pullbacks: &[Option<Arc<MorphismSpec>>],
    shape: RandomShape,
) -> Cochain {
    let nterms = rng.gen_range(1..=shape.max_terms.max(1));
    let vars = target.vars();
    let terms = (0..nterms)
        .map(|_| {
            let c = rng.gen_range(-3i64..=3);
            let coeff = LaurentPoly::term(
                rat(if c == 0 { 1 } else { c }, 1),
                random_monomial(rng, target, shape.max_coeff_exp),
            );
            let factors = (0..sources.len())
                .map(|j| {
                    let derivs: Vec<_> = vars
                        .iter()
                        .map(|&x| (x, rng.gen_range(0..=shape.max_deriv)))
                        .filter(|&(_, n)| n > 0)
                        .collect();
                    SlotFactor {
                        slot: j,
                        pullback: pullbacks.get(j).cloned().flatten(),
                        derivs,
                    }
                })
                .collect();
            (coeff, factors)
        })
        .collect();
    Cochain::from_terms(sources.to_vec(), target.clone(), terms).expect("random cochain is linear")
}

/// Random endomorphism cochain of arity `q` on `a`.
pub fn random_endo(rng: &mut impl Rng, a: &AlgRef, q: usize, shape: RandomShape) -> Cochain {
    random_cochain(rng, &vec![a.clone(); q], a, &vec![None; q], shape)
}
