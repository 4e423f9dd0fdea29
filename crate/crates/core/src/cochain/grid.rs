//! Finite monomial grids: the decidable surface on which cochain identities
//! are checked.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::expr::{AlgRef, Cochain};
use crate::error::{Error, Result};
use crate::ratlaurent::{Cone, LaurentPoly, Monomial, Var};

/// Default exponent bound for grid checks.
pub const DEFAULT_BOUND: i64 = 4;

/// How a grid check is run: exponent bound per variable and an optional cap
/// on the number of tuples (a deterministic sample is drawn above the cap).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub bound: i64,
    pub max_points: Option<usize>,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> GridSpec {
        GridSpec {
            bound: DEFAULT_BOUND,
            max_points: None,
            seed: 0,
        }
    }
}

impl GridSpec {
    pub fn full(bound: i64) -> GridSpec {
        GridSpec {
            bound,
            max_points: None,
            seed: 0,
        }
    }

    pub fn sampled(bound: i64, max_points: usize, seed: u64) -> GridSpec {
        GridSpec {
            bound,
            max_points: Some(max_points),
            seed,
        }
    }
}

/// Per-slot exponent boxes. Tuples are enumerated in mixed-radix order with
/// the last variable of the last slot varying fastest.
#[derive(Clone, Debug)]
pub struct MonomialGrid {
    slots: Vec<Vec<(Var, i64, i64)>>,
}

impl MonomialGrid {
    pub fn new(slots: Vec<Vec<(Var, i64, i64)>>) -> MonomialGrid {
        MonomialGrid { slots }
    }

    /// Exponents in `[0, bound]` for nonnegative variables and
    /// `[-bound, bound]` for Laurent variables; parameters are not varied.
    pub fn for_sources(sources: &[AlgRef], bound: i64) -> MonomialGrid {
        MonomialGrid {
            slots: sources
                .iter()
                .map(|a| {
                    a.variables
                        .iter()
                        .map(|&(x, c)| match c {
                            Cone::NonNeg => (x, 0, bound),
                            Cone::AnyInt => (x, -bound, bound),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    fn radices(&self) -> Vec<u64> {
        self.slots
            .iter()
            .flatten()
            .map(|&(_, lo, hi)| (hi - lo + 1).max(0) as u64)
            .collect()
    }

    pub fn len(&self) -> u64 {
        self.radices().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `idx`-th tuple in enumeration order.
    pub fn tuple(&self, mut idx: u64) -> Vec<Monomial> {
        let radices = self.radices();
        let mut exps = vec![0i64; radices.len()];
        for (j, r) in radices.iter().enumerate().rev() {
            exps[j] = (idx % r) as i64;
            idx /= r;
        }
        let mut k = 0;
        self.slots
            .iter()
            .map(|vars| {
                Monomial::from_pairs(vars.iter().map(|&(x, lo, _)| {
                    let e = lo + exps[k];
                    k += 1;
                    (x, e)
                }))
            })
            .collect()
    }

    /// Indices visited under `spec`: all of them, or a sorted deterministic
    /// sample when the grid exceeds `spec.max_points`.
    pub fn indices(&self, spec: &GridSpec) -> Vec<u64> {
        let n = self.len();
        match spec.max_points {
            Some(cap) if (cap as u64) < n => {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                let mut idx: Vec<u64> = if n <= usize::MAX as u64 && n < (1 << 40) {
                    sample(&mut rng, n as usize, cap).into_iter().map(|i| i as u64).collect()
                } else {
                    use rand::Rng;
                    (0..cap).map(|_| rng.gen_range(0..n)).collect()
                };
                idx.sort_unstable();
                idx.dedup();
                idx
            }
            _ => (0..n).collect(),
        }
    }
}

/// A tuple on which two cochains disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub inputs: Vec<Monomial>,
    pub left: LaurentPoly,
    pub right: LaurentPoly,
}

impl std::fmt::Display for Counterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ins: Vec<String> = self.inputs.iter().map(|m| m.to_string()).collect();
        write!(f, "at ({}): {} ≠ {}", ins.join(", "), self.left, self.right)
    }
}

fn first_failure<F>(grid: &MonomialGrid, spec: &GridSpec, check: F) -> Result<Option<Counterexample>>
where
    F: Fn(&[LaurentPoly]) -> Result<Option<(LaurentPoly, LaurentPoly)>> + Sync,
{
    let idx = grid.indices(spec);
    let found = idx
        .par_iter()
        .map(|&i| {
            let mons = grid.tuple(i);
            let inputs: Vec<LaurentPoly> = mons.iter().cloned().map(LaurentPoly::monomial).collect();
            check(&inputs).map(|r| r.map(|(left, right)| Counterexample {
                inputs: mons,
                left,
                right,
            }))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    match found {
        None => Ok(None),
        Some(r) => r,
    }
}

/// Checks `f = g` on every tuple of `grid` (or the sample selected by
/// `spec`); returns the first disagreement in enumeration order.
pub fn equal_on_grid(f: &Cochain, g: &Cochain, grid: &MonomialGrid, spec: &GridSpec) -> Result<Option<Counterexample>> {
    if !f.same_signature(g) {
        return Err(Error::SpliceMismatch(format!(
            "cannot compare {} with {}",
            f.signature(),
            g.signature()
        )));
    }
    first_failure(grid, spec, |ins| {
        let (a, b) = (f.eval_unchecked(ins)?, g.eval_unchecked(ins)?);
        Ok((a != b).then_some((a, b)))
    })
}

/// `equal_on_grid` on the default grid of the signature.
pub fn equal_default(f: &Cochain, g: &Cochain, spec: &GridSpec) -> Result<Option<Counterexample>> {
    let grid = MonomialGrid::for_sources(f.sources(), spec.bound);
    equal_on_grid(f, g, &grid, spec)
}

/// First tuple where `f` is nonzero.
pub fn zero_on_grid(f: &Cochain, spec: &GridSpec) -> Result<Option<Counterexample>> {
    let grid = MonomialGrid::for_sources(f.sources(), spec.bound);
    first_failure(&grid, spec, |ins| {
        let a = f.eval_unchecked(ins)?;
        Ok((!a.is_zero()).then_some((a, LaurentPoly::zero())))
    })
}

/// First tuple where the closure's two values differ, on the grid of
/// `sources`. Used for identities that are not a difference of cochains.
pub fn check_identity<F>(sources: &[AlgRef], spec: &GridSpec, f: F) -> Result<Option<Counterexample>>
where
    F: Fn(&[LaurentPoly]) -> Result<(LaurentPoly, LaurentPoly)> + Sync,
{
    let grid = MonomialGrid::for_sources(sources, spec.bound);
    first_failure(&grid, spec, |ins| {
        let (a, b) = f(ins)?;
        Ok((a != b).then_some((a, b)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlaurent::AlgebraSpec;
    use std::sync::Arc;

    #[test]
    fn enumeration_is_ordered_and_complete() {
        let a: AlgRef = Arc::new(AlgebraSpec::new("W", &[("z", Cone::AnyInt), ("u", Cone::NonNeg)]));
        let g = MonomialGrid::for_sources(&[a.clone(), a], 1);
        assert_eq!(g.len(), 36);
        let first = g.tuple(0);
        assert_eq!(first[0].exponent(Var::new("z")), -1);
        assert_eq!(first[1].exponent(Var::new("u")), 0);
        let last = g.tuple(35);
        assert_eq!(last[1].exponent(Var::new("z")), 1);
        let all: std::collections::BTreeSet<_> = (0..36).map(|i| g.tuple(i)).collect();
        assert_eq!(all.len(), 36);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a: AlgRef = Arc::new(AlgebraSpec::new("U", &[("z", Cone::NonNeg), ("u", Cone::NonNeg)]));
        let g = MonomialGrid::for_sources(&[a.clone(), a.clone(), a], 4);
        let s = GridSpec::sampled(4, 50, 9);
        assert_eq!(g.indices(&s), g.indices(&s));
        assert_eq!(g.indices(&s).len(), 50);
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a: AlgRef = Arc::new(AlgebraSpec::new("U", &[("z", Cone::NonNeg)]));
        let b: AlgRef = Arc::new(AlgebraSpec::new("V", &[("zeta", Cone::NonNeg)]));
        let r = equal_default(&Cochain::product(&a, 2), &Cochain::product(&b, 2), &GridSpec::default());
        assert!(matches!(r, Err(Error::SpliceMismatch(_))));
    }
}
