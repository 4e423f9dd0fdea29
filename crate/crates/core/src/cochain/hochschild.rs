use num::One;

use super::expr::{AlgRef, Cochain};
use super::gerstenhaber::{circle_i, g_bracket};
use crate::error::{Error, Result};
use crate::ratlaurent::{rat, Rational};

/// `M` as an `S`-bimodule: `s · m = mult_M(left(s), m)` and
/// `m · s = mult_M(m, right(s))`.
#[derive(Clone, Debug)]
pub struct BimoduleStructure {
    pub source_mult: Cochain,
    pub module_mult: Cochain,
    pub left: Cochain,
    pub right: Cochain,
}

impl BimoduleStructure {
    /// An algebra as a bimodule over itself.
    pub fn diagonal(mult: &Cochain) -> Result<BimoduleStructure> {
        let a = mult.target().clone();
        BimoduleStructure::induced(mult, mult, &Cochain::identity(&a))
    }

    /// `M` as an `S`-bimodule through a morphism `f: S → M` acting on both
    /// sides.
    pub fn induced(source_mult: &Cochain, module_mult: &Cochain, f: &Cochain) -> Result<BimoduleStructure> {
        for (name, m) in [("source", source_mult), ("module", module_mult)] {
            if m.arity() != 2 || m.sources().iter().any(|s| s.id != m.target().id) {
                return Err(Error::Invalid(format!(
                    "{name} multiplication must be an endomorphism of arity 2, got {}",
                    m.signature()
                )));
            }
        }
        if f.arity() != 1 || f.sources()[0].id != source_mult.target().id || f.target().id != module_mult.target().id {
            return Err(Error::Invalid(format!("action map has signature {}", f.signature())));
        }
        Ok(BimoduleStructure {
            source_mult: source_mult.clone(),
            module_mult: module_mult.clone(),
            left: f.clone(),
            right: f.clone(),
        })
    }

    pub fn source(&self) -> &AlgRef {
        self.source_mult.target()
    }

    pub fn module(&self) -> &AlgRef {
        self.module_mult.target()
    }
}

/// The Hochschild differential
/// `d(x)(s_0..s_q) = s_0·x(s_1..s_q) + Σ_{i=1}^{q} (-1)^i x(.., s_{i-1}s_i, ..)
///   + (-1)^{q+1} x(s_0..s_{q-1})·s_q`.
pub fn hochschild_d(x: &Cochain, bm: &BimoduleStructure) -> Result<Cochain> {
    let (s, m) = (bm.source(), bm.module());
    if x.target().id != m.id || x.sources().iter().any(|a| a.id != s.id) {
        return Err(Error::AlgebraMismatch {
            expected: format!("{}^q -> {}", s.id, m.id),
            got: x.signature().to_string(),
        });
    }
    let q = x.arity();
    let mut parts = vec![Cochain::compose(&bm.module_mult, &[bm.left.clone(), x.clone()])?];
    for i in 1..=q {
        let term = circle_i(x, &bm.source_mult, i - 1)?;
        parts.push(if i % 2 == 1 { term.neg() } else { term });
    }
    let last = Cochain::compose(&bm.module_mult, &[x.clone(), bm.right.clone()])?;
    parts.push(if (q + 1) % 2 == 1 { last.neg() } else { last });
    Cochain::sum(vec![s.clone(); q + 1], m.clone(), &parts)
}

/// `½[μ, μ]`; grid-zero exactly when `μ` is associative on the grid.
pub fn assoc_defect(mu: &Cochain) -> Result<Cochain> {
    if mu.arity() != 2 || mu.sources().iter().any(|s| s.id != mu.target().id) {
        return Err(Error::Invalid(format!(
            "associativity defect needs an arity-2 endomorphism, got {}",
            mu.signature()
        )));
    }
    let b = g_bracket(mu, mu);
    let sig = crate::cochain::Signature {
        sources: vec![mu.target().id.clone(); 3],
        target: mu.target().id.clone(),
    };
    Ok(match b.component(&sig) {
        Some(c) => c.scale(&rat(1, 2)),
        None => Cochain::zero(vec![mu.target().clone(); 3], mu.target().clone()),
    })
}

/// `(-1)^n` as a rational.
pub fn parity_sign(n: i64) -> Rational {
    if n.rem_euclid(2) == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{zero_on_grid, GridSpec, SlotFactor};
    use crate::ratlaurent::{parse_poly, AlgebraSpec, Cone, LaurentPoly, Var};
    use std::sync::Arc;

    fn alg() -> AlgRef {
        Arc::new(AlgebraSpec::new("A", &[("z", Cone::NonNeg), ("u", Cone::NonNeg)]))
    }

    #[test]
    fn identity_differential_is_product() {
        let a = alg();
        let mu = Cochain::product(&a, 2);
        let bm = BimoduleStructure::diagonal(&mu).unwrap();
        let d = hochschild_d(&Cochain::identity(&a), &bm).unwrap();
        let (p, q) = (parse_poly("z^2").unwrap(), parse_poly("u").unwrap());
        assert_eq!(d.evaluate(&[p, q]).unwrap(), parse_poly("z^2*u").unwrap());
    }

    #[test]
    fn square_vanishes() {
        let a = alg();
        let mu = Cochain::product(&a, 2);
        let bm = BimoduleStructure::diagonal(&mu).unwrap();
        let x = Cochain::from_terms(
            vec![a.clone()],
            a.clone(),
            vec![(parse_poly("z^2").unwrap(), vec![SlotFactor::deriv(0, &[(Var::new("u"), 1)])])],
        )
        .unwrap();
        let dd = hochschild_d(&hochschild_d(&x, &bm).unwrap(), &bm).unwrap();
        assert!(zero_on_grid(&dd, &GridSpec::full(3)).unwrap().is_none());
    }

    #[test]
    fn non_associative_defect() {
        let a: AlgRef = Arc::new(AlgebraSpec::new("C", &[("z", Cone::NonNeg)]));
        let z = Var::new("z");
        let mu = Cochain::from_terms(
            vec![a.clone(), a.clone()],
            a.clone(),
            vec![(LaurentPoly::one(), vec![SlotFactor::plain(0), SlotFactor::deriv(1, &[(z, 1)])])],
        )
        .unwrap();
        let d = assoc_defect(&mu).unwrap();
        let zz = parse_poly("z").unwrap();
        assert!(d.evaluate(&[zz.clone(), zz.clone(), zz.clone()]).unwrap().is_zero());
        let r = d.evaluate(&[zz.clone(), zz, parse_poly("z^2").unwrap()]).unwrap();
        assert_eq!(r, parse_poly("-2*z^2").unwrap());
        assert!(assoc_defect(&Cochain::product(&a, 2)).unwrap().is_structurally_zero()
            || zero_on_grid(&assoc_defect(&Cochain::product(&a, 2)).unwrap(), &GridSpec::full(3))
                .unwrap()
                .is_none());
    }
}
