use std::collections::BTreeMap;
use std::sync::Arc;

use num::One;

use super::poly::{LaurentPoly, Monomial, Rational};
use super::var::Var;
use crate::error::{Error, Result};

/// Exponent constraint on one variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cone {
    NonNeg,
    AnyInt,
}

impl Cone {
    pub fn admits(self, e: i64) -> bool {
        match self {
            Cone::NonNeg => e >= 0,
            Cone::AnyInt => true,
        }
    }
}

/// A commutative algebra of Laurent polynomials cut out by a cone.
///
/// `parameters` are extra commuting symbols (e.g. `t1`) that may appear in
/// elements with nonnegative exponents; they are never differentiated and
/// never enumerated by grids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub id: String,
    pub variables: Vec<(Var, Cone)>,
    pub parameters: Vec<Var>,
}

impl AlgebraSpec {
    pub fn new(id: &str, variables: &[(&str, Cone)]) -> AlgebraSpec {
        AlgebraSpec {
            id: id.to_owned(),
            variables: variables.iter().map(|&(x, c)| (Var::new(x), c)).collect(),
            parameters: Vec::new(),
        }
    }

    pub fn with_parameters(mut self, params: &[Var]) -> AlgebraSpec {
        for p in params {
            if !self.parameters.contains(p) {
                self.parameters.push(*p);
            }
        }
        self
    }

    pub fn vars(&self) -> Vec<Var> {
        self.variables.iter().map(|&(x, _)| x).collect()
    }

    /// Variables followed by parameters.
    pub fn universe(&self) -> Vec<Var> {
        self.vars().into_iter().chain(self.parameters.iter().copied()).collect()
    }

    pub fn cone_of(&self, x: Var) -> Option<Cone> {
        self.variables
            .iter()
            .find(|(y, _)| *y == x)
            .map(|&(_, c)| c)
            .or_else(|| self.parameters.contains(&x).then_some(Cone::NonNeg))
    }

    pub fn admits_monomial(&self, m: &Monomial) -> bool {
        m.pairs()
            .all(|(x, e)| self.cone_of(x).is_some_and(|c| c.admits(e)))
    }

    /// `None` if `p` lies in the algebra, otherwise a violating monomial.
    pub fn membership(&self, p: &LaurentPoly) -> Option<Monomial> {
        p.terms()
            .map(|(m, _)| m)
            .find(|m| !self.admits_monomial(m))
            .cloned()
    }

    pub fn contains(&self, p: &LaurentPoly) -> bool {
        self.membership(p).is_none()
    }

    pub fn check(&self, p: &LaurentPoly) -> Result<()> {
        match self.membership(p) {
            None => Ok(()),
            Some(m) => Err(Error::ConeViolation {
                algebra: self.id.clone(),
                monomial: m.to_string(),
            }),
        }
    }
}

/// A unital ring morphism given by substituting each source variable.
///
/// Parameters common to both algebras map to themselves.
#[derive(Clone, Debug)]
pub struct MorphismSpec {
    pub id: String,
    pub source: Arc<AlgebraSpec>,
    pub target: Arc<AlgebraSpec>,
    substitution: BTreeMap<Var, LaurentPoly>,
    monomial_images: Option<BTreeMap<Var, (Rational, Monomial)>>,
}

impl PartialEq for MorphismSpec {
    fn eq(&self, other: &MorphismSpec) -> bool {
        self.id == other.id
            && self.source == other.source
            && self.target == other.target
            && self.substitution == other.substitution
    }
}

impl MorphismSpec {
    /// Builds the morphism; every source variable must have an image over
    /// the target universe, and each image must lie in the target cone.
    pub fn new(
        id: &str,
        source: Arc<AlgebraSpec>,
        target: Arc<AlgebraSpec>,
        substitution: BTreeMap<Var, LaurentPoly>,
    ) -> Result<MorphismSpec> {
        let mut substitution = substitution;
        for x in source.vars() {
            if !substitution.contains_key(&x) {
                return Err(Error::Invalid(format!(
                    "morphism `{id}` has no image for variable `{x}`"
                )));
            }
        }
        for p in &source.parameters {
            substitution.entry(*p).or_insert_with(|| LaurentPoly::var(*p));
        }
        let target_universe = target.universe();
        for (x, img) in &substitution {
            if source.cone_of(*x).is_none() {
                return Err(Error::UnknownVariable(x.to_string()));
            }
            if let Some(y) = img.variables().into_iter().find(|y| !target_universe.contains(y)) {
                return Err(Error::UnknownVariable(y.to_string()));
            }
            target.check(img)?;
        }
        let monomial_images = substitution
            .iter()
            .map(|(x, img)| img.as_term().map(|(c, m)| (*x, (c.clone(), m.clone()))))
            .collect::<Option<BTreeMap<_, _>>>();
        Ok(MorphismSpec {
            id: id.to_owned(),
            source,
            target,
            substitution,
            monomial_images,
        })
    }

    /// The identity substitution between two algebras on the same variables.
    pub fn identity_like(id: &str, source: Arc<AlgebraSpec>, target: Arc<AlgebraSpec>) -> Result<MorphismSpec> {
        let sub = source.vars().into_iter().map(|x| (x, LaurentPoly::var(x))).collect();
        MorphismSpec::new(id, source, target, sub)
    }

    pub fn image_of(&self, x: Var) -> Option<&LaurentPoly> {
        self.substitution.get(&x)
    }

    pub fn substitution(&self) -> &BTreeMap<Var, LaurentPoly> {
        &self.substitution
    }

    /// Image of a single monomial.
    pub fn apply_monomial(&self, m: &Monomial) -> Result<LaurentPoly> {
        if let Some(images) = &self.monomial_images {
            let mut c = Rational::one();
            let mut out = Monomial::one();
            for (x, e) in m.pairs() {
                let (a, n) = images
                    .get(&x)
                    .ok_or_else(|| Error::UnknownVariable(x.to_string()))?;
                c *= num::pow::pow(a.clone(), e.unsigned_abs() as usize);
                if e < 0 {
                    c = Rational::one() / c;
                }
                out = out.mul(&n.pow(e));
            }
            return Ok(LaurentPoly::term(c, out));
        }
        let mut acc = LaurentPoly::one();
        for (x, e) in m.pairs() {
            let img = self
                .substitution
                .get(&x)
                .ok_or_else(|| Error::UnknownVariable(x.to_string()))?;
            acc = &acc * &img.pow(e)?;
        }
        Ok(acc)
    }

    /// Ring morphism applied to `p`. The result is a legal Laurent
    /// polynomial even when it leaves the target cone; use
    /// [`MorphismSpec::apply_checked`] to enforce the cone.
    pub fn apply(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (m, c) in p.terms() {
            let img = self.apply_monomial(m)?;
            out += img.scale(c);
        }
        Ok(out)
    }

    pub fn apply_checked(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let img = self.apply(p)?;
        self.target.check(&img)?;
        Ok(img)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlaurent::rat;

    fn charts(k: i64) -> (Arc<AlgebraSpec>, Arc<AlgebraSpec>, MorphismSpec) {
        let v = Arc::new(AlgebraSpec::new("V", &[("zeta", Cone::NonNeg), ("v", Cone::NonNeg)]));
        let w = Arc::new(AlgebraSpec::new("W", &[("z", Cone::AnyInt), ("u", Cone::NonNeg)]));
        let mut sub = BTreeMap::new();
        sub.insert(Var::new("zeta"), LaurentPoly::mono(rat(1, 1), &[("z", -1)]));
        sub.insert(Var::new("v"), LaurentPoly::mono(rat(1, 1), &[("z", k), ("u", 1)]));
        let psi = MorphismSpec::new("psi0", v.clone(), w.clone(), sub).unwrap();
        (v, w, psi)
    }

    #[test]
    fn psi0_on_monomials() {
        let k = 3;
        let (_, _, psi) = charts(k);
        for m in 0..4 {
            for n in 0..4 {
                let p = LaurentPoly::mono(rat(1, 1), &[("zeta", m), ("v", n)]);
                let expect = LaurentPoly::mono(rat(1, 1), &[("z", n * k - m), ("u", n)]);
                assert_eq!(psi.apply(&p).unwrap(), expect);
            }
        }
        assert_eq!(psi.apply(&LaurentPoly::one()).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn membership_witness() {
        let u = AlgebraSpec::new("U", &[("z", Cone::NonNeg), ("u", Cone::NonNeg)]);
        assert!(u.contains(&LaurentPoly::mono(rat(1, 1), &[("z", 2), ("u", 1)])));
        let bad = LaurentPoly::mono(rat(1, 1), &[("z", -1)]);
        assert_eq!(u.membership(&bad), Some(Monomial::from_pairs([(Var::new("z"), -1)])));
        let (_, w, _) = charts(1);
        assert!(w.contains(&LaurentPoly::mono(rat(1, 1), &[("z", -3), ("u", 2)])));
        assert!(!w.contains(&LaurentPoly::mono(rat(1, 1), &[("t1", 1)])));
    }

    #[test]
    fn rejects_image_outside_target() {
        let u = Arc::new(AlgebraSpec::new("U", &[("z", Cone::NonNeg)]));
        let mut sub = BTreeMap::new();
        sub.insert(Var::new("z"), LaurentPoly::mono(rat(1, 1), &[("z", -1)]));
        assert!(matches!(
            MorphismSpec::new("bad", u.clone(), u, sub),
            Err(Error::ConeViolation { .. })
        ));
    }
}
