use std::collections::BTreeMap;

use num::{One, Zero};

use super::expr::{Cochain, Node, Signature};
use super::grid::{equal_default, zero_on_grid, Counterexample, GridSpec};
use crate::error::{Error, Result};
use crate::ratlaurent::Rational;

/// `f ∘_i g = f(id^{⊗i} ⊗ g ⊗ id^{⊗(m-i)})`.
///
/// Errors if `i` is out of range or the target of `g` is not the algebra of
/// slot `i` of `f`.
pub fn circle_i(f: &Cochain, g: &Cochain, i: usize) -> Result<Cochain> {
    if i >= f.arity() {
        return Err(Error::SpliceMismatch(format!(
            "slot {i} out of range for arity {}",
            f.arity()
        )));
    }
    if f.sources()[i].id != g.target().id {
        return Err(Error::SpliceMismatch(format!(
            "slot {i} of {} expects `{}`, got a cochain into `{}`",
            f.signature(),
            f.sources()[i].id,
            g.target().id
        )));
    }
    let q = g.arity();
    let mut sources = f.sources()[..i].to_vec();
    sources.extend(g.sources().iter().cloned());
    sources.extend(f.sources()[i + 1..].iter().cloned());
    if f.is_structurally_zero() || g.is_structurally_zero() {
        return Ok(Cochain::zero(sources, f.target().clone()));
    }
    let mut args: Vec<Node> = (0..i).map(Node::Slot).collect();
    args.push(Node::Apply(g.clone(), (i..i + q).map(Node::Slot).collect()));
    args.extend((i + 1..f.arity()).map(|j| Node::Slot(j + q - 1)));
    Cochain::new(sources, f.target().clone(), Node::Apply(f.clone(), args))
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// An element of the graded Lie algebra of cochains: a finite direct sum of
/// homogeneous cochains of one shifted degree, indexed by signature.
#[derive(Clone, Debug)]
pub struct GElement {
    degree: i64,
    parts: BTreeMap<Signature, Cochain>,
}

impl GElement {
    pub fn zero(degree: i64) -> GElement {
        GElement {
            degree,
            parts: BTreeMap::new(),
        }
    }

    pub fn from_cochain(c: Cochain) -> GElement {
        let mut e = GElement::zero(c.degree());
        e.push(c).expect("degree matches");
        e
    }

    pub fn from_parts(degree: i64, parts: impl IntoIterator<Item = Cochain>) -> Result<GElement> {
        let mut e = GElement::zero(degree);
        for c in parts {
            e.push(c)?;
        }
        Ok(e)
    }

    /// Adds one homogeneous component.
    pub fn push(&mut self, c: Cochain) -> Result<()> {
        if c.degree() != self.degree {
            return Err(Error::Invalid(format!(
                "component of degree {} in an element of degree {}",
                c.degree(),
                self.degree
            )));
        }
        if c.is_structurally_zero() {
            return Ok(());
        }
        let sig = c.signature();
        let merged = match self.parts.remove(&sig) {
            Some(old) => old.add(&c)?,
            None => c,
        };
        self.parts.insert(sig, merged);
        Ok(())
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Signature, &Cochain)> {
        self.parts.iter()
    }

    pub fn component(&self, sig: &Signature) -> Option<&Cochain> {
        self.parts.get(sig)
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add(&self, other: &GElement) -> Result<GElement> {
        if other.parts.is_empty() {
            return Ok(self.clone());
        }
        if self.parts.is_empty() {
            return Ok(other.clone());
        }
        let mut out = self.clone();
        for c in other.parts.values() {
            out.push(c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GElement) -> Result<GElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> GElement {
        if c.is_zero() {
            return GElement::zero(self.degree);
        }
        GElement {
            degree: self.degree,
            parts: self.parts.iter().map(|(s, f)| (s.clone(), f.scale(c))).collect(),
        }
    }

    pub fn neg(&self) -> GElement {
        self.scale(&-Rational::one())
    }

    /// `f ∘ g = Σ_i (-1)^{n i} f ∘_i g` summed over all components;
    /// incompatible splices contribute nothing.
    pub fn circle(&self, other: &GElement) -> GElement {
        let n = other.degree;
        let mut out = GElement::zero(self.degree + other.degree);
        for f in self.parts.values() {
            for g in other.parts.values() {
                for i in 0..f.arity() {
                    if f.sources()[i].id != g.target().id {
                        continue;
                    }
                    let c = circle_i(f, g, i).expect("compatible splice");
                    let s = sign(n.rem_euclid(2) == 1 && i % 2 == 1);
                    out.push(c.scale(&s)).expect("degree is additive");
                }
            }
        }
        out
    }

    /// `[f, g] = f ∘ g - (-1)^{mn} g ∘ f`.
    pub fn bracket(&self, other: &GElement) -> GElement {
        let (m, n) = (self.degree, other.degree);
        let left = self.circle(other);
        let right = other.circle(self);
        let s = sign((m * n).rem_euclid(2) == 1);
        left.sub(&right.scale(&s)).expect("equal degrees")
    }

    /// Keeps the components whose signature satisfies `pred`.
    pub fn filter(&self, pred: impl Fn(&Signature) -> bool) -> GElement {
        GElement {
            degree: self.degree,
            parts: self
                .parts
                .iter()
                .filter(|(s, _)| pred(s))
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    /// First component and tuple where the element is nonzero.
    pub fn grid_zero(&self, spec: &GridSpec) -> Result<Option<(Signature, Counterexample)>> {
        for (sig, c) in &self.parts {
            if let Some(ce) = zero_on_grid(c, spec)? {
                return Ok(Some((sig.clone(), ce)));
            }
        }
        Ok(None)
    }

    /// Componentwise grid equality; a missing component counts as zero.
    pub fn grid_equal(&self, other: &GElement, spec: &GridSpec) -> Result<Option<(Signature, Counterexample)>> {
        let mut sigs: Vec<&Signature> = self.parts.keys().chain(other.parts.keys()).collect();
        sigs.sort();
        sigs.dedup();
        for sig in sigs {
            let r = match (self.parts.get(sig), other.parts.get(sig)) {
                (Some(a), Some(b)) => equal_default(a, b, spec)?,
                (Some(a), None) | (None, Some(a)) => zero_on_grid(a, spec)?,
                (None, None) => None,
            };
            if let Some(ce) = r {
                return Ok(Some((sig.clone(), ce)));
            }
        }
        Ok(None)
    }
}

/// The circle product of two cochains inside the direct sum.
pub fn circle(f: &Cochain, g: &Cochain) -> GElement {
    GElement::from_cochain(f.clone()).circle(&GElement::from_cochain(g.clone()))
}

/// The Gerstenhaber bracket of two cochains inside the direct sum.
pub fn g_bracket(f: &Cochain, g: &Cochain) -> GElement {
    GElement::from_cochain(f.clone()).bracket(&GElement::from_cochain(g.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{SlotFactor};
    use crate::ratlaurent::{parse_poly, AlgebraSpec, Cone, LaurentPoly, Var};
    use std::sync::Arc;

    fn alg() -> Arc<AlgebraSpec> {
        Arc::new(AlgebraSpec::new("A", &[("z", Cone::NonNeg), ("u", Cone::NonNeg)]))
    }

    #[test]
    fn circle_with_identity() {
        let a = alg();
        let mu = Cochain::product(&a, 2);
        let f = circle_i(&mu, &Cochain::identity(&a), 0).unwrap();
        assert!(equal_default(&f, &mu, &GridSpec::full(2)).unwrap().is_none());
    }

    #[test]
    fn left_association() {
        let a = alg();
        let mu = Cochain::product(&a, 2);
        let f = circle_i(&mu, &mu, 0).unwrap();
        let (p, q, r) = (parse_poly("z").unwrap(), parse_poly("u^2").unwrap(), parse_poly("z*u").unwrap());
        assert_eq!(f.evaluate(&[p, q, r]).unwrap(), parse_poly("z^2*u^3").unwrap());
    }

    #[test]
    fn explicit_mismatch_is_loud() {
        let a = alg();
        let b = Arc::new(AlgebraSpec::new("B", &[("x", Cone::NonNeg)]));
        assert!(circle_i(&Cochain::product(&a, 2), &Cochain::identity(&b), 1).is_err());
        assert!(circle_i(&Cochain::product(&a, 2), &Cochain::identity(&a), 2).is_err());
    }

    #[test]
    fn commuting_derivations() {
        let a = alg();
        let (z, u) = (Var::new("z"), Var::new("u"));
        let d = Cochain::from_terms(
            vec![a.clone()],
            a.clone(),
            vec![(parse_poly("z").unwrap(), vec![SlotFactor::deriv(0, &[(z, 1)])])],
        )
        .unwrap();
        let e = Cochain::from_terms(
            vec![a.clone()],
            a.clone(),
            vec![(parse_poly("u").unwrap(), vec![SlotFactor::deriv(0, &[(u, 1)])])],
        )
        .unwrap();
        assert!(g_bracket(&d, &e).grid_zero(&GridSpec::default()).unwrap().is_none());
        let f = Cochain::from_terms(
            vec![a.clone()],
            a.clone(),
            vec![(LaurentPoly::one(), vec![SlotFactor::deriv(0, &[(z, 1)])])],
        )
        .unwrap();
        assert!(g_bracket(&d, &f).grid_zero(&GridSpec::default()).unwrap().is_some());
    }

    #[test]
    fn product_is_associative() {
        let a = alg();
        let mu = Cochain::product(&a, 2);
        assert!(g_bracket(&mu, &mu).grid_zero(&GridSpec::full(3)).unwrap().is_none());
    }
}
