//! JSON cochain literals:
//!
//! ```json
//! { "sources": ["V", "V"], "target": "W",
//!   "terms": [ { "coeff": "z*u",
//!                "slots": [ { "pullback": "psi0", "derivs": { "z": 1 } },
//!                           { "pullback": "psi0", "derivs": { "u": 1 } } ] } ] }
//! ```
//!
//! Each term means `coeff · Π_slots ∂^derivs(pullback(input))`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expr::{AlgRef, Cochain, SlotFactor};
use crate::error::{Error, Result};
use crate::ratlaurent::{parse_poly_in, AlgebraSpec, MorphismSpec, Var};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SlotLiteral {
    #[serde(default = "identity_name")]
    pub pullback: String,
    #[serde(default)]
    pub derivs: BTreeMap<String, u32>,
}

fn identity_name() -> String {
    "identity".into()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermLiteral {
    pub coeff: String,
    pub slots: Vec<SlotLiteral>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CochainLiteral {
    pub sources: Vec<String>,
    pub target: String,
    pub terms: Vec<TermLiteral>,
}

/// Named algebras and morphisms that literals may refer to.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    pub algebras: BTreeMap<String, AlgRef>,
    pub morphisms: BTreeMap<String, Arc<MorphismSpec>>,
}

impl Registry {
    pub fn add_algebra(&mut self, a: AlgebraSpec) -> AlgRef {
        let a = Arc::new(a);
        self.algebras.insert(a.id.clone(), a.clone());
        a
    }

    pub fn add_morphism(&mut self, m: MorphismSpec) -> Arc<MorphismSpec> {
        let m = Arc::new(m);
        self.morphisms.insert(m.id.clone(), m.clone());
        m
    }

    pub fn algebra(&self, id: &str) -> Result<AlgRef> {
        self.algebras
            .get(id)
            .cloned()
            .ok_or_else(|| Error::Config(format!("unknown algebra `{id}`")))
    }

    pub fn morphism(&self, id: &str) -> Result<Arc<MorphismSpec>> {
        self.morphisms
            .get(id)
            .cloned()
            .ok_or_else(|| Error::Config(format!("unknown morphism `{id}`")))
    }
}

impl CochainLiteral {
    pub fn from_json(text: &str) -> Result<CochainLiteral> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Resolves names against `reg` and builds the cochain.
    pub fn build(&self, reg: &Registry) -> Result<Cochain> {
        let sources = self
            .sources
            .iter()
            .map(|s| reg.algebra(s))
            .collect::<Result<Vec<_>>>()?;
        let target = reg.algebra(&self.target)?;
        let universe = target.universe();
        let mut terms = Vec::new();
        for t in &self.terms {
            let coeff = parse_poly_in(&t.coeff, &universe)?;
            if t.slots.len() != sources.len() {
                return Err(Error::ArityMismatch {
                    expected: sources.len(),
                    got: t.slots.len(),
                });
            }
            let mut factors = Vec::new();
            for (j, s) in t.slots.iter().enumerate() {
                let pullback = if s.pullback == "identity" {
                    if sources[j].id != target.id {
                        return Err(Error::SpliceMismatch(format!(
                            "slot {j}: identity pullback from `{}` into `{}`",
                            sources[j].id, target.id
                        )));
                    }
                    None
                } else {
                    let m = reg.morphism(&s.pullback)?;
                    if m.source.id != sources[j].id || m.target.id != target.id {
                        return Err(Error::SpliceMismatch(format!(
                            "slot {j}: morphism `{}` is {} -> {}, slot needs {} -> {}",
                            m.id, m.source.id, m.target.id, sources[j].id, target.id
                        )));
                    }
                    Some(m)
                };
                let mut derivs = Vec::new();
                for (x, &n) in &s.derivs {
                    let v = Var::new(x);
                    if target.cone_of(v).is_none() || target.parameters.contains(&v) {
                        return Err(Error::UnknownVariable(x.clone()));
                    }
                    if n > 0 {
                        derivs.push((v, n));
                    }
                }
                factors.push(SlotFactor {
                    slot: j,
                    pullback,
                    derivs,
                });
            }
            terms.push((coeff, factors));
        }
        Cochain::from_terms(sources, target, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlaurent::{parse_poly, Cone};

    #[test]
    fn builds_poisson_literal() {
        let mut reg = Registry::default();
        reg.add_algebra(AlgebraSpec::new("U", &[("z", Cone::NonNeg), ("u", Cone::NonNeg)]));
        let lit = CochainLiteral::from_json(
            r#"{"sources":["U","U"],"target":"U","terms":[
                {"coeff":"z*u","slots":[{"derivs":{"z":1}},{"derivs":{"u":1}}]},
                {"coeff":"-z*u","slots":[{"derivs":{"u":1}},{"derivs":{"z":1}}]}]}"#,
        )
        .unwrap();
        let c = lit.build(&reg).unwrap();
        let r = c
            .evaluate(&[parse_poly("z^2*u").unwrap(), parse_poly("z*u^3").unwrap()])
            .unwrap();
        assert_eq!(r, parse_poly("5*z^3*u^4").unwrap());
    }

    #[test]
    fn rejects_bad_references() {
        let mut reg = Registry::default();
        reg.add_algebra(AlgebraSpec::new("U", &[("z", Cone::NonNeg)]));
        let lit = CochainLiteral::from_json(
            r#"{"sources":["U"],"target":"U","terms":[{"coeff":"1","slots":[{"pullback":"nope"}]}]}"#,
        )
        .unwrap();
        assert!(matches!(lit.build(&reg), Err(Error::Config(_))));
        let lit = CochainLiteral::from_json(
            r#"{"sources":["U"],"target":"U","terms":[{"coeff":"w","slots":[{}]}]}"#,
        )
        .unwrap();
        assert!(matches!(lit.build(&reg), Err(Error::UnknownVariable(_))));
    }
}
