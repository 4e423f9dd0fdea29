//! Diagram configuration files.
//!
//! ```json
//! {
//!   "algebras": [
//!     { "id": "U", "variables": [ { "name": "z", "cone": "nonneg" }, { "name": "u", "cone": "nonneg" } ] },
//!     ...
//!   ],
//!   "morphisms": [
//!     { "id": "phi0", "source": "U", "target": "W", "substitution": { "z": "z", "u": "u" } },
//!     { "id": "psi", "source": "V", "target": "W", "cochain": { ...cochain literal... } }
//!   ],
//!   "span": { "U": "U", "V": "V", "W": "W", "phi": "phi0", "psi": "psi" },
//!   "multiplications": { "nu": { ...cochain literal... } }
//! }
//! ```
//!
//! A morphism given by `substitution` is a ring morphism; one given by a
//! `cochain` literal is an arbitrary linear map and may reference the
//! substitution morphisms. Multiplications default to the commutative
//! product.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::diagram::SpanDiagram;
use crate::cochain::{Cochain, CochainLiteral, Registry};
use crate::error::{Error, Result};
use crate::ratlaurent::{parse_poly_in, AlgebraSpec, Cone, MorphismSpec, Var};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VariableConfig {
    pub name: String,
    pub cone: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub id: String,
    pub variables: Vec<VariableConfig>,
    #[serde(default)]
    pub parameters: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismConfig {
    pub id: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub substitution: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub cochain: Option<CochainLiteral>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpanConfig {
    #[serde(rename = "U")]
    pub u: String,
    #[serde(rename = "V")]
    pub v: String,
    #[serde(rename = "W")]
    pub w: String,
    pub phi: String,
    pub psi: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramConfig {
    pub algebras: Vec<AlgebraConfig>,
    pub morphisms: Vec<MorphismConfig>,
    pub span: SpanConfig,
    #[serde(default)]
    pub multiplications: BTreeMap<String, CochainLiteral>,
}

impl AlgebraConfig {
    pub fn build(&self) -> Result<AlgebraSpec> {
        let mut vars = Vec::new();
        for v in &self.variables {
            let cone = match v.cone.as_str() {
                "nonneg" => Cone::NonNeg,
                "any" => Cone::AnyInt,
                other => return Err(Error::Config(format!("unknown cone `{other}` for `{}`", v.name))),
            };
            vars.push((Var::new(&v.name), cone));
        }
        Ok(AlgebraSpec {
            id: self.id.clone(),
            variables: vars,
            parameters: self.parameters.iter().map(|p| Var::new(p)).collect(),
        })
    }
}

impl DiagramConfig {
    pub fn from_json(text: &str) -> Result<DiagramConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Builds the registry of named objects and the span.
    pub fn build(&self) -> Result<(Registry, SpanDiagram)> {
        let mut reg = Registry::default();
        for a in &self.algebras {
            reg.add_algebra(a.build()?);
        }
        let mut linear: BTreeMap<String, Cochain> = BTreeMap::new();
        for m in self.morphisms.iter().filter(|m| m.substitution.is_some()) {
            let (src, tgt) = (reg.algebra(&m.source)?, reg.algebra(&m.target)?);
            let universe = tgt.universe();
            let mut sub = BTreeMap::new();
            for (x, img) in m.substitution.as_ref().expect("filtered") {
                sub.insert(Var::new(x), parse_poly_in(img, &universe)?);
            }
            let spec = reg.add_morphism(MorphismSpec::new(&m.id, src, tgt, sub)?);
            linear.insert(m.id.clone(), Cochain::morphism(&spec));
        }
        for m in &self.morphisms {
            match (&m.substitution, &m.cochain) {
                (Some(_), None) => {}
                (None, Some(lit)) => {
                    let c = lit.build(&reg)?;
                    if c.arity() != 1 || c.sources()[0].id != m.source || c.target().id != m.target {
                        return Err(Error::Config(format!(
                            "map `{}` must be a unary cochain {} -> {}",
                            m.id, m.source, m.target
                        )));
                    }
                    linear.insert(m.id.clone(), c);
                }
                _ => {
                    return Err(Error::Config(format!(
                        "map `{}` needs exactly one of `substitution` or `cochain`",
                        m.id
                    )))
                }
            }
        }
        let (a_u, a_v, a_w) = (
            reg.algebra(&self.span.u)?,
            reg.algebra(&self.span.v)?,
            reg.algebra(&self.span.w)?,
        );
        let leg = |id: &str| {
            linear
                .get(id)
                .cloned()
                .ok_or_else(|| Error::Config(format!("unknown map `{id}`")))
        };
        let mult = |name: &str, a: &crate::cochain::AlgRef| -> Result<Cochain> {
            match self.multiplications.get(name) {
                Some(lit) => lit.build(&reg),
                None => Ok(Cochain::product(a, 2)),
            }
        };
        for key in self.multiplications.keys() {
            if !["mu", "nu", "xi"].contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown multiplication `{key}`")));
            }
        }
        let d = SpanDiagram::new(
            a_u.clone(),
            a_v.clone(),
            a_w.clone(),
            mult("mu", &a_u)?,
            mult("nu", &a_v)?,
            mult("xi", &a_w)?,
            leg(&self.span.phi)?,
            leg(&self.span.psi)?,
        )?;
        Ok((reg, d))
    }
}
