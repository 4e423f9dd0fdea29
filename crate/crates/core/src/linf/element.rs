use crate::cochain::GridSpec;
use crate::error::{Error, Result};
use crate::gs::{APair, Diagonal, GsCochain, SpanDiagram};
use crate::ratlaurent::Rational;

/// A homogeneous element `x[1] ⊕ a` of `𝔤̃[1] ⊕ 𝔞`.
///
/// The degree is the L∞[1] degree: `|x[1]| = |x| - 1 = arity(x) - 2` and
/// `|a| = arity(a) - 1`. A missing part is zero.
#[derive(Clone, Debug)]
pub struct LInfElement {
    degree: i64,
    pub g: Option<Diagonal>,
    pub a: Option<APair>,
}

impl LInfElement {
    pub fn new(degree: i64, g: Option<Diagonal>, a: Option<APair>) -> Result<LInfElement> {
        if let Some(x) = &g {
            if x.arity() as i64 != degree + 2 {
                return Err(Error::Invalid(format!(
                    "g-part of arity {} in an element of degree {degree}",
                    x.arity()
                )));
            }
        }
        if let Some(p) = &a {
            if p.arity() as i64 != degree + 1 {
                return Err(Error::Invalid(format!(
                    "a-part of arity {} in an element of degree {degree}",
                    p.arity()
                )));
            }
        }
        Ok(LInfElement { degree, g, a })
    }

    pub fn zero(degree: i64) -> LInfElement {
        LInfElement { degree, g: None, a: None }
    }

    /// `x[1]`.
    pub fn from_g(x: Diagonal) -> LInfElement {
        LInfElement {
            degree: x.arity() as i64 - 2,
            g: Some(x),
            a: None,
        }
    }

    pub fn from_a(a: APair) -> LInfElement {
        LInfElement {
            degree: a.arity() as i64 - 1,
            g: None,
            a: Some(a),
        }
    }

    /// `x[1] ⊕ a` for a cochain of total degree `n`; the L∞ degree is `n - 1`.
    pub fn from_gs(x: &GsCochain) -> LInfElement {
        LInfElement {
            degree: x.n as i64 - 1,
            g: Some(x.g.clone()),
            a: x.a.clone(),
        }
    }

    pub fn to_gs(&self, d: &SpanDiagram) -> Result<GsCochain> {
        let n = self.degree + 1;
        if n < 0 {
            return Err(Error::Invalid(format!("no cochains of total degree {n}")));
        }
        let g = self.g.clone().unwrap_or_else(|| Diagonal::zero(d, (n + 1) as usize));
        let a = if n == 0 {
            None
        } else {
            Some(self.a.clone().unwrap_or_else(|| APair::zero(d, n as usize)))
        };
        GsCochain::new(n as usize, g, a)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn add(&self, other: &LInfElement) -> Result<LInfElement> {
        if self.degree != other.degree {
            return Err(Error::Invalid(format!(
                "adding elements of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let g = match (&self.g, &other.g) {
            (Some(x), Some(y)) => Some(x.add(y)?),
            (x, y) => x.clone().or_else(|| y.clone()),
        };
        let a = match (&self.a, &other.a) {
            (Some(x), Some(y)) => Some(x.add(y)?),
            (x, y) => x.clone().or_else(|| y.clone()),
        };
        Ok(LInfElement {
            degree: self.degree,
            g,
            a,
        })
    }

    pub fn scale(&self, c: &Rational) -> LInfElement {
        LInfElement {
            degree: self.degree,
            g: self.g.as_ref().map(|x| x.scale(c)),
            a: self.a.as_ref().map(|x| x.scale(c)),
        }
    }

    pub fn neg(&self) -> LInfElement {
        self.scale(&-Rational::from_integer(1.into()))
    }

    /// Describes the first grid point where the element is nonzero.
    pub fn grid_zero(&self, spec: &GridSpec) -> Result<Option<String>> {
        if let Some(x) = &self.g {
            if let Some((c, ce)) = x.grid_zero(spec)? {
                return Ok(Some(format!("g-part on {c:?}: {ce}")));
            }
        }
        if let Some(a) = &self.a {
            if let Some((c, ce)) = a.grid_zero(spec)? {
                return Ok(Some(format!("a-part on {c:?}: {ce}")));
            }
        }
        Ok(None)
    }

    pub fn grid_equal(&self, other: &LInfElement, spec: &GridSpec) -> Result<Option<String>> {
        if self.degree != other.degree {
            return Ok(Some(format!("degrees {} and {} differ", self.degree, other.degree)));
        }
        self.add(&other.neg())?.grid_zero(spec)
    }
}
