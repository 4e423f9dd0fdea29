use num::One;

use super::bracket::{bracket, Route};
use super::element::LInfElement;
use super::voronov::VoronovData;
use crate::cochain::{AlgRef, Cochain, GridSpec};
use crate::error::{Error, Result};
use crate::gs::{APair, Chart, Diagonal, SpanDiagram};
use crate::ratlaurent::{EpsFamily, Rational};

/// The `ε^n` coefficients of the Maurer–Cartan equation for `M̃[1] ⊕ Φ̃`.
///
/// With `M_0 = M` and `Φ_0 = Φ`:
///
/// * `g = -½ Σ_{i+j=n} [M_i, M_j]` on each chart,
/// * `a = Σ_{i+j+k=n} M_i∘(Φ_j⊗Φ_k) - Σ_{i+j=n} Φ_i∘M_j`.
///
/// Both are the components of `exp_⟨⟩(M̃[1] ⊕ Φ̃)`; they vanish through order
/// `N` iff the deformed span is a diagram of associative algebras modulo
/// `ε^{N+1}`.
#[derive(Clone, Debug)]
pub struct McResidual {
    pub order: usize,
    pub g: Diagonal,
    pub a: APair,
}

impl McResidual {
    pub fn grid_zero(&self, spec: &GridSpec) -> Result<Option<String>> {
        if let Some((c, ce)) = self.g.grid_zero(spec)? {
            return Ok(Some(format!("g-residual on {c:?}: {ce}")));
        }
        if let Some((c, ce)) = self.a.grid_zero(spec)? {
            return Ok(Some(format!("a-residual on {c:?}: {ce}")));
        }
        Ok(None)
    }

    pub fn grid_equal(&self, other: &McResidual, spec: &GridSpec) -> Result<Option<String>> {
        if let Some((c, ce)) = self.g.grid_equal(&other.g, spec)? {
            return Ok(Some(format!("g-residuals differ on {c:?}: {ce}")));
        }
        if let Some((c, ce)) = self.a.grid_equal(&other.a, spec)? {
            return Ok(Some(format!("a-residuals differ on {c:?}: {ce}")));
        }
        Ok(None)
    }
}

fn check_families(mt: &EpsFamily<Diagonal>, pt: &EpsFamily<APair>, n: usize) -> Result<()> {
    let available = mt.order().min(pt.order());
    if available < n {
        return Err(Error::OrderExceeded {
            requested: n,
            available,
        });
    }
    for (j, m) in mt.coeffs().iter().enumerate() {
        if m.arity() != 2 {
            return Err(Error::Invalid(format!("M_{j} has arity {}, expected 2", m.arity())));
        }
    }
    for (j, p) in pt.coeffs().iter().enumerate() {
        if p.arity() != 1 {
            return Err(Error::Invalid(format!("Φ_{j} has arity {}, expected 1", p.arity())));
        }
    }
    Ok(())
}

/// Residual at order `n` from the collected form. The order-0 entries of
/// the families must be the undeformed `M` and `Φ`.
pub fn mc_residual(
    d: &SpanDiagram,
    mt: &EpsFamily<Diagonal>,
    pt: &EpsFamily<APair>,
    n: usize,
) -> Result<McResidual> {
    check_families(mt, pt, n)?;
    let half = Rational::new(1.into(), 2.into());
    let chart_g = |c: Chart| -> Result<Cochain> {
        let a: AlgRef = d.algebra(c).clone();
        let mut parts = Vec::new();
        for i in 0..=n {
            let (mi, mj) = (mt.get(i)?.get(c), mt.get(n - i)?.get(c));
            let sig = crate::cochain::Signature {
                sources: vec![a.id.clone(); 3],
                target: a.id.clone(),
            };
            if let Some(b) = crate::cochain::g_bracket(mi, mj).component(&sig) {
                parts.push(b.scale(&-half.clone()));
            }
        }
        Cochain::sum(vec![a.clone(); 3], a, &parts)
    };
    let g = Diagonal {
        u: chart_g(Chart::U)?,
        v: chart_g(Chart::V)?,
        w: chart_g(Chart::W)?,
    };
    let chart_a = |c: Chart| -> Result<Cochain> {
        let mut parts = Vec::new();
        for i in 0..=n {
            for j in 0..=n - i {
                let k = n - i - j;
                let xi = &mt.get(i)?.w;
                let args = [pt.get(j)?.get(c).clone(), pt.get(k)?.get(c).clone()];
                parts.push(Cochain::compose(xi, &args)?);
            }
        }
        for i in 0..=n {
            let f = pt.get(i)?.get(c);
            parts.push(Cochain::compose(f, &[mt.get(n - i)?.get(c).clone()])?.neg());
        }
        Cochain::sum(vec![d.algebra(c).clone(); 2], d.a_w.clone(), &parts)
    };
    let a = APair {
        u: chart_a(Chart::U)?,
        v: chart_a(Chart::V)?,
    };
    Ok(McResidual { order: n, g, a })
}

/// Rejects anything but total degree 0.
pub fn validate_mc_candidate(x: &LInfElement) -> Result<()> {
    if x.degree() != 0 {
        return Err(Error::Invalid(format!(
            "Maurer–Cartan candidates have degree 0, got {}",
            x.degree()
        )));
    }
    Ok(())
}

/// All ordered tuples of positive integers summing to `n`.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Residual at order `n` computed as the `ε^n` coefficient of
/// `Σ_p (1/p!) ⟨X, …, X⟩` with `X = Σ_{j≥1} ε^j (M_j[1] ⊕ Φ_j)`, the
/// brackets being those of the undeformed data in `vd`.
pub fn mc_residual_exp(
    vd: &VoronovData,
    route: Route,
    mt: &EpsFamily<Diagonal>,
    pt: &EpsFamily<APair>,
    n: usize,
) -> Result<McResidual> {
    check_families(mt, pt, n)?;
    let d = vd.diagram();
    let xs: Vec<LInfElement> = (0..=n)
        .map(|j| LInfElement::new(0, Some(mt.get(j)?.clone()), Some(pt.get(j)?.clone())))
        .collect::<Result<_>>()?;
    for x in &xs {
        validate_mc_candidate(x)?;
    }
    let mut total = LInfElement::zero(1);
    if n == 0 {
        total = bracket(vd, route, &[])?;
    }
    for comp in compositions(n).into_iter().filter(|c| !c.is_empty()) {
        let fact = (1..=comp.len()).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()));
        let args: Vec<LInfElement> = comp.iter().map(|&j| xs[j].clone()).collect();
        let b = bracket(vd, route, &args)?;
        total = total.add(&b.scale(&(Rational::one() / &fact)))?;
    }
    Ok(McResidual {
        order: n,
        g: total.g.unwrap_or_else(|| Diagonal::zero(d, 3)),
        a: total.a.unwrap_or_else(|| APair::zero(d, 2)),
    })
}

