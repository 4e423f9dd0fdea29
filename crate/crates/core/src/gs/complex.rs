use crate::cochain::{
    hochschild_d, parity_sign, zero_on_grid, equal_default, BimoduleStructure, Cochain, Counterexample, GElement,
    GridSpec,
};
use crate::error::{Error, Result};

use super::diagram::{Chart, SpanDiagram};

/// A diagonal triple `(x_U, x_V, x_W)` of endomorphism cochains of one arity:
/// an element of `C^{0,q}`.
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub u: Cochain,
    pub v: Cochain,
    pub w: Cochain,
}

/// A pair `(a_U: A_U^{⊗q} → A_W, a_V: A_V^{⊗q} → A_W)`: an element of
/// `C^{1,q}` for the span.
#[derive(Clone, Debug)]
pub struct APair {
    pub u: Cochain,
    pub v: Cochain,
}

fn check_endo(c: &Cochain, alg: &str, q: usize, what: &str) -> Result<()> {
    if c.arity() != q || c.target().id != alg || c.sources().iter().any(|s| s.id != alg) {
        return Err(Error::AlgebraMismatch {
            expected: format!("{what}: {alg}^{q} -> {alg}"),
            got: c.signature().to_string(),
        });
    }
    Ok(())
}

impl Diagonal {
    pub fn new(d: &SpanDiagram, u: Cochain, v: Cochain, w: Cochain) -> Result<Diagonal> {
        let q = w.arity();
        check_endo(&u, &d.a_u.id, q, "x_U")?;
        check_endo(&v, &d.a_v.id, q, "x_V")?;
        check_endo(&w, &d.a_w.id, q, "x_W")?;
        Ok(Diagonal { u, v, w })
    }

    pub fn zero(d: &SpanDiagram, q: usize) -> Diagonal {
        let z = |a: &crate::cochain::AlgRef| Cochain::zero(vec![a.clone(); q], a.clone());
        Diagonal {
            u: z(&d.a_u),
            v: z(&d.a_v),
            w: z(&d.a_w),
        }
    }

    /// `(μ, ν, ξ)`.
    pub fn multiplication(d: &SpanDiagram) -> Diagonal {
        Diagonal {
            u: d.mu.clone(),
            v: d.nu.clone(),
            w: d.xi.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        self.w.arity()
    }

    /// Shifted degree `|x| = arity - 1`.
    pub fn degree(&self) -> i64 {
        self.w.degree()
    }

    pub fn get(&self, c: Chart) -> &Cochain {
        match c {
            Chart::U => &self.u,
            Chart::V => &self.v,
            Chart::W => &self.w,
        }
    }

    pub fn map(&self, f: impl Fn(&Cochain) -> Result<Cochain>) -> Result<Diagonal> {
        Ok(Diagonal {
            u: f(&self.u)?,
            v: f(&self.v)?,
            w: f(&self.w)?,
        })
    }

    pub fn zip(&self, other: &Diagonal, f: impl Fn(&Cochain, &Cochain) -> Result<Cochain>) -> Result<Diagonal> {
        Ok(Diagonal {
            u: f(&self.u, &other.u)?,
            v: f(&self.v, &other.v)?,
            w: f(&self.w, &other.w)?,
        })
    }

    pub fn add(&self, other: &Diagonal) -> Result<Diagonal> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn scale(&self, c: &crate::ratlaurent::Rational) -> Diagonal {
        self.map(|a| Ok(a.scale(c))).expect("scaling is total")
    }

    pub fn to_gelement(&self) -> GElement {
        GElement::from_parts(self.degree(), [self.u.clone(), self.v.clone(), self.w.clone()])
            .expect("diagonal components share a degree")
    }

    /// The diagonal components of a `𝔤` element of arity `q`; mixed
    /// components are ignored.
    pub fn from_gelement(d: &SpanDiagram, e: &GElement, q: usize) -> Diagonal {
        let pick = |a: &crate::cochain::AlgRef| {
            let sig = crate::cochain::Signature {
                sources: vec![a.id.clone(); q],
                target: a.id.clone(),
            };
            e.component(&sig)
                .cloned()
                .unwrap_or_else(|| Cochain::zero(vec![a.clone(); q], a.clone()))
        };
        Diagonal {
            u: pick(&d.a_u),
            v: pick(&d.a_v),
            w: pick(&d.a_w),
        }
    }

    pub fn grid_zero(&self, spec: &GridSpec) -> Result<Option<(Chart, Counterexample)>> {
        for c in [Chart::U, Chart::V, Chart::W] {
            if let Some(ce) = zero_on_grid(self.get(c), spec)? {
                return Ok(Some((c, ce)));
            }
        }
        Ok(None)
    }

    pub fn grid_equal(&self, other: &Diagonal, spec: &GridSpec) -> Result<Option<(Chart, Counterexample)>> {
        for c in [Chart::U, Chart::V, Chart::W] {
            if let Some(ce) = equal_default(self.get(c), other.get(c), spec)? {
                return Ok(Some((c, ce)));
            }
        }
        Ok(None)
    }
}

impl APair {
    pub fn new(d: &SpanDiagram, u: Cochain, v: Cochain) -> Result<APair> {
        let q = u.arity();
        let ok = |c: &Cochain, a: &str| {
            c.arity() == q && c.target().id == d.a_w.id && c.sources().iter().all(|s| s.id == a)
        };
        if !ok(&u, &d.a_u.id) || !ok(&v, &d.a_v.id) {
            return Err(Error::AlgebraMismatch {
                expected: format!("({0}^{q} -> {2}, {1}^{q} -> {2})", d.a_u.id, d.a_v.id, d.a_w.id),
                got: format!("({}, {})", u.signature(), v.signature()),
            });
        }
        Ok(APair { u, v })
    }

    pub fn zero(d: &SpanDiagram, q: usize) -> APair {
        APair {
            u: Cochain::zero(vec![d.a_u.clone(); q], d.a_w.clone()),
            v: Cochain::zero(vec![d.a_v.clone(); q], d.a_w.clone()),
        }
    }

    /// `Φ = (φ, ψ)`.
    pub fn legs(d: &SpanDiagram) -> APair {
        APair {
            u: d.phi.clone(),
            v: d.psi.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        self.u.arity()
    }

    pub fn degree(&self) -> i64 {
        self.u.degree()
    }

    pub fn get(&self, c: Chart) -> &Cochain {
        match c {
            Chart::U => &self.u,
            Chart::V => &self.v,
            Chart::W => panic!("an a-pair has no W component"),
        }
    }

    pub fn map(&self, f: impl Fn(&Cochain) -> Result<Cochain>) -> Result<APair> {
        Ok(APair {
            u: f(&self.u)?,
            v: f(&self.v)?,
        })
    }

    pub fn zip(&self, other: &APair, f: impl Fn(&Cochain, &Cochain) -> Result<Cochain>) -> Result<APair> {
        Ok(APair {
            u: f(&self.u, &other.u)?,
            v: f(&self.v, &other.v)?,
        })
    }

    pub fn add(&self, other: &APair) -> Result<APair> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn scale(&self, c: &crate::ratlaurent::Rational) -> APair {
        self.map(|a| Ok(a.scale(c))).expect("scaling is total")
    }

    pub fn to_gelement(&self) -> GElement {
        GElement::from_parts(self.degree(), [self.u.clone(), self.v.clone()])
            .expect("components share a degree")
    }

    /// The pure components (all sources `U`, or all sources `V`, target
    /// `W`) of a `𝔤` element of arity `q`.
    pub fn from_gelement(d: &SpanDiagram, e: &GElement, q: usize) -> APair {
        let pick = |a: &crate::cochain::AlgRef| {
            let sig = crate::cochain::Signature {
                sources: vec![a.id.clone(); q],
                target: d.a_w.id.clone(),
            };
            e.component(&sig)
                .cloned()
                .unwrap_or_else(|| Cochain::zero(vec![a.clone(); q], d.a_w.clone()))
        };
        APair {
            u: pick(&d.a_u),
            v: pick(&d.a_v),
        }
    }

    pub fn grid_zero(&self, spec: &GridSpec) -> Result<Option<(Chart, Counterexample)>> {
        for c in [Chart::U, Chart::V] {
            if let Some(ce) = zero_on_grid(self.get(c), spec)? {
                return Ok(Some((c, ce)));
            }
        }
        Ok(None)
    }

    pub fn grid_equal(&self, other: &APair, spec: &GridSpec) -> Result<Option<(Chart, Counterexample)>> {
        for c in [Chart::U, Chart::V] {
            if let Some(ce) = equal_default(self.get(c), other.get(c), spec)? {
                return Ok(Some((c, ce)));
            }
        }
        Ok(None)
    }
}

/// A cochain of total degree `n` in the reduced, truncated complex:
/// `C^{0,n+1} ⊕ C^{1,n}`. The `C^{1,n}` part is absent for `n = 0`.
#[derive(Clone, Debug)]
pub struct GsCochain {
    pub n: usize,
    pub g: Diagonal,
    pub a: Option<APair>,
}

impl GsCochain {
    pub fn new(n: usize, g: Diagonal, a: Option<APair>) -> Result<GsCochain> {
        if g.arity() != n + 1 {
            return Err(Error::ArityMismatch {
                expected: n + 1,
                got: g.arity(),
            });
        }
        match (&a, n) {
            (Some(_), 0) => {
                return Err(Error::Invalid(
                    "C^{1,0} is excluded from the truncated complex".into(),
                ))
            }
            (Some(p), _) if p.arity() != n => {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: p.arity(),
                })
            }
            _ => {}
        }
        Ok(GsCochain { n, g, a })
    }

    /// The a-part, with an explicit zero when absent.
    pub fn a_or_zero(&self, d: &SpanDiagram) -> APair {
        self.a.clone().unwrap_or_else(|| APair::zero(d, self.n))
    }

    pub fn grid_equal(&self, d: &SpanDiagram, other: &GsCochain, spec: &GridSpec) -> Result<Option<String>> {
        if self.n != other.n {
            return Ok(Some(format!("degrees {} and {}", self.n, other.n)));
        }
        if let Some((c, ce)) = self.g.grid_equal(&other.g, spec)? {
            return Ok(Some(format!("g-part, chart {c:?}, {ce}")));
        }
        if self.n > 0 {
            if let Some((c, ce)) = self.a_or_zero(d).grid_equal(&other.a_or_zero(d), spec)? {
                return Ok(Some(format!("a-part, chart {c:?}, {ce}")));
            }
        }
        Ok(None)
    }

    pub fn grid_zero(&self, d: &SpanDiagram, spec: &GridSpec) -> Result<Option<String>> {
        if let Some((c, ce)) = self.g.grid_zero(spec)? {
            return Ok(Some(format!("g-part, chart {c:?}, {ce}")));
        }
        if let Some(a) = &self.a {
            if let Some((c, ce)) = a.grid_zero(spec)? {
                return Ok(Some(format!("a-part, chart {c:?}, {ce}")));
            }
        }
        let _ = d;
        Ok(None)
    }
}

/// `d_H` on each diagonal component, each algebra a bimodule over itself.
pub fn hochschild_diag(d: &SpanDiagram, x: &Diagonal) -> Result<Diagonal> {
    Ok(Diagonal {
        u: hochschild_d(&x.u, &BimoduleStructure::diagonal(&d.mu)?)?,
        v: hochschild_d(&x.v, &BimoduleStructure::diagonal(&d.nu)?)?,
        w: hochschild_d(&x.w, &BimoduleStructure::diagonal(&d.xi)?)?,
    })
}

/// `d_H` on an a-pair, `A_W` a bimodule over `A_U` via `φ` and over `A_V`
/// via `ψ`.
pub fn hochschild_pair(d: &SpanDiagram, a: &APair) -> Result<APair> {
    Ok(APair {
        u: hochschild_d(&a.u, &BimoduleStructure::induced(&d.mu, &d.xi, &d.phi)?)?,
        v: hochschild_d(&a.v, &BimoduleStructure::induced(&d.nu, &d.xi, &d.psi)?)?,
    })
}

/// `x_W ∘ f^{⊗q}` for a unary leg `f`.
pub(crate) fn after_legs(x_w: &Cochain, f: &Cochain) -> Result<Cochain> {
    Cochain::compose(x_w, &vec![f.clone(); x_w.arity()])
}

/// The simplicial differential `d_Δ = d_0 - d_1` on `C^{0,q}`:
/// `(φ∘x_U - x_W∘φ^{⊗q}, ψ∘x_V - x_W∘ψ^{⊗q})`.
pub fn simplicial_d(d: &SpanDiagram, x: &Diagonal) -> Result<APair> {
    let side = |leg: &Cochain, xs: &Cochain| -> Result<Cochain> {
        Cochain::compose(leg, &[xs.clone()])?.sub(&after_legs(&x.w, leg)?)
    };
    APair::new(d, side(&d.phi, &x.u)?, side(&d.psi, &x.v)?)
}

/// The Gerstenhaber–Schack differential in the packaging of the unary L∞
/// bracket: for `x ⊕ a` of total degree `n`,
///
/// `gs_d(x ⊕ a) = (-1)^{n+1} d_H x  ⊕  (x_W∘Φ^{⊗(n+1)} - Φ∘x) + (-1)^{n-1} d_H a`.
///
/// The middle term equals `-d_Δ x`.
pub fn gs_d(d: &SpanDiagram, x: &GsCochain) -> Result<GsCochain> {
    let n = x.n as i64;
    let g = hochschild_diag(d, &x.g)?.scale(&parity_sign(n + 1));
    let mut a = simplicial_d(d, &x.g)?.scale(&parity_sign(1));
    if let Some(ap) = &x.a {
        a = a.add(&hochschild_pair(d, ap)?.scale(&parity_sign(n - 1)))?;
    }
    GsCochain::new(x.n + 1, g, Some(a))
}

/// Nondegenerate and degenerate simplices of the span's nerve, as labels
/// for hand-built component lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simplex {
    /// A vertex: `C^{0,q}` on one chart.
    Vertex(Chart),
    /// The arrow `W → U` or `W → V`: `C^{1,q}`.
    Arrow(Chart),
    /// An identity arrow (degenerate 1-simplex).
    Identity(Chart),
    /// Any 2-simplex of the nerve (all degenerate for a span).
    TwoSimplex,
}

/// Result of [`reduced_truncated_guard`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardReport {
    pub ok: bool,
    pub reasons: Vec<String>,
}

/// The labelled components of a cochain built by this module.
pub fn components(x: &GsCochain) -> Vec<(Simplex, Cochain)> {
    let mut out = vec![
        (Simplex::Vertex(Chart::U), x.g.u.clone()),
        (Simplex::Vertex(Chart::V), x.g.v.clone()),
        (Simplex::Vertex(Chart::W), x.g.w.clone()),
    ];
    if let Some(a) = &x.a {
        out.push((Simplex::Arrow(Chart::U), a.u.clone()));
        out.push((Simplex::Arrow(Chart::V), a.v.clone()));
    }
    out
}

/// Checks that a component list lives in the reduced (no degenerate
/// simplices) and truncated (`q ≥ 1`) complex of the span.
pub fn reduced_truncated_guard(parts: &[(Simplex, Cochain)]) -> GuardReport {
    let mut reasons = Vec::new();
    for (s, c) in parts {
        match s {
            Simplex::Identity(ch) => reasons.push(format!("identity-arrow component on {ch:?}")),
            Simplex::TwoSimplex => reasons.push("component on a degenerate 2-simplex".into()),
            Simplex::Arrow(Chart::W) => reasons.push("no arrow starts and ends at W".into()),
            Simplex::Vertex(_) | Simplex::Arrow(_) if c.arity() == 0 => {
                reasons.push(format!("{s:?} component with q = 0 (excluded by truncation)"))
            }
            _ => {}
        }
    }
    GuardReport {
        ok: reasons.is_empty(),
        reasons,
    }
}
