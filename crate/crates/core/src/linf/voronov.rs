use num::One;

use crate::cochain::{GElement, Signature};
use crate::error::Result;
use crate::gs::{APair, Diagonal, SpanDiagram};
use crate::ratlaurent::Rational;

/// Voronov data `(𝔤, 𝔞, P, M)` of a span together with the twist `Φ`.
///
/// `𝔤` is the direct sum of all `Hom(A_{X_1} ⊗ ⋯ ⊗ A_{X_q}, A_Y)` over the
/// span's algebras (a [`GElement`] holds finitely many components), `𝔞`
/// consists of the components `A_U^{⊗q} → A_W` and `A_V^{⊗q} → A_W`, and `P`
/// keeps exactly those.
#[derive(Clone, Debug)]
pub struct VoronovData {
    diagram: SpanDiagram,
    m: Diagonal,
    phi: APair,
    m_elem: GElement,
    phi_elem: GElement,
}

impl VoronovData {
    /// `M = (μ, ν, ξ)` and `Φ = (φ, ψ)`.
    pub fn for_diagram(d: &SpanDiagram) -> Result<VoronovData> {
        let m = Diagonal::multiplication(d);
        let phi = APair::legs(d);
        Ok(VoronovData {
            diagram: d.clone(),
            m_elem: m.to_gelement(),
            phi_elem: phi.to_gelement(),
            m,
            phi,
        })
    }

    pub fn diagram(&self) -> &SpanDiagram {
        &self.diagram
    }

    pub fn m(&self) -> &Diagonal {
        &self.m
    }

    pub fn phi(&self) -> &APair {
        &self.phi
    }

    /// Whether a component signature belongs to `𝔞`.
    pub fn in_abelian(&self, sig: &Signature) -> bool {
        let d = &self.diagram;
        sig.target == d.a_w.id
            && !sig.sources.is_empty()
            && (sig.sources.iter().all(|s| *s == d.a_u.id) || sig.sources.iter().all(|s| *s == d.a_v.id))
    }

    /// The projection `P: 𝔤 → 𝔞`.
    pub fn project(&self, e: &GElement) -> GElement {
        e.filter(|s| self.in_abelian(s))
    }

    /// `M ∉ ker P`. Always false for a span, where `M` is diagonal; the
    /// twist by `Φ` is what makes `⟨⟩ = P_Φ M` nonzero for bad diagrams.
    pub fn is_curved(&self) -> bool {
        !self.project(&self.m_elem).is_structurally_zero()
    }

    /// `P_Φ(y) = P exp[-, Φ](y) = Σ_{r=0}^{q} (1/r!) P[⋯[y, Φ], ⋯, Φ]` for
    /// `y` of arity `q`. Every commutator with `Φ` fills one more input
    /// slot, so the sum stops at `r = q`.
    pub fn p_phi(&self, y: &GElement) -> Result<GElement> {
        let q = (y.degree() + 1).max(0);
        let mut total = self.project(y);
        let mut cur = y.clone();
        let mut fact = Rational::one();
        for r in 1..=q {
            cur = cur.bracket(&self.phi_elem);
            if cur.is_structurally_zero() {
                break;
            }
            fact *= Rational::from_integer(r.into());
            total = total.add(&self.project(&cur).scale(&(Rational::one() / &fact)))?;
        }
        Ok(total)
    }

    /// `⟨⟩ = P_Φ(M)`, zero exactly when the legs are algebra morphisms.
    pub fn curvature(&self) -> Result<GElement> {
        self.p_phi(&self.m_elem)
    }

    /// `⟨a_1, …, a_n⟩ = P_Φ[⋯[[M, a_1], a_2], …, a_n]`.
    pub fn derived_bracket(&self, args: &[&APair]) -> Result<APair> {
        let q = args.iter().map(|a| a.arity()).sum::<usize>() + 2 - args.len();
        let mut cur = self.m_elem.clone();
        for a in args {
            cur = cur.bracket(&a.to_gelement());
        }
        Ok(APair::from_gelement(&self.diagram, &self.p_phi(&cur)?, q))
    }

    /// `P_Φ[⋯[x, a_1], …, a_n]` for `x ∈ 𝔤̃`.
    pub fn derived_mixed(&self, x: &Diagonal, args: &[&APair]) -> Result<APair> {
        let q = x.arity() + args.iter().map(|a| a.arity()).sum::<usize>() - args.len();
        let mut cur = x.to_gelement();
        for a in args {
            cur = cur.bracket(&a.to_gelement());
        }
        Ok(APair::from_gelement(&self.diagram, &self.p_phi(&cur)?, q))
    }

    /// The diagonal part of `[x, y]` computed in `𝔤`.
    pub fn g_bracket_diag(&self, x: &Diagonal, y: &Diagonal) -> Diagonal {
        let e = x.to_gelement().bracket(&y.to_gelement());
        Diagonal::from_gelement(&self.diagram, &e, x.arity() + y.arity() - 1)
    }
}

