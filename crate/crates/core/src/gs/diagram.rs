use std::sync::Arc;

use serde::Serialize;

use crate::cochain::{
    assoc_defect, check_identity, zero_on_grid, AlgRef, Cochain, Counterexample, GridSpec,
};
use crate::error::{Error, Result};
use crate::linf::VoronovData;
use crate::ratlaurent::{LaurentPoly, MorphismSpec};

/// The three charts of a span `U ← W → V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Chart {
    U,
    V,
    W,
}

/// `(A_U, μ) --φ--> (A_W, ξ) <--ψ-- (A_V, ν)`.
///
/// `phi` and `psi` are unary cochains; for honest diagrams they are ring
/// morphisms built from substitutions, but any linear map may be supplied
/// (which is how corrupted diagrams are represented).
#[derive(Clone, Debug)]
pub struct SpanDiagram {
    pub a_u: AlgRef,
    pub a_v: AlgRef,
    pub a_w: AlgRef,
    pub mu: Cochain,
    pub nu: Cochain,
    pub xi: Cochain,
    pub phi: Cochain,
    pub psi: Cochain,
}

fn expect_sig(c: &Cochain, sources: &[&AlgRef], target: &AlgRef, what: &str) -> Result<()> {
    let ok = c.target().id == target.id
        && c.arity() == sources.len()
        && c.sources().iter().zip(sources).all(|(a, b)| a.id == b.id);
    if ok {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch {
            expected: format!(
                "{what}: {} -> {}",
                sources.iter().map(|a| a.id.as_str()).collect::<Vec<_>>().join(" ⊗ "),
                target.id
            ),
            got: c.signature().to_string(),
        })
    }
}

impl SpanDiagram {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a_u: AlgRef,
        a_v: AlgRef,
        a_w: AlgRef,
        mu: Cochain,
        nu: Cochain,
        xi: Cochain,
        phi: Cochain,
        psi: Cochain,
    ) -> Result<SpanDiagram> {
        if a_u.id == a_w.id || a_v.id == a_w.id {
            return Err(Error::Invalid(
                "the apex algebra must have an id distinct from both legs".into(),
            ));
        }
        expect_sig(&mu, &[&a_u, &a_u], &a_u, "mu")?;
        expect_sig(&nu, &[&a_v, &a_v], &a_v, "nu")?;
        expect_sig(&xi, &[&a_w, &a_w], &a_w, "xi")?;
        expect_sig(&phi, &[&a_u], &a_w, "phi")?;
        expect_sig(&psi, &[&a_v], &a_w, "psi")?;
        Ok(SpanDiagram {
            a_u,
            a_v,
            a_w,
            mu,
            nu,
            xi,
            phi,
            psi,
        })
    }

    /// Commutative products on all three algebras and substitution
    /// morphisms for the legs.
    pub fn commutative(phi: &Arc<MorphismSpec>, psi: &Arc<MorphismSpec>) -> Result<SpanDiagram> {
        if phi.target.id != psi.target.id {
            return Err(Error::Invalid("legs of a span must share their target".into()));
        }
        let (a_u, a_v, a_w) = (phi.source.clone(), psi.source.clone(), phi.target.clone());
        SpanDiagram::new(
            a_u.clone(),
            a_v.clone(),
            a_w.clone(),
            Cochain::product(&a_u, 2),
            Cochain::product(&a_v, 2),
            Cochain::product(&a_w, 2),
            Cochain::morphism(phi),
            Cochain::morphism(psi),
        )
    }

    pub fn algebra(&self, c: Chart) -> &AlgRef {
        match c {
            Chart::U => &self.a_u,
            Chart::V => &self.a_v,
            Chart::W => &self.a_w,
        }
    }

    pub fn mult(&self, c: Chart) -> &Cochain {
        match c {
            Chart::U => &self.mu,
            Chart::V => &self.nu,
            Chart::W => &self.xi,
        }
    }

    /// The leg out of `U` or `V`.
    pub fn leg(&self, c: Chart) -> &Cochain {
        match c {
            Chart::U => &self.phi,
            Chart::V => &self.psi,
            Chart::W => panic!("W is the apex of the span"),
        }
    }

    /// The same span with replaced multiplications.
    pub fn with_mults(&self, mu: Cochain, nu: Cochain, xi: Cochain) -> Result<SpanDiagram> {
        SpanDiagram::new(
            self.a_u.clone(),
            self.a_v.clone(),
            self.a_w.clone(),
            mu,
            nu,
            xi,
            self.phi.clone(),
            self.psi.clone(),
        )
    }

    /// The same span with replaced legs.
    pub fn with_legs(&self, phi: Cochain, psi: Cochain) -> Result<SpanDiagram> {
        SpanDiagram::new(
            self.a_u.clone(),
            self.a_v.clone(),
            self.a_w.clone(),
            self.mu.clone(),
            self.nu.clone(),
            self.xi.clone(),
            phi,
            psi,
        )
    }
}

/// One failed identity in a diagram check.
#[derive(Clone, Debug)]
pub struct DiagramFailure {
    pub identity: String,
    pub counterexample: Counterexample,
}

/// Result of [`verify_diagram`].
#[derive(Clone, Debug)]
pub struct DiagramReport {
    pub failures: Vec<DiagramFailure>,
    /// Whether `P_Φ(M)` is grid-zero, computed through the derived-bracket
    /// route.
    pub curvature_zero: bool,
}

impl DiagramReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.curvature_zero
    }

    /// The morphism identities and the curvature must agree.
    pub fn routes_agree(&self) -> bool {
        let morphism_ok = !self.failures.iter().any(|f| f.identity.contains("∘"));
        morphism_ok == self.curvature_zero
    }
}

/// Grid-checks that both legs are unital algebra morphisms and that the
/// three multiplications are associative, then computes `P_Φ(M)` through
/// the L∞ machinery.
pub fn verify_diagram(d: &SpanDiagram, spec: &GridSpec) -> Result<DiagramReport> {
    let mut failures = Vec::new();
    for (chart, name) in [(Chart::U, "phi"), (Chart::V, "psi")] {
        let leg = d.leg(chart);
        let m = d.mult(chart);
        let identity = format!("{name}∘{} = xi∘({name}⊗{name})", if chart == Chart::U { "mu" } else { "nu" });
        let r = check_identity(&[d.algebra(chart).clone(), d.algebra(chart).clone()], spec, |ins| {
            let lhs = leg.eval_unchecked(&[m.eval_unchecked(ins)?])?;
            let a = leg.eval_unchecked(&ins[..1])?;
            let b = leg.eval_unchecked(&ins[1..])?;
            let rhs = d.xi.eval_unchecked(&[a, b])?;
            Ok((lhs, rhs))
        })?;
        if let Some(ce) = r {
            failures.push(DiagramFailure {
                identity,
                counterexample: ce,
            });
        }
        let one = leg.eval_unchecked(&[LaurentPoly::one()])?;
        if one != LaurentPoly::one() {
            failures.push(DiagramFailure {
                identity: format!("{name}(1) = 1"),
                counterexample: Counterexample {
                    inputs: vec![crate::ratlaurent::Monomial::one()],
                    left: one,
                    right: LaurentPoly::one(),
                },
            });
        }
    }
    for (chart, name) in [(Chart::U, "mu"), (Chart::V, "nu"), (Chart::W, "xi")] {
        let defect = assoc_defect(d.mult(chart))?;
        let assoc_spec = GridSpec {
            bound: spec.bound.min(3),
            ..*spec
        };
        if let Some(ce) = zero_on_grid(&defect, &assoc_spec)? {
            failures.push(DiagramFailure {
                identity: format!("{name} associative"),
                counterexample: ce,
            });
        }
    }
    let vd = VoronovData::for_diagram(d)?;
    let curvature = vd.curvature()?;
    let curvature_zero = curvature.grid_zero(spec)?.is_none();
    Ok(DiagramReport {
        failures,
        curvature_zero,
    })
}
