use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cochain::{AlgRef, Cochain};
use crate::error::{Error, Result};
use crate::gs::SpanDiagram;
use crate::quantize::Bivector;
use crate::ratlaurent::{rat, AlgebraSpec, Cone, LaurentPoly, MorphismSpec, Var};

/// `Z_k = Tot O(-k)` in canonical coordinates: `U = Spec ℂ[z, u]`,
/// `V = Spec ℂ[ζ, v]`, glued over `U ∩ V = Spec ℂ[z^±, u]` by
/// `(ζ, v) = (z^{-1}, z^k u)`.
///
/// Every algebra carries the deformation parameters `t_1, …, t_{k-1}`.
#[derive(Clone, Debug)]
pub struct ZkGeometry {
    pub k: i64,
    pub a_u: AlgRef,
    pub a_v: AlgRef,
    pub a_w: AlgRef,
    /// `ℂ[ζ^±, v]`, the target of `ψ₀^{-1}`.
    pub v_loc: AlgRef,
    pub phi0: Arc<MorphismSpec>,
    pub psi0: Arc<MorphismSpec>,
    /// `z ↦ ζ^{-1}`, `u ↦ ζ^k v`.
    pub psi0_inv: Arc<MorphismSpec>,
    /// Transition function of `Λ²T` in canonical coordinates: a pair
    /// `(f_U, f_V)` glues iff `f_V(z^{-1}, z^k u) = transition · f_U`.
    pub transition: LaurentPoly,
    pub span: SpanDiagram,
}

pub fn z() -> Var {
    Var::new("z")
}

pub fn u() -> Var {
    Var::new("u")
}

pub fn zeta() -> Var {
    Var::new("zeta")
}

pub fn v() -> Var {
    Var::new("v")
}

/// `t_i`.
pub fn t(i: i64) -> Var {
    Var::new(&format!("t{i}"))
}

pub fn build_zk(k: i64) -> Result<ZkGeometry> {
    if k < 1 {
        return Err(Error::Invalid(format!("k must be at least 1, got {k}")));
    }
    let params: Vec<Var> = (1..k).map(t).collect();
    let alg = |id: &str, vars: &[(&str, Cone)]| Arc::new(AlgebraSpec::new(id, vars).with_parameters(&params));
    let a_u = alg("U", &[("z", Cone::NonNeg), ("u", Cone::NonNeg)]);
    let a_v = alg("V", &[("zeta", Cone::NonNeg), ("v", Cone::NonNeg)]);
    let a_w = alg("W", &[("z", Cone::AnyInt), ("u", Cone::NonNeg)]);
    let v_loc = alg("Vloc", &[("zeta", Cone::AnyInt), ("v", Cone::NonNeg)]);
    let phi0 = Arc::new(MorphismSpec::identity_like("phi0", a_u.clone(), a_w.clone())?);
    let mono = |pairs: &[(&str, i64)]| LaurentPoly::mono(rat(1, 1), pairs);
    let mut sub = BTreeMap::new();
    sub.insert(zeta(), mono(&[("z", -1)]));
    sub.insert(v(), mono(&[("z", k), ("u", 1)]));
    let psi0 = Arc::new(MorphismSpec::new("psi0", a_v.clone(), a_w.clone(), sub)?);
    let mut inv = BTreeMap::new();
    inv.insert(z(), mono(&[("zeta", -1)]));
    inv.insert(u(), mono(&[("zeta", k), ("v", 1)]));
    let psi0_inv = Arc::new(MorphismSpec::new("psi0_inv", a_w.clone(), v_loc.clone(), inv)?);
    let span = SpanDiagram::commutative(&phi0, &psi0)?;
    Ok(ZkGeometry {
        k,
        a_u,
        a_v,
        a_w,
        v_loc,
        phi0,
        psi0,
        psi0_inv,
        transition: mono(&[("z", k - 2)]).scale(&rat(-1, 1)),
        span,
    })
}

impl ZkGeometry {
    /// The same geometry with another transition function.
    pub fn with_transition(&self, transition: LaurentPoly) -> ZkGeometry {
        ZkGeometry {
            transition,
            ..self.clone()
        }
    }

    /// Rewrites an element of `ℂ[z^±, u]` in the coordinates `(ζ, v)`,
    /// failing if the result is not in `ℂ[ζ, v]`.
    pub fn to_v(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let q = self.psi0_inv.apply(p)?;
        self.a_v.check(&q)?;
        Ok(q)
    }

    /// `f_V` with `f_V(z^{-1}, z^k u) = transition · f_U`.
    pub fn glue_coefficient(&self, f_u: &LaurentPoly) -> Result<LaurentPoly> {
        self.to_v(&(&self.transition * f_u))
    }

    /// Whether `(f_U, f_V)` defines a global bivector.
    pub fn glues(&self, f_u: &LaurentPoly, f_v: &LaurentPoly) -> Result<bool> {
        Ok(self.psi0.apply(f_v)? == &self.transition * f_u)
    }

    /// The bivector `f_U ∂_z∧∂_u` on all three charts, `f_V` obtained from
    /// the transition rule.
    pub fn poisson_structure(&self, f_u: &LaurentPoly) -> Result<PoissonOnZk> {
        self.a_u.check(f_u)?;
        let f_v = self.glue_coefficient(f_u)?;
        Ok(PoissonOnZk {
            u: Bivector::planar(z(), u(), f_u.clone()),
            v: Bivector::planar(zeta(), v(), f_v),
            w: Bivector::planar(z(), u(), f_u.clone()),
        })
    }

    /// `(f_U, f_V)` for `η = zu ∂_z∧∂_u`.
    pub fn canonical_poisson(&self) -> Result<PoissonOnZk> {
        self.poisson_structure(&LaurentPoly::mono(rat(1, 1), &[("z", 1), ("u", 1)]))
    }

    pub fn psi0_cochain(&self) -> Cochain {
        Cochain::morphism(&self.psi0)
    }
}

/// One Poisson structure written on `U`, `V` and `U ∩ V`.
#[derive(Clone, Debug)]
pub struct PoissonOnZk {
    pub u: Bivector,
    pub v: Bivector,
    pub w: Bivector,
}

/// Generators `(f_U, f_V)` of the global Poisson structures as a module over
/// global functions.
pub fn poisson_generators(k: i64) -> Result<Vec<(LaurentPoly, LaurentPoly)>> {
    let p = |s: &str| crate::ratlaurent::parse_poly(s);
    let pairs: &[(&str, &str)] = match k {
        k if k < 1 => return Err(Error::Invalid(format!("k must be at least 1, got {k}"))),
        1 => &[("1", "-zeta"), ("z", "-1")],
        2 => &[("1", "-1")],
        _ => &[("u", "-zeta^2*v"), ("z*u", "-zeta*v"), ("z^2*u", "-v")],
    };
    pairs.iter().map(|(a, b)| Ok((p(a)?, p(b)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::GridSpec;
    use crate::gs::verify_diagram;
    use crate::ratlaurent::parse_poly;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn charts_and_psi0() {
        assert!(build_zk(0).is_err());
        let g1 = build_zk(1).unwrap();
        assert_eq!(g1.psi0.apply(&p("v")).unwrap(), p("z*u"));
        let g3 = build_zk(3).unwrap();
        assert_eq!(g3.psi0.apply(&p("zeta^2*v")).unwrap(), p("z*u"));
        let g2 = build_zk(2).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                let img = g2.psi0.apply(&LaurentPoly::mono(rat(1, 1), &[("zeta", m), ("v", n)])).unwrap();
                assert_eq!(img, LaurentPoly::mono(rat(1, 1), &[("z", 2 * n - m), ("u", n)]));
            }
        }
    }

    #[test]
    fn span_is_a_diagram() {
        for k in 1..=4 {
            let g = build_zk(k).unwrap();
            assert!(verify_diagram(&g.span, &GridSpec::full(3)).unwrap().passed(), "k = {k}");
        }
    }

    #[test]
    fn generators_glue() {
        for k in 1..=8 {
            let g = build_zk(k).unwrap();
            for (fu, fv) in poisson_generators(k).unwrap() {
                assert!(g.glues(&fu, &fv).unwrap(), "k = {k}, f_U = {fu}");
                assert_eq!(g.glue_coefficient(&fu).unwrap(), fv);
            }
        }
    }

    #[test]
    fn canonical_v_coefficient() {
        for k in 1..=5 {
            let g = build_zk(k).unwrap();
            let eta = g.canonical_poisson().unwrap();
            assert_eq!(eta.v.entry(0, 1), p("-zeta*v"));
        }
    }

    #[test]
    fn flipped_transition_breaks_gluing() {
        let g = build_zk(4).unwrap();
        let bad = g.with_transition(-g.transition.clone());
        let (fu, fv) = &poisson_generators(4).unwrap()[1];
        assert!(!bad.glues(fu, fv).unwrap());
    }
}
