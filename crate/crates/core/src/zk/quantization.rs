use super::geometry::{PoissonOnZk, ZkGeometry};
use crate::cochain::Cochain;
use crate::error::Result;
use crate::gs::{APair, Diagonal};
use crate::quantize::{b1_cochain, kontsevich_star2_weighted, KontsevichWeights};
use crate::ratlaurent::EpsFamily;

/// The deformed multiplications `M̃ = (μ_n, ν_n, ξ_n)` for a Poisson
/// structure on `Z_k`, through order 2.
///
/// `μ` and `ξ` are the Kontsevich star products of `η_U`, `η_W` in their own
/// coordinates, `ν_1` is the Poisson bracket of `η_V`, and `ν_2` is `ξ_2`
/// transported to `V` through `ψ_0`.
#[derive(Clone, Debug)]
pub struct ZkQuantization {
    pub mu: EpsFamily<Cochain>,
    pub nu: EpsFamily<Cochain>,
    pub xi: EpsFamily<Cochain>,
}

impl ZkQuantization {
    pub fn new(g: &ZkGeometry, eta: &PoissonOnZk) -> Result<ZkQuantization> {
        ZkQuantization::weighted(g, eta, &KontsevichWeights::default())
    }

    pub fn weighted(g: &ZkGeometry, eta: &PoissonOnZk, w: &KontsevichWeights) -> Result<ZkQuantization> {
        let mu = kontsevich_star2_weighted(&g.a_u, &eta.u, w)?.terms().clone();
        let xi = kontsevich_star2_weighted(&g.a_w, &eta.w, w)?.terms().clone();
        let psi0 = g.psi0_cochain();
        let nu2 = Cochain::compose(xi.get(2)?, &[psi0.clone(), psi0])?
            .then_morphism(&g.psi0_inv)?
            .with_target(g.a_v.clone());
        let nu = EpsFamily::new(vec![
            Cochain::product(&g.a_v, 2),
            b1_cochain(&g.a_v, &eta.v)?.scale(&w.order1),
            nu2,
        ])?;
        Ok(ZkQuantization { mu, nu, xi })
    }

    /// The canonical choice `η = zu ∂_z∧∂_u`.
    pub fn canonical(g: &ZkGeometry) -> Result<ZkQuantization> {
        ZkQuantization::new(g, &g.canonical_poisson()?)
    }

    /// `M̃` truncated at `order ≤ 2`.
    pub fn m_family(&self, order: usize) -> Result<EpsFamily<Diagonal>> {
        let coeffs = (0..=order)
            .map(|n| {
                Ok(Diagonal {
                    u: self.mu.get(n)?.clone(),
                    v: self.nu.get(n)?.clone(),
                    w: self.xi.get(n)?.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        EpsFamily::new(coeffs)
    }
}

/// `M̃ = (μ, ν, ξ)` with no deformation.
pub fn undeformed_m(g: &ZkGeometry, order: usize) -> EpsFamily<Diagonal> {
    EpsFamily::from_fn(order, |n| {
        if n == 0 {
            Diagonal::multiplication(&g.span)
        } else {
            Diagonal::zero(&g.span, 2)
        }
    })
}

/// `Φ̃ = (φ_0, ψ_0)` with no deformation.
pub fn undeformed_phi(g: &ZkGeometry, order: usize) -> EpsFamily<APair> {
    EpsFamily::from_fn(order, |n| {
        if n == 0 {
            APair::legs(&g.span)
        } else {
            APair::zero(&g.span, 1)
        }
    })
}
