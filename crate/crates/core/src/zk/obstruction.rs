use super::classical::ClassicalDeformation;
use super::geometry::{t, u, v, z, zeta, ZkGeometry};
use super::quantization::ZkQuantization;
use crate::cochain::{check_identity, Cochain, GridSpec};
use crate::error::{Error, Result};
use crate::gs::APair;
use crate::linf::{mc_residual, McResidual};
use crate::ratlaurent::{rat, EpsFamily, LaurentPoly, Monomial};

/// `O(f, g) = ξ_1(ψ_0 f, ψ_1 g) + ξ_1(ψ_1 f, ψ_0 g) - ψ_1(ν_1(f, g))`,
/// a bilinear cochain `A_V ⊗ A_V → A_W`.
///
/// This is what remains of the order-2 `𝔞`-residual on `V` when the
/// quantization `M̃` is combined with the classical deformation `Φ̃`.
pub fn obstruction_second_order(g: &ZkGeometry, cd: &ClassicalDeformation, q: &ZkQuantization) -> Result<Cochain> {
    let psi0 = g.psi0_cochain();
    let psi1 = cd.psi_cochain(g, 1);
    let xi1 = q.xi.get(1)?;
    let nu1 = q.nu.get(1)?;
    let parts = [
        Cochain::compose(xi1, &[psi0.clone(), psi1.clone()])?,
        Cochain::compose(xi1, &[psi1.clone(), psi0])?,
        Cochain::compose(&psi1, &[nu1.clone()])?.neg(),
    ];
    Cochain::sum(vec![g.a_v.clone(); 2], g.a_w.clone(), &parts)
}

/// `(ad - bc) t_i z^{(b+d-1)k - (a+c) + i} u^{b+d-1}`.
pub fn obstruction_closed_form(k: i64, i: i64, (a, b, c, d): (i64, i64, i64, i64)) -> LaurentPoly {
    let det = a * d - b * c;
    if det == 0 {
        return LaurentPoly::zero();
    }
    let n = b + d - 1;
    LaurentPoly::term(
        rat(det, 1),
        Monomial::from_pairs([(t(i), 1), (z(), n * k - (a + c) + i), (u(), n)]),
    )
}

/// The full order-2 residual of `M̃ ⊕ Φ̃` for the quantization combined with
/// the classical deformation.
pub fn simultaneous_residual(
    g: &ZkGeometry,
    cd: &ClassicalDeformation,
    q: &ZkQuantization,
    n: usize,
) -> Result<McResidual> {
    let mut cd2 = cd.clone();
    cd2.order = cd.order.max(n);
    let pt: EpsFamily<APair> = cd2.phi_family(g).truncate(n);
    mc_residual(&g.span, &q.m_family(n)?, &pt, n)
}

/// Coefficient of the bivector read off from a biderivation.
#[derive(Clone, Debug, PartialEq)]
pub struct HkrBivector {
    /// Coefficient of `∂_x∧∂_y` in the source coordinates `(x, y)`.
    pub source_frame: LaurentPoly,
    /// Coefficient of `∂_z∧∂_u`.
    pub frame_u: LaurentPoly,
}

/// Reads the bivector `A(x, y) ∂_x∧∂_y` off a bilinear cochain `O` whose
/// sources are one of the charts of `g`, where
/// `A(f, g) = ½(O(f, g) - O(g, f))`.
///
/// `O` must be a biderivation along the map from its source into `A_W`
/// (`φ_0`, `ψ_0` or the identity); this is checked on `spec` first.
pub fn hkr_bivector(g: &ZkGeometry, o: &Cochain, spec: &GridSpec) -> Result<HkrBivector> {
    if o.arity() != 2 || o.target().id != g.a_w.id || o.sources()[0].id != o.sources()[1].id {
        return Err(Error::Invalid(format!("expected a bilinear cochain into W, got {}", o.signature())));
    }
    let src = o.sources()[0].clone();
    let (leg, coords, frame): (Cochain, [crate::ratlaurent::Var; 2], LaurentPoly) = if src.id == g.a_v.id {
        let inv = g
            .transition
            .pow(-1)
            .map_err(|_| Error::Invalid("transition must be a monomial".into()))?;
        (g.psi0_cochain(), [zeta(), v()], inv)
    } else if src.id == g.a_u.id {
        (Cochain::morphism(&g.phi0), [z(), u()], LaurentPoly::one())
    } else if src.id == g.a_w.id {
        (Cochain::identity(&g.a_w), [z(), u()], LaurentPoly::one())
    } else {
        return Err(Error::AlgebraMismatch {
            expected: format!("{}, {} or {}", g.a_u.id, g.a_v.id, g.a_w.id),
            got: src.id.clone(),
        });
    };
    let sources = vec![src.clone(); 3];
    for slot in 0..2 {
        let bad = check_identity(&sources, spec, |ins| {
            let (f1, f2, h) = (&ins[0], &ins[1], &ins[2]);
            let l = |x: &LaurentPoly| leg.eval_unchecked(std::slice::from_ref(x));
            let ev = |x: &LaurentPoly, y: &LaurentPoly| match slot {
                0 => o.eval_unchecked(&[x.clone(), y.clone()]),
                _ => o.eval_unchecked(&[y.clone(), x.clone()]),
            };
            let lhs = ev(&(f1 * f2), h)?;
            let rhs = &l(f1)? * &ev(f2, h)? + &l(f2)? * &ev(f1, h)?;
            Ok((lhs, rhs))
        })?;
        if let Some(ce) = bad {
            return Err(Error::NotBiderivation(format!("slot {slot}: {ce}")));
        }
    }
    let (x, y) = (LaurentPoly::var(coords[0]), LaurentPoly::var(coords[1]));
    let a = (o.eval_unchecked(&[x.clone(), y.clone()])? - o.eval_unchecked(&[y, x])?).scale(&rat(1, 2));
    Ok(HkrBivector {
        frame_u: &a * &frame,
        source_frame: a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{equal_default, hochschild_d, BimoduleStructure};
    use crate::ratlaurent::parse_poly;
    use crate::zk::build_zk;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    fn setup(k: i64, i: i64) -> (ZkGeometry, ClassicalDeformation, ZkQuantization) {
        let g = build_zk(k).unwrap();
        let cd = ClassicalDeformation::single(k, i, 2).unwrap();
        let q = ZkQuantization::canonical(&g).unwrap();
        (g, cd, q)
    }

    fn ev(o: &Cochain, (a, b, c, d): (i64, i64, i64, i64)) -> LaurentPoly {
        let f = LaurentPoly::mono(rat(1, 1), &[("zeta", a), ("v", b)]);
        let h = LaurentPoly::mono(rat(1, 1), &[("zeta", c), ("v", d)]);
        o.evaluate(&[f, h]).unwrap()
    }

    #[test]
    fn displayed_examples() {
        let (g, cd, q) = setup(4, 2);
        let o = obstruction_second_order(&g, &cd, &q).unwrap();
        assert_eq!(ev(&o, (1, 0, 0, 1)), p("t2*z"));
        assert!(ev(&o, (2, 0, 1, 0)).is_zero());
        assert_eq!(ev(&o, (0, 1, 1, 1)), p("-t2*z^5*u"));
    }

    #[test]
    fn closed_form_on_grid() {
        for (k, i) in [(2, 1), (4, 2), (5, 1)] {
            let (g, cd, q) = setup(k, i);
            let o = obstruction_second_order(&g, &cd, &q).unwrap();
            for a in 0..=3 {
                for b in 0..=3 {
                    for c in 0..=3 {
                        for d in 0..=3 {
                            assert_eq!(ev(&o, (a, b, c, d)), obstruction_closed_form(k, i, (a, b, c, d)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn matches_v_side_of_the_residual() {
        let (g, cd, q) = setup(4, 2);
        let o = obstruction_second_order(&g, &cd, &q).unwrap();
        let r = simultaneous_residual(&g, &cd, &q, 2).unwrap();
        assert!(equal_default(&r.a.v, &o, &GridSpec::full(3)).unwrap().is_none());
        assert!(r.a.u.is_structurally_zero() || crate::cochain::zero_on_grid(&r.a.u, &GridSpec::full(3)).unwrap().is_none());
        let r1 = simultaneous_residual(&g, &cd, &q, 1).unwrap();
        assert!(r1.a.grid_zero(&GridSpec::full(3)).unwrap().is_none());
    }

    #[test]
    fn hkr_of_the_obstruction() {
        for (k, i) in [(4, 2), (5, 3), (3, 1)] {
            let (g, cd, q) = setup(k, i);
            let o = obstruction_second_order(&g, &cd, &q).unwrap();
            let h = hkr_bivector(&g, &o, &GridSpec::full(2)).unwrap();
            assert_eq!(h.source_frame, p(&format!("t{i}*z^{}", i - 1)));
            assert_eq!(h.frame_u, p(&format!("-t{i}*z^{}", i + 1 - k)));
        }
    }

    #[test]
    fn hkr_of_a_bivector_and_a_coboundary() {
        let (g, _, q) = setup(3, 1);
        let h = hkr_bivector(&g, q.xi.get(1).unwrap(), &GridSpec::full(2)).unwrap();
        assert_eq!(h.frame_u, p("z*u"));
        let unary = Cochain::from_terms(
            vec![g.a_w.clone()],
            g.a_w.clone(),
            vec![(p("z^2"), vec![crate::cochain::SlotFactor::deriv(0, &[(u(), 2)])])],
        )
        .unwrap();
        let bm = BimoduleStructure::diagonal(&g.span.xi).unwrap();
        let dh = hochschild_d(&unary, &bm).unwrap();
        // d_H(z²∂_u²) = -2z² ∂_u ⊗ ∂_u is symmetric.
        assert!(hkr_bivector(&g, &dh, &GridSpec::full(2)).unwrap().frame_u.is_zero());
        let vector_field = Cochain::from_terms(
            vec![g.a_w.clone()],
            g.a_w.clone(),
            vec![(p("z"), vec![crate::cochain::SlotFactor::deriv(0, &[(u(), 1)])])],
        )
        .unwrap();
        let dv = hochschild_d(&vector_field, &bm).unwrap();
        assert!(hkr_bivector(&g, &dv, &GridSpec::full(2)).unwrap().frame_u.is_zero());
    }

    #[test]
    fn non_biderivation_is_rejected() {
        let (g, _, _) = setup(3, 1);
        let sq = Cochain::from_terms(
            vec![g.a_w.clone(); 2],
            g.a_w.clone(),
            vec![(
                p("1"),
                vec![
                    crate::cochain::SlotFactor::deriv(0, &[(z(), 2)]),
                    crate::cochain::SlotFactor::deriv(1, &[(u(), 1)]),
                ],
            )],
        )
        .unwrap();
        assert!(matches!(hkr_bivector(&g, &sq, &GridSpec::full(2)), Err(Error::NotBiderivation(_))));
    }
}
