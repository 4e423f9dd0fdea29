use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cochain::random::{random_cochain, random_endo, RandomShape};
use crate::cochain::{Cochain, GridSpec};
use crate::gs::{gs_d, hochschild_pair, APair, Diagonal, GsCochain, SpanDiagram};
use crate::cochain::parity_sign as parity;
use crate::ratlaurent::{rat, AlgebraSpec, Cone, LaurentPoly, MorphismSpec, Var};

fn span(k: i64) -> (SpanDiagram, Arc<MorphismSpec>, Arc<MorphismSpec>) {
    let u = Arc::new(AlgebraSpec::new("U", &[("z", Cone::NonNeg), ("u", Cone::NonNeg)]));
    let v = Arc::new(AlgebraSpec::new("V", &[("zeta", Cone::NonNeg), ("v", Cone::NonNeg)]));
    let w = Arc::new(AlgebraSpec::new("W", &[("z", Cone::AnyInt), ("u", Cone::NonNeg)]));
    let phi = Arc::new(MorphismSpec::identity_like("phi0", u, w.clone()).unwrap());
    let mut sub = BTreeMap::new();
    sub.insert(Var::new("zeta"), LaurentPoly::mono(rat(1, 1), &[("z", -1)]));
    sub.insert(Var::new("v"), LaurentPoly::mono(rat(1, 1), &[("z", k), ("u", 1)]));
    let psi = Arc::new(MorphismSpec::new("psi0", v, w, sub).unwrap());
    (SpanDiagram::commutative(&phi, &psi).unwrap(), phi, psi)
}

const SHAPE: RandomShape = RandomShape {
    max_terms: 2,
    max_deriv: 1,
    max_coeff_exp: 1,
};

fn rand_diag(rng: &mut ChaCha8Rng, d: &SpanDiagram, q: usize) -> Diagonal {
    Diagonal {
        u: random_endo(rng, &d.a_u, q, SHAPE),
        v: random_endo(rng, &d.a_v, q, SHAPE),
        w: random_endo(rng, &d.a_w, q, SHAPE),
    }
}

fn rand_pair(rng: &mut ChaCha8Rng, d: &SpanDiagram, phi: &Arc<MorphismSpec>, psi: &Arc<MorphismSpec>, q: usize) -> APair {
    APair {
        u: random_cochain(rng, &vec![d.a_u.clone(); q], &d.a_w, &vec![Some(phi.clone()); q], SHAPE),
        v: random_cochain(rng, &vec![d.a_v.clone(); q], &d.a_w, &vec![Some(psi.clone()); q], SHAPE),
    }
}

fn grid() -> GridSpec {
    GridSpec::sampled(2, 60, 7)
}

fn assert_equal(a: &LInfElement, b: &LInfElement, what: &str) {
    if let Some(msg) = a.grid_equal(b, &grid()).unwrap() {
        panic!("{what}: {msg}");
    }
}

fn assert_zero(a: &LInfElement, what: &str) {
    if let Some(msg) = a.grid_zero(&grid()).unwrap() {
        panic!("{what}: {msg}");
    }
}

#[test]
fn curvature_vanishes_on_valid_span() {
    let (d, _, _) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    assert!(!vd.is_curved());
    assert!(vd.curvature().unwrap().grid_zero(&GridSpec::full(3)).unwrap().is_none());
    let explicit = linf_bracket(&vd, &[]).unwrap();
    assert_zero(&explicit, "explicit ⟨⟩");
}

#[test]
fn curvature_detects_bad_leg() {
    let (d, _, psi) = span(3);
    let psi0 = Cochain::morphism(&psi);
    let du = Cochain::from_terms(
        vec![d.a_w.clone()],
        d.a_w.clone(),
        vec![(
            LaurentPoly::mono(rat(1, 1), &[("z", -2)]),
            vec![crate::cochain::SlotFactor::deriv(0, &[(Var::new("u"), 1)])],
        )],
    )
    .unwrap();
    let bad = psi0.add(&Cochain::compose(&du, &[psi0.clone()]).unwrap()).unwrap();
    let d = d.with_legs(d.phi.clone(), bad).unwrap();
    let vd = VoronovData::for_diagram(&d).unwrap();
    assert!(vd.curvature().unwrap().grid_zero(&GridSpec::full(2)).unwrap().is_some());
    let explicit = linf_bracket(&vd, &[]).unwrap();
    let derived = bracket(&vd, Route::Derived, &[]).unwrap();
    assert_equal(&explicit, &derived, "⟨⟩ routes");
}

#[test]
fn unary_bracket_is_gs_differential() {
    let (d, phi, psi) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=2usize {
        let x = GsCochain::new(n, rand_diag(&mut rng, &d, n + 1), Some(rand_pair(&mut rng, &d, &phi, &psi, n))).unwrap();
        let expected = LInfElement::from_gs(&gs_d(&d, &x).unwrap());
        for route in [Route::Explicit, Route::Derived] {
            let got = bracket(&vd, route, &[LInfElement::from_gs(&x)]).unwrap();
            assert_equal(&got, &expected, &format!("⟨x ⊕ a⟩ at n = {n}, {route:?}"));
        }
    }
}

#[test]
fn unary_on_a_is_signed_hochschild() {
    let (d, phi, psi) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for q in 1..=2usize {
        let a = rand_pair(&mut rng, &d, &phi, &psi, q);
        let got = vd.derived_bracket(&[&a]).unwrap();
        let expected = hochschild_pair(&d, &a).unwrap().scale(&parity(a.degree()));
        assert!(got.grid_equal(&expected, &grid()).unwrap().is_none(), "q = {q}");
    }
}

#[test]
fn binary_a_bracket_is_symmetrized_product() {
    let (d, phi, psi) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a1 = rand_pair(&mut rng, &d, &phi, &psi, 1);
    let a2 = rand_pair(&mut rng, &d, &phi, &psi, 1);
    let side = |c| {
        let xi = &d.xi;
        Cochain::compose(xi, &[a1.get(c).clone(), a2.get(c).clone()])
            .unwrap()
            .add(&Cochain::compose(xi, &[a2.get(c).clone(), a1.get(c).clone()]).unwrap())
            .unwrap()
    };
    let expected = LInfElement::from_a(APair {
        u: side(crate::gs::Chart::U),
        v: side(crate::gs::Chart::V),
    });
    for route in [Route::Explicit, Route::Derived] {
        let got = bracket(&vd, route, &[LInfElement::from_a(a1.clone()), LInfElement::from_a(a2.clone())]).unwrap();
        assert_equal(&got, &expected, &format!("⟨a1, a2⟩ {route:?}"));
    }
}

#[test]
fn routes_agree_on_mixed_brackets() {
    let (d, phi, psi) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cases: Vec<(usize, Vec<usize>)> = vec![(2, vec![1]), (2, vec![2]), (3, vec![2]), (2, vec![1, 1]), (3, vec![1, 2]), (3, vec![2, 1]), (3, vec![2, 2]), (3, vec![1, 1, 1])];
    for (q, arities) in cases {
        let x = LInfElement::from_g(rand_diag(&mut rng, &d, q));
        let mut args = vec![x];
        for &p in &arities {
            args.push(LInfElement::from_a(rand_pair(&mut rng, &d, &phi, &psi, p)));
        }
        let e = bracket(&vd, Route::Explicit, &args).unwrap();
        let g = bracket(&vd, Route::Derived, &args).unwrap();
        assert_equal(&e, &g, &format!("⟨x[1], a…⟩ with |x| = {}, arities {arities:?}", q - 1));
    }
}

#[test]
fn bracket_cutoffs() {
    let (d, phi, psi) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a: Vec<LInfElement> = (0..3).map(|_| LInfElement::from_a(rand_pair(&mut rng, &d, &phi, &psi, 1))).collect();
    assert_zero(&bracket(&vd, Route::Derived, &a).unwrap(), "⟨a1, a2, a3⟩");
    let x = LInfElement::from_g(rand_diag(&mut rng, &d, 2));
    let mut args = vec![x];
    args.extend(a.iter().cloned());
    assert_zero(&bracket(&vd, Route::Derived, &args).unwrap(), "⟨x[1], a1, a2, a3⟩ with |x| = 1");
}

#[test]
fn graded_symmetry() {
    let (d, phi, psi) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let x = LInfElement::from_g(rand_diag(&mut rng, &d, 2));
    let y = LInfElement::from_g(rand_diag(&mut rng, &d, 3));
    let xy = linf_bracket(&vd, &[x.clone(), y.clone()]).unwrap();
    let yx = linf_bracket(&vd, &[y.clone(), x.clone()]).unwrap();
    let s = parity(x.degree() * y.degree());
    assert_equal(&xy, &yx.scale(&s), "⟨x[1], y[1]⟩ swap");
    let a1 = LInfElement::from_a(rand_pair(&mut rng, &d, &phi, &psi, 1));
    let a2 = LInfElement::from_a(rand_pair(&mut rng, &d, &phi, &psi, 1));
    let l = linf_bracket(&vd, &[x.clone(), a1.clone(), a2.clone()]).unwrap();
    let r = linf_bracket(&vd, &[x.clone(), a2.clone(), a1.clone()]).unwrap();
    assert_equal(&l, &r, "degree-0 a swap");
}

#[test]
fn jacobi_unary_squares_to_zero() {
    let (d, phi, psi) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=2usize {
        let x = GsCochain::new(n, rand_diag(&mut rng, &d, n + 1), Some(rand_pair(&mut rng, &d, &phi, &psi, n))).unwrap();
        let j = jacobi_defect(&vd, Route::Explicit, &[LInfElement::from_gs(&x)]).unwrap();
        assert_zero(&j, &format!("d² at n = {n}"));
    }
}

#[test]
fn jacobi_binary() {
    let (d, phi, psi) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = |rng: &mut ChaCha8Rng, q| LInfElement::from_g(rand_diag(rng, &d, q));
    let a = |rng: &mut ChaCha8Rng, q| LInfElement::from_a(rand_pair(rng, &d, &phi, &psi, q));
    let pairs = vec![
        (g(&mut rng, 2), g(&mut rng, 2)),
        (g(&mut rng, 2), g(&mut rng, 3)),
        (g(&mut rng, 2), a(&mut rng, 1)),
        (g(&mut rng, 3), a(&mut rng, 2)),
        (a(&mut rng, 1), a(&mut rng, 2)),
    ];
    for (i, (x, y)) in pairs.into_iter().enumerate() {
        let j = jacobi_defect(&vd, Route::Explicit, &[x, y]).unwrap();
        assert_zero(&j, &format!("binary Jacobi case {i}"));
    }
}

#[test]
fn jacobi_ternary() {
    let (d, phi, psi) = span(3);
    let vd = VoronovData::for_diagram(&d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a: Vec<LInfElement> = (0..3).map(|_| LInfElement::from_a(rand_pair(&mut rng, &d, &phi, &psi, 1))).collect();
    assert_zero(&jacobi_defect(&vd, Route::Explicit, &a).unwrap(), "three degree-0 a's");
    let x = LInfElement::from_g(rand_diag(&mut rng, &d, 2));
    let y = LInfElement::from_g(rand_diag(&mut rng, &d, 2));
    let mixed = [x.clone(), y, a[0].clone()];
    assert_zero(&jacobi_defect(&vd, Route::Explicit, &mixed).unwrap(), "(x, y, a)");
    let mixed = [x, a[1].clone(), a[2].clone()];
    assert_zero(&jacobi_defect(&vd, Route::Explicit, &mixed).unwrap(), "(x, a, a)");
}

fn random_families(seed: u64, n: usize) -> (SpanDiagram, EpsFamilies) {
    let (d, phi, psi) = span(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ms = vec![Diagonal::multiplication(&d)];
    let mut ps = vec![APair::legs(&d)];
    for _ in 0..n {
        ms.push(rand_diag(&mut rng, &d, 2));
        ps.push(rand_pair(&mut rng, &d, &phi, &psi, 1));
    }
    (
        d,
        (
            crate::ratlaurent::EpsFamily::new(ms).unwrap(),
            crate::ratlaurent::EpsFamily::new(ps).unwrap(),
        ),
    )
}

type EpsFamilies = (crate::ratlaurent::EpsFamily<Diagonal>, crate::ratlaurent::EpsFamily<APair>);

#[test]
fn exp_form_matches_collected_form() {
    let (d, (mt, pt)) = random_families(10, 2);
    let vd = VoronovData::for_diagram(&d).unwrap();
    for n in 1..=2 {
        let collected = mc_residual(&d, &mt, &pt, n).unwrap();
        let exp = mc_residual_exp(&vd, Route::Explicit, &mt, &pt, n).unwrap();
        if let Some(msg) = collected.grid_equal(&exp, &grid()).unwrap() {
            panic!("order {n}: {msg}");
        }
    }
}

#[test]
fn residual_is_truncation_stable() {
    let (d, (mt, pt)) = random_families(11, 2);
    let r2 = mc_residual(&d, &mt, &pt, 1).unwrap();
    let r1 = mc_residual(&d, &mt.truncate(1), &pt.truncate(1), 1).unwrap();
    assert!(r1.grid_equal(&r2, &grid()).unwrap().is_none());
    assert!(matches!(
        mc_residual(&d, &mt.truncate(1), &pt, 2),
        Err(crate::Error::OrderExceeded { .. })
    ));
}

#[test]
fn rejects_nonzero_degree_candidates() {
    let (d, _, _) = span(3);
    let x = LInfElement::from_g(Diagonal::zero(&d, 3));
    assert!(validate_mc_candidate(&x).is_err());
    assert!(validate_mc_candidate(&LInfElement::from_g(Diagonal::multiplication(&d))).is_ok());
}
