use std::collections::BTreeMap;

use num::One;

use super::bivector::Bivector;
use crate::cochain::{check_identity, AlgRef, Cochain, Counterexample, GridSpec, SlotFactor};
use crate::error::{Error, Result};
use crate::ratlaurent::{rat, EpsFamily, LaurentPoly, Rational, Var};

/// Weights of the graphs in the second-order Kontsevich expansion.
///
/// `t1`–`t4` multiply, in order,
/// `Σ η^{ij}η^{kl} ∂_i∂_k f ∂_j∂_l g`,
/// `Σ η^{ij} ∂_i(η^{kl}) ∂_j∂_l f ∂_k g`,
/// `Σ η^{kl} ∂_k(η^{ij}) ∂_i f ∂_j∂_l g` and
/// `Σ ∂_l(η^{ij}) ∂_j(η^{kl}) ∂_i f ∂_k g`.
#[derive(Clone, Debug, PartialEq)]
pub struct KontsevichWeights {
    pub order1: Rational,
    pub t1: Rational,
    pub t2: Rational,
    pub t3: Rational,
    pub t4: Rational,
}

impl Default for KontsevichWeights {
    fn default() -> KontsevichWeights {
        KontsevichWeights {
            order1: Rational::one(),
            t1: rat(1, 2),
            t2: rat(1, 3),
            t3: rat(1, 3),
            t4: rat(-1, 6),
        }
    }
}

impl KontsevichWeights {
    /// The four second-order weights in order.
    pub fn second_order(&self) -> [&Rational; 4] {
        [&self.t1, &self.t2, &self.t3, &self.t4]
    }

    pub fn second_order_mut(&mut self) -> [&mut Rational; 4] {
        [&mut self.t1, &mut self.t2, &mut self.t3, &mut self.t4]
    }
}

/// `f ⋆ g = Σ_n ε^n B_n(f, g)` on one chart, truncated at a fixed order.
#[derive(Clone, Debug)]
pub struct StarProduct {
    algebra: AlgRef,
    terms: EpsFamily<Cochain>,
}

impl StarProduct {
    /// Wraps bilinear cochains `B_0, …, B_N` on `algebra`.
    pub fn from_terms(algebra: AlgRef, terms: EpsFamily<Cochain>) -> Result<StarProduct> {
        for b in terms.coeffs() {
            let ok = b.arity() == 2
                && b.target().id == algebra.id
                && b.sources().iter().all(|s| s.id == algebra.id);
            if !ok {
                return Err(Error::AlgebraMismatch {
                    expected: format!("{0} ⊗ {0} -> {0}", algebra.id),
                    got: b.signature().to_string(),
                });
            }
        }
        Ok(StarProduct { algebra, terms })
    }

    pub fn algebra(&self) -> &AlgRef {
        &self.algebra
    }

    pub fn order(&self) -> usize {
        self.terms.order()
    }

    pub fn terms(&self) -> &EpsFamily<Cochain> {
        &self.terms
    }

    pub fn b(&self, n: usize) -> Result<&Cochain> {
        self.terms.get(n)
    }

    pub fn star(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<EpsFamily<LaurentPoly>> {
        let coeffs = self
            .terms
            .coeffs()
            .iter()
            .map(|b| b.eval_unchecked(&[f.clone(), g.clone()]))
            .collect::<Result<Vec<_>>>()?;
        EpsFamily::new(coeffs)
    }
}

type DerivKey = (Vec<(Var, u32)>, Vec<(Var, u32)>);

#[derive(Default)]
struct TermSum(BTreeMap<DerivKey, LaurentPoly>);

impl TermSum {
    fn add(&mut self, coeff: LaurentPoly, f: &[Var], g: &[Var]) {
        if coeff.is_zero() {
            return;
        }
        let collect = |xs: &[Var]| {
            let mut m: BTreeMap<Var, u32> = BTreeMap::new();
            for x in xs {
                *m.entry(*x).or_default() += 1;
            }
            m.into_iter().collect::<Vec<_>>()
        };
        *self.0.entry((collect(f), collect(g))).or_insert_with(LaurentPoly::zero) += coeff;
    }

    fn into_cochain(self, a: &AlgRef) -> Result<Cochain> {
        let terms = self
            .0
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((df, dg), c)| (c, vec![SlotFactor::deriv(0, &df), SlotFactor::deriv(1, &dg)]))
            .collect();
        Cochain::from_terms(vec![a.clone(), a.clone()], a.clone(), terms)
    }
}

fn check_chart(a: &AlgRef, eta: &Bivector) -> Result<()> {
    for x in eta.vars() {
        if a.cone_of(*x).is_none() {
            return Err(Error::UnknownVariable(format!("{x} (not a coordinate of {})", a.id)));
        }
    }
    Ok(())
}

/// `B_1(f, g) = Σ η^{ij} ∂_i f ∂_j g` as a bidifferential cochain.
pub fn b1_cochain(a: &AlgRef, eta: &Bivector) -> Result<Cochain> {
    check_chart(a, eta)?;
    let x = eta.vars();
    let mut s = TermSum::default();
    for i in 0..eta.dim() {
        for j in 0..eta.dim() {
            s.add(eta.entry(i, j), &[x[i]], &[x[j]]);
        }
    }
    s.into_cochain(a)
}

/// The four second-order terms with the given weights.
pub fn b2_cochain(a: &AlgRef, eta: &Bivector, w: &KontsevichWeights) -> Result<Cochain> {
    check_chart(a, eta)?;
    let x = eta.vars();
    let d = eta.dim();
    let mut s = TermSum::default();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let t1 = (&eta.entry(i, j) * &eta.entry(k, l)).scale(&w.t1);
                    s.add(t1, &[x[i], x[k]], &[x[j], x[l]]);
                    let t2 = (&eta.entry(i, j) * &eta.entry_deriv(k, l, i)).scale(&w.t2);
                    s.add(t2, &[x[j], x[l]], &[x[k]]);
                    let t3 = (&eta.entry(k, l) * &eta.entry_deriv(i, j, k)).scale(&w.t3);
                    s.add(t3, &[x[i]], &[x[j], x[l]]);
                    let t4 = (&eta.entry_deriv(i, j, l) * &eta.entry_deriv(k, l, j)).scale(&w.t4);
                    s.add(t4, &[x[i]], &[x[k]]);
                }
            }
        }
    }
    s.into_cochain(a)
}

/// The Kontsevich star product of `η` through order `ħ²`.
pub fn kontsevich_star2(a: &AlgRef, eta: &Bivector) -> Result<StarProduct> {
    kontsevich_star2_weighted(a, eta, &KontsevichWeights::default())
}

pub fn kontsevich_star2_weighted(a: &AlgRef, eta: &Bivector, w: &KontsevichWeights) -> Result<StarProduct> {
    let b0 = Cochain::product(a, 2);
    let b1 = b1_cochain(a, eta)?.scale(&w.order1);
    let b2 = b2_cochain(a, eta, w)?;
    StarProduct::from_terms(a.clone(), EpsFamily::new(vec![b0, b1, b2])?)
}

/// Result of [`star_assoc_defect`].
#[derive(Clone, Debug)]
pub struct AssocReport {
    pub order: usize,
    /// Lowest order with a nonzero defect and the first grid triple there.
    pub violation: Option<(usize, Counterexample)>,
}

impl AssocReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `Σ_{i+j=n} B_i(B_j(f, g), h) = Σ_{i+j=n} B_i(f, B_j(g, h))` for
/// `n ≤ order` on grid triples.
pub fn star_assoc_defect(s: &StarProduct, spec: &GridSpec, order: usize) -> Result<AssocReport> {
    if order > s.order() {
        return Err(Error::OrderExceeded {
            requested: order,
            available: s.order(),
        });
    }
    let a = s.algebra();
    for n in 0..=order {
        let r = check_identity(&[a.clone(), a.clone(), a.clone()], spec, |ins| {
            let (f, g, h) = (&ins[0], &ins[1], &ins[2]);
            let mut lhs = LaurentPoly::zero();
            let mut rhs = LaurentPoly::zero();
            for i in 0..=n {
                let (bi, bj) = (s.b(i)?, s.b(n - i)?);
                lhs += bi.eval_unchecked(&[bj.eval_unchecked(&[f.clone(), g.clone()])?, h.clone()])?;
                rhs += bi.eval_unchecked(&[f.clone(), bj.eval_unchecked(&[g.clone(), h.clone()])?])?;
            }
            Ok((lhs, rhs))
        })?;
        if let Some(ce) = r {
            return Ok(AssocReport {
                order,
                violation: Some((n, ce)),
            });
        }
    }
    Ok(AssocReport { order, violation: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{hochschild_d, zero_on_grid, BimoduleStructure};
    use crate::quantize::poisson_bracket;
    use crate::ratlaurent::{parse_poly, AlgebraSpec, Cone};
    use std::sync::Arc;

    fn chart(vars: &[&str], cone: Cone) -> AlgRef {
        let v: Vec<(&str, Cone)> = vars.iter().map(|&x| (x, cone)).collect();
        Arc::new(AlgebraSpec::new("A", &v))
    }

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    fn zu_eta() -> Bivector {
        Bivector::planar(Var::new("z"), Var::new("u"), p("z*u"))
    }

    /// Independent expansion of the four second-order sums on concrete
    /// inputs, straight from the index formula.
    fn b2_oracle(eta: &Bivector, f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
        let x = eta.vars();
        let d = eta.dim();
        let df = |p: &LaurentPoly, a: usize| p.derivative(x[a], 1);
        let mut out = LaurentPoly::zero();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out += (&(&eta.entry(i, j) * &eta.entry(k, l)) * &(&df(&df(f, i), k) * &df(&df(g, j), l)))
                            .scale(&rat(1, 2));
                        out += (&(&eta.entry(i, j) * &df(&eta.entry(k, l), i)) * &(&df(&df(f, j), l) * &df(g, k)))
                            .scale(&rat(1, 3));
                        out += (&(&eta.entry(k, l) * &df(&eta.entry(i, j), k)) * &(&df(f, i) * &df(&df(g, j), l)))
                            .scale(&rat(1, 3));
                        out += (&(&df(&eta.entry(i, j), l) * &df(&eta.entry(k, l), j)) * &(&df(f, i) * &df(g, k)))
                            .scale(&rat(-1, 6));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn frozen_second_order_values() {
        let a = chart(&["z", "u"], Cone::NonNeg);
        let flat = kontsevich_star2(&a, &Bivector::planar(Var::new("z"), Var::new("u"), p("1"))).unwrap();
        assert_eq!(flat.b(2).unwrap().evaluate(&[p("z^2"), p("u^2")]).unwrap(), p("2"));
        let s = kontsevich_star2(&a, &zu_eta()).unwrap();
        let zu = s.star(&p("z"), &p("u")).unwrap();
        assert_eq!(zu.coeffs(), &[p("z*u"), p("z*u"), p("1/6*z*u")]);
        assert!(s.b(2).unwrap().evaluate(&[p("1"), p("z^3*u")]).unwrap().is_zero());
    }

    #[test]
    fn b2_matches_oracle() {
        let a = chart(&["z", "u"], Cone::NonNeg);
        for eta in [zu_eta(), Bivector::planar(Var::new("z"), Var::new("u"), p("z^2*u + u^3"))] {
            let b2 = b2_cochain(&a, &eta, &KontsevichWeights::default()).unwrap();
            for (f, g) in [("z^2*u", "z*u^3"), ("z^3", "u^2 + z"), ("z*u", "z*u")] {
                let (f, g) = (p(f), p(g));
                assert_eq!(b2.evaluate(&[f.clone(), g.clone()]).unwrap(), b2_oracle(&eta, &f, &g));
            }
        }
    }

    #[test]
    fn first_order_is_poisson_cocycle() {
        let a = chart(&["z", "u"], Cone::NonNeg);
        let eta = zu_eta();
        let b1 = b1_cochain(&a, &eta).unwrap();
        for (f, g) in [("z^2*u", "z*u^3"), ("u", "z")] {
            let (f, g) = (p(f), p(g));
            let anti = (b1.evaluate(&[f.clone(), g.clone()]).unwrap() - b1.evaluate(&[g.clone(), f.clone()]).unwrap())
                .scale(&rat(1, 2));
            assert_eq!(anti, poisson_bracket(&eta, &f, &g));
        }
        let bm = BimoduleStructure::diagonal(&Cochain::product(&a, 2)).unwrap();
        let d = hochschild_d(&b1, &bm).unwrap();
        assert!(zero_on_grid(&d, &GridSpec::full(2)).unwrap().is_none());
    }

    #[test]
    fn associative_mod_hbar3() {
        let a = chart(&["z", "u"], Cone::NonNeg);
        for eta in [zu_eta(), Bivector::planar(Var::new("z"), Var::new("u"), p("z^2*u"))] {
            let s = kontsevich_star2(&a, &eta).unwrap();
            let r = star_assoc_defect(&s, &GridSpec::full(2), 2).unwrap();
            assert!(r.passed(), "{:?}", r.violation);
        }
    }

    #[test]
    fn corrupted_weight_is_detected() {
        let a = chart(&["z", "u"], Cone::NonNeg);
        for k in 0..4 {
            let mut w = KontsevichWeights::default();
            *w.second_order_mut()[k] += rat(1, 30);
            let s = kontsevich_star2_weighted(&a, &zu_eta(), &w).unwrap();
            let r = star_assoc_defect(&s, &GridSpec::full(2), 2).unwrap();
            if k < 3 {
                assert_eq!(r.violation.map(|v| v.0), Some(2), "weight {k}");
            } else {
                // The last term is a symmetric biderivation, hence a Hochschild
                // cocycle: associativity cannot see its weight, the value can.
                assert!(r.passed());
                assert_ne!(s.b(2).unwrap().evaluate(&[p("z"), p("u")]).unwrap(), p("1/6*z*u"));
            }
        }
    }
}
