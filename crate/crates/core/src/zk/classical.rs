use num::{One, Zero};

use super::geometry::{t, u, v, z, zeta, ZkGeometry};
use crate::cochain::{Cochain, MonomialMap, SlotFactor};
use crate::error::{Error, Result};
use crate::gs::APair;
use crate::ratlaurent::{EpsFamily, LaurentPoly, Monomial, Rational};

/// The classical deformation `(ζ, v) = (z^{-1}, z^k u + ε s)` of the gluing,
/// with `s = Σ t_i z^i`.
#[derive(Clone, Debug)]
pub struct ClassicalDeformation {
    pub k: i64,
    /// `s`, a polynomial in `z` and the parameters.
    pub shift: LaurentPoly,
    pub order: usize,
}

fn binomial(q: i64, n: i64) -> Rational {
    if n < 0 || n > q {
        return Rational::zero();
    }
    (0..n).fold(Rational::one(), |acc, j| acc * Rational::from_integer((q - j).into()) / Rational::from_integer((j + 1).into()))
}

impl ClassicalDeformation {
    /// Single-index deformation `s = t_i z^i`.
    pub fn single(k: i64, i: i64, order: usize) -> Result<ClassicalDeformation> {
        check_index(k, i)?;
        ClassicalDeformation::with_shift(k, LaurentPoly::monomial(Monomial::from_pairs([(t(i), 1), (z(), i)])), order)
    }

    /// `s = Σ_{i ∈ indices} t_i z^i`.
    pub fn indices(k: i64, indices: &[i64], order: usize) -> Result<ClassicalDeformation> {
        let mut s = LaurentPoly::zero();
        for &i in indices {
            check_index(k, i)?;
            s += LaurentPoly::monomial(Monomial::from_pairs([(t(i), 1), (z(), i)]));
        }
        ClassicalDeformation::with_shift(k, s, order)
    }

    /// An arbitrary shift; it must not involve `u`, and its `z`-exponents
    /// must lie in `[1, k-1]` so that `θ` is a nontrivial cocycle.
    pub fn with_shift(k: i64, shift: LaurentPoly, order: usize) -> Result<ClassicalDeformation> {
        if k < 1 {
            return Err(Error::Invalid(format!("k must be at least 1, got {k}")));
        }
        for (m, _) in shift.terms() {
            if m.exponent(u()) != 0 || m.exponent(zeta()) != 0 || m.exponent(v()) != 0 {
                return Err(Error::Invalid(format!("shift term {m} must only involve z and parameters")));
            }
            let e = m.exponent(z());
            if !(1..k).contains(&e) {
                return Err(Error::Invalid(format!("shift exponent {e} outside [1, {}]", k - 1)));
            }
        }
        Ok(ClassicalDeformation { k, shift, order })
    }

    /// `ψ_n(ζ^m v^q)`: the `ε^n` coefficient of `z^{-m} (z^k u + ε s)^q`,
    /// i.e. `C(q, n) s^n (z^k u)^{q-n} z^{-m}`.
    pub fn psi_n(&self, n: usize, m: i64, q: i64) -> LaurentPoly {
        let n = n as i64;
        let c = binomial(q, n);
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        let s_n = self.shift.pow(n).expect("nonnegative power");
        let rest = Monomial::from_pairs([(z(), self.k * (q - n) - m), (u(), q - n)]);
        s_n.mul_monomial(&c, &rest)
    }

    /// `ψ_n` on an arbitrary element of `ℂ[ζ, v]` (with parameters).
    pub fn apply_psi(&self, n: usize, p: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (mono, c) in p.terms() {
            let (m, q) = (mono.exponent(zeta()), mono.exponent(v()));
            let params = Monomial::from_pairs(mono.pairs().filter(|&(x, _)| x != zeta() && x != v()));
            out += self.psi_n(n, m, q).mul_monomial(c, &params);
        }
        out
    }

    /// `ψ_n` as a unary cochain `A_V → A_W`.
    pub fn psi_cochain(&self, g: &ZkGeometry, n: usize) -> Cochain {
        let me = self.clone();
        let map = MonomialMap::new(format!("psi{n}"), move |mono: &Monomial| {
            Ok(me.apply_psi(n, &LaurentPoly::monomial(mono.clone())))
        });
        Cochain::linear_map(&g.a_v, &g.a_w, map)
    }

    /// `ψ_0, …, ψ_N`.
    pub fn psi_series(&self, g: &ZkGeometry) -> EpsFamily<Cochain> {
        EpsFamily::from_fn(self.order, |n| self.psi_cochain(g, n))
    }

    /// `Φ̃ = (φ_0, ψ_0) + Σ_{n≥1} ε^n (0, ψ_n)`.
    pub fn phi_family(&self, g: &ZkGeometry) -> EpsFamily<APair> {
        EpsFamily::from_fn(self.order, |n| {
            if n == 0 {
                APair::legs(&g.span)
            } else {
                APair {
                    u: Cochain::zero(vec![g.a_u.clone()], g.a_w.clone()),
                    v: self.psi_cochain(g, n),
                }
            }
        })
    }

    /// `θ = s z^{-k} ∂_u` as a unary cochain on `A_W`.
    pub fn theta(&self, g: &ZkGeometry) -> Result<Cochain> {
        let coeff = self.shift.mul_monomial(&Rational::one(), &Monomial::from_pairs([(z(), -self.k)]));
        Cochain::from_terms(
            vec![g.a_w.clone()],
            g.a_w.clone(),
            vec![(coeff, vec![SlotFactor::deriv(0, &[(u(), 1)])])],
        )
    }
}

fn check_index(k: i64, i: i64) -> Result<()> {
    if !(1..k).contains(&i) {
        return Err(Error::Invalid(format!("index i = {i} outside [1, {}] for k = {k}", k - 1)));
    }
    Ok(())
}

/// Builds `ψ_n` by a different route, for cross-checks: substitutes
/// `v ↦ z^k u + ε s` into `ζ^m v^q` with truncated series arithmetic.
pub fn psi_by_substitution(cd: &ClassicalDeformation, m: i64, q: i64) -> EpsFamily<LaurentPoly> {
    let mut vt = vec![LaurentPoly::zero(); cd.order + 1];
    vt[0] = LaurentPoly::monomial(Monomial::from_pairs([(z(), cd.k), (u(), 1)]));
    if cd.order >= 1 {
        vt[1] = cd.shift.clone();
    }
    let vt = EpsFamily::new(vt).expect("nonempty");
    let zm = LaurentPoly::monomial(Monomial::from_pairs([(z(), -m)]));
    vt.pow(q as u32).map(|c| c * &zm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{check_identity, GridSpec};
    use crate::ratlaurent::{parse_poly, rat};
    use crate::zk::build_zk;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn displayed_values() {
        for k in 2..=5 {
            for i in 1..k {
                let cd = ClassicalDeformation::single(k, i, 2).unwrap();
                assert_eq!(cd.psi_n(1, 0, 1), p(&format!("t{i}*z^{i}")));
                assert_eq!(cd.psi_n(2, 0, 2), p(&format!("t{i}^2*z^{}", 2 * i)));
                assert!(cd.psi_n(1, 3, 0).is_zero());
                assert_eq!(cd.psi_n(0, 2, 1), p(&format!("z^{}*u", k - 2)));
            }
        }
    }

    #[test]
    fn psi_matches_substitution() {
        let cd = ClassicalDeformation::indices(5, &[1, 3], 3).unwrap();
        for m in 0..=5 {
            for q in 0..=5 {
                let series = psi_by_substitution(&cd, m, q);
                for n in 0..=3 {
                    assert_eq!(&cd.psi_n(n, m, q), series.get(n).unwrap(), "n={n} m={m} q={q}");
                }
            }
        }
    }

    #[test]
    fn psi1_is_theta_after_psi0() {
        let g = build_zk(4).unwrap();
        let cd = ClassicalDeformation::single(4, 2, 1).unwrap();
        let theta = cd.theta(&g).unwrap();
        let lhs = cd.psi_cochain(&g, 1);
        let rhs = Cochain::compose(&theta, &[g.psi0_cochain()]).unwrap();
        assert!(crate::cochain::equal_default(&lhs, &rhs, &GridSpec::full(5)).unwrap().is_none());
    }

    #[test]
    fn morphism_law_through_order_three() {
        let g = build_zk(4).unwrap();
        let cd = ClassicalDeformation::indices(4, &[1, 2], 3).unwrap();
        let r = check_identity(&[g.a_v.clone(), g.a_v.clone()], &GridSpec::full(3), |ins| {
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for n in 0..=3 {
                lhs.push(cd.apply_psi(n, &(&ins[0] * &ins[1])));
                let mut s = LaurentPoly::zero();
                for j in 0..=n {
                    s += &cd.apply_psi(j, &ins[0]) * &cd.apply_psi(n - j, &ins[1]);
                }
                rhs.push(s);
            }
            let tag = |xs: Vec<LaurentPoly>| {
                xs.into_iter()
                    .enumerate()
                    .fold(LaurentPoly::zero(), |acc, (n, x)| acc + x.mul_monomial(&rat(1, 1), &Monomial::from_pairs([(crate::ratlaurent::Var::new("eps"), n as i64)])))
            };
            Ok((tag(lhs), tag(rhs)))
        })
        .unwrap();
        assert!(r.is_none(), "{r:?}");
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(ClassicalDeformation::single(4, 0, 2).is_err());
        assert!(ClassicalDeformation::single(4, 4, 2).is_err());
        assert!(ClassicalDeformation::with_shift(4, p("u"), 2).is_err());
    }
}
