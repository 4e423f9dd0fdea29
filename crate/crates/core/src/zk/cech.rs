use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use super::geometry::{u, v, z, zeta, ZkGeometry};
use super::linalg::{solve, Echelon, SparseVec};
use crate::error::{Error, Result};
use crate::ratlaurent::{LaurentPoly, Monomial, Rational, Var};

/// The class of a bivector coefficient `c ∂_z∧∂_u` on `U ∩ V` in
/// `H¹(Z_k, Λ²T)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CechClass {
    pub k: i64,
    #[serde(serialize_with = "as_string")]
    pub coefficient: LaurentPoly,
    pub trivial: bool,
    /// `c = p_U + transition^{-1} · ψ_0(p_V) + Σ_e h_e z^e`.
    #[serde(serialize_with = "as_string")]
    pub p_u: LaurentPoly,
    #[serde(serialize_with = "as_string")]
    pub p_v: LaurentPoly,
    /// `h_e` for every `z`-exponent `e` of the complement basis.
    #[serde(serialize_with = "map_as_strings")]
    pub basis_coords: BTreeMap<i64, LaurentPoly>,
    /// Smallest and largest `z`-exponent considered.
    pub window: (i64, i64),
    /// Whether widening the window left the answer unchanged.
    pub window_stable: bool,
}

fn as_string<S: serde::Serializer>(p: &LaurentPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn map_as_strings<S: serde::Serializer>(
    m: &BTreeMap<i64, LaurentPoly>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (e, p) in m {
        map.serialize_entry(&e.to_string(), &p.to_string())?;
    }
    map.end()
}

struct Solved {
    p_u: LaurentPoly,
    p_v: LaurentPoly,
    basis_coords: BTreeMap<i64, LaurentPoly>,
    window: (i64, i64),
}

/// Splits `c` by parameter monomial and `u`-degree into `z`-exponent
/// vectors.
fn groups(c: &LaurentPoly) -> Result<BTreeMap<(Monomial, i64), SparseVec>> {
    let mut out: BTreeMap<(Monomial, i64), SparseVec> = BTreeMap::new();
    for (m, coef) in c.terms() {
        if m.exponent(zeta()) != 0 || m.exponent(v()) != 0 {
            return Err(Error::Invalid(format!("term {m} is not written in the coordinates (z, u)")));
        }
        let n = m.exponent(u());
        if n < 0 {
            return Err(Error::Invalid(format!("term {m} has negative u-degree")));
        }
        let params = Monomial::from_pairs(m.pairs().filter(|&(x, _)| x != z() && x != u()));
        out.entry((params, n)).or_default().insert(m.exponent(z()), coef.clone());
    }
    Ok(out)
}

/// `z`-exponent vector of a polynomial in `z` and `u` of pure `u`-degree `n`.
fn z_vector(p: &LaurentPoly, n: i64) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (m, c) in p.terms() {
        let others = m.pairs().any(|(x, _)| x != z() && x != u());
        if others || m.exponent(u()) != n {
            return Err(Error::Invalid(format!("transition image {m} is not of u-degree {n}")));
        }
        out.insert(m.exponent(z()), c.clone());
    }
    Ok(out)
}

fn mono(pairs: &[(Var, i64)]) -> Monomial {
    Monomial::from_pairs(pairs.iter().copied())
}

fn solve_in_window(g: &ZkGeometry, c: &LaurentPoly, margin: i64) -> Result<Solved> {
    let k = g.k;
    let t_inv = g
        .transition
        .pow(-1)
        .map_err(|_| Error::Invalid("transition must be a monomial".into()))?;
    let mut out = Solved {
        p_u: LaurentPoly::zero(),
        p_v: LaurentPoly::zero(),
        basis_coords: BTreeMap::new(),
        window: (0, 0),
    };
    let mut first = true;
    for ((params, n), target) in groups(c)? {
        let lo = target.keys().next().expect("nonempty group") - margin;
        let hi = target.keys().next_back().expect("nonempty group") + margin;
        out.window = if first {
            (lo, hi)
        } else {
            (out.window.0.min(lo), out.window.1.max(hi))
        };
        first = false;
        let inside = |w: &SparseVec| w.keys().all(|e| (lo..=hi).contains(e));
        let mut cols: Vec<SparseVec> = Vec::new();
        let mut labels: Vec<LaurentPoly> = Vec::new();
        let mut sides: Vec<u8> = Vec::new();
        for e in lo.max(0)..=hi {
            cols.push(SparseVec::from([(e, Rational::one())]));
            labels.push(LaurentPoly::monomial(mono(&[(z(), e), (u(), n)])));
            sides.push(0);
        }
        // ψ_0(ζ^m v^n) has z-exponent kn - m; every image in the window has
        // m ≤ kn - lo + |exponent of the transition|.
        let m_max = (k * n - lo + 2 * k.abs() + 4).max(0);
        for m in 0..=m_max {
            let src = LaurentPoly::monomial(mono(&[(zeta(), m), (v(), n)]));
            let img = &t_inv * &g.psi0.apply(&src)?;
            let w = z_vector(&img, n)?;
            if !w.is_empty() && inside(&w) {
                cols.push(w);
                labels.push(src);
                sides.push(1);
            }
        }
        let mut span = Echelon::default();
        for col in &cols {
            span.insert(col);
        }
        for e in lo..=hi {
            let unit = SparseVec::from([(e, Rational::one())]);
            if span.insert(&unit) {
                cols.push(unit);
                labels.push(LaurentPoly::monomial(mono(&[(z(), e), (u(), n)])));
                sides.push(2);
            }
        }
        let x = solve(&cols, &target).ok_or_else(|| Error::Invalid("Čech system is inconsistent".into()))?;
        for ((xj, label), side) in x.iter().zip(&labels).zip(&sides) {
            if xj.is_zero() {
                continue;
            }
            let term = label.mul_monomial(xj, &params);
            match side {
                0 => out.p_u += term,
                1 => out.p_v += term,
                _ => {
                    let (_, m) = label.as_term().expect("unit label");
                    *out.basis_coords.entry(m.exponent(z())).or_insert_with(LaurentPoly::zero) +=
                        LaurentPoly::term(xj.clone(), params.mul(&mono(&[(u(), n)])));
                }
            }
        }
    }
    out.basis_coords.retain(|_, p| !p.is_zero());
    Ok(out)
}

/// Decides whether `c ∂_z∧∂_u` on `U ∩ V` is a Čech coboundary, i.e.
/// `c = p_U + transition^{-1} · p_V(z^{-1}, z^k u)` with `p_U ∈ ℂ[z, u]` and
/// `p_V ∈ ℂ[ζ, v]`, working separately in each `u`-degree over an exponent
/// window around the support of `c`.
pub fn cech_h1_decide(g: &ZkGeometry, c: &LaurentPoly) -> Result<CechClass> {
    let margin = g.k + 2;
    let s = solve_in_window(g, c, margin)?;
    let wide = solve_in_window(g, c, 2 * margin)?;
    let trivial = s.basis_coords.is_empty();
    let recon = &(&s.p_u + &(&g.transition.pow(-1)? * &g.psi0.apply(&s.p_v)?))
        + &s.basis_coords
            .iter()
            .fold(LaurentPoly::zero(), |acc, (e, h)| acc + h.mul_monomial(&Rational::one(), &mono(&[(z(), *e)])));
    if &recon != c {
        return Err(Error::Invalid(format!("decomposition does not reproduce {c}")));
    }
    Ok(CechClass {
        k: g.k,
        coefficient: c.clone(),
        trivial,
        window_stable: wide.basis_coords == s.basis_coords,
        p_u: s.p_u,
        p_v: s.p_v,
        basis_coords: s.basis_coords,
        window: s.window,
    })
}

/// `dim H¹(Z_k, Λ²T)` as the rank of the class coordinates of the probe
/// monomials `z^e u^n`, `e ∈ [-2k-2, k+2]`, `n ∈ {0, 1}`.
pub fn h1_dimension(g: &ZkGeometry) -> Result<usize> {
    let k = g.k;
    let mut span = Echelon::default();
    for n in 0..=1 {
        for e in (-2 * k - 2)..=(k + 2) {
            let c = LaurentPoly::monomial(mono(&[(z(), e), (u(), n)]));
            let class = cech_h1_decide(g, &c)?;
            let coords: SparseVec = class
                .basis_coords
                .iter()
                .map(|(e, h)| (*e, h.as_term().expect("probe coordinates are monomials").0.clone()))
                .collect();
            span.insert(&coords);
        }
    }
    Ok(span.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlaurent::parse_poly;
    use crate::zk::build_zk;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn examples() {
        let g5 = build_zk(5).unwrap();
        let c = cech_h1_decide(&g5, &p("z^-2")).unwrap();
        assert!(!c.trivial);
        assert_eq!(c.basis_coords, BTreeMap::from([(-2, p("1"))]));
        assert!(c.window_stable);
        for k in 1..=6 {
            let g = build_zk(k).unwrap();
            let c = cech_h1_decide(&g, &p("z^2*u")).unwrap();
            assert!(c.trivial);
            assert_eq!(c.p_u, p("z^2*u"));
        }
        let g3 = build_zk(3).unwrap();
        for i in 1..=2 {
            let c = cech_h1_decide(&g3, &p(&format!("-t{i}*z^{}", i - 2))).unwrap();
            assert!(c.trivial, "i = {i}");
        }
    }

    #[test]
    fn coboundary_from_v() {
        let g = build_zk(4).unwrap();
        // transition^{-1} ψ_0(ζ^3 v) = -z^{-2} z^{1} u = -z^{-1} u
        let c = cech_h1_decide(&g, &p("z^-1*u + 3*z^-5")).unwrap();
        assert!(c.trivial);
        assert_eq!(c.p_v, p("-zeta^3*v - 3*zeta^3"));
    }

    #[test]
    fn dimensions() {
        for k in 1..=8 {
            let g = build_zk(k).unwrap();
            assert_eq!(h1_dimension(&g).unwrap(), (k - 3).max(0) as usize, "k = {k}");
        }
    }

    #[test]
    fn rejects_foreign_coordinates() {
        let g = build_zk(4).unwrap();
        assert!(cech_h1_decide(&g, &p("zeta")).is_err());
    }
}
