use super::bracket::{bracket, Route};
use super::element::LInfElement;
use super::sign::{koszul_sign, unshuffles};
use super::voronov::VoronovData;
use crate::error::{Error, Result};
use crate::ratlaurent::Rational;

/// Left-hand side of the generalized Jacobi identity
///
/// `Σ_{i=0}^{n} Σ_{s ∈ Sh(i, n-i)} ε(s) ⟨⟨x_{s(1)}, …, x_{s(i)}⟩, x_{s(i+1)}, …, x_{s(n)}⟩`.
///
/// The `i = 0` term involves `⟨⟩`, which vanishes on a valid diagram.
pub fn jacobi_defect(vd: &VoronovData, route: Route, elements: &[LInfElement]) -> Result<LInfElement> {
    let n = elements.len();
    if !(1..=3).contains(&n) {
        return Err(Error::Unsupported(format!("Jacobi identity for n = {n}")));
    }
    let degs: Vec<i64> = elements.iter().map(|e| e.degree()).collect();
    let mut out = LInfElement::zero(degs.iter().sum::<i64>() + 2);
    for i in 0..=n {
        for s in unshuffles(i, n) {
            let inner: Vec<LInfElement> = s[..i].iter().map(|&k| elements[k].clone()).collect();
            let mut outer = vec![bracket(vd, route, &inner)?];
            outer.extend(s[i..].iter().map(|&k| elements[k].clone()));
            let term = bracket(vd, route, &outer)?;
            let sign = Rational::from_integer(koszul_sign(&degs, &s).into());
            out = out.add(&term.scale(&sign))?;
        }
    }
    Ok(out)
}
