use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, One, Signed, Zero};
use smallvec::SmallVec;

use super::var::Var;
use crate::error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = num::BigRational;

/// Shorthand for the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A Laurent monomial: sorted `(variable, exponent)` pairs, zero exponents
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[(Var, i64); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(x: Var) -> Monomial {
        Monomial::from_pairs([(x, 1)])
    }

    /// Builds a monomial from arbitrary pairs; repeated variables add up.
    pub fn from_pairs<I: IntoIterator<Item = (Var, i64)>>(pairs: I) -> Monomial {
        let mut map: BTreeMap<Var, i64> = BTreeMap::new();
        for (x, e) in pairs {
            *map.entry(x).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, x: Var) -> i64 {
        self.0
            .iter()
            .find(|(y, _)| *y == x)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.0.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(x, _)| x)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (x, e) = a[i];
            let (y, f) = b[j];
            if x < y {
                out.push((x, e));
                i += 1;
            } else if y < x {
                out.push((y, f));
                j += 1;
            } else {
                if e + f != 0 {
                    out.push((x, e + f));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn pow(&self, n: i64) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(x, e)| (x, e * n)).collect())
    }

    pub fn inverse(&self) -> Monomial {
        self.pow(-1)
    }

    /// Replaces the exponent of `x`.
    pub fn with_exponent(&self, x: Var, e: i64) -> Monomial {
        let rest = self.0.iter().copied().filter(|&(y, _)| y != x);
        Monomial::from_pairs(rest.chain(std::iter::once((x, e))))
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e).sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, (x, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{x}")?;
            } else {
                write!(f, "{x}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> LaurentPoly {
        LaurentPoly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> LaurentPoly {
        LaurentPoly::constant(rat(n, 1))
    }

    pub fn var(x: Var) -> LaurentPoly {
        LaurentPoly::term(Rational::one(), Monomial::var(x))
    }

    pub fn term(c: Rational, m: Monomial) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn monomial(m: Monomial) -> LaurentPoly {
        LaurentPoly::term(Rational::one(), m)
    }

    /// `c · Π x^e` from `(name, exponent)` pairs.
    pub fn mono(c: Rational, pairs: &[(&str, i64)]) -> LaurentPoly {
        LaurentPoly::term(c, Monomial::from_pairs(pairs.iter().map(|&(x, e)| (Var::new(x), e))))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The single `(coefficient, monomial)` pair if the polynomial is a
    /// nonzero term.
    pub fn as_term(&self) -> Option<(&Rational, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        match self.as_term() {
            Some((c, m)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, m: &Monomial) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    /// Non-negative power by repeated squaring; negative powers only for
    /// single terms.
    pub fn pow(&self, n: i64) -> Result<LaurentPoly> {
        if n < 0 {
            let (c, m) = self
                .as_term()
                .ok_or_else(|| Error::NotInvertible(self.to_string()))?;
            let inv = Rational::one() / c;
            return LaurentPoly::term(inv, m.inverse()).pow(-n);
        }
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// `∂^order / ∂x^order`.
    pub fn derivative(&self, x: Var, order: u32) -> LaurentPoly {
        if order == 0 {
            return self.clone();
        }
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(x);
            let mut falling = BigInt::one();
            for j in 0..order as i64 {
                falling *= BigInt::from(e - j);
            }
            if falling.is_zero() {
                continue;
            }
            let m2 = m.with_exponent(x, e - order as i64);
            out.add_term(m2, c * Rational::from_integer(falling));
        }
        out
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    /// Minimum and maximum exponent of `x` over the support.
    pub fn exponent_range(&self, x: Var) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|m| m.exponent(x));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Coefficient of `x^e` as a polynomial in the remaining variables.
    pub fn coefficient_of_power(&self, x: Var, e: i64) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exponent(x) == e)
                .map(|(m, c)| (m.with_exponent(x, 0), c.clone())),
        )
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        if self.terms.is_empty() {
            *self = rhs;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<'a> SubAssign<&'a LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl SubAssign for LaurentPoly {
    fn sub_assign(&mut self, rhs: LaurentPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= rhs;
        self
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<'a> Neg for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.clone().neg()
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some((c, m)) = rhs.as_term() {
            return self.mul_monomial(c, m);
        }
        if let Some((c, m)) = self.as_term() {
            return rhs.mul_monomial(c, m);
        }
        let mut out = LaurentPoly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> LaurentPoly {
        LaurentPoly::var(Var::new("z"))
    }
    fn u() -> LaurentPoly {
        LaurentPoly::var(Var::new("u"))
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&z() + &u()) * &(&z() - &u());
        let expect = &(&z() * &z()) - &(&u() * &u());
        assert_eq!(p, expect);
    }

    #[test]
    fn chart_change_product() {
        let k = 3;
        let zinv = z().pow(-1).unwrap();
        let v = LaurentPoly::mono(rat(1, 1), &[("z", k), ("u", 1)]);
        assert_eq!(&zinv * &v, LaurentPoly::mono(rat(1, 1), &[("z", 2), ("u", 1)]));
    }

    #[test]
    fn times_zero() {
        assert!((&z() * &LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn derivative_of_laurent_monomial() {
        let p = LaurentPoly::mono(rat(1, 1), &[("z", -2)]);
        let d = p.derivative(Var::new("z"), 2);
        assert_eq!(d, LaurentPoly::mono(rat(6, 1), &[("z", -4)]));
        assert!(LaurentPoly::mono(rat(1, 1), &[("z", 1)])
            .derivative(Var::new("z"), 2)
            .is_zero());
    }

    #[test]
    fn printing_is_canonical() {
        let p = LaurentPoly::mono(rat(2, 1), &[("z", 2), ("u", 1)]) + LaurentPoly::constant(rat(-1, 3));
        assert_eq!(p.to_string(), "-1/3 + 2*u*z^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::mono(rat(-1, 1), &[("z", -1)]).to_string(), "-z^-1");
    }

    #[test]
    fn negative_power_of_sum_fails() {
        assert!((&z() + &u()).pow(-1).is_err());
    }
}
