use super::poly::LaurentPoly;
use crate::error::{Error, Result};

/// A truncated formal series `c_0 + c_1 ε + ... + c_N ε^N`.
///
/// ε is never a polynomial variable; it exists only as the index into
/// `coeffs`. Arithmetic drops everything above `ε^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsFamily<T> {
    coeffs: Vec<T>,
}

impl<T> EpsFamily<T> {
    /// `coeffs[n]` is the ε^n coefficient; at least `c_0` is required.
    pub fn new(coeffs: Vec<T>) -> Result<EpsFamily<T>> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("an ε-series needs at least c_0".into()));
        }
        Ok(EpsFamily { coeffs })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> EpsFamily<T> {
        EpsFamily {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Option<&T> {
        self.coeffs.get(n)
    }

    /// The ε^n coefficient, or an error if `n` exceeds the truncation.
    pub fn get(&self, n: usize) -> Result<&T> {
        self.coeffs.get(n).ok_or(Error::OrderExceeded {
            requested: n,
            available: self.order(),
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> EpsFamily<U> {
        EpsFamily {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> EpsFamily<T>
    where
        T: Clone,
    {
        EpsFamily {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Cauchy product with an arbitrary bilinear pairing `f`.
    pub fn convolve<U, V>(
        &self,
        other: &EpsFamily<U>,
        zero: impl Fn() -> V,
        mut f: impl FnMut(&T, &U) -> V,
        mut add: impl FnMut(&mut V, V),
    ) -> Result<EpsFamily<V>> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        let n = self.order();
        Ok(EpsFamily::from_fn(n, |k| {
            let mut acc = zero();
            for i in 0..=k {
                add(&mut acc, f(&self.coeffs[i], &other.coeffs[k - i]));
            }
            acc
        }))
    }
}

impl EpsFamily<LaurentPoly> {
    pub fn constant(p: LaurentPoly, order: usize) -> EpsFamily<LaurentPoly> {
        EpsFamily::from_fn(order, |n| if n == 0 { p.clone() } else { LaurentPoly::zero() })
    }

    pub fn add(&self, other: &EpsFamily<LaurentPoly>) -> Result<EpsFamily<LaurentPoly>> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(EpsFamily::from_fn(self.order(), |n| &self.coeffs[n] + &other.coeffs[n]))
    }

    pub fn sub(&self, other: &EpsFamily<LaurentPoly>) -> Result<EpsFamily<LaurentPoly>> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(EpsFamily::from_fn(self.order(), |n| &self.coeffs[n] - &other.coeffs[n]))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    /// Non-negative integer power.
    pub fn pow(&self, q: u32) -> EpsFamily<LaurentPoly> {
        let mut acc = EpsFamily::constant(LaurentPoly::one(), self.order());
        for _ in 0..q {
            acc = eps_mul(&acc, self).expect("equal orders");
        }
        acc
    }
}

/// Product of two ε-series of polynomials, truncated at their common order.
pub fn eps_mul(f: &EpsFamily<LaurentPoly>, g: &EpsFamily<LaurentPoly>) -> Result<EpsFamily<LaurentPoly>> {
    f.convolve(g, LaurentPoly::zero, |a, b| a * b, |acc, x| *acc += x)
}

impl std::ops::Mul for &EpsFamily<LaurentPoly> {
    type Output = EpsFamily<LaurentPoly>;
    /// Panics on mismatched orders; use [`eps_mul`] for the fallible form.
    fn mul(self, rhs: &EpsFamily<LaurentPoly>) -> EpsFamily<LaurentPoly> {
        eps_mul(self, rhs).expect("ε-series of different truncation orders")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlaurent::{parse_poly, rat};

    fn s(cs: &[&str]) -> EpsFamily<LaurentPoly> {
        EpsFamily::new(cs.iter().map(|c| parse_poly(c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn conjugate_product() {
        assert_eq!(&s(&["1", "z", "0"]) * &s(&["1", "-z", "0"]), s(&["1", "0", "-z^2"]));
    }

    #[test]
    fn unit() {
        assert_eq!(&s(&["u", "t1*z"]) * &s(&["1", "0"]), s(&["u", "t1*z"]));
    }

    #[test]
    fn v_image_square() {
        let k = 4;
        let i = 2;
        let v = s(&[&format!("z^{k}*u"), &format!("t{i}*z^{i}"), "0"]);
        let sq = &v * &v;
        assert_eq!(sq.coeff(0).unwrap(), &parse_poly(&format!("z^{}*u^2", 2 * k)).unwrap());
        assert_eq!(
            sq.coeff(1).unwrap(),
            &parse_poly(&format!("2*t{i}*z^{}*u", k + i)).unwrap()
        );
        assert_eq!(
            sq.coeff(2).unwrap(),
            &LaurentPoly::mono(rat(1, 1), &[("t2", 2), ("z", 2 * i)])
        );
    }

    #[test]
    fn order_mismatch() {
        assert_eq!(
            eps_mul(&s(&["1"]), &s(&["1", "z"])),
            Err(Error::OrderMismatch(0, 1))
        );
    }
}
