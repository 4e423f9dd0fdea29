//! Recursive-descent parser for the polynomial literal grammar:
//!
//! ```text
//! poly   := ['-'] term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := ident ('^' sint)?
//! coeff  := uint ('/' uint)?
//! sint   := ['-'] uint
//! ```
//!
//! Whitespace is ignored everywhere. `parse_poly(p.to_string()) == p`.

use num::{BigInt, One, Zero};

use super::poly::{LaurentPoly, Monomial, Rational};
use super::var::Var;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    universe: Option<&'a [Var]>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected unsigned integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn ident(&mut self) -> Result<Var> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return self.err("expected identifier");
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
        let x = Var::new(name);
        if let Some(universe) = self.universe {
            if !universe.contains(&x) {
                return Err(Error::UnknownVariable(name.to_owned()));
            }
        }
        Ok(x)
    }

    fn factor(&mut self) -> Result<(Var, i64)> {
        let x = self.ident()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let at = self.pos;
            let n = self.uint()?;
            let e: i64 = match i64::try_from(&n) {
                Ok(e) => e,
                Err(_) => {
                    self.pos = at;
                    return self.err("exponent out of range");
                }
            };
            Ok((x, if neg { -e } else { e }))
        } else {
            Ok((x, 1))
        }
    }

    fn term(&mut self) -> Result<(Rational, Monomial)> {
        let mut coeff = Rational::one();
        let mut factors = Vec::new();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                let d = if self.eat(b'/') {
                    let at = self.pos;
                    let d = self.uint()?;
                    if d.is_zero() {
                        self.pos = at;
                        return self.err("zero denominator");
                    }
                    d
                } else {
                    BigInt::one()
                };
                coeff = Rational::new(n, d);
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => factors.push(self.factor()?),
            _ => return self.err("expected term"),
        }
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok((coeff, Monomial::from_pairs(factors)))
    }

    fn poly(&mut self) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        let mut neg = self.eat(b'-');
        loop {
            let (c, m) = self.term()?;
            out.add_term(m, if neg { -c } else { c });
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(out)
    }
}

/// Parses a polynomial literal; any identifier is accepted as a variable.
pub fn parse_poly(text: &str) -> Result<LaurentPoly> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        universe: None,
    }
    .poly()
}

/// Parses a polynomial literal, rejecting variables outside `universe`.
pub fn parse_poly_in(text: &str, universe: &[Var]) -> Result<LaurentPoly> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        universe: Some(universe),
    }
    .poly()
}

/// Parses `p`, `-p`, `p/q` or `-p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    parse_poly_in(text, &[])?
        .as_constant()
        .ok_or_else(|| Error::Parse {
            offset: 0,
            message: format!("`{text}` is not a rational constant"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlaurent::rat;

    #[test]
    fn reads_mixed_terms() {
        let p = parse_poly("2*z^2*u - 1/3").unwrap();
        let expect = LaurentPoly::mono(rat(2, 1), &[("z", 2), ("u", 1)]) + LaurentPoly::constant(rat(-1, 3));
        assert_eq!(p, expect);
    }

    #[test]
    fn reads_negative_exponent() {
        assert_eq!(parse_poly("z^-1").unwrap(), LaurentPoly::mono(rat(1, 1), &[("z", -1)]));
        assert_eq!(parse_poly("z ^ - 1").unwrap(), LaurentPoly::mono(rat(1, 1), &[("z", -1)]));
    }

    #[test]
    fn reads_leading_minus() {
        assert_eq!(
            parse_poly("-zeta*v").unwrap(),
            LaurentPoly::mono(rat(-1, 1), &[("zeta", 1), ("v", 1)])
        );
    }

    #[test]
    fn reports_offsets() {
        match parse_poly("z + * u") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("z*2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn universe_is_enforced() {
        let uni = [Var::new("z"), Var::new("u")];
        assert!(parse_poly_in("z*u", &uni).is_ok());
        assert_eq!(
            parse_poly_in("z*w", &uni),
            Err(Error::UnknownVariable("w".into()))
        );
    }

    #[test]
    fn zero_and_cancellation() {
        assert!(parse_poly("0").unwrap().is_zero());
        assert!(parse_poly("z - z").unwrap().is_zero());
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
    }
}
