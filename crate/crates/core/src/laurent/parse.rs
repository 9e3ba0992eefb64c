//! Expression syntax: integers, `x`, `y`, `z`, `+ - * / ^` and parentheses.
//!
//! Division is only allowed by a single term, and negative exponents only on
//! single terms with unit coefficient. Juxtaposition (`2x`, `3(x+1)`) is
//! multiplication. `**` is accepted as a synonym for `^`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LaurentPolynomial, VARIABLES};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;

/// Parse `input` as a Laurent polynomial in `dim` variables.
pub fn parse(input: &str, dim: usize) -> Result<LaurentPolynomial> {
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
        dim,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
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

    fn expr(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') if self.src.get(self.pos + 1) != Some(&b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    acc = divide_by_term(&acc, &d).map_err(|m| Error::Parse {
                        offset: at,
                        message: m.into(),
                    })?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {
                    acc = acc.mul(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPolynomial> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<LaurentPolynomial> {
        let base = self.atom()?;
        let caret = if self.eat(b'^') {
            true
        } else if self.peek() == Some(b'*') && self.src.get(self.pos + 1) == Some(&b'*') {
            self.pos += 2;
            true
        } else {
            false
        };
        if !caret {
            return Ok(base);
        }
        let at = self.pos;
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let wrapped = self.eat(b'(');
        let negative = if wrapped && self.eat(b'-') {
            !negative
        } else {
            negative
        };
        let n = self.integer()?;
        if wrapped && !self.eat(b')') {
            return Err(self.error("expected `)` after exponent"));
        }
        let n: u32 = n.try_into().map_err(|_| Error::Parse {
            offset: at,
            message: "exponent too large".into(),
        })?;
        if negative {
            let inv = invert_term(&base).ok_or_else(|| Error::Parse {
                offset: at,
                message: "negative exponent requires a single term with coefficient ±1".into(),
            })?;
            Ok(inv.pow(n))
        } else {
            Ok(base.pow(n))
        }
    }

    fn atom(&mut self) -> Result<LaurentPolynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(LaurentPolynomial::monomial(
                    n,
                    LatticeVector::zero(self.dim),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let idx = VARIABLES[..self.dim]
                    .iter()
                    .position(|&v| v as u8 == c)
                    .ok_or_else(|| self.error(&format!("unknown variable `{}`", c as char)))?;
                self.pos += 1;
                Ok(LaurentPolynomial::variable(self.dim, idx))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("decimal digits"))
    }
}

fn single_term(p: &LaurentPolynomial) -> Option<(LatticeVector, BigInt)> {
    let mut it = p.terms();
    let (e, c) = it.next()?;
    if it.next().is_some() {
        return None;
    }
    Some((*e, c.clone()))
}

fn invert_term(p: &LaurentPolynomial) -> Option<LaurentPolynomial> {
    let (e, c) = single_term(p)?;
    if !c.abs().is_one() {
        return None;
    }
    Some(LaurentPolynomial::monomial(c, -e))
}

fn divide_by_term(
    num: &LaurentPolynomial,
    den: &LaurentPolynomial,
) -> std::result::Result<LaurentPolynomial, &'static str> {
    let (e, c) = single_term(den).ok_or("division is only defined by a single term")?;
    let mut terms = Vec::with_capacity(num.len());
    for (k, a) in num.terms() {
        let (q, r) = a.div_rem(&c);
        if !r.is_zero() {
            return Err("coefficient is not divisible by the divisor");
        }
        let shifted = k.checked_sub(&e).ok_or("exponent overflow")?;
        terms.push((shifted, q));
    }
    LaurentPolynomial::from_terms(num.dim(), terms).map_err(|_| "dimension mismatch")
}
