//! Text grammar for polynomials:
//!
//! ```text
//! polynomial := ['+'|'-'] term (('+'|'-') term)*
//! term       := coeff ['*' factor ('*' factor)*] | factor ('*' factor)*
//! factor     := var ['^' posint]
//! coeff      := int | int '/' posint
//! ```
//!
//! Whitespace is insignificant; variables are ASCII identifiers of the ring.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, Polynomial, RingDescriptor};
use crate::error::{Error, Result};
use crate::linalg::Q;

pub fn parse_polynomial(text: &str, ring: &RingDescriptor) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let poly = p.polynomial()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a RingDescriptor,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn polynomial(&mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        let mut sign = if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        };
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, if sign < 0 { -c } else { c });
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Q)> {
        let nvars = self.ring.nvars();
        let mut mono = Monomial::one(nvars);
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let c = self.coefficient()?;
                if !self.eat(b'*') {
                    return Ok((mono, c));
                }
                c
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => Q::one(),
            Some(_) => return Err(self.error("expected a coefficient or a variable")),
            None => return Err(self.error("unexpected end of input")),
        };
        loop {
            let f = self.factor()?;
            mono = mono.mul(&f);
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn coefficient(&mut self) -> Result<Q> {
        let n = self.digits()?;
        if self.eat(b'/') {
            let at = self.pos;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(Error::Syntax {
                    pos: at,
                    msg: "zero denominator".into(),
                });
            }
            Ok(Q::new(n, d))
        } else {
            Ok(Q::from_integer(n))
        }
    }

    fn factor(&mut self) -> Result<Monomial> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return Err(self.error("expected a variable"));
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let var = self
            .ring
            .variable_index(name)
            .ok_or_else(|| Error::UnknownVariable {
                name: name.to_string(),
                pos: start,
            })?;
        let mut exp = 1u32;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.digits()?;
            exp = u32::try_from(&e)
                .ok()
                .filter(|&e| e > 0)
                .ok_or(Error::Syntax {
                    pos: at,
                    msg: "exponent must be a positive integer".into(),
                })?;
        }
        let mut m = Monomial::one(self.ring.nvars());
        let mut e = m.exponents().to_vec();
        e[var] = exp;
        m = Monomial::new(e);
        Ok(m)
    }
}
