//! Polynomial expressions in `x`, `y`, `z`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | 'x' | 'y' | 'z' | '(' expr ')'
//! ```
//! Whitespace is ignored. Juxtaposition (`2x`, `x y`) is rejected.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Var};
use crate::ring::Q;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

const AFTER_OPERAND: &str = "'+', '-', '*', '^', ')' or end of input";
const OPERAND: &str = "number, variable, '(', '+' or '-'";

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::ParseError { pos: self.pos, expected: expected.to_string() })
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("non-negative integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        let p = if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 = match e.try_into() {
                Ok(e) => e,
                Err(_) => return self.fail("exponent below 2^32"),
            };
            base.pow(e)
        } else {
            base
        };
        match self.peek() {
            Some(c) if c.is_ascii_alphanumeric() || c == b'(' => self.fail(AFTER_OPERAND),
            _ => Ok(p),
        }
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return Err(Error::ParseError { pos: at, expected: "nonzero denominator".into() });
                    }
                    return Ok(MPoly::constant(Q::new(n, d)));
                }
                Ok(MPoly::constant(Q::from_integer(n)))
            }
            Some(b'x') => self.var(Var::X),
            Some(b'y') => self.var(Var::Y),
            Some(b'z') => self.var(Var::Z),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.fail("')'");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.fail(OPERAND),
        }
    }

    fn var(&mut self, v: Var) -> Result<MPoly> {
        self.pos += 1;
        Ok(MPoly::var(v))
    }
}

/// Parses a polynomial with rational coefficients in `x`, `y`, `z`.
pub fn parse_polynomial(text: &str) -> Result<MPoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.fail(AFTER_OPERAND);
    }
    Ok(e)
}
