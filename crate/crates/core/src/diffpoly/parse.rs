//! Parser for the plain-text form used by `Display`.
//!
//! Grammar, whitespace insensitive:
//! `poly := ['-'] term (('+'|'-') term)*`,
//! `term := item ('*' item)*`, `item := rational | factor ['^' int]`,
//! `factor := ident ['_' ('x'+ | '{' int 'x' '}')]`.

use num_bigint::BigInt;
use num_traits::One;

use super::{DiffPoly, Factor, Rational};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
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

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.to_string() })
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small(&mut self) -> Result<u32, ParseError> {
        let n = self.digits()?;
        u32::try_from(n).or_else(|_| self.err("integer too large"))
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            if self.pos == start && !self.src[self.pos].is_ascii_alphabetic() {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected symbol name");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn item(&mut self, coeff: &mut Rational, factors: &mut Vec<Factor>) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let d = if self.eat(b'/') { self.digits()? } else { BigInt::one() };
                if d == BigInt::from(0) {
                    return self.err("zero denominator");
                }
                *coeff *= Rational::new(n, d);
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident()?;
                let mut order = 0;
                if self.src.get(self.pos) == Some(&b'_') {
                    self.pos += 1;
                    if self.src.get(self.pos) == Some(&b'{') {
                        self.pos += 1;
                        order = self.small()?;
                        if !(self.eat(b'x') && self.eat(b'}')) {
                            return self.err("expected 'x}'");
                        }
                    } else {
                        while self.src.get(self.pos) == Some(&b'x') {
                            order += 1;
                            self.pos += 1;
                        }
                        if order == 0 {
                            return self.err("expected derivative marker");
                        }
                    }
                }
                let power = if self.eat(b'^') { self.small()? } else { 1 };
                for _ in 0..power {
                    factors.push(Factor::new(name.as_str(), order));
                }
            }
            _ => return self.err("expected coefficient or factor"),
        }
        Ok(())
    }

    fn term(&mut self, sign: Rational) -> Result<DiffPoly, ParseError> {
        let mut coeff = sign;
        let mut factors = Vec::new();
        self.item(&mut coeff, &mut factors)?;
        while self.eat(b'*') {
            self.item(&mut coeff, &mut factors)?;
        }
        Ok(DiffPoly::monomial(coeff, factors))
    }
}

pub(super) fn parse(src: &str) -> Result<DiffPoly, ParseError> {
    let mut cur = Cursor { src: src.as_bytes(), pos: 0 };
    let mut out = DiffPoly::zero();
    if cur.peek().is_none() {
        return cur.err("empty input");
    }
    if cur.peek() == Some(b'0') && src.trim() == "0" {
        return Ok(out);
    }
    let mut sign = if cur.eat(b'-') { -Rational::one() } else { Rational::one() };
    loop {
        out += &cur.term(sign)?;
        if cur.eat(b'+') {
            sign = Rational::one();
        } else if cur.eat(b'-') {
            sign = -Rational::one();
        } else if cur.peek().is_none() {
            return Ok(out);
        } else {
            return cur.err("unexpected character");
        }
    }
}
