//! Literal grammar for field elements and polynomials over K.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//! Integers are reduced mod p. Identifiers are the field variables, the
//! extension generator `g` (when e > 1), or indeterminates of the target
//! polynomial ring. Division and negative powers are accepted only for
//! monomials in field variables and Laurent-enabled indeterminates.

use super::kpoly::{KMono, KPoly, KPolyRing, KRing};
use super::poly::{Poly, Ring};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse::<u64>().map_err(|_| Error::parse(start, "integer too large"))?;
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::parse(i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ring: &'a KRing,
    laurent: &'a [usize],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<KPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<KPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.offset();
                self.pos += 1;
                let d = self.unary()?;
                acc = acc.mul(&self.invert(&d, at)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<KPoly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<KPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let negative = self.eat('-');
        let n = match self.peek() {
            Some(Tok::Int(n)) => *n,
            _ => return Err(Error::parse(self.offset(), "expected integer exponent")),
        };
        self.pos += 1;
        if n > u32::MAX as u64 {
            return Err(Error::parse(at, "exponent too large"));
        }
        let p = base.pow(n as u32);
        if negative {
            self.invert(&p, at)
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<KPoly> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let base = &self.ring.base;
                let c = (n % base.field.p() as u64) as i64;
                Ok(KPoly::constant(self.ring, RatFunc::from_i64(base, c)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.ident(&name, at)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::parse(self.offset(), "expected ')'"));
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(Error::parse(at, format!("unexpected '{c}'"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }

    fn ident(&self, name: &str, at: usize) -> Result<KPoly> {
        let base = &self.ring.base;
        if let Some(i) = self.ring.vars.iter().position(|v| v == name) {
            return Ok(KPoly::var(self.ring, i));
        }
        if let Some(i) = base.vars.iter().position(|v| v == name) {
            return Ok(KPoly::constant(self.ring, RatFunc::var(base, i)));
        }
        if name == "g" {
            if let Some(g) = base.field.generator() {
                return Ok(KPoly::constant(self.ring, RatFunc::constant(base, g)));
            }
        }
        Err(Error::parse(at, format!("unknown symbol '{name}'")))
    }

    /// Inverse of a single-term polynomial whose monomial uses Laurent variables only.
    fn invert(&self, d: &KPoly, at: usize) -> Result<KPoly> {
        match d.terms() {
            [(m, c)] => {
                if m.iter().enumerate().any(|(i, &e)| e != 0 && !self.laurent.contains(&i)) {
                    return Err(Error::parse(at, "cannot divide by a non-Laurent indeterminate"));
                }
                let inv = c.inv().ok_or_else(|| Error::parse(at, "division by zero"))?;
                let m: KMono = m.iter().map(|&e| -e).collect();
                Ok(KPoly::term(self.ring, m, inv))
            }
            [] => Err(Error::parse(at, "division by zero")),
            _ => Err(Error::parse(at, "divisor must be a single term")),
        }
    }
}

/// Parses a polynomial over K in the indeterminates of `ring`.
pub fn parse_kpoly(src: &str, ring: &KRing, laurent: &[usize]) -> Result<KPoly> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), ring, laurent };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::parse(p.offset(), "trailing input"));
    }
    for (m, _) in e.terms() {
        if m.iter().enumerate().any(|(i, &x)| x < 0 && !laurent.contains(&i)) {
            return Err(Error::parse(0, "negative exponent on a non-Laurent indeterminate"));
        }
    }
    Ok(e)
}

/// Parses an element of K.
pub fn parse_ratfunc(src: &str, ring: &Ring) -> Result<RatFunc> {
    let kr = KPolyRing::new(ring.clone(), Vec::new());
    let e = parse_kpoly(src, &kr, &[])?;
    Ok(e.constant_value().expect("no indeterminates"))
}

/// Parses a polynomial (a field element with denominator 1).
pub fn parse_poly(src: &str, ring: &Ring) -> Result<Poly> {
    let x = parse_ratfunc(src, ring)?;
    if !x.is_polynomial() {
        return Err(Error::parse(0, "expected a polynomial"));
    }
    Ok(x.num().clone())
}
