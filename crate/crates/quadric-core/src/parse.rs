//! Text form of polynomials.
//!
//! Grammar:
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := INT ['/' INT]
//!         | VAR ['^' INT]
//!         | '(' expr ')' ['^' INT]
//! ```
//! Whitespace separates tokens and is otherwise ignored. Variable names
//! must appear in the table handed to the parser.

use std::fmt;
use std::sync::Arc;

use crate::field::Field;
use crate::poly::Poly;
use crate::vars::VarTable;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, message: message.into() }
    }

    fn bump(&mut self) -> u8 {
        let b = self.src[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        b
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let b = self.src[self.pos];
            if b.is_ascii_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match b {
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                b'-' => {
                    self.bump();
                    Tok::Minus
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b'^' => {
                    self.bump();
                    Tok::Caret
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'0'..=b'9' => {
                    let mut n: i64 = 0;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        let d = (self.bump() - b'0') as i64;
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(d))
                            .ok_or_else(|| self.error("integer literal too large"))?;
                    }
                    Tok::Int(n)
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.bump();
                    }
                    Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
                }
                other => {
                    return Err(self.error(format!("unexpected character {:?}", other as char)))
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser<'a, F: Field> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    field: F,
    table: &'a Arc<VarTable>,
    end: (usize, usize),
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|&(_, l, c)| (l, c)).unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, message: message.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Poly<F>, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.negated();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<F>, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u16, ParseError> {
        match self.next() {
            Some(Tok::Int(n)) if (0..=u16::MAX as i64).contains(&n) => Ok(n as u16),
            _ => Err(self.error("expected exponent after '^'")),
        }
    }

    fn factor(&mut self) -> Result<Poly<F>, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let num = self.field.from_int(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Int(d)) if d != 0 => {
                            let den = self.field.from_int(d);
                            let q = self.field.div(&num, &den).ok_or_else(|| {
                                self.error(format!("denominator {d} is not invertible"))
                            })?;
                            Ok(Poly::constant(self.field.clone(), self.table.clone(), q))
                        }
                        Some(Tok::Int(_)) => Err(self.error("division by zero")),
                        _ => Err(self.error("expected integer denominator")),
                    }
                } else {
                    Ok(Poly::constant(self.field.clone(), self.table.clone(), num))
                }
            }
            Some(Tok::Ident(name)) => {
                let (line, col) = self.here();
                self.pos += 1;
                let v = self.table.var(&name).ok_or(ParseError {
                    line,
                    col,
                    message: format!("unknown variable {name}"),
                })?;
                let mut e = 1;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    e = self.exponent()?;
                }
                let base = Poly::variable(self.field.clone(), self.table.clone(), v);
                Ok(if e == 1 { base } else { base.pow(e as u32) })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let e = self.exponent()?;
                    Ok(inner.pow(e as u32))
                } else {
                    Ok(inner)
                }
            }
            _ => Err(self.error("expected a number, variable, or '('")),
        }
    }
}

pub fn parse_poly<F: Field>(
    src: &str,
    field: F,
    table: &Arc<VarTable>,
) -> Result<Poly<F>, ParseError> {
    let toks = Lexer::new(src).tokens()?;
    let end = src.lines().count().max(1);
    let end_col = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    if toks.is_empty() {
        return Err(ParseError { line: 1, col: 1, message: "empty input".into() });
    }
    let mut p = Parser { toks, pos: 0, field, table, end: (end, end_col) };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input after expression"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};

    fn table() -> Arc<VarTable> {
        VarTable::new(&["m0", "m1"], &["x0", "x1", "x2"])
    }

    #[test]
    fn basic_expressions() {
        let t = table();
        let p = parse_poly("x0^2 - 2*x0*x1 + x1^2", Rationals, &t).unwrap();
        let q = parse_poly("(x0 - x1)^2", Rationals, &t).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn leading_sign_and_rationals() {
        let t = table();
        let p = parse_poly("-1/2*x0 + 3", Rationals, &t).unwrap();
        let doubled = p.scaled(&Rationals.from_int(2));
        let q = parse_poly("-x0 + 6", Rationals, &t).unwrap();
        assert_eq!(doubled, q);
    }

    #[test]
    fn rational_constant_mod_p() {
        let t = table();
        let p = parse_poly("1/2", Fp::new(7), &t).unwrap();
        let expect = parse_poly("4", Fp::new(7), &t).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn error_positions() {
        let t = table();
        let e = parse_poly("x0 + y9", Rationals, &t).unwrap_err();
        assert_eq!((e.line, e.col), (1, 6));
        assert!(e.message.contains("y9"));

        let e = parse_poly("x0 +\n  * x1", Rationals, &t).unwrap_err();
        assert_eq!(e.line, 2);

        let e = parse_poly("(x0", Rationals, &t).unwrap_err();
        assert!(e.message.contains("')'"));

        let e = parse_poly("x0 x1", Rationals, &t).unwrap_err();
        assert!(e.message.contains("trailing"));
    }

    #[test]
    fn print_parse_round_trip() {
        let t = table();
        for src in [
            "x0^2-x0*x1+x1^2",
            "-m0*x0+m1*x1-1/3*x2^2",
            "0",
            "5",
            "m0^3*m1^2*x2^4",
        ] {
            let p = parse_poly(src, Rationals, &t).unwrap();
            let printed = p.to_string();
            let again = parse_poly(&printed, Rationals, &t).unwrap();
            assert_eq!(p, again, "round trip through {printed}");
        }
    }
}
