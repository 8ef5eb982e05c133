//! Tokenizer and recursive-descent parser for polynomial expressions.
//!
//! Shared by the native polynomial text format and the Singular subset in
//! [`crate::singio`]. Identifiers directly followed by `(<digits>)` lex as
//! indexed names, so `x(3)` and `la3` are both single variable tokens.

use std::fmt;

use num_traits::ToPrimitive;

use crate::exactnum::{parse_bigint, Ring};
use crate::groebner::{CoeffPoly, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(String),
    /// `p/q` written without spaces.
    Rat(String),
    Ident(String),
    Indexed(String, u32),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Semi,
    Eq,
    Comma,
    DotDot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(s) | Tok::Rat(s) | Tok::Ident(s) => write!(f, "{s}"),
            Tok::Indexed(s, i) => write!(f, "{s}({i})"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Semi => write!(f, ";"),
            Tok::Eq => write!(f, "="),
            Tok::Comma => write!(f, ","),
            Tok::DotDot => write!(f, ".."),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, col: &mut usize, n: usize| {
        *i += n;
        *col += n;
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: tl,
                col: tc,
            })
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(&mut i, &mut col, 1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut col, 1);
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut col, 1);
            }
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                advance(&mut i, &mut col, 1);
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(&mut i, &mut col, 1);
                }
                push(&mut out, Tok::Rat(chars[start..i].iter().collect()));
            } else {
                push(&mut out, Tok::Int(chars[start..i].iter().collect()));
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut col, 1);
            }
            let name: String = chars[start..i].iter().collect();
            // indexed name: ident immediately followed by (digits)
            if chars.get(i) == Some(&'(') {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j > i + 1 && chars.get(j) == Some(&')') {
                    let digits: String = chars[i + 1..j].iter().collect();
                    let index = digits.parse::<u32>().map_err(|_| ParseError {
                        line: tl,
                        col: tc,
                        message: format!("index {digits} out of range"),
                    })?;
                    let n = j + 1 - i;
                    advance(&mut i, &mut col, n);
                    push(&mut out, Tok::Indexed(name, index));
                    continue;
                }
            }
            push(&mut out, Tok::Ident(name));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            ',' => Tok::Comma,
            '.' if chars.get(i + 1) == Some(&'.') => {
                advance(&mut i, &mut col, 2);
                push(&mut out, Tok::DotDot);
                continue;
            }
            other => {
                return Err(ParseError {
                    line: tl,
                    col: tc,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        advance(&mut i, &mut col, 1);
        push(&mut out, tok);
    }
    Ok(out)
}

pub(crate) struct TokenStream {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl TokenStream {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        let toks = tokenize(text)?;
        let lines = text.split('\n').count();
        let last_col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Ok(TokenStream {
            toks,
            pos: 0,
            end: (lines.max(1), last_col),
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Position of the next token, or end of input.
    pub fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |s| (s.line, s.col))
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected '{tok}', found '{t}'"))),
            None => Err(self.error(format!("expected '{tok}', found end of input"))),
        }
    }

    pub fn expect_int(&mut self) -> Result<u64, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                let v = s
                    .parse::<u64>()
                    .map_err(|_| self.error(format!("integer {s} out of range")))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected integer")),
        }
    }
}

/// Parses `sum` from the current position; variables are resolved by
/// `(name, optional index) → variable number`.
pub(crate) fn parse_sum<R: Ring, F>(
    ts: &mut TokenStream,
    ring: &PolyRing<R>,
    resolve: &F,
) -> Result<CoeffPoly<R>, ParseError>
where
    F: Fn(&str, Option<u32>) -> Option<usize>,
{
    let mut acc = parse_product(ts, ring, resolve)?;
    loop {
        match ts.peek() {
            Some(Tok::Plus) => {
                ts.next();
                let rhs = parse_product(ts, ring, resolve)?;
                acc = ring.add(&acc, &rhs);
            }
            Some(Tok::Minus) => {
                ts.next();
                let rhs = parse_product(ts, ring, resolve)?;
                acc = ring.sub(&acc, &rhs);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_product<R: Ring, F>(
    ts: &mut TokenStream,
    ring: &PolyRing<R>,
    resolve: &F,
) -> Result<CoeffPoly<R>, ParseError>
where
    F: Fn(&str, Option<u32>) -> Option<usize>,
{
    let mut acc = parse_unary(ts, ring, resolve)?;
    while ts.peek() == Some(&Tok::Star) {
        ts.next();
        let rhs = parse_unary(ts, ring, resolve)?;
        acc = ring.mul(&acc, &rhs);
    }
    Ok(acc)
}

fn parse_unary<R: Ring, F>(
    ts: &mut TokenStream,
    ring: &PolyRing<R>,
    resolve: &F,
) -> Result<CoeffPoly<R>, ParseError>
where
    F: Fn(&str, Option<u32>) -> Option<usize>,
{
    match ts.peek() {
        Some(Tok::Minus) => {
            ts.next();
            Ok(ring.neg(&parse_unary(ts, ring, resolve)?))
        }
        Some(Tok::Plus) => {
            ts.next();
            parse_unary(ts, ring, resolve)
        }
        _ => {
            let base = parse_atom(ts, ring, resolve)?;
            if ts.peek() == Some(&Tok::Caret) {
                ts.next();
                let e = ts.expect_int()?;
                let e = e
                    .to_u32()
                    .filter(|&e| e <= u16::MAX as u32)
                    .ok_or_else(|| ts.error("exponent too large"))?;
                Ok(ring.pow(&base, e))
            } else {
                Ok(base)
            }
        }
    }
}

fn parse_atom<R: Ring, F>(
    ts: &mut TokenStream,
    ring: &PolyRing<R>,
    resolve: &F,
) -> Result<CoeffPoly<R>, ParseError>
where
    F: Fn(&str, Option<u32>) -> Option<usize>,
{
    let Some(tok) = ts.peek().cloned() else {
        return Err(ts.error("unexpected end of input"));
    };
    let here = ts.error("");
    let at = |message: String| ParseError {
        message,
        ..here.clone()
    };
    match tok {
        Tok::Int(s) => {
            ts.next();
            let n = parse_bigint(&s).map_err(|e| at(e.to_string()))?;
            Ok(ring.constant(ring.coeffs().from_int(&n)))
        }
        Tok::Rat(s) => {
            ts.next();
            let c = ring.coeffs().parse(&s).map_err(|e| at(e.to_string()))?;
            Ok(ring.constant(c))
        }
        Tok::Ident(name) => {
            ts.next();
            let v = resolve(&name, None).ok_or_else(|| at(format!("undeclared variable '{name}'")))?;
            Ok(ring.var(v))
        }
        Tok::Indexed(name, idx) => {
            ts.next();
            let v = resolve(&name, Some(idx))
                .ok_or_else(|| at(format!("undeclared variable '{name}({idx})'")))?;
            Ok(ring.var(v))
        }
        Tok::LParen => {
            ts.next();
            let inner = parse_sum(ts, ring, resolve)?;
            ts.expect(&Tok::RParen)?;
            Ok(inner)
        }
        other => Err(at(format!("unexpected '{other}'"))),
    }
}

/// Parses a complete polynomial expression.
pub fn parse_polynomial<R: Ring, F>(
    ring: &PolyRing<R>,
    text: &str,
    resolve: F,
) -> Result<CoeffPoly<R>, ParseError>
where
    F: Fn(&str, Option<u32>) -> Option<usize>,
{
    let mut ts = TokenStream::new(text)?;
    let p = parse_sum(&mut ts, ring, &resolve)?;
    if let Some(t) = ts.peek() {
        return Err(ts.error(format!("unexpected trailing '{t}'")));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rationals;

    #[test]
    fn lexes_indexed_names() {
        let toks: Vec<Tok> = tokenize("x(12)*y (3) 4/5 ..")
            .unwrap()
            .into_iter()
            .map(|s| s.tok)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Indexed("x".into(), 12),
                Tok::Star,
                Tok::Ident("y".into()),
                Tok::LParen,
                Tok::Int("3".into()),
                Tok::RParen,
                Tok::Rat("4/5".into()),
                Tok::DotDot
            ]
        );
    }

    #[test]
    fn error_positions() {
        let r = PolyRing::new(Rationals, &["a"]);
        let e = r.parse("a +\n  b").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert!(e.message.contains("undeclared"));
        let e = r.parse("a + $").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        let e = r.parse("(a + 1").unwrap_err();
        assert!(e.message.contains("expected ')'"));
    }

    #[test]
    fn precedence() {
        let r = PolyRing::new(Rationals, &["a", "b"]);
        assert_eq!(r.parse("-a^2").unwrap(), r.neg(&r.mul(&r.var(0), &r.var(0))));
        assert_eq!(
            r.parse("a - b*a + 2").unwrap(),
            r.parse("2 + a - (a*b)").unwrap()
        );
    }
}
