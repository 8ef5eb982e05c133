//! Plain-text certificate files.
//!
//! ```text
//! certificate v1
//! characteristic 0
//! variables la1 la2 mu1
//! order dp la1 la2 mu1
//! target 1
//! generators 2
//! la1 - 1
//! ...
//! cofactors 2
//! ...
//! ```
//!
//! The `order` line lists the variables from largest to smallest.

use thiserror::Error;

use crate::exactnum::{ArithError, Field, PrimeField, Rationals};

use super::{verify_certificate, Certificate, CoeffPoly, MonomialOrder, OrderKind, PolyRing, Verification};

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A certificate over whichever field its header names.
#[derive(Debug, Clone)]
pub enum AnyCertificate {
    Rational(Certificate<Rationals>),
    Modular(Certificate<PrimeField>),
}

impl AnyCertificate {
    pub fn characteristic(&self) -> u64 {
        match self {
            AnyCertificate::Rational(_) => 0,
            AnyCertificate::Modular(c) => c.ring.coeffs().modulus(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyCertificate::Rational(c) => c.generators.len(),
            AnyCertificate::Modular(c) => c.generators.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `None` when valid, otherwise the printed residual `Σ cᵢfᵢ − target`.
    pub fn verify(&self) -> Option<String> {
        fn go<F: Field>(c: &Certificate<F>) -> Option<String> {
            match verify_certificate(c) {
                Verification::Valid => None,
                Verification::Invalid(d) => Some(c.ring.format(&d, &c.order)),
            }
        }
        match self {
            AnyCertificate::Rational(c) => go(c),
            AnyCertificate::Modular(c) => go(c),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyCertificate::Rational(c) => write_certificate(c),
            AnyCertificate::Modular(c) => write_certificate(c),
        }
    }
}

pub fn write_certificate<F: Field>(cert: &Certificate<F>) -> String {
    let ring = &cert.ring;
    let order = &cert.order;
    let mut out = String::new();
    out.push_str("certificate v1\n");
    out.push_str(&format!("characteristic {}\n", ring.coeffs().characteristic()));
    out.push_str(&format!("variables {}\n", ring.vars().join(" ")));
    let prec: Vec<&str> = order.precedence().iter().map(|&v| ring.vars()[v].as_str()).collect();
    out.push_str(&format!("order {} {}\n", order.kind().singular_name(), prec.join(" ")));
    out.push_str(&format!("target {}\n", ring.format(&cert.target, order)));
    out.push_str(&format!("generators {}\n", cert.generators.len()));
    for g in &cert.generators {
        out.push_str(&ring.format(g, order));
        out.push('\n');
    }
    out.push_str(&format!("cofactors {}\n", cert.cofactors.len()));
    for c in &cert.cofactors {
        out.push_str(&ring.format(c, order));
        out.push('\n');
    }
    out
}

struct Lines<'a> {
    it: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str, CertificateError> {
        for (i, l) in self.it.by_ref() {
            self.line = i + 1;
            let l = l.trim();
            if !l.is_empty() && !l.starts_with('#') {
                return Ok(l);
            }
        }
        Err(self.err("unexpected end of file"))
    }

    fn err(&self, message: impl Into<String>) -> CertificateError {
        CertificateError::Format {
            line: self.line,
            message: message.into(),
        }
    }

    fn keyword(&mut self, key: &str) -> Result<&'a str, CertificateError> {
        let l = self.next()?;
        match l.split_once(' ') {
            Some((k, rest)) if k == key => Ok(rest.trim()),
            _ if l == key => Ok(""),
            _ => Err(self.err(format!("expected `{key}`"))),
        }
    }

    fn count(&mut self, key: &str) -> Result<usize, CertificateError> {
        let v = self.keyword(key)?;
        v.parse().map_err(|_| self.err(format!("bad {key} count `{v}`")))
    }
}

pub fn read_certificate(text: &str) -> Result<AnyCertificate, CertificateError> {
    let mut lines = Lines {
        it: text.lines().enumerate(),
        line: 0,
    };
    let head = lines.next()?;
    if head != "certificate v1" {
        return Err(lines.err("expected header `certificate v1`"));
    }
    let ch = lines.keyword("characteristic")?;
    let ch: u64 = ch
        .parse()
        .map_err(|_| lines.err(format!("bad characteristic `{ch}`")))?;
    let vars: Vec<String> = lines
        .keyword("variables")?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    if ch == 0 {
        read_body(PolyRing::new(Rationals, &vars), &mut lines).map(AnyCertificate::Rational)
    } else {
        let k = PrimeField::new(ch)?;
        read_body(PolyRing::new(k, &vars), &mut lines).map(AnyCertificate::Modular)
    }
}

fn read_body<F: Field>(ring: PolyRing<F>, lines: &mut Lines<'_>) -> Result<Certificate<F>, CertificateError> {
    let order_line = lines.keyword("order")?;
    let mut parts = order_line.split_whitespace();
    let kind = parts
        .next()
        .and_then(OrderKind::from_singular_name)
        .ok_or_else(|| lines.err("unknown order kind"))?;
    let prec = parts
        .map(|name| {
            ring.var_index(name)
                .ok_or_else(|| lines.err(format!("unknown variable `{name}` in order")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let order = MonomialOrder::with_precedence(kind, prec)
        .ok()
        .filter(|o| o.nvars() == ring.nvars())
        .ok_or_else(|| lines.err("order does not list each variable once"))?;
    let parse = |lines: &Lines<'_>, s: &str| -> Result<CoeffPoly<F>, CertificateError> {
        ring.parse(s).map_err(|e| lines.err(e.to_string()))
    };
    let target = lines.keyword("target")?;
    let target = parse(lines, target)?;
    let n = lines.count("generators")?;
    let mut generators = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        generators.push(parse(lines, l)?);
    }
    let k = lines.count("cofactors")?;
    if k != n {
        return Err(lines.err(format!("{k} cofactors for {n} generators")));
    }
    let mut cofactors = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        cofactors.push(parse(lines, l)?);
    }
    Ok(Certificate {
        ring,
        order,
        generators,
        cofactors,
        target,
    })
}
