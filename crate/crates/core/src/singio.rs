//! Reader and writer for the small Singular subset used to state polynomial
//! systems: a `ring` declaration, `poly` and `ideal` definitions, and the
//! `std`/`liftstd`/`matrix`/echo statements that accompany them.
//!
//! Indexed variables `x(i)` and `y(i)` become `la{i}` and `mu{i}` internally;
//! any other indexed family `v(i)` becomes `v{i}` and plain names are kept.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::exactnum::{ArithError, FieldKind, PrimeField, Rationals, Ring};
use crate::expr::{parse_sum, ParseError, Tok, TokenStream};
use crate::groebner::{CoeffPoly, MonomialOrder, OrderKind, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingError {
    #[error("{0}")]
    Syntax(ParseError),
    #[error("{line}:{col}: unsupported construct: {what}")]
    Unsupported { line: usize, col: usize, what: String },
    #[error("{line}:{col}: {message}")]
    Semantic { line: usize, col: usize, message: String },
}

impl From<ParseError> for SingError {
    fn from(e: ParseError) -> Self {
        SingError::Syntax(e)
    }
}

/// One variable as declared in the `ring` statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredVar {
    pub family: String,
    pub index: Option<u32>,
}

impl DeclaredVar {
    pub fn singular_name(&self) -> String {
        match self.index {
            Some(i) => format!("{}({})", self.family, i),
            None => self.family.clone(),
        }
    }

    pub fn internal_name(&self) -> String {
        match (self.family.as_str(), self.index) {
            ("x", Some(i)) => format!("la{i}"),
            ("y", Some(i)) => format!("mu{i}"),
            (f, Some(i)) => format!("{f}{i}"),
            (f, None) => f.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Poly { name: String, poly: CoeffPoly<Rationals> },
    Ideal { name: String, members: Vec<String> },
    Std { name: String, source: String },
    LiftStd { name: String, source: String, matrix: String },
    Matrix { name: String },
    Echo { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingDocument {
    pub ring_name: String,
    pub characteristic: u64,
    /// Variables in declaration order (largest first for the ring's order).
    pub declared: Vec<DeclaredVar>,
    pub order_kind: OrderKind,
    /// Coefficients exactly as written; reduce with [`SingDocument::ideal_mod`]
    /// when the characteristic is positive.
    pub statements: Vec<Statement>,
    ring: PolyRing<Rationals>,
    order: MonomialOrder,
}

impl SingDocument {
    /// Ring over ℚ with variables in canonical order: families by first
    /// appearance, ascending index within a family.
    pub fn ring(&self) -> &PolyRing<Rationals> {
        &self.ring
    }

    /// The declared order; precedence follows the declaration.
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn field(&self) -> FieldKind {
        FieldKind::from_characteristic(self.characteristic).expect("validated on parse")
    }

    pub fn poly(&self, name: &str) -> Option<&CoeffPoly<Rationals>> {
        self.statements.iter().find_map(|s| match s {
            Statement::Poly { name: n, poly } if n == name => Some(poly),
            _ => None,
        })
    }

    pub fn polys(&self) -> impl Iterator<Item = (&str, &CoeffPoly<Rationals>)> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Poly { name, poly } => Some((name.as_str(), poly)),
            _ => None,
        })
    }

    pub fn ideal_names(&self) -> Vec<&str> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                Statement::Ideal { name, .. } => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn ideal_members(&self, name: &str) -> Option<&[String]> {
        self.statements.iter().find_map(|s| match s {
            Statement::Ideal { name: n, members } if n == name => Some(members.as_slice()),
            _ => None,
        })
    }

    /// Generators of an ideal, in the order listed.
    pub fn ideal(&self, name: &str) -> Option<Vec<CoeffPoly<Rationals>>> {
        let members = self.ideal_members(name)?;
        members.iter().map(|m| self.poly(m).cloned()).collect()
    }

    /// The first ideal defined by a generator list.
    pub fn main_ideal(&self) -> Option<Vec<CoeffPoly<Rationals>>> {
        self.ideal(self.ideal_names().first()?)
    }

    pub fn ideal_mod(
        &self,
        name: &str,
        field: &PrimeField,
    ) -> Option<Result<Vec<CoeffPoly<PrimeField>>, ArithError>> {
        let ring = self.ring.with_coeffs(field.clone());
        let polys = self.ideal(name)?;
        Some(
            polys
                .iter()
                .map(|p| self.ring.map_coeffs(&ring, p, |c| field.reduce_rational(c)))
                .collect(),
        )
    }

    /// Builds a document declaring the ring's variables and defining
    /// `prefix(1..n)` plus `ideal ideal_name = prefix(1..n)`.
    pub fn from_system(
        ring: &PolyRing<Rationals>,
        order: &MonomialOrder,
        characteristic: u64,
        prefix: &str,
        ideal_name: &str,
        polys: &[CoeffPoly<Rationals>],
    ) -> Result<SingDocument, SingError> {
        let semantic = |message: String| SingError::Semantic {
            line: 0,
            col: 0,
            message,
        };
        let declared: Vec<DeclaredVar> = order
            .precedence()
            .iter()
            .map(|&v| internal_to_declared(&ring.vars()[v]))
            .collect();
        let (canon, rebuilt) = canonical_ring(&declared, order.kind()).map_err(semantic)?;
        if canon.vars() != ring.vars() || rebuilt.precedence() != order.precedence() {
            return Err(semantic(
                "ring variables are not in canonical family order".to_string(),
            ));
        }
        let mut statements: Vec<Statement> = polys
            .iter()
            .enumerate()
            .map(|(i, p)| Statement::Poly {
                name: format!("{prefix}({})", i + 1),
                poly: p.clone(),
            })
            .collect();
        statements.push(Statement::Ideal {
            name: ideal_name.to_string(),
            members: (1..=polys.len()).map(|i| format!("{prefix}({i})")).collect(),
        });
        Ok(SingDocument {
            ring_name: "r".to_string(),
            characteristic,
            declared,
            order_kind: order.kind(),
            statements,
            ring: canon,
            order: rebuilt,
        })
    }
}

fn internal_to_declared(name: &str) -> DeclaredVar {
    let split = |prefix: &str| {
        name.strip_prefix(prefix)
            .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|rest| rest.parse::<u32>().ok())
    };
    if let Some(i) = split("la") {
        return DeclaredVar {
            family: "x".into(),
            index: Some(i),
        };
    }
    if let Some(i) = split("mu") {
        return DeclaredVar {
            family: "y".into(),
            index: Some(i),
        };
    }
    DeclaredVar {
        family: name.to_string(),
        index: None,
    }
}

/// Canonical ring for a declaration, and the order whose precedence is the
/// declaration order.
fn canonical_ring(
    declared: &[DeclaredVar],
    kind: OrderKind,
) -> Result<(PolyRing<Rationals>, MonomialOrder), String> {
    let mut families: Vec<&str> = Vec::new();
    for d in declared {
        if !families.contains(&d.family.as_str()) {
            families.push(&d.family);
        }
    }
    let mut canon: Vec<&DeclaredVar> = declared.iter().collect();
    canon.sort_by_key(|d| {
        (
            families.iter().position(|f| *f == d.family).unwrap(),
            d.index,
        )
    });
    let names: Vec<String> = canon.iter().map(|d| d.internal_name()).collect();
    let mut seen = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if seen.insert(n.clone(), i).is_some() {
            return Err(format!("variable {n} declared twice"));
        }
    }
    let precedence: Vec<usize> = declared.iter().map(|d| seen[&d.internal_name()]).collect();
    let order = MonomialOrder::with_precedence(kind, precedence).map_err(|e| e.to_string())?;
    Ok((PolyRing::new(Rationals, &names), order))
}

pub fn parse(text: &str) -> Result<SingDocument, SingError> {
    let mut ts = TokenStream::new(text)?;
    let unsupported = |ts: &TokenStream, what: String| {
        let (line, col) = ts.here();
        SingError::Unsupported { line, col, what }
    };
    let semantic = |ts: &TokenStream, message: String| {
        let (line, col) = ts.here();
        SingError::Semantic { line, col, message }
    };

    // ring NAME = CHAR , ( vars ) , ORDER ;
    match ts.peek() {
        Some(Tok::Ident(k)) if k == "ring" => {
            ts.next();
        }
        Some(t) => return Err(unsupported(&ts, format!("'{t}' before ring declaration"))),
        None => return Err(ts.error("empty document").into()),
    }
    let ring_name = ident(&mut ts)?;
    ts.expect(&Tok::Eq)?;
    let characteristic = ts.expect_int()?;
    if FieldKind::from_characteristic(characteristic).is_err() {
        return Err(semantic(&ts, format!("characteristic {characteristic} is neither 0 nor a prime")));
    }
    ts.expect(&Tok::Comma)?;
    ts.expect(&Tok::LParen)?;
    let mut declared = Vec::new();
    loop {
        match ts.next().map(|s| s.tok) {
            Some(Tok::Indexed(family, i)) => declared.push(DeclaredVar {
                family,
                index: Some(i),
            }),
            Some(Tok::Ident(family)) => {
                if ts.peek() == Some(&Tok::LParen) {
                    ts.next();
                    let lo = ts.expect_int()?;
                    ts.expect(&Tok::DotDot)?;
                    let hi = ts.expect_int()?;
                    ts.expect(&Tok::RParen)?;
                    if lo > hi || hi > u32::MAX as u64 {
                        return Err(semantic(&ts, format!("bad range {lo}..{hi}")));
                    }
                    for i in lo..=hi {
                        declared.push(DeclaredVar {
                            family: family.clone(),
                            index: Some(i as u32),
                        });
                    }
                } else {
                    declared.push(DeclaredVar { family, index: None });
                }
            }
            _ => return Err(ts.error("expected variable declaration").into()),
        }
        match ts.next().map(|s| s.tok) {
            Some(Tok::Comma) => continue,
            Some(Tok::RParen) => break,
            _ => return Err(ts.error("expected ',' or ')' in variable list").into()),
        }
    }
    ts.expect(&Tok::Comma)?;
    let order_name = ident(&mut ts)?;
    let order_kind = OrderKind::from_singular_name(&order_name)
        .ok_or_else(|| unsupported(&ts, format!("monomial order '{order_name}'")))?;
    ts.expect(&Tok::Semi)?;
    let (ring, order) = canonical_ring(&declared, order_kind).map_err(|m| semantic(&ts, m))?;
    let lookup: HashMap<(String, Option<u32>), usize> = ring
        .vars()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let d = declared.iter().find(|d| d.internal_name() == *n).unwrap();
            ((d.family.clone(), d.index), i)
        })
        .collect();
    let resolve = |name: &str, index: Option<u32>| lookup.get(&(name.to_string(), index)).copied();

    let mut statements = Vec::new();
    let mut poly_names: HashMap<String, ()> = HashMap::new();
    let mut ideal_names: HashMap<String, ()> = HashMap::new();
    while let Some(tok) = ts.peek().cloned() {
        let Tok::Ident(keyword) = &tok else {
            return Err(unsupported(&ts, format!("statement starting with '{tok}'")));
        };
        match keyword.as_str() {
            "poly" => {
                ts.next();
                let name = poly_name(&mut ts)?;
                if poly_names.insert(name.clone(), ()).is_some() {
                    return Err(semantic(&ts, format!("poly {name} defined twice")));
                }
                ts.expect(&Tok::Eq)?;
                let poly = parse_sum(&mut ts, &ring, &resolve)?;
                ts.expect(&Tok::Semi)?;
                statements.push(Statement::Poly { name, poly });
            }
            "ideal" => {
                ts.next();
                let name = ident(&mut ts)?;
                ts.expect(&Tok::Eq)?;
                let stmt = match ts.peek() {
                    Some(Tok::Ident(f)) if f == "std" || f == "liftstd" => {
                        let f = f.clone();
                        ts.next();
                        ts.expect(&Tok::LParen)?;
                        let source = ident(&mut ts)?;
                        let stmt = if f == "std" {
                            Statement::Std {
                                name: name.clone(),
                                source,
                            }
                        } else {
                            ts.expect(&Tok::Comma)?;
                            let matrix = ident(&mut ts)?;
                            Statement::LiftStd {
                                name: name.clone(),
                                source,
                                matrix,
                            }
                        };
                        ts.expect(&Tok::RParen)?;
                        stmt
                    }
                    _ => {
                        let members = ideal_list(&mut ts)?;
                        for m in &members {
                            if !poly_names.contains_key(m) {
                                return Err(semantic(&ts, format!("ideal {name} uses undefined poly {m}")));
                            }
                        }
                        Statement::Ideal {
                            name: name.clone(),
                            members,
                        }
                    }
                };
                ts.expect(&Tok::Semi)?;
                ideal_names.insert(name, ());
                statements.push(stmt);
            }
            "matrix" => {
                ts.next();
                let name = ident(&mut ts)?;
                ts.expect(&Tok::Semi)?;
                statements.push(Statement::Matrix { name });
            }
            "ring" => return Err(unsupported(&ts, "second ring declaration".to_string())),
            _ => {
                let name = keyword.clone();
                ts.next();
                if ts.peek() != Some(&Tok::Semi) {
                    return Err(unsupported(&ts, format!("statement '{name} ...'")));
                }
                ts.next();
                if !ideal_names.contains_key(&name) && !poly_names.contains_key(&name) {
                    return Err(semantic(&ts, format!("echo of undefined name {name}")));
                }
                statements.push(Statement::Echo { name });
            }
        }
    }
    Ok(SingDocument {
        ring_name,
        characteristic,
        declared,
        order_kind,
        statements,
        ring,
        order,
    })
}

fn ident(ts: &mut TokenStream) -> Result<String, SingError> {
    match ts.peek().cloned() {
        Some(Tok::Ident(s)) => {
            ts.next();
            Ok(s)
        }
        _ => Err(ts.error("expected name").into()),
    }
}

fn poly_name(ts: &mut TokenStream) -> Result<String, SingError> {
    match ts.peek().cloned() {
        Some(Tok::Ident(s)) => {
            ts.next();
            Ok(s)
        }
        Some(Tok::Indexed(s, i)) => {
            ts.next();
            Ok(format!("{s}({i})"))
        }
        _ => Err(ts.error("expected polynomial name").into()),
    }
}

/// `f(1..224)`, `f(3)`, `g`, comma separated.
fn ideal_list(ts: &mut TokenStream) -> Result<Vec<String>, SingError> {
    let mut out = Vec::new();
    loop {
        match ts.next().map(|s| s.tok) {
            Some(Tok::Indexed(f, i)) => out.push(format!("{f}({i})")),
            Some(Tok::Ident(f)) => {
                if ts.peek() == Some(&Tok::LParen) {
                    ts.next();
                    let lo = ts.expect_int()?;
                    ts.expect(&Tok::DotDot)?;
                    let hi = ts.expect_int()?;
                    ts.expect(&Tok::RParen)?;
                    if lo > hi {
                        return Err(ts.error(format!("empty range {lo}..{hi}")).into());
                    }
                    out.extend((lo..=hi).map(|i| format!("{f}({i})")));
                } else {
                    out.push(f);
                }
            }
            _ => return Err(ts.error("expected polynomial reference").into()),
        }
        if ts.peek() == Some(&Tok::Comma) {
            ts.next();
        } else {
            return Ok(out);
        }
    }
}

/// Prints a polynomial in Singular syntax, terms descending under `order`.
pub fn format_poly(doc: &SingDocument, p: &CoeffPoly<Rationals>) -> String {
    let names: Vec<String> = doc
        .ring
        .vars()
        .iter()
        .map(|n| {
            doc.declared
                .iter()
                .find(|d| d.internal_name() == *n)
                .map_or_else(|| n.clone(), DeclaredVar::singular_name)
        })
        .collect();
    format_with_names(&names, p, &doc.order)
}

fn format_with_names(names: &[String], p: &CoeffPoly<Rationals>, order: &MonomialOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let k = Rationals;
    let mut out = String::new();
    for (i, (m, c)) in p.terms_desc(order).into_iter().enumerate() {
        let negative = k.is_negative(c);
        let abs = if negative { k.neg(c) } else { c.clone() };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mut factors = Vec::new();
        if !k.is_one(&abs) || m.is_one() {
            factors.push(k.format(&abs));
        }
        for (v, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[v].clone()),
                _ => factors.push(format!("{}^{}", names[v], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Groups consecutive indices of one family into `v(a..b)` ranges.
fn format_declaration(declared: &[DeclaredVar]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < declared.len() {
        let d = &declared[i];
        match d.index {
            None => {
                parts.push(d.family.clone());
                i += 1;
            }
            Some(start) => {
                let mut j = i + 1;
                while j < declared.len()
                    && declared[j].family == d.family
                    && declared[j].index == Some(start + (j - i) as u32)
                {
                    j += 1;
                }
                if j - i > 1 {
                    parts.push(format!("{}({}..{})", d.family, start, start + (j - i - 1) as u32));
                } else {
                    parts.push(d.singular_name());
                }
                i = j;
            }
        }
    }
    parts.join(",")
}

/// Compresses `f(1), f(2), …` into ranges.
fn format_members(members: &[String]) -> String {
    let split = |m: &str| -> Option<(String, u64)> {
        let (f, rest) = m.split_once('(')?;
        let i = rest.strip_suffix(')')?.parse().ok()?;
        Some((f.to_string(), i))
    };
    let mut parts = Vec::new();
    let mut i = 0;
    while i < members.len() {
        match split(&members[i]) {
            Some((f, start)) => {
                let mut j = i + 1;
                while j < members.len() && split(&members[j]) == Some((f.clone(), start + (j - i) as u64)) {
                    j += 1;
                }
                if j - i > 1 {
                    parts.push(format!("{f}({start}..{})", start + (j - i - 1) as u64));
                } else {
                    parts.push(members[i].clone());
                }
                i = j;
            }
            None => {
                parts.push(members[i].clone());
                i += 1;
            }
        }
    }
    parts.join(",")
}

pub fn print(doc: &SingDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "ring {}={},({}),{};",
        doc.ring_name,
        doc.characteristic,
        format_declaration(&doc.declared),
        doc.order_kind.singular_name()
    );
    for s in &doc.statements {
        let _ = match s {
            Statement::Poly { name, poly } => writeln!(out, "poly {name} = {};", format_poly(doc, poly)),
            Statement::Ideal { name, members } => writeln!(out, "ideal {name}={};", format_members(members)),
            Statement::Std { name, source } => writeln!(out, "ideal {name}=std({source});"),
            Statement::LiftStd { name, source, matrix } => {
                writeln!(out, "ideal {name}=liftstd({source},{matrix});")
            }
            Statement::Matrix { name } => writeln!(out, "matrix {name};"),
            Statement::Echo { name } => writeln!(out, "{name};"),
        };
    }
    out
}

/// Number of polynomials per total degree, for summaries.
pub fn degree_histogram(polys: &[CoeffPoly<Rationals>]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for p in polys {
        *h.entry(p.total_degree().unwrap_or(0)).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGURE1: &str = include_str!("../fixtures/figure1.sing");

    #[test]
    fn ring_line() {
        let d = parse("ring r=0,(x(1..8),y(1..8)),dp;").unwrap();
        assert_eq!(d.field(), FieldKind::Q);
        assert_eq!(d.ring().nvars(), 16);
        assert_eq!(d.order().kind(), OrderKind::DegRevLex);
        assert!(d.order().is_identity());
        assert_eq!(d.ring().vars()[0], "la1");
        assert_eq!(d.ring().vars()[8], "mu1");
        let d2 = parse("ring r=2,(x(1..8),y(1..8)),dp;").unwrap();
        assert_eq!(d2.field(), FieldKind::Fp(2));
    }

    #[test]
    fn swapped_declaration_sets_precedence() {
        let d = parse("ring r=0,(x(1..8),y(1..6),y(8),y(7)),dp;").unwrap();
        assert_eq!(d.ring().vars()[14], "mu7");
        let prec = d.order().precedence();
        assert_eq!(&prec[14..], &[15, 14]);
        assert_eq!(parse(&print(&d)).unwrap(), d);
    }

    #[test]
    fn second_line_of_figure() {
        let text = "ring r=0,(x(1..8),y(1..8)),dp;\n\
            poly f(1) = -1 + (y(1)*y(6)) + (y(2)*y(2)) + (y(3)*x(6)) + (y(4)*x(2));";
        let d = parse(text).unwrap();
        let r = d.ring();
        let expect = r.parse("-1 + mu1*mu6 + mu2^2 + mu3*la6 + mu4*la2").unwrap();
        assert_eq!(d.poly("f(1)").unwrap(), &expect);
    }

    #[test]
    fn figure1_fixture() {
        let d = parse(FIGURE1).unwrap();
        let ideal = d.ideal("i").unwrap();
        assert_eq!(ideal.len(), 224);
        assert_eq!(d.polys().count(), 224);
        assert_eq!(d.ideal_names(), vec!["i"]);
        for p in &ideal {
            assert!(p.total_degree().unwrap() <= 3);
            assert!(p.terms().all(|(_, c)| c.is_integer() && c.numer().magnitude() == &1u32.into()));
        }
        let h = degree_histogram(&ideal);
        assert_eq!(h.values().sum::<usize>(), 224);
        assert_eq!(parse(&print(&d)).unwrap(), d);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("ring r=0,(x(1..2)),dp;\npoly f = x(3);").unwrap_err();
        match e {
            SingError::Syntax(p) => {
                assert_eq!((p.line, p.col), (2, 10));
                assert!(p.message.contains("undeclared"));
            }
            other => panic!("{other:?}"),
        }
        let e = parse("ring r=0,(a),dp;\nqring q = std(i);").unwrap_err();
        assert!(matches!(e, SingError::Unsupported { line: 2, .. }), "{e:?}");
        let e = parse("ring r=0,(a),ws(1);").unwrap_err();
        assert!(matches!(e, SingError::Unsupported { .. } | SingError::Syntax(_)), "{e:?}");
        let e = parse("ring r=4,(a),dp;").unwrap_err();
        assert!(matches!(e, SingError::Semantic { .. }));
        let e = parse("ring r=0,(a),dp; poly f = a; ideal i = f, g;").unwrap_err();
        assert!(matches!(e, SingError::Semantic { .. }));
    }

    #[test]
    fn zero_prints_as_zero() {
        let d = parse("ring r=0,(a,b),lp; poly g = a - a; ideal j = g;").unwrap();
        assert!(print(&d).contains("poly g = 0;"));
        assert_eq!(parse(&print(&d)).unwrap(), d);
    }

    #[test]
    fn reduction_mod_p() {
        let d = parse("ring r=2,(a,b),dp; poly g = 2*a + 3*b; ideal j = g;").unwrap();
        let k = PrimeField::new(2).unwrap();
        let polys = d.ideal_mod("j", &k).unwrap().unwrap();
        assert_eq!(polys[0].num_terms(), 1);
    }
}
