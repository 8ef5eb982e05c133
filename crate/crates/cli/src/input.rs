//! Polynomial systems on disk: the Singular subset or the native listing.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use nacas::exactnum::{PrimeField, Rationals};
use nacas::groebner::{CoeffPoly, MonomialOrder, OrderKind, PolyRing};
use nacas::singio::{self, SingDocument};

/// A system over ℚ together with the ring, order and characteristic it
/// was declared with. Coefficients are reduced only when a prime field is
/// requested.
#[derive(Debug, Clone)]
pub struct System {
    pub ring: PolyRing<Rationals>,
    pub order: MonomialOrder,
    pub characteristic: u64,
    pub polys: Vec<CoeffPoly<Rationals>>,
}

impl System {
    pub fn load(path: &Path) -> Result<System> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        System::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Native listings start with a `vars` line; anything else is read as
    /// the Singular subset.
    pub fn parse(text: &str) -> Result<System> {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'));
        match first {
            Some(l) if l.starts_with("vars ") || l == "vars" => parse_native(text),
            _ => {
                let doc = singio::parse(text)?;
                System::from_document(&doc)
            }
        }
    }

    pub fn from_document(doc: &SingDocument) -> Result<System> {
        let polys = doc.main_ideal().ok_or_else(|| anyhow!("document defines no ideal"))?;
        Ok(System {
            ring: doc.ring().clone(),
            order: doc.order().clone(),
            characteristic: doc.characteristic,
            polys,
        })
    }

    /// Coefficients reduced mod `p`.
    pub fn mod_p(&self, p: &PrimeField) -> Result<(PolyRing<PrimeField>, Vec<CoeffPoly<PrimeField>>)> {
        let ring = self.ring.with_coeffs(p.clone());
        let polys = self
            .polys
            .iter()
            .map(|f| self.ring.map_coeffs(&ring, f, |c| p.reduce_rational(c)))
            .collect::<Result<_, _>>()?;
        Ok((ring, polys))
    }

    pub fn var(&self, name: &str) -> Result<usize> {
        resolve_var(&self.ring, name).ok_or_else(|| anyhow!("unknown variable `{name}`"))
    }
}

fn parse_native(text: &str) -> Result<System> {
    let mut ring = None;
    let mut polys = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match &ring {
            None => {
                let vars: Vec<&str> = line.split_whitespace().skip(1).collect();
                if vars.is_empty() {
                    bail!("line {}: `vars` lists no variables", n + 1);
                }
                ring = Some(PolyRing::new(Rationals, &vars));
            }
            Some(r) => {
                let p = r.parse(line).map_err(|e| anyhow!("line {}: {e}", n + 1))?;
                polys.push(p);
            }
        }
    }
    let ring = ring.ok_or_else(|| anyhow!("missing `vars` line"))?;
    Ok(System {
        order: MonomialOrder::degrevlex(ring.nvars()),
        ring,
        characteristic: 0,
        polys,
    })
}

/// Internal name, `la3`/`mu7` style, or the Singular spelling `x(3)`,
/// `y7`.
pub fn resolve_var(ring: &PolyRing<Rationals>, name: &str) -> Option<usize> {
    if let Some(i) = ring.var_index(name) {
        return Some(i);
    }
    let compact: String = name.chars().filter(|c| !matches!(c, '(' | ')')).collect();
    for (from, to) in [("x", "la"), ("y", "mu")] {
        if let Some(rest) = compact.strip_prefix(from) {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return ring.var_index(&format!("{to}{rest}"));
            }
        }
    }
    ring.var_index(&compact)
}

/// `dp`, `lp` or `Dp`, optionally followed by `swap a b` pairs, applied
/// to the system's declared precedence. Brackets are ignored, so
/// `dp [swap y7 y8]` also works.
pub fn parse_order(spec: &str, sys: &System) -> Result<MonomialOrder> {
    let cleaned = spec.replace(['[', ']', ','], " ");
    let mut words = cleaned.split_whitespace();
    let kind_token = words.next().ok_or_else(|| anyhow!("empty order spec"))?;
    let kind = OrderKind::from_singular_name(kind_token)
        .ok_or_else(|| anyhow!("unsupported order `{kind_token}`"))?;
    let mut order = MonomialOrder::with_precedence(kind, sys.order.precedence().to_vec())?;
    while let Some(w) = words.next() {
        if w != "swap" {
            bail!("expected `swap`, found `{w}`");
        }
        let (Some(a), Some(b)) = (words.next(), words.next()) else {
            bail!("`swap` needs two variables");
        };
        order = order.swapped(sys.var(a)?, sys.var(b)?);
    }
    Ok(order)
}
