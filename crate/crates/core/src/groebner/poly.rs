use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactnum::{ArithError, Ring};

use super::monomial::{Monomial, MonomialOrder};
use super::GroebnerError;

/// Sparse commutative polynomial: exponent vector → nonzero coefficient.
///
/// The map's key order is storage order only; use [`CoeffPoly::terms_desc`] to
/// walk terms by a monomial order.
#[derive(Clone, Debug)]
pub struct CoeffPoly<R: Ring> {
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> PartialEq for CoeffPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<R: Ring> Eq for CoeffPoly<R> {}

impl<R: Ring> std::hash::Hash for CoeffPoly<R> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl<R: Ring> Default for CoeffPoly<R> {
    fn default() -> Self {
        CoeffPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<R: Ring> CoeffPoly<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&R::Elem> {
        self.terms.get(m)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The constant term if the polynomial is constant (zero counts).
    pub fn as_constant(&self) -> Option<Option<&R::Elem>> {
        match self.terms.len() {
            0 => Some(None),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then_some(Some(c))
            }
            _ => None,
        }
    }

    pub fn terms_desc(&self, order: &MonomialOrder) -> Vec<(&Monomial, &R::Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &R::Elem)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, R::Elem> {
        self.terms
    }

    /// Drops zero coefficients. The caller guarantees matching arity.
    pub fn from_map(ring: &R, mut terms: BTreeMap<Monomial, R::Elem>) -> Self {
        terms.retain(|_, c| !ring.is_zero(c));
        CoeffPoly { terms }
    }
}

/// Coefficient ring plus named, ordered variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<R: Ring> {
    coeffs: R,
    vars: Arc<[String]>,
}

impl<R: Ring> PolyRing<R> {
    pub fn new<S: AsRef<str>>(coeffs: R, vars: &[S]) -> Self {
        PolyRing {
            coeffs,
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    pub fn coeffs(&self) -> &R {
        &self.coeffs
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables, different coefficients.
    pub fn with_coeffs<S: Ring>(&self, coeffs: S) -> PolyRing<S> {
        PolyRing {
            coeffs,
            vars: self.vars.clone(),
        }
    }

    pub fn same_vars<S: Ring>(&self, other: &PolyRing<S>) -> bool {
        self.vars == other.vars
    }

    pub fn check(&self, p: &CoeffPoly<R>) -> Result<(), GroebnerError> {
        if p.terms.keys().all(|m| m.nvars() == self.nvars()) {
            Ok(())
        } else {
            Err(GroebnerError::RingMismatch)
        }
    }

    pub fn zero(&self) -> CoeffPoly<R> {
        CoeffPoly::zero()
    }

    pub fn constant(&self, c: R::Elem) -> CoeffPoly<R> {
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn one(&self) -> CoeffPoly<R> {
        self.constant(self.coeffs.one())
    }

    pub fn from_i64(&self, n: i64) -> CoeffPoly<R> {
        self.constant(self.coeffs.from_i64(n))
    }

    pub fn term(&self, m: Monomial, c: R::Elem) -> CoeffPoly<R> {
        let mut terms = BTreeMap::new();
        if !self.coeffs.is_zero(&c) {
            terms.insert(m, c);
        }
        CoeffPoly { terms }
    }

    pub fn var(&self, index: usize) -> CoeffPoly<R> {
        self.term(Monomial::var(self.nvars(), index, 1), self.coeffs.one())
    }

    pub fn add_term(&self, p: &mut CoeffPoly<R>, m: Monomial, c: &R::Elem) {
        use std::collections::btree_map::Entry;
        if self.coeffs.is_zero(c) {
            return;
        }
        match p.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = self.coeffs.add(o.get(), c);
                if self.coeffs.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, p: &CoeffPoly<R>, q: &CoeffPoly<R>) -> CoeffPoly<R> {
        let mut out = p.clone();
        for (m, c) in &q.terms {
            self.add_term(&mut out, m.clone(), c);
        }
        out
    }

    pub fn neg(&self, p: &CoeffPoly<R>) -> CoeffPoly<R> {
        CoeffPoly {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.coeffs.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, p: &CoeffPoly<R>, q: &CoeffPoly<R>) -> CoeffPoly<R> {
        let mut out = p.clone();
        for (m, c) in &q.terms {
            self.add_term(&mut out, m.clone(), &self.coeffs.neg(c));
        }
        out
    }

    pub fn scale(&self, p: &CoeffPoly<R>, c: &R::Elem) -> CoeffPoly<R> {
        if self.coeffs.is_zero(c) {
            return self.zero();
        }
        let terms = p
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.coeffs.mul(a, c)))
            .collect();
        // zero divisors cannot occur over a field but can over ℤ/n-like rings
        CoeffPoly::from_map(&self.coeffs, terms)
    }

    pub fn mul_term(&self, p: &CoeffPoly<R>, m: &Monomial, c: &R::Elem) -> CoeffPoly<R> {
        let terms = p
            .terms
            .iter()
            .map(|(pm, a)| (pm.mul(m), self.coeffs.mul(a, c)))
            .collect();
        CoeffPoly::from_map(&self.coeffs, terms)
    }

    pub fn mul(&self, p: &CoeffPoly<R>, q: &CoeffPoly<R>) -> CoeffPoly<R> {
        let (small, large) = if p.num_terms() <= q.num_terms() {
            (p, q)
        } else {
            (q, p)
        };
        let mut acc: std::collections::HashMap<Monomial, R::Elem> =
            std::collections::HashMap::with_capacity(small.num_terms() * large.num_terms());
        for (ms, cs) in &small.terms {
            for (ml, cl) in &large.terms {
                let prod = self.coeffs.mul(cs, cl);
                let m = ms.mul(ml);
                match acc.get_mut(&m) {
                    Some(e) => *e = self.coeffs.add(e, &prod),
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        CoeffPoly::from_map(&self.coeffs, acc.into_iter().collect())
    }

    pub fn pow(&self, p: &CoeffPoly<R>, e: u32) -> CoeffPoly<R> {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, p);
        }
        out
    }

    /// Σ aᵢ·bᵢ.
    pub fn dot(&self, a: &[CoeffPoly<R>], b: &[CoeffPoly<R>]) -> CoeffPoly<R> {
        let mut acc: std::collections::HashMap<Monomial, R::Elem> = Default::default();
        for (x, y) in a.iter().zip(b) {
            for (mx, cx) in &x.terms {
                for (my, cy) in &y.terms {
                    let prod = self.coeffs.mul(cx, cy);
                    let m = mx.mul(my);
                    match acc.get_mut(&m) {
                        Some(e) => *e = self.coeffs.add(e, &prod),
                        None => {
                            acc.insert(m, prod);
                        }
                    }
                }
            }
        }
        CoeffPoly::from_map(&self.coeffs, acc.into_iter().collect())
    }

    /// Evaluates at a point given as one coefficient per variable.
    pub fn eval(&self, p: &CoeffPoly<R>, point: &[R::Elem]) -> R::Elem {
        let mut acc = self.coeffs.zero();
        for (m, c) in &p.terms {
            let mut t = c.clone();
            for (e, x) in m.exps().iter().zip(point) {
                for _ in 0..*e {
                    t = self.coeffs.mul(&t, x);
                }
            }
            acc = self.coeffs.add(&acc, &t);
        }
        acc
    }

    /// Replaces selected variables by constants; other variables stay.
    pub fn specialize(&self, p: &CoeffPoly<R>, values: &[(usize, R::Elem)]) -> CoeffPoly<R> {
        let mut out = self.zero();
        for (m, c) in &p.terms {
            let mut exps = m.exps().to_vec();
            let mut t = c.clone();
            for (v, x) in values {
                for _ in 0..exps[*v] {
                    t = self.coeffs.mul(&t, x);
                }
                exps[*v] = 0;
            }
            self.add_term(&mut out, Monomial::from_exps(&exps), &t);
        }
        out
    }

    /// Coefficient-wise ring change.
    pub fn map_coeffs<S: Ring>(
        &self,
        target: &PolyRing<S>,
        p: &CoeffPoly<R>,
        mut f: impl FnMut(&R::Elem) -> Result<S::Elem, ArithError>,
    ) -> Result<CoeffPoly<S>, ArithError> {
        let mut terms = BTreeMap::new();
        for (m, c) in &p.terms {
            terms.insert(m.clone(), f(c)?);
        }
        Ok(CoeffPoly::from_map(target.coeffs(), terms))
    }

    /// Native text form: terms in descending `order`, e.g. `2*la1^2*mu3 - 1/2*la2 + 1`.
    pub fn format(&self, p: &CoeffPoly<R>, order: &MonomialOrder) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms_desc(order).into_iter().enumerate() {
            let negative = self.coeffs.is_negative(c);
            let abs = if negative { self.coeffs.neg(c) } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !self.coeffs.is_one(&abs) || m.is_one() {
                factors.push(self.coeffs.format(&abs));
            }
            for (v, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[v].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[v], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    pub fn parse(&self, text: &str) -> Result<CoeffPoly<R>, crate::expr::ParseError> {
        crate::expr::parse_polynomial(self, text, |name, index| match index {
            None => self.var_index(name),
            Some(_) => None,
        })
    }

    /// Compares leading monomials under `order`; zero is smallest.
    pub fn cmp_leading(&self, order: &MonomialOrder, p: &CoeffPoly<R>, q: &CoeffPoly<R>) -> Ordering {
        match (p.leading_term(order), q.leading_term(order)) {
            (None, None) => Ordering::Equal,
            (None, _) => Ordering::Less,
            (_, None) => Ordering::Greater,
            (Some((a, _)), Some((b, _))) => order.cmp(a, b),
        }
    }
}
