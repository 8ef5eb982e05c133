//! The free non-associative algebra K[M(S)] and a small catalog of identities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::exactnum::{ArithError, Field, Ring};
use crate::magma::{Generator, MagmaError, MagmaWord, WordParser};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeAlgError {
    #[error("operands are over different alphabets")]
    AlphabetMismatch,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("no value assigned to generator {0}")]
    PartialAssignment(String),
    #[error("assigned values do not share one alphabet")]
    MixedTargets,
    #[error("unknown identity {0}")]
    UnknownIdentity(String),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error(transparent)]
    Magma(#[from] MagmaError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A finite linear combination of magma words.
#[derive(Clone)]
pub struct NonAssocPoly<R: Ring> {
    ring: R,
    alphabet: Vec<Generator>,
    terms: BTreeMap<MagmaWord, R::Elem>,
}

impl<R: Ring> PartialEq for NonAssocPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.terms == other.terms
    }
}

impl<R: Ring> Eq for NonAssocPoly<R> {}

impl<R: Ring> fmt::Debug for NonAssocPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<R: Ring> NonAssocPoly<R> {
    pub fn zero(ring: R, alphabet: &[Generator]) -> Self {
        NonAssocPoly {
            ring,
            alphabet: alphabet.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        ring: R,
        alphabet: &[Generator],
        terms: impl IntoIterator<Item = (MagmaWord, R::Elem)>,
    ) -> Result<Self, FreeAlgError> {
        let mut p = Self::zero(ring, alphabet);
        for (w, c) in terms {
            w.multidegree(alphabet)?;
            p.add_term(w, &c);
        }
        Ok(p)
    }

    /// The word `w` with coefficient 1.
    pub fn word(ring: R, alphabet: &[Generator], w: MagmaWord) -> Result<Self, FreeAlgError> {
        let one = ring.one();
        Self::from_terms(ring, alphabet, [(w, one)])
    }

    pub fn generator(ring: R, alphabet: &[Generator], g: &Generator) -> Result<Self, FreeAlgError> {
        Self::word(ring, alphabet, MagmaWord::leaf(g.clone()))
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn alphabet(&self) -> &[Generator] {
        &self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MagmaWord, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &MagmaWord) -> Option<&R::Elem> {
        self.terms.get(w)
    }

    fn add_term(&mut self, w: MagmaWord, c: &R::Elem) {
        if self.ring.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                let s = self.ring.add(old, c);
                if self.ring.is_zero(&s) {
                    self.terms.remove(&w);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    fn same_alphabet(&self, other: &Self) -> Result<(), FreeAlgError> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(FreeAlgError::AlphabetMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.same_alphabet(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ring.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(self.ring.clone(), &self.alphabet);
        for (w, a) in &self.terms {
            out.add_term(w.clone(), &self.ring.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.same_alphabet(other)?;
        let mut out = Self::zero(self.ring.clone(), &self.alphabet);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(MagmaWord::mul(u, v), &self.ring.mul(a, b));
            }
        }
        Ok(out)
    }

    /// Common multidegree of all terms, or `None` for zero and for
    /// non-homogeneous polynomials.
    pub fn homogeneous_type(&self) -> Option<Vec<u32>> {
        let mut types = self
            .terms
            .keys()
            .map(|w| w.multidegree(&self.alphabet).expect("terms use the alphabet"));
        let first = types.next()?;
        types.all(|t| t == first).then_some(first)
    }

    /// Every term has degree one in each generator of the alphabet.
    pub fn is_multilinear(&self) -> bool {
        self.homogeneous_type()
            .is_some_and(|t| t.iter().all(|&k| k == 1))
    }

    pub fn homogeneous_components(&self) -> BTreeMap<Vec<u32>, Self> {
        let mut out: BTreeMap<Vec<u32>, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            let t = w.multidegree(&self.alphabet).expect("terms use the alphabet");
            out.entry(t)
                .or_insert_with(|| Self::zero(self.ring.clone(), &self.alphabet))
                .add_term(w.clone(), c);
        }
        out
    }

    /// Homomorphic image under `assignment`, which must cover the alphabet.
    pub fn substitute(&self, assignment: &BTreeMap<Generator, Self>) -> Result<Self, FreeAlgError> {
        for g in &self.alphabet {
            if !assignment.contains_key(g) {
                return Err(FreeAlgError::PartialAssignment(g.to_string()));
            }
        }
        let target: Vec<Generator> = match assignment.values().next() {
            Some(v) => v.alphabet.clone(),
            None => self.alphabet.clone(),
        };
        if assignment.values().any(|v| v.alphabet != target) {
            return Err(FreeAlgError::MixedTargets);
        }
        let mut out = Self::zero(self.ring.clone(), &target);
        for (w, c) in &self.terms {
            let image = self.eval_word(w, assignment)?;
            out = out.add(&image.scale(c))?;
        }
        Ok(out)
    }

    fn eval_word(&self, w: &MagmaWord, a: &BTreeMap<Generator, Self>) -> Result<Self, FreeAlgError> {
        match w.children() {
            None => Ok(a[w.as_leaf().unwrap()].clone()),
            Some((l, r)) => self.eval_word(l, a)?.mul(&self.eval_word(r, a)?),
        }
    }

    /// Full polarization. Each generator of multiplicity k is split into
    /// fresh copies `name_1 … name_k`; the result is the multilinear part of
    /// p(Σ copies).
    pub fn multilinearize(&self) -> Result<Polarization<R>, FreeAlgError> {
        if self.is_zero() {
            return Ok(Polarization {
                poly: self.clone(),
                origin: Vec::new(),
                degenerate: false,
            });
        }
        let ty = self.homogeneous_type().ok_or(FreeAlgError::NotHomogeneous)?;
        self.polarize_as(&ty)
    }

    /// Polarization for a prescribed type; zero is allowed and stays zero.
    pub fn polarize_as(&self, ty: &[u32]) -> Result<Polarization<R>, FreeAlgError> {
        if ty.len() != self.alphabet.len() {
            return Err(FreeAlgError::AlphabetMismatch);
        }
        let mut origin = Vec::new();
        let mut copies: Vec<Vec<Generator>> = Vec::new();
        for (g, &k) in self.alphabet.iter().zip(ty) {
            let mut row = Vec::new();
            for j in 1..=k {
                let fresh = Generator {
                    name: format!("{}_{j}", g.name),
                    index: g.index,
                };
                origin.push((fresh.clone(), g.clone()));
                row.push(fresh);
            }
            copies.push(row);
        }
        let fresh_alphabet: Vec<Generator> = origin.iter().map(|(f, _)| f.clone()).collect();
        let mut out = Self::zero(self.ring.clone(), &fresh_alphabet);
        let perms: Vec<Vec<Vec<usize>>> = ty.iter().map(|&k| permutations(k as usize)).collect();
        for (w, c) in &self.terms {
            if w.multidegree(&self.alphabet)? != ty {
                return Err(FreeAlgError::NotHomogeneous);
            }
            // one permutation per generator, all combinations
            let mut choice = vec![0usize; ty.len()];
            loop {
                let mut seen = vec![0usize; ty.len()];
                let word = w.map_leaves(&mut |g| {
                    let i = self.alphabet.iter().position(|a| a == g).unwrap();
                    let copy = perms[i][choice[i]][seen[i]];
                    seen[i] += 1;
                    MagmaWord::leaf(copies[i][copy].clone())
                });
                out.add_term(word, c);
                let mut pos = 0;
                while pos < choice.len() {
                    choice[pos] += 1;
                    if choice[pos] < perms[pos].len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
                if pos == choice.len() {
                    break;
                }
            }
        }
        let degenerate = out.is_zero() && !self.is_zero();
        Ok(Polarization {
            poly: out,
            origin,
            degenerate,
        })
    }

    /// Reduction modulo anticommutativity: children of every node are put in
    /// canonical order with a sign per swap, and in characteristic ≠ 2 a node
    /// with equal children vanishes.
    pub fn anticommutative_normal_form(&self) -> Self {
        let mut out = Self::zero(self.ring.clone(), &self.alphabet);
        let char2 = self.ring.characteristic() == 2;
        for (w, c) in &self.terms {
            if let Some((nw, negative)) = anticomm_word(w, char2) {
                let c = if negative { self.ring.neg(c) } else { c.clone() };
                out.add_term(nw, &c);
            }
        }
        out
    }

    /// Parses `c*word + c*word - …`; a bare word has coefficient 1.
    pub fn parse(ring: R, alphabet: &[Generator], text: &str) -> Result<Self, FreeAlgError> {
        let mut out = Self::zero(ring.clone(), alphabet);
        if text.trim() == "0" {
            return Ok(out);
        }
        let mut p = WordParser::new(text);
        let mut first = true;
        loop {
            p.skip_ws();
            let mut negative = false;
            match p.peek() {
                Some('+') if !first => p.bump(),
                Some('-') => {
                    negative = true;
                    p.bump()
                }
                _ if first => {}
                _ => return Err(p.error("expected '+' or '-'").into()),
            }
            p.skip_ws();
            let coeff = if p.peek().is_some_and(|c| c.is_ascii_digit()) {
                let digits = p.take_while(|c| c.is_ascii_digit() || c == '/');
                let c = ring.parse(&digits)?;
                p.expect('*')?;
                c
            } else {
                ring.one()
            };
            let w = p.word()?;
            w.multidegree(alphabet)?;
            let coeff = if negative { ring.neg(&coeff) } else { coeff };
            out.add_term(w, &coeff);
            first = false;
            p.skip_ws();
            if p.at_end() {
                return Ok(out);
            }
        }
    }

    /// Alphabet of distinct generators in order of first appearance.
    pub fn infer_alphabet(text: &str) -> Result<Vec<Generator>, FreeAlgError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut p = WordParser::new(text);
        while !p.at_end() {
            match p.peek() {
                Some(c) if c == '(' || c.is_ascii_alphabetic() => {
                    let w = p.word()?;
                    for g in w.leaves() {
                        if seen.insert(g.clone()) {
                            out.push(g.clone());
                        }
                    }
                }
                _ => p.bump(),
            }
        }
        Ok(out)
    }
}

impl<R: Ring> fmt::Display for NonAssocPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let negative = self.ring.is_negative(c);
            let shown = if negative { self.ring.neg(c) } else { c.clone() };
            let shown = self.ring.format(&shown);
            match (i, negative) {
                (0, false) => write!(f, "{shown}*{w}")?,
                (0, true) => write!(f, "-{shown}*{w}")?,
                (_, false) => write!(f, " + {shown}*{w}")?,
                (_, true) => write!(f, " - {shown}*{w}")?,
            }
        }
        Ok(())
    }
}

fn anticomm_word(w: &MagmaWord, char2: bool) -> Option<(MagmaWord, bool)> {
    let (l, r) = match w.children() {
        None => return Some((w.clone(), false)),
        Some(lr) => lr,
    };
    let (l, sl) = anticomm_word(l, char2)?;
    let (r, sr) = anticomm_word(r, char2)?;
    let sign = sl ^ sr;
    match l.cmp(&r) {
        std::cmp::Ordering::Less => Some((MagmaWord::mul(&l, &r), sign)),
        std::cmp::Ordering::Greater => Some((MagmaWord::mul(&r, &l), !sign)),
        std::cmp::Ordering::Equal if char2 => Some((MagmaWord::mul(&l, &r), sign)),
        std::cmp::Ordering::Equal => None,
    }
}

/// All permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Output of [`NonAssocPoly::multilinearize`].
#[derive(Debug, Clone)]
pub struct Polarization<R: Ring> {
    pub poly: NonAssocPoly<R>,
    /// Fresh generator and the generator it replaced.
    pub origin: Vec<(Generator, Generator)>,
    /// The input was nonzero but the polarization vanished.
    pub degenerate: bool,
}

impl<R: Ring> Polarization<R> {
    /// Substitutes every fresh copy back by its original generator.
    pub fn collapse(&self, original: &[Generator]) -> Result<NonAssocPoly<R>, FreeAlgError> {
        let ring = self.poly.ring.clone();
        let mut a = BTreeMap::new();
        for (fresh, g) in &self.origin {
            a.insert(fresh.clone(), NonAssocPoly::generator(ring.clone(), original, g)?);
        }
        if a.is_empty() {
            return Ok(NonAssocPoly::zero(ring, original));
        }
        self.poly.substitute(&a)
    }
}

/// An identity `lhs = rhs`, compared through `lhs − rhs`.
#[derive(Debug, Clone)]
pub struct Identity<R: Ring> {
    pub name: String,
    pub lhs: NonAssocPoly<R>,
    pub rhs: NonAssocPoly<R>,
}

impl<R: Ring> Identity<R> {
    pub fn new(name: &str, lhs: NonAssocPoly<R>, rhs: NonAssocPoly<R>) -> Result<Self, FreeAlgError> {
        lhs.same_alphabet(&rhs)?;
        Ok(Identity {
            name: name.to_string(),
            lhs,
            rhs,
        })
    }

    pub fn poly(&self) -> NonAssocPoly<R> {
        self.lhs.sub(&self.rhs).expect("sides share the alphabet")
    }

    pub fn alphabet(&self) -> &[Generator] {
        self.lhs.alphabet()
    }

    pub fn degree(&self) -> usize {
        let p = self.poly();
        p.terms().map(|(w, _)| w.degree()).max().unwrap_or(0)
    }
}

impl<F: Field> Identity<F> {
    /// `lhs − rhs` divided by its first coefficient.
    pub fn normalized(&self) -> NonAssocPoly<F> {
        normalize(&self.poly())
    }

    /// Same polynomial up to a nonzero scalar.
    pub fn equivalent(&self, other: &Identity<F>) -> bool {
        self.alphabet() == other.alphabet() && self.normalized() == other.normalized()
    }

    /// Equivalence after reducing both sides modulo anticommutativity.
    pub fn equivalent_mod_anticommutativity(&self, other: &Identity<F>) -> bool {
        self.alphabet() == other.alphabet()
            && normalize(&self.poly().anticommutative_normal_form())
                == normalize(&other.poly().anticommutative_normal_form())
    }
}

fn normalize<F: Field>(p: &NonAssocPoly<F>) -> NonAssocPoly<F> {
    match p.terms().next() {
        None => p.clone(),
        Some((_, c)) => p.scale(&p.ring.inv(c).expect("stored coefficients are nonzero")),
    }
}

pub const IDENTITY_NAMES: [&str; 7] = [
    "jacobi",
    "alternativity",
    "anticommutativity",
    "commutativity",
    "associativity",
    "lambda_mu_left",
    "lambda_mu_right",
];

/// Which side of the rule holds the product of two letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSide {
    /// z(xy) = Σ λᵢ·(term i)
    Left,
    /// (xy)z = Σ μᵢ·(term i)
    Right,
}

/// The eight reassociations of x, y, z that appear on the right of both
/// λ/μ-rules: (zx)y, (xz)y, y(zx), y(xz), (zy)x, (yz)x, x(zy), x(yz).
pub fn rule_terms<T>(x: &T, y: &T, z: &T, mul: impl Fn(&T, &T) -> T) -> [T; 8] {
    [
        mul(&mul(z, x), y),
        mul(&mul(x, z), y),
        mul(y, &mul(z, x)),
        mul(y, &mul(x, z)),
        mul(&mul(z, y), x),
        mul(&mul(y, z), x),
        mul(x, &mul(z, y)),
        mul(x, &mul(y, z)),
    ]
}

/// Bound coefficients λ₁..λ₈, μ₁..μ₈.
#[derive(Debug, Clone)]
pub struct LambdaMuRule<R: Ring> {
    pub lambda: Vec<R::Elem>,
    pub mu: Vec<R::Elem>,
}

impl<R: Ring> LambdaMuRule<R> {
    pub fn new(lambda: Vec<R::Elem>, mu: Vec<R::Elem>) -> Result<Self, FreeAlgError> {
        for v in [&lambda, &mu] {
            if v.len() != 8 {
                return Err(FreeAlgError::CoefficientCount {
                    expected: 8,
                    got: v.len(),
                });
            }
        }
        Ok(LambdaMuRule { lambda, mu })
    }

    pub fn identity(&self, ring: R, side: RuleSide) -> Identity<R> {
        let xyz = xyz();
        let [x, y, z] = xyz.clone().map(MagmaWord::leaf);
        let (lhs, coeffs, name) = match side {
            RuleSide::Left => (MagmaWord::mul(&z, &MagmaWord::mul(&x, &y)), &self.lambda, "lambda_mu_left"),
            RuleSide::Right => (MagmaWord::mul(&MagmaWord::mul(&x, &y), &z), &self.mu, "lambda_mu_right"),
        };
        let terms = rule_terms(&x, &y, &z, MagmaWord::mul);
        let rhs = NonAssocPoly::from_terms(ring.clone(), &xyz, terms.into_iter().zip(coeffs.iter().cloned()))
            .expect("rule words use x, y, z");
        let lhs = NonAssocPoly::word(ring, &xyz, lhs).unwrap();
        Identity::new(name, lhs, rhs).unwrap()
    }
}

/// The rule with symbolic coefficients, as text.
pub fn lambda_mu_symbolic(side: RuleSide) -> String {
    let [x, y, z] = xyz().map(MagmaWord::leaf);
    let (lhs, prefix) = match side {
        RuleSide::Left => (MagmaWord::mul(&z, &MagmaWord::mul(&x, &y)), "la"),
        RuleSide::Right => (MagmaWord::mul(&MagmaWord::mul(&x, &y), &z), "mu"),
    };
    let rhs: Vec<String> = rule_terms(&x, &y, &z, MagmaWord::mul)
        .iter()
        .enumerate()
        .map(|(i, w)| format!("{prefix}{}*{w}", i + 1))
        .collect();
    format!("{lhs} = {}", rhs.join(" + "))
}

fn xyz() -> [Generator; 3] {
    [Generator::new("x"), Generator::new("y"), Generator::new("z")]
}

/// The one-parameter-pair rule x(yz) = λ(xy)z + μy(xz) of the commutative
/// and anticommutative cases.
pub fn short_rule<F: Field>(field: F, la: F::Elem, mu: F::Elem) -> Identity<F> {
    let gens = xyz();
    let [x, y, z] = gens.clone().map(MagmaWord::leaf);
    let m = MagmaWord::mul;
    let lhs = NonAssocPoly::word(field.clone(), &gens, m(&x, &m(&y, &z))).unwrap();
    let rhs = NonAssocPoly::from_terms(
        field,
        &gens,
        [(m(&m(&x, &y), &z), la), (m(&y, &m(&x, &z)), mu)],
    )
    .unwrap();
    Identity::new("short_rule", lhs, rhs).unwrap()
}

/// Looks up a fixed identity by name. The λ/μ entries need `binding`.
pub fn named_identity<F: Field>(
    field: F,
    name: &str,
    binding: Option<&LambdaMuRule<F>>,
) -> Result<Identity<F>, FreeAlgError> {
    let gens = xyz();
    let [x, y, z] = gens.clone().map(MagmaWord::leaf);
    let m = MagmaWord::mul;
    let poly = |terms: Vec<(MagmaWord, i64)>, alphabet: &[Generator]| {
        NonAssocPoly::from_terms(
            field.clone(),
            alphabet,
            terms.into_iter().map(|(w, c)| (w, field.from_i64(c))),
        )
        .unwrap()
    };
    let two = &gens[..2];
    let zero = |alphabet: &[Generator]| NonAssocPoly::zero(field.clone(), alphabet);
    let id = match name {
        "jacobi" => Identity::new(
            name,
            poly(
                vec![(m(&x, &m(&y, &z)), 1), (m(&y, &m(&z, &x)), 1), (m(&z, &m(&x, &y)), 1)],
                &gens,
            ),
            zero(&gens),
        ),
        "alternativity" => Identity::new(name, poly(vec![(m(&x, &x), 1)], &gens[..1]), zero(&gens[..1])),
        "anticommutativity" => Identity::new(name, poly(vec![(m(&x, &y), 1), (m(&y, &x), 1)], two), zero(two)),
        "commutativity" => Identity::new(name, poly(vec![(m(&x, &y), 1)], two), poly(vec![(m(&y, &x), 1)], two)),
        "associativity" => Identity::new(
            name,
            poly(vec![(m(&m(&x, &y), &z), 1)], &gens),
            poly(vec![(m(&x, &m(&y, &z)), 1)], &gens),
        ),
        "lambda_mu_left" | "lambda_mu_right" => {
            let side = if name == "lambda_mu_left" { RuleSide::Left } else { RuleSide::Right };
            let rule = binding.ok_or_else(|| FreeAlgError::UnknownIdentity(format!("{name} needs coefficients")))?;
            return Ok(rule.identity(field, side));
        }
        _ => return Err(FreeAlgError::UnknownIdentity(name.to_string())),
    };
    Ok(id.unwrap())
}

/// The five coefficient-free identities.
pub fn named_identities<F: Field>(field: F) -> Vec<Identity<F>> {
    IDENTITY_NAMES[..5]
        .iter()
        .map(|n| named_identity(field.clone(), n, None).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{PrimeField, Rational, Rationals};

    fn gens(names: &[&str]) -> Vec<Generator> {
        names.iter().map(|n| Generator::new(n)).collect()
    }

    fn q(alphabet: &[Generator], text: &str) -> NonAssocPoly<Rationals> {
        NonAssocPoly::parse(Rationals, alphabet, text).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let a = gens(&["x", "y"]);
        let s = q(&a, "x + y");
        let x = q(&a, "x");
        assert_eq!(s.mul(&x).unwrap(), q(&a, "(x*x) + (y*x)"));
        assert!(s.scale(&Rational::from_integer(0.into())).is_zero());
        let xy = q(&a, "(x*y)");
        let sq = xy.mul(&xy).unwrap();
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.terms().next().unwrap().0.degree(), 4);
        let other = NonAssocPoly::<Rationals>::zero(Rationals, &gens(&["x"]));
        assert_eq!(s.add(&other).unwrap_err(), FreeAlgError::AlphabetMismatch);
    }

    #[test]
    fn homogeneous_component_examples() {
        let a = gens(&["x", "y"]);
        let p = q(&a, "(x*y) + (x*(x*y))");
        let c = p.homogeneous_components();
        assert_eq!(c.len(), 2);
        assert_eq!(c[&vec![1, 1]], q(&a, "(x*y)"));
        assert_eq!(c[&vec![2, 1]], q(&a, "(x*(x*y))"));
        let jacobi = named_identity(Rationals, "jacobi", None).unwrap().poly();
        assert_eq!(jacobi.homogeneous_components().keys().collect::<Vec<_>>(), [&vec![1, 1, 1]]);
        assert!(q(&a, "0").homogeneous_components().is_empty());
    }

    #[test]
    fn polarization_examples() {
        let a = gens(&["x"]);
        let m = q(&a, "(x*x)").multilinearize().unwrap();
        let fresh = gens(&["x_1", "x_2"]);
        assert_eq!(m.poly, q(&fresh, "(x_1*x_2) + (x_2*x_1)"));
        assert!(!m.degenerate);

        let a3 = gens(&["x", "y", "z"]);
        let m = q(&a3, "(x*(y*z))").multilinearize().unwrap();
        assert_eq!(m.poly, q(&gens(&["x_1", "y_1", "z_1"]), "(x_1*(y_1*z_1))"));

        assert_eq!(
            q(&gens(&["x", "y"]), "x + (x*y)").multilinearize().unwrap_err(),
            FreeAlgError::NotHomogeneous
        );
    }

    // Oracle: expand p(y₁ + y₂ + y₃) term by term and keep the words using
    // each yᵢ exactly once.
    #[test]
    fn polarizing_x_xx_matches_brute_force() {
        let a = gens(&["x"]);
        let p = q(&a, "(x*(x*x))");
        let m = p.multilinearize().unwrap();
        let ys = gens(&["x_1", "x_2", "x_3"]);
        let sum = q(&ys, "x_1 + x_2 + x_3");
        let mut assign = BTreeMap::new();
        assign.insert(a[0].clone(), sum);
        let expanded = p.substitute(&assign).unwrap();
        let brute = expanded.homogeneous_components().remove(&vec![1, 1, 1]).unwrap();
        assert_eq!(m.poly, brute);
        // every bracketing is fixed by the input, so only the 3! orderings appear
        assert_eq!(m.poly.len(), 6);
        let back = m.collapse(&a).unwrap();
        assert_eq!(back, p.scale(&Rational::from_integer(6.into())));
    }

    #[test]
    fn polarization_in_small_characteristic_can_degenerate() {
        let f2 = PrimeField::new(2).unwrap();
        let a = gens(&["x"]);
        let p = NonAssocPoly::parse(f2, &a, "(x*x)").unwrap();
        let m = p.multilinearize().unwrap();
        assert!(!m.degenerate);
        let back = m.collapse(&a).unwrap();
        assert!(back.is_zero());
    }

    #[test]
    fn substitution_examples() {
        let a3 = gens(&["x", "y", "z"]);
        let jac = named_identity(Rationals, "jacobi", None).unwrap().poly();
        let a2 = gens(&["x", "y"]);
        let mut s = BTreeMap::new();
        s.insert(a3[0].clone(), q(&a2, "x"));
        s.insert(a3[1].clone(), q(&a2, "x"));
        s.insert(a3[2].clone(), q(&a2, "y"));
        assert_eq!(jac.substitute(&s).unwrap(), q(&a2, "(x*(x*y)) + (x*(y*x)) + (y*(x*x))"));

        let id: BTreeMap<_, _> = a3.iter().map(|g| (g.clone(), q(&a3, &g.to_string()))).collect();
        assert_eq!(jac.substitute(&id).unwrap(), jac);

        let abc = gens(&["a", "b", "c"]);
        let anti = q(&a2, "(x*y) + (y*x)");
        let mut s = BTreeMap::new();
        s.insert(a2[0].clone(), q(&abc, "(a*b)"));
        s.insert(a2[1].clone(), q(&abc, "c"));
        assert_eq!(anti.substitute(&s).unwrap(), q(&abc, "((a*b)*c) + (c*(a*b))"));

        s.remove(&a2[1]);
        assert_eq!(anti.substitute(&s).unwrap_err(), FreeAlgError::PartialAssignment("y".into()));
    }

    #[test]
    fn catalog_examples() {
        let jac = named_identity(Rationals, "jacobi", None).unwrap();
        assert_eq!(jac.poly().to_string(), "1*(x*(y*z)) + 1*(y*(z*x)) + 1*(z*(x*y))");

        let zero = || Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        let mut la = vec![zero(); 8];
        let mut mu = vec![zero(); 8];
        la[0] = one.clone();
        mu[7] = one;
        let rule = LambdaMuRule::<Rationals>::new(la, mu).unwrap();
        let assoc = named_identity(Rationals, "associativity", None).unwrap();
        // z(xy) = (zx)y is associativity with the letters renamed
        let left = named_identity(Rationals, "lambda_mu_left", Some(&rule)).unwrap();
        let a3 = gens(&["x", "y", "z"]);
        let mut ren = BTreeMap::new();
        ren.insert(a3[0].clone(), q(&a3, "y"));
        ren.insert(a3[1].clone(), q(&a3, "z"));
        ren.insert(a3[2].clone(), q(&a3, "x"));
        assert_eq!(left.poly().substitute(&ren).unwrap(), assoc.poly().neg());
        let right = named_identity(Rationals, "lambda_mu_right", Some(&rule)).unwrap();
        assert!(right.equivalent(&assoc));

        let f2 = PrimeField::new(2).unwrap();
        let anti = named_identity(f2, "anticommutativity", None).unwrap();
        let comm = named_identity(f2, "commutativity", None).unwrap();
        assert!(anti.equivalent(&comm));
        let anti_q = named_identity(Rationals, "anticommutativity", None).unwrap();
        let comm_q = named_identity(Rationals, "commutativity", None).unwrap();
        assert!(!anti_q.equivalent(&comm_q));
        assert!(named_identity(Rationals, "lambda_mu_left", None).is_err());
        assert_eq!(named_identities(Rationals).len(), 5);
    }

    #[test]
    fn text_round_trip() {
        let a = gens(&["x", "y", "z"]);
        for t in ["0", "1*(x*(y*z)) + 1*(y*(z*x)) + 1*(z*(x*y))", "-2/3*x + 1*(x*y) - 5*((x*y)*z)"] {
            assert_eq!(q(&a, t).to_string(), t);
        }
        assert_eq!(
            NonAssocPoly::<Rationals>::infer_alphabet("1*(b*(a*b)) - c").unwrap(),
            gens(&["b", "a", "c"])
        );
        assert!(NonAssocPoly::parse(Rationals, &a, "1*(x*w)").is_err());
        assert!(NonAssocPoly::parse(Rationals, &a, "x y").is_err());
    }

    #[test]
    fn anticommutative_reduction() {
        let a = gens(&["x", "y", "z"]);
        assert!(q(&a, "(x*y) + (y*x)").anticommutative_normal_form().is_zero());
        assert!(q(&a, "(x*x)").anticommutative_normal_form().is_zero());
        assert_eq!(q(&a, "((x*y)*z)").anticommutative_normal_form(), q(&a, "-1*(z*(x*y))"));
    }
}
