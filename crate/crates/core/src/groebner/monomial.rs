use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::GroebnerError;

pub(crate) type Exps = SmallVec<[u16; 16]>;

/// Exponent vector. The derived `Ord` is plain lexicographic comparison of the
/// vectors; it fixes a storage order and is unrelated to any [`MonomialOrder`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Exps,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn var(nvars: usize, index: usize, power: u16) -> Self {
        let mut m = Self::one(nvars);
        m.exps[index] = power;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| b - a).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    DegLex,
    DegRevLex,
}

impl OrderKind {
    /// Singular's names: `lp`, `Dp`, `dp`.
    pub fn singular_name(&self) -> &'static str {
        match self {
            OrderKind::Lex => "lp",
            OrderKind::DegLex => "Dp",
            OrderKind::DegRevLex => "dp",
        }
    }

    pub fn from_singular_name(s: &str) -> Option<Self> {
        match s {
            "lp" => Some(OrderKind::Lex),
            "Dp" => Some(OrderKind::DegLex),
            "dp" => Some(OrderKind::DegRevLex),
            _ => None,
        }
    }

    /// Compares exponent vectors already arranged by variable precedence.
    #[inline]
    pub(crate) fn cmp_ranked(&self, a: &[u16], b: &[u16], da: u32, db: u32) -> Ordering {
        match self {
            OrderKind::Lex => a.cmp(b),
            OrderKind::DegLex => da.cmp(&db).then_with(|| a.cmp(b)),
            OrderKind::DegRevLex => da.cmp(&db).then_with(|| {
                for (x, y) in a.iter().zip(b).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// A monomial order together with a variable precedence: `precedence[0]` is
/// the largest variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            precedence: (0..nvars).collect(),
        }
    }

    pub fn degrevlex(nvars: usize) -> Self {
        Self::new(OrderKind::DegRevLex, nvars)
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn deglex(nvars: usize) -> Self {
        Self::new(OrderKind::DegLex, nvars)
    }

    pub fn with_precedence(kind: OrderKind, precedence: Vec<usize>) -> Result<Self, GroebnerError> {
        let n = precedence.len();
        let mut seen = vec![false; n];
        for &v in &precedence {
            if v >= n || seen[v] {
                return Err(GroebnerError::BadPermutation);
            }
            seen[v] = true;
        }
        Ok(MonomialOrder { kind, precedence })
    }

    /// Exchanges the ranks of variables `a` and `b`.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut precedence = self.precedence.clone();
        let ia = precedence.iter().position(|&v| v == a).expect("variable in order");
        let ib = precedence.iter().position(|&v| v == b).expect("variable in order");
        precedence.swap(ia, ib);
        MonomialOrder {
            kind: self.kind,
            precedence,
        }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    pub fn is_identity(&self) -> bool {
        self.precedence.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub(crate) fn rank(&self, m: &Monomial) -> Exps {
        self.precedence.iter().map(|&v| m.exps[v]).collect()
    }

    pub(crate) fn unrank(&self, ranked: &[u16]) -> Monomial {
        let mut exps: Exps = SmallVec::from_elem(0, ranked.len());
        for (r, &v) in self.precedence.iter().enumerate() {
            exps[v] = ranked[r];
        }
        Monomial { exps }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        if self.is_identity() {
            self.kind.cmp_ranked(&a.exps, &b.exps, a.degree(), b.degree())
        } else {
            let (ra, rb) = (self.rank(a), self.rank(b));
            self.kind.cmp_ranked(&ra, &rb, a.degree(), b.degree())
        }
    }
}
