//! Expansion of mixed words under the λ/μ-rules.
//!
//! Three actors b1, b2, b3 act on the abelian module X spanned by x, y, z
//! and t symbols. A product with a pure-B factor of length ≥ 2 is rewritten
//! by the rule, single letters act through the table. Comparing two ways of
//! expanding the same word gives polynomial conditions on the coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::action::{ActionTable, FinAlgebra};
use crate::exactnum::{Field, PrimeField, Rational, Rationals};
use crate::freealg::{rule_terms, short_rule, Identity};
use crate::groebner::{rational_points_2var, reduce_basis, CoeffPoly, GroebnerError, MonomialOrder, PolyRing};

/// Hard limit on nested rule applications along one expansion path.
pub const RULE_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaMuError {
    #[error("word has {0} module letters, expected exactly one")]
    ModuleLetters(usize),
    #[error("more than {RULE_CAP} nested rule applications")]
    RuleCap,
    #[error("system does not have a unique rational solution")]
    NoUniqueSolution,
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    L,
    R,
}

impl Side {
    fn letter(self) -> char {
        match self {
            Side::L => 'l',
            Side::R => 'r',
        }
    }
}

/// Basis of X. Indices are actor numbers 1..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XBasisSymbol {
    X,
    Y(u8, Side),
    Z(u8, u8, Side, Side),
    T(u8, u8, u8, Side, Side, Side),
}

impl XBasisSymbol {
    fn indices(&self) -> Vec<u8> {
        match *self {
            XBasisSymbol::X => vec![],
            XBasisSymbol::Y(i, _) => vec![i],
            XBasisSymbol::Z(i, j, _, _) => vec![i, j],
            XBasisSymbol::T(i, j, k, _, _, _) => vec![i, j, k],
        }
    }

    fn sides(&self) -> Vec<Side> {
        match *self {
            XBasisSymbol::X => vec![],
            XBasisSymbol::Y(_, a) => vec![a],
            XBasisSymbol::Z(_, _, a, b) => vec![a, b],
            XBasisSymbol::T(_, _, _, a, b, c) => vec![a, b, c],
        }
    }

    /// `t213`, with the side string appended for the two-sided variant.
    pub fn label(&self, variant: ActionVariant) -> String {
        let head = match self {
            XBasisSymbol::X => return "x".to_string(),
            XBasisSymbol::Y(..) => 'y',
            XBasisSymbol::Z(..) => 'z',
            XBasisSymbol::T(..) => 't',
        };
        let idx: String = self.indices().iter().map(|i| i.to_string()).collect();
        match variant {
            ActionVariant::TwoSided => {
                let s: String = self.sides().iter().map(|s| s.letter()).collect();
                format!("{head}{idx}_{s}")
            }
            _ => format!("{head}{idx}"),
        }
    }
}

impl fmt::Display for XBasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label(ActionVariant::TwoSided))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionVariant {
    TwoSided,
    /// Left and right actions coincide.
    Commutative,
    /// The left action is minus the right one.
    Anticommutative,
}

impl ActionVariant {
    pub fn name(&self) -> &'static str {
        match self {
            ActionVariant::TwoSided => "two-sided",
            ActionVariant::Commutative => "commutative",
            ActionVariant::Anticommutative => "anticommutative",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [ActionVariant::TwoSided, ActionVariant::Commutative, ActionVariant::Anticommutative]
            .into_iter()
            .find(|v| v.name() == s)
    }

    fn collapsed(&self) -> bool {
        *self != ActionVariant::TwoSided
    }
}

/// X-basis for a variant: 79 symbols two-sided, 16 otherwise (sides fixed to r).
pub fn basis(variant: ActionVariant) -> Vec<XBasisSymbol> {
    let sides: &[Side] = if variant.collapsed() { &[Side::R] } else { &[Side::L, Side::R] };
    let mut out = vec![XBasisSymbol::X];
    for i in 1..=3 {
        for &a in sides {
            out.push(XBasisSymbol::Y(i, a));
        }
    }
    for i in 1..=3 {
        for j in (1..=3).filter(|&j| j != i) {
            for &a in sides {
                for &b in sides {
                    out.push(XBasisSymbol::Z(i, j, a, b));
                }
            }
        }
    }
    for (i, j, k) in permutations3() {
        for &a in sides {
            for &b in sides {
                for &c in sides {
                    out.push(XBasisSymbol::T(i, j, k, a, b, c));
                }
            }
        }
    }
    out
}

fn permutations3() -> Vec<(u8, u8, u8)> {
    let mut v = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            for k in 1..=3 {
                if i != j && j != k && i != k {
                    v.push((i, j, k));
                }
            }
        }
    }
    v
}

/// Raw action table: bⁱx = yⁱ, bⁱyʲ = zʲⁱ (i ≠ j), bⁱzʲᵏ = tʲᵏⁱ (i ∉ {j,k}),
/// each new index carrying the side the actor came from.
fn act_raw(i: u8, s: XBasisSymbol, side: Side) -> Option<XBasisSymbol> {
    match s {
        XBasisSymbol::X => Some(XBasisSymbol::Y(i, side)),
        XBasisSymbol::Y(j, a) if j != i => Some(XBasisSymbol::Z(j, i, a, side)),
        XBasisSymbol::Z(j, k, a, b) if i != j && i != k => Some(XBasisSymbol::T(j, k, i, a, b, side)),
        _ => None,
    }
}

/// Image of `s` under actor `i` on `side`, with its sign.
pub fn act_signed(i: u8, s: XBasisSymbol, side: Side, variant: ActionVariant) -> Option<(i64, XBasisSymbol)> {
    match variant {
        ActionVariant::TwoSided => act_raw(i, s, side).map(|t| (1, t)),
        ActionVariant::Commutative => act_raw(i, s, Side::R).map(|t| (1, t)),
        ActionVariant::Anticommutative => {
            let sign = if side == Side::L { -1 } else { 1 };
            act_raw(i, s, Side::R).map(|t| (sign, t))
        }
    }
}

/// Binary tree over actors and module symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum MixedWord {
    B(u8),
    X(XBasisSymbol),
    Mul(Arc<MixedWord>, Arc<MixedWord>),
}

impl MixedWord {
    pub fn b(i: u8) -> Self {
        MixedWord::B(i)
    }

    pub fn x() -> Self {
        MixedWord::X(XBasisSymbol::X)
    }

    pub fn mul(u: &MixedWord, v: &MixedWord) -> Self {
        MixedWord::Mul(Arc::new(u.clone()), Arc::new(v.clone()))
    }

    pub fn module_letters(&self) -> usize {
        match self {
            MixedWord::B(_) => 0,
            MixedWord::X(_) => 1,
            MixedWord::Mul(l, r) => l.module_letters() + r.module_letters(),
        }
    }
}

impl fmt::Display for MixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixedWord::B(i) => write!(f, "b{i}"),
            MixedWord::X(s) => write!(f, "{s}"),
            MixedWord::Mul(l, r) => write!(f, "({l}*{r})"),
        }
    }
}

impl fmt::Debug for MixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Σ coefficient·symbol with coefficients in the λ/μ ring.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalElement {
    pub terms: BTreeMap<XBasisSymbol, CoeffPoly<Rationals>>,
}

impl FormalElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled(&mut self, ring: &PolyRing<Rationals>, other: &FormalElement, c: &CoeffPoly<Rationals>) {
        for (s, a) in &other.terms {
            self.add_term(ring, *s, &ring.mul(a, c));
        }
    }

    fn add_term(&mut self, ring: &PolyRing<Rationals>, s: XBasisSymbol, c: &CoeffPoly<Rationals>) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&s) {
            Some(old) => ring.add(old, c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&s);
        } else {
            self.terms.insert(s, sum);
        }
    }

    pub fn coeff(&self, s: &XBasisSymbol) -> Option<&CoeffPoly<Rationals>> {
        self.terms.get(s)
    }
}

/// Which of the two expansions is subtracted from the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffSign {
    /// rule applied at the root, minus direct expansion
    AltMinusDirect,
    DirectMinusAlt,
}

/// Order in which the coefficients of one probe are emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolOrder {
    /// Kind, indices, then sides with l < r.
    Canonical,
    /// Kind, indices, then sides with r < l.
    RightFirst,
    /// Kind, sides (l < r), then indices.
    SidesMajor,
}

impl SymbolOrder {
    pub const ALL: [SymbolOrder; 3] = [SymbolOrder::Canonical, SymbolOrder::RightFirst, SymbolOrder::SidesMajor];

    fn cmp(&self, a: &XBasisSymbol, b: &XBasisSymbol) -> Ordering {
        let kind = |s: &XBasisSymbol| s.indices().len();
        let flip = |v: Vec<Side>| -> Vec<Side> {
            v.into_iter()
                .map(|s| if s == Side::L { Side::R } else { Side::L })
                .collect()
        };
        kind(a).cmp(&kind(b)).then_with(|| match self {
            SymbolOrder::Canonical => a.cmp(b),
            SymbolOrder::RightFirst => (a.indices(), flip(a.sides())).cmp(&(b.indices(), flip(b.sides()))),
            SymbolOrder::SidesMajor => (a.sides(), a.indices()).cmp(&(b.sides(), b.indices())),
        })
    }
}

/// Emission convention for the two-sided system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convention {
    pub sign: DiffSign,
    /// Emission order of the four degree-2 probes (indices into [`degree2_probes`]).
    pub deg2_order: [usize; 4],
    /// Emission order of the four degree-3 probes.
    pub deg3_order: [usize; 4],
    pub symbol_order: SymbolOrder,
}

/// Winner of [`convention_search`] against the checked-in listing. Every
/// convention with this sign reproduces the listing as a set; positions
/// agree for only 13 of 224 entries, since the listing's order inside a
/// probe follows none of the symbol orders tried here.
pub const FROZEN_CONVENTION: Convention = Convention {
    sign: DiffSign::AltMinusDirect,
    deg2_order: [1, 0, 2, 3],
    deg3_order: [2, 0, 1, 3],
    symbol_order: SymbolOrder::RightFirst,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConventionScore {
    pub set_matches: usize,
    pub positional: usize,
}

/// One probe: the word and the coefficients of (alternative − direct).
#[derive(Debug, Clone)]
pub struct ProbeResult {
    pub word: MixedWord,
    pub diff: FormalElement,
}

/// Coefficient ring and expansion rules for one variant.
#[derive(Debug, Clone)]
pub struct Expander {
    pub variant: ActionVariant,
    pub ring: PolyRing<Rationals>,
}

impl Expander {
    pub fn new(variant: ActionVariant) -> Self {
        let names: Vec<String> = if variant.collapsed() {
            vec!["la".into(), "mu".into()]
        } else {
            (1..=8).map(|i| format!("la{i}")).chain((1..=8).map(|i| format!("mu{i}"))).collect()
        };
        Expander {
            variant,
            ring: PolyRing::new(Rationals, &names),
        }
    }

    /// λₖ (k = 1..8), or λ for the collapsed variants.
    pub fn lambda(&self, k: usize) -> CoeffPoly<Rationals> {
        if self.variant.collapsed() {
            self.ring.var(0)
        } else {
            self.ring.var(k - 1)
        }
    }

    pub fn mu(&self, k: usize) -> CoeffPoly<Rationals> {
        if self.variant.collapsed() {
            self.ring.var(1)
        } else {
            self.ring.var(8 + k - 1)
        }
    }

    pub fn act(&self, i: u8, s: XBasisSymbol, side: Side) -> FormalElement {
        let mut out = FormalElement::default();
        if let Some((sign, t)) = act_signed(i, s, side, self.variant) {
            out.add_term(&self.ring, t, &self.ring.from_i64(sign));
        }
        out
    }

    fn act_all(&self, i: u8, e: &FormalElement, side: Side) -> FormalElement {
        let mut out = FormalElement::default();
        for (s, c) in &e.terms {
            if let Some((sign, t)) = act_signed(i, *s, side, self.variant) {
                let c = if sign < 0 { self.ring.neg(c) } else { c.clone() };
                out.add_term(&self.ring, t, &c);
            }
        }
        out
    }

    /// One rule application to `l·r`, splitting the left factor when
    /// `split_left` and the right one otherwise. The split factor must be a
    /// product.
    ///
    /// Two-sided: splitting the right factor uses z(xy) = Σλₖ·termₖ,
    /// splitting the left one (xy)z = Σμₖ·termₖ. Collapsed: x(yz) = λ(xy)z +
    /// μy(xz), using (yz)x = ±x(yz) when the left factor is split.
    pub fn rule(&self, l: &MixedWord, r: &MixedWord, split_left: bool) -> Vec<(CoeffPoly<Rationals>, MixedWord)> {
        let m = MixedWord::mul;
        let parts = |w: &MixedWord| match w {
            MixedWord::Mul(a, b) => ((**a).clone(), (**b).clone()),
            _ => panic!("rule splits a letter"),
        };
        if self.variant.collapsed() {
            let (x, (y, z), sign) = if split_left {
                let s = if self.variant == ActionVariant::Anticommutative { -1 } else { 1 };
                (r.clone(), parts(l), s)
            } else {
                (l.clone(), parts(r), 1)
            };
            let s = self.ring.from_i64(sign);
            return vec![
                (self.ring.mul(&s, &self.lambda(1)), m(&m(&x, &y), &z)),
                (self.ring.mul(&s, &self.mu(1)), m(&y, &m(&x, &z))),
            ];
        }
        let (coef, x, y, z): (fn(&Self, usize) -> CoeffPoly<Rationals>, _, _, _) = if split_left {
            let (x, y) = parts(l);
            (Self::mu, x, y, r.clone())
        } else {
            let (x, y) = parts(r);
            (Self::lambda, x, y, l.clone())
        };
        rule_terms(&x, &y, &z, MixedWord::mul)
            .into_iter()
            .enumerate()
            .map(|(k, w)| (coef(self, k + 1), w))
            .collect()
    }

    /// Rule applied once at the root of a product word. Two-sided splits
    /// the left factor when it is a product; collapsed prefers the right.
    fn root_rule(&self, w: &MixedWord) -> Vec<(CoeffPoly<Rationals>, MixedWord)> {
        let MixedWord::Mul(l, r) = w else {
            panic!("root rule on a letter")
        };
        let split_left = if self.variant.collapsed() {
            !matches!(**r, MixedWord::Mul(..))
        } else {
            matches!(**l, MixedWord::Mul(..))
        };
        self.rule(l, r, split_left)
    }

    /// Full expansion of a word with exactly one module letter.
    pub fn expand(&self, w: &MixedWord) -> Result<FormalElement, LambdaMuError> {
        let n = w.module_letters();
        if n != 1 {
            return Err(LambdaMuError::ModuleLetters(n));
        }
        self.expand_rec(w, 0)
    }

    fn expand_rec(&self, w: &MixedWord, depth: usize) -> Result<FormalElement, LambdaMuError> {
        let (l, r) = match w {
            MixedWord::X(s) => {
                let mut e = FormalElement::default();
                e.add_term(&self.ring, *s, &self.ring.one());
                return Ok(e);
            }
            MixedWord::B(_) => unreachable!("pure actor words are not expanded"),
            MixedWord::Mul(l, r) => (l, r),
        };
        if l.module_letters() > 0 {
            if let MixedWord::B(i) = **r {
                return Ok(self.act_all(i, &self.expand_rec(l, depth)?, Side::R));
            }
        } else if let MixedWord::B(i) = **l {
            return Ok(self.act_all(i, &self.expand_rec(r, depth)?, Side::L));
        }
        if depth >= RULE_CAP {
            return Err(LambdaMuError::RuleCap);
        }
        let mut out = FormalElement::default();
        // the pure-B side is the one without the module letter
        for (c, t) in self.rule(l, r, l.module_letters() == 0) {
            let e = self.expand_rec(&t, depth + 1)?;
            out.add_scaled(&self.ring, &e, &c);
        }
        Ok(out)
    }

    fn lincomb(&self, terms: &[(CoeffPoly<Rationals>, MixedWord)]) -> Result<FormalElement, LambdaMuError> {
        let mut out = FormalElement::default();
        for (c, t) in terms {
            out.add_scaled(&self.ring, &self.expand(t)?, c);
        }
        Ok(out)
    }

    fn difference(&self, alt: &FormalElement, direct: &FormalElement) -> FormalElement {
        let mut d = alt.clone();
        d.add_scaled(&self.ring, direct, &self.ring.from_i64(-1));
        d
    }

    /// Rule at the root of a degree-2 probe, minus its direct expansion.
    pub fn probe2(&self, p: &MixedWord) -> Result<ProbeResult, LambdaMuError> {
        let alt = self.lincomb(&self.root_rule(p))?;
        let direct = self.expand(p)?;
        Ok(ProbeResult {
            word: p.clone(),
            diff: self.difference(&alt, &direct),
        })
    }

    /// For a pure-B word `bw` and a wrapper putting x on one side: the
    /// rule applied inside `bw` first, minus the direct expansion.
    pub fn probe3(&self, bw: &MixedWord, x_on_right: bool) -> Result<ProbeResult, LambdaMuError> {
        let x = MixedWord::x();
        let wrap = |u: &MixedWord| {
            if x_on_right {
                MixedWord::mul(u, &x)
            } else {
                MixedWord::mul(&x, u)
            }
        };
        let inner: Vec<_> = self.root_rule(bw).into_iter().map(|(c, t)| (c, wrap(&t))).collect();
        let alt = self.lincomb(&inner)?;
        let direct = self.expand(&wrap(bw))?;
        Ok(ProbeResult {
            word: wrap(bw),
            diff: self.difference(&alt, &direct),
        })
    }

    /// Degree-2 probes (four two-sided, b1(b2x) otherwise) then the four
    /// degree-3 probes (two-sided only), in spec order.
    pub fn probes(&self) -> Result<(Vec<ProbeResult>, Vec<ProbeResult>), LambdaMuError> {
        let d2 = degree2_probes(self.variant)
            .iter()
            .map(|p| self.probe2(p))
            .collect::<Result<Vec<_>, _>>()?;
        let d3 = if self.variant.collapsed() {
            Vec::new()
        } else {
            degree3_probes()
                .iter()
                .map(|(bw, right)| self.probe3(bw, *right))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok((d2, d3))
    }

    /// The module X of this variant with one action table per actor.
    pub fn module(&self) -> (FinAlgebra<Rationals>, Vec<ActionTable<Rationals>>) {
        let syms = basis(self.variant);
        let labels: Vec<String> = syms.iter().map(|s| s.label(self.variant)).collect();
        let x = FinAlgebra::abelian(Rationals, labels);
        let pos: BTreeMap<XBasisSymbol, usize> = syms.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let acts = (1..=3u8)
            .map(|i| {
                let mut t = ActionTable::zero(&Rationals, vec![format!("b{i}")], x.dim());
                for (j, s) in syms.iter().enumerate() {
                    for (side, table) in [(Side::L, &mut t.left), (Side::R, &mut t.right)] {
                        if let Some((sign, img)) = act_signed(i, *s, side, self.variant) {
                            table[0][j][pos[&img]] = Rational::from_integer(sign.into());
                        }
                    }
                }
                t
            })
            .collect();
        (x, acts)
    }
}

/// (xb1)b2, (b1x)b2, b2(b1x), b2(xb1) two-sided; b1(b2x) collapsed.
pub fn degree2_probes(variant: ActionVariant) -> Vec<MixedWord> {
    let (x, b1, b2) = (MixedWord::x(), MixedWord::b(1), MixedWord::b(2));
    let m = MixedWord::mul;
    if variant.collapsed() {
        return vec![m(&b1, &m(&b2, &x))];
    }
    vec![
        m(&m(&x, &b1), &b2),
        m(&m(&b1, &x), &b2),
        m(&b2, &m(&b1, &x)),
        m(&b2, &m(&x, &b1)),
    ]
}

/// (b1(b2b3))x, x(b1(b2b3)), ((b1b2)b3)x, x((b1b2)b3) as (pure word, x on the right).
pub fn degree3_probes() -> Vec<(MixedWord, bool)> {
    let (b1, b2, b3) = (MixedWord::b(1), MixedWord::b(2), MixedWord::b(3));
    let m = MixedWord::mul;
    let first = m(&b1, &m(&b2, &b3));
    let second = m(&m(&b1, &b2), &b3);
    vec![(first.clone(), true), (first, false), (second.clone(), true), (second, false)]
}

fn emit(
    e: &Expander,
    res: &ProbeResult,
    sign: DiffSign,
    order: SymbolOrder,
) -> Vec<CoeffPoly<Rationals>> {
    let mut entries: Vec<(&XBasisSymbol, &CoeffPoly<Rationals>)> = res.diff.terms.iter().collect();
    entries.sort_by(|a, b| order.cmp(a.0, b.0));
    entries
        .into_iter()
        .map(|(_, c)| match sign {
            DiffSign::AltMinusDirect => c.clone(),
            DiffSign::DirectMinusAlt => e.ring.neg(c),
        })
        .collect()
}

fn assemble(
    e: &Expander,
    d2: &[ProbeResult],
    d3: &[ProbeResult],
    conv: &Convention,
) -> Vec<CoeffPoly<Rationals>> {
    let mut out = Vec::new();
    for &i in &conv.deg2_order {
        out.extend(emit(e, &d2[i], conv.sign, conv.symbol_order));
    }
    for &i in &conv.deg3_order {
        out.extend(emit(e, &d3[i], conv.sign, conv.symbol_order));
    }
    out
}

/// The obstruction system of a variant. Two-sided output follows
/// [`FROZEN_CONVENTION`]; collapsed variants emit (alternative − direct)
/// in canonical symbol order.
pub fn generate_system(variant: ActionVariant) -> Result<(Expander, Vec<CoeffPoly<Rationals>>), LambdaMuError> {
    let e = Expander::new(variant);
    let (d2, d3) = e.probes()?;
    let polys = if variant.collapsed() {
        d2.iter()
            .flat_map(|r| emit(&e, r, DiffSign::AltMinusDirect, SymbolOrder::Canonical))
            .collect()
    } else {
        assemble(&e, &d2, &d3, &FROZEN_CONVENTION)
    };
    Ok((e, polys))
}

fn all_orders4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let v = [a, b, c, d];
                    if (0..4).all(|i| v.contains(&i)) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// Tries every sign, probe order and symbol order, scoring each by
/// (set matches, positional matches) against `figure`. The first best
/// convention in enumeration order wins.
pub fn convention_search(figure: &[CoeffPoly<Rationals>]) -> Result<(Convention, ConventionScore), LambdaMuError> {
    let e = Expander::new(ActionVariant::TwoSided);
    let (d2, d3) = e.probes()?;
    let fig_set: HashSet<&CoeffPoly<Rationals>> = figure.iter().collect();
    let mut best: Option<(Convention, ConventionScore)> = None;
    for sign in [DiffSign::AltMinusDirect, DiffSign::DirectMinusAlt] {
        for symbol_order in SymbolOrder::ALL {
            // per-probe blocks are fixed for a given sign and symbol order
            let b2: Vec<_> = d2.iter().map(|r| emit(&e, r, sign, symbol_order)).collect();
            let b3: Vec<_> = d3.iter().map(|r| emit(&e, r, sign, symbol_order)).collect();
            let set_matches = b2
                .iter()
                .chain(&b3)
                .flatten()
                .collect::<HashSet<_>>()
                .iter()
                .filter(|p| fig_set.contains(**p))
                .count();
            for deg2_order in all_orders4() {
                for deg3_order in all_orders4() {
                    let seq = deg2_order.iter().map(|&i| &b2[i]).chain(deg3_order.iter().map(|&i| &b3[i]));
                    let positional = seq
                        .flatten()
                        .zip(figure)
                        .filter(|(a, b)| a == b)
                        .count();
                    let score = ConventionScore {
                        set_matches,
                        positional,
                    };
                    if best.as_ref().map_or(true, |(_, s)| score > *s) {
                        let conv = Convention {
                            sign,
                            deg2_order,
                            deg3_order,
                            symbol_order,
                        };
                        best = Some((conv, score));
                    }
                }
            }
        }
    }
    Ok(best.expect("search space is nonempty"))
}

/// The coefficient of (b1(b2b3))x expanded directly, minus the same word
/// after the rule is applied inside b1(b2b3), in the commutative variant
/// with λ, μ symbolic.
pub fn comm_degree3_symbolic() -> Result<(Expander, FormalElement), LambdaMuError> {
    let e = Expander::new(ActionVariant::Commutative);
    let (bw, right) = degree3_probes()[0].clone();
    let r = e.probe3(&bw, right)?;
    let neg = e.difference(&FormalElement::default(), &r.diff);
    Ok((e, neg))
}

/// [`comm_degree3_symbolic`] at λ = μ = −1 over ℚ.
pub fn comm_degree3_constraint() -> Result<BTreeMap<XBasisSymbol, Rational>, LambdaMuError> {
    let (e, sym) = comm_degree3_symbolic()?;
    let minus_one = -Rational::one();
    let point = [minus_one.clone(), minus_one];
    Ok(sym
        .terms
        .iter()
        .map(|(s, c)| (*s, e.ring.eval(c, &point)))
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// The same constraint with coefficients reduced mod p.
pub fn comm_degree3_constraint_mod(field: &PrimeField) -> Result<BTreeMap<XBasisSymbol, u64>, LambdaMuError> {
    Ok(comm_degree3_constraint()?
        .into_iter()
        .map(|(s, c)| (s, field.reduce_rational(&c).expect("integer coefficients")))
        .filter(|(_, c)| *c != 0)
        .collect())
}

/// Lex reduced basis (λ > μ) of a collapsed variant's system.
pub fn mini_basis(variant: ActionVariant) -> Result<(Expander, Vec<CoeffPoly<Rationals>>), LambdaMuError> {
    let (e, polys) = generate_system(variant)?;
    let lex = MonomialOrder::lex(e.ring.nvars());
    let b = reduce_basis(&e.ring, &polys, &lex)?;
    Ok((e, b))
}

fn unique_point(variant: ActionVariant) -> Result<(Rational, Rational), LambdaMuError> {
    let (e, b) = mini_basis(variant)?;
    match rational_points_2var(&e.ring, &b) {
        Some(pts) if pts.len() == 1 => Ok(pts[0].clone()),
        _ => Err(LambdaMuError::NoUniqueSolution),
    }
}

/// Unique rational (λ, μ) of the anticommutative system.
pub fn solve_anticomm() -> Result<(Rational, Rational), LambdaMuError> {
    unique_point(ActionVariant::Anticommutative)
}

/// Unique rational (λ, μ) of the commutative system.
pub fn solve_commutative() -> Result<(Rational, Rational), LambdaMuError> {
    unique_point(ActionVariant::Commutative)
}

/// x(yz) = λ(xy)z + μy(xz) at the given point, as an identity over ℚ.
pub fn bound_short_rule(la: &Rational, mu: &Rational) -> Identity<Rationals> {
    short_rule(Rationals, la.clone(), mu.clone())
}

/// Generic field version of [`bound_short_rule`].
pub fn bound_short_rule_in<F: Field>(field: F, la: F::Elem, mu: F::Elem) -> Identity<F> {
    short_rule(field, la, mu)
}

/// One polynomial per line in the ring's own notation.
pub fn to_native_text(ring: &PolyRing<Rationals>, polys: &[CoeffPoly<Rationals>]) -> String {
    let order = MonomialOrder::degrevlex(ring.nvars());
    let mut s = format!("vars {}\n", ring.vars().join(" "));
    for p in polys {
        s.push_str(&ring.format(p, &order));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests;
