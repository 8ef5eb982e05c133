//! Buchberger completion over a coefficient domain with exact division
//! bookkeeping.
//!
//! Polynomials live as term vectors sorted by the working order, with
//! variables pre-arranged by precedence so comparisons never permute. Every
//! polynomial the algorithm creates is a node of a derivation DAG:
//! `den · node = Σ part_j · node_j` over earlier nodes, with inputs as leaves.
//! Cofactors with respect to the inputs are only expanded on request, and only
//! for the nodes a requested result depends on.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::exactnum::{BigInt, Field, Integers, PrimeField, Rationals, Ring};

use super::monomial::{Exps, OrderKind};

/// Coefficient domain the engine can run over: a field (monic normalization)
/// or ℤ (primitive normalization, fraction-free reduction).
pub trait GbCoeff: Ring {
    /// `(a, b)` with `a·x = b·y`.
    fn cancel(&self, x: &Self::Elem, y: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// The factor that normalizes a polynomial with these coefficients; `lc`
    /// is the leading one.
    fn content<'a, I>(&self, coeffs: I, lc: &Self::Elem) -> Self::Elem
    where
        I: Iterator<Item = &'a Self::Elem>,
        Self::Elem: 'a;
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Non-negative gcd for ℤ; for fields any nonzero pair has gcd 1.
    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_field(&self) -> bool;
}

impl GbCoeff for Integers {
    fn cancel(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        let d = x.gcd(y);
        let (mut a, mut b) = (y / &d, x / &d);
        if a.is_negative() {
            a = -a;
            b = -b;
        }
        (a, b)
    }

    fn content<'a, I>(&self, coeffs: I, lc: &BigInt) -> BigInt
    where
        I: Iterator<Item = &'a BigInt>,
    {
        let mut g = BigInt::zero();
        for c in coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if lc.is_negative() {
            -g
        } else {
            g
        }
    }

    fn div_exact(&self, a: &BigInt, b: &BigInt) -> BigInt {
        debug_assert!((a % b).is_zero());
        a / b
    }

    fn gcd(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a.gcd(b)
    }

    fn is_field(&self) -> bool {
        false
    }
}

macro_rules! field_gb_coeff {
    ($t:ty) => {
        impl GbCoeff for $t {
            fn cancel(&self, x: &Self::Elem, y: &Self::Elem) -> (Self::Elem, Self::Elem) {
                (self.one(), self.div(x, y).expect("nonzero leading coefficient"))
            }

            fn content<'a, I>(&self, _coeffs: I, lc: &Self::Elem) -> Self::Elem
            where
                I: Iterator<Item = &'a Self::Elem>,
            {
                lc.clone()
            }

            fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
                self.div(a, b).expect("division by nonzero")
            }

            fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
                if self.is_zero(a) && self.is_zero(b) {
                    self.zero()
                } else {
                    self.one()
                }
            }

            fn is_field(&self) -> bool {
                true
            }
        }
    };
}

field_gb_coeff!(PrimeField);
field_gb_coeff!(Rationals);

/// Monomial with variables in precedence order and cached degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EMono {
    pub(crate) e: Exps,
    pub(crate) deg: u32,
}

impl EMono {
    pub fn new(e: Exps) -> Self {
        let deg = e.iter().map(|&x| x as u32).sum();
        EMono { e, deg }
    }

    pub fn one(n: usize) -> Self {
        EMono {
            e: Exps::from_elem(0, n),
            deg: 0,
        }
    }

    pub fn mul(&self, o: &EMono) -> EMono {
        EMono {
            e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect(),
            deg: self.deg + o.deg,
        }
    }

    pub fn divides(&self, o: &EMono) -> bool {
        self.deg <= o.deg && self.e.iter().zip(&o.e).all(|(a, b)| a <= b)
    }

    /// `o / self`; caller checked divisibility.
    pub fn cofactor_in(&self, o: &EMono) -> EMono {
        EMono {
            e: self.e.iter().zip(&o.e).map(|(a, b)| b - a).collect(),
            deg: o.deg - self.deg,
        }
    }

    pub fn lcm(&self, o: &EMono) -> EMono {
        EMono::new(self.e.iter().zip(&o.e).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, o: &EMono) -> bool {
        self.e.iter().zip(&o.e).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Bit signature: `mask(a) & !mask(b) != 0` proves `a ∤ b`.
    pub fn mask(&self) -> u64 {
        let n = self.e.len();
        let per = if n <= 16 {
            4
        } else if n <= 32 {
            2
        } else {
            1
        };
        let mut m = 0u64;
        for (i, &x) in self.e.iter().enumerate().take(64 / per) {
            for k in 0..per {
                if x as usize > k {
                    m |= 1 << (i * per + k);
                }
            }
        }
        m
    }
}

pub type Terms<E> = Vec<(EMono, E)>;

#[derive(Clone, Debug)]
pub enum Lin<E> {
    /// `den · node = scale · input[index]`.
    Input { index: usize, den: E, scale: E },
    /// `den · node = Σ part.1 · node[part.0]`.
    Combo { den: E, parts: Vec<(usize, Terms<E>)> },
}

#[derive(Clone, Debug)]
pub struct Node<E> {
    pub poly: Terms<E>,
    pub lin: Option<Lin<E>>,
}

#[derive(Clone)]
/// `p ↦ (a·p − b·t·g_node) / c`.
struct Step<E> {
    a: E,
    b: E,
    t: EMono,
    node: usize,
    c: E,
}

#[derive(Clone)]
pub(crate) struct Reducer {
    lm: EMono,
    mask: u64,
    node: usize,
    len: usize,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: EMono,
    seq: u64,
}

/// S-pairs reduced against one snapshot of the basis. Fixed so that results
/// do not depend on the thread count.
const BATCH: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct GbConfig {
    pub threads: usize,
    pub track: bool,
    pub stop_on_unit: bool,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            threads: 1,
            track: false,
            stop_on_unit: true,
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct GbStats {
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub basis_insertions: usize,
    pub product_criterion: usize,
    pub chain_criterion: usize,
}

pub struct GbRun<E> {
    pub nodes: Vec<Node<E>>,
    /// Reduced basis, ascending leading monomials.
    pub basis: Vec<usize>,
    pub stats: GbStats,
}

pub struct Engine<C: GbCoeff> {
    pub ring: C,
    pub kind: OrderKind,
    pub nvars: usize,
}

/// Cofactors of a node over the inputs: `den · node = Σ cofs[i] · input[i]`.
#[derive(Clone, Debug)]
pub struct LiftVec<E> {
    pub den: E,
    pub cofs: Vec<Terms<E>>,
}

impl<C: GbCoeff> Engine<C> {
    pub fn new(ring: C, kind: OrderKind, nvars: usize) -> Self {
        Engine { ring, kind, nvars }
    }

    #[inline]
    pub fn cmp(&self, a: &EMono, b: &EMono) -> Ordering {
        self.kind.cmp_ranked(&a.e, &b.e, a.deg, b.deg)
    }

    pub fn sort_terms(&self, t: &mut Terms<C::Elem>) {
        t.sort_by(|x, y| self.cmp(&y.0, &x.0));
    }

    /// Builds a sorted term vector, combining duplicates.
    pub fn collect_terms(&self, map: HashMap<EMono, C::Elem>) -> Terms<C::Elem> {
        let mut t: Terms<C::Elem> = map
            .into_iter()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .collect();
        self.sort_terms(&mut t);
        t
    }

    fn scale_terms(&self, p: &[(EMono, C::Elem)], c: &C::Elem) -> Terms<C::Elem> {
        if self.ring.is_one(c) {
            return p.to_vec();
        }
        p.iter()
            .map(|(m, x)| (m.clone(), self.ring.mul(x, c)))
            .filter(|(_, x)| !self.ring.is_zero(x))
            .collect()
    }

    fn mul_term(&self, p: &[(EMono, C::Elem)], t: &EMono, c: &C::Elem) -> Terms<C::Elem> {
        p.iter()
            .map(|(m, x)| (m.mul(t), self.ring.mul(x, c)))
            .filter(|(_, x)| !self.ring.is_zero(x))
            .collect()
    }

    /// `a·p − b·t·g`, where every term of `t·g` is at most `p[from]`; the
    /// prefix `p[..from]` is only scaled.
    fn sub_mul(
        &self,
        p: &[(EMono, C::Elem)],
        from: usize,
        a: &C::Elem,
        b: &C::Elem,
        t: &EMono,
        g: &[(EMono, C::Elem)],
    ) -> Terms<C::Elem> {
        let r = &self.ring;
        let a_one = r.is_one(a);
        let nb = r.neg(b);
        let mut out: Terms<C::Elem> = Vec::with_capacity(p.len() + g.len());
        for (m, c) in &p[..from] {
            out.push((m.clone(), if a_one { c.clone() } else { r.mul(c, a) }));
        }
        let (mut i, mut j) = (from, 0);
        while i < p.len() || j < g.len() {
            if j == g.len() {
                let (m, c) = &p[i];
                out.push((m.clone(), if a_one { c.clone() } else { r.mul(c, a) }));
                i += 1;
                continue;
            }
            let gm = g[j].0.mul(t);
            if i == p.len() {
                out.push((gm, r.mul(&g[j].1, &nb)));
                j += 1;
                continue;
            }
            match self.cmp(&p[i].0, &gm) {
                Ordering::Greater => {
                    let (m, c) = &p[i];
                    out.push((m.clone(), if a_one { c.clone() } else { r.mul(c, a) }));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm, r.mul(&g[j].1, &nb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let lhs = if a_one { p[i].1.clone() } else { r.mul(&p[i].1, a) };
                    let s = r.add(&lhs, &r.mul(&g[j].1, &nb));
                    if !r.is_zero(&s) {
                        out.push((gm, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    fn find_reducer<'a>(&self, m: &EMono, reducers: &'a [Reducer]) -> Option<&'a Reducer> {
        let mask = m.mask();
        let mut best: Option<&Reducer> = None;
        for r in reducers {
            if r.mask & !mask != 0 || !r.lm.divides(m) {
                continue;
            }
            if best.is_none_or(|b| r.len < b.len) {
                best = Some(r);
            }
        }
        best
    }

    /// Reduces `p` by `reducers`; with `full` every term is reduced,
    /// otherwise only the leading one.
    fn reduce(
        &self,
        mut p: Terms<C::Elem>,
        nodes: &[Node<C::Elem>],
        reducers: &[Reducer],
        full: bool,
        steps: &mut Vec<Step<C::Elem>>,
    ) -> Terms<C::Elem> {
        let mut pos = 0;
        while pos < p.len() {
            let Some(red) = self.find_reducer(&p[pos].0, reducers) else {
                if !full {
                    break;
                }
                pos += 1;
                continue;
            };
            let g = &nodes[red.node].poly;
            let t = red.lm.cofactor_in(&p[pos].0);
            let (a, b) = self.ring.cancel(&p[pos].1, &g[0].1);
            let mut next = self.sub_mul(&p, pos, &a, &b, &t, g);
            let c = if self.ring.is_field() || next.is_empty() {
                self.ring.one()
            } else {
                let one = self.ring.one();
                let c = self.ring.content(next.iter().map(|(_, c)| c), &one);
                if !self.ring.is_one(&c) {
                    for (_, x) in next.iter_mut() {
                        *x = self.ring.div_exact(x, &c);
                    }
                }
                c
            };
            steps.push(Step {
                a,
                b,
                t,
                node: red.node,
                c,
            });
            p = next;
        }
        p
    }

    /// Relation after applying `steps` to a polynomial with relation
    /// `den0·p₀ = Σ parts0`. With `A = Π a_s`, `C = Π c_s`:
    /// `C·pₙ = A·p₀ − Σ_s b_s·Π_{r>s} a_r·Π_{r<s} c_r·t_s·g_s`.
    fn compose(
        &self,
        den0: C::Elem,
        parts0: Vec<(usize, Terms<C::Elem>)>,
        steps: &[Step<C::Elem>],
    ) -> (C::Elem, Vec<(usize, Terms<C::Elem>)>) {
        let r = &self.ring;
        let mut prefix_c = Vec::with_capacity(steps.len() + 1);
        let mut acc = r.one();
        for s in steps {
            prefix_c.push(acc.clone());
            if !r.is_one(&s.c) {
                acc = r.mul(&acc, &s.c);
            }
        }
        let total_c = acc;
        let mut suffix = r.one();
        let mut contrib: HashMap<usize, HashMap<EMono, C::Elem>> = HashMap::new();
        for (s, pc) in steps.iter().zip(&prefix_c).rev() {
            let w = r.neg(&r.mul(&r.mul(&r.mul(&s.b, &suffix), pc), &den0));
            let e = contrib.entry(s.node).or_default();
            match e.get_mut(&s.t) {
                Some(c) => *c = r.add(c, &w),
                None => {
                    e.insert(s.t.clone(), w);
                }
            }
            if !r.is_one(&s.a) {
                suffix = r.mul(&suffix, &s.a);
            }
        }
        let mut merged: HashMap<usize, HashMap<EMono, C::Elem>> = HashMap::new();
        for (node, terms) in parts0 {
            let e = merged.entry(node).or_default();
            for (m, c) in terms {
                let c = r.mul(&c, &suffix);
                match e.get_mut(&m) {
                    Some(x) => *x = r.add(x, &c),
                    None => {
                        e.insert(m, c);
                    }
                }
            }
        }
        for (node, terms) in contrib {
            let e = merged.entry(node).or_default();
            for (m, c) in terms {
                match e.get_mut(&m) {
                    Some(x) => *x = r.add(x, &c),
                    None => {
                        e.insert(m, c);
                    }
                }
            }
        }
        let mut parts: Vec<(usize, Terms<C::Elem>)> = merged
            .into_iter()
            .map(|(n, m)| (n, self.collect_terms(m)))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        parts.sort_by_key(|(n, _)| *n);
        (r.mul(&den0, &total_c), parts)
    }

    /// Divides `den` and every coefficient by their common factor.
    fn simplify_parts(&self, den: &mut C::Elem, parts: &mut [(usize, Terms<C::Elem>)]) {
        let r = &self.ring;
        if r.is_field() {
            if !r.is_one(den) {
                let inv = r.div_exact(&r.one(), den);
                for (_, t) in parts.iter_mut() {
                    for (_, c) in t.iter_mut() {
                        *c = r.mul(c, &inv);
                    }
                }
                *den = r.one();
            }
            return;
        }
        let mut g = den.clone();
        'outer: for (_, t) in parts.iter() {
            for (_, c) in t {
                g = r.gcd(&g, c);
                if r.is_one(&g) {
                    break 'outer;
                }
            }
        }
        if r.is_negative(den) {
            g = r.neg(&g);
        }
        if !r.is_one(&g) && !r.is_zero(&g) {
            *den = r.div_exact(den, &g);
            for (_, t) in parts.iter_mut() {
                for (_, c) in t.iter_mut() {
                    *c = r.div_exact(c, &g);
                }
            }
        }
    }

    /// Makes `p` normalized, returning the removed factor.
    fn normalize(&self, p: &mut Terms<C::Elem>) -> C::Elem {
        let c = self.ring.content(p.iter().map(|(_, c)| c), &p[0].1);
        if !self.ring.is_one(&c) {
            for (_, x) in p.iter_mut() {
                *x = self.ring.div_exact(x, &c);
            }
        }
        c
    }

    fn spoly(
        &self,
        nodes: &[Node<C::Elem>],
        pair: &Pair,
        track: bool,
    ) -> (Terms<C::Elem>, Option<Vec<(usize, Terms<C::Elem>)>>) {
        let gi = &nodes[pair.i].poly;
        let gj = &nodes[pair.j].poly;
        let ti = gi[0].0.cofactor_in(&pair.lcm);
        let tj = gj[0].0.cofactor_in(&pair.lcm);
        let (a, b) = self.ring.cancel(&gi[0].1, &gj[0].1);
        let pi = self.mul_term(gi, &ti, &a);
        let s = self.sub_mul(&pi, 0, &self.ring.one(), &b, &tj, gj);
        let parts = track.then(|| {
            let mut v = vec![
                (pair.i, vec![(ti, a)]),
                (pair.j, vec![(tj, self.ring.neg(&b))]),
            ];
            v.sort_by_key(|(n, _)| *n);
            v
        });
        (s, parts)
    }

    /// Runs Buchberger's algorithm on normalized, nonzero inputs. Each input
    /// node carries its `Lin::Input` relation.
    pub fn run(&self, inputs: Vec<Node<C::Elem>>, cfg: GbConfig) -> GbRun<C::Elem> {
        let mut nodes: Vec<Node<C::Elem>> = Vec::new();
        let mut stats = GbStats::default();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut seq = 0u64;
        let mut unit: Option<usize> = None;

        for node in inputs {
            debug_assert!(!node.poly.is_empty());
            let id = nodes.len();
            let is_unit = node.poly[0].0.is_one();
            nodes.push(node);
            if is_unit {
                unit = Some(id);
                break;
            }
            self.update(&nodes, &mut active, &mut pairs, id, &mut seq, &mut stats);
        }

        let pool = (cfg.threads > 1).then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .expect("thread pool")
        });

        while unit.is_none() && !pairs.is_empty() {
            let dmin = pairs.iter().map(|p| p.lcm.deg).min().unwrap();
            let (mut batch, mut rest): (Vec<Pair>, Vec<Pair>) =
                pairs.drain(..).partition(|p| p.lcm.deg == dmin);
            batch.sort_by(|x, y| self.cmp(&x.lcm, &y.lcm).then(x.seq.cmp(&y.seq)));
            if batch.len() > BATCH {
                rest.extend(batch.drain(BATCH..));
            }
            pairs = rest;

            let reducers = self.reducers(&nodes, &active);
            let work = |pair: &Pair| {
                let (s, parts) = self.spoly(&nodes, pair, cfg.track);
                let mut steps = Vec::new();
                let rem = self.reduce(s, &nodes, &reducers, true, &mut steps);
                let lin = parts.map(|p| self.compose(self.ring.one(), p, &steps));
                (rem, lin)
            };
            let results: Vec<_> = match &pool {
                Some(pool) => pool.install(|| batch.par_iter().map(work).collect()),
                None => batch.iter().map(work).collect(),
            };
            stats.pairs_reduced += batch.len();

            for (rem, lin) in results {
                if rem.is_empty() {
                    stats.zero_reductions += 1;
                    continue;
                }
                // elements added earlier in this round may still divide terms
                let reducers = self.reducers(&nodes, &active);
                let mut steps = Vec::new();
                let mut rem = self.reduce(rem, &nodes, &reducers, true, &mut steps);
                if rem.is_empty() {
                    stats.zero_reductions += 1;
                    continue;
                }
                let c = self.normalize(&mut rem);
                let lin = lin.map(|(den, parts)| {
                    let (den, mut parts) = self.compose(den, parts, &steps);
                    let mut den = self.ring.mul(&den, &c);
                    self.simplify_parts(&mut den, &mut parts);
                    Lin::Combo { den, parts }
                });
                let id = nodes.len();
                let is_unit = rem[0].0.is_one();
                nodes.push(Node { poly: rem, lin });
                stats.basis_insertions += 1;
                if is_unit && cfg.stop_on_unit {
                    unit = Some(id);
                    break;
                }
                self.update(&nodes, &mut active, &mut pairs, id, &mut seq, &mut stats);
            }
        }

        if let Some(u) = unit {
            return GbRun {
                nodes,
                basis: vec![u],
                stats,
            };
        }
        let basis = self.interreduce(&mut nodes, &active, cfg.track);
        GbRun {
            nodes,
            basis,
            stats,
        }
    }

    fn reducers(&self, nodes: &[Node<C::Elem>], active: &[usize]) -> Vec<Reducer> {
        active
            .iter()
            .map(|&n| {
                let lm = nodes[n].poly[0].0.clone();
                Reducer {
                    mask: lm.mask(),
                    lm,
                    node: n,
                    len: nodes[n].poly.len(),
                }
            })
            .collect()
    }

    /// Gebauer–Möller installation of a new basis element.
    fn update(
        &self,
        nodes: &[Node<C::Elem>],
        active: &mut Vec<usize>,
        pairs: &mut Vec<Pair>,
        h: usize,
        seq: &mut u64,
        stats: &mut GbStats,
    ) {
        let lm_h = &nodes[h].poly[0].0;
        let cands: Vec<(usize, EMono, bool)> = active
            .iter()
            .map(|&g| {
                let lm_g = &nodes[g].poly[0].0;
                (g, lm_h.lcm(lm_g), lm_h.coprime(lm_g))
            })
            .collect();
        let mut kept: Vec<usize> = Vec::new();
        for idx in 0..cands.len() {
            let (_, l1, cop) = &cands[idx];
            if *cop {
                kept.push(idx);
                continue;
            }
            let dominated = cands[idx + 1..].iter().any(|c| c.1.divides(l1))
                || kept.iter().any(|&k| cands[k].1.divides(l1));
            if dominated {
                stats.chain_criterion += 1;
            } else {
                kept.push(idx);
            }
        }
        pairs.retain(|p| {
            let drop = lm_h.divides(&p.lcm)
                && lm_h.lcm(&nodes[p.i].poly[0].0) != p.lcm
                && lm_h.lcm(&nodes[p.j].poly[0].0) != p.lcm;
            if drop {
                stats.chain_criterion += 1;
            }
            !drop
        });
        for idx in kept {
            let (g, lcm, cop) = &cands[idx];
            if *cop {
                stats.product_criterion += 1;
                continue;
            }
            pairs.push(Pair {
                i: *g,
                j: h,
                lcm: lcm.clone(),
                seq: *seq,
            });
            *seq += 1;
        }
        active.retain(|&g| !lm_h.divides(&nodes[g].poly[0].0));
        active.push(h);
    }

    /// Tail-reduces each element of a minimal basis by the others and
    /// normalizes it. Returns node ids sorted by ascending leading monomial.
    fn interreduce(&self, nodes: &mut Vec<Node<C::Elem>>, active: &[usize], track: bool) -> Vec<usize> {
        // inputs are installed unreduced, so a leading monomial may still be
        // a multiple of another; such elements are redundant
        let lead = |g: usize| &nodes[g].poly[0].0;
        let minimal: Vec<usize> = active
            .iter()
            .enumerate()
            .filter(|&(i, &g)| {
                !active.iter().enumerate().any(|(j, &o)| {
                    j != i && lead(o).divides(lead(g)) && (lead(o) != lead(g) || j < i)
                })
            })
            .map(|(_, &g)| g)
            .collect();
        let reducers_all = self.reducers(nodes, &minimal);
        let mut out = Vec::new();
        for &g in &minimal {
            let others: Vec<Reducer> = reducers_all.iter().filter(|r| r.node != g).cloned().collect();
            let mut steps = Vec::new();
            let mut p = self.reduce(nodes[g].poly.clone(), nodes, &others, true, &mut steps);
            if steps.is_empty() {
                // already normalized when inserted
                out.push(g);
                continue;
            }
            let c = self.normalize(&mut p);
            let lin = track.then(|| {
                let parts0 = vec![(g, vec![(EMono::one(self.nvars), self.ring.one())])];
                let (den, mut parts) = self.compose(self.ring.one(), parts0, &steps);
                let mut den = self.ring.mul(&den, &c);
                self.simplify_parts(&mut den, &mut parts);
                Lin::Combo { den, parts }
            });
            out.push(nodes.len());
            nodes.push(Node { poly: p, lin });
        }
        out.sort_by(|&a, &b| self.cmp(&nodes[a].poly[0].0, &nodes[b].poly[0].0));
        out
    }

    /// Plain division of `f` by `divisors` (already normalized or not), with
    /// quotients. Field coefficients only: `f = Σ qᵢ·gᵢ + r`.
    pub fn divide(
        &self,
        f: Terms<C::Elem>,
        divisors: &[Terms<C::Elem>],
    ) -> (Terms<C::Elem>, Vec<Terms<C::Elem>>) {
        assert!(self.ring.is_field());
        let nodes: Vec<Node<C::Elem>> = divisors
            .iter()
            .map(|d| Node {
                poly: d.clone(),
                lin: None,
            })
            .collect();
        // first divisor with a dividing leading monomial, classical order
        let reducers: Vec<Reducer> = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.poly.is_empty())
            .map(|(i, n)| Reducer {
                lm: n.poly[0].0.clone(),
                mask: n.poly[0].0.mask(),
                node: i,
                len: 0,
            })
            .collect();
        let mut steps = Vec::new();
        let rem = self.reduce(f, &nodes, &reducers, true, &mut steps);
        let mut q: Vec<HashMap<EMono, C::Elem>> = vec![HashMap::new(); divisors.len()];
        for s in steps {
            let e = q[s.node].entry(s.t).or_insert_with(|| self.ring.zero());
            *e = self.ring.add(e, &s.b);
        }
        (rem, q.into_iter().map(|m| self.collect_terms(m)).collect())
    }

    /// Expands a node's derivation into cofactors over the inputs.
    pub fn lift(&self, nodes: &[Node<C::Elem>], target: usize, n_inputs: usize) -> LiftVec<C::Elem> {
        let r = &self.ring;
        // dependency closure and use counts
        let mut needed = vec![false; target + 1];
        let mut uses = vec![0usize; target + 1];
        needed[target] = true;
        for k in (0..=target).rev() {
            if !needed[k] {
                continue;
            }
            if let Some(Lin::Combo { parts, .. }) = &nodes[k].lin {
                for (j, _) in parts {
                    needed[*j] = true;
                    uses[*j] += 1;
                }
            }
        }
        let mut memo: HashMap<usize, LiftVec<C::Elem>> = HashMap::new();
        for k in 0..=target {
            if !needed[k] {
                continue;
            }
            let lv = match nodes[k].lin.as_ref().expect("derivation tracked") {
                Lin::Input { index, den, scale } => {
                    let mut cofs = vec![Vec::new(); n_inputs];
                    cofs[*index] = vec![(EMono::one(self.nvars), scale.clone())];
                    LiftVec {
                        den: den.clone(),
                        cofs,
                    }
                }
                Lin::Combo { den, parts } => {
                    let mut l = r.one();
                    for (j, _) in parts {
                        let dj = &memo[j].den;
                        let g = r.gcd(&l, dj);
                        l = r.mul(&l, &r.div_exact(dj, &g));
                    }
                    let mut acc: Vec<HashMap<EMono, C::Elem>> = vec![HashMap::new(); n_inputs];
                    for (j, pj) in parts {
                        let child = &memo[j];
                        let f = r.div_exact(&l, &child.den);
                        let pj = self.scale_terms(pj, &f);
                        for (i, ci) in child.cofs.iter().enumerate() {
                            if ci.is_empty() {
                                continue;
                            }
                            let a = &mut acc[i];
                            for (mp, cp) in &pj {
                                for (mc, cc) in ci {
                                    let m = mp.mul(mc);
                                    let v = r.mul(cp, cc);
                                    match a.get_mut(&m) {
                                        Some(x) => *x = r.add(x, &v),
                                        None => {
                                            a.insert(m, v);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    let mut parts_out: Vec<(usize, Terms<C::Elem>)> = acc
                        .into_iter()
                        .enumerate()
                        .map(|(i, m)| (i, self.collect_terms(m)))
                        .collect();
                    let mut den = r.mul(&l, den);
                    self.simplify_parts(&mut den, &mut parts_out);
                    LiftVec {
                        den,
                        cofs: parts_out.into_iter().map(|(_, t)| t).collect(),
                    }
                }
            };
            if let Some(Lin::Combo { parts, .. }) = &nodes[k].lin {
                for (j, _) in parts {
                    uses[*j] -= 1;
                    if uses[*j] == 0 {
                        memo.remove(j);
                    }
                }
            }
            memo.insert(k, lv);
        }
        memo.remove(&target).unwrap()
    }
}
