//! Degree-bounded Nullstellensatz certificates.
//!
//! The rows `t·fᵢ` with `deg(t·fᵢ) ≤ D` form a sparse matrix over the
//! monomials of degree `≤ D`. Elimination modulo a prime records the
//! factorization `A_R = L·E` of the independent rows; once the constant
//! monomial becomes a pivot, a transposed triangular solve gives cofactors
//! modulo `p`, and Dixon's p-adic lifting turns them into rational ones.
//! Nothing here is trusted: callers verify the resulting certificate exactly.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::{is_prime_u64, BigInt, Field, PrimeField, Rational, Rationals, Ring};

use super::engine::{EMono, Terms};
use super::monomial::{Exps, OrderKind};
use super::{CoeffPoly, MonomialOrder, PolyRing};

const NONE: u32 = u32::MAX;

/// Macaulay matrix: `rows[k] = mults[k] · polys[gens[k]]`.
pub(crate) struct Macaulay {
    pub ncols: usize,
    pub gens: Vec<usize>,
    pub mults: Vec<EMono>,
    pub entries: Vec<Vec<(u32, i64)>>,
}

/// All monomials in `n` variables of degree `≤ d`.
fn monomials_upto(n: usize, d: u32) -> Vec<EMono> {
    let mut out = vec![EMono::one(n)];
    let mut frontier = out.clone();
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &frontier {
            let last = m.e.iter().rposition(|&e| e > 0).unwrap_or(0);
            for v in last..n {
                let mut e: Exps = m.e.clone();
                e[v] += 1;
                next.push(EMono::new(e));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Number of monomials of degree `≤ d` in `n` variables, saturating.
pub(crate) fn count_monomials(n: usize, d: u32) -> u128 {
    // C(n + d, min(n, d))
    let k = (n as u128).min(d as u128);
    let top = n as u128 + d as u128;
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c.saturating_mul(top + 1 - i) / i;
    }
    c
}

impl Macaulay {
    /// Rows ordered by generator, then multiplier ascending.
    pub fn build(kind: OrderKind, nvars: usize, polys: &[Terms<i64>], d: u32) -> Macaulay {
        let cmp = |a: &EMono, b: &EMono| kind.cmp_ranked(&a.e, &b.e, a.deg, b.deg);
        let mut cols = monomials_upto(nvars, d);
        cols.sort_by(|a, b| cmp(b, a));
        let index: HashMap<&Exps, u32> = cols.iter().enumerate().map(|(i, m)| (&m.e, i as u32)).collect();
        let mut gens = Vec::new();
        let mut mults = Vec::new();
        let mut entries = Vec::new();
        let mut by_degree: HashMap<u32, Vec<EMono>> = HashMap::new();
        for (g, f) in polys.iter().enumerate() {
            let Some(df) = f.iter().map(|(m, _)| m.deg).max() else {
                continue;
            };
            if df > d {
                continue;
            }
            let ts = by_degree.entry(d - df).or_insert_with(|| {
                let mut v = monomials_upto(nvars, d - df);
                v.sort_by(cmp);
                v
            });
            for t in ts.iter() {
                let mut row: Vec<(u32, i64)> = f.iter().map(|(m, c)| (index[&m.mul(t).e], *c)).collect();
                row.sort_unstable_by_key(|e| e.0);
                gens.push(g);
                mults.push(t.clone());
                entries.push(row);
            }
        }
        Macaulay {
            ncols: cols.len(),
            gens,
            mults,
            entries,
        }
    }
}

struct EchRow {
    src: u32,
    /// Leading coefficient removed by normalization.
    s: u64,
    /// Normalized row, leading entry 1 first.
    e: Vec<(u32, u64)>,
    /// `(j, v)`: `v·E_j` was subtracted while reducing.
    l: Vec<(u32, u64)>,
}

/// Echelon form modulo `p` of the rows up to the one producing a unit.
pub(crate) struct Elimination {
    p: u64,
    rows: Vec<EchRow>,
    piv_of_col: Vec<u32>,
    pub unit: Option<usize>,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    if p == 2 {
        return 1;
    }
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

impl Elimination {
    pub fn run(m: &Macaulay, p: u64) -> Elimination {
        // residues below 2³¹ keep `x + a·b` inside u64
        assert!(p < 1 << 31);
        let n = m.ncols;
        let unit_col = (n - 1) as u32;
        let mut buf = vec![0u64; n];
        let mut piv_of_col = vec![NONE; n];
        let mut rows: Vec<EchRow> = Vec::new();
        let mut unit = None;
        for (src, row) in m.entries.iter().enumerate() {
            let mut first = n;
            for &(c, v) in row {
                buf[c as usize] = v.rem_euclid(p as i64) as u64;
                first = first.min(c as usize);
            }
            let mut l = Vec::new();
            let mut lead = None;
            for c in first..n {
                let v = buf[c];
                if v == 0 {
                    continue;
                }
                let j = piv_of_col[c];
                if j != NONE {
                    let neg = p - v;
                    for &(cc, ev) in &rows[j as usize].e {
                        let x = &mut buf[cc as usize];
                        *x = (*x + neg * ev) % p;
                    }
                    l.push((j, v));
                } else if lead.is_none() {
                    lead = Some(c);
                }
            }
            let Some(lead) = lead else {
                continue;
            };
            let s = buf[lead];
            let inv = inv_mod(s, p);
            let mut e = Vec::new();
            for (c, x) in buf.iter_mut().enumerate().skip(lead) {
                if *x != 0 {
                    e.push((c as u32, mul_mod(*x, inv, p)));
                    *x = 0;
                }
            }
            let k = rows.len() as u32;
            piv_of_col[lead] = k;
            rows.push(EchRow {
                src: src as u32,
                s,
                e,
                l,
            });
            if lead as u32 == unit_col {
                unit = Some(k as usize);
                break;
            }
        }
        Elimination {
            p,
            rows,
            piv_of_col,
            unit,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Source row of echelon row `k`.
    pub fn source(&self, k: usize) -> usize {
        self.rows[k].src as usize
    }

    /// Solves `yᵀ·A_R = bᵀ` on the pivot columns; `b` and `y` are indexed by
    /// echelon row.
    pub fn solve_transposed(&self, b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let r = self.rows.len();
        let mut acc: Vec<u64> = b.to_vec();
        // wᵀ·E = bᵀ, forward over pivot columns
        for k in 0..r {
            let wk = acc[k];
            if wk == 0 {
                continue;
            }
            let neg = p - wk;
            for &(c, v) in &self.rows[k].e[1..] {
                let j = self.piv_of_col[c as usize];
                if j != NONE && (j as usize) < r {
                    let x = &mut acc[j as usize];
                    *x = (*x + neg * v) % p;
                }
            }
        }
        // yᵀ·L = wᵀ, backward
        let mut y = vec![0u64; r];
        for j in (0..r).rev() {
            let w = acc[j];
            if w == 0 {
                continue;
            }
            let yj = mul_mod(w, inv_mod(self.rows[j].s, p), p);
            y[j] = yj;
            let neg = p - yj;
            for &(i, v) in &self.rows[j].l {
                let x = &mut acc[i as usize];
                *x = (*x + neg * v) % p;
            }
        }
        y
    }

    /// Cofactor weights of the unit row, per echelon row.
    pub fn unit_combination(&self) -> Option<Vec<u64>> {
        let u = self.unit?;
        let mut b = vec![0u64; self.rows.len()];
        b[u] = 1;
        Some(self.solve_transposed(&b))
    }

    /// `(Aᵀ·z)_j = Σ_k z_k·A[src_k][c_j]` over pivot columns.
    fn apply_transposed(&self, m: &Macaulay, z: &[u64], out: &mut [i128]) {
        out.iter_mut().for_each(|x| *x = 0);
        for (k, row) in self.rows.iter().enumerate() {
            let zk = z[k];
            if zk == 0 {
                continue;
            }
            for &(c, a) in &m.entries[row.src as usize] {
                let j = self.piv_of_col[c as usize];
                if j != NONE && (j as usize) < out.len() {
                    out[j as usize] += zk as i128 * a as i128;
                }
            }
        }
    }

    /// Rational solution of `yᵀ·A_R = e_unitᵀ` on the pivot columns by
    /// p-adic lifting, or `None` if reconstruction does not stabilize within
    /// `max_steps` lifting steps.
    pub fn lift_unit(&self, m: &Macaulay, max_steps: usize) -> Option<Vec<Rational>> {
        let u = self.unit?;
        let r = self.rows.len();
        let p = self.p;
        let mut b = vec![0i128; r];
        b[u] = 1;
        let mut digits: Vec<Vec<u64>> = Vec::new();
        let mut atz = vec![0i128; r];
        let mut checkpoint = 8;
        let mut prev_ok = false;
        for step in 0..max_steps {
            let bm: Vec<u64> = b.iter().map(|x| x.rem_euclid(p as i128) as u64).collect();
            let z = self.solve_transposed(&bm);
            self.apply_transposed(m, &z, &mut atz);
            for (bj, a) in b.iter_mut().zip(&atz) {
                let diff = *bj - a;
                debug_assert_eq!(diff.rem_euclid(p as i128), 0);
                *bj = diff.div_euclid(p as i128);
            }
            digits.push(z);
            if step + 1 == checkpoint || b.iter().all(|x| *x == 0) {
                checkpoint *= 2;
                if let Some(y) = reconstruct(&digits, p, r) {
                    if self.check_exact(m, &y) {
                        return Some(y);
                    }
                    prev_ok = true;
                } else if prev_ok {
                    prev_ok = false;
                }
            }
        }
        None
    }

    fn check_exact(&self, m: &Macaulay, y: &[Rational]) -> bool {
        let Some(u) = self.unit else {
            return false;
        };
        let r = self.rows.len();
        let den = y.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let nums: Vec<BigInt> = y.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        let mut out = vec![BigInt::zero(); r];
        for (k, row) in self.rows.iter().enumerate() {
            if nums[k].is_zero() {
                continue;
            }
            for &(c, a) in &m.entries[row.src as usize] {
                let j = self.piv_of_col[c as usize];
                if j != NONE && (j as usize) < r {
                    out[j as usize] += &nums[k] * a;
                }
            }
        }
        out.iter()
            .enumerate()
            .all(|(j, v)| if j == u { *v == den } else { v.is_zero() })
    }
}

/// `Σ digits[i][k]·pⁱ` for every coordinate `k`, by halving.
fn combine(digits: &[Vec<u64>], k: usize, lo: usize, hi: usize, pows: &HashMap<usize, BigInt>) -> BigInt {
    if hi - lo == 1 {
        return BigInt::from(digits[lo][k]);
    }
    let mid = lo + (hi - lo).next_power_of_two() / 2;
    let mid = if mid >= hi { lo + (hi - lo) / 2 } else { mid };
    let a = combine(digits, k, lo, mid, pows);
    let b = combine(digits, k, mid, hi, pows);
    if b.is_zero() {
        return a;
    }
    a + b * &pows[&(mid - lo)]
}

fn power_table(p: u64, n: usize) -> HashMap<usize, BigInt> {
    // every split length that `combine` can ask for
    let mut needed = Vec::new();
    fn walk(lo: usize, hi: usize, out: &mut Vec<usize>) {
        if hi - lo <= 1 {
            return;
        }
        let mid = lo + (hi - lo).next_power_of_two() / 2;
        let mid = if mid >= hi { lo + (hi - lo) / 2 } else { mid };
        out.push(mid - lo);
        walk(lo, mid, out);
        walk(mid, hi, out);
    }
    walk(0, n, &mut needed);
    needed.sort_unstable();
    needed.dedup();
    needed
        .into_iter()
        .map(|e| (e, num_traits::pow(BigInt::from(p), e)))
        .collect()
}

/// Rational reconstruction of all coordinates, sharing a running
/// denominator so most coordinates need one multiplication.
fn reconstruct(digits: &[Vec<u64>], p: u64, r: usize) -> Option<Vec<Rational>> {
    let n = digits.len();
    let modulus = num_traits::pow(BigInt::from(p), n);
    let bound = (&modulus / 2u32).sqrt();
    let pows = power_table(p, n);
    let mut den = BigInt::one();
    let mut out = Vec::with_capacity(r);
    let half = &modulus / 2u32;
    for k in 0..r {
        let x = combine(digits, k, 0, n, &pows);
        if x.is_zero() {
            out.push(Rational::zero());
            continue;
        }
        let mut u = (&x * &den).mod_floor(&modulus);
        if u > half {
            u -= &modulus;
        }
        if u.abs() <= bound {
            out.push(Rational::new(u, den.clone()));
            continue;
        }
        let (num, d) = ratrecon(&(&x * &den).mod_floor(&modulus), &modulus, &bound)?;
        den *= &d;
        out.push(Rational::new(num, den.clone()));
    }
    Some(out)
}

/// `n/d ≡ u (mod m)` with `|n|, d ≤ bound`.
fn ratrecon(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

/// Converts integer coefficients to `i64` if all fit comfortably.
pub(crate) fn small_terms(t: &Terms<BigInt>) -> Option<Terms<i64>> {
    t.iter()
        .map(|(m, c)| {
            c.to_i64()
                .filter(|v| v.unsigned_abs() < 1 << 40)
                .map(|v| (m.clone(), v))
        })
        .collect()
}

/// Size limits on a single Macaulay matrix.
const MAX_COLS: u128 = 60_000;
const MAX_ROWS: u128 = 150_000;
/// Degrees tried beyond the largest generator degree.
const MAX_EXTRA_DEGREE: u32 = 12;
/// Lifting steps before giving up on a prime.
const MAX_LIFT_STEPS: usize = 4096;

/// Degrees to try, from the largest generator degree up to the size limits.
fn degrees(nvars: usize, rows: &[Terms<i64>]) -> impl Iterator<Item = u32> {
    let degs: Vec<u32> = rows
        .iter()
        .filter_map(|f| f.iter().map(|(m, _)| m.deg).max())
        .collect();
    let start = degs.iter().max().copied();
    let fits = move |d: &u32| {
        let cols = count_monomials(nvars, *d);
        let nrows: u128 = degs.iter().map(|&g| count_monomials(nvars, d - g)).sum();
        cols <= MAX_COLS && nrows <= MAX_ROWS
    };
    start
        .into_iter()
        .flat_map(|s| s..=s + MAX_EXTRA_DEGREE)
        .take_while(fits)
}

fn ranked<R: Ring>(order: &MonomialOrder, p: &CoeffPoly<R>, conv: impl Fn(&R::Elem) -> i64) -> Terms<i64> {
    p.terms().map(|(m, c)| (EMono::new(order.rank(m)), conv(c))).collect()
}

/// `cᵢ = Σ_k weight(k)·t_k` over the echelon rows built from generator `i`.
fn assemble<F: Field>(
    ring: &PolyRing<F>,
    order: &MonomialOrder,
    m: &Macaulay,
    el: &Elimination,
    n: usize,
    weight: impl Fn(usize) -> F::Elem,
) -> Vec<CoeffPoly<F>> {
    let k = ring.coeffs();
    let mut cof = vec![ring.zero(); n];
    for e in 0..el.rank() {
        let w = weight(e);
        if k.is_zero(&w) {
            continue;
        }
        let src = el.source(e);
        ring.add_term(&mut cof[m.gens[src]], order.unrank(&m.mults[src].e), &w);
    }
    cof
}

/// How a unit certificate was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacaulayInfo {
    /// Prime used for elimination.
    pub prime: u64,
    /// Degree bound of the matrix that produced the unit.
    pub degree: u32,
    /// Number of independent rows used.
    pub rank: usize,
}

/// Cofactors with `Σ cᵢfᵢ = 1` over 𝔽_p, if a unit shows up within the size
/// limits. Needs `p < 2³¹`.
pub(crate) fn cofactors_prime(
    ring: &PolyRing<PrimeField>,
    polys: &[CoeffPoly<PrimeField>],
    order: &MonomialOrder,
) -> Option<(Vec<CoeffPoly<PrimeField>>, MacaulayInfo)> {
    let p = ring.coeffs().modulus();
    if p >= 1 << 31 {
        return None;
    }
    let rows: Vec<Terms<i64>> = polys.iter().map(|f| ranked(order, f, |c| *c as i64)).collect();
    for d in degrees(ring.nvars(), &rows) {
        let m = Macaulay::build(order.kind(), ring.nvars(), &rows, d);
        let el = Elimination::run(&m, p);
        let Some(y) = el.unit_combination() else {
            continue;
        };
        let info = MacaulayInfo {
            prime: p,
            degree: d,
            rank: el.rank(),
        };
        return Some((assemble(ring, order, &m, &el, polys.len(), |e| y[e]), info));
    }
    None
}

/// Primes just below 2³¹, largest first.
pub(crate) fn lifting_primes() -> impl Iterator<Item = u64> {
    (0..(1u64 << 31)).rev().filter(|&n| is_prime_u64(n))
}

/// Cofactors with `Σ cᵢfᵢ = 1` over ℚ. The elimination runs modulo a prime
/// near 2³¹ and the solution is lifted p-adically; a few primes are tried in
/// case the first one is unlucky.
pub(crate) fn cofactors_rational(
    ring: &PolyRing<Rationals>,
    polys: &[CoeffPoly<Rationals>],
    order: &MonomialOrder,
) -> Option<(Vec<CoeffPoly<Rationals>>, MacaulayInfo)> {
    // primitive integer multiples sᵢ·fᵢ
    let mut rows = Vec::with_capacity(polys.len());
    let mut scales = Vec::with_capacity(polys.len());
    for f in polys {
        if f.is_zero() {
            rows.push(Vec::new());
            scales.push(Rational::one());
            continue;
        }
        let l = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let ints: Terms<BigInt> = f
            .terms()
            .map(|(m, c)| (EMono::new(order.rank(m)), (c * &l).to_integer()))
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        let ints: Terms<BigInt> = ints.into_iter().map(|(m, c)| (m, c / &content)).collect();
        rows.push(small_terms(&ints)?);
        scales.push(Rational::new(l, content));
    }
    for p in lifting_primes().take(3) {
        if rows.iter().any(|r| r.iter().all(|(_, c)| c % p as i64 == 0) && !r.is_empty()) {
            continue;
        }
        for d in degrees(ring.nvars(), &rows) {
            let m = Macaulay::build(order.kind(), ring.nvars(), &rows, d);
            let el = Elimination::run(&m, p);
            if el.unit.is_none() {
                continue;
            }
            let Some(y) = el.lift_unit(&m, MAX_LIFT_STEPS) else {
                break;
            };
            let info = MacaulayInfo {
                prime: p,
                degree: d,
                rank: el.rank(),
            };
            let cof = assemble(ring, order, &m, &el, polys.len(), |e| &y[e] * &scales[m.gens[el.source(e)]]);
            return Some((cof, info));
        }
    }
    None
}
