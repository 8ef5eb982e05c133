//! Commutative polynomials, monomial orders, Gröbner bases with cofactor
//! tracking, and inconsistency certificates.

mod certificate;
mod engine;
mod macaulay;
mod monomial;
mod poly;

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{
    strip_factor, ArithError, BigInt, Field, FieldKind, Integers, PrimeField, Rational, Rationals,
    Ring,
};

pub use certificate::{read_certificate, write_certificate, AnyCertificate, CertificateError};
pub use engine::{GbCoeff, GbStats};
pub use macaulay::MacaulayInfo;
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use poly::{CoeffPoly, PolyRing};

use engine::{EMono, Engine, GbConfig, Lin, Node, Terms};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("variable precedence is not a permutation")]
    BadPermutation,
    #[error("polynomial does not belong to this ring")]
    RingMismatch,
    #[error("monomial order has {order} variables but the ring has {ring}")]
    OrderMismatch { order: usize, ring: usize },
    #[error("empty generator list")]
    EmptyInput,
    #[error("the system is consistent: 1 is not in the ideal")]
    ConsistentSystem,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Options for basis computations.
#[derive(Debug, Clone, Copy)]
pub struct GbOptions {
    /// Worker threads for S-pair reduction; results do not depend on it.
    pub threads: usize,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions { threads: 1 }
    }
}

/// A reduced Gröbner basis, optionally with `basis[j] = Σᵢ lift[j][i]·input[i]`.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<F: Field> {
    pub basis: Vec<CoeffPoly<F>>,
    pub lift: Option<Vec<Vec<CoeffPoly<F>>>>,
    pub stats: GbStats,
    pub route: BasisRoute,
}

/// How a basis was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisRoute {
    /// Buchberger's algorithm over the coefficient field itself.
    Direct,
    /// A modular run found 1 in the ideal and an exactly verified
    /// certificate over the field itself proved it; `stats` are those of the
    /// modular run.
    Certified(MacaulayInfo),
}

impl<F: Field> GroebnerBasis<F> {
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].as_constant().is_some_and(|c| c.is_some())
    }
}

/// Witness `Σ cofactors[i]·generators[i] = target`.
#[derive(Debug, Clone)]
pub struct Certificate<F: Field> {
    pub ring: PolyRing<F>,
    pub order: MonomialOrder,
    pub generators: Vec<CoeffPoly<F>>,
    pub cofactors: Vec<CoeffPoly<F>>,
    pub target: CoeffPoly<F>,
}

impl<F: Field> Certificate<F> {
    pub fn field(&self) -> FieldKind {
        self.ring.coeffs().kind()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification<F: Field> {
    Valid,
    /// `Σ cᵢfᵢ − target`, nonzero.
    Invalid(CoeffPoly<F>),
}

impl<F: Field> Verification<F> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verification::Valid)
    }
}

/// An integer `m > 0` with an integer-cofactor certificate `m = Σ gᵢfᵢ`.
#[derive(Debug, Clone)]
pub struct IntegerMember {
    pub m: BigInt,
    pub certificate: Certificate<Rationals>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharTransfer {
    pub gcd: BigInt,
    /// Exponent of 2 in the gcd.
    pub two_adic: u32,
    /// The gcd with all factors 2 removed.
    pub odd_part: BigInt,
    /// Primes dividing the gcd, found by trial division.
    pub primes: Vec<BigInt>,
    /// Part of the odd cofactor left unfactored by trial division (1 if none).
    pub unfactored: BigInt,
}

/// Fields the basis engine knows how to run over.
pub trait GroebnerField: Field + GbCoeff {
    #[doc(hidden)]
    fn run(
        ring: &PolyRing<Self>,
        polys: &[CoeffPoly<Self>],
        order: &MonomialOrder,
        cfg: GbConfig,
        lift: LiftRequest,
    ) -> RawBasis<Self>;

    /// Unit cofactors from a fast modular route, unverified; `None` when the
    /// route finds no unit (which proves nothing over ℚ).
    #[doc(hidden)]
    fn unit_route(
        ring: &PolyRing<Self>,
        polys: &[CoeffPoly<Self>],
        order: &MonomialOrder,
        cfg: GbConfig,
    ) -> Option<(Vec<CoeffPoly<Self>>, MacaulayInfo, GbStats)>;
}

#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftRequest {
    None,
    All,
    UnitOnly,
}

#[doc(hidden)]
pub struct RawBasis<F: Field> {
    basis: Vec<CoeffPoly<F>>,
    lift: Option<Vec<Vec<CoeffPoly<F>>>>,
    stats: GbStats,
}

fn check_inputs<R: Ring>(
    ring: &PolyRing<R>,
    polys: &[CoeffPoly<R>],
    order: &MonomialOrder,
) -> Result<(), GroebnerError> {
    if order.nvars() != ring.nvars() {
        return Err(GroebnerError::OrderMismatch {
            order: order.nvars(),
            ring: ring.nvars(),
        });
    }
    for p in polys {
        ring.check(p)?;
    }
    Ok(())
}

fn to_terms<R: Ring, C: GbCoeff>(
    engine: &Engine<C>,
    order: &MonomialOrder,
    p: &CoeffPoly<R>,
    mut conv: impl FnMut(&R::Elem) -> C::Elem,
) -> Terms<C::Elem> {
    let mut t: Terms<C::Elem> = p
        .terms()
        .map(|(m, c)| (EMono::new(order.rank(m)), conv(c)))
        .collect();
    engine.sort_terms(&mut t);
    t
}

fn from_terms<F: Field, E>(
    ring: &PolyRing<F>,
    order: &MonomialOrder,
    t: &[(EMono, E)],
    mut conv: impl FnMut(&E) -> F::Elem,
) -> CoeffPoly<F> {
    let mut map = BTreeMap::new();
    for (m, c) in t {
        let c = conv(c);
        if !ring.coeffs().is_zero(&c) {
            map.insert(order.unrank(&m.e), c);
        }
    }
    CoeffPoly::from_map(ring.coeffs(), map)
}

/// Field engine shared by the prime fields (and by ℚ for plain division).
fn run_field<F: Field + GbCoeff>(
    ring: &PolyRing<F>,
    polys: &[CoeffPoly<F>],
    order: &MonomialOrder,
    cfg: GbConfig,
    lift: LiftRequest,
) -> RawBasis<F> {
    let k = ring.coeffs().clone();
    let engine = Engine::new(k.clone(), order.kind(), ring.nvars());
    let mut inputs = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let mut t = to_terms(&engine, order, p, |c| c.clone());
        let lc = t[0].1.clone();
        let inv = k.inv(&lc).expect("nonzero");
        for (_, c) in t.iter_mut() {
            *c = k.mul(c, &inv);
        }
        inputs.push(Node {
            poly: t,
            lin: Some(Lin::Input {
                index: i,
                den: k.one(),
                scale: inv,
            }),
        });
    }
    let run = engine.run(inputs, cfg);
    let basis: Vec<CoeffPoly<F>> = run
        .basis
        .iter()
        .map(|&b| from_terms(ring, order, &run.nodes[b].poly, |c| c.clone()))
        .collect();
    let lift = lifts(&engine, &run, polys.len(), lift).map(|rows| {
        rows.into_iter()
            .map(|lv| {
                let inv = k.inv(&lv.den).expect("nonzero");
                lv.cofs
                    .iter()
                    .map(|c| from_terms(ring, order, c, |x| k.mul(x, &inv)))
                    .collect()
            })
            .collect()
    });
    RawBasis {
        basis,
        lift,
        stats: run.stats,
    }
}

fn lifts<C: GbCoeff>(
    engine: &Engine<C>,
    run: &engine::GbRun<C::Elem>,
    n: usize,
    req: LiftRequest,
) -> Option<Vec<engine::LiftVec<C::Elem>>> {
    match req {
        LiftRequest::None => None,
        LiftRequest::All => Some(run.basis.iter().map(|&b| engine.lift(&run.nodes, b, n)).collect()),
        LiftRequest::UnitOnly => {
            let is_unit = run.basis.len() == 1 && run.nodes[run.basis[0]].poly[0].0.is_one();
            is_unit.then(|| vec![engine.lift(&run.nodes, run.basis[0], n)])
        }
    }
}

impl GroebnerField for PrimeField {
    fn run(
        ring: &PolyRing<Self>,
        polys: &[CoeffPoly<Self>],
        order: &MonomialOrder,
        cfg: GbConfig,
        lift: LiftRequest,
    ) -> RawBasis<Self> {
        run_field(ring, polys, order, cfg, lift)
    }

    fn unit_route(
        ring: &PolyRing<Self>,
        polys: &[CoeffPoly<Self>],
        order: &MonomialOrder,
        cfg: GbConfig,
    ) -> Option<(Vec<CoeffPoly<Self>>, MacaulayInfo, GbStats)> {
        let cfg = GbConfig { track: false, ..cfg };
        let raw = run_field(ring, polys, order, cfg, LiftRequest::None);
        if !is_unit_basis(&raw.basis) {
            return None;
        }
        let (cof, info) = macaulay::cofactors_prime(ring, polys, order)?;
        Some((cof, info, raw.stats))
    }
}

fn is_unit_basis<F: Field>(basis: &[CoeffPoly<F>]) -> bool {
    basis.len() == 1 && basis[0].as_constant().is_some_and(|c| c.is_some())
}

impl GroebnerField for Rationals {
    /// Runs fraction-free over ℤ on primitive integer multiples of the inputs.
    fn run(
        ring: &PolyRing<Self>,
        polys: &[CoeffPoly<Self>],
        order: &MonomialOrder,
        cfg: GbConfig,
        lift: LiftRequest,
    ) -> RawBasis<Self> {
        let engine = Engine::new(Integers, order.kind(), ring.nvars());
        let mut inputs = Vec::new();
        for (i, p) in polys.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let l = p
                .terms()
                .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
            let mut t = to_terms(&engine, order, p, |c| (c * &l).to_integer());
            let content = Integers.content(t.iter().map(|(_, c)| c), &t[0].1);
            for (_, c) in t.iter_mut() {
                *c = &*c / &content;
            }
            inputs.push(Node {
                poly: t,
                lin: Some(Lin::Input {
                    index: i,
                    den: content,
                    scale: l,
                }),
            });
        }
        let run = engine.run(inputs, cfg);
        let monic = |t: &Terms<BigInt>| {
            let lc = t[0].1.clone();
            (from_terms(ring, order, t, |c| Rational::new(c.clone(), lc.clone())), lc)
        };
        let mut lcs = Vec::new();
        let basis: Vec<CoeffPoly<Self>> = run
            .basis
            .iter()
            .map(|&b| {
                let (p, lc) = monic(&run.nodes[b].poly);
                lcs.push(lc);
                p
            })
            .collect();
        let lift = lifts(&engine, &run, polys.len(), lift).map(|rows| {
            rows.into_iter()
                .zip(&lcs)
                .map(|(lv, lc)| {
                    let d = &lv.den * lc;
                    lv.cofs
                        .iter()
                        .map(|c| from_terms(ring, order, c, |x| Rational::new(x.clone(), d.clone())))
                        .collect()
                })
                .collect()
        });
        RawBasis {
            basis,
            lift,
            stats: run.stats,
        }
    }

    /// Reduces modulo a prime near 2³¹, runs the field engine there, and on
    /// a unit lifts a certificate back to ℚ.
    fn unit_route(
        ring: &PolyRing<Self>,
        polys: &[CoeffPoly<Self>],
        order: &MonomialOrder,
        cfg: GbConfig,
    ) -> Option<(Vec<CoeffPoly<Self>>, MacaulayInfo, GbStats)> {
        let cfg = GbConfig { track: false, ..cfg };
        let (ringp, reduced) = macaulay::lifting_primes().take(3).find_map(|p| {
            let k = PrimeField::new(p).expect("prime");
            let ringp = ring.with_coeffs(k);
            let reduced: Result<Vec<_>, _> = polys
                .iter()
                .map(|f| ring.map_coeffs(&ringp, f, |c| k.reduce_rational(c)))
                .collect();
            reduced.ok().map(|r| (ringp, r))
        })?;
        let raw = run_field(&ringp, &reduced, order, cfg, LiftRequest::None);
        if !is_unit_basis(&raw.basis) {
            return None;
        }
        let (cof, info) = macaulay::cofactors_rational(ring, polys, order)?;
        Some((cof, info, raw.stats))
    }
}

/// Multivariate division: `f = Σ qᵢ·gᵢ + r` with no term of `r` divisible by
/// a leading monomial of `g`. At each step the first divisor (in list order)
/// whose leading monomial divides the current term is used.
pub fn normal_form<F: Field + GbCoeff>(
    ring: &PolyRing<F>,
    f: &CoeffPoly<F>,
    g: &[CoeffPoly<F>],
    order: &MonomialOrder,
) -> Result<(CoeffPoly<F>, Vec<CoeffPoly<F>>), GroebnerError> {
    if g.is_empty() {
        return Err(GroebnerError::EmptyInput);
    }
    check_inputs(ring, g, order)?;
    ring.check(f)?;
    let engine = Engine::new(ring.coeffs().clone(), order.kind(), ring.nvars());
    let divisors: Vec<Terms<F::Elem>> = g
        .iter()
        .map(|p| to_terms(&engine, order, p, |c| c.clone()))
        .collect();
    let (rem, q) = engine.divide(to_terms(&engine, order, f, |c| c.clone()), &divisors);
    let rem = from_terms(ring, order, &rem, |c| c.clone());
    let q = q
        .iter()
        .map(|t| from_terms(ring, order, t, |c| c.clone()))
        .collect();
    Ok((rem, q))
}

/// Reduced Gröbner basis of `⟨polys⟩`, sorted by ascending leading monomial,
/// with the lift matrix when requested.
pub fn buchberger<F: GroebnerField>(
    ring: &PolyRing<F>,
    polys: &[CoeffPoly<F>],
    order: &MonomialOrder,
    lift: bool,
    opts: GbOptions,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    check_inputs(ring, polys, order)?;
    let cfg = GbConfig {
        threads: opts.threads.max(1),
        track: lift,
        stop_on_unit: true,
    };
    // over a prime field without lift the engine is already fast and exact
    let direct_is_cheap = !lift && ring.coeffs().characteristic() != 0;
    if !direct_is_cheap {
        if let Some(cert) = unit_certificate(ring, polys, order, cfg) {
            let (cert, info, stats) = cert;
            return Ok(GroebnerBasis {
                basis: vec![ring.one()],
                lift: lift.then(|| vec![cert.cofactors]),
                stats,
                route: BasisRoute::Certified(info),
            });
        }
    }
    let req = if lift { LiftRequest::All } else { LiftRequest::None };
    let raw = F::run(ring, polys, order, cfg, req);
    Ok(GroebnerBasis {
        basis: raw.basis,
        lift: raw.lift,
        stats: raw.stats,
        route: BasisRoute::Direct,
    })
}

/// Fast route to an exactly verified certificate of `1 ∈ ⟨polys⟩`.
fn unit_certificate<F: GroebnerField>(
    ring: &PolyRing<F>,
    polys: &[CoeffPoly<F>],
    order: &MonomialOrder,
    cfg: GbConfig,
) -> Option<(Certificate<F>, MacaulayInfo, GbStats)> {
    let (cofactors, info, stats) = F::unit_route(ring, polys, order, cfg)?;
    let cert = Certificate {
        ring: ring.clone(),
        order: order.clone(),
        generators: polys.to_vec(),
        cofactors,
        target: ring.one(),
    };
    verify_certificate(&cert).is_valid().then_some((cert, info, stats))
}

/// The unique monic reduced basis of the ideal generated by `g`.
pub fn reduce_basis<F: GroebnerField>(
    ring: &PolyRing<F>,
    g: &[CoeffPoly<F>],
    order: &MonomialOrder,
) -> Result<Vec<CoeffPoly<F>>, GroebnerError> {
    Ok(buchberger(ring, g, order, false, GbOptions::default())?.basis)
}

/// Cofactors writing 1 in terms of `polys`.
pub fn certify_inconsistency<F: GroebnerField>(
    ring: &PolyRing<F>,
    polys: &[CoeffPoly<F>],
    order: &MonomialOrder,
    opts: GbOptions,
) -> Result<Certificate<F>, GroebnerError> {
    check_inputs(ring, polys, order)?;
    let cfg = GbConfig {
        threads: opts.threads.max(1),
        track: true,
        stop_on_unit: true,
    };
    if let Some((cert, _, _)) = unit_certificate(ring, polys, order, cfg) {
        return Ok(cert);
    }
    let raw = F::run(ring, polys, order, cfg, LiftRequest::UnitOnly);
    let mut rows = raw.lift.ok_or(GroebnerError::ConsistentSystem)?;
    let mut cofactors = rows.pop().expect("one row");
    cofactors.resize(polys.len(), ring.zero());
    Ok(Certificate {
        ring: ring.clone(),
        order: order.clone(),
        generators: polys.to_vec(),
        cofactors,
        target: ring.one(),
    })
}

/// Recomputes `Σ cᵢ·fᵢ` with plain polynomial arithmetic and compares it
/// with the target.
pub fn verify_certificate<F: Field>(cert: &Certificate<F>) -> Verification<F> {
    let ring = &cert.ring;
    if cert.generators.len() != cert.cofactors.len() {
        // a missing cofactor counts as zero
        let n = cert.generators.len().min(cert.cofactors.len());
        let sum = ring.dot(&cert.cofactors[..n], &cert.generators[..n]);
        let diff = ring.sub(&sum, &cert.target);
        return Verification::Invalid(if diff.is_zero() { ring.one() } else { diff });
    }
    let mut acc: HashMap<Monomial, F::Elem> = HashMap::new();
    let k = ring.coeffs();
    for (c, f) in cert.cofactors.iter().zip(&cert.generators) {
        for (mc, xc) in c.terms() {
            for (mf, xf) in f.terms() {
                let m = mc.mul(mf);
                let v = k.mul(xc, xf);
                match acc.get_mut(&m) {
                    Some(x) => *x = k.add(x, &v),
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
    }
    for (m, c) in cert.target.terms() {
        let v = k.neg(c);
        match acc.get_mut(m) {
            Some(x) => *x = k.add(x, &v),
            None => {
                acc.insert(m.clone(), v);
            }
        }
    }
    let diff = CoeffPoly::from_map(k, acc.into_iter().collect());
    if diff.is_zero() {
        Verification::Valid
    } else {
        Verification::Invalid(diff)
    }
}

/// A positive integer in `⟨polys⟩` with integer cofactors, from a rational
/// certificate by clearing cofactor denominators.
pub fn integer_member(
    ring: &PolyRing<Rationals>,
    polys: &[CoeffPoly<Rationals>],
    order: &MonomialOrder,
    opts: GbOptions,
) -> Result<IntegerMember, GroebnerError> {
    let cert = certify_inconsistency(ring, polys, order, opts)?;
    Ok(integer_member_from(&cert))
}

/// Clears the denominators of a certificate with target 1.
pub fn integer_member_from(cert: &Certificate<Rationals>) -> IntegerMember {
    let mut m = BigInt::one();
    for c in &cert.cofactors {
        for (_, x) in c.terms() {
            m = m.lcm(x.denom());
        }
    }
    let ring = &cert.ring;
    let scale = Rational::from_integer(m.clone());
    let cofactors = cert.cofactors.iter().map(|c| ring.scale(c, &scale)).collect();
    let target = ring.scale(&cert.target, &scale);
    IntegerMember {
        m,
        certificate: Certificate {
            ring: ring.clone(),
            order: cert.order.clone(),
            generators: cert.generators.clone(),
            cofactors,
            target,
        },
    }
}

/// True when every coefficient of every cofactor is an integer.
pub fn has_integer_cofactors(cert: &Certificate<Rationals>) -> bool {
    cert.cofactors
        .iter()
        .all(|c| c.terms().all(|(_, x)| x.is_integer()))
}

const TRIAL_LIMIT: u64 = 100_000;

/// Which primes may still admit solutions after two integer members are known:
/// exactly the common prime divisors of `m` and `m2`.
pub fn char_transfer(m: &BigInt, m2: &BigInt) -> Result<CharTransfer, GroebnerError> {
    if !m.is_positive() || !m2.is_positive() {
        return Err(ArithError::Parse {
            what: "positive integer",
            text: format!("{m}, {m2}"),
        }
        .into());
    }
    let g = crate::exactnum::gcd(m, m2);
    let (odd, k) = strip_factor(&g, &BigInt::from(2))?;
    let mut primes = Vec::new();
    if k > 0 {
        primes.push(BigInt::from(2));
    }
    let mut rest = odd.clone();
    let mut p = 3u64;
    while !rest.is_one() && p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if bp.clone() * &bp > rest {
            primes.push(rest.clone());
            rest = BigInt::one();
            break;
        }
        let (r, e) = strip_factor(&rest, &bp)?;
        if e > 0 {
            primes.push(bp);
            rest = r;
        }
        p += 2;
    }
    Ok(CharTransfer {
        gcd: g,
        two_adic: k,
        odd_part: odd,
        primes,
        unfactored: rest,
    })
}

/// Reduces a ℚ-certificate modulo `p`; fails when `p` divides a denominator.
pub fn reduce_certificate(
    cert: &Certificate<Rationals>,
    p: &PrimeField,
) -> Result<Certificate<PrimeField>, ArithError> {
    let ring = cert.ring.with_coeffs(p.clone());
    let conv = |q: &CoeffPoly<Rationals>| cert.ring.map_coeffs(&ring, q, |c| p.reduce_rational(c));
    Ok(Certificate {
        generators: cert.generators.iter().map(conv).collect::<Result<_, _>>()?,
        cofactors: cert.cofactors.iter().map(conv).collect::<Result<_, _>>()?,
        target: conv(&cert.target)?,
        order: cert.order.clone(),
        ring,
    })
}

/// Rational points of a zero-dimensional ideal given by its lex reduced
/// basis in two variables `[v0, v1]` with `v0 > v1`: the basis must contain a
/// univariate polynomial in `v1` and one of the form `v0 − h(v1)`.
pub fn rational_points_2var(
    ring: &PolyRing<Rationals>,
    lex_basis: &[CoeffPoly<Rationals>],
) -> Option<Vec<(Rational, Rational)>> {
    if ring.nvars() != 2 {
        return None;
    }
    let mut uni = None;
    let mut elim = None;
    for p in lex_basis {
        let uses0 = p.terms().any(|(m, _)| m.exps()[0] > 0);
        if !uses0 {
            uni = Some(p);
        } else {
            let linear = p.terms().all(|(m, _)| m.exps()[0] == 0 || (m.exps()[0] == 1 && m.exps()[1] == 0));
            let coef = p.coeff(&Monomial::var(2, 0, 1));
            if linear && coef.is_some_and(|c| c.is_one()) {
                elim = Some(p);
            }
        }
    }
    let (uni, elim) = (uni?, elim?);
    let mut out = Vec::new();
    for r in rational_roots(uni)? {
        // v0 = −(elim − v0)(v1 = r)
        let rest = ring.sub(elim, &ring.var(0));
        let v0 = -ring.eval(&rest, &[Rational::zero(), r.clone()]);
        out.push((v0, r));
    }
    Some(out)
}

/// Rational roots of a univariate polynomial in the last variable of a
/// two-variable ring, via the rational root theorem.
fn rational_roots(p: &CoeffPoly<Rationals>) -> Option<Vec<Rational>> {
    let deg = p.terms().map(|(m, _)| m.exps()[1] as usize).max()?;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.exps()[1] as usize] = c.clone();
    }
    let l = coeffs.iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &l).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero())?;
    if low > 0 {
        roots.push(Rational::zero());
    }
    let a0 = ints[low].abs();
    let an = ints[deg].abs();
    let divisors = |n: &BigInt| -> Option<Vec<BigInt>> {
        if n.bits() > 40 {
            return None;
        }
        let n = n.to_u64_digits().1.first().copied().unwrap_or(0);
        Some((1..=n).filter(|d| n % d == 0).map(BigInt::from).collect())
    };
    for pnum in divisors(&a0)? {
        for q in divisors(&an)? {
            for s in [1i64, -1] {
                let r = Rational::new(&pnum * s, q.clone());
                let val = coeffs
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |acc, c| acc * &r + c);
                if val.is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

#[cfg(test)]
mod tests;
