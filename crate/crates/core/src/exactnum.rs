//! Exact scalars: arbitrary-precision integers, rationals and prime fields.
//!
//! Every coefficient domain in the crate goes through the [`Ring`] / [`Field`]
//! traits. Ring values are lightweight descriptors (`Rationals` is zero-sized,
//! `PrimeField` carries its modulus) and elements are plain values, so the same
//! polynomial code runs over ℚ, ℤ and 𝔽_p without dynamic dispatch.

use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use num_bigint::BigInt;

/// Reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be at least 2")]
    ModulusTooSmall,
    #[error("factor must be at least 2, got {0}")]
    BadFactor(BigInt),
    #[error("cannot strip factors from zero")]
    StripZero,
    #[error("cannot parse {what} from {text:?}")]
    Parse { what: &'static str, text: String },
}

/// Greatest common divisor by the Euclidean algorithm. Always non-negative;
/// `gcd(0, 0) == 0`.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
    }
    a
}

/// Divides out every factor `q` from `n`, returning the cofactor and the
/// multiplicity.
pub fn strip_factor(n: &BigInt, q: &BigInt) -> Result<(BigInt, u32), ArithError> {
    if q < &BigInt::from(2) {
        return Err(ArithError::BadFactor(q.clone()));
    }
    if n.is_zero() {
        return Err(ArithError::StripZero);
    }
    let mut rest = n.clone();
    let mut k = 0u32;
    loop {
        let (quot, rem) = rest.div_rem(q);
        if !rem.is_zero() {
            return Ok((rest, k));
        }
        rest = quot;
        k += 1;
    }
}

pub fn parse_bigint(s: &str) -> Result<BigInt, ArithError> {
    BigInt::from_str(s.trim()).map_err(|_| ArithError::Parse {
        what: "integer",
        text: s.to_string(),
    })
}

/// Parses `"p/q"` or a bare integer. The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let err = || ArithError::Parse {
        what: "rational",
        text: s.to_string(),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(ArithError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| err())?,
        )),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are a proven
/// witness set for every 64-bit integer.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Commutative ring with identity. Implementors are cheap descriptors;
/// the arithmetic lives on them rather than on the element type.
pub trait Ring: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }
    /// 0 for ℤ and ℚ.
    fn characteristic(&self) -> u64;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, ArithError>;
    /// `true` when the element prints with a leading minus sign.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ArithError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
    fn kind(&self) -> FieldKind;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<BigInt, ArithError> {
        parse_bigint(s)
    }
    fn is_negative(&self, a: &BigInt) -> bool {
        a.is_negative()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Rational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> Rational {
        Rational::from_integer(n.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format(&self, a: &Rational) -> String {
        format_rational(a)
    }
    fn parse(&self, s: &str) -> Result<Rational, ArithError> {
        parse_rational(s)
    }
    fn is_negative(&self, a: &Rational) -> bool {
        a.is_negative()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &Rational) -> Result<Rational, ArithError> {
        if a.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Q
    }
}

/// 𝔽_p for a 64-bit prime `p`. Elements are residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p < 2 {
            return Err(ArithError::ModulusTooSmall);
        }
        if !is_prime_u64(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    /// Image of a rational number whose denominator is invertible mod p.
    pub fn reduce_rational(&self, r: &Rational) -> Result<u64, ArithError> {
        let n = self.reduce_int(r.numer());
        let d = self.reduce_int(r.denom());
        self.div(&n, &d)
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let (s, carry) = a.overflowing_add(*b);
        if carry || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(*b).wrapping_add(self.p)
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        self.reduce_int(n)
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64, ArithError> {
        self.reduce_rational(&parse_rational(s)?)
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Result<u64, ArithError> {
        if *a == 0 {
            return Err(ArithError::DivisionByZero);
        }
        // p is prime, so a^(p-2) is the inverse.
        Ok(pow_mod(*a, self.p - 2, self.p))
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Fp(self.p)
    }
}

/// Runtime tag for the coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Q,
    Fp(u64),
}

impl FieldKind {
    /// `0` selects ℚ, anything else a prime field.
    pub fn from_characteristic(c: u64) -> Result<Self, ArithError> {
        match c {
            0 => Ok(FieldKind::Q),
            p => {
                PrimeField::new(p)?;
                Ok(FieldKind::Fp(p))
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldKind::Q => 0,
            FieldKind::Fp(p) => *p,
        }
    }
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldKind::Q => write!(f, "Q"),
            FieldKind::Fp(p) => write!(f, "F{p}"),
        }
    }
}

/// The integers m and m′ reported alongside the characteristic-2 argument,
/// shipped verbatim as decimal fixtures.
pub mod paper_constants {
    use super::*;

    pub const M_DECIMAL: &str = include_str!("../fixtures/m_paper.txt");
    pub const M_PRIME_DECIMAL: &str = include_str!("../fixtures/m_prime_paper.txt");
    pub const M_DIGITS: usize = 541;
    pub const M_PRIME_DIGITS: usize = 353;

    pub fn m() -> BigInt {
        parse_bigint(M_DECIMAL).expect("m fixture is a decimal integer")
    }

    pub fn m_prime() -> BigInt {
        parse_bigint(M_PRIME_DECIMAL).expect("m' fixture is a decimal integer")
    }

    /// Digit-count check run before either constant is used.
    pub fn self_test() -> Result<(), String> {
        let a = M_DECIMAL.trim().len();
        let b = M_PRIME_DECIMAL.trim().len();
        if a != M_DIGITS || b != M_PRIME_DIGITS {
            return Err(format!(
                "constant fixtures have {a} and {b} digits, expected {M_DIGITS} and {M_PRIME_DIGITS}"
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&bi(12), &bi(8)), bi(4));
        assert_eq!(gcd(&bi(0), &bi(0)), bi(0));
        assert_eq!(gcd(&bi(-12), &bi(18)), bi(6));
        let m = paper_constants::m();
        assert_eq!(gcd(&m, &bi(0)), m);
    }

    #[test]
    fn paper_constant_gcd_is_power_of_two() {
        paper_constants::self_test().unwrap();
        let m = paper_constants::m();
        let m2 = paper_constants::m_prime();
        let g = gcd(&m, &m2);
        // independent route: num-integer's binary gcd
        assert_eq!(g, m.gcd(&m2));
        let (rest, k) = strip_factor(&g, &bi(2)).unwrap();
        assert_eq!(rest, bi(1));
        assert!(k >= 1);
    }

    #[test]
    fn strip_factor_examples() {
        assert_eq!(strip_factor(&bi(40), &bi(2)).unwrap(), (bi(5), 3));
        assert_eq!(strip_factor(&bi(7), &bi(2)).unwrap(), (bi(7), 0));
        assert!(matches!(
            strip_factor(&bi(7), &bi(1)),
            Err(ArithError::BadFactor(_))
        ));
        assert_eq!(strip_factor(&bi(0), &bi(2)), Err(ArithError::StripZero));
    }

    #[test]
    fn field_examples() {
        let q = Rationals;
        let half = parse_rational("1/2").unwrap();
        let third = parse_rational("1/3").unwrap();
        assert_eq!(format_rational(&q.add(&half, &third)), "5/6");
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.add(&1, &1), 0);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.inv(&3).unwrap(), 2);
        assert_eq!(f5.inv(&0), Err(ArithError::DivisionByZero));
        assert_eq!(q.inv(&Rational::zero()), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn prime_field_construction() {
        assert_eq!(PrimeField::new(1), Err(ArithError::ModulusTooSmall));
        assert_eq!(PrimeField::new(91), Err(ArithError::NotPrime(91)));
        assert!(PrimeField::new(18446744073709551557).is_ok());
        assert_eq!(FieldKind::from_characteristic(0).unwrap(), FieldKind::Q);
        assert!(FieldKind::from_characteristic(4).is_err());
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "{n}");
        }
        // strong pseudoprime to several small bases
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-7", "3/4", "-22/7"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn gcd_laws(a in any::<i64>(), b in any::<i64>()) {
            let (a, b) = (bi(a), bi(b));
            let g = gcd(&a, &b);
            prop_assert_eq!(&g, &gcd(&b, &a));
            if !g.is_zero() {
                prop_assert!((&a % &g).is_zero());
                prop_assert!((&b % &g).is_zero());
            }
            if !b.is_zero() {
                prop_assert_eq!(&g, &gcd(&b, &a.mod_floor(&b)));
            }
        }

        #[test]
        fn rational_inverse(n in 1i64..1_000_000, d in 1i64..1_000_000, neg in any::<bool>()) {
            let q = Rationals;
            let n = if neg { -n } else { n };
            let a = Rational::new(bi(n), bi(d));
            let b = q.inv(&a).unwrap();
            prop_assert!(q.is_one(&q.mul(&a, &b)));
            prop_assert!(a.denom() > &BigInt::zero());
            prop_assert!(gcd(a.numer(), a.denom()).is_one());
        }

        #[test]
        fn prime_field_agrees_with_integers(a in any::<i64>(), b in any::<i64>(), pi in 0usize..4) {
            let p = [2u64, 5, 65_537, 18446744073709551557][pi];
            let f = PrimeField::new(p).unwrap();
            let (x, y) = (f.from_i64(a), f.from_i64(b));
            let red = |n: BigInt| f.reduce_int(&n);
            prop_assert_eq!(f.add(&x, &y), red(bi(a) + bi(b)));
            prop_assert_eq!(f.sub(&x, &y), red(bi(a) - bi(b)));
            prop_assert_eq!(f.mul(&x, &y), red(bi(a) * bi(b)));
            if x != 0 {
                prop_assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), 1);
            }
        }
    }
}
