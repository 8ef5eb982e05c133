//! Randomized law checks shared by the property tests and the acceptance
//! harness. Each check runs `cases` deterministic cases and returns the
//! shrunk counterexample on failure.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nacas::action::{semidirect, ActionTable, FinAlgebra};
use nacas::exactnum::{BigInt, Field, PrimeField, Rational, Rationals, Ring};
use nacas::freealg::NonAssocPoly;
use nacas::groebner::{
    buchberger, certify_inconsistency, integer_member_from, normal_form, read_certificate,
    reduce_certificate, verify_certificate, write_certificate, AnyCertificate, CoeffPoly,
    GbOptions, Monomial, MonomialOrder, OrderKind, PolyRing,
};
use nacas::magma::{Generator, MagmaWord};
use nacas::singio::{self, SingDocument};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

type Q = CoeffPoly<Rationals>;

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn ring3() -> PolyRing<Rationals> {
    PolyRing::new(Rationals, &["x", "y", "z"])
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Up to `max_terms` terms of degree ≤ 2 in three variables, small integer coefficients.
fn poly3(max_terms: usize) -> impl Strategy<Value = Q> {
    prop::collection::vec(([0u16..=2, 0u16..=2, 0u16..=2], -3i64..=3), 1..=max_terms).prop_map(|ts| {
        let r = ring3();
        let mut p = r.zero();
        for (e, c) in ts {
            if e.iter().sum::<u16>() <= 2 {
                r.add_term(&mut p, Monomial::from_exps(&e), &q(c));
            }
        }
        p
    })
}

fn nonzero_poly3(max_terms: usize) -> impl Strategy<Value = Q> {
    poly3(max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn system3() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(nonzero_poly3(3), 1..=3)
}

fn order3() -> impl Strategy<Value = MonomialOrder> {
    (0usize..3, 0usize..6).prop_map(|(k, p)| {
        let kind = [OrderKind::DegRevLex, OrderKind::Lex, OrderKind::DegLex][k];
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        MonomialOrder::with_precedence(kind, perms[p].to_vec()).unwrap()
    })
}

fn s_poly(r: &PolyRing<Rationals>, f: &Q, g: &Q, order: &MonomialOrder) -> Q {
    let (mf, cf) = f.leading_term(order).unwrap();
    let (mg, cg) = g.leading_term(order).unwrap();
    let l = mf.lcm(mg);
    let a = r.mul_term(f, &mf.quotient_of(&l).unwrap(), &Rationals.inv(cf).unwrap());
    let b = r.mul_term(g, &mg.quotient_of(&l).unwrap(), &Rationals.inv(cg).unwrap());
    r.sub(&a, &b)
}

fn reduces_to_zero(r: &PolyRing<Rationals>, f: &Q, g: &[Q], order: &MonomialOrder) -> bool {
    normal_form(r, f, g, order).unwrap().0.is_zero()
}

/// S-polynomials of the output reduce to zero, inputs lie in the ideal,
/// and the lift matrix reproduces every basis element.
pub fn groebner_invariants(cases: u32) -> Result<(), String> {
    run(cases, (system3(), order3()), |(f, order)| {
        let r = ring3();
        let gb = buchberger(&r, &f, &order, true, GbOptions::default()).unwrap();
        let g = &gb.basis;
        prop_assert!(!g.is_empty());
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                prop_assert!(reduces_to_zero(&r, &s_poly(&r, &g[i], &g[j], &order), g, &order));
            }
        }
        for p in &f {
            prop_assert!(reduces_to_zero(&r, p, g, &order));
        }
        let lift = gb.lift.as_ref().unwrap();
        prop_assert_eq!(lift.len(), g.len());
        for (row, b) in lift.iter().zip(g) {
            prop_assert_eq!(&r.dot(row, &f), b);
        }
        Ok(())
    })
}

/// The reduced basis does not depend on the order of the generators.
pub fn basis_shuffle_uniqueness(cases: u32) -> Result<(), String> {
    let strategy = system3().prop_flat_map(|f| (Just(f.clone()), Just(f).prop_shuffle()));
    run(cases, (strategy, order3()), |((f, shuffled), order)| {
        let r = ring3();
        let a = buchberger(&r, &f, &order, false, GbOptions::default()).unwrap().basis;
        let b = buchberger(&r, &shuffled, &order, false, GbOptions::default()).unwrap().basis;
        prop_assert_eq!(a, b);
        Ok(())
    })
}

/// f = Σ qᵢgᵢ + r and no term of r is divisible by a leading monomial.
pub fn division_identity(cases: u32) -> Result<(), String> {
    run(cases, (poly3(6), system3(), order3()), |(f, g, order)| {
        let r = ring3();
        let (rem, quo) = normal_form(&r, &f, &g, &order).unwrap();
        prop_assert_eq!(r.add(&r.dot(&quo, &g), &rem), f);
        let leads: Vec<Monomial> = g.iter().map(|p| p.leading_term(&order).unwrap().0.clone()).collect();
        for (m, _) in rem.terms() {
            prop_assert!(leads.iter().all(|l| !l.divides(m)), "{m:?} is reducible");
        }
        Ok(())
    })
}

/// A ℚ certificate reduced mod a prime avoiding its denominators and the
/// cleared integer m is a valid certificate over 𝔽ₚ.
pub fn modular_certificate_consistency(cases: u32) -> Result<(), String> {
    let strategy = (nonzero_poly3(3), nonzero_poly3(3), poly3(2), poly3(2), 0usize..4);
    run(cases, strategy, |(g1, g2, h1, h2, pick)| {
        let r = ring3();
        // 1 − h1·g1 − h2·g2 together with g1, g2 generates the unit ideal
        let g3 = r.sub(&r.one(), &r.add(&r.mul(&h1, &g1), &r.mul(&h2, &g2)));
        let f = vec![g1, g2, g3];
        let order = MonomialOrder::degrevlex(3);
        let cert = certify_inconsistency(&r, &f, &order, GbOptions::default()).unwrap();
        prop_assert!(verify_certificate(&cert).is_valid());
        let im = integer_member_from(&cert);
        prop_assert!(verify_certificate(&im.certificate).is_valid());
        let primes = [10007u64, 32003, 65521, 1000003, 2147483647];
        let bad = |p: u64| {
            let bp = BigInt::from(p);
            (&im.m % &bp) == BigInt::from(0)
        };
        let p = primes.iter().cycle().skip(pick).take(primes.len()).find(|&&p| !bad(p));
        let Some(&p) = p else {
            return Ok(());
        };
        let field = PrimeField::new(p).unwrap();
        let modp = reduce_certificate(&cert, &field).unwrap();
        prop_assert!(verify_certificate(&modp).is_valid());
        Ok(())
    })
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn small_algebra(prefix: &'static str) -> impl Strategy<Value = FinAlgebra<Rationals>> {
    (1usize..=2).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(-2i64..=2, n), n * n).prop_map(move |rows| {
            let mut a = FinAlgebra::abelian(Rationals, labels(prefix, n));
            for (k, row) in rows.iter().enumerate() {
                let v: Vec<Rational> = row.iter().map(|&c| q(c)).collect();
                a.set_product(k / n, k % n, &v).unwrap();
            }
            a
        })
    })
}

fn table_for(nb: usize, nx: usize) -> impl Strategy<Value = ActionTable<Rationals>> {
    let mat = move || prop::collection::vec(prop::collection::vec(prop::collection::vec(-2i64..=2, nx), nx), nb);
    (mat(), mat()).prop_map(move |(l, r)| {
        let conv = |m: Vec<Vec<Vec<i64>>>| -> Vec<Vec<Vec<Rational>>> {
            m.into_iter()
                .map(|g| g.into_iter().map(|row| row.into_iter().map(q).collect()).collect())
                .collect()
        };
        let mut t = ActionTable::zero(&Rationals, labels("b", nb), nx);
        t.left = conv(l);
        t.right = conv(r);
        t
    })
}

/// Projection B ⋉ X → B is multiplicative on B, X keeps its product, and X
/// is a two-sided ideal.
pub fn semidirect_laws(cases: u32) -> Result<(), String> {
    let strategy = (small_algebra("b"), small_algebra("x"))
        .prop_flat_map(|(b, x)| {
            let t = table_for(b.dim(), x.dim());
            (Just(b), Just(x), t)
        });
    run(cases, strategy, |(b, x, act)| {
        let s = semidirect(&b, &x, &act).unwrap();
        let (nb, nx) = (b.dim(), x.dim());
        prop_assert_eq!(s.dim(), nb + nx);
        for i in 0..nb {
            for j in 0..nb {
                let p = s.product(i, j);
                prop_assert_eq!(&p[..nb], &b.product(i, j)[..]);
                prop_assert!(p[nb..].iter().all(|c| Rationals.is_zero(c)));
            }
        }
        for i in 0..nx {
            for j in 0..nx {
                let p = s.product(nb + i, nb + j);
                prop_assert!(p[..nb].iter().all(|c| Rationals.is_zero(c)));
                prop_assert_eq!(&p[nb..], &x.product(i, j)[..]);
            }
        }
        for k in 0..nb + nx {
            for i in 0..nx {
                for p in [s.product(k, nb + i), s.product(nb + i, k)] {
                    prop_assert!(p[..nb].iter().all(|c| Rationals.is_zero(c)));
                }
            }
        }
        Ok(())
    })
}

fn bracket(leaves: &[MagmaWord], cuts: &[u8]) -> MagmaWord {
    if leaves.len() == 1 {
        return leaves[0].clone();
    }
    let split = 1 + cuts.first().copied().unwrap_or(0) as usize % (leaves.len() - 1);
    let rest = cuts.get(1..).unwrap_or(&[]);
    MagmaWord::mul(&bracket(&leaves[..split], rest), &bracket(&leaves[split..], rest))
}

fn word(letters: &'static [&'static str], max_leaves: usize) -> impl Strategy<Value = MagmaWord> {
    (
        prop::collection::vec(prop::sample::select(letters), 1..=max_leaves),
        prop::collection::vec(any::<u8>(), 0..6),
    )
        .prop_map(|(ls, cuts)| {
            let leaves: Vec<MagmaWord> = ls.iter().map(|l| MagmaWord::var(l)).collect();
            bracket(&leaves, &cuts)
        })
}

fn alphabet(names: &[&str]) -> Vec<Generator> {
    names.iter().map(|n| Generator::new(n)).collect()
}

const XYZ: &[&str] = &["x", "y", "z"];

fn nonassoc(max_terms: usize) -> impl Strategy<Value = NonAssocPoly<Rationals>> {
    prop::collection::vec((word(XYZ, 4), -3i64..=3), 0..=max_terms).prop_map(|ts| {
        NonAssocPoly::from_terms(Rationals, &alphabet(XYZ), ts.into_iter().map(|(w, c)| (w, q(c)))).unwrap()
    })
}

/// Homogeneous components sum back to the polynomial.
pub fn homogeneous_sum(cases: u32) -> Result<(), String> {
    run(cases, nonassoc(6), |p| {
        let mut sum = NonAssocPoly::zero(Rationals, p.alphabet());
        for (ty, c) in p.homogeneous_components() {
            prop_assert_eq!(c.homogeneous_type(), Some(ty));
            sum = sum.add(&c).unwrap();
        }
        prop_assert_eq!(sum, p);
        Ok(())
    })
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// Collapsing the polarization of a homogeneous p of degree ≤ 4 gives
/// (∏ kᵢ!)·p over ℚ.
pub fn polarization_recovery(cases: u32) -> Result<(), String> {
    let strategy = prop::collection::vec(prop::sample::select(&["x", "y"][..]), 1..=4).prop_flat_map(|ls| {
        let term = (
            Just(ls.clone()).prop_shuffle(),
            prop::collection::vec(any::<u8>(), 0..4),
            prop_oneof![-3i64..=-1, 1i64..=3],
        );
        prop::collection::vec(term, 1..=4)
    });
    run(cases, strategy, |terms| {
        let al = alphabet(&["x", "y"]);
        let ts = terms.iter().map(|(ls, cuts, c)| {
            let leaves: Vec<MagmaWord> = ls.iter().map(|l| MagmaWord::var(l)).collect();
            (bracket(&leaves, cuts), q(*c))
        });
        let p = NonAssocPoly::from_terms(Rationals, &al, ts).unwrap();
        let Some(ty) = p.homogeneous_type() else {
            // every term cancelled
            return Ok(());
        };
        let pol = p.multilinearize().unwrap();
        prop_assert!(pol.poly.is_multilinear());
        prop_assert!(!pol.degenerate);
        let k: i64 = ty.iter().map(|&k| factorial(k)).product();
        prop_assert_eq!(pol.collapse(&al).unwrap(), p.scale(&q(k)));
        Ok(())
    })
}

/// parse ∘ print is the identity for magma words, non-associative
/// polynomials, commutative polynomials, algebra tables, certificates and
/// Singular documents.
pub fn parser_round_trips(cases: u32) -> Result<(), String> {
    let strategy = (
        word(XYZ, 6),
        nonassoc(5),
        poly3(6),
        small_algebra("e"),
        prop::collection::vec(poly3(4), 1..=3),
    );
    run(cases, strategy, |(w, p, c, a, sys)| {
        prop_assert_eq!(MagmaWord::parse(&w.to_string()).unwrap(), w);

        let back = NonAssocPoly::parse(Rationals, p.alphabet(), &p.to_string()).unwrap();
        prop_assert_eq!(back, p);

        let r = ring3();
        let order = MonomialOrder::degrevlex(3);
        prop_assert_eq!(r.parse(&r.format(&c, &order)).unwrap(), c);

        let text = a.to_text();
        let a2 = FinAlgebra::parse(Rationals, &text).unwrap();
        prop_assert_eq!(a2.to_text(), text);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                prop_assert_eq!(a2.product(i, j), a.product(i, j));
            }
        }

        let lr = PolyRing::new(Rationals, &["la1", "la2", "mu1"]);
        let relabel = |p: &Q| r.map_coeffs(&lr, p, |x| Ok(x.clone())).unwrap();
        let sys: Vec<Q> = sys.iter().map(relabel).collect();
        let doc = SingDocument::from_system(&lr, &order, 0, "f", "i", &sys).unwrap();
        let again = singio::parse(&singio::print(&doc)).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(again.main_ideal().unwrap(), sys.clone());

        let cert = nacas::groebner::Certificate {
            ring: lr.clone(),
            order: order.clone(),
            generators: sys.clone(),
            cofactors: sys.iter().map(|_| lr.from_i64(1)).collect(),
            target: lr.dot(&vec![lr.one(); sys.len()], &sys),
        };
        let text = write_certificate(&cert);
        match read_certificate(&text).unwrap() {
            AnyCertificate::Rational(c2) => {
                prop_assert_eq!(write_certificate(&c2), text);
                prop_assert!(verify_certificate(&c2).is_valid());
            }
            AnyCertificate::Modular(_) => prop_assert!(false, "characteristic changed"),
        }
        Ok(())
    })
}

/// Every check at a fixed case count, by name.
pub fn all(cases: u32) -> BTreeMap<&'static str, Result<(), String>> {
    let mut out = BTreeMap::new();
    out.insert("groebner invariants", groebner_invariants(cases));
    out.insert("basis shuffle uniqueness", basis_shuffle_uniqueness(cases));
    out.insert("division identity", division_identity(cases));
    out.insert("modular certificate consistency", modular_certificate_consistency(cases));
    out.insert("semidirect laws", semidirect_laws(cases));
    out.insert("homogeneous sum", homogeneous_sum(cases));
    out.insert("polarization recovery", polarization_recovery(cases));
    out.insert("parser round trips", parser_round_trips(cases));
    out
}
