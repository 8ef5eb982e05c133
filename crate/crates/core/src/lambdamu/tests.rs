use super::*;
use crate::action::free_product_partial;
use crate::freealg::named_identity;
use crate::singio;

use XBasisSymbol::{T, Y, Z};
use Side::{L, R};

const FIGURE1: &str = include_str!("../../fixtures/figure1.sing");

fn figure() -> Vec<CoeffPoly<Rationals>> {
    singio::parse(FIGURE1).unwrap().main_ideal().unwrap()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[test]
fn census() {
    assert_eq!(basis(ActionVariant::TwoSided).len(), 79);
    assert_eq!(basis(ActionVariant::Commutative).len(), 16);
    assert_eq!(basis(ActionVariant::Anticommutative).len(), 16);
    let b = basis(ActionVariant::TwoSided);
    let distinct: HashSet<_> = b.iter().collect();
    assert_eq!(distinct.len(), 79);
}

#[test]
fn action_table_examples() {
    let two = ActionVariant::TwoSided;
    assert_eq!(act_signed(1, XBasisSymbol::X, L, two), Some((1, Y(1, L))));
    assert_eq!(act_signed(2, Y(2, R), L, two), None);
    assert_eq!(act_signed(3, Z(2, 1, L, L), R, two), Some((1, T(2, 1, 3, L, L, R))));
    assert_eq!(act_signed(1, T(1, 2, 3, L, L, L), R, two), None);
    let anti = ActionVariant::Anticommutative;
    assert_eq!(act_signed(2, XBasisSymbol::X, L, anti), Some((-1, Y(2, R))));
    assert_eq!(act_signed(2, XBasisSymbol::X, R, anti), Some((1, Y(2, R))));
}

#[test]
fn expand_examples() {
    let e = Expander::new(ActionVariant::TwoSided);
    let (x, b1, b2) = (MixedWord::x(), MixedWord::b(1), MixedWord::b(2));
    let m = MixedWord::mul;
    let r = e.expand(&m(&b1, &x)).unwrap();
    assert_eq!(r.terms.len(), 1);
    assert_eq!(r.coeff(&Y(1, L)), Some(&e.ring.one()));

    let r = e.expand(&m(&m(&b1, &b2), &x)).unwrap();
    let expected = [
        (Z(1, 2, R, R), 1),
        (Z(1, 2, L, R), 2),
        (Z(1, 2, R, L), 3),
        (Z(1, 2, L, L), 4),
        (Z(2, 1, R, R), 5),
        (Z(2, 1, L, R), 6),
        (Z(2, 1, R, L), 7),
        (Z(2, 1, L, L), 8),
    ];
    assert_eq!(r.terms.len(), 8);
    for (s, k) in expected {
        assert_eq!(r.coeff(&s), Some(&e.mu(k)), "{s}");
    }

    assert_eq!(e.expand(&m(&x, &x)).unwrap_err(), LambdaMuError::ModuleLetters(2));
    assert_eq!(e.expand(&m(&b1, &b2)).unwrap_err(), LambdaMuError::ModuleLetters(0));
}

#[test]
fn deep_words_hit_the_rule_cap() {
    let e = Expander::new(ActionVariant::Commutative);
    let b = MixedWord::b(1);
    // a left comb of 18 actors has 17 nested products to unfold
    let mut w = b.clone();
    for _ in 0..17 {
        w = MixedWord::mul(&w, &b);
    }
    let w = MixedWord::mul(&w, &MixedWord::x());
    assert_eq!(e.expand(&w).unwrap_err(), LambdaMuError::RuleCap);
}

#[test]
fn anchor_polynomial() {
    let e = Expander::new(ActionVariant::TwoSided);
    let p = e.probe2(&degree2_probes(ActionVariant::TwoSided)[0]).unwrap();
    let expected = e.ring.parse("mu5^2 + mu1*mu6 + la5*mu7 + la1*mu8 - 1").unwrap();
    assert_eq!(p.diff.coeff(&Z(1, 2, R, R)), Some(&expected));
    let doc = singio::parse(FIGURE1).unwrap();
    assert_eq!(doc.poly("f(9)"), Some(&expected));
}

#[test]
fn two_sided_system_matches_reference_listing_as_a_set() {
    let (e, polys) = generate_system(ActionVariant::TwoSided).unwrap();
    assert_eq!(polys.len(), 224);
    let fig = figure();
    let ours: HashSet<_> = polys.iter().collect();
    let theirs: HashSet<_> = fig.iter().collect();
    assert_eq!(ours.len(), 224);
    assert_eq!(ours, theirs);
    for p in &polys {
        assert!(!p.is_zero());
        assert!(p.total_degree().unwrap() <= 3);
        let c = e.ring.eval(p, &vec![q(0); 16]);
        assert!(c == q(0) || c == q(-1), "{}", e.ring.format(p, &MonomialOrder::degrevlex(16)));
    }
}

#[test]
fn frozen_convention_is_the_search_winner() {
    let (conv, score) = convention_search(&figure()).unwrap();
    assert_eq!(conv, FROZEN_CONVENTION);
    assert_eq!(score.set_matches, 224);
    assert_eq!(score.positional, 13);
}

#[test]
fn collapsed_degree_two_systems() {
    let (e, polys) = generate_system(ActionVariant::Commutative).unwrap();
    let want: Vec<_> = ["la^2 + mu", "la*mu - 1"].iter().map(|t| e.ring.parse(t).unwrap()).collect();
    assert_eq!(polys, want);

    let (e, polys) = generate_system(ActionVariant::Anticommutative).unwrap();
    let want: Vec<_> = ["mu - la^2", "la*mu - 1"].iter().map(|t| e.ring.parse(t).unwrap()).collect();
    assert_eq!(polys, want);
}

#[test]
fn collapsed_solutions() {
    assert_eq!(solve_anticomm().unwrap(), (q(1), q(1)));
    assert_eq!(solve_commutative().unwrap(), (q(-1), q(-1)));
    // each system vanishes at its solution
    for (v, pt) in [(ActionVariant::Anticommutative, q(1)), (ActionVariant::Commutative, q(-1))] {
        let (e, polys) = generate_system(v).unwrap();
        for p in polys {
            assert!(e.ring.eval(&p, &[pt.clone(), pt.clone()]).is_zero());
        }
    }
}

#[test]
fn jacobi_from_the_anticommutative_solution() {
    let (la, mu) = solve_anticomm().unwrap();
    let rule = bound_short_rule(&la, &mu);
    let jacobi = named_identity(Rationals, "jacobi", None).unwrap();
    assert!(rule.equivalent_mod_anticommutativity(&jacobi));
    // at the commutative point the same rule is not Jacobi
    let other = bound_short_rule(&q(-1), &q(-1));
    assert!(!other.equivalent_mod_anticommutativity(&jacobi));
}

#[test]
fn commutative_degree_three_constraint() {
    let c = comm_degree3_constraint().unwrap();
    assert_eq!(c.len(), 6);
    for (s, v) in &c {
        assert!(matches!(s, T(..)), "{s}");
        assert_eq!(*v, q(2));
    }
    let f2 = PrimeField::new(2).unwrap();
    assert!(comm_degree3_constraint_mod(&f2).unwrap().is_empty());
    let f3 = PrimeField::new(3).unwrap();
    assert_eq!(comm_degree3_constraint_mod(&f3).unwrap().len(), 6);

    // symbolic coefficients specialize to 2 at (−1, −1) and differ elsewhere
    let (e, sym) = comm_degree3_symbolic().unwrap();
    for coeff in sym.terms.values() {
        assert_eq!(e.ring.eval(coeff, &[q(-1), q(-1)]), q(2));
    }
    assert!(sym.terms.values().any(|c| e.ring.eval(c, &[q(1), q(1)]) != q(2)));
}

#[test]
fn module_actions_reach_t_symbols() {
    let e = Expander::new(ActionVariant::TwoSided);
    let (x, acts) = e.module();
    assert_eq!(x.dim(), 79);
    let bs: Vec<_> = (1..=3)
        .map(|i| FinAlgebra::abelian(Rationals, vec![format!("b{i}")]))
        .collect();
    let a = free_product_partial(&bs, &x, &acts, 4).unwrap();
    let v = |s: &str| a.basis_vec(a.index_of(s).unwrap());
    let b2x = a.mul(&v("b2"), &v("x"));
    assert_eq!(a.mul(&a.mul(&v("b1"), &b2x), &v("b3")), v("t213_llr"));
    let w = a.mul(&a.mul(&b2x, &v("b3")), &v("b2"));
    assert!(w.iter().all(|c| c.is_zero()));
    assert_eq!(a.mul(&v("b1"), &a.mul(&v("b2"), &v("y3_r"))), v("t321_rll"));
    // the same products through the expansion engine
    let m = MixedWord::mul;
    let (b1, b2, b3, xx) = (MixedWord::b(1), MixedWord::b(2), MixedWord::b(3), MixedWord::x());
    let r = e.expand(&m(&m(&b1, &m(&b2, &xx)), &b3)).unwrap();
    assert_eq!(r.coeff(&T(2, 1, 3, L, L, R)), Some(&e.ring.one()));
    assert!(e.expand(&m(&m(&m(&b2, &xx), &b3), &b2)).unwrap().is_zero());
}

#[test]
fn exports_parse_back() {
    let (e, polys) = generate_system(ActionVariant::TwoSided).unwrap();
    let order = MonomialOrder::degrevlex(16);
    let doc = singio::SingDocument::from_system(&e.ring, &order, 0, "f", "i", &polys).unwrap();
    let again = singio::parse(&singio::print(&doc)).unwrap();
    assert_eq!(again.main_ideal().unwrap(), polys);
    let native = to_native_text(&e.ring, &polys);
    assert_eq!(native.lines().count(), 225);
}
