use super::*;

fn qring(vars: &[&str]) -> PolyRing<Rationals> {
    PolyRing::new(Rationals, vars)
}

fn polys<R: Ring>(ring: &PolyRing<R>, texts: &[&str]) -> Vec<CoeffPoly<R>> {
    texts.iter().map(|t| ring.parse(t).unwrap()).collect()
}

fn show<R: Ring>(ring: &PolyRing<R>, order: &MonomialOrder, ps: &[CoeffPoly<R>]) -> Vec<String> {
    ps.iter().map(|p| ring.format(p, order)).collect()
}

#[test]
fn normal_form_examples() {
    let r = qring(&["x", "y"]);
    let lex = MonomialOrder::lex(2);
    let (rem, q) = normal_form(&r, &r.parse("x^2").unwrap(), &polys(&r, &["x"]), &lex).unwrap();
    assert!(rem.is_zero());
    assert_eq!(show(&r, &lex, &q), ["x"]);

    let dp = MonomialOrder::degrevlex(2);
    let (rem, q) = normal_form(&r, &r.parse("x + 1").unwrap(), &polys(&r, &["y"]), &dp).unwrap();
    assert_eq!(r.format(&rem, &dp), "x + 1");
    assert!(q[0].is_zero());

    let f = r.parse("x^2 + y^2 - 1").unwrap();
    let g = polys(&r, &["x - y"]);
    let (rem, q) = normal_form(&r, &f, &g, &dp).unwrap();
    assert_eq!(rem, r.parse("2*y^2 - 1").unwrap());
    assert_eq!(r.add(&r.dot(&q, &g), &rem), f);
}

#[test]
fn normal_form_rejects_empty_and_foreign() {
    let r = qring(&["x", "y"]);
    let dp = MonomialOrder::degrevlex(2);
    assert_eq!(
        normal_form(&r, &r.one(), &[], &dp).unwrap_err(),
        GroebnerError::EmptyInput
    );
    let other = qring(&["a", "b", "c"]);
    let foreign = other.parse("a*b*c").unwrap();
    assert!(normal_form(&r, &foreign, &polys(&r, &["x"]), &dp).is_err());
}

#[test]
fn buchberger_examples() {
    let r = qring(&["x"]);
    let dp = MonomialOrder::degrevlex(1);
    let gb = buchberger(&r, &polys(&r, &["x", "x + 1"]), &dp, false, GbOptions::default()).unwrap();
    assert!(gb.is_unit());
    let gb = buchberger(&r, &polys(&r, &["x"]), &dp, false, GbOptions::default()).unwrap();
    assert_eq!(show(&r, &dp, &gb.basis), ["x"]);
    let gb = buchberger(&r, &[], &dp, false, GbOptions::default()).unwrap();
    assert!(gb.basis.is_empty());
}

#[test]
fn unit_over_q_goes_through_a_verified_certificate() {
    let r = qring(&["x", "y"]);
    let dp = MonomialOrder::degrevlex(2);
    let f = polys(&r, &["x*y - 1", "x^2 - 2", "y^2 - 3"]);
    let gb = buchberger(&r, &f, &dp, true, GbOptions::default()).unwrap();
    assert!(gb.is_unit());
    assert!(matches!(gb.route, BasisRoute::Certified(_)));
    let lift = gb.lift.unwrap();
    assert_eq!(r.dot(&lift[0], &f), r.one());
}

#[test]
fn reduce_basis_examples() {
    let r = qring(&["x"]);
    let dp = MonomialOrder::degrevlex(1);
    let b = reduce_basis(&r, &polys(&r, &["x", "x + 1", "1"]), &dp).unwrap();
    assert_eq!(show(&r, &dp, &b), ["1"]);
    let b = reduce_basis(&r, &polys(&r, &["2*x"]), &dp).unwrap();
    assert_eq!(show(&r, &dp, &b), ["x"]);

    let r = qring(&["la", "mu"]);
    let lex = MonomialOrder::lex(2);
    let b = reduce_basis(&r, &polys(&r, &["mu - la^2", "1 - la*mu"]), &lex).unwrap();
    // μ = λ² and λ³ = 1, so μ³ = 1 and λ = μ⁻¹ = μ²
    assert_eq!(show(&r, &lex, &b), ["mu^3 - 1", "la - mu^2"]);
}

#[test]
fn reduce_basis_is_idempotent() {
    let r = qring(&["x", "y", "z"]);
    let dp = MonomialOrder::degrevlex(3);
    let b = reduce_basis(&r, &polys(&r, &["x^2 - y*z", "y^2 - x*z", "x*y - z^2"]), &dp).unwrap();
    assert_eq!(reduce_basis(&r, &b, &dp).unwrap(), b);
}

#[test]
fn lex_solves_two_variable_systems() {
    let r = qring(&["la", "mu"]);
    let lex = MonomialOrder::lex(2);
    let b = reduce_basis(&r, &polys(&r, &["mu + la^2", "la*mu - 1"]), &lex).unwrap();
    assert_eq!(show(&r, &lex, &b), ["mu^3 + 1", "la + mu^2"]);
    // μ³ = −1 has the single rational root −1
    let minus_one = Rational::from_integer((-1).into());
    assert_eq!(rational_points_2var(&r, &b).unwrap(), vec![(minus_one.clone(), minus_one)]);
    let b = reduce_basis(&r, &polys(&r, &["mu - la^2", "la*mu - 1"]), &lex).unwrap();
    assert_eq!(rational_points_2var(&r, &b).unwrap(), vec![(Rational::one(), Rational::one())]);
}

#[test]
fn certify_examples() {
    let r = qring(&["x"]);
    let dp = MonomialOrder::degrevlex(1);
    let f = polys(&r, &["x", "1 - x"]);
    let c = certify_inconsistency(&r, &f, &dp, GbOptions::default()).unwrap();
    assert!(verify_certificate(&c).is_valid());
    assert_eq!(r.dot(&c.cofactors, &f), r.one());

    let consistent = polys(&r, &["x^2 - x"]);
    assert_eq!(
        certify_inconsistency(&r, &consistent, &dp, GbOptions::default()).unwrap_err(),
        GroebnerError::ConsistentSystem
    );
}

#[test]
fn certify_over_prime_field() {
    let k = PrimeField::new(2).unwrap();
    let r = PolyRing::new(k, &["x", "y"]);
    let dp = MonomialOrder::degrevlex(2);
    // y = 1 forces x = 1, where x² + x + 1 = 1
    let f = polys(&r, &["x^2 + x + 1", "x*y + 1", "y + 1"]);
    let c = certify_inconsistency(&r, &f, &dp, GbOptions::default()).unwrap();
    assert!(verify_certificate(&c).is_valid());
    let consistent = polys(&r, &["x^2 + x + 1"]);
    assert_eq!(
        certify_inconsistency(&r, &consistent, &dp, GbOptions::default()).unwrap_err(),
        GroebnerError::ConsistentSystem
    );
}

#[test]
fn verify_examples() {
    let r = qring(&["x"]);
    let dp = MonomialOrder::degrevlex(1);
    let generators = polys(&r, &["x", "1 - x"]);
    let mut cert = Certificate {
        ring: r.clone(),
        order: dp,
        generators,
        cofactors: polys(&r, &["1", "1"]),
        target: r.one(),
    };
    assert!(verify_certificate(&cert).is_valid());
    cert.cofactors[1] = r.zero();
    assert_eq!(verify_certificate(&cert), Verification::Invalid(r.parse("-1 + x").unwrap()));
    cert.cofactors.pop();
    assert!(!verify_certificate(&cert).is_valid());
}

#[test]
fn integer_member_example() {
    let r = qring(&["x"]);
    let dp = MonomialOrder::degrevlex(1);
    let im = integer_member(&r, &polys(&r, &["x", "x - 2"]), &dp, GbOptions::default()).unwrap();
    assert_eq!(im.m, BigInt::from(2));
    assert!(has_integer_cofactors(&im.certificate));
    assert!(verify_certificate(&im.certificate).is_valid());
    assert_eq!(show(&r, &dp, &im.certificate.cofactors), ["1", "-1"]);
}

#[test]
fn char_transfer_examples() {
    let t = char_transfer(&BigInt::from(12), &BigInt::from(8)).unwrap();
    assert_eq!(t.gcd, BigInt::from(4));
    assert_eq!(t.two_adic, 2);
    assert_eq!(t.primes, vec![BigInt::from(2)]);
    let t = char_transfer(&BigInt::from(15), &BigInt::from(8)).unwrap();
    assert_eq!(t.gcd, BigInt::one());
    assert!(t.primes.is_empty());
    let t = char_transfer(&BigInt::from(90), &BigInt::from(150)).unwrap();
    assert_eq!(t.primes, vec![BigInt::from(2), BigInt::from(3), BigInt::from(5)]);
    assert!(char_transfer(&BigInt::zero(), &BigInt::one()).is_err());
}

#[test]
fn reduce_certificate_mod_p() {
    let r = qring(&["x", "y"]);
    let dp = MonomialOrder::degrevlex(2);
    let f = polys(&r, &["x*y - 1", "x - 3", "y - 4"]);
    let c = certify_inconsistency(&r, &f, &dp, GbOptions::default()).unwrap();
    let im = integer_member_from(&c);
    // 5 ∤ m here, so the reduction is a valid 𝔽₅ certificate
    assert!(!(&im.m % 5u32).is_zero());
    let c5 = reduce_certificate(&c, &PrimeField::new(5).unwrap()).unwrap();
    assert!(verify_certificate(&c5).is_valid());
}

#[test]
fn threads_do_not_change_the_basis() {
    let r = qring(&["a", "b", "c", "d"]);
    let dp = MonomialOrder::degrevlex(4);
    // cyclic 4
    let f = polys(
        &r,
        &["a + b + c + d", "a*b + b*c + c*d + d*a", "a*b*c + b*c*d + c*d*a + d*a*b", "a*b*c*d - 1"],
    );
    let one = buchberger(&r, &f, &dp, false, GbOptions { threads: 1 }).unwrap();
    let four = buchberger(&r, &f, &dp, false, GbOptions { threads: 4 }).unwrap();
    assert_eq!(one.basis, four.basis);
    assert_eq!(one.basis.len(), 7);
}

#[test]
fn lift_matrix_is_exact() {
    let r = qring(&["x", "y", "z"]);
    let dp = MonomialOrder::degrevlex(3);
    let f = polys(&r, &["x^2 + y*z - 2", "y^2 - x*z + 1/3", "z^2 - x*y"]);
    let gb = buchberger(&r, &f, &dp, true, GbOptions::default()).unwrap();
    let lift = gb.lift.unwrap();
    for (g, row) in gb.basis.iter().zip(&lift) {
        assert_eq!(&r.dot(row, &f), g);
    }
}
