use num_rational::Rational64;
use num_traits::ToPrimitive;

use qrucible_core::{CycRat, SeriesContext};
use qrucible_dsl::{elaborate, parse, print, Count, DslError, Expr};

fn ctx(d: u32, order: i64) -> SeriesContext {
    SeriesContext::new(d, order).unwrap()
}

#[test]
fn parses_pochhammer_and_prints_it_back() {
    let e = parse("qp(q;q;inf)").unwrap();
    assert_eq!(e, Expr::Poch { args: vec![Expr::q()], base: Box::new(Expr::q()), count: Count::Infinite });
    assert_eq!(print(&e), "qp(q;q;inf)");
}

#[test]
fn parses_fractional_monomial() {
    assert_eq!(
        parse("q^(3/2)*w2").unwrap(),
        Expr::Mul(Box::new(Expr::QPower(Rational64::new(3, 2))), Box::new(Expr::Omega(2)))
    );
}

#[test]
fn phi_with_cube_roots_round_trips() {
    let src = "phi([q^(3/4)*w, -q^(3/4)*w]; [-q^(3/2)]; q; q^(1/2)*w2)";
    let e = parse(src).unwrap();
    let Expr::Phi { uppers, lowers, .. } = &e else { panic!("{e:?}") };
    assert_eq!((uppers.len(), lowers.len()), (2, 1));
    assert_eq!(parse(&print(&e)).unwrap(), e);
}

#[test]
fn product_side_counts_partitions() {
    // parts ≡ ±1 mod 5, counted by hand for n < 7
    let s = elaborate(&parse("1/qp(q,q^4;q^5;inf)").unwrap(), &ctx(1, 7)).unwrap();
    let got: Vec<i64> = (0..7).map(|e| s.coeff(e).unwrap().to_integer().unwrap().to_i64().unwrap()).collect();
    assert_eq!(got, vec![1, 1, 1, 1, 2, 2, 3]);
}

#[test]
fn triple_sum_against_text_of_its_product() {
    let c = ctx(1, 40);
    let l = elaborate(&parse("F(q,1,q^3)").unwrap(), &c).unwrap();
    let r = elaborate(&parse("qp(q^3;q^12;inf) / qp(q,q^2;q^4;inf)").unwrap(), &c).unwrap();
    assert_eq!(l.first_mismatch(&r, 40).unwrap(), None);
}

#[test]
fn integer_arithmetic() {
    let s = elaborate(&parse("2+3").unwrap(), &ctx(1, 4)).unwrap();
    assert_eq!(s.coeff(0), Some(CycRat::from_int(5)));
    assert_eq!(s.valuation(), 0);
    assert_eq!(s.terms().count(), 1);
}

#[test]
fn half_integer_grid_is_enforced() {
    let e = parse("qp(q^(1/2);q;inf)").unwrap();
    assert!(matches!(elaborate(&e, &ctx(1, 10)), Err(DslError::Eval { .. })));
    assert!(elaborate(&e, &ctx(2, 10)).is_ok());
}
