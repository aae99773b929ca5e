use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

use qrucible_dsl::{parse, print, Count, Expr, NamedSum};

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0i64..40, 1i64..6).prop_map(|(n, d)| Expr::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        (1u8..=2).prop_map(Expr::Omega),
        (-12i64..12, 1i64..5).prop_map(|(n, d)| Expr::QPower(Rational64::new(n, d))),
        prop_oneof![Just("z"), Just("t")].prop_map(|v| Expr::Var(v.to_string())),
        prop::sample::select(NamedSum::ALL.to_vec()).prop_map(Expr::MultiSum),
    ]
}

fn is_literal(e: &Expr) -> bool {
    match e {
        Expr::Rational(_) => true,
        Expr::Neg(x) => matches!(x.as_ref(), Expr::Rational(_)),
        _ => false,
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(6, 48, 4, |inner| {
        let b = |s: BoxedStrategy<Expr>| s.prop_map(Box::new);
        let i = inner.clone().boxed();
        prop_oneof![
            b(i.clone()).prop_map(Expr::Neg),
            (b(i.clone()), b(i.clone())).prop_map(|(x, y)| Expr::Add(x, y)),
            (b(i.clone()), b(i.clone())).prop_map(|(x, y)| Expr::Sub(x, y)),
            (b(i.clone()), b(i.clone())).prop_map(|(x, y)| Expr::Mul(x, y)),
            (b(i.clone()), b(i.clone())).prop_map(|(x, y)| Expr::Div(x, y)),
            (b(i.clone()), b(i.clone()))
                .prop_filter("q with a literal exponent folds to QPower", |(x, y)| !(**x == Expr::q() && is_literal(y)))
                .prop_map(|(x, y)| Expr::Pow(x, y)),
            (prop::collection::vec(i.clone(), 1..3), b(i.clone()), prop::option::of(b(i.clone()))).prop_map(|(args, base, n)| {
                Expr::Poch { args, base, count: n.map_or(Count::Infinite, Count::Finite) }
            }),
            (prop::collection::vec(i.clone(), 0..3), prop::collection::vec(i.clone(), 0..2), b(i.clone()), b(i.clone()))
                .prop_map(|(uppers, lowers, base, arg)| Expr::Phi { uppers, lowers, base, arg }),
            (b(i.clone()), b(i.clone()), b(i.clone())).prop_map(|(u, v, w)| Expr::KrF(u, v, w)),
            b(i.clone()).prop_map(Expr::Jtp),
            b(i.clone()).prop_map(Expr::Ct),
            (b(i.clone()), b(i.clone()), b(i.clone()), b(i.clone())).prop_map(|(n, a, base, z)| Expr::RogersC { n, a, base, z }),
            (b(i.clone()), [i.clone(), i.clone(), i.clone(), i.clone()], b(i.clone()), b(i.clone()))
                .prop_map(|(n, ps, base, z)| Expr::AwPoly { n, params: Box::new(ps), base, z }),
            (b(i.clone()), b(i.clone()), i.clone()).prop_map(|(lo, hi, body)| Expr::Sum {
                var: "k".into(),
                lo,
                hi,
                body: Box::new(Expr::Mul(Box::new(body), Box::new(Expr::Var("k".into())))),
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn print_then_parse_is_identity(e in expr()) {
        let text = print(&e);
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(print(&back), text);
    }
}
