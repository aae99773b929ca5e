//! The nine triple sums agree with their constant-term integrals and with
//! their single-series reductions.

use qrucible_core::SeriesContext;
use qrucible_dsl::{elaborate, parse};

const ORDER: i64 = 50;

// (u, v, w), reduction, u for the reduction
const KR: [(&str, &str, &str, &str, &str); 9] = [
    ("q", "1", "q^3", "fra", "q"),
    ("q^2", "q^4", "q^9", "frc", "q^2"),
    ("q^4", "q^6", "q^15", "frc", "q^4"),
    ("q", "q^6", "q^9", "fre", "q"),
    ("q^2", "q^2", "q^9", "f32", "q^2"),
    ("q^3", "q^5", "q^12", "frc", "q^3"),
    ("q", "q^3", "q^6", "frc", "q"),
    ("q", "q", "q^6", "f32", "q"),
    ("q^2", "q^-1", "q^6", "far", "q^2"),
];

fn reduction(kind: &str, u: &str) -> String {
    let t = match kind {
        "fra" => "qp(-U^(1/2)*q^(-1/2),U^(1/2)*q^(1/2)*w2;q^2;inf)*phi([q^-1*w,-U^(1/2)*q^(1/2)*w];[-U^(1/2)*q^(-1/2)];q^2;U^(1/2)*q^(1/2)*w2)",
        "frc" => "qp(-U,q*w2;q^2;inf)*phi([U^(1/2)*w,-U^(1/2)*w];[-U];q^2;q*w2)",
        "fre" => "qp(-U*q,U*w2;q^2;inf)*phi([-w,U*q*w];[-U*q];q^2;U*w2)",
        "f32" => "qp(U*q^4;q^4;inf)*phi([q*w,q*w2];[U^(1/2)*q^2,-U^(1/2)*q^2];q^2;-U)",
        "far" => "qp(U*q;q^4;inf)*phi([q^-1*w,q^-1*w2];[U^(1/2)*q^(1/2),-U^(1/2)*q^(1/2)];q^2;-U*q)",
        _ => unreachable!(),
    };
    t.replace('U', &format!("({u})"))
}

#[test]
fn three_evaluators_agree() {
    let ctx = SeriesContext::new(2, 2 * ORDER).unwrap();
    for (u, v, w, kind, ru) in KR {
        let sum = elaborate(&parse(&format!("F({u},{v},{w})")).unwrap(), &ctx).unwrap();
        let ct = format!("qp(q^2;q^2;inf)*ct{{qp(1/z,q^2*z;q^2;inf)*qp(-({w})*z^3;q^6;inf) / (qp(-({u})*z;q;inf)*qp(({v})*z^2;q^4;inf))}}");
        let ct = elaborate(&parse(&ct).unwrap(), &ctx).unwrap();
        let single = elaborate(&parse(&reduction(kind, ru)).unwrap(), &ctx).unwrap();
        assert_eq!(sum.first_mismatch(&ct, 2 * ORDER).unwrap(), None, "F({u},{v},{w}) vs integral");
        assert_eq!(sum.first_mismatch(&single, 2 * ORDER).unwrap(), None, "F({u},{v},{w}) vs {kind}");
        assert_eq!(ct.first_mismatch(&single, 2 * ORDER).unwrap(), None, "integral vs {kind}");
    }
}

#[test]
fn core_evaluators_agree_with_the_language() {
    use qrucible_core::ctengine::{kr_f_by_ct, kr_f_by_sum};
    use qrucible_core::QMonomial;
    let ctx = SeriesContext::new(1, 30).unwrap();
    let (u, v, w) = (QMonomial::q_pow(1, 1), QMonomial::q_pow(6, 1), QMonomial::q_pow(9, 1));
    let a = kr_f_by_sum(&u, &v, &w, &ctx).unwrap();
    let b = kr_f_by_ct(&u, &v, &w, &ctx).unwrap();
    let c = elaborate(&parse("F(q,q^6,q^9)").unwrap(), &ctx).unwrap();
    assert!(a.equal_to_order(&b, 30).unwrap());
    assert!(a.equal_to_order(&c, 30).unwrap());
}
