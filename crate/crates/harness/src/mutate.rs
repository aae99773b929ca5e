//! Exponent perturbation, for checking that the runner notices wrong sides.

use num_rational::Rational64;
use qrucible_core::SeriesContext;
use qrucible_dsl::{elaborate_value, Elaborated, Expr};

use crate::registry::Case;
use crate::report::Status;
use crate::runner::verify;

fn walk<'a>(e: &'a mut Expr, out: &mut Vec<&'a mut Rational64>) {
    if let Expr::QPower(r) = e {
        out.push(r);
        return;
    }
    for c in e.children_mut() {
        walk(c, out);
    }
}

/// Number of literal q-powers in `e`.
pub fn exponent_sites(e: &Expr) -> usize {
    let mut e = e.clone();
    let mut v = Vec::new();
    walk(&mut e, &mut v);
    v.len()
}

/// `e` with the `k`-th literal q-power (pre-order) raised by `by`.
pub fn bump_exponent(e: &Expr, k: usize, by: Rational64) -> Option<Expr> {
    let mut e = e.clone();
    let mut v = Vec::new();
    walk(&mut e, &mut v);
    let r = v.into_iter().nth(k)?;
    *r += by;
    Some(e)
}

fn side(e: &Expr, c: &Case) -> Option<Elaborated> {
    let ctx = SeriesContext::new(c.case.denom, c.case.order).ok()?;
    elaborate_value(e, &ctx, c.case.t_order).ok()
}

/// Raise right-side exponents by one, a site at a time, until the value
/// changes below the case order; then the runner must report `FAIL` at the
/// first coefficient where the old and new right sides differ.
pub fn detects_perturbation(c: &Case) -> Result<(), String> {
    let orig = side(&c.case.rhs, c).ok_or("right side does not evaluate")?;
    let one = Rational64::from_integer(1);
    for k in 0..exponent_sites(&c.case.rhs) {
        let rhs = bump_exponent(&c.case.rhs, k, one).expect("site exists");
        let Some(mutated) = side(&rhs, c) else { continue };
        let Some(want) = orig.first_mismatch(&mutated, c.case.order).map_err(|e| e.to_string())? else { continue };
        let mut m = c.clone();
        m.case.rhs = rhs;
        let r = verify(&m);
        if r.status != Status::Fail {
            return Err(format!("site {k}: status {:?}", r.status));
        }
        let got = r.first_mismatch.ok_or("no mismatch reported")?;
        let same = got.scaled_exponent == want.exp
            && got.tdeg == want.tdeg
            && got.zdeg == want.zdeg
            && got.lhs == want.lhs.to_string()
            && got.rhs == want.rhs.to_string();
        if !same || r.proven_order != want.exp {
            return Err(format!("site {k}: reported {got:?}, expected {want:?}"));
        }
        return Ok(());
    }
    Err("no exponent perturbation changes the right side".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qrucible_dsl::{parse, print};

    #[test]
    fn bumps_in_preorder() {
        let e = parse("qp(q^3;q^12;inf) / qp(q,q^2;q^4;inf)").unwrap();
        assert_eq!(exponent_sites(&e), 5);
        let m = bump_exponent(&e, 1, Rational64::from_integer(1)).unwrap();
        assert_eq!(print(&m), "qp(q^3;q^13;inf) / qp(q,q^2;q^4;inf)");
        assert!(bump_exponent(&e, 5, Rational64::from_integer(1)).is_none());
    }
}
