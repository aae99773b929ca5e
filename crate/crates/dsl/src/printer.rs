//! Canonical text form. `parse(&print(e)) == e` for every canonical AST.

use std::fmt::Write;

use num_rational::Rational64;
use num_traits::{One, Signed};

use crate::ast::{Count, Expr};

const SUM: u8 = 1;
const PROD: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PROD,
        Expr::Neg(..) => UNARY,
        Expr::Pow(..) => 4,
        Expr::QPower(r) if !r.is_one() => 4,
        _ => ATOM,
    }
}

pub fn print(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn wrapped(out: &mut String, e: &Expr, min: u8) {
    if prec(e) < min {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn list(out: &mut String, es: &[Expr]) {
    for (i, e) in es.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_expr(out, e);
    }
}

fn exponent(r: Rational64) -> String {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_string()
    } else {
        format!("({r})")
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Rational(r) => {
            let _ = write!(out, "{r}");
        }
        Expr::Omega(1) => out.push('w'),
        Expr::Omega(k) => {
            let _ = write!(out, "w{k}");
        }
        Expr::QPower(r) if r.is_one() => out.push('q'),
        Expr::QPower(r) => {
            let _ = write!(out, "q^{}", exponent(*r));
        }
        Expr::Var(v) => out.push_str(v),
        Expr::Neg(x) => {
            out.push('-');
            wrapped(out, x, UNARY);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            wrapped(out, a, SUM);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            wrapped(out, b, PROD);
        }
        Expr::Mul(a, b) => {
            wrapped(out, a, PROD);
            out.push('*');
            wrapped(out, b, UNARY);
        }
        Expr::Div(a, b) => {
            wrapped(out, a, PROD);
            out.push_str(" / ");
            wrapped(out, b, UNARY);
        }
        Expr::Pow(b, x) => {
            wrapped(out, b, ATOM);
            out.push('^');
            match x.as_ref() {
                Expr::Neg(y) if prec(y) == ATOM => {
                    out.push('-');
                    write_expr(out, y);
                }
                _ => wrapped(out, x, ATOM),
            }
        }
        Expr::Poch { args, base, count } => {
            out.push_str("qp(");
            list(out, args);
            out.push(';');
            write_expr(out, base);
            out.push(';');
            match count {
                Count::Infinite => out.push_str("inf"),
                Count::Finite(n) => write_expr(out, n),
            }
            out.push(')');
        }
        Expr::Phi { uppers, lowers, base, arg } => {
            out.push_str("phi([");
            list(out, uppers);
            out.push_str("];[");
            list(out, lowers);
            out.push_str("];");
            write_expr(out, base);
            out.push(';');
            write_expr(out, arg);
            out.push(')');
        }
        Expr::KrF(u, v, w) => {
            out.push_str("F(");
            list(out, &[u.as_ref().clone(), v.as_ref().clone(), w.as_ref().clone()]);
            out.push(')');
        }
        Expr::MultiSum(n) => {
            let _ = write!(out, "{}()", n.name());
        }
        Expr::Jtp(z) => {
            out.push_str("jtp(");
            write_expr(out, z);
            out.push(')');
        }
        Expr::Ct(x) => {
            out.push_str("ct{");
            write_expr(out, x);
            out.push('}');
        }
        Expr::RogersC { n, a, base, z } => {
            out.push_str("rogersC(");
            for (i, x) in [n, a, base, z].into_iter().enumerate() {
                if i > 0 {
                    out.push(';');
                }
                write_expr(out, x);
            }
            out.push(')');
        }
        Expr::AwPoly { n, params, base, z } => {
            out.push_str("awp(");
            write_expr(out, n);
            out.push(';');
            list(out, params.as_slice());
            out.push(';');
            write_expr(out, base);
            out.push(';');
            write_expr(out, z);
            out.push(')');
        }
        Expr::Sum { var, lo, hi, body } => {
            let _ = write!(out, "sum({var} = ");
            write_expr(out, lo);
            out.push_str("..");
            write_expr(out, hi);
            out.push_str("; ");
            write_expr(out, body);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn pochhammer_text() {
        let e = Expr::Poch { args: vec![Expr::q()], base: Expr::q().b(), count: Count::Infinite };
        assert_eq!(print(&e), "qp(q;q;inf)");
    }

    #[test]
    fn canonical_text_is_a_fixed_point() {
        for src in [
            "1/qp(q,q^4;q^5;inf)",
            "-(a)",
            "q^(-3/2)*w2 - -q",
            "2^-3 / (1 - q)",
            "sum(l = 0..3; q^(l*l)/qp(q;q;l))",
            "phi([q^(3/4)*w, -q^(3/4)*w]; [-q^(3/2)]; q; q^(1/2)*w2)",
            "awp(2; q, -q, q^(1/2), -1; q^2; z^2)*(z + 1/z)",
            "ct{qp(1/z,q^2*z;q^2;inf) / qp(-q*z;q;inf)}",
        ] {
            let Ok(e) = parse(src) else { continue };
            let p = print(&e);
            assert_eq!(parse(&p).unwrap(), e, "{p}");
            assert_eq!(print(&parse(&p).unwrap()), p);
        }
    }

    #[test]
    fn literal_versus_division() {
        assert_eq!(print(&parse("3/4").unwrap()), "3/4");
        assert_eq!(print(&parse("3 / 4").unwrap()), "3 / 4");
    }
}
