//! Suite files: a sequence of `identity "name" { key = value; ... }` blocks.
//!
//! Keys: `lhs`, `rhs` (expressions), `D` (grid denominator, default 1),
//! `order` (in units of 1/D), `ref` and `tags` (strings), `torder` (number of
//! t-coefficients compared, default 1). Unknown or repeated keys are errors.

use num_traits::ToPrimitive;

use crate::ast::Expr;
use crate::error::{DslError, Result, Span};
use crate::lexer::{lex, Tok};
use crate::parser::Parser;

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCase {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub denom: u32,
    /// Comparison order in units of 1/denom.
    pub order: i64,
    pub tags: Vec<String>,
    pub paper_ref: String,
    pub t_order: u32,
    pub span: Span,
}

pub fn parse_suite(src: &str) -> Result<Vec<IdentityCase>> {
    let mut p = Parser::new(lex(src)?);
    let mut out: Vec<IdentityCase> = Vec::new();
    while *p.peek() != Tok::Eof {
        let case = block(&mut p)?;
        if out.iter().any(|c| c.name == case.name) {
            return Err(DslError::syntax(case.span, format!("duplicate identity `{}`", case.name)));
        }
        out.push(case);
    }
    Ok(out)
}

fn string(p: &mut Parser, what: &str) -> Result<String> {
    match p.peek().clone() {
        Tok::Str(s) => {
            p.bump();
            Ok(s)
        }
        _ => Err(p.unexpected(what)),
    }
}

fn number(p: &mut Parser, what: &str) -> Result<i64> {
    let sp = p.span();
    match p.peek().clone() {
        Tok::Number(n, None) => {
            p.bump();
            n.to_i64().ok_or_else(|| DslError::syntax(sp, "number out of range"))
        }
        _ => Err(p.unexpected(what)),
    }
}

fn block(p: &mut Parser) -> Result<IdentityCase> {
    let (kw, sp) = p.ident("`identity`")?;
    if kw != "identity" {
        return Err(DslError::syntax(sp, format!("expected `identity`, found `{kw}`")));
    }
    let name = string(p, "an identity name")?;
    p.expect(&Tok::LBrace, "`{`")?;
    let (mut lhs, mut rhs) = (None, None);
    let (mut denom, mut order, mut t_order) = (None, None, None);
    let (mut paper_ref, mut tags) = (None, None);
    while !p.eat(&Tok::RBrace) {
        let (key, ksp) = p.ident("a field name")?;
        p.expect(&Tok::Eq, "`=`")?;
        let dup = || DslError::syntax(ksp, format!("field `{key}` given twice"));
        match key.as_str() {
            "lhs" => {
                if lhs.replace(p.expr()?).is_some() {
                    return Err(dup());
                }
            }
            "rhs" => {
                if rhs.replace(p.expr()?).is_some() {
                    return Err(dup());
                }
            }
            "D" => {
                if denom.replace(number(p, "a denominator")?).is_some() {
                    return Err(dup());
                }
            }
            "order" => {
                if order.replace(number(p, "an order")?).is_some() {
                    return Err(dup());
                }
            }
            "torder" => {
                if t_order.replace(number(p, "a t-order")?).is_some() {
                    return Err(dup());
                }
            }
            "ref" => {
                if paper_ref.replace(string(p, "a reference string")?).is_some() {
                    return Err(dup());
                }
            }
            "tags" => {
                if tags.replace(string(p, "a tag string")?).is_some() {
                    return Err(dup());
                }
            }
            _ => return Err(DslError::syntax(ksp, format!("unknown field `{key}`"))),
        }
        p.expect(&Tok::Semi, "`;`")?;
    }
    let missing = |f: &str| DslError::syntax(sp, format!("identity `{name}` lacks `{f}`"));
    let denom = denom.unwrap_or(1);
    let t_order = t_order.unwrap_or(1);
    if denom <= 0 || denom > u32::MAX as i64 {
        return Err(DslError::syntax(sp, "D must be positive"));
    }
    if t_order <= 0 || t_order > u32::MAX as i64 {
        return Err(DslError::syntax(sp, "torder must be positive"));
    }
    let tags = tags
        .unwrap_or_default()
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    Ok(IdentityCase {
        lhs: lhs.ok_or_else(|| missing("lhs"))?,
        rhs: rhs.ok_or_else(|| missing("rhs"))?,
        order: order.ok_or_else(|| missing("order"))?,
        paper_ref: paper_ref.ok_or_else(|| missing("ref"))?,
        denom: denom as u32,
        t_order: t_order as u32,
        tags,
        name,
        span: sp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    const SRC: &str = r#"
# two cases
identity "rr1" {
  lhs = sum(n = 0..8; q^(n*n) / qp(q;q;n));
  rhs = 1 / qp(q,q^4;q^5;inf);
  order = 40;
  ref = "Rogers-Ramanujan, first";
  tags = "rr, product";
}
identity "half" { lhs = q^(1/2); rhs = q^(1/2); D = 2; order = 10; ref = "x"; torder = 3; }
"#;

    #[test]
    fn reads_blocks() {
        let cs = parse_suite(SRC).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].name, "rr1");
        assert_eq!(cs[0].rhs, parse("1/qp(q,q^4;q^5;inf)").unwrap());
        assert_eq!(cs[0].tags, vec!["rr", "product"]);
        assert_eq!((cs[0].denom, cs[0].order, cs[0].t_order), (1, 40, 1));
        assert_eq!((cs[1].denom, cs[1].t_order), (2, 3));
        assert_eq!(cs[0].span.line, 3);
    }

    #[test]
    fn reports_problems_with_position() {
        let e = parse_suite("identity \"a\" { lhs = 1; rhs = 1; order = 3; }").unwrap_err();
        assert!(e.to_string().contains("lacks `ref`"), "{e}");
        let e = parse_suite("identity \"a\" { lhs = 1; lhs = 2; }").unwrap_err();
        assert!(matches!(e, DslError::Syntax { span: Span { col: 25, .. }, .. }), "{e}");
        let e = parse_suite("identity \"a\" { lhs = 1; rhs = 1; ref = \"r\"; order = 1; }\nidentity \"a\" { lhs = 1; rhs = 1; ref = \"r\"; order = 1; }").unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");
    }
}
