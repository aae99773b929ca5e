//! Recursive-descent parser for the expression grammar in `docs/grammar.ebnf`.

use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;

use crate::ast::{Count, Expr, NamedSum};
use crate::error::{DslError, Result, Span};
use crate::lexer::{lex, Tok, Token};

/// Names that can never be summation indices.
pub const RESERVED: &[&str] = &[
    "q", "w", "w2", "z", "t", "inf", "qp", "phi", "F", "jtp", "ct", "rogersC", "awp", "sum", "capparelli", "tsf", "tsc", "tse",
    "ntss",
];

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    bound: Vec<String>,
}

/// Parse a complete expression.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser::new(lex(src)?);
    let e = p.expr()?;
    p.expect(&Tok::Eof, "end of input")?;
    Ok(e)
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0, bound: Vec::new() }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok, what: &str) -> Result<Token> {
        if self.peek() == t {
            Ok(self.bump())
        } else {
            Err(self.unexpected(what))
        }
    }

    pub fn unexpected(&self, what: &str) -> DslError {
        let found = match self.peek() {
            Tok::Eof => "end of input".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n, None) => format!("`{n}`"),
            Tok::Number(n, Some(d)) => format!("`{n}/{d}`"),
            Tok::Str(s) => format!("\"{s}\""),
            t => format!("{t:?}"),
        };
        DslError::syntax(self.span(), format!("expected {what}, found {found}"))
    }

    pub fn ident(&mut self, what: &str) -> Result<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let sp = self.bump().span;
                Ok((s, sp))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(lhs.b(), self.term()?.b());
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(lhs.b(), self.term()?.b());
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(lhs.b(), self.unary()?.b());
            } else if self.eat(&Tok::Slash) {
                lhs = Expr::Div(lhs.b(), self.unary()?.b());
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(self.unary()?.b()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let sp = self.span();
        let exp = if self.eat(&Tok::Minus) { Expr::Neg(self.atom()?.b()) } else { self.atom()? };
        if base == Expr::q() {
            let lit = match &exp {
                Expr::Rational(r) => Some(r.clone()),
                Expr::Neg(x) => match x.as_ref() {
                    Expr::Rational(r) => Some(-r.clone()),
                    _ => None,
                },
                _ => None,
            };
            if let Some(r) = lit {
                return Ok(Expr::QPower(small(&r, sp)?));
            }
        }
        Ok(Expr::Pow(base.b(), exp.b()))
    }

    fn atom(&mut self) -> Result<Expr> {
        let sp = self.span();
        match self.peek().clone() {
            Tok::Number(n, d) => {
                self.bump();
                let d = d.unwrap_or_else(|| 1.into());
                if d == 0.into() {
                    return Err(DslError::syntax(sp, "zero denominator in literal"));
                }
                Ok(Expr::Rational(BigRational::new(n, d)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                self.named(&name, sp)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn named(&mut self, name: &str, sp: Span) -> Result<Expr> {
        match name {
            "q" => return Ok(Expr::q()),
            "w" => return Ok(Expr::Omega(1)),
            "w2" => return Ok(Expr::Omega(2)),
            "z" | "t" => return Ok(Expr::Var(name.to_string())),
            _ => {}
        }
        if self.bound.iter().any(|b| b == name) {
            return Ok(Expr::Var(name.to_string()));
        }
        if let Some(ns) = NamedSum::from_name(name) {
            self.expect(&Tok::LParen, "`(`")?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(Expr::MultiSum(ns));
        }
        match name {
            "qp" => {
                self.expect(&Tok::LParen, "`(`")?;
                let args = self.list_until(&Tok::Semi)?;
                let base = self.expr()?;
                self.expect(&Tok::Semi, "`;`")?;
                let count = if matches!(self.peek(), Tok::Ident(s) if s == "inf") {
                    self.bump();
                    Count::Infinite
                } else {
                    Count::Finite(self.expr()?.b())
                };
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Expr::Poch { args, base: base.b(), count })
            }
            "phi" => {
                self.expect(&Tok::LParen, "`(`")?;
                let uppers = self.bracket_list()?;
                self.expect(&Tok::Semi, "`;`")?;
                let lowers = self.bracket_list()?;
                self.expect(&Tok::Semi, "`;`")?;
                let base = self.expr()?;
                self.expect(&Tok::Semi, "`;`")?;
                let arg = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Expr::Phi { uppers, lowers, base: base.b(), arg: arg.b() })
            }
            "F" => {
                self.expect(&Tok::LParen, "`(`")?;
                let u = self.expr()?;
                self.expect(&Tok::Comma, "`,`")?;
                let v = self.expr()?;
                self.expect(&Tok::Comma, "`,`")?;
                let w = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Expr::KrF(u.b(), v.b(), w.b()))
            }
            "jtp" => {
                self.expect(&Tok::LParen, "`(`")?;
                let z = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Expr::Jtp(z.b()))
            }
            "ct" => {
                self.expect(&Tok::LBrace, "`{`")?;
                let e = self.expr()?;
                self.expect(&Tok::RBrace, "`}`")?;
                Ok(Expr::Ct(e.b()))
            }
            "rogersC" => {
                self.expect(&Tok::LParen, "`(`")?;
                let n = self.expr()?;
                self.expect(&Tok::Semi, "`;`")?;
                let a = self.expr()?;
                self.expect(&Tok::Semi, "`;`")?;
                let base = self.expr()?;
                self.expect(&Tok::Semi, "`;`")?;
                let z = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Expr::RogersC { n: n.b(), a: a.b(), base: base.b(), z: z.b() })
            }
            "awp" => {
                self.expect(&Tok::LParen, "`(`")?;
                let n = self.expr()?;
                self.expect(&Tok::Semi, "`;`")?;
                let ps = self.list_until(&Tok::Semi)?;
                let Ok(params) = <[Expr; 4]>::try_from(ps) else {
                    return Err(DslError::syntax(sp, "awp takes four parameters"));
                };
                let base = self.expr()?;
                self.expect(&Tok::Semi, "`;`")?;
                let z = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Expr::AwPoly { n: n.b(), params: Box::new(params), base: base.b(), z: z.b() })
            }
            "sum" => {
                self.expect(&Tok::LParen, "`(`")?;
                let (var, vsp) = self.ident("an index name")?;
                if RESERVED.contains(&var.as_str()) {
                    return Err(DslError::syntax(vsp, format!("`{var}` is reserved")));
                }
                self.expect(&Tok::Eq, "`=`")?;
                let lo = self.expr()?;
                self.expect(&Tok::DotDot, "`..`")?;
                let hi = self.expr()?;
                self.expect(&Tok::Semi, "`;`")?;
                self.bound.push(var.clone());
                let body = self.expr();
                self.bound.pop();
                let body = body?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Expr::Sum { var, lo: lo.b(), hi: hi.b(), body: body.b() })
            }
            _ => Err(DslError::UnknownSymbol { span: sp, name: name.to_string() }),
        }
    }

    /// Comma-separated expressions terminated (and consumed) by `end`.
    fn list_until(&mut self, end: &Tok) -> Result<Vec<Expr>> {
        let mut out = vec![self.expr()?];
        while self.eat(&Tok::Comma) {
            out.push(self.expr()?);
        }
        self.expect(end, "`;`")?;
        Ok(out)
    }

    fn bracket_list(&mut self) -> Result<Vec<Expr>> {
        self.expect(&Tok::LBrack, "`[`")?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrack) {
            return Ok(out);
        }
        out.push(self.expr()?);
        while self.eat(&Tok::Comma) {
            out.push(self.expr()?);
        }
        self.expect(&Tok::RBrack, "`]`")?;
        Ok(out)
    }
}

fn small(r: &BigRational, sp: Span) -> Result<Rational64> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(DslError::syntax(sp, "exponent out of range")),
    }
}
