//! Evaluation of expressions to truncated series.
//!
//! Monomials stay symbolic (`Value::Mono`) until they meet something that is
//! not a monomial, so exact parameters reach the kernels unchanged. Values that
//! involve `z` or `t` live in [`TzSeries`]. Each evaluation runs at the target
//! order plus a guard; if the result comes back known to fewer terms than
//! requested, the guard grows and the evaluation repeats.

use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};

use qrucible_core::ctengine::{CtOptions, Integrand, ZSeries};
use qrucible_core::ortho::{aw_poly, rogers_poly, AWParam, RogersParam, TzSeries};
use qrucible_core::qkernel::{
    jtp_sum, multisum, phi, phi_general, pochhammer_apply, pochhammer_multi, Count as KCount, GenMono, MultiSumSpec, PhiSpec,
};
use qrucible_core::{CycRat, Error as CoreError, Field, QMonomial, QSeries, SeriesContext};

use crate::ast::{Count, Expr, NamedSum};
use crate::error::{DslError, Result};

type Gen = TzSeries<CycRat>;

const MAX_ATTEMPTS: usize = 6;

/// `coeff · q^exp · z^zdeg · t^tdeg`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mono {
    pub coeff: CycRat,
    pub exp: Rational64,
    pub zdeg: i64,
    pub tdeg: u32,
}

impl Mono {
    fn constant(c: CycRat) -> Self {
        Mono { coeff: c, exp: Rational64::zero(), zdeg: 0, tdeg: 0 }
    }

    fn is_scalar(&self) -> bool {
        self.zdeg == 0 && self.tdeg == 0
    }

    fn monomial(&self) -> QMonomial {
        QMonomial::new(self.coeff.clone(), self.exp)
    }

    fn gen(&self, d: u32) -> std::result::Result<GenMono<CycRat>, CoreError> {
        Ok(GenMono { zdeg: self.zdeg, tdeg: self.tdeg, ..GenMono::from_monomial(&self.monomial(), d)? })
    }

    fn mul(&self, o: &Mono) -> Mono {
        Mono { coeff: self.coeff.mul_ref(&o.coeff), exp: self.exp + o.exp, zdeg: self.zdeg + o.zdeg, tdeg: self.tdeg + o.tdeg }
    }

    fn same_shape(&self, o: &Mono) -> bool {
        self.exp == o.exp && self.zdeg == o.zdeg && self.tdeg == o.tdeg
    }
}

/// Intermediate value during elaboration.
#[derive(Clone, Debug)]
pub enum Value {
    Mono(Mono),
    Series(QSeries),
    Gen(Gen),
}

/// Result of elaborating one side of an identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Elaborated {
    Series(QSeries),
    /// Coefficients of t⁰, t¹, ... as Laurent polynomials in z.
    Gen(Vec<ZSeries<CycRat>>),
}

/// First disagreement between two elaborated values.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    /// Exponent of q, in units of 1/D.
    pub exp: i64,
    pub tdeg: Option<u32>,
    pub zdeg: Option<i64>,
    pub lhs: CycRat,
    pub rhs: CycRat,
}

impl Elaborated {
    pub fn truncation(&self) -> i64 {
        match self {
            Elaborated::Series(s) => s.truncation(),
            Elaborated::Gen(cs) => cs.iter().map(|c| c.truncation()).min().unwrap_or(i64::MAX / 4),
        }
    }

    pub fn as_series(&self) -> Option<&QSeries> {
        match self {
            Elaborated::Series(s) => Some(s),
            Elaborated::Gen(_) => None,
        }
    }

    fn into_gen(self, t_order: u32) -> Vec<ZSeries<CycRat>> {
        match self {
            Elaborated::Gen(cs) => cs,
            Elaborated::Series(s) => {
                let (d, t) = (s.denom(), s.truncation());
                let mut out = vec![ZSeries::zero(d, t); t_order.max(1) as usize];
                out[0] = ZSeries::from_series(s);
                out
            }
        }
    }

    /// Smallest exponent below `up_to` where the two values differ.
    pub fn first_mismatch(&self, other: &Elaborated, up_to: i64) -> std::result::Result<Option<Mismatch>, CoreError> {
        if let (Elaborated::Series(a), Elaborated::Series(b)) = (self, other) {
            return Ok(a.first_mismatch(b, up_to)?.map(|(exp, lhs, rhs)| Mismatch { exp, tdeg: None, zdeg: None, lhs, rhs }));
        }
        let n = match (self, other) {
            (Elaborated::Gen(a), Elaborated::Gen(b)) => a.len().max(b.len()),
            (Elaborated::Gen(a), _) | (_, Elaborated::Gen(a)) => a.len(),
            _ => 1,
        };
        let (a, b) = (self.clone().into_gen(n as u32), other.clone().into_gen(n as u32));
        if a.len() != b.len() {
            return Err(CoreError::InvalidParameter("t-orders differ".into()));
        }
        let mut best: Option<Mismatch> = None;
        for (k, (x, y)) in a.iter().zip(&b).enumerate() {
            if let Some((zdeg, exp, lhs, rhs)) = x.first_mismatch(y, up_to)? {
                if best.as_ref().is_none_or(|m| exp < m.exp) {
                    best = Some(Mismatch { exp, tdeg: Some(k as u32), zdeg: Some(zdeg), lhs, rhs });
                }
            }
        }
        Ok(best)
    }
}

/// Evaluate to a z- and t-free series known below `ctx.order`.
pub fn elaborate(e: &Expr, ctx: &SeriesContext) -> Result<QSeries> {
    match elaborate_value(e, ctx, 1)? {
        Elaborated::Series(s) => Ok(s),
        Elaborated::Gen(_) => Err(DslError::Type { path: "/".into(), msg: "expression depends on z or t".into() }),
    }
}

/// Evaluate an expression that may involve `z` and `t`; t is truncated below `t^t_order`.
pub fn elaborate_value(e: &Expr, ctx: &SeriesContext, t_order: u32) -> Result<Elaborated> {
    let d = ctx.denom as i64;
    let mut guard = 4 * d;
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        let el = Elab { d: ctx.denom, work: ctx.order + guard, t_order: t_order.max(1), vars: Vec::new() };
        let v = el.eval(e, "")?;
        let out = el.finish(v, "")?;
        let have = out.truncation();
        if have >= ctx.order {
            return Ok(match out {
                Elaborated::Series(s) => Elaborated::Series(s.truncate(ctx.order)),
                Elaborated::Gen(cs) => Elaborated::Gen(cs.iter().map(|c| c.truncate(ctx.order)).collect()),
            });
        }
        guard += 2 * (ctx.order - have) + 4 * d;
        last = Some(have);
    }
    Err(DslError::Eval {
        path: "/".into(),
        source: CoreError::InsufficientTruncation {
            needed: qrucible_core::series::fmt_exponent(Rational64::new(ctx.order, d)),
            have: qrucible_core::series::fmt_exponent(Rational64::new(last.unwrap_or(0), d)),
        },
    })
}

struct Elab {
    d: u32,
    work: i64,
    t_order: u32,
    vars: Vec<(String, i64)>,
}

fn child(path: &str, label: &str) -> String {
    format!("{path}/{label}")
}

fn at(path: &str) -> impl Fn(CoreError) -> DslError + '_ {
    move |source| DslError::Eval { path: if path.is_empty() { "/".into() } else { path.to_string() }, source }
}

fn type_err(path: &str, msg: impl Into<String>) -> DslError {
    DslError::Type { path: if path.is_empty() { "/".into() } else { path.to_string() }, msg: msg.into() }
}

fn big_to_small(r: &BigRational) -> Option<Rational64> {
    Some(Rational64::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

impl Elab {
    fn ctx(&self) -> SeriesContext {
        SeriesContext::new(self.d, self.work).expect("positive denominator")
    }

    fn with_var(&self, name: &str, val: i64) -> Elab {
        let mut vars = self.vars.clone();
        vars.push((name.to_string(), val));
        Elab { d: self.d, work: self.work, t_order: self.t_order, vars }
    }

    fn finish(&self, v: Value, path: &str) -> Result<Elaborated> {
        Ok(match v {
            Value::Mono(m) if m.is_scalar() => Elaborated::Series(self.series(&Value::Mono(m), path)?),
            Value::Series(s) => Elaborated::Series(s),
            other => Elaborated::Gen(self.gen(&other, path)?.into_coeffs()),
        })
    }

    fn series(&self, v: &Value, path: &str) -> Result<QSeries> {
        match v {
            Value::Mono(m) if m.is_scalar() => m.monomial().to_series(&self.ctx()).map_err(at(path)),
            Value::Series(s) => Ok(s.clone()),
            _ => Err(type_err(path, "expected a series free of z and t")),
        }
    }

    fn gen(&self, v: &Value, path: &str) -> Result<Gen> {
        match v {
            Value::Mono(m) => Ok(Gen::from_mono(self.t_order, &m.gen(self.d).map_err(at(path))?, self.d, self.work)),
            Value::Series(s) => Ok(Gen::from_series(self.t_order, s.clone())),
            Value::Gen(g) => Ok(g.clone()),
        }
    }

    fn mono(&self, e: &Expr, path: &str) -> Result<Mono> {
        match self.eval(e, path)? {
            Value::Mono(m) => Ok(m),
            _ => Err(type_err(path, "expected a monomial")),
        }
    }

    fn scalar_mono(&self, e: &Expr, path: &str) -> Result<QMonomial> {
        let m = self.mono(e, path)?;
        if !m.is_scalar() {
            return Err(type_err(path, "expected a monomial free of z and t"));
        }
        Ok(m.monomial())
    }

    fn rational(&self, e: &Expr, path: &str) -> Result<Rational64> {
        let m = self.mono(e, path)?;
        if !m.is_scalar() || !m.exp.is_zero() {
            return Err(type_err(path, "expected a rational constant"));
        }
        m.coeff.to_rational().and_then(|r| big_to_small(&r)).ok_or_else(|| type_err(path, "expected a small rational constant"))
    }

    fn integer(&self, e: &Expr, path: &str) -> Result<i64> {
        let r = self.rational(e, path)?;
        if !r.is_integer() {
            return Err(type_err(path, "expected an integer"));
        }
        Ok(r.to_integer())
    }

    fn natural(&self, e: &Expr, path: &str) -> Result<u64> {
        let n = self.integer(e, path)?;
        u64::try_from(n).map_err(|_| type_err(path, "expected a nonnegative integer"))
    }

    fn eval(&self, e: &Expr, path: &str) -> Result<Value> {
        match e {
            Expr::Rational(r) => Ok(Value::Mono(Mono::constant(CycRat::from_rational(r.clone())))),
            Expr::Omega(k) => Ok(Value::Mono(Mono::constant(CycRat::omega_pow(*k as i64)))),
            Expr::QPower(r) => Ok(Value::Mono(Mono { exp: *r, ..Mono::constant(CycRat::one()) })),
            Expr::Var(name) => {
                if let Some((_, v)) = self.vars.iter().rev().find(|(n, _)| n == name) {
                    return Ok(Value::Mono(Mono::constant(CycRat::from_int(*v))));
                }
                let one = Mono::constant(CycRat::one());
                match name.as_str() {
                    "z" => Ok(Value::Mono(Mono { zdeg: 1, ..one })),
                    "t" => Ok(Value::Mono(Mono { tdeg: 1, ..one })),
                    _ => Err(type_err(path, format!("unbound variable `{name}`"))),
                }
            }
            Expr::Neg(x) => self.neg(self.eval(x, &child(path, "neg"))?),
            Expr::Add(a, b) => self.add(self.eval(a, &child(path, "add.0"))?, self.eval(b, &child(path, "add.1"))?, path),
            Expr::Sub(a, b) => {
                let b = self.neg(self.eval(b, &child(path, "sub.1"))?)?;
                self.add(self.eval(a, &child(path, "sub.0"))?, b, path)
            }
            Expr::Mul(a, b) => self.mul(self.eval(a, &child(path, "mul.0"))?, self.eval(b, &child(path, "mul.1"))?, path),
            Expr::Div(a, b) => {
                let p = child(path, "div.1");
                let inv = self.inverse(self.eval(b, &p)?, &p)?;
                self.mul(self.eval(a, &child(path, "div.0"))?, inv, path)
            }
            Expr::Pow(b, x) => {
                let r = self.rational(x, &child(path, "pow.1"))?;
                self.pow(self.eval(b, &child(path, "pow.0"))?, r, path)
            }
            Expr::Poch { args, base, count } => self.poch(args, base, count, path),
            Expr::Phi { uppers, lowers, base, arg } => self.phi(uppers, lowers, base, arg, path),
            Expr::KrF(u, v, w) => {
                let u = self.scalar_mono(u, &child(path, "F.0"))?;
                let v = self.scalar_mono(v, &child(path, "F.1"))?;
                let w = self.scalar_mono(w, &child(path, "F.2"))?;
                Ok(Value::Series(multisum(&MultiSumSpec::kr_f(u, v, w), &self.ctx()).map_err(at(path))?))
            }
            Expr::MultiSum(n) => {
                let spec = match n {
                    NamedSum::Capparelli => MultiSumSpec::capparelli(),
                    NamedSum::Tsf => MultiSumSpec::tsf(),
                    NamedSum::Tsc => MultiSumSpec::tsc(),
                    NamedSum::Tse => MultiSumSpec::tse(),
                    NamedSum::Ntss => MultiSumSpec::ntss(),
                };
                Ok(Value::Series(multisum(&spec, &self.ctx()).map_err(at(path))?))
            }
            Expr::Jtp(z) => {
                let z = self.scalar_mono(z, &child(path, "jtp"))?;
                Ok(Value::Series(jtp_sum(&z, &self.ctx()).map_err(at(path))?))
            }
            Expr::Ct(body) => self.ct(body, path),
            Expr::RogersC { n, a, base, z } => {
                let n = self.natural(n, &child(path, "rogersC.n"))?;
                let a = self.scalar_mono(a, &child(path, "rogersC.a"))?;
                let base = self.scalar_mono(base, &child(path, "rogersC.base"))?;
                let zs = rogers_poly(n, &RogersParam::new(a, base), &self.ctx()).map_err(at(path))?;
                self.at_z(zs, z, &child(path, "rogersC.z"))
            }
            Expr::AwPoly { n, params, base, z } => {
                let n = self.natural(n, &child(path, "awp.n"))?;
                let mut ps = Vec::with_capacity(4);
                for (i, p) in params.iter().enumerate() {
                    ps.push(self.scalar_mono(p, &child(path, &format!("awp.{i}")))?);
                }
                let base = self.scalar_mono(base, &child(path, "awp.base"))?;
                let ps: [QMonomial; 4] = ps.try_into().expect("four parameters");
                let zs = aw_poly(n, &AWParam::new(ps, base), &self.ctx()).map_err(at(path))?;
                self.at_z(zs, z, &child(path, "awp.z"))
            }
            Expr::Sum { var, lo, hi, body } => {
                let lo = self.integer(lo, &child(path, "sum.lo"))?;
                let hi = self.integer(hi, &child(path, "sum.hi"))?;
                let mut acc: Option<Value> = None;
                for l in lo..=hi {
                    let p = child(path, &format!("sum[{var}={l}]"));
                    let term = self.with_var(var, l).eval(body, &p)?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => self.add(a, term, &p)?,
                    });
                }
                Ok(acc.unwrap_or_else(|| Value::Mono(Mono::constant(CycRat::zero()))))
            }
        }
    }

    /// A Laurent polynomial in z evaluated at a scalar, or with z replaced by z^k.
    fn at_z(&self, zs: ZSeries<CycRat>, z: &Expr, path: &str) -> Result<Value> {
        let m = self.mono(z, path)?;
        if m.is_scalar() {
            let g = m.gen(self.d).map_err(at(path))?;
            return Ok(Value::Series(zs.eval_at(&g.coeff, g.qexp).map_err(at(path))?));
        }
        if m.tdeg == 0 && m.coeff.is_one() && m.exp.is_zero() {
            return Ok(Value::Gen(Gen::from_zseries(self.t_order, zs.substitute_pow(m.zdeg))));
        }
        Err(type_err(path, "z argument must be a scalar monomial or a power of z"))
    }

    fn neg(&self, v: Value) -> Result<Value> {
        Ok(match v {
            Value::Mono(m) => Value::Mono(Mono { coeff: m.coeff.neg_ref(), ..m }),
            Value::Series(s) => Value::Series(s.neg()),
            Value::Gen(g) => Value::Gen(g.neg()),
        })
    }

    fn needs_gen(v: &Value) -> bool {
        match v {
            Value::Mono(m) => !m.is_scalar(),
            Value::Series(_) => false,
            Value::Gen(_) => true,
        }
    }

    fn add(&self, a: Value, b: Value, path: &str) -> Result<Value> {
        if let (Value::Mono(x), Value::Mono(y)) = (&a, &b) {
            if x.same_shape(y) {
                return Ok(Value::Mono(Mono { coeff: x.coeff.add_ref(&y.coeff), ..x.clone() }));
            }
        }
        if Self::needs_gen(&a) || Self::needs_gen(&b) {
            let g = self.gen(&a, path)?.add(&self.gen(&b, path)?).map_err(at(path))?;
            return Ok(Value::Gen(g));
        }
        Ok(Value::Series(self.series(&a, path)?.add(&self.series(&b, path)?).map_err(at(path))?))
    }

    fn mul(&self, a: Value, b: Value, path: &str) -> Result<Value> {
        match (&a, &b) {
            (Value::Mono(x), Value::Mono(y)) => return Ok(Value::Mono(x.mul(y))),
            (Value::Series(s), Value::Mono(m)) | (Value::Mono(m), Value::Series(s)) if m.is_scalar() => {
                return Ok(Value::Series(s.mul_monomial(&m.monomial()).map_err(at(path))?));
            }
            (Value::Series(x), Value::Series(y)) => return Ok(Value::Series(x.mul(y).map_err(at(path))?)),
            (Value::Gen(g), Value::Series(s)) | (Value::Series(s), Value::Gen(g)) => {
                return Ok(Value::Gen(g.mul_series(s).map_err(at(path))?));
            }
            _ => {}
        }
        let g = self.gen(&a, path)?.mul(&self.gen(&b, path)?).map_err(at(path))?;
        Ok(Value::Gen(g))
    }

    fn inverse(&self, v: Value, path: &str) -> Result<Value> {
        match v {
            Value::Mono(m) => {
                if m.tdeg != 0 {
                    return Err(type_err(path, "cannot divide by a power of t"));
                }
                let coeff = m.coeff.inv().ok_or_else(|| at(path)(CoreError::DivisionByZero))?;
                Ok(Value::Mono(Mono { coeff, exp: -m.exp, zdeg: -m.zdeg, tdeg: 0 }))
            }
            Value::Series(s) => {
                if s.is_zero() {
                    return Err(at(path)(CoreError::NotInvertible));
                }
                if s.valuation() != 0 {
                    return Err(type_err(path, "divisor must have a nonzero constant term"));
                }
                Ok(Value::Series(s.inverse().map_err(at(path))?))
            }
            Value::Gen(g) => {
                let c0 = g.coeff(0).constant_term();
                if c0.is_zero() || c0.valuation() != 0 {
                    return Err(type_err(path, "divisor must have a nonzero constant term"));
                }
                Ok(Value::Gen(g.inverse().map_err(at(path))?))
            }
        }
    }

    fn pow(&self, b: Value, r: Rational64, path: &str) -> Result<Value> {
        if let Value::Mono(m) = &b {
            if r.is_integer() {
                let n = r.to_integer();
                let g = GenMono { coeff: m.coeff.clone(), qexp: 0, zdeg: m.zdeg, tdeg: m.tdeg }.pow(n).map_err(at(path))?;
                return Ok(Value::Mono(Mono { coeff: g.coeff, exp: m.exp * r, zdeg: g.zdeg, tdeg: g.tdeg }));
            }
            if !m.is_scalar() {
                return Err(type_err(path, "fractional power of z or t"));
            }
            let p = m.monomial().pow_rational(r).map_err(at(path))?;
            return Ok(Value::Mono(Mono { coeff: p.coeff, exp: p.exp, zdeg: 0, tdeg: 0 }));
        }
        if !r.is_integer() {
            return Err(type_err(path, "fractional power of a series"));
        }
        let n = r.to_integer();
        let base = if n < 0 { self.inverse(b, path)? } else { b };
        let mut acc = Value::Mono(Mono::constant(CycRat::one()));
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(acc, base.clone(), path)?;
        }
        Ok(acc)
    }

    fn count(&self, count: &Count, path: &str) -> Result<KCount> {
        Ok(match count {
            Count::Infinite => KCount::Infinite,
            Count::Finite(n) => KCount::Finite(self.natural(n, &child(path, "qp.n"))?),
        })
    }

    fn poch(&self, args: &[Expr], base: &Expr, count: &Count, path: &str) -> Result<Value> {
        let base = self.scalar_mono(base, &child(path, "qp.base"))?;
        let count = self.count(count, path)?;
        let mut ms = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            ms.push(self.mono(a, &child(path, &format!("qp.{i}")))?);
        }
        if ms.iter().all(Mono::is_scalar) {
            let ms: Vec<QMonomial> = ms.iter().map(Mono::monomial).collect();
            return Ok(Value::Series(pochhammer_multi(&ms, &base, count, &self.ctx()).map_err(at(path))?));
        }
        let b = GenMono::from_monomial(&base, self.d).map_err(at(path))?;
        let mut acc = Gen::one(self.t_order, self.d, self.work);
        for m in &ms {
            let g = m.gen(self.d).map_err(at(path))?;
            acc = pochhammer_apply(&acc, &g, &b, count, false, self.work).map_err(at(path))?;
        }
        Ok(Value::Gen(acc))
    }

    fn phi(&self, uppers: &[Expr], lowers: &[Expr], base: &Expr, arg: &Expr, path: &str) -> Result<Value> {
        let mut ups = Vec::with_capacity(uppers.len());
        for (i, u) in uppers.iter().enumerate() {
            ups.push(self.mono(u, &child(path, &format!("phi.up{i}")))?);
        }
        let mut lows = Vec::with_capacity(lowers.len());
        for (i, l) in lowers.iter().enumerate() {
            lows.push(self.mono(l, &child(path, &format!("phi.low{i}")))?);
        }
        let base = self.scalar_mono(base, &child(path, "phi.base"))?;
        let arg = self.mono(arg, &child(path, "phi.arg"))?;
        let ctx = self.ctx();
        if ups.iter().chain(&lows).chain([&arg]).all(Mono::is_scalar) {
            let spec = PhiSpec {
                uppers: ups.iter().map(Mono::monomial).collect(),
                lowers: lows.iter().map(Mono::monomial).collect(),
                base,
                arg: arg.monomial(),
            };
            return Ok(Value::Series(phi(&spec, &ctx).map_err(at(path))?));
        }
        let gens = |ms: &[Mono]| ms.iter().map(|m| m.gen(self.d)).collect::<std::result::Result<Vec<_>, _>>();
        let up = gens(&ups).map_err(at(path))?;
        let low = gens(&lows).map_err(at(path))?;
        let b = GenMono::from_monomial(&base, self.d).map_err(at(path))?;
        let a = arg.gen(self.d).map_err(at(path))?;
        Ok(Value::Gen(phi_general::<CycRat, Gen>(&up, &low, &b, &a, &self.t_order, &ctx).map_err(at(path))?))
    }

    /// Constant term of a product of infinite Pochhammer symbols in z,
    /// times z-free factors and powers of z.
    fn ct(&self, body: &Expr, path: &str) -> Result<Value> {
        let mut factors = Vec::new();
        flatten(body, false, &mut factors);
        let mut ig = Integrand::default();
        let mut outer = Value::Mono(Mono::constant(CycRat::one()));
        let mut target = 0i64;
        for (k, (f, inv)) in factors.into_iter().enumerate() {
            let p = child(path, &format!("ct.{k}"));
            if let Expr::Poch { args, base, count: Count::Infinite } = f {
                let b = self.scalar_mono(base, &child(&p, "qp.base"))?;
                let gb = GenMono::from_monomial(&b, self.d).map_err(at(&p))?;
                let mut scalars = Vec::new();
                for (i, a) in args.iter().enumerate() {
                    let m = self.mono(a, &child(&p, &format!("qp.{i}")))?;
                    if m.tdeg != 0 {
                        return Err(type_err(&p, "integrand factor depends on t"));
                    }
                    if m.zdeg == 0 {
                        scalars.push(m.monomial());
                    } else {
                        ig.push(m.gen(self.d).map_err(at(&p))?, gb.clone(), inv);
                    }
                }
                if !scalars.is_empty() {
                    let s = Value::Series(pochhammer_multi(&scalars, &b, KCount::Infinite, &self.ctx()).map_err(at(&p))?);
                    let s = if inv { self.inverse(s, &p)? } else { s };
                    outer = self.mul(outer, s, &p)?;
                }
                continue;
            }
            let v = self.eval(f, &p)?;
            let v = if inv { self.inverse(v, &p)? } else { v };
            match v {
                Value::Mono(m) if m.tdeg == 0 && m.zdeg != 0 => {
                    target -= m.zdeg;
                    outer = self.mul(outer, Value::Mono(Mono { zdeg: 0, ..m }), &p)?;
                }
                Value::Gen(_) => return Err(type_err(&p, "integrand factor must be an infinite product in z")),
                Value::Mono(m) if !m.is_scalar() => return Err(type_err(&p, "integrand factor depends on t")),
                v => outer = self.mul(outer, v, &p)?,
            }
        }
        let c = ig.coefficient(target, &self.ctx(), &CtOptions::default()).map_err(at(path))?;
        self.mul(outer, Value::Series(c), path)
    }
}

fn flatten<'a>(e: &'a Expr, inv: bool, out: &mut Vec<(&'a Expr, bool)>) {
    match e {
        Expr::Mul(a, b) => {
            flatten(a, inv, out);
            flatten(b, inv, out);
        }
        Expr::Div(a, b) => {
            flatten(a, inv, out);
            flatten(b, !inv, out);
        }
        _ => out.push((e, inv)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn ev(src: &str, d: u32, order: i64) -> QSeries {
        elaborate(&parse(src).unwrap(), &SeriesContext::new(d, order).unwrap()).unwrap()
    }

    fn ints(s: &QSeries, n: i64) -> Vec<i64> {
        (0..n).map(|e| s.coeff(e).unwrap().to_integer().unwrap().to_i64().unwrap()).collect()
    }

    #[test]
    fn constants_fold() {
        let s = ev("2+3", 1, 5);
        assert_eq!(ints(&s, 5), vec![5, 0, 0, 0, 0]);
    }

    #[test]
    fn rogers_ramanujan_product() {
        let s = ev("1/qp(q,q^4;q^5;inf)", 1, 7);
        assert_eq!(ints(&s, 7), vec![1, 1, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn triple_sum_matches_product() {
        let ctx = SeriesContext::new(1, 40).unwrap();
        let l = elaborate(&parse("F(q,1,q^3)").unwrap(), &ctx).unwrap();
        let r = elaborate(&parse("qp(q^3;q^12;inf)/qp(q,q^2;q^4;inf)").unwrap(), &ctx).unwrap();
        assert!(l.equal_to_order(&r, 40).unwrap());
    }

    #[test]
    fn finite_sum_with_index() {
        // Σ_{n ≤ 20} q^{n²}/(q;q)_n against the first Rogers–Ramanujan product
        let l = ev("sum(n = 0..20; q^(n*n) / qp(q;q;n))", 1, 30);
        let r = ev("1/qp(q,q^4;q^5;inf)", 1, 30);
        assert!(l.equal_to_order(&r, 30).unwrap());
    }

    #[test]
    fn constant_term_of_triple_product() {
        // (−z, −q/z, q; q)_∞ = Σ q^C(n,2) z^n, so the z^n coefficient is q^C(n,2)
        let ctx = SeriesContext::new(1, 20).unwrap();
        for n in [-3i64, 0, 2, 5] {
            let src = format!("ct{{z^({}) * qp(-z,-q/z;q;inf)}} * qp(q;q;inf)", -n);
            let l = elaborate(&parse(&src).unwrap(), &ctx).unwrap();
            let r = QSeries::monomial(CycRat::one(), n * (n - 1) / 2, 1, 20);
            assert!(l.equal_to_order(&r, 20).unwrap(), "{n}: {l}");
        }
    }

    #[test]
    fn division_by_non_unit_is_reported() {
        let e = parse("1/(q - q^2)").unwrap();
        let err = elaborate(&e, &SeriesContext::new(1, 10).unwrap()).unwrap_err();
        assert!(matches!(err, DslError::Type { ref path, .. } if path == "/div.1"), "{err}");
    }

    #[test]
    fn errors_name_the_subterm() {
        let e = parse("1 + qp(q;q^-1;inf)").unwrap();
        let err = elaborate(&e, &SeriesContext::new(1, 10).unwrap()).unwrap_err();
        match err {
            DslError::Eval { path, source } => {
                assert_eq!(path, "/add.1");
                assert!(matches!(source, CoreError::NonPositiveBaseExponent(_)));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn generating_function_in_t() {
        // 1/(1 - t z) truncated at t^4 has coefficients z^k
        let v = elaborate_value(&parse("1/(1 - t*z)").unwrap(), &SeriesContext::new(1, 10).unwrap(), 4).unwrap();
        let Elaborated::Gen(cs) = v else { panic!() };
        for (k, c) in cs.iter().enumerate() {
            assert_eq!((c.min_deg(), c.max_deg()), (k as i64, k as i64));
        }
    }

    #[test]
    fn rogers_polynomial_at_a_point() {
        // C_1(x; a|q) = 2x(1 - a)/(1 - q); at z = 1, x = 1
        let l = ev("rogersC(1; q^2; q; 1)", 1, 12);
        let r = ev("2*(1 - q^2)/(1 - q)", 1, 12);
        assert!(l.equal_to_order(&r, 12).unwrap());
    }
}
