use crate::error::{Error, Result};
use crate::field::Field;
use crate::series::{fmt_exponent, Monomial, Series, SeriesContext};

use super::{scaled, GenMono, PhiAlgebra};

/// Number of factors in a Pochhammer symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Finite(u64),
    Infinite,
}

/// `(arg; base)_count`.
#[derive(Clone, Debug, PartialEq)]
pub struct PochSpec<C> {
    pub arg: Monomial<C>,
    pub base: Monomial<C>,
    pub count: Count,
}

/// Number of factors that can affect coefficients below `order`, and the
/// truncation lost to factors with negative exponent.
fn factor_plan(ea: i64, eb: i64, count: Count, order: i64) -> Result<(i64, i64)> {
    match count {
        Count::Finite(n) => {
            let guard = (0..n as i64).map(|j| (-(ea + j * eb)).max(0)).sum();
            Ok((n as i64, guard))
        }
        Count::Infinite => {
            if eb <= 0 {
                return Err(Error::NonPositiveBaseExponent(eb.to_string()));
            }
            let guard: i64 = (0..).map(|j| ea + j * eb).take_while(|&e| e < 0).map(|e| -e).sum();
            let limit = order + guard;
            let n = if ea >= limit { 0 } else { (limit - ea + eb - 1) / eb };
            Ok((n, guard))
        }
    }
}

/// `(a; b)_n`, or the infinite product known below the context order.
pub fn pochhammer<C: Field>(spec: &PochSpec<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    pochhammer_multi(std::slice::from_ref(&spec.arg), &spec.base, spec.count, ctx)
}

/// `(a_1, ..., a_m; b)_n`.
pub fn pochhammer_multi<C: Field>(
    args: &[Monomial<C>],
    base: &Monomial<C>,
    count: Count,
    ctx: &SeriesContext,
) -> Result<Series<C>> {
    let d = ctx.denom;
    let (cb, eb) = scaled(base, d)?;
    if count == Count::Infinite && eb <= 0 {
        return Err(Error::NonPositiveBaseExponent(fmt_exponent(base.exp)));
    }
    let mut plans = Vec::with_capacity(args.len());
    let mut guard = 0;
    for a in args {
        let (ca, ea) = scaled(a, d)?;
        plans.push((ca, ea));
        guard += factor_plan(ea, eb, count, ctx.order)?.1;
    }
    let top = ctx.order + guard;
    let mut out = Series::one(d, top);
    // positive exponents first; they keep the truncation
    let mut neg = Vec::new();
    for (ca, ea) in plans {
        let (n, _) = factor_plan(ea, eb, count, top)?;
        let mut c = ca;
        for j in 0..n {
            let e = ea + j * eb;
            if e < 0 {
                neg.push((c.clone(), e));
            } else {
                out = out.mul_one_minus(&c, e);
            }
            c = c.mul_ref(&cb);
        }
    }
    for (c, e) in neg {
        out = out.mul_one_minus(&c, e);
    }
    Ok(out.truncate(ctx.order))
}

/// Multiply `x` by `(arg; base)_count`, or divide by it when `invert`.
/// Infinite products keep the factors whose q-exponent is below `limit`.
pub fn pochhammer_apply<C: Field, A: PhiAlgebra<C>>(
    x: &A,
    arg: &GenMono<C>,
    base: &GenMono<C>,
    count: Count,
    invert: bool,
    limit: i64,
) -> Result<A> {
    if !base.is_scalar() || (count == Count::Infinite && base.qexp <= 0) {
        return Err(Error::NonPositiveBaseExponent(fmt_exponent(base.exp_rational(1))));
    }
    let n = match count {
        Count::Finite(n) => n as i64,
        Count::Infinite if arg.qexp >= limit => 0,
        Count::Infinite => (limit - arg.qexp + base.qexp - 1) / base.qexp,
    };
    let mut out = x.clone();
    let mut m = arg.clone();
    for _ in 0..n {
        out = if invert { out.div_one_minus_gen(&m)? } else { out.mul_one_minus_gen(&m)? };
        m = m.mul(base);
    }
    Ok(out)
}
