use crate::error::{Error, Result};
use crate::field::Field;
use crate::series::{Monomial, Series, SeriesContext};

use super::GenMono;

/// Parameters of `r φ s (uppers; lowers; base, arg)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSpec<C> {
    pub uppers: Vec<Monomial<C>>,
    pub lowers: Vec<Monomial<C>>,
    pub base: Monomial<C>,
    pub arg: Monomial<C>,
}

/// Value types a hypergeometric sum can be accumulated in.
///
/// Plain q-series are one instance; series that also carry the variables z
/// and t (generating functions) are another.
pub trait PhiAlgebra<C: Field>: Clone + Sized {
    type Ctx: Clone;

    fn one(ctx: &Self::Ctx, denom: u32, trunc: i64) -> Self;
    fn mul_gen(&self, m: &GenMono<C>) -> Result<Self>;
    fn mul_one_minus_gen(&self, m: &GenMono<C>) -> Result<Self>;
    fn div_one_minus_gen(&self, m: &GenMono<C>) -> Result<Self>;
    fn add_gen(&self, other: &Self) -> Result<Self>;
    fn truncate_q(&self, t: i64) -> Self;
    /// Exclusive bound on t-degrees, if the algebra truncates in t.
    fn t_order(ctx: &Self::Ctx) -> Option<u32>;
}

impl<C: Field> PhiAlgebra<C> for Series<C> {
    type Ctx = ();

    fn one(_: &(), denom: u32, trunc: i64) -> Self {
        Series::one(denom, trunc)
    }

    fn mul_gen(&self, m: &GenMono<C>) -> Result<Self> {
        scalar(m)?;
        Ok(self.shift(&m.coeff, m.qexp))
    }

    fn mul_one_minus_gen(&self, m: &GenMono<C>) -> Result<Self> {
        scalar(m)?;
        Ok(self.mul_one_minus(&m.coeff, m.qexp))
    }

    fn div_one_minus_gen(&self, m: &GenMono<C>) -> Result<Self> {
        scalar(m)?;
        self.div_one_minus(&m.coeff, m.qexp)
    }

    fn add_gen(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }

    fn truncate_q(&self, t: i64) -> Self {
        self.truncate(t)
    }

    fn t_order(_: &()) -> Option<u32> {
        None
    }
}

fn scalar<C: Field>(m: &GenMono<C>) -> Result<()> {
    if m.is_scalar() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("parameter depends on z or t in a plain q-series".into()))
    }
}

/// Evaluate a basic hypergeometric series as a q-series known below `ctx.order`.
pub fn phi<C: Field>(spec: &PhiSpec<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    let d = ctx.denom;
    let conv = |ms: &[Monomial<C>]| -> Result<Vec<GenMono<C>>> {
        ms.iter().map(|m| GenMono::from_monomial(m, d)).collect()
    };
    let up = conv(&spec.uppers)?;
    let low = conv(&spec.lowers)?;
    let base = GenMono::from_monomial(&spec.base, d)?;
    let arg = GenMono::from_monomial(&spec.arg, d)?;
    phi_general::<C, Series<C>>(&up, &low, &base, &arg, &(), ctx)
}

/// Summation plan: how many terms to add and how much working precision they need.
struct Plan {
    terms: u64,
    guard: i64,
}

const MAX_TERMS: i64 = 100_000;

/// Lower bound on the q-valuation change of the term ratio at index n, and
/// its monotone part (the part that is nondecreasing in n).
fn ratio_bounds<C: Field>(
    up: &[GenMono<C>],
    low: &[GenMono<C>],
    eb: i64,
    arg: &GenMono<C>,
    sigma: i64,
    t_order: Option<u32>,
    n: i64,
) -> (i64, i64) {
    let mut mono = arg.qexp + sigma * n * eb;
    for a in up {
        mono += (a.qexp + n * eb).min(0);
    }
    let mut extra = 0;
    for c in low {
        let e = c.qexp + n * eb;
        if c.tdeg > 0 {
            let reps = t_order.map_or(0, |t| (t / c.tdeg) as i64);
            mono += e.min(0) * reps;
        } else {
            extra += (-e).max(0);
        }
    }
    (mono + extra, mono)
}

/// First index m >= 0 with `m·b^m = 1` exactly, for a scalar monomial `m`.
fn unit_index<C: Field>(m: &GenMono<C>, base: &GenMono<C>) -> Option<i64> {
    if !m.is_scalar() || m.qexp > 0 || m.qexp % base.qexp != 0 {
        return None;
    }
    let k = -m.qexp / base.qexp;
    let c = m.coeff.mul_ref(&base.coeff.pow_i64(k)?);
    c.is_one().then_some(k)
}

fn plan<C: Field>(
    up: &[GenMono<C>],
    low: &[GenMono<C>],
    base: &GenMono<C>,
    arg: &GenMono<C>,
    t_order: Option<u32>,
    order: i64,
) -> Result<Plan> {
    let eb = base.qexp;
    let sigma = 1 + low.len() as i64 - up.len() as i64;
    // after a vanishing upper factor every later term is zero
    let mut hard = up.iter().filter_map(|a| unit_index(a, base)).map(|k| k + 1).min();
    if let (Some(t), true) = (t_order, arg.tdeg > 0) {
        let h = (t as i64 + arg.tdeg as i64 - 1) / arg.tdeg as i64;
        hard = Some(hard.map_or(h, |x| x.min(h)));
    }
    let zero_low = low.iter().filter_map(|c| unit_index(c, base)).min();
    let summable = sigma > 0 || (sigma == 0 && arg.qexp > 0);
    if !summable && hard.is_none() {
        return Err(Error::NonSummable(format!(
            "term valuations do not grow (r = {}, s = {}, argument exponent {})",
            up.len(),
            low.len(),
            arg.qexp
        )));
    }
    let (mut n, mut v, mut vmin) = (0i64, 0i64, 0i64);
    loop {
        if hard.is_some_and(|h| n >= h) {
            break;
        }
        let (delta, mono) = ratio_bounds(up, low, eb, arg, sigma, t_order, n);
        if summable && v >= order && mono >= 0 {
            break;
        }
        if n > MAX_TERMS {
            return Err(Error::NonSummable("term valuations do not reach the truncation".into()));
        }
        if zero_low == Some(n) {
            return Err(Error::ZeroDenominator(format!("lower parameter factor vanishes at n = {n}")));
        }
        v += delta;
        vmin = vmin.min(v);
        n += 1;
    }
    Ok(Plan { terms: n as u64, guard: -vmin })
}

/// Sum `Σ (up; b)_n / (b, low; b)_n · ((−1)^n b^C(n,2))^(1+s−r) · arg^n`
/// in any [`PhiAlgebra`].
pub fn phi_general<C: Field, A: PhiAlgebra<C>>(
    up: &[GenMono<C>],
    low: &[GenMono<C>],
    base: &GenMono<C>,
    arg: &GenMono<C>,
    actx: &A::Ctx,
    ctx: &SeriesContext,
) -> Result<A> {
    if !base.is_scalar() || base.qexp <= 0 {
        return Err(Error::NonPositiveBaseExponent(base.exp_rational(ctx.denom).to_string()));
    }
    if low.iter().any(|c| c.tdeg == 0 && c.zdeg != 0) {
        return Err(Error::NotLaurentPolynomial("lower parameter depends on z alone".into()));
    }
    let t_order = A::t_order(actx);
    let plan = plan(up, low, base, arg, t_order, ctx.order)?;
    let sigma = 1 + low.len() as i64 - up.len() as i64;
    let top = ctx.order + plan.guard;
    let mut term = A::one(actx, ctx.denom, top);
    let mut sum = term.clone();
    let mut bn = GenMono::one();
    for _ in 1..plan.terms {
        let mut next = term;
        for c in low {
            next = next.div_one_minus_gen(&c.mul(&bn))?;
        }
        let bn1 = bn.mul(base);
        next = next.div_one_minus_gen(&bn1)?;
        for a in up {
            next = next.mul_one_minus_gen(&a.mul(&bn))?;
        }
        let sign = bn.neg().pow(sigma)?;
        next = next.mul_gen(&sign.mul(arg))?;
        sum = sum.add_gen(&next)?;
        term = next;
        bn = bn1;
    }
    Ok(sum.truncate_q(ctx.order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::{pochhammer_multi, Count};
    use crate::CycRat;
    use num_rational::Rational64;
    use num_traits::One;

    type S = Series<CycRat>;
    type M = Monomial<CycRat>;

    fn q(n: i64, d: i64) -> M {
        M::q_pow(n, d)
    }

    fn w() -> CycRat {
        CycRat::omega()
    }

    fn mono(c: CycRat, n: i64, d: i64) -> M {
        M::new(c, Rational64::new(n, d))
    }

    fn prod(args: &[M], base: M, c: &SeriesContext) -> S {
        pochhammer_multi(args, &base, Count::Infinite, c).unwrap()
    }

    /// Direct oracle: explicit Pochhammer quotients summed term by term.
    fn direct(spec: &PhiSpec<CycRat>, terms: u64, c: &SeriesContext) -> S {
        let wide = c.with_guard(40);
        let mut sum = S::zero(c.denom, wide.order);
        let r = spec.uppers.len() as i64;
        let s = spec.lowers.len() as i64;
        for n in 0..terms {
            let fin = Count::Finite(n);
            let mut t = pochhammer_multi(&spec.uppers, &spec.base, fin, &wide).unwrap();
            let mut den = pochhammer_multi(&spec.lowers, &spec.base, fin, &wide).unwrap();
            den = den.mul(&pochhammer_multi(std::slice::from_ref(&spec.base), &spec.base, fin, &wide).unwrap()).unwrap();
            t = t.div(&den).unwrap();
            let ni = n as i64;
            let b = spec.base.pow(ni * (ni - 1) / 2).unwrap();
            let sign = if ni % 2 == 0 { CycRat::one() } else { -CycRat::one() };
            let fac = b.scale(&sign).pow(1 + s - r).unwrap().mul(&spec.arg.pow(ni).unwrap());
            t = t.mul_monomial(&fac).unwrap();
            sum = sum.add(&t).unwrap();
        }
        sum
    }

    #[test]
    fn geometric() {
        let c = SeriesContext::new(1, 12).unwrap();
        let spec = PhiSpec { uppers: vec![q(1, 1)], lowers: vec![], base: q(1, 1), arg: q(1, 1) };
        let got = phi(&spec, &c).unwrap();
        let expect = S::one(1, 12).mul_one_minus(&CycRat::one(), 1).inverse().unwrap();
        assert!(got.equal_to_order(&expect, 12).unwrap());
    }

    #[test]
    fn q_binomial_example() {
        let c = SeriesContext::new(1, 20).unwrap();
        let spec = PhiSpec { uppers: vec![q(3, 1)], lowers: vec![], base: q(1, 1), arg: q(1, 1) };
        let got = phi(&spec, &c).unwrap();
        let mut expect = S::one(1, 20);
        for j in 1..=3 {
            expect = expect.div_one_minus(&CycRat::one(), j).unwrap();
        }
        assert!(got.equal_to_order(&expect, 20).unwrap());
    }

    #[test]
    fn matches_direct_sum() {
        let c = SeriesContext::new(4, 40).unwrap();
        let spec = PhiSpec {
            uppers: vec![mono(w(), 3, 4), mono(-w(), 3, 4)],
            lowers: vec![mono(-CycRat::one(), 3, 2)],
            base: q(1, 1),
            arg: mono(CycRat::omega2(), 1, 2),
        };
        let got = phi(&spec, &c).unwrap();
        assert!(got.equal_to_order(&direct(&spec, 30, &c), 40).unwrap());
    }

    #[test]
    fn negative_lower_exponent() {
        // 2φ2 with q^(-1) parameters, cross-checked against the direct sum
        let c = SeriesContext::new(2, 30).unwrap();
        let spec = PhiSpec {
            uppers: vec![mono(w(), -1, 1), mono(CycRat::omega2(), -1, 1)],
            lowers: vec![q(1, 2), mono(-CycRat::one(), 1, 2)],
            base: q(2, 1),
            arg: mono(-CycRat::one(), 3, 1),
        };
        let got = phi(&spec, &c).unwrap();
        assert!(got.truncation() >= 30);
        assert!(got.equal_to_order(&direct(&spec, 12, &c), 30).unwrap());
    }

    #[test]
    fn q_gauss() {
        let c = SeriesContext::new(2, 40).unwrap();
        let (a, b, cc) = (q(1, 2), mono(w(), 1, 1), q(3, 1));
        let arg = cc.div(&a.mul(&b)).unwrap();
        let spec = PhiSpec { uppers: vec![a.clone(), b.clone()], lowers: vec![cc.clone()], base: q(1, 1), arg: arg.clone() };
        let lhs = phi(&spec, &c).unwrap();
        let num = prod(&[cc.div(&a).unwrap(), cc.div(&b).unwrap()], q(1, 1), &c.with_guard(10));
        let den = prod(&[cc.clone(), arg], q(1, 1), &c.with_guard(10));
        let rhs = num.div(&den).unwrap();
        assert!(lhs.equal_to_order(&rhs, 40).unwrap());
    }

    #[test]
    fn terminating_and_errors() {
        let c = SeriesContext::new(1, 10).unwrap();
        // (q^-2; q)_n vanishes from n = 3 on: a polynomial in the argument
        let spec = PhiSpec { uppers: vec![q(-2, 1)], lowers: vec![], base: q(1, 1), arg: M::constant(CycRat::from_int(1)) };
        let got = phi(&spec, &c).unwrap();
        let direct3 = direct(&spec, 3, &c);
        assert!(got.equal_to_order(&direct3, 10).unwrap());
        let bad = PhiSpec { uppers: vec![], lowers: vec![q(-1, 1)], base: q(1, 1), arg: q(1, 1) };
        assert!(matches!(phi(&bad, &c), Err(Error::ZeroDenominator(_))));
        let div = PhiSpec { uppers: vec![q(1, 1)], lowers: vec![], base: q(1, 1), arg: M::one() };
        assert!(matches!(phi(&div, &c), Err(Error::NonSummable(_))));
    }
}
