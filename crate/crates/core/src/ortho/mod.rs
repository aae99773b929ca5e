//! Rogers and Askey–Wilson polynomials as symmetric Laurent polynomials in z
//! (with x = (z + 1/z)/2 left implicit), their generating functions in an
//! outer variable t, and one-variable transformation checks.

mod genfun;
mod transform;
mod tz;

pub use genfun::{genfun_lhs, genfun_rhs, GenFun};
pub use transform::{transform_check, transform_sides, Specialization, Transform, TransformReport};
pub use tz::TzSeries;

use crate::ctengine::ZSeries;
use crate::error::{Error, Result};
use crate::field::{CubeRootField, Field};
use crate::qkernel::{phi, PhiSpec};
use crate::series::{Monomial, Series, SeriesContext};

/// Parameter `a` and base of `C_n(x; a | base)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RogersParam<C> {
    pub a: Monomial<C>,
    pub base: Monomial<C>,
}

/// Parameters of `p_n(x; a, b, c, d | base)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AWParam<C> {
    pub a: Monomial<C>,
    pub b: Monomial<C>,
    pub c: Monomial<C>,
    pub d: Monomial<C>,
    pub base: Monomial<C>,
}

impl<C: Field> RogersParam<C> {
    pub fn new(a: Monomial<C>, base: Monomial<C>) -> Self {
        RogersParam { a, base }
    }
}

impl<C: Field> AWParam<C> {
    pub fn new(abcd: [Monomial<C>; 4], base: Monomial<C>) -> Self {
        let [a, b, c, d] = abcd;
        AWParam { a, b, c, d, base }
    }
}

/// Scaled base exponent, checked positive.
fn base_exp<C: Field>(b: &Monomial<C>, d: u32) -> Result<i64> {
    let e = b.scaled_exp(d)?;
    if e <= 0 {
        return Err(Error::NonPositiveBaseExponent(crate::series::fmt_exponent(b.exp)));
    }
    Ok(e)
}

/// Truncation lost by the factors of `(m; b)_n`.
fn loss<C: Field>(m: &Monomial<C>, eb: i64, n: u64, d: u32) -> Result<i64> {
    let e = m.scaled_exp(d)?;
    Ok((0..n as i64).map(|j| (-(e + j * eb)).max(0)).sum())
}

/// `(m; b)_n` as a Laurent polynomial in z, m carrying z^zdeg.
fn zpoch<C: Field>(m: &Monomial<C>, zdeg: i64, b: &Monomial<C>, n: u64, d: u32, top: i64) -> Result<ZSeries<C>> {
    let (cb, eb) = (b.coeff.clone(), b.scaled_exp(d)?);
    let (mut c, mut e) = (m.coeff.clone(), m.scaled_exp(d)?);
    let mut acc = ZSeries::one(d, top);
    for _ in 0..n {
        acc = acc.mul_factor(&crate::ctengine::ZFactor { coeff: c.clone(), qexp: e, zdeg })?;
        c = c.mul_ref(&cb);
        e += eb;
    }
    Ok(acc)
}

/// `(m; b)_n` as a series.
fn spoch<C: Field>(m: &Monomial<C>, b: &Monomial<C>, n: u64, d: u32, top: i64) -> Result<Series<C>> {
    Ok(zpoch(m, 0, b, n, d, top)?.constant_term())
}

/// `1/(b; b)_n`.
fn inv_bb<C: Field>(b: &Monomial<C>, n: u64, d: u32, top: i64) -> Result<Series<C>> {
    let (cb, eb) = (b.coeff.clone(), b.scaled_exp(d)?);
    let mut acc = Series::one(d, top);
    let mut c = cb.clone();
    for j in 1..=n as i64 {
        acc = acc.div_one_minus(&c, eb * j)?;
        c = c.mul_ref(&cb);
    }
    Ok(acc)
}

/// `C_n(x; a | b) = Σ_k (a;b)_k (a;b)_{n−k} / ((b;b)_k (b;b)_{n−k}) z^{n−2k}`.
pub fn rogers_poly<C: Field>(n: u64, p: &RogersParam<C>, ctx: &SeriesContext) -> Result<ZSeries<C>> {
    let d = ctx.denom;
    let eb = base_exp(&p.base, d)?;
    let top = ctx.order + 2 * loss(&p.a, eb, n, d)?;
    let mut pa = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        pa.push(spoch(&p.a, &p.base, k, d, top)?.mul(&inv_bb(&p.base, k, d, top)?)?);
    }
    let mut acc = ZSeries::zero(d, top);
    for k in 0..=n {
        let c = pa[k as usize].mul(&pa[(n - k) as usize])?;
        acc = acc.add(&ZSeries::from_series(c).shift(&C::one(), 0, n as i64 - 2 * k as i64))?;
    }
    Ok(acc.truncate(ctx.order))
}

/// First `j < n` with `m·b^j = 1`, if any.
fn vanishing_index<C: Field>(m: &Monomial<C>, b: &Monomial<C>, n: u64) -> Option<u64> {
    let mut x = m.clone();
    for j in 0..n {
        if x.exp == 0.into() && x.coeff.is_one() {
            return Some(j);
        }
        x = x.mul(b);
    }
    None
}

/// `p_n(x; a, b, c, d | base)`, normalised so that the generating function
/// has coefficients `p_n / (base, ab, cd; base)_n`.
pub fn aw_poly<C: Field>(n: u64, p: &AWParam<C>, ctx: &SeriesContext) -> Result<ZSeries<C>> {
    let d = ctx.denom;
    let q = &p.base;
    let eb = base_exp(q, d)?;
    let (ab, cd) = (p.a.mul(&p.b), p.c.mul(&p.d));
    for (name, m) in [("ab", &ab), ("cd", &cd)] {
        if let Some(j) = vanishing_index(m, q, n) {
            return Err(Error::ZeroDenominator(format!("({name}; q)_k vanishes from k = {}", j + 1)));
        }
    }
    let mut guard = 0;
    for m in [&p.a, &p.b, &p.c, &p.d, &ab, &cd] {
        guard += loss(m, eb, n, d)?;
    }
    let top = ctx.order + guard;
    let inv: Vec<Series<C>> = (0..=n).map(|k| inv_bb(q, k, d, top)).collect::<Result<_>>()?;
    let qq_n = spoch(q, q, n, d, top)?;
    let mut acc = ZSeries::zero(d, top);
    for k in 0..=n {
        let j = n - k;
        let bn = qq_n.mul(&inv[k as usize])?.mul(&inv[j as usize])?;
        let abk = spoch(&ab.mul(&q.pow(k as i64)?), q, j, d, top)?;
        let cdj = spoch(&cd.mul(&q.pow(j as i64)?), q, k, d, top)?;
        let scalar = bn.mul(&abk)?.mul(&cdj)?;
        let zl = zpoch(&p.a, 1, q, k, d, top)?.mul(&zpoch(&p.b, 1, q, k, d, top)?)?;
        let zr = zpoch(&p.c, -1, q, j, d, top)?.mul(&zpoch(&p.d, -1, q, j, d, top)?)?;
        let term = zl.mul(&zr)?.mul_series(&scalar)?.shift(&C::one(), 0, j as i64 - k as i64);
        acc = acc.add(&term)?;
    }
    Ok(acc.truncate(ctx.order))
}

/// `C_n(−1/2; a | b)`, i.e. the Rogers polynomial at z = ω.
pub fn rogers_at_minus_half<C: CubeRootField>(n: u64, p: &RogersParam<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    rogers_poly(n, p, ctx)?.eval_at(&C::omega(), 0)
}

/// `Σ_l (a³;b³)_l (a⁻¹;b)_{n−3l} / ((b³;b³)_l (b;b)_{n−3l}) a^{n−3l}`.
pub fn csv_sum<C: Field>(n: u64, p: &RogersParam<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    let d = ctx.denom;
    let eb = base_exp(&p.base, d)?;
    let (a3, b3, ainv) = (p.a.pow(3)?, p.base.pow(3)?, p.a.inv()?);
    let mut guard = loss(&ainv, eb, n, d)? + loss(&a3, 3 * eb, n, d)?;
    guard += (-p.a.scaled_exp(d)? * n as i64).max(0);
    let top = ctx.order + guard;
    let mut acc = Series::zero(d, top);
    for l in 0..=n / 3 {
        let m = n - 3 * l;
        let t = spoch(&a3, &b3, l, d, top)?
            .mul(&inv_bb(&b3, l, d, top)?)?
            .mul(&spoch(&ainv, &p.base, m, d, top)?)?
            .mul(&inv_bb(&p.base, m, d, top)?)?
            .mul_monomial(&p.a.pow(m as i64)?)?;
        acc = acc.add(&t)?;
    }
    Ok(acc.truncate(ctx.order))
}

/// The same value written as a terminating balanced ₄φ₃ in base b³.
pub fn csv_balanced<C: Field>(n: u64, p: &RogersParam<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    let d = ctx.denom;
    let eb = base_exp(&p.base, d)?;
    let (a, b) = (&p.a, &p.base);
    let ainv = a.inv()?;
    let bp = |k: i64| b.pow(k);
    let ni = n as i64;
    let spec = PhiSpec {
        uppers: vec![bp(-ni)?, bp(1 - ni)?, bp(2 - ni)?, a.pow(3)?],
        lowers: vec![a.mul(&bp(1 - ni)?), a.mul(&bp(2 - ni)?), a.mul(&bp(3 - ni)?)],
        base: bp(3)?,
        arg: bp(3)?,
    };
    let guard = loss(&ainv, eb, n, d)? + (-a.scaled_exp(d)? * ni).max(0);
    let g = ctx.with_guard(guard);
    let pre = spoch(&ainv, b, n, d, g.order)?.mul(&inv_bb(b, n, d, g.order)?)?.mul_monomial(&a.pow(ni)?)?;
    Ok(pre.mul(&phi(&spec, &g)?)?.truncate(ctx.order))
}

/// The four ways of writing Rogers polynomials through Askey–Wilson ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AwSpecialization {
    /// `C_n(x; a²|q)` against `p_n(x; a, −a, aq^½, −aq^½ | q)`.
    Cpa,
    /// `C_n(x; a²|q²)` against `p_n(x; a, −a, q^½, −q^½ | q)`.
    Cpb,
    /// `C_{2n}(x; a|q)` against `p_n(2x²−1; a, aq, −1, −q | q²)`.
    Cpc,
    /// `C_{2n+1}(x; a|q)` against `x · p_n(2x²−1; a, aq, −q, −q² | q²)`.
    Cpd,
}

/// Both sides of one specialization at index n, as Laurent polynomials in z.
pub fn aw_specialization<C: Field>(
    which: AwSpecialization,
    n: u64,
    a: &Monomial<C>,
    q: &Monomial<C>,
    ctx: &SeriesContext,
) -> Result<(ZSeries<C>, ZSeries<C>)> {
    let d = ctx.denom;
    let one = C::one();
    let neg = |m: &Monomial<C>| m.neg();
    let sq = q.sqrt()?;
    let q2 = q.pow(2)?;
    let a2 = a.pow(2)?;
    let guard = 8 * d as i64 + 2 * (n as i64 + 2) * (-a.scaled_exp(d)?).max(0);
    let g = ctx.with_guard(guard);
    let top = g.order;
    let prods = |ms: &[Monomial<C>], b: &Monomial<C>, k: u64| -> Result<Series<C>> {
        let mut acc = Series::one(d, top);
        for m in ms {
            acc = acc.mul(&spoch(m, b, k, d, top)?)?;
        }
        Ok(acc)
    };
    let (lhs, rhs) = match which {
        AwSpecialization::Cpa => {
            let lhs = rogers_poly(n, &RogersParam::new(a2.clone(), q.clone()), &g)?;
            let aw = AWParam::new([a.clone(), neg(a), a.mul(&sq), neg(&a.mul(&sq))], q.clone());
            let num = spoch(&a2.pow(2)?, q, n, d, top)?;
            let den = prods(&[q.clone(), neg(&a2), a2.mul(&sq), neg(&a2.mul(&sq))], q, n)?;
            (lhs, aw_poly(n, &aw, &g)?.mul_series(&num.div(&den)?)?)
        }
        AwSpecialization::Cpb => {
            let lhs = rogers_poly(n, &RogersParam::new(a2.clone(), q2.clone()), &g)?;
            let aw = AWParam::new([a.clone(), neg(a), sq.clone(), neg(&sq)], q.clone());
            let num = spoch(&a2, q, n, d, top)?;
            let den = prods(&[q2.clone(), a2.mul(q)], &q2, n)?;
            (lhs, aw_poly(n, &aw, &g)?.mul_series(&num.div(&den)?)?)
        }
        AwSpecialization::Cpc => {
            let lhs = rogers_poly(2 * n, &RogersParam::new(a.clone(), q.clone()), &g)?;
            let aw = AWParam::new([a.clone(), a.mul(q), Monomial::constant(one.neg_ref()), neg(q)], q2.clone());
            let num = spoch(&a2, &q2, n, d, top)?;
            let den = prods(&[q.clone(), neg(a)], q, 2 * n)?;
            (lhs, aw_poly(n, &aw, &g)?.substitute_pow(2).mul_series(&num.div(&den)?)?)
        }
        AwSpecialization::Cpd => {
            let lhs = rogers_poly(2 * n + 1, &RogersParam::new(a.clone(), q.clone()), &g)?;
            let aw = AWParam::new([a.clone(), a.mul(q), neg(q), neg(&q2)], q2.clone());
            let num = spoch(&a2, &q2, n + 1, d, top)?;
            let den = prods(&[q.clone(), neg(a)], q, 2 * n + 1)?;
            // 2x = z + 1/z
            let two_x = ZSeries::monomial(one.clone(), 0, 1, d, top).add(&ZSeries::monomial(one, 0, -1, d, top))?;
            let rhs = aw_poly(n, &aw, &g)?.substitute_pow(2).mul(&two_x)?.mul_series(&num.div(&den)?)?;
            (lhs, rhs)
        }
    };
    Ok((lhs.truncate(ctx.order), rhs.truncate(ctx.order)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CycRat;
    use num_rational::Rational64;
    use num_traits::One;

    type M = Monomial<CycRat>;

    fn q(n: i64, d: i64) -> M {
        M::q_pow(n, d)
    }

    fn ctx(d: u32, n: i64) -> SeriesContext {
        SeriesContext::new(d, n).unwrap()
    }

    #[test]
    fn rogers_low_degrees() {
        let c = ctx(1, 20);
        let p = RogersParam::new(q(2, 1), q(1, 1));
        let c0 = rogers_poly(0, &p, &c).unwrap();
        assert!(c0.equal_to_order(&ZSeries::one(1, 20), 20).unwrap());
        // C₁ = (1−a)/(1−q)·(z + 1/z)
        let c1 = rogers_poly(1, &p, &c).unwrap();
        let f = Series::one(1, 20).mul_one_minus(&CycRat::one(), 2).div_one_minus(&CycRat::one(), 1).unwrap();
        let zz = ZSeries::monomial(CycRat::one(), 0, 1, 1, 20).add(&ZSeries::monomial(CycRat::one(), 0, -1, 1, 20)).unwrap();
        assert!(c1.equal_to_order(&zz.mul_series(&f).unwrap(), 20).unwrap());
        // C₂ = (a;q)₂/(q;q)₂ (z² + z⁻²) + ((1−a)/(1−q))²
        let c2 = rogers_poly(2, &p, &c).unwrap();
        let aq2 = Series::one(1, 20)
            .mul_one_minus(&CycRat::one(), 2)
            .mul_one_minus(&CycRat::one(), 3)
            .div_one_minus(&CycRat::one(), 1)
            .unwrap()
            .div_one_minus(&CycRat::one(), 2)
            .unwrap();
        assert!(c2.coeff(2).equal_to_order(&aq2, 20).unwrap());
        assert!(c2.coeff(-2).equal_to_order(&aq2, 20).unwrap());
        assert!(c2.coeff(0).equal_to_order(&f.mul(&f).unwrap(), 20).unwrap());
        assert!(c2.coeff(1).is_zero());
    }

    #[test]
    fn rogers_is_symmetric() {
        let c = ctx(2, 30);
        let p = RogersParam::new(q(3, 2).scale(&CycRat::omega()), q(1, 1));
        for n in 0..6 {
            let x = rogers_poly(n, &p, &c).unwrap();
            assert!(x.equal_to_order(&x.invert_z(), 30).unwrap());
        }
    }

    fn perms(v: Vec<usize>) -> Vec<Vec<usize>> {
        if v.len() <= 1 {
            return vec![v];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.clone();
            let x = rest.remove(i);
            for mut p in perms(rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn aw_parameter_symmetry() {
        let c = ctx(2, 12);
        let ps = [q(1, 2), q(1, 1).neg(), q(3, 2).scale(&CycRat::omega()), q(2, 1)];
        for n in 0..=3 {
            let base = aw_poly(n, &AWParam::new(ps.clone(), q(1, 1)), &c).unwrap();
            assert!(base.equal_to_order(&base.invert_z(), 12).unwrap());
            for p in perms(vec![0, 1, 2, 3]) {
                let abcd = [ps[p[0]].clone(), ps[p[1]].clone(), ps[p[2]].clone(), ps[p[3]].clone()];
                let x = aw_poly(n, &AWParam::new(abcd, q(1, 1)), &c).unwrap();
                assert!(x.equal_to_order(&base, 12).unwrap(), "n = {n}, perm {p:?}");
            }
        }
    }

    #[test]
    fn aw_zero_denominator() {
        let c = ctx(1, 10);
        let p = AWParam::new([q(-1, 1), q(0, 1), q(1, 1), q(1, 1)], q(1, 1));
        assert!(matches!(aw_poly(2, &p, &c), Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn specializations() {
        let c = ctx(2, 16);
        for which in [AwSpecialization::Cpa, AwSpecialization::Cpb, AwSpecialization::Cpc, AwSpecialization::Cpd] {
            for n in 0..=3 {
                let (l, r) = aw_specialization(which, n, &q(1, 1), &q(1, 1), &c).unwrap();
                assert!(l.equal_to_order(&r, 16).unwrap(), "{which:?} n = {n}");
            }
        }
    }

    #[test]
    fn value_at_minus_half() {
        let c = ctx(1, 20);
        let p = RogersParam::new(q(1, 1), q(1, 1));
        assert!(rogers_at_minus_half(0, &p, &c).unwrap().equal_to_order(&Series::one(1, 20), 20).unwrap());
        // n = 1: −(1−a)/(1−q)
        let one = rogers_at_minus_half(1, &RogersParam::new(q(2, 1), q(1, 1)), &c).unwrap();
        let f = Series::one(1, 20).mul_one_minus(&CycRat::one(), 2).div_one_minus(&CycRat::one(), 1).unwrap().neg();
        assert!(one.equal_to_order(&f, 20).unwrap());
        for n in 0..=6 {
            let l = rogers_at_minus_half(n, &p, &c).unwrap();
            assert!(l.equal_to_order(&csv_sum(n, &p, &c).unwrap(), 20).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn balanced_form() {
        let c = ctx(1, 15);
        let p = RogersParam::new(M::new(CycRat::omega(), Rational64::from_integer(1)), q(1, 1));
        for n in 0..=5 {
            let a = csv_sum(n, &p, &c).unwrap();
            let b = csv_balanced(n, &p, &c).unwrap();
            assert!(a.equal_to_order(&b, 15).unwrap(), "n = {n}");
        }
    }
}
