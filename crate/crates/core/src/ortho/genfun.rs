use crate::ctengine::ZSeries;
use crate::error::Result;
use crate::field::Field;
use crate::qkernel::{phi_general, pochhammer_apply, pochhammer_multi, Count, GenMono};
use crate::series::{Monomial, Series, SeriesContext};

use super::{rogers_poly, spoch, RogersParam, TzSeries};

/// Generating functions whose t-coefficients are multiples of Rogers polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenFun {
    Acg,
    Adg,
    Ncg,
    Acge,
    Acgm,
}

impl GenFun {
    pub const ALL: [GenFun; 5] = [GenFun::Acg, GenFun::Adg, GenFun::Ncg, GenFun::Acge, GenFun::Acgm];

    pub fn name(self) -> &'static str {
        match self {
            GenFun::Acg => "acg",
            GenFun::Adg => "adg",
            GenFun::Ncg => "ncg",
            GenFun::Acge => "acge",
            GenFun::Acgm => "acgm",
        }
    }
}

struct Builder<'a, C> {
    d: u32,
    tn: u32,
    top: i64,
    ctx: &'a SeriesContext,
    _c: std::marker::PhantomData<C>,
}

impl<C: Field> Builder<'_, C> {
    /// `c · q^e · z^zd · t^td` with e given as a rational exponent.
    fn g(&self, m: &Monomial<C>, zdeg: i64, tdeg: u32) -> Result<GenMono<C>> {
        Ok(GenMono { zdeg, tdeg, ..GenMono::from_monomial(m, self.d)? })
    }

    fn one(&self) -> TzSeries<C> {
        TzSeries::one(self.tn, self.d, self.top)
    }

    fn poch(&self, x: &TzSeries<C>, arg: &GenMono<C>, base: &Monomial<C>, invert: bool) -> Result<TzSeries<C>> {
        let b = GenMono::from_monomial(base, self.d)?;
        pochhammer_apply(x, arg, &b, Count::Infinite, invert, self.top)
    }

    fn phi(&self, up: &[GenMono<C>], low: &[GenMono<C>], base: &Monomial<C>, arg: &GenMono<C>) -> Result<TzSeries<C>> {
        let b = GenMono::from_monomial(base, self.d)?;
        let g = self.ctx.with_order(self.top);
        phi_general::<C, TzSeries<C>>(up, low, &b, arg, &self.tn, &g)
    }

    fn scalar_inv_poch(&self, x: &TzSeries<C>, args: &[Monomial<C>], base: &Monomial<C>) -> Result<TzSeries<C>> {
        let p = pochhammer_multi(args, base, Count::Infinite, &self.ctx.with_order(self.top))?;
        x.mul_series(&p.inverse()?)
    }
}

/// t-coefficients `0..t_order` of the left-hand side, as Laurent polynomials in z.
pub fn genfun_lhs<C: Field>(variant: GenFun, a: &Monomial<C>, t_order: u32, ctx: &SeriesContext) -> Result<Vec<ZSeries<C>>> {
    let d = ctx.denom;
    let b = Builder { d, tn: t_order, top: ctx.order + 4 * d as i64, ctx, _c: std::marker::PhantomData };
    let q = Monomial::q_pow(1, 1);
    let q2 = Monomial::q_pow(2, 1);
    let sq = q.sqrt()?;
    let one = Monomial::one();
    let a2 = a.pow(2)?;
    let out = match variant {
        GenFun::Acg => {
            // (tq/z; q²)_∞ / (tz; q²)_∞ · ₂φ₁(az, −az; −a²; q, t/z)
            let x = b.poch(&b.one(), &b.g(&q, -1, 1)?, &q2, false)?;
            let x = b.poch(&x, &b.g(&one, 1, 1)?, &q2, true)?;
            let f = b.phi(&[b.g(a, 1, 0)?, b.g(&a.neg(), 1, 0)?], &[b.g(&a2.neg(), 0, 0)?], &q, &b.g(&one, -1, 1)?)?;
            x.mul(&f)?
        }
        GenFun::Adg => {
            // (−t/z; q)_∞ / (tz; q)_∞ · ₂φ₁(az², az²q; a²q; q², t²/z²)
            let x = b.poch(&b.one(), &b.g(&one.neg(), -1, 1)?, &q, false)?;
            let x = b.poch(&x, &b.g(&one, 1, 1)?, &q, true)?;
            let f = b.phi(&[b.g(a, 2, 0)?, b.g(&a.mul(&q), 2, 0)?], &[b.g(&a2.mul(&q), 0, 0)?], &q2, &b.g(&one, -2, 2)?)?;
            x.mul(&f)?
        }
        GenFun::Ncg => {
            // ₂φ₁(az, −az; −a²; q, t/z) · ₂φ₁(aq^½/z, −aq^½/z; −a²q; q, tz)
            let f = b.phi(&[b.g(a, 1, 0)?, b.g(&a.neg(), 1, 0)?], &[b.g(&a2.neg(), 0, 0)?], &q, &b.g(&one, -1, 1)?)?;
            let asq = a.mul(&sq);
            let h = b.phi(&[b.g(&asq, -1, 0)?, b.g(&asq.neg(), -1, 0)?], &[b.g(&a2.mul(&q).neg(), 0, 0)?], &q, &b.g(&one, 1, 1)?)?;
            f.mul(&h)?
        }
        GenFun::Acge | GenFun::Acgm => {
            // (a²t²; q²)_∞ / ((−s; q)_∞ (tz, t/z; q²)_∞) · ₂φ₂(tz, t/z; at, −at; q, −s)
            let s = if variant == GenFun::Acge { a2.clone() } else { a2.mul(&q.inv()?) };
            let x = b.poch(&b.one(), &b.g(&a2, 0, 2)?, &q2, false)?;
            let x = b.poch(&x, &b.g(&one, 1, 1)?, &q2, true)?;
            let x = b.poch(&x, &b.g(&one, -1, 1)?, &q2, true)?;
            let x = b.scalar_inv_poch(&x, &[s.neg()], &q)?;
            let f = b.phi(
                &[b.g(&one, 1, 1)?, b.g(&one, -1, 1)?],
                &[b.g(a, 0, 1)?, b.g(&a.neg(), 0, 1)?],
                &q,
                &b.g(&s.neg(), 0, 0)?,
            )?;
            x.mul(&f)?
        }
    };
    Ok(out.truncate(ctx.order).into_coeffs())
}

/// The stated coefficient of tⁿ: a q-prefactor times a Rogers polynomial.
pub fn genfun_rhs<C: Field>(variant: GenFun, a: &Monomial<C>, n: u64, ctx: &SeriesContext) -> Result<ZSeries<C>> {
    let d = ctx.denom;
    let g = ctx.with_guard(4 * d as i64 + 2 * n as i64 * (-a.scaled_exp(d)?).max(0));
    let top = g.order;
    let q = Monomial::q_pow(1, 1);
    let q2 = Monomial::q_pow(2, 1);
    let sq = q.sqrt()?;
    let a2 = a.pow(2)?;
    let a4 = a2.pow(2)?;
    let ratio = |num: &[Monomial<C>], den: &[Monomial<C>], base: &Monomial<C>| -> Result<Series<C>> {
        let mut acc = Series::one(d, top);
        for m in num {
            acc = acc.mul(&spoch(m, base, n, d, top)?)?;
        }
        for m in den {
            acc = acc.div(&spoch(m, base, n, d, top)?)?;
        }
        Ok(acc)
    };
    let (pre, rp) = match variant {
        GenFun::Acg | GenFun::Acge => (ratio(&[a2.mul(&q)], std::slice::from_ref(&a4), &q2)?, RogersParam::new(a2.clone(), q2.clone())),
        GenFun::Acgm => {
            let qi = q.inv()?;
            (ratio(&[a2.mul(&qi)], &[a4.mul(&qi.pow(2)?)], &q2)?, RogersParam::new(a2.clone(), q2.clone()))
        }
        GenFun::Adg => (ratio(&[a.neg()], std::slice::from_ref(&a2), &q)?, RogersParam::new(a.clone(), q.clone())),
        GenFun::Ncg => {
            let s = a2.mul(&sq);
            (ratio(&[s.clone(), s.neg()], &[a2.mul(&q).neg(), a4.clone()], &q)?, RogersParam::new(a2.clone(), q.clone()))
        }
    };
    Ok(rogers_poly(n, &rp, &g)?.mul_series(&pre)?.truncate(ctx.order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CycRat;

    #[test]
    fn coefficients_match_rogers_multiples() {
        let cases = [
            (GenFun::Acg, Monomial::<CycRat>::q_pow(1, 1), 1u32),
            (GenFun::Adg, Monomial::q_pow(1, 1), 1),
            (GenFun::Ncg, Monomial::q_pow(1, 1), 2),
            (GenFun::Acge, Monomial::q_pow(1, 1), 1),
            (GenFun::Acgm, Monomial::q_pow(2, 1), 1),
        ];
        for (v, a, d) in cases {
            let ctx = SeriesContext::new(d, 12 * d as i64).unwrap();
            let lhs = genfun_lhs(v, &a, 5, &ctx).unwrap();
            assert!(lhs[0].equal_to_order(&ZSeries::one(d, ctx.order), ctx.order).unwrap());
            for (n, l) in lhs.iter().enumerate() {
                let r = genfun_rhs(v, &a, n as u64, &ctx).unwrap();
                assert!(l.equal_to_order(&r, ctx.order).unwrap(), "{} n = {n}", v.name());
            }
        }
    }
}
