use crate::error::{Error, Result};
use crate::field::CubeRootField;
use crate::qkernel::{phi, pochhammer_multi, Count, PhiSpec};
use crate::series::{Monomial, Series, SeriesContext};

/// One-variable transformation and summation identities checked at
/// monomial specializations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transform {
    Cta,
    Ctb,
    Ctam,
    Ctan,
    Djt,
    Jt,
    Nqt,
    Koornwinder1,
    Koornwinder2,
    GsAnalytic1,
    GsAnalytic2,
}

impl Transform {
    pub const ALL: [Transform; 11] = [
        Transform::Cta,
        Transform::Ctb,
        Transform::Ctam,
        Transform::Ctan,
        Transform::Djt,
        Transform::Jt,
        Transform::Nqt,
        Transform::Koornwinder1,
        Transform::Koornwinder2,
        Transform::GsAnalytic1,
        Transform::GsAnalytic2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Transform::Cta => "cta",
            Transform::Ctb => "ctb",
            Transform::Ctam => "ctam",
            Transform::Ctan => "ctan",
            Transform::Djt => "djt",
            Transform::Jt => "jt",
            Transform::Nqt => "nqt",
            Transform::Koornwinder1 => "koornwinder1",
            Transform::Koornwinder2 => "koornwinder2",
            Transform::GsAnalytic1 => "gs_analytic1",
            Transform::GsAnalytic2 => "gs_analytic2",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Transform::ALL.into_iter().find(|t| t.name() == s)
    }
}

/// Monomial values for the free parameters; unused ones may be left `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Specialization<C> {
    pub a: Option<Monomial<C>>,
    pub t: Option<Monomial<C>>,
    pub z: Option<Monomial<C>>,
    pub c: Option<Monomial<C>>,
    pub x: Option<Monomial<C>>,
}

impl<C> Default for Specialization<C> {
    fn default() -> Self {
        Specialization { a: None, t: None, z: None, c: None, x: None }
    }
}

/// Outcome of comparing both sides of a transformation.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformReport<C> {
    pub id: Transform,
    /// Scaled exponent below which both sides agree.
    pub proven_order: i64,
    /// First disagreement: scaled exponent, left and right coefficients.
    pub first_mismatch: Option<(i64, C, C)>,
}

impl<C> TransformReport<C> {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

struct Env<'a> {
    g: SeriesContext,
    order: &'a SeriesContext,
}

impl Env<'_> {
    fn phi<C: CubeRootField>(&self, up: Vec<Monomial<C>>, low: Vec<Monomial<C>>, base: Monomial<C>, arg: Monomial<C>) -> Result<Series<C>> {
        phi(&PhiSpec { uppers: up, lowers: low, base, arg }, &self.g)
    }

    fn prod<C: CubeRootField>(&self, args: &[Monomial<C>], base: &Monomial<C>) -> Result<Series<C>> {
        pochhammer_multi(args, base, Count::Infinite, &self.g)
    }

    fn one_minus<C: CubeRootField>(&self, m: &Monomial<C>) -> Result<Series<C>> {
        Series::one(self.g.denom, self.g.order).sub(&m.to_series(&self.g)?)
    }
}

fn need<C: Clone>(m: &Option<Monomial<C>>, name: &str) -> Result<Monomial<C>> {
    m.clone().ok_or_else(|| Error::InvalidParameter(format!("specialization lacks {name}")))
}

fn pole(e: Error) -> Error {
    match e {
        Error::NotInvertible | Error::DivisionByZero => Error::PoleHit("a denominator vanishes at this specialization".into()),
        e => e,
    }
}

/// Both sides of `id` at `spec`, truncated at the context order.
pub fn transform_sides<C: CubeRootField>(id: Transform, spec: &Specialization<C>, ctx: &SeriesContext) -> Result<(Series<C>, Series<C>)> {
    sides(id, spec, ctx).map_err(pole)
}

fn sides<C: CubeRootField>(id: Transform, spec: &Specialization<C>, ctx: &SeriesContext) -> Result<(Series<C>, Series<C>)> {
    let env = Env { g: ctx.with_guard(12 * ctx.denom as i64), order: ctx };
    let q = |n: i64| Monomial::<C>::q_pow(n, 1);
    let w = Monomial::constant(C::omega());
    let w2 = w.pow(2)?;
    let minus = |m: &Monomial<C>| m.neg();
    let (lhs, rhs) = match id {
        Transform::Cta => {
            let a = need(&spec.a, "a")?;
            let (a2, a4, a6) = (a.pow(2)?, a.pow(4)?, a.pow(6)?);
            let lhs = env.phi(vec![a.mul(&w), minus(&a.mul(&w))], vec![minus(&a2)], q(1), a2.mul(&q(-1)).mul(&w2))?;
            let pre = env
                .prod(std::slice::from_ref(&a6), &q(2))?
                .mul(&env.prod(&[a6.mul(&q(-3))], &q(6))?)?
                .div(&env.prod(&[a2.mul(&q(-1)).mul(&w2), a4.mul(&q(-1))], &q(1))?)?;
            let f = env.phi(vec![a2.mul(&q(1)), a2.mul(&q(3)), a2.mul(&q(5))], vec![a6.mul(&q(2)), a6.mul(&q(4))], q(6), a6.mul(&q(-3)))?;
            (lhs, pre.mul(&f)?)
        }
        Transform::Ctb => {
            let a = need(&spec.a, "a")?;
            let (a2, a3, a4) = (a.pow(2)?, a.pow(3)?, a.pow(4)?);
            let lhs = env.phi(vec![a.mul(&w), a.mul(&q(1)).mul(&w)], vec![a2.mul(&q(1))], q(2), a2.mul(&w2))?;
            let pre = env
                .prod(std::slice::from_ref(&a3), &q(1))?
                .mul(&env.prod(&[minus(&a3)], &q(3))?)?
                .div(&env.prod(&[a2.mul(&w2), a4], &q(2))?)?;
            let f = env.phi(
                vec![minus(&a), minus(&a.mul(&q(1))), minus(&a.mul(&q(2)))],
                vec![a3.mul(&q(1)), a3.mul(&q(2))],
                q(3),
                minus(&a3),
            )?;
            (lhs, pre.mul(&f)?)
        }
        Transform::Ctam => {
            let a = need(&spec.a, "a")?;
            let (a2, a3, a4, a6) = (a.pow(2)?, a.pow(3)?, a.pow(4)?, a.pow(6)?);
            let s = a2.mul(&q(-1));
            let lhs = env.phi(vec![s.mul(&w), s.mul(&w2)], vec![a3.mul(&q(-1)), minus(&a3.mul(&q(-1)))], q(1), minus(&s))?;
            let pre = env
                .prod(&[minus(&s)], &q(1))?
                .mul(&env.prod(&[a6.mul(&q(-3))], &q(6))?)?
                .div(&env.prod(&[a4.mul(&q(-2))], &q(1))?)?;
            let f = env.phi(vec![s.clone(), a2.mul(&q(1)), a2.mul(&q(3))], vec![a6.mul(&q(-2)), a6.mul(&q(2))], q(6), a6.mul(&q(-3)))?;
            (lhs, pre.mul(&f)?)
        }
        Transform::Ctan => {
            let a = need(&spec.a, "a")?;
            let (a2, a3, a4, a6) = (a.pow(2)?, a.pow(3)?, a.pow(4)?, a.pow(6)?);
            let s = a2.mul(&q(-3));
            let lhs = env.phi(
                vec![s.mul(&w), s.mul(&w2)],
                vec![a3.mul(&q(-3)), minus(&a3.mul(&q(-3)))],
                q(1),
                minus(&a2.mul(&q(-1))),
            )?;
            let pre = env
                .prod(&[minus(&a2.mul(&q(-1)))], &q(1))?
                .mul(&env.prod(&[a6.mul(&q(-9))], &q(6))?)?
                .div(&env.one_minus(&s)?)?
                .div(&env.one_minus(&a6.mul(&q(-6)))?)?
                .div(&env.prod(&[a4.mul(&q(-3))], &q(1))?)?;
            let arg = a6.mul(&q(-9));
            let f1 = env.phi(vec![a2.mul(&q(-1)), a2.mul(&q(1)), a2.mul(&q(3))], vec![a6.mul(&q(-4)), a6.mul(&q(-2))], q(6), arg.clone())?;
            let f2 = env.phi(vec![a2.mul(&q(1)), a2.mul(&q(3)), a2.mul(&q(5))], vec![a6.mul(&q(-2)), a6.mul(&q(2))], q(6), arg)?;
            let k = env.one_minus(&a2.mul(&q(-1)))?.div(&env.one_minus(&a6.mul(&q(-4)))?)?.mul_monomial(&s)?;
            (lhs, pre.mul(&f1.sub(&k.mul(&f2)?)?)?)
        }
        Transform::Djt => {
            let (a, z, t) = (need(&spec.a, "a")?, need(&spec.z, "z")?, need(&spec.t, "t")?);
            let a2 = a.pow(2)?;
            let tz = t.div(&z)?;
            let lhs = env.phi(vec![a.mul(&z), minus(&a.mul(&z))], vec![minus(&a2)], q(1), tz.clone())?;
            let pre = env.prod(&[a2.mul(&t).mul(&z).mul(&q(1))], &q(2))?.div(&env.prod(&[t.mul(&q(1)).div(&z)?], &q(2))?)?;
            let f = env.phi(
                vec![a2.clone(), a2.mul(&q(1)), a2.mul(&z.pow(2)?)],
                vec![a2.pow(2)?, a2.mul(&t).mul(&z).mul(&q(1))],
                q(2),
                tz,
            )?;
            (lhs, pre.mul(&f)?)
        }
        Transform::Jt => {
            let (a, z, t) = (need(&spec.a, "a")?, need(&spec.z, "z")?, need(&spec.t, "t")?);
            let (a2, z2) = (a.pow(2)?, z.pow(2)?);
            let lhs = env.phi(vec![a.mul(&z2), a.mul(&z2).mul(&q(1))], vec![a2.mul(&q(1))], q(2), t.pow(2)?.div(&z2)?)?;
            let pre = env.prod(&[minus(&a.mul(&t).mul(&z))], &q(1))?.div(&env.prod(&[minus(&t.div(&z)?)], &q(1))?)?;
            let f = env.phi(vec![a.clone(), minus(&a), a.mul(&z2)], vec![a2, minus(&a.mul(&t).mul(&z))], q(1), t.div(&z)?)?;
            (lhs, pre.mul(&f)?)
        }
        Transform::Nqt | Transform::Koornwinder1 | Transform::Koornwinder2 => {
            let (a, t) = (need(&spec.a, "a")?, need(&spec.t, "t")?);
            let a2 = a.pow(2)?;
            let lhs = env.phi(vec![a.clone(), minus(&a)], vec![a2.clone()], q(1), t.clone())?;
            let rhs = match id {
                Transform::Nqt => env
                    .prod(&[minus(&t)], &q(2))?
                    .div(&env.prod(&[t.mul(&q(1))], &q(2))?)?
                    .mul(&env.phi(vec![minus(&a2.mul(&q(1))), minus(&a2.mul(&q(3)))], vec![a2.pow(2)?.mul(&q(2))], q(4), t.pow(2)?)?)?,
                Transform::Koornwinder1 => env
                    .prod(&[minus(&t)], &q(1))?
                    .mul(&env.phi(vec![Monomial::zero(), Monomial::zero()], vec![a2.mul(&q(1))], q(2), t.pow(2)?)?)?,
                _ => env
                    .phi(vec![], vec![a2.mul(&q(1))], q(2), a2.mul(&t.pow(2)?).mul(&q(1)))?
                    .div(&env.prod(std::slice::from_ref(&t), &q(1))?)?,
            };
            (lhs, rhs)
        }
        Transform::GsAnalytic1 => {
            let (a, c, x) = (need(&spec.a, "a")?, need(&spec.c, "c")?, need(&spec.x, "x")?);
            let (a2, c2) = (a.pow(2)?, c.pow(2)?);
            let lhs = env.phi(vec![a.clone(), minus(&a)], vec![minus(&c)], q(1), c.mul(&x))?;
            let t1 = env
                .prod(&[a2.mul(&x)], &q(2))?
                .div(&env.prod(std::slice::from_ref(&x), &q(2))?)?
                .mul(&env.phi(vec![c.clone(), c.mul(&q(1)), a2.clone()], vec![c2.clone(), q(2).div(&x)?], q(2), q(2))?)?;
            let t2 = env
                .prod(&[a2.clone(), c2.mul(&x)], &q(2))?
                .div(&env.prod(&[minus(&c), c.mul(&x)], &q(1))?)?
                .div(&env.prod(&[x.inv()?], &q(2))?)?
                .mul(&env.phi(
                    vec![c.mul(&x), c.mul(&q(1)).mul(&x), a2.mul(&x)],
                    vec![c2.mul(&x), q(2).mul(&x)],
                    q(2),
                    q(2),
                )?)?;
            (lhs, t1.add(&t2)?)
        }
        Transform::GsAnalytic2 => {
            let (a, c, x) = (need(&spec.a, "a")?, need(&spec.c, "c")?, need(&spec.x, "x")?);
            let c2 = c.pow(2)?;
            let lhs = env.phi(vec![a.clone(), a.mul(&q(1))], vec![c2.mul(&q(1))], q(2), c2.mul(&x.pow(2)?))?;
            let t1 = env
                .prod(&[a.mul(&x)], &q(1))?
                .div(&env.prod(std::slice::from_ref(&x), &q(1))?)?
                .mul(&env.phi(vec![c.clone(), minus(&c), a.clone()], vec![c2.clone(), q(1).div(&x)?], q(1), q(1))?)?;
            let t2 = env
                .prod(&[a.clone(), c2.mul(&x)], &q(1))?
                .div(&env.prod(&[c2.mul(&q(1)), c2.mul(&x.pow(2)?)], &q(2))?)?
                .div(&env.prod(&[x.inv()?], &q(1))?)?
                .mul(&env.phi(vec![c.mul(&x), minus(&c.mul(&x)), a.mul(&x)], vec![c2.mul(&x), q(1).mul(&x)], q(1), q(1))?)?;
            (lhs, t1.add(&t2)?)
        }
    };
    Ok((lhs.truncate(env.order.order), rhs.truncate(env.order.order)))
}

/// Compare both sides of `id` at `spec` below the context order.
pub fn transform_check<C: CubeRootField>(id: Transform, spec: &Specialization<C>, ctx: &SeriesContext) -> Result<TransformReport<C>> {
    let (l, r) = transform_sides(id, spec, ctx)?;
    let first_mismatch = l.first_mismatch(&r, ctx.order)?;
    Ok(TransformReport { id, proven_order: ctx.order, first_mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CycRat;

    type M = Monomial<CycRat>;

    fn q(n: i64, d: i64) -> M {
        M::q_pow(n, d)
    }

    fn check(id: Transform, spec: Specialization<CycRat>, d: u32, order: i64) {
        let ctx = SeriesContext::new(d, order).unwrap();
        let r = transform_check(id, &spec, &ctx).unwrap();
        assert!(r.passed(), "{} {:?}", id.name(), r.first_mismatch);
    }

    #[test]
    fn sextic_transforms() {
        check(Transform::Cta, Specialization { a: Some(q(1, 1)), ..Default::default() }, 1, 20);
        check(Transform::Cta, Specialization { a: Some(q(3, 4)), ..Default::default() }, 4, 60);
        check(Transform::Ctb, Specialization { a: Some(q(1, 1)), ..Default::default() }, 1, 20);
        check(Transform::Ctam, Specialization { a: Some(q(1, 1)), ..Default::default() }, 1, 20);
        check(Transform::Ctan, Specialization { a: Some(q(2, 1)), ..Default::default() }, 1, 20);
    }

    #[test]
    fn quadratic_and_quartic() {
        let s = Specialization { a: Some(q(1, 1)), z: Some(q(2, 1)), t: Some(q(3, 1)), ..Default::default() };
        check(Transform::Djt, s.clone(), 1, 25);
        check(Transform::Jt, s, 1, 25);
        let s = Specialization { a: Some(q(1, 1)), t: Some(q(2, 1)), ..Default::default() };
        for id in [Transform::Nqt, Transform::Koornwinder1, Transform::Koornwinder2] {
            check(id, s.clone(), 1, 25);
        }
    }

    #[test]
    fn analytic_versions() {
        let s = Specialization { a: Some(q(1, 2)), c: Some(q(1, 1)), x: Some(q(1, 1)), ..Default::default() };
        check(Transform::GsAnalytic1, s, 2, 40);
        let s = Specialization { a: Some(q(1, 2)), c: Some(q(1, 1)), x: Some(q(1, 2)), ..Default::default() };
        check(Transform::GsAnalytic2, s, 2, 40);
    }

    #[test]
    fn pole_reported() {
        // (1/x; q)_∞ vanishes at x = q
        let s = Specialization { a: Some(q(1, 1)), c: Some(q(1, 1)), x: Some(q(1, 1)), ..Default::default() };
        let ctx = SeriesContext::new(1, 10).unwrap();
        assert!(matches!(transform_check(Transform::GsAnalytic2, &s, &ctx), Err(Error::PoleHit(_) | Error::ZeroDenominator(_))));
    }
}
