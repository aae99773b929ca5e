//! Truncated Laurent–Puiseux series in q.
//!
//! A [`Series`] stores the coefficients of q^(k/D) densely for
//! `val <= k < trunc`; everything at or above `trunc` is unknown. Each value
//! carries its own truncation, and every operation propagates the tightest
//! truncation it can prove, so loss of precision is always visible.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent grid and target order shared by one computation.
///
/// All exponents are integer multiples of `1/denom`; `order` is the scaled
/// exponent below which results are requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesContext {
    pub denom: u32,
    pub order: i64,
}

impl SeriesContext {
    pub fn new(denom: u32, order: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidParameter("denominator must be positive".into()));
        }
        if order <= 0 {
            return Err(Error::InvalidParameter("order must be positive".into()));
        }
        Ok(SeriesContext { denom, order })
    }

    /// Same grid, order raised by `extra` scaled units.
    pub fn with_guard(self, extra: i64) -> Self {
        SeriesContext { order: self.order + extra.max(0), ..self }
    }

    pub fn with_order(self, order: i64) -> Self {
        SeriesContext { order, ..self }
    }

    /// Scale a rational exponent onto this grid.
    pub fn scale(&self, exp: Rational64) -> Result<i64> {
        scale_exponent(exp, self.denom)
    }
}

pub fn scale_exponent(exp: Rational64, denom: u32) -> Result<i64> {
    let s = exp * Rational64::from_integer(denom as i64);
    if s.is_integer() {
        Ok(s.to_integer())
    } else {
        Err(Error::ExponentNotRepresentable { exp: fmt_exponent(exp), denom })
    }
}

/// Render an exponent as a reduced fraction.
pub fn fmt_exponent(e: Rational64) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// `coeff · q^exp` with a rational exponent, independent of any grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial<C> {
    pub coeff: C,
    pub exp: Rational64,
}

impl<C: Field> Monomial<C> {
    pub fn new(coeff: C, exp: Rational64) -> Self {
        Monomial { coeff, exp }
    }

    /// `q^(num/den)`.
    pub fn q_pow(num: i64, den: i64) -> Self {
        Monomial::new(C::one(), Rational64::new(num, den))
    }

    pub fn constant(coeff: C) -> Self {
        Monomial::new(coeff, Rational64::zero())
    }

    pub fn zero() -> Self {
        Monomial::constant(C::zero())
    }

    pub fn one() -> Self {
        Monomial::constant(C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial::new(self.coeff.mul_ref(&other.coeff), self.exp + other.exp)
    }

    pub fn neg(&self) -> Self {
        Monomial::new(self.coeff.neg_ref(), self.exp)
    }

    pub fn scale(&self, c: &C) -> Self {
        Monomial::new(self.coeff.mul_ref(c), self.exp)
    }

    pub fn inv(&self) -> Result<Self> {
        let c = self.coeff.inv().ok_or(Error::DivisionByZero)?;
        Ok(Monomial::new(c, -self.exp))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(Monomial::one());
        }
        let c = self.coeff.pow_i64(n).ok_or(Error::DivisionByZero)?;
        Ok(Monomial::new(c, self.exp * Rational64::from_integer(n)))
    }

    /// Square root, defined only for coefficient exactly 1.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeff.is_one() {
            return Err(Error::InvalidParameter(format!(
                "square root of a monomial with coefficient {} is not defined",
                self.coeff
            )));
        }
        Ok(Monomial::new(C::one(), self.exp / Rational64::from_integer(2)))
    }

    /// Rational power `self^(p/r)`; non-integral powers need coefficient 1.
    pub fn pow_rational(&self, e: Rational64) -> Result<Self> {
        if e.is_integer() {
            return self.pow(e.to_integer());
        }
        if !self.coeff.is_one() {
            return Err(Error::InvalidParameter(format!(
                "fractional power of a monomial with coefficient {} is not defined",
                self.coeff
            )));
        }
        Ok(Monomial::new(C::one(), self.exp * e))
    }

    pub fn scaled_exp(&self, denom: u32) -> Result<i64> {
        scale_exponent(self.exp, denom)
    }

    pub fn to_series(&self, ctx: &SeriesContext) -> Result<Series<C>> {
        monomial_to_series(self, ctx)
    }
}

impl<C: Field> fmt::Display for Monomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp.is_zero() {
            return write!(f, "{}", self.coeff);
        }
        let c = self.coeff.to_string();
        let q = format!("q^({})", fmt_exponent(self.exp));
        if self.coeff.is_one() {
            f.write_str(&q)
        } else if c.contains(' ') {
            write!(f, "({c})*{q}")
        } else {
            write!(f, "{c}*{q}")
        }
    }
}

/// Single-term series for a monomial.
pub fn monomial_to_series<C: Field>(m: &Monomial<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    let e = ctx.scale(m.exp)?;
    Ok(Series::monomial(m.coeff.clone(), e, ctx.denom, ctx.order.max(e + 1)))
}

/// A truncated Laurent–Puiseux series with exponents in (1/denom)·ℤ.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    denom: u32,
    val: i64,
    coeffs: Vec<C>,
    trunc: i64,
}

impl<C: Field> Series<C> {
    /// Build from dense coefficients starting at `start`; leading zeros are stripped.
    pub fn from_coeffs(denom: u32, start: i64, mut coeffs: Vec<C>, trunc: i64) -> Self {
        let known = (trunc - start).max(0) as usize;
        coeffs.truncate(known);
        coeffs.resize(known, C::zero());
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Series::zero(denom, trunc.max(start)),
            Some(k) => {
                coeffs.drain(..k);
                Series { denom, val: start + k as i64, coeffs, trunc }
            }
        }
    }

    pub fn zero(denom: u32, trunc: i64) -> Self {
        Series { denom, val: trunc, coeffs: Vec::new(), trunc }
    }

    pub fn one(denom: u32, trunc: i64) -> Self {
        Series::constant(C::one(), denom, trunc)
    }

    pub fn constant(c: C, denom: u32, trunc: i64) -> Self {
        Series::monomial(c, 0, denom, trunc)
    }

    /// `c·q^(e/denom)` known below `trunc`.
    pub fn monomial(c: C, e: i64, denom: u32, trunc: i64) -> Self {
        if c.is_zero() || e >= trunc {
            return Series::zero(denom, trunc);
        }
        let mut coeffs = vec![C::zero(); (trunc - e) as usize];
        coeffs[0] = c;
        Series { denom, val: e, coeffs, trunc }
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// Scaled valuation; equals the truncation for a zero series.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn truncation(&self) -> i64 {
        self.trunc
    }

    /// True iff every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at scaled exponent `e`; `None` above the truncation.
    pub fn coeff(&self, e: i64) -> Option<C> {
        if e >= self.trunc {
            None
        } else if e < self.val {
            Some(C::zero())
        } else {
            Some(self.coeffs[(e - self.val) as usize].clone())
        }
    }

    pub fn coeff_ref(&self, e: i64) -> Option<&C> {
        if e >= self.val && e < self.trunc {
            Some(&self.coeffs[(e - self.val) as usize])
        } else {
            None
        }
    }

    /// Non-zero terms as (scaled exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        let v = self.val;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (v + i as i64, c))
    }

    /// Drop everything at or above `t` (no-op if already tighter).
    pub fn truncate(&self, t: i64) -> Self {
        if t >= self.trunc {
            return self.clone();
        }
        if t <= self.val {
            return Series::zero(self.denom, t);
        }
        let mut out = self.clone();
        out.coeffs.truncate((t - self.val) as usize);
        out.trunc = t;
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.denom != other.denom {
            Err(Error::ContextMismatch(self.denom, other.denom))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self> {
        self.check(other)?;
        let trunc = self.trunc.min(other.trunc);
        let start = self.val.min(other.val).min(trunc);
        let mut coeffs = vec![C::zero(); (trunc - start) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e >= trunc {
                break;
            }
            coeffs[(e - start) as usize] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let e = other.val + i as i64;
            if e >= trunc {
                break;
            }
            let slot = &mut coeffs[(e - start) as usize];
            *slot = if negate { slot.sub_ref(c) } else { slot.add_ref(c) };
        }
        Ok(Series::from_coeffs(self.denom, start, coeffs, trunc))
    }

    pub fn neg(&self) -> Self {
        Series {
            denom: self.denom,
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Series::zero(self.denom, self.trunc);
        }
        Series {
            denom: self.denom,
            val: self.val,
            coeffs: self.coeffs.iter().map(|x| x.mul_ref(c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiply by `c·q^(e/denom)`; exact, so both ends shift by `e`.
    pub fn shift(&self, c: &C, e: i64) -> Self {
        if c.is_zero() {
            return Series::zero(self.denom, self.trunc + e);
        }
        let mut out = self.scale(c);
        out.val += e;
        out.trunc += e;
        out
    }

    pub fn mul_monomial(&self, m: &Monomial<C>) -> Result<Self> {
        let e = m.scaled_exp(self.denom)?;
        Ok(self.shift(&m.coeff, e))
    }

    /// Truncated product; known below min(tx + vy, ty + vx).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let trunc = (self.trunc + other.val).min(other.trunc + self.val);
        let start = self.val + other.val;
        if self.is_zero() || other.is_zero() || trunc <= start {
            return Ok(Series::zero(self.denom, trunc));
        }
        let n = (trunc - start) as usize;
        let mut out = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j].add_mul_assign(a, b);
            }
        }
        Ok(Series::from_coeffs(self.denom, start, out, trunc))
    }

    /// Multiplicative inverse of a series that is non-zero on its window.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.coeffs.len();
        let g0 = self.coeffs[0].inv().ok_or(Error::NotInvertible)?;
        let mut g: Vec<C> = Vec::with_capacity(n);
        g.push(g0.clone());
        for k in 1..n {
            let mut acc = C::zero();
            for j in 1..=k {
                acc.add_mul_assign(&self.coeffs[j], &g[k - j]);
            }
            g.push(acc.mul_ref(&g0).neg_ref());
        }
        let trunc = self.trunc - 2 * self.val;
        Ok(Series::from_coeffs(self.denom, -self.val, g, trunc))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }

    /// Integer power; negative powers invert first.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Series::one(self.denom, base.trunc - base.val);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Multiply by the binomial `(1 − c·q^(e/denom))` in O(len).
    pub fn mul_one_minus(&self, c: &C, e: i64) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        if e == 0 {
            return self.scale(&C::one().sub_ref(c));
        }
        if e > 0 {
            let mut out = self.coeffs.clone();
            for k in (e as usize..out.len()).rev() {
                let prev = self.coeffs[k - e as usize].clone();
                out[k].sub_mul_assign(c, &prev);
            }
            return Series::from_coeffs(self.denom, self.val, out, self.trunc);
        }
        // The shifted copy dominates and loses |e| of absolute precision.
        let shifted = self.shift(&c.neg_ref(), e);
        shifted.add(self).expect("same denominator")
    }

    /// Divide by `(1 − c·q^(e/denom))` in O(len).
    pub fn div_one_minus(&self, c: &C, e: i64) -> Result<Self> {
        if c.is_zero() {
            return Ok(self.clone());
        }
        if e == 0 {
            let f = C::one().sub_ref(c);
            let inv = f.inv().ok_or_else(|| Error::ZeroDenominator("factor (1 - 1)".into()))?;
            return Ok(self.scale(&inv));
        }
        if e > 0 {
            let mut out = self.coeffs.clone();
            for k in e as usize..out.len() {
                let prev = out[k - e as usize].clone();
                out[k].add_mul_assign(c, &prev);
            }
            return Ok(Series::from_coeffs(self.denom, self.val, out, self.trunc));
        }
        // 1/(1 − x) = −x⁻¹/(1 − x⁻¹)
        let ci = c.inv().ok_or(Error::DivisionByZero)?;
        self.shift(&ci.neg_ref(), -e).div_one_minus(&ci, -e)
    }

    /// Compare all coefficients below `up_to`.
    pub fn equal_to_order(&self, other: &Self, up_to: i64) -> Result<bool> {
        Ok(self.first_mismatch(other, up_to)?.is_none())
    }

    /// Smallest scaled exponent below `up_to` where the coefficients differ.
    pub fn first_mismatch(&self, other: &Self, up_to: i64) -> Result<Option<(i64, C, C)>> {
        self.check(other)?;
        for s in [self, other] {
            if s.trunc < up_to {
                return Err(Error::InsufficientTruncation {
                    needed: fmt_exponent(Rational64::new(up_to, self.denom as i64)),
                    have: fmt_exponent(Rational64::new(s.trunc, self.denom as i64)),
                });
            }
        }
        let start = self.val.min(other.val);
        for e in start..up_to {
            let a = self.coeff(e).expect("known below truncation");
            let b = other.coeff(e).expect("known below truncation");
            if a != b {
                return Ok(Some((e, a, b)));
            }
        }
        Ok(None)
    }

    /// Re-express on a finer grid `new_denom` (a multiple of the current one).
    pub fn regrid(&self, new_denom: u32) -> Result<Self> {
        if !new_denom.is_multiple_of(self.denom) {
            return Err(Error::ContextMismatch(self.denom, new_denom));
        }
        let f = (new_denom / self.denom) as i64;
        if f == 1 {
            return Ok(self.clone());
        }
        let mut coeffs = vec![C::zero(); ((self.trunc - self.val) * f) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * f as usize] = c.clone();
        }
        Ok(Series::from_coeffs(new_denom, self.val * f, coeffs, self.trunc * f))
    }

    /// Substitute q ↦ c·q (scales the coefficient of q^(k/D) by c^k when D | k).
    pub fn map_coeffs(&self, f: impl Fn(i64, &C) -> C) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| f(self.val + i as i64, c))
            .collect();
        Series::from_coeffs(self.denom, self.val, coeffs, self.trunc)
    }
}

fn fmt_coeff_term<C: Field>(c: &C, exp: Rational64) -> String {
    let cs = c.to_string();
    if exp.is_zero() {
        return cs;
    }
    let q = format!("q^({})", fmt_exponent(exp));
    if c.is_one() {
        q
    } else if cs.contains(' ') {
        format!("({cs})*{q}")
    } else {
        format!("{cs}*{q}")
    }
}

/// `c0*q^(e0) + c1*q^(e1) + ... + O(q^(N))`.
impl<C: Field> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.denom as i64;
        for (e, c) in self.terms() {
            write!(f, "{} + ", fmt_coeff_term(c, Rational64::new(e, d)))?;
        }
        write!(f, "O(q^({}))", fmt_exponent(Rational64::new(self.trunc, d)))
    }
}

/// Least common multiple of exponent denominators, starting from `d`.
pub fn lcm_denom(d: u32, exps: impl IntoIterator<Item = Rational64>) -> u32 {
    exps.into_iter()
        .fold(d as i64, |acc, e| acc.lcm(&e.denom().abs()))
        .try_into()
        .expect("denominator fits in u32")
}
