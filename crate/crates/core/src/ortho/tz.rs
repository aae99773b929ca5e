use crate::ctengine::ZSeries;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::qkernel::{GenMono, PhiAlgebra};
use crate::series::Series;

/// Power series in t, truncated below `t^t_order`, with z-Laurent coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TzSeries<C> {
    denom: u32,
    coeffs: Vec<ZSeries<C>>,
}

impl<C: Field> TzSeries<C> {
    pub fn zero(t_order: u32, denom: u32, trunc: i64) -> Self {
        TzSeries { denom, coeffs: vec![ZSeries::zero(denom, trunc); t_order as usize] }
    }

    pub fn one(t_order: u32, denom: u32, trunc: i64) -> Self {
        let mut out = TzSeries::zero(t_order, denom, trunc);
        if let Some(c) = out.coeffs.first_mut() {
            *c = ZSeries::one(denom, trunc);
        }
        out
    }

    /// A z- and t-free series.
    pub fn from_series(t_order: u32, s: Series<C>) -> Self {
        let mut out = TzSeries::zero(t_order, s.denom(), s.truncation());
        if let Some(c) = out.coeffs.first_mut() {
            *c = ZSeries::from_series(s);
        }
        out
    }

    /// A t-free series with z-Laurent coefficients.
    pub fn from_zseries(t_order: u32, z: ZSeries<C>) -> Self {
        let mut out = TzSeries::zero(t_order, z.denom(), z.truncation());
        if let Some(c) = out.coeffs.first_mut() {
            *c = z;
        }
        out
    }

    pub fn from_mono(t_order: u32, m: &GenMono<C>, denom: u32, trunc: i64) -> Self {
        TzSeries::one(t_order, denom, trunc).shifted(m)
    }

    pub fn t_order(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// Coefficient of t^k.
    pub fn coeff(&self, k: usize) -> &ZSeries<C> {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<ZSeries<C>> {
        self.coeffs
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.denom != o.denom {
            return Err(Error::ContextMismatch(self.denom, o.denom));
        }
        if self.coeffs.len() != o.coeffs.len() {
            return Err(Error::InvalidParameter("t-orders differ".into()));
        }
        Ok(())
    }

    fn shifted(&self, m: &GenMono<C>) -> Self {
        let n = self.coeffs.len();
        let k = m.tdeg as usize;
        let trunc = self.coeffs.iter().map(|c| c.truncation()).min().unwrap_or(0) + m.qexp;
        let mut coeffs = vec![ZSeries::zero(self.denom, trunc); n];
        for i in 0..n.saturating_sub(k) {
            coeffs[i + k] = self.coeffs[i].shift(&m.coeff, m.qexp, m.zdeg);
        }
        TzSeries { denom: self.denom, coeffs }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(TzSeries { denom: self.denom, coeffs })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Ok(TzSeries { denom: self.denom, coeffs })
    }

    pub fn neg(&self) -> Self {
        TzSeries { denom: self.denom, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc: Option<ZSeries<C>> = None;
            for i in 0..=k {
                let p = self.coeffs[i].mul(&o.coeffs[k - i])?;
                acc = Some(match acc {
                    None => p,
                    Some(a) => a.add(&p)?,
                });
            }
            out.push(acc.expect("k >= 0"));
        }
        Ok(TzSeries { denom: self.denom, coeffs: out })
    }

    /// Multiply by a z- and t-free series.
    pub fn mul_series(&self, s: &Series<C>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.mul_series(s)).collect::<Result<_>>()?;
        Ok(TzSeries { denom: self.denom, coeffs })
    }

    /// Inverse, for a t^0 coefficient that is an invertible z-free series.
    pub fn inverse(&self) -> Result<Self> {
        let Some(f0) = self.coeffs.first() else {
            return Ok(self.clone());
        };
        if f0.terms().any(|(d, _)| d != 0) {
            return Err(Error::NotLaurentPolynomial("t-free part depends on z".into()));
        }
        let g0 = f0.constant_term().inverse()?;
        let n = self.coeffs.len();
        let mut g: Vec<ZSeries<C>> = vec![ZSeries::from_series(g0.clone())];
        for k in 1..n {
            let mut acc = ZSeries::zero(self.denom, g0.truncation());
            for j in 1..=k {
                acc = acc.add(&self.coeffs[j].mul(&g[k - j])?)?;
            }
            g.push(acc.mul_series(&g0)?.neg());
        }
        Ok(TzSeries { denom: self.denom, coeffs: g })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inverse()?)
    }

    pub fn truncate(&self, t: i64) -> Self {
        TzSeries { denom: self.denom, coeffs: self.coeffs.iter().map(|c| c.truncate(t)).collect() }
    }

    /// Smallest q-truncation over all coefficients.
    pub fn truncation(&self) -> i64 {
        self.coeffs.iter().map(|c| c.truncation()).min().unwrap_or(i64::MAX / 4)
    }
}

impl<C: Field> PhiAlgebra<C> for TzSeries<C> {
    type Ctx = u32;

    fn one(t_order: &u32, denom: u32, trunc: i64) -> Self {
        TzSeries::one(*t_order, denom, trunc)
    }

    fn mul_gen(&self, m: &GenMono<C>) -> Result<Self> {
        Ok(self.shifted(m))
    }

    fn mul_one_minus_gen(&self, m: &GenMono<C>) -> Result<Self> {
        self.sub(&self.shifted(m))
    }

    fn div_one_minus_gen(&self, m: &GenMono<C>) -> Result<Self> {
        if let Some(steps) = (self.t_order() - 1).checked_div(m.tdeg) {
            // geometric series, finite because of the t-truncation
            let mut acc = self.clone();
            let mut p = self.clone();
            for _ in 0..steps {
                p = p.shifted(m);
                acc = acc.add(&p)?;
            }
            return Ok(acc);
        }
        if m.zdeg != 0 {
            return Err(Error::NotLaurentPolynomial("factor 1/(1 − c z^d) without t".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.try_map(|s| s.div_one_minus(&m.coeff, m.qexp)))
            .collect::<Result<_>>()?;
        Ok(TzSeries { denom: self.denom, coeffs })
    }

    fn add_gen(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }

    fn truncate_q(&self, t: i64) -> Self {
        self.truncate(t)
    }

    fn t_order(ctx: &u32) -> Option<u32> {
        Some(*ctx)
    }
}
