//! Pochhammer symbols, basic hypergeometric series, quadratic-form multi-sums
//! and two-sided theta sums.

mod multisum;
mod phi;
mod poch;
mod theta;

use num_rational::Rational64;

pub use multisum::{multisum, MultiSumSpec};
pub use phi::{phi, phi_general, PhiAlgebra, PhiSpec};
pub use poch::{pochhammer, pochhammer_apply, pochhammer_multi, Count, PochSpec};
pub use theta::jtp_sum;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::series::{Monomial, Series};

/// `coeff · q^(qexp/D) · z^zdeg · t^tdeg` on a fixed exponent grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GenMono<C> {
    pub coeff: C,
    pub qexp: i64,
    pub zdeg: i64,
    pub tdeg: u32,
}

impl<C: Field> GenMono<C> {
    pub fn q(coeff: C, qexp: i64) -> Self {
        GenMono { coeff, qexp, zdeg: 0, tdeg: 0 }
    }

    pub fn one() -> Self {
        GenMono::q(C::one(), 0)
    }

    pub fn from_monomial(m: &Monomial<C>, denom: u32) -> Result<Self> {
        Ok(GenMono::q(m.coeff.clone(), m.scaled_exp(denom)?))
    }

    /// True if the monomial involves neither z nor t.
    pub fn is_scalar(&self) -> bool {
        self.zdeg == 0 && self.tdeg == 0
    }

    /// True if the monomial is exactly the constant 1.
    pub fn is_unit_one(&self) -> bool {
        self.is_scalar() && self.qexp == 0 && self.coeff.is_one()
    }

    pub fn mul(&self, o: &Self) -> Self {
        GenMono {
            coeff: self.coeff.mul_ref(&o.coeff),
            qexp: self.qexp + o.qexp,
            zdeg: self.zdeg + o.zdeg,
            tdeg: self.tdeg + o.tdeg,
        }
    }

    pub fn neg(&self) -> Self {
        GenMono { coeff: self.coeff.neg_ref(), ..self.clone() }
    }

    /// Integer power; negative powers need tdeg = 0.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 && self.tdeg > 0 {
            return Err(Error::InvalidParameter("negative power of t".into()));
        }
        Ok(GenMono {
            coeff: self.coeff.pow_i64(n).ok_or(Error::DivisionByZero)?,
            qexp: self.qexp * n,
            zdeg: self.zdeg * n,
            tdeg: (self.tdeg as i64 * n) as u32,
        })
    }

    pub fn to_series(&self, denom: u32, trunc: i64) -> Result<Series<C>> {
        if !self.is_scalar() {
            return Err(Error::InvalidParameter("monomial depends on z or t".into()));
        }
        Ok(Series::monomial(self.coeff.clone(), self.qexp, denom, trunc))
    }

    pub fn exp_rational(&self, denom: u32) -> Rational64 {
        Rational64::new(self.qexp, denom as i64)
    }
}

/// Scaled exponent and coefficient of a monomial, checked against the grid.
pub(crate) fn scaled<C: Field>(m: &Monomial<C>, denom: u32) -> Result<(C, i64)> {
    Ok((m.coeff.clone(), m.scaled_exp(denom)?))
}
