//! Exact coefficient fields.
//!
//! Every series in the crate is generic over a [`Field`]: an exact field with
//! by-reference arithmetic. Two instances ship: the rationals
//! ([`num_rational::BigRational`]) and ℚ(ω) ([`crate::CycRat`]). There is no
//! floating-point instance; all comparisons are equality tests.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact commutative field with cheap by-reference operations.
pub trait Field: Clone + PartialEq + Debug + Display + Zero + One + Send + Sync + 'static {
    fn from_rational(r: BigRational) -> Self;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// `self += a * b`, the inner step of every convolution.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add_ref(&a.mul_ref(b));
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.sub_ref(&a.mul_ref(b));
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The rational value, if the element lies in ℚ.
    fn to_rational(&self) -> Option<BigRational>;

    fn pow_i64(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_ref(&sq);
            }
        }
        Some(acc)
    }
}

/// Fields containing a primitive cube root of unity.
pub trait CubeRootField: Field {
    fn omega() -> Self;
}

impl Field for BigRational {
    fn from_rational(r: BigRational) -> Self {
        r
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += a * b;
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self -= a * b;
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Render a rational as `p` or `p/q`, sign on the numerator.
pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-{}/{}", r.numer().abs(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
