//! The field ℚ(ω), ω a primitive cube root of unity.
//!
//! Elements are stored in the basis {1, ω}; products are reduced with
//! ω² = −1 − ω, so the representation is unique.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{fmt_rational, CubeRootField, Field};

/// `re + om·ω` with exact rational components.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycRat {
    re: BigRational,
    om: BigRational,
}

impl CycRat {
    pub fn new(re: BigRational, om: BigRational) -> Self {
        CycRat { re, om }
    }

    pub fn from_int(n: i64) -> Self {
        CycRat::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        CycRat::new(BigRational::new(p.into(), q.into()), BigRational::zero())
    }

    /// `a + b·ω` from small integers.
    pub fn from_ints(a: i64, b: i64) -> Self {
        CycRat::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn omega() -> Self {
        CycRat::from_ints(0, 1)
    }

    /// ω² = −1 − ω.
    pub fn omega2() -> Self {
        CycRat::from_ints(-1, -1)
    }

    /// ωᵏ for any integer k.
    pub fn omega_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => CycRat::one(),
            1 => CycRat::omega(),
            _ => CycRat::omega2(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn om(&self) -> &BigRational {
        &self.om
    }

    pub fn is_rational(&self) -> bool {
        self.om.is_zero()
    }

    /// N(a + bω) = a² − ab + b², multiplicative and zero only at 0.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.re * &self.om + &self.om * &self.om
    }

    /// Complex conjugate a + bω² = (a − b) − bω.
    pub fn conj(&self) -> Self {
        CycRat::new(&self.re - &self.om, -&self.om)
    }

    /// Integer value if the element is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.om.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }
}

impl Zero for CycRat {
    fn zero() -> Self {
        CycRat::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.om.is_zero()
    }
}

impl One for CycRat {
    fn one() -> Self {
        CycRat::new(BigRational::one(), BigRational::zero())
    }
}

impl Field for CycRat {
    fn from_rational(r: BigRational) -> Self {
        CycRat::new(r, BigRational::zero())
    }

    fn add_ref(&self, o: &Self) -> Self {
        CycRat::new(&self.re + &o.re, &self.om + &o.om)
    }

    fn sub_ref(&self, o: &Self) -> Self {
        CycRat::new(&self.re - &o.re, &self.om - &o.om)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        // (a + bω)(c + dω) = (ac − bd) + (ad + bc − bd)ω
        match (self.om.is_zero(), o.om.is_zero()) {
            (true, true) => CycRat::new(&self.re * &o.re, BigRational::zero()),
            (true, false) => CycRat::new(&self.re * &o.re, &self.re * &o.om),
            (false, true) => CycRat::new(&self.re * &o.re, &self.om * &o.re),
            (false, false) => {
                let bd = &self.om * &o.om;
                CycRat::new(
                    &self.re * &o.re - &bd,
                    &self.re * &o.om + &self.om * &o.re - bd,
                )
            }
        }
    }

    fn neg_ref(&self) -> Self {
        CycRat::new(-&self.re, -&self.om)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.om.is_zero() {
            return Some(CycRat::new(self.re.recip(), BigRational::zero()));
        }
        let n = self.norm();
        let c = self.conj();
        Some(CycRat::new(c.re / &n, c.om / n))
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if a.om.is_zero() && b.om.is_zero() {
            self.re += &a.re * &b.re;
            return;
        }
        let p = a.mul_ref(b);
        self.re += p.re;
        self.om += p.om;
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if a.om.is_zero() && b.om.is_zero() {
            self.re -= &a.re * &b.re;
            return;
        }
        let p = a.mul_ref(b);
        self.re -= p.re;
        self.om -= p.om;
    }

    fn to_rational(&self) -> Option<BigRational> {
        if self.om.is_zero() {
            Some(self.re.clone())
        } else {
            None
        }
    }
}

impl CubeRootField for CycRat {
    fn omega() -> Self {
        CycRat::omega()
    }
}

impl Add for CycRat {
    type Output = CycRat;
    fn add(self, o: CycRat) -> CycRat {
        self.add_ref(&o)
    }
}

impl Sub for CycRat {
    type Output = CycRat;
    fn sub(self, o: CycRat) -> CycRat {
        self.sub_ref(&o)
    }
}

impl Mul for CycRat {
    type Output = CycRat;
    fn mul(self, o: CycRat) -> CycRat {
        self.mul_ref(&o)
    }
}

impl Neg for CycRat {
    type Output = CycRat;
    fn neg(self) -> CycRat {
        self.neg_ref()
    }
}

impl From<i64> for CycRat {
    fn from(n: i64) -> Self {
        CycRat::from_int(n)
    }
}

impl From<BigRational> for CycRat {
    fn from(r: BigRational) -> Self {
        CycRat::from_rational(r)
    }
}

/// Canonical rendering `a + b*w`; zero parts are omitted.
impl fmt::Display for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.om.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let om = if self.om.is_one() {
            "w".to_string()
        } else if (-&self.om).is_one() {
            "-w".to_string()
        } else {
            format!("{}*w", fmt_rational(&self.om))
        };
        if self.re.is_zero() {
            return f.write_str(&om);
        }
        if self.om.is_negative() {
            write!(f, "{} - {}", fmt_rational(&self.re), &om[1..])
        } else {
            write!(f, "{} + {}", fmt_rational(&self.re), om)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w() -> CycRat {
        CycRat::omega()
    }

    #[test]
    fn add_examples() {
        assert_eq!(CycRat::from_int(1) + w(), CycRat::from_ints(1, 1));
        let x = CycRat::from_ratio(3, 7);
        assert_eq!(x.clone() + CycRat::zero(), x);
        // (1 + ω) + (ω² + 1)·... rewritten: (1 + ω) + (0 − ω) = 1
        assert_eq!(CycRat::from_ints(1, 1) + CycRat::from_ints(0, -1), CycRat::one());
    }

    #[test]
    fn mul_examples() {
        let one_w = CycRat::from_ints(1, 1);
        assert_eq!(one_w.clone() * one_w.clone(), w());
        assert_eq!(w() * w() * w(), CycRat::one());
        assert_eq!(one_w.clone() * (-CycRat::omega2()), w());
        assert_eq!(w() * w(), CycRat::omega2());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(w().inv().unwrap(), CycRat::from_ints(-1, -1));
        assert_eq!(CycRat::from_int(2).inv().unwrap(), CycRat::from_ratio(1, 2));
        assert_eq!(CycRat::from_ints(1, 1).inv().unwrap(), -w());
        assert!(CycRat::zero().inv().is_none());
    }

    #[test]
    fn cube_root_relations() {
        assert_eq!(CycRat::omega_pow(3), CycRat::one());
        assert!((CycRat::one() + w() + CycRat::omega2()).is_zero());
        assert_eq!(CycRat::omega_pow(-1), CycRat::omega2());
    }

    #[test]
    fn display() {
        assert_eq!(CycRat::from_ints(1, 1).to_string(), "1 + w");
        assert_eq!(CycRat::from_ints(-1, -1).to_string(), "-1 - w");
        assert_eq!(CycRat::from_ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(CycRat::new(BigRational::zero(), BigRational::new(2.into(), 3.into())).to_string(), "2/3*w");
        assert_eq!(CycRat::from_ints(0, -1).to_string(), "-w");
    }

    fn small() -> impl Strategy<Value = CycRat> {
        (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| {
            CycRat::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()))
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in small(), y in small(), z in small()) {
            prop_assert_eq!(x.mul_ref(&y), y.mul_ref(&x));
            prop_assert_eq!(x.add_ref(&y), y.add_ref(&x));
            prop_assert_eq!(x.mul_ref(&y).mul_ref(&z), x.mul_ref(&y.mul_ref(&z)));
            prop_assert_eq!(x.add_ref(&y).add_ref(&z), x.add_ref(&y.add_ref(&z)));
            prop_assert_eq!(x.mul_ref(&y.add_ref(&z)), x.mul_ref(&y).add_ref(&x.mul_ref(&z)));
            prop_assert_eq!(x.add_ref(&x.neg_ref()), CycRat::zero());
            if !x.is_zero() {
                prop_assert_eq!(x.mul_ref(&x.inv().unwrap()), CycRat::one());
            }
        }

        #[test]
        fn norm_is_multiplicative(x in small(), y in small()) {
            prop_assert_eq!(x.mul_ref(&y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn fused_ops_match(x in small(), y in small(), z in small()) {
            let mut acc = x.clone();
            acc.add_mul_assign(&y, &z);
            prop_assert_eq!(acc, x.add_ref(&y.mul_ref(&z)));
            let mut acc = x.clone();
            acc.sub_mul_assign(&y, &z);
            prop_assert_eq!(acc, x.sub_ref(&y.mul_ref(&z)));
        }
    }
}
