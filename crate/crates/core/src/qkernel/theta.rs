use crate::error::Result;
use crate::field::Field;
use crate::series::{Monomial, Series, SeriesContext};

/// Two-sided theta sum `Σ_{n ∈ ℤ} (−1)^n q^C(n,2) z^n` below the context order.
pub fn jtp_sum<C: Field>(z: &Monomial<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    let d = ctx.denom as i64;
    let ez = z.scaled_exp(ctx.denom)?;
    let t = ctx.order;
    let exp = |n: i64| d * n * (n - 1) / 2 + n * ez;
    let mut pts = Vec::new();
    // the exponent is a convex quadratic in n; walk both tails until it exceeds t
    for dir in [1i64, -1] {
        let mut n = if dir == 1 { 0 } else { -1 };
        loop {
            let e = exp(n);
            let next = exp(n + dir);
            if e >= t && next >= e {
                break;
            }
            if e < t {
                pts.push((n, e));
            }
            n += dir;
        }
    }
    let lo = pts.iter().map(|&(_, e)| e).min().unwrap_or(t).min(t);
    let mut acc = vec![C::zero(); (t - lo) as usize];
    for (n, e) in pts {
        let mut c = z.coeff.pow_i64(n).ok_or(crate::error::Error::DivisionByZero)?;
        if n.rem_euclid(2) == 1 {
            c = c.neg_ref();
        }
        let slot = &mut acc[(e - lo) as usize];
        *slot = slot.add_ref(&c);
    }
    Ok(Series::from_coeffs(ctx.denom, lo, acc, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::{pochhammer_multi, Count};
    use crate::CycRat;
    use num_rational::Rational64;

    type M = Monomial<CycRat>;

    fn product_side(z: &M, c: &SeriesContext) -> Series<CycRat> {
        let q = M::q_pow(1, 1);
        let args = [q.clone(), z.clone(), q.div(z).unwrap()];
        pochhammer_multi(&args, &q, Count::Infinite, c).unwrap()
    }

    #[test]
    fn z_one_vanishes() {
        let c = SeriesContext::new(1, 20).unwrap();
        assert!(jtp_sum(&M::one(), &c).unwrap().is_zero());
    }

    #[test]
    fn matches_product_side() {
        let c = SeriesContext::new(2, 40).unwrap();
        for z in [
            M::q_pow(2, 1),
            M::new(CycRat::omega(), Rational64::from_integer(1)),
            M::constant(CycRat::from_int(-1)),
            M::q_pow(-1, 2),
            M::new(CycRat::from_int(3), Rational64::new(1, 2)),
        ] {
            let lhs = jtp_sum(&z, &c).unwrap();
            assert!(lhs.equal_to_order(&product_side(&z, &c), 40).unwrap(), "z = {z}");
        }
    }
}
