use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::series::{scale_exponent, Monomial, Series, SeriesContext};

/// `Σ_k sign(k) · q^(kᵀQk + L·k) · Π c_i^(k_i) / Π (b_i; b_i)_(k_i)` over k ∈ ℕ^m.
///
/// `quadratic[i][j]` for i ≤ j holds the coefficient of `k_i k_j` (entries
/// below the diagonal are ignored); all exponents are in q-units.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiSumSpec<C> {
    pub quadratic: Vec<Vec<Rational64>>,
    pub linear: Vec<Rational64>,
    pub signs: Vec<i64>,
    pub bases: Vec<Monomial<C>>,
    pub coeffs: Vec<Monomial<C>>,
}

fn r(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<Rational64>> {
    rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect()
}

impl<C: Field> MultiSumSpec<C> {
    fn q(n: i64) -> Monomial<C> {
        Monomial::q_pow(n, 1)
    }

    /// The triple sum F(u, v, w) of the Kanade–Russell conjectures.
    ///
    /// Exponent 3k(k−1) + N(N−1) with N = i + 2j + 3k, sign (−1)^k and
    /// denominators (q;q)_i (q⁴;q⁴)_j (q⁶;q⁶)_k.
    pub fn kr_f(u: Monomial<C>, v: Monomial<C>, w: Monomial<C>) -> Self {
        MultiSumSpec {
            quadratic: int_matrix(&[&[1, 4, 6], &[0, 4, 12], &[0, 0, 12]]),
            linear: vec![r(-1), r(-2), r(-6)],
            signs: vec![0, 0, 1],
            bases: vec![Self::q(1), Self::q(4), Self::q(6)],
            coeffs: vec![u, v, w],
        }
    }

    /// Σ q^(2j² + 6jk + 6k²) / ((q;q)_j (q³;q³)_k).
    pub fn capparelli() -> Self {
        MultiSumSpec {
            quadratic: int_matrix(&[&[2, 6], &[0, 6]]),
            linear: vec![r(0), r(0)],
            signs: vec![0, 0],
            bases: vec![Self::q(1), Self::q(3)],
            coeffs: vec![Monomial::one(), Monomial::one()],
        }
    }

    /// Common shape 2·C(i+j+3k, 2) + 6·C(k, 2) + linear terms.
    fn triple(linear: [Rational64; 3], signs: [i64; 3], alt_j: bool) -> Self {
        // 2C(N,2) = N² − N, 6C(k,2) = 3k² − 3k with N = i + j + 3k
        let lin = [linear[0] - 1, linear[1] - 1, linear[2] - 6];
        let jb = if alt_j {
            Monomial::new(C::one().neg_ref(), r(1))
        } else {
            Self::q(1)
        };
        MultiSumSpec {
            quadratic: int_matrix(&[&[1, 2, 6], &[0, 1, 6], &[0, 0, 12]]),
            linear: lin.to_vec(),
            signs: signs.to_vec(),
            bases: vec![Self::q(1), jb, Self::q(6)],
            coeffs: vec![Monomial::one(), Monomial::one(), Monomial::one()],
        }
    }

    pub fn tsf() -> Self {
        Self::triple([r(2), r(3), r(12)], [0, 1, 0], false)
    }

    pub fn tsc() -> Self {
        Self::triple([r(1), r(1), r(6)], [0, 1, 1], true)
    }

    pub fn tse() -> Self {
        Self::triple([r(2), r(3), r(12)], [0, 1, 1], true)
    }

    /// Needs a grid with even denominator (the j-exponent is 3/2).
    pub fn ntss() -> Self {
        Self::triple([r(2), Rational64::new(3, 2), r(9)], [0, 1, 1], true)
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }
}

struct Scaled<C> {
    quad: Vec<Vec<i64>>,
    lin: Vec<i64>,
    mins: Vec<i64>,
    signs: Vec<bool>,
    bases: Vec<(C, i64)>,
    coeffs: Vec<C>,
}

#[allow(clippy::needless_range_loop)]
fn scale<C: Field>(spec: &MultiSumSpec<C>, d: u32) -> Result<Scaled<C>> {
    let m = spec.num_vars();
    if spec.quadratic.len() != m
        || spec.signs.len() != m
        || spec.bases.len() != m
        || spec.coeffs.len() != m
        || spec.quadratic.iter().any(|row| row.len() != m)
    {
        return Err(Error::InvalidParameter("multi-sum dimensions disagree".into()));
    }
    let mut quad = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in i..m {
            let x = scale_exponent(spec.quadratic[i][j], d)?;
            if (i == j && x <= 0) || (i != j && x < 0) {
                return Err(Error::DivergentSpec(format!(
                    "quadratic form is not positive on the orthant (entry {i},{j})"
                )));
            }
            quad[i][j] = x;
            quad[j][i] = x;
        }
    }
    let mut lin = Vec::with_capacity(m);
    let mut coeffs = Vec::with_capacity(m);
    let mut bases = Vec::with_capacity(m);
    for i in 0..m {
        lin.push(scale_exponent(spec.linear[i], d)? + spec.coeffs[i].scaled_exp(d)?);
        coeffs.push(spec.coeffs[i].coeff.clone());
        let eb = spec.bases[i].scaled_exp(d)?;
        if eb <= 0 {
            return Err(Error::NonPositiveBaseExponent(spec.bases[i].exp.to_string()));
        }
        bases.push((spec.bases[i].coeff.clone(), eb));
    }
    let mins = (0..m)
        .map(|i| {
            let (a, b) = (quad[i][i], lin[i]);
            let v = (-b).max(0) / (2 * a);
            [0, v, v + 1].iter().map(|&k| a * k * k + b * k).min().unwrap_or(0)
        })
        .collect();
    let signs = spec.signs.iter().map(|s| s.rem_euclid(2) == 1).collect();
    Ok(Scaled { quad, lin, mins, signs, bases, coeffs })
}

/// Visit every lattice point with exponent below `limit`, in lexicographic order.
fn enumerate(s: &Scaled<impl Field>, limit: i64, visit: &mut dyn FnMut(&[i64], i64)) {
    let m = s.lin.len();
    let mut k = vec![0i64; m];
    let rest: Vec<i64> = (0..m).map(|i| s.mins[i + 1..].iter().sum()).collect();
    fn rec<C: Field>(
        s: &Scaled<C>,
        i: usize,
        partial: i64,
        k: &mut Vec<i64>,
        rest: &[i64],
        limit: i64,
        visit: &mut dyn FnMut(&[i64], i64),
    ) {
        let m = s.lin.len();
        if i == m {
            if partial < limit {
                visit(k, partial);
            }
            return;
        }
        let a = s.quad[i][i];
        let b = s.lin[i] + (0..i).map(|j| s.quad[j][i] * k[j]).sum::<i64>();
        let mut x = 0i64;
        loop {
            let val = partial + a * x * x + b * x;
            if val + rest[i] >= limit && a * (2 * x + 1) + b >= 0 {
                break;
            }
            k[i] = x;
            if val + rest[i] < limit {
                rec(s, i + 1, val, k, rest, limit, visit);
            }
            x += 1;
        }
        k[i] = 0;
    }
    rec(s, 0, 0, &mut k, &rest, limit, visit);
}

/// Evaluate a quadratic-form multi-sum below the context order.
pub fn multisum<C: Field>(spec: &MultiSumSpec<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    let d = ctx.denom;
    let s = scale(spec, d)?;
    let t = ctx.order;
    let mut emin = 0i64;
    let mut count = 0usize;
    enumerate(&s, t, &mut |_, e| {
        emin = emin.min(e);
        count += 1;
    });
    let _ = count;
    let prec = t - emin;
    let mut acc = vec![C::zero(); (t - emin) as usize];
    let rest: Vec<i64> = (0..s.lin.len()).map(|i| s.mins[i + 1..].iter().sum()).collect();
    let mut k = vec![0i64; s.lin.len()];
    let walk = Walk { s: &s, rest: &rest, limit: t, emin };
    walk.run(0, 0, &mut k, Series::one(d, prec), C::one(), &mut acc);
    Ok(Series::from_coeffs(d, emin, acc, t))
}

struct Walk<'a, C> {
    s: &'a Scaled<C>,
    rest: &'a [i64],
    limit: i64,
    emin: i64,
}

impl<C: Field> Walk<'_, C> {
    /// Depth-first pass carrying the running inverse denominator, so each
    /// lattice point costs one O(len) division.
    fn run(&self, i: usize, partial: i64, k: &mut Vec<i64>, ser: Series<C>, coef: C, acc: &mut [C]) {
        let s = self.s;
        if i == s.lin.len() {
            if partial < self.limit {
                for (x, a) in ser.terms() {
                    let pos = (x + partial - self.emin) as usize;
                    if pos < acc.len() {
                        acc[pos].add_mul_assign(&coef, a);
                    }
                }
            }
            return;
        }
        let a = s.quad[i][i];
        let b = s.lin[i] + (0..i).map(|j| s.quad[j][i] * k[j]).sum::<i64>();
        let (bc, be) = &s.bases[i];
        let mut cur = ser;
        let mut c = coef;
        let mut bpow = C::one();
        let mut x = 0i64;
        loop {
            let val = partial + a * x * x + b * x;
            if val + self.rest[i] >= self.limit && a * (2 * x + 1) + b >= 0 {
                break;
            }
            if x > 0 {
                bpow = bpow.mul_ref(bc);
                cur = cur.div_one_minus(&bpow, be * x).expect("positive base exponent");
                c = c.mul_ref(&s.coeffs[i]);
                if s.signs[i] {
                    c = c.neg_ref();
                }
            }
            if val + self.rest[i] < self.limit {
                k[i] = x;
                self.run(i + 1, val, k, cur.clone(), c.clone(), acc);
            }
            x += 1;
        }
        k[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::{pochhammer_multi, Count};
    use crate::CycRat;
    use num_traits::{One, Zero};

    type S = Series<CycRat>;
    type M = Monomial<CycRat>;

    /// Brute-force oracle: sum every term of a box explicitly.
    #[allow(clippy::needless_range_loop)]
    fn brute(spec: &MultiSumSpec<CycRat>, bound: i64, c: &SeriesContext) -> S {
        let m = spec.num_vars();
        let wide = c.with_guard(60);
        let mut sum = S::zero(c.denom, wide.order);
        let mut k = vec![0i64; m];
        loop {
            let mut e = Rational64::zero();
            for i in 0..m {
                for j in i..m {
                    e += spec.quadratic[i][j] * r(k[i] * k[j]);
                }
                e += spec.linear[i] * r(k[i]);
            }
            let mut t = M::new(CycRat::one(), e);
            let mut den = S::one(c.denom, wide.order);
            for i in 0..m {
                t = t.mul(&spec.coeffs[i].pow(k[i]).unwrap());
                if (spec.signs[i] * k[i]) % 2 != 0 {
                    t = t.neg();
                }
                let b = &spec.bases[i];
                den = den.mul(&pochhammer_multi(std::slice::from_ref(b), b, Count::Finite(k[i] as u64), &wide).unwrap()).unwrap();
            }
            let term = den.inverse().unwrap().mul_monomial(&t).unwrap();
            sum = sum.add(&term).unwrap();
            let mut i = 0;
            while i < m {
                k[i] += 1;
                if k[i] <= bound {
                    break;
                }
                k[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        sum
    }

    #[test]
    fn f_at_origin() {
        let c = SeriesContext::new(1, 10).unwrap();
        let f = multisum(&MultiSumSpec::kr_f(M::zero(), M::zero(), M::zero()), &c).unwrap();
        assert_eq!(f, S::one(1, 10));
    }

    #[test]
    fn f_constant_term() {
        let c = SeriesContext::new(1, 10).unwrap();
        let f = multisum(&MultiSumSpec::kr_f(M::q_pow(1, 1), M::one(), M::q_pow(3, 1)), &c).unwrap();
        assert_eq!(f.coeff(0), Some(CycRat::one()));
    }

    #[test]
    fn matches_brute_force() {
        let c = SeriesContext::new(1, 14).unwrap();
        for spec in [
            MultiSumSpec::kr_f(M::q_pow(2, 1), M::q_pow(-1, 1), M::q_pow(6, 1)),
            MultiSumSpec::kr_f(M::new(CycRat::omega(), r(1)), M::q_pow(1, 1), M::q_pow(3, 1)),
            MultiSumSpec::capparelli(),
            MultiSumSpec::tsc(),
            MultiSumSpec::tse(),
        ] {
            let got = multisum(&spec, &c).unwrap();
            assert!(got.equal_to_order(&brute(&spec, 6, &c), 14).unwrap());
        }
        let c2 = SeriesContext::new(2, 20).unwrap();
        let spec = MultiSumSpec::ntss();
        assert!(multisum(&spec, &c2).unwrap().equal_to_order(&brute(&spec, 6, &c2), 20).unwrap());
        assert!(matches!(multisum(&spec, &c), Err(Error::ExponentNotRepresentable { .. })));
    }

    #[test]
    fn capparelli_product() {
        let c = SeriesContext::new(1, 30).unwrap();
        let lhs = multisum(&MultiSumSpec::capparelli(), &c).unwrap();
        let q = |n| M::q_pow(n, 1);
        let den = pochhammer_multi(&[q(3)], &q(6), Count::Infinite, &c)
            .unwrap()
            .mul(&pochhammer_multi(&[q(2), q(10)], &q(12), Count::Infinite, &c).unwrap())
            .unwrap();
        assert!(lhs.equal_to_order(&den.inverse().unwrap(), 30).unwrap());
    }

    #[test]
    fn divergent_rejected() {
        let c = SeriesContext::new(1, 10).unwrap();
        let mut spec = MultiSumSpec::<CycRat>::capparelli();
        spec.quadratic[0][1] = r(-7);
        assert!(matches!(multisum(&spec, &c), Err(Error::DivergentSpec(_))));
    }
}
