//! Laurent series in z over q-series, and constant-term extraction.
//!
//! Contour integrals around the origin are modelled formally: every factor
//! `(c q^e z^d; b)_∞^(±1)` is expanded with Euler's identities into powers of
//! `z^d` (positive d) or `z^(-|d|)` (negative d), and the integral is the
//! coefficient of `z^0` in the product.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::qkernel::{multisum, GenMono, MultiSumSpec};
use crate::series::{fmt_exponent, Monomial, Series, SeriesContext};

/// Finite Laurent polynomial in z with q-series coefficients.
///
/// Degrees outside `[lo, lo + coeffs.len())` are `O(q^trunc)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSeries<C> {
    denom: u32,
    lo: i64,
    coeffs: Vec<Series<C>>,
    trunc: i64,
}

/// The binomial `(1 − c·q^(qexp/D)·z^zdeg)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZFactor<C> {
    pub coeff: C,
    pub qexp: i64,
    pub zdeg: i64,
}

/// Bounds applied after each product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowPolicy {
    pub min_deg: i64,
    pub max_deg: i64,
    pub max_width: i64,
    /// Most negative q-valuation later partners may contribute.
    pub margin: i64,
}

impl WindowPolicy {
    pub fn unbounded() -> Self {
        WindowPolicy { min_deg: i64::MIN / 4, max_deg: i64::MAX / 4, max_width: 4096, margin: 0 }
    }
}

impl<C: Field> ZSeries<C> {
    pub fn new(denom: u32, lo: i64, coeffs: Vec<Series<C>>, trunc: i64) -> Self {
        let mut z = ZSeries { denom, lo, coeffs, trunc };
        z.normalize();
        z
    }

    pub fn zero(denom: u32, trunc: i64) -> Self {
        ZSeries { denom, lo: 0, coeffs: Vec::new(), trunc }
    }

    pub fn from_series(s: Series<C>) -> Self {
        let t = s.truncation();
        ZSeries::new(s.denom(), 0, vec![s], t)
    }

    pub fn one(denom: u32, trunc: i64) -> Self {
        ZSeries::from_series(Series::one(denom, trunc))
    }

    /// `c · q^(qexp/D) · z^zdeg`.
    pub fn monomial(c: C, qexp: i64, zdeg: i64, denom: u32, trunc: i64) -> Self {
        ZSeries::new(denom, zdeg, vec![Series::monomial(c, qexp, denom, trunc)], trunc)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|s| s.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|s| s.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn min_deg(&self) -> i64 {
        self.lo
    }

    pub fn max_deg(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Truncation of degrees outside the stored window.
    pub fn outer_truncation(&self) -> i64 {
        self.trunc
    }

    /// Smallest truncation over all stored coefficients and the outside.
    pub fn truncation(&self) -> i64 {
        self.coeffs.iter().map(|s| s.truncation()).fold(self.trunc, i64::min)
    }

    /// Smallest q-valuation over all coefficients.
    pub fn valuation(&self) -> i64 {
        self.coeffs
            .iter()
            .filter(|s| !s.is_zero())
            .map(|s| s.valuation())
            .min()
            .unwrap_or_else(|| self.truncation())
    }

    pub fn coeff(&self, deg: i64) -> Series<C> {
        let i = deg - self.lo;
        if i >= 0 && (i as usize) < self.coeffs.len() {
            self.coeffs[i as usize].clone()
        } else {
            Series::zero(self.denom, self.trunc)
        }
    }

    /// Non-zero coefficients with their degrees.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Series<C>)> {
        let lo = self.lo;
        self.coeffs.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(move |(i, s)| (lo + i as i64, s))
    }

    /// The coefficient of z^0.
    pub fn constant_term(&self) -> Series<C> {
        self.coeff(0)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.denom != o.denom {
            Err(Error::ContextMismatch(self.denom, o.denom))
        } else {
            Ok(())
        }
    }

    fn combine(&self, o: &Self, sub: bool) -> Result<Self> {
        self.check(o)?;
        if self.is_zero() && o.is_zero() {
            return Ok(ZSeries::zero(self.denom, self.trunc.min(o.trunc)));
        }
        let lo = if self.is_zero() { o.lo } else if o.is_zero() { self.lo } else { self.lo.min(o.lo) };
        let hi = [self, o].iter().filter(|x| !x.is_zero()).map(|x| x.max_deg()).max().unwrap();
        let mut out = Vec::with_capacity((hi - lo + 1) as usize);
        for d in lo..=hi {
            let (a, b) = (self.coeff(d), o.coeff(d));
            out.push(if sub { a.sub(&b)? } else { a.add(&b)? });
        }
        Ok(ZSeries::new(self.denom, lo, out, self.trunc.min(o.trunc)))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, true)
    }

    pub fn neg(&self) -> Self {
        ZSeries { coeffs: self.coeffs.iter().map(|s| s.neg()).collect(), ..self.clone() }
    }

    /// Truncate every coefficient (and the outside) at `t`.
    pub fn truncate(&self, t: i64) -> Self {
        ZSeries::new(self.denom, self.lo, self.coeffs.iter().map(|s| s.truncate(t)).collect(), self.trunc.min(t))
    }

    /// Apply a fallible map to every stored coefficient.
    pub fn try_map(&self, f: impl Fn(&Series<C>) -> Result<Series<C>>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(ZSeries::new(self.denom, self.lo, coeffs, self.trunc))
    }

    /// Multiply every coefficient by a z-free series.
    pub fn mul_series(&self, s: &Series<C>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.mul(s)).collect::<Result<Vec<_>>>()?;
        let outer = self.trunc + s.valuation().min(s.truncation());
        Ok(ZSeries::new(self.denom, self.lo, coeffs, outer))
    }

    /// Multiply by `c·q^(qexp/D)·z^zdeg`.
    pub fn shift(&self, c: &C, qexp: i64, zdeg: i64) -> Self {
        ZSeries::new(
            self.denom,
            self.lo + zdeg,
            self.coeffs.iter().map(|s| s.shift(c, qexp)).collect(),
            self.trunc + qexp,
        )
    }

    /// Full Laurent product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.zmul(o, &WindowPolicy::unbounded())
    }

    /// Laurent product restricted to a degree window; degrees whose
    /// coefficients cannot reach below `trunc − margin` are dropped.
    pub fn zmul(&self, o: &Self, policy: &WindowPolicy) -> Result<Self> {
        self.check(o)?;
        let outer = (self.trunc + o.valuation()).min(o.trunc + self.valuation());
        if self.is_zero() || o.is_zero() {
            return Ok(ZSeries::zero(self.denom, outer));
        }
        let lo = (self.lo + o.lo).max(policy.min_deg);
        let hi = (self.max_deg() + o.max_deg()).min(policy.max_deg);
        if hi < lo {
            return Ok(ZSeries::zero(self.denom, outer));
        }
        let mut out: Vec<Option<Series<C>>> = vec![None; (hi - lo + 1) as usize];
        for (i, a) in self.terms() {
            for (j, b) in o.terms() {
                let d = i + j;
                if d < lo || d > hi {
                    continue;
                }
                let p = a.mul(b)?;
                let slot = &mut out[(d - lo) as usize];
                *slot = Some(match slot.take() {
                    None => p,
                    Some(s) => s.add(&p)?,
                });
            }
        }
        let top = self.truncation().min(o.truncation());
        let coeffs: Vec<Series<C>> = out.into_iter().map(|s| s.unwrap_or_else(|| Series::zero(self.denom, top))).collect();
        let mut z = ZSeries::new(self.denom, lo, coeffs, outer);
        z.trim(outer - policy.margin);
        if z.coeffs.len() as i64 > policy.max_width {
            return Err(Error::WindowOverflow { window: z.coeffs.len() as i64, max: policy.max_width });
        }
        Ok(z)
    }

    /// Drop outer degrees whose coefficients have valuation at least `threshold`.
    fn trim(&mut self, threshold: i64) {
        let small = |s: &Series<C>| s.is_zero() || s.valuation() >= threshold;
        while self.coeffs.last().is_some_and(small) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|s| small(s)).count();
        self.coeffs.drain(..lead);
        self.lo += lead as i64;
        self.normalize();
    }

    /// Multiply by one binomial `(1 − c q^e z^d)`.
    pub fn mul_factor(&self, f: &ZFactor<C>) -> Result<Self> {
        let m = self.shift(&f.coeff, f.qexp, f.zdeg);
        self.sub(&m)
    }

    /// Substitute z ↦ z^k (k ≠ 0).
    pub fn substitute_pow(&self, k: i64) -> Self {
        let mut out: Vec<(i64, Series<C>)> = self.terms().map(|(d, s)| (d * k, s.clone())).collect();
        out.sort_by_key(|(d, _)| *d);
        let Some(lo) = out.first().map(|x| x.0) else {
            return ZSeries::zero(self.denom, self.trunc);
        };
        let hi = out.last().unwrap().0;
        let t = self.truncation();
        let mut coeffs = vec![Series::zero(self.denom, t); (hi - lo + 1) as usize];
        for (d, s) in out {
            coeffs[(d - lo) as usize] = s;
        }
        ZSeries::new(self.denom, lo, coeffs, self.trunc)
    }

    /// Substitute z ↦ 1/z.
    pub fn invert_z(&self) -> Self {
        self.substitute_pow(-1)
    }

    /// Substitute z ↦ m for a q-monomial `m`.
    pub fn eval_at(&self, c: &C, qexp: i64) -> Result<Series<C>> {
        let mut acc: Option<Series<C>> = None;
        for (d, s) in self.terms() {
            let cd = c.pow_i64(d).ok_or(Error::DivisionByZero)?;
            let term = s.shift(&cd, qexp * d);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Series::zero(self.denom, self.truncation())))
    }

    /// Degree-wise comparison below `up_to`; returns the first differing
    /// (degree, exponent, lhs, rhs).
    pub fn first_mismatch(&self, o: &Self, up_to: i64) -> Result<Option<(i64, i64, C, C)>> {
        self.check(o)?;
        let degs = self.terms().chain(o.terms()).map(|(d, _)| d);
        let (lo, hi) = degs.fold((i64::MAX, i64::MIN), |(a, b), d| (a.min(d), b.max(d)));
        for d in lo..=hi {
            if let Some((e, a, b)) = self.coeff(d).first_mismatch(&o.coeff(d), up_to)? {
                return Ok(Some((d, e, a, b)));
            }
        }
        Ok(None)
    }

    pub fn equal_to_order(&self, o: &Self, up_to: i64) -> Result<bool> {
        Ok(self.first_mismatch(o, up_to)?.is_none())
    }
}

/// Product of binomials, each `(1 − c q^e z^d)`.
pub fn zproduct<C: Field>(factors: &[ZFactor<C>], ctx: &SeriesContext, policy: &WindowPolicy) -> Result<ZSeries<C>> {
    let guard: i64 = factors.iter().map(|f| (-f.qexp).max(0)).sum();
    let top = ctx.order + guard + policy.margin;
    let mut acc = ZSeries::one(ctx.denom, top);
    for f in factors {
        if f.qexp >= top {
            continue;
        }
        let bin = ZSeries::new(
            ctx.denom,
            0,
            vec![Series::one(ctx.denom, top)],
            top,
        )
        .sub(&ZSeries::monomial(f.coeff.clone(), f.qexp, f.zdeg, ctx.denom, top))?;
        acc = acc.zmul(&bin, policy)?;
    }
    Ok(acc)
}

/// The factors of `(c q^e z^d; b)_∞` whose q-exponent is below `limit`.
pub fn zpoch_factors<C: Field>(c: &C, qexp: i64, zdeg: i64, base: (&C, i64), limit: i64) -> Result<Vec<ZFactor<C>>> {
    if base.1 <= 0 {
        return Err(Error::NonPositiveBaseExponent(base.1.to_string()));
    }
    let mut out = Vec::new();
    let mut cc = c.clone();
    let mut e = qexp;
    while e < limit {
        out.push(ZFactor { coeff: cc.clone(), qexp: e, zdeg });
        cc = cc.mul_ref(base.0);
        e += base.1;
    }
    Ok(out)
}

/// One factor `(c q^e z^d; b)_∞` of an integrand, or its reciprocal.
#[derive(Clone, Debug, PartialEq)]
pub struct ZPoch<C> {
    pub arg: GenMono<C>,
    pub base: GenMono<C>,
    pub inverse: bool,
}

/// A product of infinite z-Pochhammer symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct Integrand<C> {
    pub factors: Vec<ZPoch<C>>,
}

/// Settings for constant-term evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CtOptions {
    /// Largest z-degree examined on either side.
    pub max_window: i64,
    /// Extra degrees kept beyond the computed window.
    pub margin: i64,
}

impl Default for CtOptions {
    fn default() -> Self {
        CtOptions { max_window: 600, margin: 4 }
    }
}

/// Euler coefficients of one factor: degree (in |z|) → (coefficient monomial, series 1/(b;b)_k).
struct Expansion<C> {
    step: i64,
    // coefficient of z^(step·k): mono_k · 1/(b;b)_k
    monos: Vec<(C, i64)>,
    base: (C, i64),
}

impl<C: Field> Expansion<C> {
    fn new(f: &ZPoch<C>, max_deg: i64) -> Self {
        let step = f.arg.zdeg.abs();
        let kmax = max_deg / step;
        let mut monos = Vec::with_capacity(kmax as usize + 1);
        let (ca, ea) = (&f.arg.coeff, f.arg.qexp);
        let (cb, eb) = (&f.base.coeff, f.base.qexp);
        let mut c = C::one();
        let mut e = 0i64;
        // b^C(k,2) accumulates as b^(0+1+...+(k-1))
        let mut bk = C::one();
        let mut bexp = 0i64;
        for k in 0..=kmax {
            if f.inverse {
                monos.push((c.clone(), e));
            } else {
                let mut cc = c.mul_ref(&bk);
                if k % 2 == 1 {
                    cc = cc.neg_ref();
                }
                monos.push((cc, e + bexp));
            }
            c = c.mul_ref(ca);
            e += ea;
            // move from C(k,2) to C(k+1,2): multiply by b^k
            bk = bk.mul_ref(&cb.pow_i64(k).unwrap());
            bexp += eb * k;
        }
        Expansion { step, monos, base: (cb.clone(), eb) }
    }

    fn lower_bound(&self, n: i64) -> Option<i64> {
        (n % self.step == 0).then(|| self.monos.get((n / self.step) as usize).map(|m| m.1)).flatten()
    }

    /// Side polynomial in |z| of degree ≤ w with relative precision `prec`.
    fn series(&self, denom: u32, w: i64, prec: i64) -> Vec<(i64, Series<C>)> {
        let mut out = Vec::new();
        let mut inv = Series::one(denom, prec);
        let mut bpow = C::one();
        for (k, (c, e)) in self.monos.iter().enumerate() {
            let deg = k as i64 * self.step;
            if deg > w {
                break;
            }
            if k > 0 {
                bpow = bpow.mul_ref(&self.base.0);
                inv = inv.div_one_minus(&bpow, self.base.1 * k as i64).expect("positive base");
            }
            if !c.is_zero() {
                out.push((deg, inv.shift(c, *e)));
            }
        }
        out
    }
}

fn min_plus(a: &[Option<i64>], b: &[Option<i64>]) -> Vec<Option<i64>> {
    let n = a.len();
    let mut out = vec![None; n];
    for i in 0..n {
        let Some(x) = a[i] else { continue };
        for j in 0..n - i {
            if let Some(y) = b[j] {
                let v = x + y;
                if out[i + j].is_none_or(|o| v < o) {
                    out[i + j] = Some(v);
                }
            }
        }
    }
    out
}

/// Truncation marking a side coefficient that no term reaches.
const EXACT: i64 = i64::MAX / 4;

fn side_product<C: Field>(exps: &[Expansion<C>], denom: u32, w: i64, prec: i64) -> Result<Vec<Series<C>>> {
    let mut acc: Vec<Option<Series<C>>> = vec![None; w as usize + 1];
    acc[0] = Some(Series::one(denom, prec));
    for ex in exps {
        let terms = ex.series(denom, w, prec);
        let mut next: Vec<Option<Series<C>>> = vec![None; w as usize + 1];
        for (i, a) in acc.iter().enumerate() {
            let Some(a) = a else { continue };
            for (d, b) in &terms {
                let k = i as i64 + d;
                if k > w {
                    break;
                }
                let p = a.mul(b)?;
                let slot = &mut next[k as usize];
                *slot = Some(match slot.take() {
                    None => p,
                    Some(s) => s.add(&p)?,
                });
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().map(|s| s.unwrap_or_else(|| Series::zero(denom, EXACT))).collect())
}

impl<C: Field> Default for Integrand<C> {
    fn default() -> Self {
        Integrand { factors: Vec::new() }
    }
}

impl<C: Field> Integrand<C> {
    pub fn new(factors: Vec<ZPoch<C>>) -> Self {
        Integrand { factors }
    }

    pub fn push(&mut self, arg: GenMono<C>, base: GenMono<C>, inverse: bool) {
        self.factors.push(ZPoch { arg, base, inverse });
    }

    /// Coefficient of z^0 in the Laurent expansion, known below `ctx.order`.
    pub fn constant_term(&self, ctx: &SeriesContext, opts: &CtOptions) -> Result<Series<C>> {
        self.coefficient(0, ctx, opts)
    }

    /// Coefficient of z^m in the Laurent expansion.
    pub fn coefficient(&self, m: i64, ctx: &SeriesContext, opts: &CtOptions) -> Result<Series<C>> {
        for f in &self.factors {
            if f.arg.zdeg == 0 || f.arg.tdeg != 0 {
                return Err(Error::InvalidParameter("integrand factor must depend on z".into()));
            }
            if !f.base.is_scalar() || f.base.qexp <= 0 {
                return Err(Error::NonPositiveBaseExponent(fmt_exponent(f.base.exp_rational(ctx.denom))));
            }
        }
        let nmax = opts.max_window + m.abs();
        let (pos, neg): (Vec<_>, Vec<_>) = self.factors.iter().partition(|f| f.arg.zdeg > 0);
        let pos: Vec<Expansion<C>> = pos.into_iter().map(|f| Expansion::new(f, nmax)).collect();
        let neg: Vec<Expansion<C>> = neg.into_iter().map(|f| Expansion::new(f, nmax)).collect();
        let bound = |exps: &[Expansion<C>]| {
            let mut lb: Vec<Option<i64>> = vec![None; nmax as usize + 1];
            lb[0] = Some(0);
            for ex in exps {
                let f: Vec<Option<i64>> = (0..=nmax).map(|n| ex.lower_bound(n)).collect();
                lb = min_plus(&lb, &f);
            }
            lb
        };
        let (lbp, lbn) = (bound(&pos), bound(&neg));
        // pair (p, n) with p − n = m contributes Pos_p · Neg_n
        let n0 = (-m).max(0);
        let pair = |n: i64| -> Option<i64> {
            let p = n + m;
            if p < 0 || p > nmax || n > nmax {
                return None;
            }
            Some(lbp[p as usize]? + lbn[n as usize]?)
        };
        let t = ctx.order;
        let limit = nmax - m.max(0);
        let mut last = None;
        let mut low = 0i64;
        for n in n0..=limit {
            if let Some(v) = pair(n) {
                if v < t {
                    last = Some(n);
                    low = low.min(v);
                }
            }
        }
        let Some(w) = last else {
            return Ok(Series::zero(ctx.denom, t));
        };
        if w + opts.margin >= limit {
            return Err(Error::WindowOverflow { window: w, max: opts.max_window });
        }
        let w = w + opts.margin;
        for n in n0..=w {
            if let Some(v) = pair(n) {
                low = low.min(v);
            }
        }
        let prec = t - low;
        let wp = (w + m).max(0);
        let ps = side_product(&pos, ctx.denom, wp, prec)?;
        let ns = side_product(&neg, ctx.denom, w, prec)?;
        let mut acc = Series::zero(ctx.denom, t);
        for n in n0..=w {
            let p = n + m;
            let (a, b) = (&ps[p as usize], &ns[n as usize]);
            if a.truncation() >= EXACT || b.truncation() >= EXACT {
                continue;
            }
            acc = acc.add(&a.mul(b)?)?;
        }
        Ok(acc.truncate(t))
    }
}

/// Constant term of `(α₁z, α₂z, qz, 1/z; q)_∞ / (β₁z, β₂z, β₃z; q)_∞`
/// under the balance condition α₁α₂ = β₁β₂β₃.
pub fn integral_tpia<C: Field>(alphas: [&Monomial<C>; 2], betas: [&Monomial<C>; 3], ctx: &SeriesContext) -> Result<Series<C>> {
    let lhs = alphas[0].mul(alphas[1]);
    let rhs = betas[0].mul(betas[1]).mul(betas[2]);
    if lhs != rhs {
        return Err(Error::BalanceViolated(format!("{lhs} ≠ {rhs}")));
    }
    tpia_integrand(alphas, betas, ctx.denom)?.constant_term(ctx, &CtOptions::default())
}

/// The integrand shared by the two-parameter-family integrals.
pub fn tpia_integrand<C: Field>(alphas: [&Monomial<C>; 2], betas: [&Monomial<C>; 3], d: u32) -> Result<Integrand<C>> {
    let q = GenMono::q(C::one(), d as i64);
    let zm = |m: &Monomial<C>, zdeg| -> Result<GenMono<C>> {
        Ok(GenMono { zdeg, ..GenMono::from_monomial(m, d)? })
    };
    let mut ig = Integrand::default();
    for a in alphas {
        ig.push(zm(a, 1)?, q.clone(), false);
    }
    ig.push(GenMono { zdeg: 1, ..q.clone() }, q.clone(), false);
    ig.push(GenMono { zdeg: -1, ..GenMono::one() }, q.clone(), false);
    for b in betas {
        ig.push(zm(b, 1)?, q.clone(), true);
    }
    Ok(ig)
}

/// Integrand `(1/z, q²z; q²)_∞ (−wz³; q⁶)_∞ / ((−uz; q)_∞ (vz²; q⁴)_∞)` whose
/// constant term times (q²;q²)_∞ is F(u, v, w).
pub fn kr_integrand<C: Field>(u: &Monomial<C>, v: &Monomial<C>, w: &Monomial<C>, d: u32) -> Result<Integrand<C>> {
    let di = d as i64;
    let base = |k: i64| GenMono::q(C::one(), k * di);
    let zm = |m: &Monomial<C>, zdeg, neg: bool| -> Result<GenMono<C>> {
        let g = GenMono { zdeg, ..GenMono::from_monomial(m, d)? };
        Ok(if neg { g.neg() } else { g })
    };
    let mut ig = Integrand::default();
    ig.push(GenMono { zdeg: -1, ..GenMono::one() }, base(2), false);
    ig.push(GenMono { zdeg: 1, ..base(2) }, base(2), false);
    ig.push(zm(w, 3, true)?, base(6), false);
    ig.push(zm(u, 1, true)?, base(1), true);
    ig.push(zm(v, 2, false)?, base(4), true);
    Ok(ig)
}

/// F(u, v, w) through its contour-integral representation.
pub fn kr_f_by_ct<C: Field>(u: &Monomial<C>, v: &Monomial<C>, w: &Monomial<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    let ig = kr_integrand(u, v, w, ctx.denom)?;
    let g = ctx.with_guard(ctx.denom as i64 * 4);
    let ct = ig.constant_term(&g, &CtOptions::default())?;
    let q2 = Monomial::q_pow(2, 1);
    let pre = crate::qkernel::pochhammer_multi(std::slice::from_ref(&q2), &q2, crate::qkernel::Count::Infinite, &g)?;
    Ok(pre.mul(&ct)?.truncate(ctx.order))
}

/// Same triple sum by direct summation, for cross-checks.
pub fn kr_f_by_sum<C: Field>(u: &Monomial<C>, v: &Monomial<C>, w: &Monomial<C>, ctx: &SeriesContext) -> Result<Series<C>> {
    multisum(&MultiSumSpec::kr_f(u.clone(), v.clone(), w.clone()), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::{phi, pochhammer_multi, Count, PhiSpec};
    use crate::CycRat;
    use num_rational::Rational64;
    use num_traits::One;

    type Z = ZSeries<CycRat>;
    type M = Monomial<CycRat>;

    fn c1() -> CycRat {
        CycRat::one()
    }

    fn mono(c: i64, e: i64) -> M {
        M::new(CycRat::from_int(c), Rational64::from_integer(e))
    }

    #[test]
    fn zmul_examples() {
        let t = 20;
        let x = Z::monomial(c1(), 0, 1, 1, t).add(&Z::one(1, t)).unwrap().add(&Z::monomial(c1(), 0, -1, 1, t)).unwrap();
        assert_eq!(x.mul(&Z::one(1, t)).unwrap(), x);
        let a = Z::one(1, t).sub(&Z::monomial(c1(), 1, 1, 1, t)).unwrap();
        let b = Z::one(1, t).add(&Z::monomial(c1(), 1, 1, 1, t)).unwrap();
        let expect = Z::one(1, t).sub(&Z::monomial(c1(), 2, 2, 1, t)).unwrap();
        assert!(a.mul(&b).unwrap().equal_to_order(&expect, t).unwrap());
    }

    #[test]
    fn constant_term_examples() {
        let t = 10;
        let x = Z::monomial(c1(), 2, 1, 1, t)
            .add(&Z::monomial(CycRat::from_int(3), 0, 0, 1, t))
            .unwrap()
            .add(&Z::monomial(c1(), 1, -1, 1, t))
            .unwrap();
        assert_eq!(x.constant_term(), Series::constant(CycRat::from_int(3), 1, t));
        assert!(Z::monomial(c1(), 0, 3, 1, t).constant_term().is_zero());
    }

    #[test]
    fn single_factor_window() {
        let ctx = SeriesContext::new(1, 10).unwrap();
        let z = zproduct(&[ZFactor { coeff: c1(), qexp: 1, zdeg: 1 }], &ctx, &WindowPolicy::unbounded()).unwrap();
        assert_eq!((z.min_deg(), z.max_deg()), (0, 1));
    }

    #[test]
    fn inverse_z_pochhammer_coefficients() {
        // (1/z; q²)_∞ against the product of its factors below q^42
        let ctx = SeriesContext::new(1, 40).unwrap();
        let fs = zpoch_factors(&c1(), 0, -1, (&c1(), 2), 42).unwrap();
        let brute = zproduct(&fs, &ctx, &WindowPolicy::unbounded()).unwrap();
        let q2 = GenMono::q(c1(), 2);
        for n in 0..=5 {
            let ig = Integrand::new(vec![ZPoch { arg: GenMono { zdeg: -1, ..GenMono::one() }, base: q2.clone(), inverse: false }]);
            let got = ig.coefficient(-n, &ctx, &CtOptions::default()).unwrap();
            assert!(got.equal_to_order(&brute.coeff(-n), 40).unwrap(), "n = {n}");
            if n >= 1 {
                assert_eq!(got.valuation(), n * (n - 1));
            }
        }
    }

    #[test]
    fn theta_product_matches_sum() {
        // (q²z, 1/z; q²)_∞ (q²;q²)_∞ = Σ (−1)^l q^(l(l−1)) z^(−l)
        let ctx = SeriesContext::new(1, 20).unwrap();
        let fs = [zpoch_factors(&c1(), 2, 1, (&c1(), 2), 30).unwrap(), zpoch_factors(&c1(), 0, -1, (&c1(), 2), 30).unwrap()].concat();
        let prod = zproduct(&fs, &ctx, &WindowPolicy::unbounded()).unwrap();
        let q2 = M::q_pow(2, 1);
        let pre = pochhammer_multi(std::slice::from_ref(&q2), &q2, Count::Infinite, &ctx.with_guard(4)).unwrap();
        for l in -4i64..=4 {
            let lhs = prod.coeff(-l).mul(&pre).unwrap();
            let expect = if l * (l - 1) < 20 {
                Series::monomial(if l % 2 == 0 { c1() } else { -c1() }, l * (l - 1), 1, 20)
            } else {
                Series::zero(1, 20)
            };
            assert!(lhs.equal_to_order(&expect, 20).unwrap(), "l = {l}");
        }
    }

    #[test]
    fn kr_integral_matches_multisum() {
        let ctx = SeriesContext::new(1, 20).unwrap();
        for (u, v, w) in [(1, 0, 3), (2, 4, 9), (2, -1, 6)] {
            let (u, v, w) = (mono(1, u), mono(1, v), mono(1, w));
            let a = kr_f_by_ct(&u, &v, &w, &ctx).unwrap();
            let b = kr_f_by_sum(&u, &v, &w, &ctx).unwrap();
            assert!(a.equal_to_order(&b, 20).unwrap());
        }
    }

    #[test]
    fn window_enlargement_is_stable() {
        let ctx = SeriesContext::new(1, 25).unwrap();
        let ig = kr_integrand(&mono(1, 2), &mono(1, -1), &mono(1, 6), 1).unwrap();
        let a = ig.constant_term(&ctx, &CtOptions::default()).unwrap();
        let b = ig.constant_term(&ctx, &CtOptions { margin: 8, ..CtOptions::default() }).unwrap();
        assert!(a.equal_to_order(&b, 25).unwrap());
    }

    #[test]
    fn tpia_against_phi() {
        // α₁ = q², α₂ = q³, β = (q, q², q²): CT = (β₁, α₁/β₁; q)_∞/(q;q)_∞ · 2φ1
        let ctx = SeriesContext::new(1, 20).unwrap();
        let q = |n| M::q_pow(n, 1);
        let (a1, a2, b1, b2, b3) = (q(2), q(3), q(1), q(2), q(2));
        let ct = integral_tpia([&a1, &a2], [&b1, &b2, &b3], &ctx).unwrap();
        let spec = PhiSpec {
            uppers: vec![a2.div(&b2).unwrap(), a2.div(&b3).unwrap()],
            lowers: vec![b1.clone()],
            base: q(1),
            arg: a1.div(&b1).unwrap(),
        };
        let g = ctx.with_guard(5);
        let rhs = pochhammer_multi(&[b1.clone(), a1.div(&b1).unwrap()], &q(1), Count::Infinite, &g)
            .unwrap()
            .div(&pochhammer_multi(&[q(1)], &q(1), Count::Infinite, &g).unwrap())
            .unwrap()
            .mul(&phi(&spec, &g).unwrap())
            .unwrap();
        assert!(ct.equal_to_order(&rhs, 20).unwrap());
        let bad = integral_tpia([&a1, &q(4)], [&b1, &b2, &b3], &ctx);
        assert!(matches!(bad, Err(Error::BalanceViolated(_))));
    }
}
