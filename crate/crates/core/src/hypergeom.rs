//! Generalized hypergeometric series `pFq(a_1..a_p; b_1..b_q; z)`.
//!
//! Terminating series (a numerator parameter `-n`) are summed in full.
//! Entire series, and `p = q + 1` inside the unit disc, are summed until
//! three consecutive terms fall below `eps |sum|` while the term ratio
//! guarantees a geometric tail.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{Complex, Param, PrecisionContext, Scalar};

/// Upper bound on summed terms for nonterminating series.
pub const MAX_TERMS: usize = 50_000;

#[derive(Clone, Debug, PartialEq)]
pub struct HypSeriesSpec<T> {
    pub num: Vec<T>,
    pub den: Vec<T>,
}

impl<T: Scalar> HypSeriesSpec<T> {
    pub fn new(num: Vec<T>, den: Vec<T>) -> Self {
        HypSeriesSpec { num, den }
    }

    pub fn from_params(num: &[Param], den: &[Param], ctx: &PrecisionContext) -> Result<Self> {
        let conv = |ps: &[Param]| ps.iter().map(|p| T::from_param(p, ctx)).collect::<Result<Vec<T>>>();
        Ok(HypSeriesSpec { num: conv(num)?, den: conv(den)? })
    }

    pub fn p(&self) -> usize {
        self.num.len()
    }

    pub fn q(&self) -> usize {
        self.den.len()
    }

    pub fn validate(&self, ctx: &PrecisionContext) -> Result<()> {
        for b in &self.den {
            if b.nonpositive_integer(ctx).is_some() {
                return Err(Error::InvalidDenominator(b.to_string()));
            }
        }
        Ok(())
    }

    /// Number of the last nonzero term when a numerator parameter is a
    /// nonpositive integer.
    pub fn terminating_degree(&self, ctx: &PrecisionContext) -> Option<usize> {
        self.num.iter().filter_map(|a| a.nonpositive_integer(ctx)).min().map(|n| n as usize)
    }

    /// Same parameters converted to working-precision reals.
    pub fn to_float(&self, ctx: &PrecisionContext) -> HypSeriesSpec<Float> {
        HypSeriesSpec {
            num: self.num.iter().map(|a| a.to_float(ctx)).collect(),
            den: self.den.iter().map(|b| b.to_float(ctx)).collect(),
        }
    }
}

/// `term_{k+1} / (z term_k) = prod(a_i + k) / prod(b_j + k) / (k + 1)`.
pub fn pfq_term_recurrence<T: Scalar>(spec: &HypSeriesSpec<T>, k: usize, like: &T) -> T {
    let kk = like.int_like(k as i64);
    let mut r = like.one_like();
    for a in &spec.num {
        r *= a.clone() + &kk;
    }
    for b in &spec.den {
        r /= b.clone() + &kk;
    }
    r / like.int_like(k as i64 + 1)
}

/// Series coefficients `c_k = prod (a_i)_k / prod (b_j)_k / k!` for
/// `k < count`.
pub fn pfq_coefficients<T: Scalar>(spec: &HypSeriesSpec<T>, count: usize, like: &T) -> Vec<T> {
    let mut out = Vec::with_capacity(count);
    let mut c = like.one_like();
    for k in 0..count {
        out.push(c.clone());
        c *= pfq_term_recurrence(spec, k, like);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PfqValue<T> {
    pub value: T,
    pub terms_used: usize,
}

/// Abstracts over real and complex arguments for the summation loop.
trait SeriesArg: Clone {
    type S: Scalar;
    fn one(like: &Self::S) -> Self;
    fn scale(&self, s: &Self::S) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn abs_float(&self, ctx: &PrecisionContext) -> Float;
    fn is_zero_arg(&self) -> bool;
}

impl<T: Scalar> SeriesArg for T {
    type S = T;
    fn one(like: &T) -> Self {
        like.one_like()
    }
    fn scale(&self, s: &T) -> Self {
        self.clone() * s
    }
    fn mul(&self, o: &Self) -> Self {
        self.clone() * o
    }
    fn add(&self, o: &Self) -> Self {
        self.clone() + o
    }
    fn abs_float(&self, ctx: &PrecisionContext) -> Float {
        self.to_float(ctx).abs()
    }
    fn is_zero_arg(&self) -> bool {
        Scalar::is_zero(self)
    }
}

/// Wrapper so complex values can share the summation loop.
#[derive(Clone, Debug)]
struct C<T>(Complex<T>);

impl<T: Scalar> SeriesArg for C<T> {
    type S = T;
    fn one(like: &T) -> Self {
        C(Complex::real(like.one_like()))
    }
    fn scale(&self, s: &T) -> Self {
        C(self.0.scale(s))
    }
    fn mul(&self, o: &Self) -> Self {
        C(self.0.mul(&o.0))
    }
    fn add(&self, o: &Self) -> Self {
        C(self.0.add(&o.0))
    }
    fn abs_float(&self, ctx: &PrecisionContext) -> Float {
        self.0.norm_sqr().to_float(ctx).sqrt()
    }
    fn is_zero_arg(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }
}

fn sum_series<A: SeriesArg>(
    spec: &HypSeriesSpec<A::S>,
    z: &A,
    like: &A::S,
    ctx: &PrecisionContext,
) -> Result<(PfqValue<A>, Float)> {
    spec.validate(ctx)?;
    let one = A::one(like);
    if z.is_zero_arg() {
        return Ok((PfqValue { value: one, terms_used: 1 }, ctx.float(1.0)));
    }
    if let Some(n) = spec.terminating_degree(ctx) {
        let mut term = one.clone();
        let mut sum = one.clone();
        let mut max_term = ctx.float(1.0);
        for k in 0..n {
            term = term.mul(z).scale(&pfq_term_recurrence(spec, k, like));
            sum = sum.add(&term);
            let t = term.abs_float(ctx);
            if t > max_term {
                max_term = t;
            }
        }
        return Ok((PfqValue { value: sum, terms_used: n + 1 }, max_term));
    }
    let (p, q) = (spec.p(), spec.q());
    let zabs = z.abs_float(ctx);
    if p > q + 1 {
        return Err(Error::DivergentSeries(format!("{p}F{q} without a terminating parameter")));
    }
    if p == q + 1 && zabs >= 1 {
        return Err(Error::DivergentSeries(format!("{p}F{q} at |z| = {}", zabs.to_f64())));
    }
    let eps = ctx.eps_float();
    let half = ctx.float(0.5);
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut max_term = ctx.float(1.0);
    let mut small_run = 0;
    for k in 0..MAX_TERMS {
        let ratio = pfq_term_recurrence(spec, k, like);
        let step = Float::with_val(ctx.bits(), ratio.to_float(ctx).abs() * &zabs);
        term = term.mul(z).scale(&ratio);
        sum = sum.add(&term);
        let t = term.abs_float(ctx);
        if t > max_term {
            max_term = t.clone();
        }
        let s = sum.abs_float(ctx);
        let floor = Float::with_val(ctx.bits(), &max_term * &eps);
        let reference = if s > floor { s } else { floor };
        let geometric = step < 1 && (step <= half || {
            // tail bounded by t * step / (1 - step)
            let tail = Float::with_val(ctx.bits(), &t * &step) / (ctx.float(1.0) - &step);
            tail < Float::with_val(ctx.bits(), &eps * &reference)
        });
        if t < Float::with_val(ctx.bits(), &eps * &reference) && geometric {
            small_run += 1;
            if small_run == 3 {
                return Ok((PfqValue { value: sum, terms_used: k + 2 }, max_term));
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::TruncationLimit(MAX_TERMS))
}

/// Sums `pFq(spec; z)`. Exact when `T` is rational and the series
/// terminates; otherwise the partial sum stops at the truncation target.
/// In real arithmetic the sum is redone at higher precision when
/// cancellation between terms would eat into the guard digits.
pub fn eval_pfq<T: Scalar>(spec: &HypSeriesSpec<T>, z: &T, ctx: &PrecisionContext) -> Result<PfqValue<T>> {
    let (v, max_term) = sum_series(spec, z, z, ctx)?;
    if T::EXACT {
        return Ok(v);
    }
    let lost = cancellation_digits(&max_term, &v.value.to_float(ctx).abs());
    if lost * 2 < ctx.guard() {
        return Ok(v);
    }
    let hi = ctx.boosted(lost + ctx.guard());
    let spec_hi = spec.to_float(&hi);
    let zh = z.to_float(&hi);
    let (vh, _) = sum_series(&spec_hi, &zh, &zh, &hi)?;
    Ok(PfqValue { value: T::from_float(&vh.value, ctx), terms_used: vh.terms_used })
}

pub fn eval_pfq_float(spec: &HypSeriesSpec<Float>, z: &Float, ctx: &PrecisionContext) -> Result<PfqValue<Float>> {
    eval_pfq(spec, z, ctx)
}

fn cancellation_digits(max_term: &Float, sum: &Float) -> u32 {
    if sum.is_zero() {
        return 30;
    }
    let r = Float::with_val(64, max_term / sum).to_f64();
    if r <= 1.0 {
        0
    } else {
        r.log10().ceil().min(400.0) as u32
    }
}

/// Complex-argument evaluation (used along rays `w^j R_+`).
pub fn eval_pfq_complex<T: Scalar>(
    spec: &HypSeriesSpec<T>,
    z: &Complex<T>,
    ctx: &PrecisionContext,
) -> Result<PfqValue<Complex<T>>> {
    let (v, _) = sum_series(spec, &C(z.clone()), &z.re, ctx)?;
    Ok(PfqValue { value: v.value.0, terms_used: v.terms_used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rug::ops::Pow;
    use rug::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn bessel_j_series(alpha: u32, x: &Float, ctx: &PrecisionContext) -> Float {
        // sum (-1)^k (x/2)^{2k+a} / (k! (k+a)!), summed independently
        let half = Float::with_val(ctx.bits(), x / 2u32);
        let h2 = Float::with_val(ctx.bits(), &half * &half);
        let mut term = Float::with_val(ctx.bits(), half.clone().pow(alpha));
        for i in 1..=alpha {
            term /= i;
        }
        let mut sum = term.clone();
        for k in 1..400u32 {
            term *= &h2;
            term /= k;
            term /= k + alpha;
            term = -term;
            sum += &term;
        }
        sum
    }

    #[test]
    fn z_zero_gives_one() {
        let ctx = PrecisionContext::default();
        let spec = HypSeriesSpec::new(vec![q(1, 3)], vec![q(1, 2), q(5, 7)]);
        let v = eval_pfq(&spec, &q(0, 1), &ctx).unwrap();
        assert_eq!(v.value, q(1, 1));
        assert_eq!(v.terms_used, 1);
    }

    #[test]
    fn terminating_1f2() {
        let ctx = PrecisionContext::default();
        let spec = HypSeriesSpec::new(vec![q(-1, 1)], vec![q(1, 1), q(2, 1)]);
        let x = q(5, 3);
        let v = eval_pfq(&spec, &x, &ctx).unwrap();
        assert_eq!(v.value, q(1, 1) - x / q(2, 1));
        assert_eq!(v.terms_used, 2);
    }

    #[test]
    fn bessel_j0_at_two() {
        let ctx = PrecisionContext::default();
        let spec = HypSeriesSpec::new(vec![], vec![ctx.float(1.0)]);
        let v = eval_pfq(&spec, &ctx.float(-1.0), &ctx).unwrap();
        let j0 = bessel_j_series(0, &ctx.float(2.0), &ctx);
        assert!(Float::with_val(ctx.bits(), v.value - j0).abs() < ctx.eps_float());
        // J_0(2) = 0.22389077914123566805...
        assert!((ctx.float(0.223_890_779_141_235_67) - bessel_j_series(0, &ctx.float(2.0), &ctx)).abs() < 1e-16);
    }

    #[test]
    fn recurrence_examples() {
        let e: HypSeriesSpec<Rational> = HypSeriesSpec::new(vec![], vec![]);
        assert_eq!(pfq_term_recurrence(&e, 0, &q(1, 1)), q(1, 1));
        let s = HypSeriesSpec::new(vec![], vec![q(1, 1), q(2, 1)]);
        assert_eq!(pfq_term_recurrence(&s, 0, &q(1, 1)), q(1, 2));
        let t = HypSeriesSpec::new(vec![q(-4, 1)], vec![q(1, 2)]);
        assert_eq!(pfq_term_recurrence(&t, 4, &q(1, 1)), q(0, 1));
    }

    #[test]
    fn exp_series() {
        let ctx = PrecisionContext::default();
        let spec: HypSeriesSpec<Float> = HypSeriesSpec::new(vec![], vec![]);
        for x in [-3.0, 0.5, 7.25] {
            let z = ctx.float(x);
            let v = eval_pfq(&spec, &z, &ctx).unwrap().value;
            let mut term = ctx.float(1.0);
            let mut sum = ctx.float(1.0);
            for k in 1..300u32 {
                term *= &z;
                term /= k;
                sum += &term;
            }
            assert!((Float::with_val(ctx.bits(), &v - &sum) / &sum).abs() < ctx.eps_float());
        }
    }

    #[test]
    fn errors() {
        let ctx = PrecisionContext::default();
        let bad = HypSeriesSpec::new(vec![q(1, 1)], vec![q(-2, 1)]);
        assert!(matches!(eval_pfq(&bad, &q(1, 2), &ctx), Err(Error::InvalidDenominator(_))));
        let div = HypSeriesSpec::new(vec![q(1, 2), q(1, 3)], vec![q(1, 4)]);
        assert!(matches!(eval_pfq(&div, &q(1, 1), &ctx), Err(Error::DivergentSeries(_))));
        assert!(eval_pfq(&div, &q(1, 2), &ctx).is_ok());
        let big = HypSeriesSpec::new(vec![q(1, 2), q(1, 3), q(1, 5)], vec![q(1, 4)]);
        assert!(matches!(eval_pfq(&big, &q(1, 100), &ctx), Err(Error::DivergentSeries(_))));
        let term = HypSeriesSpec::new(vec![q(-3, 1), q(1, 3), q(1, 5)], vec![q(1, 4)]);
        assert_eq!(eval_pfq(&term, &q(10, 1), &ctx).unwrap().terms_used, 4);
    }

    #[test]
    fn gauss_sum_inside_disc() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        let ctx = PrecisionContext::default();
        let spec = HypSeriesSpec::new(vec![ctx.float(1.0), ctx.float(1.0)], vec![ctx.float(2.0)]);
        let z = ctx.float(0.75);
        let v = eval_pfq(&spec, &z, &ctx).unwrap().value;
        let expect = -(ctx.float(0.25).ln()) / &z;
        assert!(Float::with_val(ctx.bits(), v - expect).abs() < ctx.eps_float() * 10u32);
    }

    #[test]
    fn cancellation_is_compensated() {
        // 0F1(-;1;-x) at large x, compared against a 100-digit evaluation
        let ctx = PrecisionContext::default();
        let hi = PrecisionContext::new(120).unwrap();
        let spec: HypSeriesSpec<Float> = HypSeriesSpec::new(vec![], vec![ctx.float(1.0)]);
        let v = eval_pfq_float(&spec, &ctx.float(-400.0), &ctx).unwrap().value;
        let spec_hi: HypSeriesSpec<Float> = HypSeriesSpec::new(vec![], vec![hi.float(1.0)]);
        let w = eval_pfq(&spec_hi, &hi.float(-400.0), &hi).unwrap().value;
        let rel = Float::with_val(hi.bits(), (Float::with_val(hi.bits(), &v) - &w) / &w).abs();
        assert!(rel < ctx.eps_float());
    }

    #[test]
    fn complex_matches_real_on_real_axis() {
        let ctx = PrecisionContext::default();
        let spec = HypSeriesSpec::new(vec![], vec![ctx.float(1.5), ctx.float(2.0)]);
        let z = ctx.float(-3.0);
        let r = eval_pfq(&spec, &z, &ctx).unwrap().value;
        let c = eval_pfq_complex(&spec, &Complex::real(z), &ctx).unwrap().value;
        assert!(Float::with_val(ctx.bits(), c.re - r).abs() < ctx.eps_float());
        assert!(c.im.is_zero());
    }

    proptest! {
        #[test]
        fn recurrence_matches_pochhammer_products(
            nums in prop::collection::vec((-20i64..20, 1i64..7), 0..3),
            dens in prop::collection::vec((1i64..20, 1i64..7), 0..3),
        ) {
            use crate::precision::pochhammer;
            let spec = HypSeriesSpec::new(
                nums.iter().map(|&(a, b)| q(a, b)).collect(),
                dens.iter().map(|&(a, b)| q(a, b)).collect(),
            );
            let one = q(1, 1);
            let coeffs = pfq_coefficients(&spec, 51, &one);
            for (k, c) in coeffs.iter().enumerate() {
                let mut direct = one.clone();
                for a in &spec.num { direct *= pochhammer(a, k); }
                for b in &spec.den { direct /= pochhammer(b, k); }
                direct /= pochhammer(&one, k);
                prop_assert_eq!(c, &direct);
            }
        }

        #[test]
        fn precision_refinement_is_consistent(x in -20.0f64..20.0, b in 0.1f64..4.0) {
            let lo = PrecisionContext::new(30).unwrap();
            let hi = PrecisionContext::new(60).unwrap();
            let s_lo = HypSeriesSpec::new(vec![], vec![lo.float(b), lo.float(b + 0.5)]);
            let s_hi = HypSeriesSpec::new(vec![], vec![hi.float(b), hi.float(b + 0.5)]);
            let a = eval_pfq_float(&s_lo, &lo.float(x), &lo).unwrap().value;
            let c = eval_pfq_float(&s_hi, &hi.float(x), &hi).unwrap().value;
            let diff = Float::with_val(hi.bits(), Float::with_val(hi.bits(), &a) - &c).abs();
            prop_assert!(diff <= lo.eps_float() * Float::with_val(hi.bits(), c.abs().max(&hi.float(1e-3))) * 10u32);
        }
    }
}
