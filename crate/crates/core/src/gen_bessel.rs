//! The generalized Bessel function `0F_r(-; a_1+1, ..., a_r+1; z)`.
//!
//! It solves `T (T + a_1) ... (T + a_r) y = z y` with `T = z d/dz`. Besides
//! `y_0 = 0F_r` the other local solutions at the origin are
//! `y_j = z^{-a_j} 0F_r(-; 1-a_j, 1+a_1-a_j, .., 1+a_r-a_j; z)` with the
//! entry `1 + a_j - a_j` left out. Checks here are termwise identities on
//! the series coefficients.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::hypergeom::{eval_pfq, pfq_coefficients, HypSeriesSpec};
use crate::precision::{PrecisionContext, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct GenBesselSpec<T> {
    pub alphas: Vec<T>,
}

impl<T: Scalar> GenBesselSpec<T> {
    pub fn new(alphas: Vec<T>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidParameters("generalized Bessel function needs r >= 1".into()));
        }
        Ok(GenBesselSpec { alphas })
    }

    pub fn r(&self) -> usize {
        self.alphas.len()
    }

    fn like(&self) -> T {
        self.alphas[0].one_like()
    }

    /// Denominator parameters of `y_0`: `a_j + 1`.
    pub fn y0_spec(&self) -> HypSeriesSpec<T> {
        let one = self.like();
        HypSeriesSpec::new(vec![], self.alphas.iter().map(|a| a.clone() + &one).collect())
    }

    /// Series part of `y_j` (1-based `j`).
    pub fn yj_spec(&self, j: usize) -> HypSeriesSpec<T> {
        let one = self.like();
        let aj = &self.alphas[j - 1];
        let mut den = vec![one.clone() - aj];
        for (i, ai) in self.alphas.iter().enumerate() {
            if i != j - 1 {
                den.push(one.clone() + ai - aj);
            }
        }
        HypSeriesSpec::new(vec![], den)
    }

    /// Rejects parameter sets where the `y_j` are not a fundamental system.
    pub fn check_nondegenerate(&self, ctx: &PrecisionContext) -> Result<()> {
        for (i, ai) in self.alphas.iter().enumerate() {
            if ai.is_integer_valued(ctx) {
                return Err(Error::DegenerateParameters(format!("alpha_{} = {ai} is an integer", i + 1)));
            }
            for (j, aj) in self.alphas.iter().enumerate().skip(i + 1) {
                if (ai.clone() - aj).is_integer_valued(ctx) {
                    return Err(Error::DegenerateParameters(format!(
                        "alpha_{} - alpha_{} is an integer",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `y_0(z) = 0F_r(-; a+1; z)`.
pub fn eval_y0<T: Scalar>(spec: &GenBesselSpec<T>, z: &T, ctx: &PrecisionContext) -> Result<T> {
    eval_pfq(&spec.y0_spec(), z, ctx).map(|v| v.value)
}

/// `y_j(z)` for `z > 0` on the principal branch of `z^{-a_j}`.
pub fn eval_yj<T: Scalar>(spec: &GenBesselSpec<T>, j: usize, z: &T, ctx: &PrecisionContext) -> Result<Float> {
    if j == 0 || j > spec.r() {
        return Err(Error::InvalidParameters(format!("solution index {j} outside 1..={}", spec.r())));
    }
    spec.check_nondegenerate(ctx)?;
    let zf = z.to_float(ctx);
    if zf <= 0 {
        return Err(Error::OutOfDomain(zf.to_string()));
    }
    let series = eval_pfq(&spec.yj_spec(j), z, ctx)?.value.to_float(ctx);
    let power = zf.pow(&(-spec.alphas[j - 1].to_float(ctx)));
    Ok(series * power)
}

/// First `count` coefficients of `y_0` with power offset 0.
pub fn y0_coefficients<T: Scalar>(spec: &GenBesselSpec<T>, count: usize) -> (Vec<T>, T) {
    let like = spec.like();
    (pfq_coefficients(&spec.y0_spec(), count, &like), like.zero_like())
}

/// First `count` coefficients of `y_j` with power offset `-a_j`.
pub fn yj_coefficients<T: Scalar>(spec: &GenBesselSpec<T>, j: usize, count: usize) -> (Vec<T>, T) {
    let like = spec.like();
    (pfq_coefficients(&spec.yj_spec(j), count, &like), -spec.alphas[j - 1].clone())
}

/// Largest termwise defect of the differential equation for
/// `y = sum c_k z^{k + sigma}`, over `k <= max_k`:
/// `|c_k (k+sigma) prod_j (k+sigma+a_j) - c_{k-1}|`, with `c_{-1} = 0`.
pub fn ode_residual<T: Scalar>(coeffs: &[T], sigma: &T, spec: &GenBesselSpec<T>, max_k: usize) -> T {
    let like = spec.like();
    let mut worst = like.zero_like();
    for k in 0..=max_k.min(coeffs.len().saturating_sub(1)) {
        let e = like.int_like(k as i64) + sigma;
        let mut lhs = coeffs[k].clone() * &e;
        for a in &spec.alphas {
            lhs *= e.clone() + a;
        }
        if k > 0 {
            lhs -= &coeffs[k - 1];
        }
        let d = lhs.abs_val();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Coefficient defects of the two differentiation formulas up to
/// `count` terms, as formal power series.
///
/// First: `(k+1) c_{k+1} - c'_k / prod(a_j + 1)`, where `c'` belongs to
/// `0F_r(-; a+2; z)`. Second, for each `j` with `a_j != 0`:
/// `(k + a_j) c_k - a_j c''_k`, where `c''` has the `j`-th parameter
/// lowered to `a_j`. Entries for `a_j = 0` are `None`.
pub fn derivative_identity_defects_formal<T: Scalar>(spec: &GenBesselSpec<T>, count: usize) -> (T, Vec<Option<T>>) {
    let like = spec.like();
    let c = pfq_coefficients(&spec.y0_spec(), count + 1, &like);
    let two = like.int_like(2);
    let shifted = HypSeriesSpec::new(vec![], spec.alphas.iter().map(|a| a.clone() + &two).collect());
    let cp = pfq_coefficients(&shifted, count, &like);
    let prod = spec.alphas.iter().fold(like.clone(), |acc, a| acc * (a.clone() + &like));
    let mut first = like.zero_like();
    for k in 0..count {
        let d = (c[k + 1].clone() * &like.int_like(k as i64 + 1) - cp[k].clone() / &prod).abs_val();
        if d > first {
            first = d;
        }
    }
    let second = (0..spec.r())
        .map(|j| {
            let aj = &spec.alphas[j];
            if aj.is_zero() {
                return None;
            }
            let lowered = lowered_spec(spec, j);
            let cl = pfq_coefficients(&lowered, count, &like);
            let mut worst = like.zero_like();
            for k in 0..count {
                let d = (c[k].clone() * &(like.int_like(k as i64) + aj) - aj.clone() * &cl[k]).abs_val();
                if d > worst {
                    worst = d;
                }
            }
            Some(worst)
        })
        .collect();
    (first, second)
}

fn lowered_spec<T: Scalar>(spec: &GenBesselSpec<T>, j: usize) -> HypSeriesSpec<T> {
    let one = spec.like();
    HypSeriesSpec::new(
        vec![],
        spec.alphas
            .iter()
            .enumerate()
            .map(|(i, a)| if i == j { a.clone() } else { a.clone() + &one })
            .collect(),
    )
}

/// Pointwise defects of the differentiation formulas at `z`.
#[derive(Clone, Debug)]
pub struct DerivativeDefects {
    pub first: Float,
    /// Second formula divided through by `z^{a_j - 1}`; `None` when `a_j = 0`.
    pub second: Vec<Option<Float>>,
}

/// Evaluates both differentiation formulas at `z`: the left sides by
/// summing the termwise-differentiated series, the right sides through
/// the series engine.
pub fn check_derivative_identities<T: Scalar>(
    spec: &GenBesselSpec<T>,
    z: &T,
    ctx: &PrecisionContext,
) -> Result<DerivativeDefects> {
    let like = spec.like();
    let zf = z.to_float(ctx);
    let two = like.int_like(2);
    let shifted = HypSeriesSpec::new(vec![], spec.alphas.iter().map(|a| a.clone() + &two).collect());
    let rhs_fit = eval_pfq(&shifted, z, ctx)?;
    let terms = rhs_fit.terms_used + 40;
    let c: Vec<Float> =
        pfq_coefficients(&spec.y0_spec(), terms + 1, &like).iter().map(|v| v.to_float(ctx)).collect();
    let prod = spec.alphas.iter().fold(like.clone(), |acc, a| acc * (a.clone() + &like)).to_float(ctx);
    let lhs = horner(&(0..terms).map(|k| Float::with_val(ctx.bits(), &c[k + 1] * (k as u32 + 1))).collect::<Vec<_>>(), &zf);
    let rhs = rhs_fit.value.to_float(ctx) / prod;
    let first = Float::with_val(ctx.bits(), lhs - rhs).abs();
    let mut second = Vec::with_capacity(spec.r());
    for j in 0..spec.r() {
        let aj = spec.alphas[j].to_float(ctx);
        if aj.is_zero() {
            second.push(None);
            continue;
        }
        let lhs_coeffs: Vec<Float> =
            (0..terms).map(|k| Float::with_val(ctx.bits(), &c[k] * Float::with_val(ctx.bits(), &aj + k as u32))).collect();
        let lhs = horner(&lhs_coeffs, &zf);
        let rhs = eval_pfq(&lowered_spec(spec, j), z, ctx)?.value.to_float(ctx) * &aj;
        second.push(Some(Float::with_val(ctx.bits(), lhs - rhs).abs()));
    }
    Ok(DerivativeDefects { first, second })
}

fn horner(c: &[Float], x: &Float) -> Float {
    let prec = x.prec();
    let mut acc = Float::new(prec);
    for v in c.iter().rev() {
        acc *= x;
        acc += v;
    }
    acc
}

/// Parameters of the Wright function `phi(z) = sum z^k / (Gamma(rho k + beta) k!)`.
#[derive(Clone, Debug)]
pub struct WrightSpec {
    pub rho: Float,
    pub beta: Float,
}

/// Integer `rho` when `spec.rho` is one.
fn integer_rho(spec: &WrightSpec) -> Option<usize> {
    if spec.rho.is_integer() && spec.rho >= 1 {
        spec.rho.to_u32_saturating().map(|v| v as usize)
    } else {
        None
    }
}

/// Wright's generalized Bessel function. Integer `rho` goes through the
/// `0F_rho` form, other `rho` through the defining series.
pub fn wright_phi(spec: &WrightSpec, z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if spec.rho <= 0 {
        return Err(Error::InvalidParameters("Wright function needs rho > 0".into()));
    }
    match integer_rho(spec) {
        Some(r) => {
            let (fr, factor) = wright_0fr_form(r, &spec.beta, z, ctx)?;
            Ok(fr * factor)
        }
        None => wright_phi_series(spec, z, ctx),
    }
}

/// For `rho = r`: returns `(0F_r(-; b/r, .., (b+r-1)/r; z/r^r), 1/Gamma(b))`,
/// whose product is `phi(z)` by the multiplication formula.
pub fn wright_0fr_form(r: usize, beta: &Float, z: &Float, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let rf = ctx.float(r as f64);
    let den: Vec<Float> = (0..r).map(|i| Float::with_val(ctx.bits(), beta + i as u32) / &rf).collect();
    let rr = Float::with_val(ctx.bits(), rf.clone().pow(r as u32));
    let arg = Float::with_val(ctx.bits(), z / &rr);
    // b/r etc. may hit poles when b is a nonpositive integer; those
    // parameter sets have 1/Gamma(b) = 0 and are handled by the series.
    let v = eval_pfq(&HypSeriesSpec::new(vec![], den), &arg, ctx)?.value;
    Ok((v, reciprocal_gamma(beta, ctx)))
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn reciprocal_gamma(x: &Float, ctx: &PrecisionContext) -> Float {
    if x.is_integer() && *x <= 0 {
        return ctx.float(0.0);
    }
    Float::with_val(ctx.bits(), x.gamma_ref()).recip()
}

/// The defining series of `phi`, summed with the three-small-terms rule.
pub fn wright_phi_series(spec: &WrightSpec, z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let hi = ctx.boosted(ctx.guard());
    let z = Float::with_val(hi.bits(), z);
    let mut zk = hi.float(1.0);
    let mut kfact = hi.float(1.0);
    let mut sum = hi.float(0.0);
    let mut max_term = hi.float(0.0);
    let eps = ctx.eps_float();
    let mut small = 0;
    for k in 0..crate::hypergeom::MAX_TERMS {
        if k > 0 {
            zk *= &z;
            kfact *= k as u32;
        }
        let arg = Float::with_val(hi.bits(), &spec.rho * k as u32) + &spec.beta;
        let term = Float::with_val(hi.bits(), &zk / &kfact) * reciprocal_gamma(&arg, &hi);
        sum += &term;
        let t = term.abs();
        if t > max_term {
            max_term = t.clone();
        }
        let reference = Float::with_val(hi.bits(), sum.clone().abs().max(&Float::with_val(hi.bits(), &max_term * &eps)));
        // terms decay only once rho k + k exceeds |z|; wait for that
        let decaying = Float::with_val(hi.bits(), &spec.rho * k as u32) + k as u32 > Float::with_val(hi.bits(), z.clone().abs() * 2u32);
        if decaying && t < Float::with_val(hi.bits(), &eps * &reference) {
            small += 1;
            if small == 3 {
                return Ok(Float::with_val(ctx.bits(), &sum));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::TruncationLimit(crate::hypergeom::MAX_TERMS))
}
