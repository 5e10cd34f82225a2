//! Hard-edge scaling experiments: scaled polynomial values against the
//! limit functions, and scaled first zeros against their limits.

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::families::{
    jacobi_angelesco_normalized_eval, jacobi_pineiro_eval_series, laguerre2_q, mh_limit_eval,
    mlaguerre1_eval_series, sorokin_eval_series, FamilySpec, LimitParams, Support,
};
use crate::hypergeom::{eval_pfq, HypSeriesSpec};
use crate::moments::construct_mop;
use crate::poly::{BigPoly, MultiIndex};
use crate::precision::{pochhammer, Param, PrecisionContext, Scalar};
use crate::roots::{bessel_zeros, genbessel_zeros, poly_real_zeros};

/// One theorem instance: the family, and the ratios `q` for the
/// vector-index theorems.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub theorem: u8,
    pub family: FamilySpec,
    pub q: Option<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct MHReport {
    pub theorem_id: u8,
    pub params: FamilySpec,
    pub q: Option<Vec<Rational>>,
    pub n_grid: Vec<usize>,
    pub z_grid: Vec<f64>,
    /// `sup_z |scaled - limit|` per `n`.
    pub sup_errors: Vec<Float>,
    /// Where the sup is attained, per `n`.
    pub z_sup: Vec<f64>,
    /// `None` when some error vanishes.
    pub estimated_order: Option<f64>,
    /// Thm 7 only: `(-1)^n c^n p_n(0) / (n^v n!)` over `e^{1/c} / Gamma(v+1)` at the largest `n`.
    pub fitted_constant: Option<Float>,
}

#[derive(Clone, Debug)]
pub struct ZeroScalingReport {
    pub family: FamilySpec,
    pub q: Option<Vec<Rational>>,
    pub k: usize,
    pub n_grid: Vec<usize>,
    pub scaled_zeros: Vec<Float>,
    pub target: Float,
    pub rel_errors: Vec<f64>,
}

/// 21 equispaced points on `[0, 4]` plus `-1` and `-2`.
pub fn default_z_grid() -> Vec<f64> {
    let mut z: Vec<f64> = (0..=20).map(|i| i as f64 / 5.0).collect();
    z.extend([-1.0, -2.0]);
    z
}

pub const DEFAULT_N_GRID: [usize; 4] = [8, 16, 32, 64];

/// Which theorem covers a family.
pub fn theorem_for(fam: &FamilySpec) -> u8 {
    match fam {
        FamilySpec::JacobiAngelesco { .. } => 1,
        FamilySpec::JacobiPineiro { .. } => 2,
        FamilySpec::MLaguerre1 { .. } => 3,
        FamilySpec::MLaguerre2 { .. } => 4,
        FamilySpec::SorokinLaguerre { .. } => 5,
        FamilySpec::KBesselMop { .. } => 6,
        FamilySpec::IBesselMop { .. } => 7,
        FamilySpec::MeijerGMop { .. } => 8,
    }
}

/// `q` as given, or equal ratios for the vector-index families.
fn ratios(fam: &FamilySpec, q: &Option<Vec<Rational>>) -> Result<Vec<Rational>> {
    let r = fam.weights();
    let q = match q {
        Some(q) => q.clone(),
        None => vec![Rational::from((1, r as i64)); r],
    };
    if q.len() != r {
        return Err(Error::InvalidParameters(format!("{} ratios for {} weights", q.len(), r)));
    }
    if q.iter().any(|x| *x <= 0) || q.iter().fold(Rational::new(), |a, b| a + b) != 1 {
        return Err(Error::InvalidParameters("ratios must be positive and sum to 1".into()));
    }
    Ok(q)
}

/// Limit-function parameters for an experiment.
pub fn limit_params(exp: &Experiment) -> Result<LimitParams> {
    Ok(match &exp.family {
        FamilySpec::JacobiAngelesco { beta, .. } => LimitParams::Angelesco { beta: beta.clone() },
        FamilySpec::JacobiPineiro { alphas, .. } | FamilySpec::MLaguerre1 { alphas } => {
            LimitParams::GenBessel { alphas: alphas.clone(), q: ratios(&exp.family, &exp.q)? }
        }
        FamilySpec::MLaguerre2 { alpha, cs } => {
            LimitParams::LaguerreII { alpha: alpha.clone(), q: ratios(&exp.family, &exp.q)?, cs: cs.clone() }
        }
        FamilySpec::SorokinLaguerre { p, r } => LimitParams::Sorokin { p: p.clone(), r: *r },
        FamilySpec::KBesselMop { alpha, nu } => LimitParams::KBessel { alpha: alpha.clone(), nu: nu.clone() },
        FamilySpec::IBesselMop { nu, c } => LimitParams::IBessel { nu: nu.clone(), c: c.clone() },
        FamilySpec::MeijerGMop { nus } => LimitParams::MeijerG { nus: nus.clone() },
    })
}

fn pow_n(n: usize, e: usize, ctx: &PrecisionContext) -> Float {
    let mut v = ctx.float(1.0);
    for _ in 0..e {
        v *= n as u32;
    }
    v
}

fn floats(ps: &[Param], ctx: &PrecisionContext) -> Vec<Float> {
    ps.iter().map(|p| p.to_float(ctx)).collect()
}

/// Scaled polynomial values at `z_grid` for one `n`, in the order of the
/// grid, plus the Thm 7 normalization constant.
pub fn scaled_values(exp: &Experiment, n: usize, zs: &[Float], ctx: &PrecisionContext) -> Result<(Vec<Float>, Option<Float>)> {
    let fam = &exp.family;
    let bits = ctx.bits();
    let nf = ctx.float(n as f64);
    let index = || -> Result<MultiIndex> { MultiIndex::from_ratios(n, &ratios(fam, &exp.q)?) };
    let mut out = Vec::with_capacity(zs.len());
    match fam {
        FamilySpec::JacobiAngelesco { alpha, beta, gamma } => {
            let s = Float::with_val(bits, nf.clone() * nf.clone().sqrt());
            let (a, b, g) = (alpha.to_float(ctx), beta.to_float(ctx), gamma.to_float(ctx));
            for z in zs {
                let x = Float::with_val(bits, z / &s);
                out.push(jacobi_angelesco_normalized_eval(n, &a, &b, &g, &x, ctx)?);
            }
        }
        FamilySpec::JacobiPineiro { alphas, beta } => {
            let idx = index()?;
            let s = pow_n(n, fam.weights() + 1, ctx);
            let (a, b) = (floats(alphas, ctx), beta.to_float(ctx));
            for z in zs {
                let x = Float::with_val(bits, z / &s);
                out.push(jacobi_pineiro_eval_series(idx.parts(), &a, &b, &x, ctx)?);
            }
        }
        FamilySpec::MLaguerre1 { alphas } => {
            let idx = index()?;
            let s = pow_n(n, fam.weights(), ctx);
            let a = floats(alphas, ctx);
            for z in zs {
                let x = Float::with_val(bits, z / &s);
                out.push(mlaguerre1_eval_series(idx.parts(), &a, &x, ctx)?);
            }
        }
        FamilySpec::MLaguerre2 { .. } | FamilySpec::KBesselMop { .. } | FamilySpec::MeijerGMop { .. } => {
            let idx = if matches!(fam, FamilySpec::MLaguerre2 { .. }) { index()? } else { MultiIndex::new(vec![n])? };
            let poly = normalized_poly(fam, &idx, ctx)?;
            for z in zs {
                out.push(poly.eval(&Float::with_val(bits, z / &nf)));
            }
        }
        FamilySpec::SorokinLaguerre { p, r } => {
            let pf = p.to_float(ctx);
            let scale = Float::with_val(bits, nf.clone().ln() * &pf);
            let scale = (-scale).exp();
            for z in zs {
                let x = Float::with_val(bits, z / &nf);
                out.push(sorokin_eval_series(n, &pf, *r, &x, ctx)? * &scale);
            }
        }
        FamilySpec::IBesselMop { nu, c } => {
            let poly = ibessel_poly(fam, n, ctx)?;
            let p0 = poly.eval(&ctx.float(0.0));
            for z in zs {
                out.push(poly.eval(&Float::with_val(bits, z / &nf)) / &p0);
            }
            // (-1)^n c^n p_n(0) / (n^v n!) against e^{1/c} / Gamma(v+1)
            let v = nu.to_float(ctx);
            let cf = c.to_float(ctx);
            let nv = Float::with_val(bits, nf.clone().ln() * &v).exp();
            let fact = pochhammer(&ctx.float(1.0), n);
            let cn = Float::with_val(bits, cf.clone().ln() * n as u32).exp();
            let mut lhs = p0 * cn / nv / fact;
            if n % 2 == 1 {
                lhs = -lhs;
            }
            let rhs = cf.recip().exp() / Float::with_val(bits, &v + 1u32).gamma();
            return Ok((out, Some(lhs / rhs)));
        }
    }
    Ok((out, None))
}

/// Normalized polynomial in working precision; exact coefficients when the
/// parameters allow it.
fn normalized_poly(fam: &FamilySpec, idx: &MultiIndex, ctx: &PrecisionContext) -> Result<BigPoly<Float>> {
    if fam.params_exact() {
        Ok(fam.normalized_coefficients::<Rational>(idx, ctx)?.to_float(ctx))
    } else {
        // coefficients of mixed sign: carry extra digits through the build
        let work = ctx.boosted(ctx.guard());
        let p = fam.normalized_coefficients::<Float>(idx, &work)?;
        Ok(BigPoly::new(p.coeffs().iter().map(|c| Float::with_val(ctx.bits(), c)).collect()))
    }
}

fn ibessel_poly(fam: &FamilySpec, n: usize, ctx: &PrecisionContext) -> Result<BigPoly<Float>> {
    let idx = MultiIndex::new(vec![n])?;
    if fam.moments_exact() {
        Ok(construct_mop::<Rational>(fam, &idx, ctx)?.poly.to_float(ctx))
    } else {
        Ok(construct_mop::<Float>(fam, &idx, ctx)?.poly)
    }
}

/// Limit values, and for Thm 7 the normalized limit `0F1(-; v+1; -cz)`
/// matching the ratio form of the scaled values.
fn limit_values(exp: &Experiment, zs: &[Float], ctx: &PrecisionContext) -> Result<Vec<Float>> {
    if let FamilySpec::IBesselMop { nu, c } = &exp.family {
        let spec = HypSeriesSpec::new(vec![], vec![nu.to_float(ctx) + ctx.float(1.0)]);
        let cf = c.to_float(ctx);
        return zs
            .iter()
            .map(|z| eval_pfq(&spec, &-Float::with_val(ctx.bits(), &cf * z), ctx).map(|v| v.value))
            .collect();
    }
    let lp = limit_params(exp)?;
    zs.iter().map(|z| mh_limit_eval(&lp, z, ctx)).collect()
}

/// Runs one theorem over `n_grid` and `z_grid`.
pub fn run_mh_experiment(exp: &Experiment, n_grid: &[usize], z_grid: &[f64], ctx: &PrecisionContext) -> Result<MHReport> {
    exp.family.validate()?;
    if theorem_for(&exp.family) != exp.theorem {
        return Err(Error::InvalidParameters(format!("theorem {} does not cover {}", exp.theorem, exp.family)));
    }
    if n_grid.is_empty() || z_grid.is_empty() {
        return Err(Error::InvalidParameters("empty grid".into()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameters("n grid must be strictly increasing".into()));
    }
    let zs: Vec<Float> = z_grid.iter().map(|z| ctx.float(*z)).collect();
    let limit = limit_values(exp, &zs, ctx)?;
    let per_n: Vec<Result<(Float, f64, Option<Float>)>> = n_grid
        .par_iter()
        .map(|&n| {
            let (vals, constant) = scaled_values(exp, n, &zs, ctx)?;
            let mut sup = ctx.float(0.0);
            let mut arg = z_grid[0];
            for ((v, l), z) in vals.iter().zip(&limit).zip(z_grid) {
                let e = Float::with_val(ctx.bits(), v - l).abs();
                if e > sup {
                    sup = e;
                    arg = *z;
                }
            }
            Ok((sup, arg, constant))
        })
        .collect();
    let mut sup_errors = Vec::new();
    let mut z_sup = Vec::new();
    let mut fitted_constant = None;
    for r in per_n {
        let (e, z, c) = r?;
        sup_errors.push(e);
        z_sup.push(z);
        fitted_constant = c;
    }
    let errs: Vec<f64> = sup_errors.iter().map(Float::to_f64).collect();
    let estimated_order = estimate_order(&errs, n_grid).ok();
    Ok(MHReport {
        theorem_id: exp.theorem,
        params: exp.family.clone(),
        q: exp.q.clone(),
        n_grid: n_grid.to_vec(),
        z_grid: z_grid.to_vec(),
        sup_errors,
        z_sup,
        estimated_order,
        fitted_constant,
    })
}

/// Least-squares slope of `log error` against `log n`, negated.
pub fn estimate_order(errors: &[f64], n_grid: &[usize]) -> Result<f64> {
    if errors.len() != n_grid.len() || errors.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 points, got {}", errors.len())));
    }
    let zeros: Vec<usize> = errors.iter().zip(n_grid).filter(|(e, _)| **e <= 0.0).map(|(_, n)| *n).collect();
    if !zeros.is_empty() {
        return Err(Error::DegenerateFit(format!("zero error at n = {zeros:?}")));
    }
    let xs: Vec<f64> = n_grid.iter().map(|n| (*n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(-sxy / sxx)
}

/// Scaling exponent `s` with `n^s x_{k,n}` converging, and the target.
fn zero_target(fam: &FamilySpec, q: &Option<Vec<Rational>>, k: usize, ctx: &PrecisionContext) -> Result<(usize, Float)> {
    let kth = |z: crate::roots::ZeroList| z.values[k - 1].clone();
    Ok(match fam {
        FamilySpec::JacobiPineiro { alphas, .. } | FamilySpec::MLaguerre1 { alphas } => {
            let q = ratios(fam, q)?;
            let f = kth(genbessel_zeros(&floats(alphas, ctx), k, ctx)?);
            let prod = q.iter().fold(ctx.float(1.0), |a, x| a * ctx.float_from(x));
            let s = if matches!(fam, FamilySpec::JacobiPineiro { .. }) { alphas.len() + 1 } else { alphas.len() };
            (s, f / prod)
        }
        FamilySpec::MLaguerre2 { alpha, cs } => {
            let qq = laguerre2_q(&ratios(fam, q)?, cs).to_float(ctx);
            let j = kth(bessel_zeros(&alpha.to_float(ctx), k, ctx)?);
            (1, Float::with_val(ctx.bits(), &j * &j) / (qq * 4u32))
        }
        FamilySpec::KBesselMop { alpha, nu } => {
            let a = alpha.to_float(ctx);
            let b = Float::with_val(ctx.bits(), &a + &nu.to_float(ctx));
            (1, kth(genbessel_zeros(&[a, b], k, ctx)?))
        }
        FamilySpec::MeijerGMop { nus } => (1, kth(genbessel_zeros(&floats(nus, ctx), k, ctx)?)),
        FamilySpec::IBesselMop { nu, c } => {
            let j = kth(bessel_zeros(&nu.to_float(ctx), k, ctx)?);
            (1, Float::with_val(ctx.bits(), &j * &j) / (c.to_float(ctx) * 4u32))
        }
        FamilySpec::JacobiAngelesco { .. } | FamilySpec::SorokinLaguerre { .. } => {
            return Err(Error::InvalidParameters(format!("no zero-scaling limit for {}", fam.name())))
        }
    })
}

/// Polynomial whose zeros are scaled: explicit formula when available.
fn zero_poly(fam: &FamilySpec, q: &Option<Vec<Rational>>, n: usize, ctx: &PrecisionContext) -> Result<(BigPoly<Rational>, usize)> {
    let idx = if fam.scalar_index() { MultiIndex::new(vec![n])? } else { MultiIndex::from_ratios(n, &ratios(fam, q)?)? };
    let deg = fam.degree(&idx);
    let poly = if let FamilySpec::IBesselMop { .. } = fam {
        if fam.moments_exact() {
            construct_mop::<Rational>(fam, &idx, ctx)?.poly
        } else {
            to_rational_poly(&construct_mop::<Float>(fam, &idx, ctx)?.poly)
        }
    } else if fam.params_exact() {
        fam.normalized_coefficients::<Rational>(&idx, ctx)?
    } else {
        let work = ctx.boosted(ctx.digits());
        to_rational_poly(&fam.normalized_coefficients::<Float>(&idx, &work)?)
    };
    Ok((poly, deg))
}

fn to_rational_poly(p: &BigPoly<Float>) -> BigPoly<Rational> {
    BigPoly::new(p.coeffs().iter().map(Scalar::to_rational).collect())
}

/// Scaled `k`-th zero against its limit over `n_grid`.
pub fn run_zero_scaling(
    fam: &FamilySpec,
    q: &Option<Vec<Rational>>,
    k: usize,
    n_grid: &[usize],
    ctx: &PrecisionContext,
) -> Result<ZeroScalingReport> {
    fam.validate()?;
    if k == 0 || k > 5 {
        return Err(Error::InvalidParameters(format!("k = {k} outside 1..=5")));
    }
    let (s, target) = zero_target(fam, q, k, ctx)?;
    let (lo, hi) = match fam.support() {
        Support::Interval(a, b) => (Rational::from_f64(a).unwrap_or_default(), Rational::from_f64(b)),
        _ => (Rational::new(), None),
    };
    let per_n: Vec<Result<Float>> = n_grid
        .par_iter()
        .map(|&n| {
            let (poly, deg) = zero_poly(fam, q, n, ctx)?;
            let z = poly_real_zeros(&poly, &lo, hi.as_ref(), Some(k.min(deg)), ctx)?;
            if z.len() < k {
                return Err(Error::ZeroCountMismatch { expected: k, found: z.len() });
            }
            Ok(z.values[k - 1].clone() * pow_n(n, s, ctx))
        })
        .collect();
    let mut scaled_zeros = Vec::new();
    for r in per_n {
        scaled_zeros.push(r?);
    }
    let rel_errors = scaled_zeros
        .iter()
        .map(|v| (Float::with_val(ctx.bits(), v - &target).abs() / &target).to_f64())
        .collect();
    Ok(ZeroScalingReport { family: fam.clone(), q: q.clone(), k, n_grid: n_grid.to_vec(), scaled_zeros, target, rel_errors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_exact_geometric_sequences() {
        let n = [8, 16, 32, 64];
        assert!((estimate_order(&[1.0, 0.5, 0.25, 0.125], &n).unwrap() - 1.0).abs() < 1e-12);
        assert!(estimate_order(&[1.0, 1.0, 1.0, 1.0], &n).unwrap().abs() < 1e-12);
        assert!(matches!(estimate_order(&[1.0, 0.0, 1.0, 1.0], &n), Err(Error::DegenerateFit(_))));
        assert!(matches!(estimate_order(&[1.0, 0.5], &n[..2]), Err(Error::DegenerateFit(_))));
    }
}
