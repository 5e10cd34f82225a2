//! The verification suite behind `mopasym verify`: exactness, formula
//! agreement, series identities, convergence trends, zero scaling and
//! special-case reductions, each recorded as a PASS/FAIL line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

use crate::config::{PanelEntry, RunConfig, Thm4Pair};
use crate::error::{Error, Result};
use crate::families::{bessel_j_series, d_ell, d_ell_limit, laguerre2_q, mh_limit_eval, FamilySpec, LimitParams};
use crate::gen_bessel::{derivative_identity_defects_formal, ode_residual, y0_coefficients, yj_coefficients, GenBesselSpec};
use crate::harness::{limit_params, run_mh_experiment, run_zero_scaling, scaled_values};
use crate::moments::{construct_mop, orthogonality_residual, sorokin_exact_residual_zero};
use crate::poly::{BigPoly, MultiIndex};
use crate::precision::{pochhammer, Param, PrecisionContext};
use crate::roots::{bessel_zeros, genbessel_zeros};

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "exact orthogonality"),
    (2, "explicit formula vs moment oracle"),
    (3, "series ODE and differentiation identities"),
    (4, "Mehler-Heine convergence"),
    (5, "r = 1 classical reductions"),
    (6, "zero scaling"),
    (7, "positive simple zeros of the limit functions"),
    (8, "Laguerre II limit invariance"),
    (9, "Meijer-G r = 2 equals K-Bessel"),
    (10, "Angelesco coefficient limits"),
];

pub const SPREAD_TOL: f64 = 1e-30;
pub const ORDER_RANGE: (f64, f64) = (0.8, 1.3);
pub const REDUCTION_FACTOR: f64 = 4.0;
pub const ZERO_REL_TOL: f64 = 0.05;
pub const MEIJER_TOL: f64 = 1e-40;
pub const D_ELL_FACTOR: f64 = 3.0;
pub const IDENTITY_TERMS: usize = 40;
pub const RANDOM_SETS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Status {
    fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub label: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionSummary {
    pub criterion: u8,
    pub name: &'static str,
    pub status: Status,
    pub checks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub digits: u32,
    pub status: Status,
    pub criteria: Vec<CriterionSummary>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn check(criterion: u8, label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
    Check { criterion, label: label.into(), status: Status::of(ok), detail: detail.into() }
}

fn failed(criterion: u8, label: impl Into<String>, err: &Error) -> Check {
    check(criterion, label, false, format!("{}: {err}", err.name()))
}

fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(" ")
}

/// Indices for the exact checks: scalar `n = t`, the diagonal `(t, t)` for
/// Angelesco, or near-diagonal parts summing to `t`.
pub fn index_of_total(fam: &FamilySpec, t: usize) -> MultiIndex {
    let r = fam.weights();
    if fam.scalar_index() || r == 1 || matches!(fam, FamilySpec::JacobiAngelesco { .. }) {
        return MultiIndex::new(vec![t]).expect("nonempty");
    }
    MultiIndex::new((0..r).map(|j| (t + r - 1 - j) / r).collect()).expect("nonempty")
}

/// Runs every criterion on the panels of `cfg`.
pub fn run_verify(cfg: &RunConfig, ctx: &PrecisionContext) -> Result<VerifyReport> {
    cfg.validate()?;
    let mut checks = Vec::new();
    checks.extend(exact_orthogonality(cfg, ctx));
    checks.extend(explicit_vs_oracle(cfg, ctx));
    checks.extend(series_identities(cfg));
    checks.extend(mehler_heine(cfg, ctx));
    checks.extend(reductions(cfg, ctx));
    checks.extend(zero_scaling(cfg, ctx));
    checks.extend(limit_zeros(cfg, ctx));
    checks.extend(thm4_invariance(cfg, ctx));
    checks.extend(meijer_kbessel(cfg, ctx));
    checks.extend(angelesco_d(cfg, ctx));
    let criteria: Vec<CriterionSummary> = CRITERIA
        .iter()
        .map(|&(id, name)| {
            let mine: Vec<&Check> = checks.iter().filter(|c| c.criterion == id).collect();
            let ok = !mine.is_empty() && mine.iter().all(|c| c.status == Status::Pass);
            CriterionSummary { criterion: id, name, status: Status::of(ok), checks: mine.len() }
        })
        .collect();
    let status = Status::of(criteria.iter().all(|c| c.status == Status::Pass));
    Ok(VerifyReport { digits: ctx.digits(), status, criteria, checks })
}

fn exact_orthogonality(cfg: &RunConfig, ctx: &PrecisionContext) -> Vec<Check> {
    cfg.exact
        .par_iter()
        .map(|e| {
            let fam = &e.family;
            let label = fam.to_string();
            let run = || -> Result<Vec<usize>> {
                let mut bad = Vec::new();
                for t in 1..=cfg.exact_n_max {
                    let idx = index_of_total(fam, t);
                    let poly = construct_mop::<Rational>(fam, &idx, ctx)?.poly;
                    let zero = match fam {
                        FamilySpec::SorokinLaguerre { p, r } => {
                            let n = fam.canonical_index(&idx)?.total();
                            sorokin_exact_residual_zero(p.as_rational().expect("exact panel"), *r, n, &poly)
                        }
                        _ => orthogonality_residual(fam, &idx, &poly, ctx)? == 0,
                    };
                    if !zero {
                        bad.push(t);
                    }
                }
                Ok(bad)
            };
            match run() {
                Ok(bad) => check(1, label, bad.is_empty(), format!("n <= {}, nonzero residual at {bad:?}", cfg.exact_n_max)),
                Err(err) => failed(1, label, &err),
            }
        })
        .collect()
}

/// `max |e_i - s o_i| / max |e_i|` with `s` matching the leading terms.
pub fn proportionality_spread(e: &BigPoly<Float>, o: &BigPoly<Float>, ctx: &PrecisionContext) -> f64 {
    if e.degree() != o.degree() {
        return f64::INFINITY;
    }
    let (Some(el), Some(ol)) = (e.leading(), o.leading()) else { return f64::INFINITY };
    let s = Float::with_val(ctx.bits(), el / ol);
    let mut num = ctx.float(0.0);
    let mut den = ctx.float(0.0);
    for (a, b) in e.coeffs().iter().zip(o.coeffs()) {
        num = num.max(&Float::with_val(ctx.bits(), a - Float::with_val(ctx.bits(), b * &s)).abs());
        den = den.max(&Float::with_val(ctx.bits(), a.abs_ref()));
    }
    (num / den).to_f64()
}

fn explicit_vs_oracle(cfg: &RunConfig, ctx: &PrecisionContext) -> Vec<Check> {
    let mut entries: Vec<&PanelEntry> = cfg.exact.iter().chain(&cfg.mh).filter(|e| e.family.has_explicit_formula()).collect();
    entries.dedup_by(|a, b| a.family == b.family);
    entries
        .par_iter()
        .map(|e| {
            let fam = &e.family;
            let label = fam.to_string();
            let run = || -> Result<f64> {
                let mut worst = 0f64;
                for t in 1..=10 {
                    let idx = index_of_total(fam, t);
                    let spread = if fam.params_exact() && fam.moments_exact() {
                        let ex = fam.explicit_coefficients::<Rational>(&idx, ctx)?;
                        let or = construct_mop::<Rational>(fam, &idx, ctx)?.poly;
                        let lead = Rational::from(ex.leading().expect("nonzero") / or.leading().expect("nonzero"));
                        if ex == or.scale(&lead) {
                            0.0
                        } else {
                            proportionality_spread(&ex.to_float(ctx), &or.to_float(ctx), ctx)
                        }
                    } else {
                        let ex = fam.explicit_coefficients::<Float>(&idx, ctx)?;
                        let or = construct_mop::<Float>(fam, &idx, ctx)?.poly;
                        proportionality_spread(&ex, &or, ctx)
                    };
                    worst = worst.max(spread);
                }
                Ok(worst)
            };
            match run() {
                Ok(s) => check(2, label, s < SPREAD_TOL, format!("n <= 10, max spread {}", sci(s))),
                Err(err) => failed(2, label, &err),
            }
        })
        .collect()
}

/// `num/den` with `den` in `1..=9`, never a nonpositive integer.
fn random_param(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = Rational::from((rng.gen_range(-9i64..=30), rng.gen_range(1i64..=9)));
        if !(q.is_integer() && q <= 0) {
            return q;
        }
    }
}

fn series_identities(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ctx = PrecisionContext::default();
    let mut out = Vec::new();
    for set in 0..RANDOM_SETS {
        let r = 1 + set % 3;
        let spec = loop {
            let alphas: Vec<Rational> = (0..r).map(|_| random_param(&mut rng)).collect();
            if let Ok(s) = GenBesselSpec::new(alphas) {
                if s.check_nondegenerate(&ctx).is_ok() {
                    break s;
                }
            }
        };
        let label = format!("alphas = {}", spec.alphas.iter().map(Rational::to_string).collect::<Vec<_>>().join(","));
        let mut bad = Vec::new();
        let (c, sigma) = y0_coefficients(&spec, IDENTITY_TERMS + 1);
        if ode_residual(&c, &sigma, &spec, IDENTITY_TERMS) != 0 {
            bad.push("ode y0".to_string());
        }
        for j in 1..=r {
            let (c, sigma) = yj_coefficients(&spec, j, IDENTITY_TERMS + 1);
            if ode_residual(&c, &sigma, &spec, IDENTITY_TERMS) != 0 {
                bad.push(format!("ode y{j}"));
            }
        }
        let (first, second) = derivative_identity_defects_formal(&spec, IDENTITY_TERMS);
        if first != 0 {
            bad.push("first derivative formula".into());
        }
        for (j, d) in second.iter().enumerate() {
            if d.as_ref().is_some_and(|d| *d != 0) {
                bad.push(format!("second derivative formula j={}", j + 1));
            }
        }
        out.push(check(3, format!("r = {r}, {label}"), bad.is_empty(), format!("{IDENTITY_TERMS} terms, defects {bad:?}")));
    }
    out
}

fn mehler_heine(cfg: &RunConfig, ctx: &PrecisionContext) -> Vec<Check> {
    cfg.mh
        .par_iter()
        .map(|e| {
            let label = format!("thm {} {}", crate::harness::theorem_for(&e.family), e.family);
            let exp = match e.experiment() {
                Ok(x) => x,
                Err(err) => return failed(4, label, &err),
            };
            match run_mh_experiment(&exp, &cfg.n_grid, &cfg.z_grid, ctx) {
                Ok(rep) => {
                    let errs: Vec<f64> = rep.sup_errors.iter().map(Float::to_f64).collect();
                    let decreasing = rep.sup_errors.windows(2).all(|w| w[1] < w[0]);
                    let order_ok = rep.estimated_order.is_some_and(|o| (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&o));
                    let mut detail = format!(
                        "sup errors {}; order {}",
                        list(&errs),
                        rep.estimated_order.map(|o| format!("{o:.3}")).unwrap_or_else(|| "none".into())
                    );
                    if !decreasing {
                        detail.push_str("; errors not strictly decreasing");
                    }
                    if !order_ok {
                        detail.push_str(&format!("; order outside [{}, {}]", ORDER_RANGE.0, ORDER_RANGE.1));
                    }
                    if let Some(c) = rep.fitted_constant {
                        detail.push_str(&format!("; fitted constant {:.6}", c.to_f64()));
                    }
                    check(4, label, decreasing && order_ok, detail)
                }
                Err(err) => failed(4, label, &err),
            }
        })
        .collect()
}

/// `z^{-a/2} J_a(2 sqrt z)` for `z > 0`, `1/Gamma(a+1)` at 0.
fn classical_bessel_limit(alpha: &Float, z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    if z.is_zero() {
        return Ok(Float::with_val(bits, alpha + 1u32).gamma().recip());
    }
    let s = Float::with_val(bits, z.sqrt_ref());
    let j = bessel_j_series(alpha, &Float::with_val(bits, &s * 2u32), ctx)?;
    let pw = Float::with_val(bits, s.ln_ref()) * alpha;
    Ok(j * (-pw).exp())
}

/// Errors of `(a+1)_n / (n! n^a)` times the r = 1 scaled values against
/// the classical Bessel limit, over the nonnegative part of the grid.
pub fn reduction_errors(e: &PanelEntry, ns: &[usize], z_grid: &[f64], ctx: &PrecisionContext) -> Result<Vec<f64>> {
    let alpha = match &e.family {
        FamilySpec::JacobiPineiro { alphas, .. } if alphas.len() == 1 => alphas[0].to_float(ctx),
        FamilySpec::MLaguerre2 { alpha, cs } if cs.len() == 1 && cs[0].as_rational().is_some_and(|c| *c == 1) => alpha.to_float(ctx),
        f => return Err(Error::InvalidParameters(format!("{f} is not an r = 1 reduction case"))),
    };
    let exp = e.experiment()?;
    let zs: Vec<Float> = z_grid.iter().filter(|z| **z >= 0.0).map(|z| ctx.float(*z)).collect();
    let limit: Vec<Float> = zs.iter().map(|z| classical_bessel_limit(&alpha, z, ctx)).collect::<Result<_>>()?;
    ns.iter()
        .map(|&n| {
            let (vals, _) = scaled_values(&exp, n, &zs, ctx)?;
            let nf = ctx.float(n as f64);
            let na = Float::with_val(ctx.bits(), nf.ln_ref()) * &alpha;
            let factor = pochhammer(&Float::with_val(ctx.bits(), &alpha + 1u32), n)
                / pochhammer(&ctx.float(1.0), n)
                / na.exp();
            Ok(vals
                .iter()
                .zip(&limit)
                .map(|(v, l)| Float::with_val(ctx.bits(), v * &factor - l).abs().to_f64())
                .fold(0.0, f64::max))
        })
        .collect()
}

fn reductions(cfg: &RunConfig, ctx: &PrecisionContext) -> Vec<Check> {
    let (lo, hi) = (cfg.n_grid[0], *cfg.n_grid.last().expect("nonempty"));
    cfg.reduction
        .iter()
        .map(|e| {
            let label = format!("thm {} {}", crate::harness::theorem_for(&e.family), e.family);
            match reduction_errors(e, &[lo, hi], &cfg.z_grid, ctx) {
                Ok(v) => {
                    let ratio = v[0] / v[1];
                    check(5, label, ratio >= REDUCTION_FACTOR, format!("error n={lo} {}, n={hi} {}, ratio {ratio:.2}", sci(v[0]), sci(v[1])))
                }
                Err(err) => failed(5, label, &err),
            }
        })
        .collect()
}

fn zero_scaling(cfg: &RunConfig, ctx: &PrecisionContext) -> Vec<Check> {
    let ks: Vec<(usize, &PanelEntry)> =
        cfg.zero_scaling.iter().flat_map(|e| (cfg.k_range[0]..=cfg.k_range[1]).map(move |k| (k, e))).collect();
    ks.par_iter()
        .map(|&(k, e)| {
            let label = format!("k = {k} {}", e.family);
            let run = || -> Result<Check> {
                let rep = run_zero_scaling(&e.family, &e.ratios()?, k, &cfg.zero_n_grid, ctx)?;
                let last = *rep.rel_errors.last().expect("nonempty");
                let decreasing = rep.rel_errors.windows(2).all(|w| w[1] < w[0]);
                let mut detail = format!("target {:.10e}; rel errors {}", rep.target.to_f64(), list(&rep.rel_errors));
                if let FamilySpec::MLaguerre2 { alpha, cs } = &e.family {
                    // the alternative normalization (1/2)(j_k/Q)^2, reported only
                    let q = laguerre2_q(&e.ratios()?.unwrap_or_else(|| vec![Rational::from((1, cs.len() as i64)); cs.len()]), cs)
                        .to_float(ctx);
                    let j = bessel_zeros(&alpha.to_float(ctx), k, ctx)?.values[k - 1].clone();
                    let alt = Float::with_val(ctx.bits(), &j / &q).square() / 2u32;
                    let dev = (Float::with_val(ctx.bits(), rep.scaled_zeros.last().expect("nonempty") - &alt).abs() / &alt).to_f64();
                    detail.push_str(&format!("; (j/Q)^2/2 deviation {}", sci(dev)));
                }
                Ok(check(6, label.clone(), last < ZERO_REL_TOL && decreasing, detail))
            };
            run().unwrap_or_else(|err| failed(6, label, &err))
        })
        .collect()
}

/// Lower parameters `a` of the `0F_r(-; a+1; -z)` whose zeros govern a limit.
pub fn limit_alphas(lp: &LimitParams, ctx: &PrecisionContext) -> Vec<Float> {
    let bits = ctx.bits();
    let f = |p: &Param| p.to_float(ctx);
    match lp {
        LimitParams::Angelesco { beta } => {
            let b = f(beta);
            vec![Float::with_val(bits, &b - 1u32) / 2u32, Float::with_val(bits, &b / 2u32)]
        }
        LimitParams::GenBessel { alphas, .. } | LimitParams::MeijerG { nus: alphas } => alphas.iter().map(f).collect(),
        LimitParams::LaguerreII { alpha, .. } | LimitParams::IBessel { nu: alpha, .. } => vec![f(alpha)],
        LimitParams::Sorokin { p, r } => {
            (1..=*r).map(|i| Float::with_val(bits, &f(p) + i as u32) / *r as u32 - 1u32).collect()
        }
        LimitParams::KBessel { alpha, nu } => vec![f(alpha), Float::with_val(bits, &f(alpha) + &f(nu))],
    }
}

fn limit_zeros(cfg: &RunConfig, ctx: &PrecisionContext) -> Vec<Check> {
    cfg.mh
        .par_iter()
        .map(|e| {
            let label = format!("thm {} {}", crate::harness::theorem_for(&e.family), e.family);
            let run = || -> Result<Check> {
                let lp = limit_params(&e.experiment()?)?;
                let alphas = limit_alphas(&lp, ctx);
                let z = genbessel_zeros(&alphas, 5, ctx)?;
                let vals: Vec<f64> = z.values.iter().map(Float::to_f64).collect();
                let positive = z.values.iter().all(|v| *v > 0);
                // brackets of relative width `tol` must not overlap
                let simple = z.values.windows(2).all(|w| {
                    let gap = Float::with_val(ctx.bits(), &w[1] - &w[0]);
                    gap > Float::with_val(ctx.bits(), &w[1] * (2.0 * z.achieved_tolerance))
                });
                let ok = z.len() == 5 && positive && simple;
                Ok(check(7, label.clone(), ok, format!("zeros {}; tolerance {}", list(&vals), sci(z.achieved_tolerance))))
            };
            run().unwrap_or_else(|err| failed(7, label, &err))
        })
        .collect()
}

fn params_to_ratios(v: &[Param]) -> Result<Vec<Rational>> {
    v.iter().map(|p| p.as_rational().cloned().ok_or_else(|| Error::Config(format!("ratio {p} is not rational")))).collect()
}

/// Limit values of both members of a pair on the grid.
pub fn thm4_pair_values(pair: &Thm4Pair, z_grid: &[f64], ctx: &PrecisionContext) -> Result<(Vec<Float>, Vec<Float>)> {
    let eval = |q: &[Param], cs: &[Param]| -> Result<Vec<Float>> {
        let lp = LimitParams::LaguerreII { alpha: pair.alpha.clone(), q: params_to_ratios(q)?, cs: cs.to_vec() };
        z_grid.iter().map(|z| mh_limit_eval(&lp, &ctx.float(*z), ctx)).collect()
    };
    Ok((eval(&pair.q1, &pair.c1)?, eval(&pair.q2, &pair.c2)?))
}

fn thm4_invariance(cfg: &RunConfig, ctx: &PrecisionContext) -> Vec<Check> {
    cfg.thm4_pairs
        .iter()
        .map(|pair| {
            let join = |v: &[Param]| v.iter().map(Param::to_string).collect::<Vec<_>>().join(",");
            let label = format!("alpha = {}, (q, c) = ({}; {}) / ({}; {})", pair.alpha, join(&pair.q1), join(&pair.c1), join(&pair.q2), join(&pair.c2));
            let run = || -> Result<Check> {
                let q1 = laguerre2_q(&params_to_ratios(&pair.q1)?, &pair.c1);
                let q2 = laguerre2_q(&params_to_ratios(&pair.q2)?, &pair.c2);
                let same_q = (q1.to_f64() - q2.to_f64()).abs() <= 1e-15 * q1.to_f64().abs();
                let (a, b) = thm4_pair_values(pair, &cfg.z_grid, ctx)?;
                let differ = a.iter().zip(&b).filter(|(x, y)| x != y).count();
                Ok(check(8, label.clone(), same_q && differ == 0, format!("Q = {q1} / {q2}; {differ} of {} grid values differ", a.len())))
            };
            run().unwrap_or_else(|err| failed(8, label, &err))
        })
        .collect()
}

/// Largest relative pointwise difference on the grid between the Meijer-G
/// `r = 2` and the matching K-Bessel polynomials of degree `n`.
pub fn meijer_kbessel_diff(nus: &[Param; 2], n: usize, z_grid: &[f64], ctx: &PrecisionContext) -> Result<f64> {
    let mg = FamilySpec::MeijerGMop { nus: nus.to_vec() };
    let kb = FamilySpec::KBesselMop { alpha: nus[1].clone(), nu: nus[0].sub(&nus[1]) };
    let idx = MultiIndex::new(vec![n])?;
    let (a, b) = if mg.params_exact() {
        (construct_mop::<Rational>(&mg, &idx, ctx)?.poly.to_float(ctx), construct_mop::<Rational>(&kb, &idx, ctx)?.poly.to_float(ctx))
    } else {
        (construct_mop::<Float>(&mg, &idx, ctx)?.poly, construct_mop::<Float>(&kb, &idx, ctx)?.poly)
    };
    let mut worst = 0f64;
    for z in z_grid {
        let x = ctx.float(*z);
        let (va, vb) = (a.eval(&x), b.eval(&x));
        let scale = Float::with_val(ctx.bits(), vb.abs_ref()).max(&ctx.float(1.0));
        worst = worst.max((Float::with_val(ctx.bits(), &va - &vb).abs() / scale).to_f64());
    }
    Ok(worst)
}

fn meijer_kbessel(cfg: &RunConfig, ctx: &PrecisionContext) -> Vec<Check> {
    cfg.meijer_pairs
        .par_iter()
        .map(|nus| {
            let label = format!("nus = {}, {}", nus[0], nus[1]);
            let run = || -> Result<f64> {
                let mut worst = 0f64;
                for n in 1..=10 {
                    worst = worst.max(meijer_kbessel_diff(nus, n, &cfg.z_grid, ctx)?);
                }
                Ok(worst)
            };
            match run() {
                Ok(d) => check(9, label, d <= MEIJER_TOL, format!("n <= 10, max relative difference {}", sci(d))),
                Err(err) => failed(9, label, &err),
            }
        })
        .collect()
}

/// `|n^{-l/2} d_l(n) - limit|`.
pub fn d_ell_error(alpha: &Param, gamma: &Param, n: usize, ell: usize, ctx: &PrecisionContext) -> Float {
    let bits = ctx.bits();
    let d = match (alpha.as_rational(), gamma.as_rational()) {
        (Some(a), Some(g)) => Float::with_val(bits, &d_ell::<Rational>(n, a, g, ell)),
        _ => d_ell::<Float>(n, &alpha.to_float(ctx), &gamma.to_float(ctx), ell),
    };
    let scale = Float::with_val(bits, ctx.float(n as f64).ln() * (ell as f64 / 2.0)).exp();
    Float::with_val(bits, d / scale - ctx.float_from(&d_ell_limit(ell))).abs()
}

fn angelesco_d(cfg: &RunConfig, ctx: &PrecisionContext) -> Vec<Check> {
    let mut out = Vec::new();
    for [a, g] in &cfg.angelesco_d {
        for ell in 2..=4 {
            let e1 = d_ell_error(a, g, 100, ell, ctx).to_f64();
            let e2 = d_ell_error(a, g, 10_000, ell, ctx).to_f64();
            let ratio = e1 / e2;
            out.push(check(
                10,
                format!("alpha = {a}, gamma = {g}, l = {ell}"),
                ratio >= D_ELL_FACTOR,
                format!("error n=100 {}, n=10000 {}, ratio {ratio:.2}", sci(e1), sci(e2)),
            ));
        }
    }
    out
}
