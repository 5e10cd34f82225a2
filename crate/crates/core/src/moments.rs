//! Moment oracle: builds a multiple orthogonal polynomial directly from
//! the moments of its weights by solving the orthogonality system.
//!
//! Moments are always normalized, `m_{j,k} / m_{j,0}`, so the Gamma factors
//! cancel and rational parameters give rational moments. The Sorokin ray
//! moments carry phases `w^{jk}` and a transcendental factor per residue
//! class `k mod r`; that system is solved over Q(w) with the class factors
//! kept formal.

use rug::{Float, Rational};

use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::hypergeom::{eval_pfq, HypSeriesSpec};
use crate::linsolve::{bareiss_solve, Solve};
use crate::poly::{BigPoly, MultiIndex};
use crate::precision::{gen_binomial, pochhammer, PrecisionContext, Scalar, MAX_DIGITS};

/// Output of [`construct_mop`].
#[derive(Clone, Debug)]
pub struct MopResult<T> {
    /// Monic, degree `|n|` (`rn` for Sorokin).
    pub poly: BigPoly<T>,
    /// `log10` of the infinity-norm condition estimate (real mode only).
    pub cond_log10: Option<f64>,
    /// Decimal digits of the working precision that produced `poly`.
    pub working_digits: u32,
}

/// `(a)_k / (b)_k` for `k < len`.
fn poch_ratio_seq<T: Scalar>(a: &T, b: &T, len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len);
    let mut v = a.one_like();
    for k in 0..len {
        out.push(v.clone());
        let kk = a.int_like(k as i64);
        v = v * (a.clone() + &kk) / (b.clone() + &kk);
    }
    out
}

fn poch_seq<T: Scalar>(a: &T, len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len);
    let mut v = a.one_like();
    for k in 0..len {
        out.push(v.clone());
        v *= a.clone() + &a.int_like(k as i64);
    }
    out
}

/// `2F1(-a, g+1; k+b+g+2; 1/2)`, the Pfaff-transformed Angelesco factor.
fn angelesco_pfaff<T: Scalar>(a: &T, b: &T, g: &T, k: usize, ctx: &PrecisionContext) -> Result<T> {
    let one = T::from_int(1, ctx);
    let spec = HypSeriesSpec::new(
        vec![-a.clone(), g.clone() + &one],
        vec![b.clone() + g + &one.int_like(k as i64 + 2)],
    );
    let half = one.clone() / one.int_like(2);
    Ok(eval_pfq(&spec, &half, ctx)?.value)
}

/// Normalized moments `m_{j,k}/m_{j,0}` for `k < len`. Not defined for
/// the Sorokin family, whose moments are complex (see
/// [`sorokin_class_factor`]).
pub fn normalized_moments<T: Scalar>(fam: &FamilySpec, j: usize, len: usize, ctx: &PrecisionContext) -> Result<Vec<T>> {
    fam.validate()?;
    if j >= fam.weights() {
        return Err(Error::InvalidParameters(format!("weight index {j} out of range")));
    }
    if T::EXACT && !fam.moments_exact() {
        return Err(Error::InvalidParameters(format!("moments of {fam} are not rational")));
    }
    let p = |x: &crate::precision::Param| T::from_param(x, ctx);
    let one = T::from_int(1, ctx);
    let two = one.int_like(2);
    Ok(match fam {
        FamilySpec::JacobiPineiro { alphas, beta } => {
            let a = p(&alphas[j])?;
            let b = p(beta)?;
            poch_ratio_seq(&(a.clone() + &one), &(a + &b + &two), len)
        }
        FamilySpec::MLaguerre1 { alphas } => poch_seq(&(p(&alphas[j])? + &one), len),
        FamilySpec::MLaguerre2 { alpha, cs } => {
            let c = p(&cs[j])?;
            let mut out = poch_seq(&(p(alpha)? + &one), len);
            let mut cp = one.clone();
            for v in out.iter_mut() {
                *v /= &cp;
                cp *= &c;
            }
            out
        }
        FamilySpec::JacobiAngelesco { alpha, beta, gamma } => {
            // j = 0 is [-1, 0], j = 1 is [0, 1]; the left interval is the
            // right one reflected with alpha and gamma swapped.
            let (a, g) = if j == 0 { (p(gamma)?, p(alpha)?) } else { (p(alpha)?, p(gamma)?) };
            let b = p(beta)?;
            let base = poch_ratio_seq(&(b.clone() + &one), &(b.clone() + &g + &two), len);
            let f0 = angelesco_pfaff(&a, &b, &g, 0, ctx)?;
            let mut out = Vec::with_capacity(len);
            for (k, v) in base.into_iter().enumerate() {
                let v = v * angelesco_pfaff(&a, &b, &g, k, ctx)? / &f0;
                out.push(if j == 0 && k % 2 == 1 { -v } else { v });
            }
            out
        }
        FamilySpec::KBesselMop { alpha, nu } => {
            let a = p(alpha)?;
            let v = p(nu)?;
            let shift = one.int_like(j as i64 + 1);
            let x = poch_seq(&(a.clone() + &one), len);
            let y = poch_seq(&(a + &v + &shift), len);
            x.into_iter().zip(y).map(|(x, y)| x * y).collect()
        }
        FamilySpec::IBesselMop { nu, c } => {
            let v = p(nu)? + &one.int_like(j as i64);
            let c = p(c)?;
            ibessel_moments(&v, &c, len)
        }
        FamilySpec::MeijerGMop { nus } => {
            let vs = nus.iter().map(p).collect::<Result<Vec<T>>>()?;
            let mut out = vec![one.clone(); len];
            for v in &vs {
                for (o, f) in out.iter_mut().zip(poch_seq(&(v.clone() + &one), len)) {
                    *o *= f;
                }
            }
            // (k+1+v_1)_j / (1+v_1)_j
            let v1 = vs[0].clone() + &one;
            let base = pochhammer(&v1, j);
            for (k, o) in out.iter_mut().enumerate() {
                *o *= pochhammer(&(v1.clone() + &one.int_like(k as i64)), j) / &base;
            }
            out
        }
        FamilySpec::SorokinLaguerre { .. } => {
            return Err(Error::InvalidParameters("Sorokin moments are complex; use the class form".into()))
        }
    })
}

/// Normalized moments of `x^{v/2} e^{-cx} I_v(2 sqrt x)` in finite form:
/// `c^{-k} (v+1)_k sum_i C(k,i) c^{-i} / (v+1)_i`.
fn ibessel_moments<T: Scalar>(v: &T, c: &T, len: usize) -> Vec<T> {
    let one = v.one_like();
    let v1 = v.clone() + &one;
    let cinv = one.clone() / c;
    let inv_poch: Vec<T> = poch_seq(&v1, len).into_iter().map(|x| one.clone() / x).collect();
    let mut cp = vec![one.clone()];
    for i in 1..len {
        let last = cp[i - 1].clone() * &cinv;
        cp.push(last);
    }
    (0..len)
        .map(|k| {
            let mut s = one.zero_like();
            for i in 0..=k {
                s += gen_binomial(&one.int_like(k as i64), i) * &cp[i] * &inv_poch[i];
            }
            s * &cp[k] * pochhammer(&v1, k)
        })
        .collect()
}

/// `m_{j,k}` for a single `(j, k)`.
pub fn moment<T: Scalar>(fam: &FamilySpec, j: usize, k: usize, ctx: &PrecisionContext) -> Result<T> {
    Ok(normalized_moments::<T>(fam, j, k + 1, ctx)?.pop().expect("nonempty"))
}

/// Rational part of the normalized Sorokin moment of index `l`:
/// `m_{j,l} = w^{jl} R_l g_{l mod r}` with `R_l = ((l mod r + p + 1)/r)_{floor(l/r)}`
/// and `g_s = Gamma((s+p+1)/r) / Gamma((p+1)/r)` kept formal.
pub fn sorokin_class_factor<T: Scalar>(p: &T, r: usize, l: usize) -> T {
    let one = p.one_like();
    let base = (p.clone() + &one.int_like((l % r) as i64 + 1)) / one.int_like(r as i64);
    pochhammer(&base, l / r)
}

/// `g_s` numerically, to turn class components back into values.
pub fn sorokin_class_gamma(p: &Float, r: usize, s: usize, ctx: &PrecisionContext) -> Float {
    let rf = ctx.float(r as f64);
    let a = Float::with_val(ctx.bits(), p + (s as u32 + 1)) / &rf;
    let b = Float::with_val(ctx.bits(), p + 1u32) / &rf;
    a.gamma() / b.gamma()
}

fn sorokin_params<T: Scalar>(fam: &FamilySpec, ctx: &PrecisionContext) -> Result<Option<(T, usize)>> {
    match fam {
        FamilySpec::SorokinLaguerre { p, r } => Ok(Some((T::from_param(p, ctx)?, *r))),
        _ => Ok(None),
    }
}

/// Square moment system `A a = b` for the monic polynomial of degree `N`.
fn moment_system<T: Scalar>(
    fam: &FamilySpec,
    idx: &MultiIndex,
    ctx: &PrecisionContext,
) -> Result<(Vec<Vec<T>>, Vec<T>)> {
    let counts = fam.conditions(idx);
    let deg = fam.degree(idx);
    let mut rows = Vec::with_capacity(deg);
    let mut rhs = Vec::with_capacity(deg);
    if let Some((p, r)) = sorokin_params::<T>(fam, ctx)? {
        // class-split real rows: for each k < n and class s,
        // sum_{k+i = s mod r} a_i R_{k+i} = 0
        let n = idx.total();
        let rl: Vec<T> = (0..n + deg).map(|l| sorokin_class_factor(&p, r, l)).collect();
        for k in 0..n {
            for s in 0..r {
                let mut row = vec![p.zero_like(); deg];
                let mut b = p.zero_like();
                for i in 0..=deg {
                    if (k + i) % r == s {
                        if i == deg {
                            b = -rl[k + i].clone();
                        } else {
                            row[i] = rl[k + i].clone();
                        }
                    }
                }
                rows.push(row);
                rhs.push(b);
            }
        }
        return Ok((rows, rhs));
    }
    for (j, &cnt) in counts.iter().enumerate() {
        if cnt == 0 {
            continue;
        }
        let m = normalized_moments::<T>(fam, j, cnt + deg, ctx)?;
        for k in 0..cnt {
            rows.push(m[k..k + deg].to_vec());
            rhs.push(-m[k + deg].clone());
        }
    }
    Ok((rows, rhs))
}

fn solve_once<T: Solve>(fam: &FamilySpec, idx: &MultiIndex, ctx: &PrecisionContext) -> Result<MopResult<T>> {
    let deg = fam.degree(idx);
    let one = T::from_int(1, ctx);
    if deg == 0 {
        return Ok(MopResult { poly: BigPoly::constant(one), cond_log10: None, working_digits: ctx.digits() });
    }
    let (a, b) = moment_system::<T>(fam, idx, ctx)?;
    if a.len() != deg {
        return Err(Error::SingularMomentMatrix(format!("{} conditions for degree {deg}", a.len())));
    }
    let (mut coeffs, cond) = T::solve_system(&a, &b)?;
    coeffs.push(one);
    Ok(MopResult { poly: BigPoly::new(coeffs), cond_log10: cond, working_digits: ctx.digits() })
}

fn agree(a: &BigPoly<Float>, b: &BigPoly<Float>, eps: &Float) -> bool {
    if a.coeffs().len() != b.coeffs().len() {
        return false;
    }
    let norm = b.coeffs().iter().fold(Float::with_val(eps.prec(), 0), |m, c| m.max(&c.clone().abs()));
    let floor = Float::with_val(eps.prec(), eps * &norm) * eps;
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| {
        let d = Float::with_val(eps.prec(), x - y).abs();
        let scale = Float::with_val(eps.prec(), y.clone().abs() * eps);
        d <= scale.max(&floor)
    })
}

/// Builds the monic multiple orthogonal polynomial for `idx` from moments.
///
/// Rational mode is exact (Sorokin over Q(w)). In real mode the system is
/// re-solved with doubled working digits until two solutions agree to
/// `ctx.eps()`, so the result is accurate despite ill-conditioning.
pub fn construct_mop<T: Solve>(fam: &FamilySpec, idx: &MultiIndex, ctx: &PrecisionContext) -> Result<MopResult<T>> {
    fam.validate()?;
    let idx = fam.canonical_index(idx)?;
    if T::EXACT {
        if let FamilySpec::SorokinLaguerre { p, r } = fam {
            let p = p.as_rational().ok_or_else(|| Error::InvalidParameters("p is not rational".into()))?;
            let poly = sorokin_exact(p, *r, idx.total())?;
            let coeffs = poly.coeffs().iter().map(|c| T::from_rational(c, ctx)).collect();
            return Ok(MopResult { poly: BigPoly::new(coeffs), cond_log10: None, working_digits: ctx.digits() });
        }
        return solve_once(fam, &idx, ctx);
    }
    let eps = ctx.eps_float();
    let mut work = ctx.refined(ctx.guard());
    // a pivot lost to cancellation is not evidence of singularity until MAX_DIGITS
    let mut prev = loop {
        match solve_once::<Float>(fam, &idx, &work) {
            Err(Error::SingularMomentMatrix(_)) if work.digits() < MAX_DIGITS => work = work.refined(work.digits()),
            r => break r?,
        }
    };
    loop {
        if work.digits() >= MAX_DIGITS {
            break;
        }
        work = work.refined(work.digits());
        let cur = match solve_once::<Float>(fam, &idx, &work) {
            Err(Error::SingularMomentMatrix(_)) if work.digits() < MAX_DIGITS => continue,
            r => r?,
        };
        let done = agree(&prev.poly, &cur.poly, &eps);
        prev = cur;
        if done {
            break;
        }
    }
    let coeffs = prev.poly.coeffs().iter().map(|c| T::from_float(c, ctx)).collect();
    Ok(MopResult { poly: BigPoly::new(coeffs), cond_log10: prev.cond_log10, working_digits: prev.working_digits })
}

/// Sorokin polynomial over Q(w): one row per ray `j`, condition `k` and
/// class `s`, with the class factors `g_s` formal. The system is
/// rectangular and checked for consistency; the solution must be rational.
pub fn sorokin_exact(p: &Rational, r: usize, n: usize) -> Result<BigPoly<Rational>> {
    let deg = r * n;
    if deg == 0 {
        return Ok(BigPoly::constant(Rational::from(1)));
    }
    let field = CyclotomicField::new(r);
    let rl: Vec<Rational> = (0..n + deg).map(|l| sorokin_class_factor(p, r, l)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..r {
        for k in 0..n {
            for s in 0..r {
                let mut row = vec![Cyclotomic::zero(&field); deg];
                let mut b = Cyclotomic::zero(&field);
                for i in 0..=deg {
                    let l = k + i;
                    if l % r != s {
                        continue;
                    }
                    let v = Cyclotomic::root_power(&field, (j * l) % r).scale(&rl[l]);
                    if i == deg {
                        b = v.neg();
                    } else {
                        row[i] = v;
                    }
                }
                rows.push(row);
                rhs.push(b);
            }
        }
    }
    let sol = bareiss_solve(&rows, &rhs)?;
    let mut coeffs = Vec::with_capacity(deg + 1);
    for c in sol {
        coeffs.push(c.as_rational().ok_or_else(|| {
            Error::SingularMomentMatrix("Sorokin solution left the rationals".into())
        })?);
    }
    coeffs.push(Rational::from(1));
    Ok(BigPoly::new(coeffs))
}

/// Max `|sum_i coeff_i m_{j,k+i}|` over the required `(j, k)`, with
/// normalized moments. For Sorokin every Q(w) class component counts
/// separately.
pub fn orthogonality_residual<T: Scalar>(
    fam: &FamilySpec,
    idx: &MultiIndex,
    poly: &BigPoly<T>,
    ctx: &PrecisionContext,
) -> Result<T> {
    let idx = fam.canonical_index(idx)?;
    let counts = fam.conditions(&idx);
    let len = poly.coeffs().len();
    let mut worst = T::from_int(0, ctx);
    if let Some((p, r)) = sorokin_params::<T>(fam, ctx)? {
        // the phase of ray j multiplies the class-s component by w^{js},
        // so vanishing of every class component is the full condition
        let n = idx.total();
        for k in 0..n {
            for s in 0..r {
                let mut acc = T::from_int(0, ctx);
                for (i, c) in poly.coeffs().iter().enumerate() {
                    if (k + i) % r == s {
                        acc += c.clone() * sorokin_class_factor(&p, r, k + i);
                    }
                }
                let a = acc.abs_val();
                if a > worst {
                    worst = a;
                }
            }
        }
        return Ok(worst);
    }
    for (j, &cnt) in counts.iter().enumerate() {
        if cnt == 0 {
            continue;
        }
        let m = normalized_moments::<T>(fam, j, cnt + len, ctx)?;
        for k in 0..cnt {
            let mut acc = T::from_int(0, ctx);
            for (i, c) in poly.coeffs().iter().enumerate() {
                acc += c.clone() * &m[k + i];
            }
            let a = acc.abs_val();
            if a > worst {
                worst = a;
            }
        }
    }
    Ok(worst)
}

/// Sorokin residual over Q(w) with one row per ray, as used by the exact
/// construction: returns true when every `(j, k, s)` component vanishes.
pub fn sorokin_exact_residual_zero(p: &Rational, r: usize, n: usize, poly: &BigPoly<Rational>) -> bool {
    let field = CyclotomicField::new(r);
    for j in 0..r {
        for k in 0..n {
            for s in 0..r {
                let mut acc = Cyclotomic::zero(&field);
                for (i, c) in poly.coeffs().iter().enumerate() {
                    let l = k + i;
                    if l % r == s {
                        let f = Rational::from(c * &sorokin_class_factor(p, r, l));
                        acc = acc.add(&Cyclotomic::root_power(&field, (j * l) % r).scale(&f));
                    }
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}
