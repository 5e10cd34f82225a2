//! The seven families of multiple orthogonal polynomials, their explicit
//! representations, and the limit functions of their hard-edge scalings.
//!
//! Every family with an explicit formula exposes a *normalized* polynomial
//! `N(x)` (the quantity whose scaled limit is a generalized Bessel
//! function) and a factor `kappa` with `P = kappa N` in the customary
//! normalization:
//!
//! | family | `N(x)` | `kappa` |
//! |---|---|---|
//! | Jacobi-Angelesco | `(1+x)^-a (1-x)^-g sum_l d_l(n) (-1)^l (n+b+1)_l/(b+1)_l x^l` | `(-1)^n (b+1)_n` |
//! | Jacobi-Pineiro | `(1-x)^-b (r+1)F_r(-|n|-b, a_j+n_j+1; a_j+1; x)` | `(-1)^|n| prod (a_j+1)_{n_j} / prod (|n|+a_j+b+1)_{n_j}` |
//! | Laguerre I | `e^x rF_r(a_j+n_j+1; a_j+1; -x)` | `(-1)^|n| prod (a_j+1)_{n_j}` |
//! | Laguerre II | `sum_m (-1)^m [t^m] prod (1+c_j t)^{n_j} x^m / (a+1)_m` | `(-1)^|n| (a+1)_|n| / prod c_j^{n_j}` |
//! | Sorokin | `L_n(x, p)` | `1` |
//! | K-Bessel | `1F2(-n; a+1, a+v+1; x)` | `(-1)^n (a+1)_n (a+v+1)_n` |
//! | Meijer-G | `1F_r(-n; v_j+1; x)` | `(-1)^n prod (v_j+1)_n` |
//!
//! The I-Bessel family has no explicit formula and is built from moments.
//! Infinite factors such as `(1-x)^-b` are expanded as power series and
//! the Cauchy product is cut at the known degree, which is exact.

use std::fmt;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergeom::{eval_pfq, pfq_coefficients, HypSeriesSpec};
use crate::poly::{binomial_series, series_mul, BigPoly, MultiIndex};
use crate::precision::{gen_binomial, pochhammer, Complex, Param, PrecisionContext, Scalar};

/// Distance kept from `|x| = 1` by the Angelesco series evaluator.
pub const ANGELESCO_MARGIN: f64 = 1e-3;

/// One of the families together with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    /// Weights `(1+x)^a |x|^b (1-x)^g` on `[-1,0]` and `[0,1]`.
    JacobiAngelesco { alpha: Param, beta: Param, gamma: Param },
    /// Weights `x^{a_j} (1-x)^b` on `[0,1]`.
    JacobiPineiro { alphas: Vec<Param>, beta: Param },
    /// Weights `x^{a_j} e^{-x}` on `[0,inf)`.
    #[serde(rename = "mlag1")]
    MLaguerre1 { alphas: Vec<Param> },
    /// Weights `x^a e^{-c_j x}` on `[0,inf)`.
    #[serde(rename = "mlag2")]
    MLaguerre2 { alpha: Param, cs: Vec<Param> },
    /// Weight `x^p e^{-x^r}` on the rays `w^j [0,inf)`.
    #[serde(rename = "sorokin")]
    SorokinLaguerre { p: Param, r: usize },
    /// Weights `x^{a+v/2} K_v(2 sqrt x)` and `x^{a+(v+1)/2} K_{v+1}(2 sqrt x)`.
    #[serde(rename = "kbessel")]
    KBesselMop { alpha: Param, nu: Param },
    /// Weights `x^{v/2} e^{-cx} I_v(2 sqrt x)` and `x^{(v+1)/2} e^{-cx} I_{v+1}(2 sqrt x)`.
    #[serde(rename = "ibessel")]
    IBesselMop { nu: Param, c: Param },
    /// Meijer G-function weights with Mellin transform `(s+v_1)_j prod Gamma(s+v_k)`.
    #[serde(rename = "meijerg")]
    MeijerGMop { nus: Vec<Param> },
}

/// Where the orthogonality weights live.
#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    /// Bounded interval.
    Interval(f64, f64),
    /// `[0, inf)`.
    HalfLine,
    /// `r` rays `w^j [0, inf)` in the complex plane.
    Rays(usize),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Param]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        match self {
            FamilySpec::JacobiAngelesco { alpha, beta, gamma } => {
                write!(f, "jacobiangelesco(alpha={alpha},beta={beta},gamma={gamma})")
            }
            FamilySpec::JacobiPineiro { alphas, beta } => {
                write!(f, "jacobipineiro(alphas=[{}],beta={beta})", list(alphas))
            }
            FamilySpec::MLaguerre1 { alphas } => write!(f, "mlag1(alphas=[{}])", list(alphas)),
            FamilySpec::MLaguerre2 { alpha, cs } => write!(f, "mlag2(alpha={alpha},cs=[{}])", list(cs)),
            FamilySpec::SorokinLaguerre { p, r } => write!(f, "sorokin(p={p},r={r})"),
            FamilySpec::KBesselMop { alpha, nu } => write!(f, "kbessel(alpha={alpha},nu={nu})"),
            FamilySpec::IBesselMop { nu, c } => write!(f, "ibessel(nu={nu},c={c})"),
            FamilySpec::MeijerGMop { nus } => write!(f, "meijerg(nus=[{}])", list(nus)),
        }
    }
}

fn gt_minus_one(p: &Param, name: &str) -> Result<()> {
    let ok = match p {
        Param::Exact(q) => *q > -1,
        Param::Real { value, .. } => *value > -1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NonIntegrable(format!("{name} = {p} must exceed -1")))
    }
}

fn positive(p: &Param, name: &str) -> Result<()> {
    if p.cmp_int(0) == std::cmp::Ordering::Greater {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("{name} = {p} must be positive")))
    }
}

/// Rejects `a_i - a_j` integral for `i != j`.
fn check_distinct_mod_z(alphas: &[Param]) -> Result<()> {
    for i in 0..alphas.len() {
        for j in i + 1..alphas.len() {
            let d = alphas[i].sub(&alphas[j]);
            let integral = match &d {
                Param::Exact(q) => *q.denom() == 1,
                Param::Real { value, .. } => {
                    let r = value.clone().round();
                    Float::with_val(value.prec(), value - &r).abs() < 1e-100
                }
            };
            if integral {
                return Err(Error::DegenerateParameters(format!(
                    "alpha_{} - alpha_{} = {} is an integer",
                    i + 1,
                    j + 1,
                    d
                )));
            }
        }
    }
    Ok(())
}

fn is_nonneg_integer(p: &Param) -> bool {
    p.is_integer() && p.cmp_int(0) != std::cmp::Ordering::Less
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::JacobiAngelesco { .. } => "jacobiangelesco",
            FamilySpec::JacobiPineiro { .. } => "jacobipineiro",
            FamilySpec::MLaguerre1 { .. } => "mlag1",
            FamilySpec::MLaguerre2 { .. } => "mlag2",
            FamilySpec::SorokinLaguerre { .. } => "sorokin",
            FamilySpec::KBesselMop { .. } => "kbessel",
            FamilySpec::IBesselMop { .. } => "ibessel",
            FamilySpec::MeijerGMop { .. } => "meijerg",
        }
    }

    pub fn params(&self) -> Vec<&Param> {
        match self {
            FamilySpec::JacobiAngelesco { alpha, beta, gamma } => vec![alpha, beta, gamma],
            FamilySpec::JacobiPineiro { alphas, beta } => alphas.iter().chain(std::iter::once(beta)).collect(),
            FamilySpec::MLaguerre1 { alphas } => alphas.iter().collect(),
            FamilySpec::MLaguerre2 { alpha, cs } => std::iter::once(alpha).chain(cs.iter()).collect(),
            FamilySpec::SorokinLaguerre { p, .. } => vec![p],
            FamilySpec::KBesselMop { alpha, nu } => vec![alpha, nu],
            FamilySpec::IBesselMop { nu, c } => vec![nu, c],
            FamilySpec::MeijerGMop { nus } => nus.iter().collect(),
        }
    }

    /// All parameters rational.
    pub fn params_exact(&self) -> bool {
        self.params().into_iter().all(Param::is_exact)
    }

    /// Whether moments (and hence the moment-built polynomial) are
    /// rational. Angelesco moments are rational only for integer `a, g >= 0`.
    pub fn moments_exact(&self) -> bool {
        match self {
            FamilySpec::JacobiAngelesco { alpha, gamma, .. } => {
                self.params_exact() && is_nonneg_integer(alpha) && is_nonneg_integer(gamma)
            }
            _ => self.params_exact(),
        }
    }

    /// Number of weights.
    pub fn weights(&self) -> usize {
        match self {
            FamilySpec::JacobiAngelesco { .. } => 2,
            FamilySpec::JacobiPineiro { alphas, .. } | FamilySpec::MLaguerre1 { alphas } => alphas.len(),
            FamilySpec::MLaguerre2 { cs, .. } => cs.len(),
            FamilySpec::SorokinLaguerre { r, .. } => *r,
            FamilySpec::KBesselMop { .. } | FamilySpec::IBesselMop { .. } => 2,
            FamilySpec::MeijerGMop { nus } => nus.len(),
        }
    }

    pub fn support(&self) -> Support {
        match self {
            FamilySpec::JacobiAngelesco { .. } => Support::Interval(-1.0, 1.0),
            FamilySpec::JacobiPineiro { .. } => Support::Interval(0.0, 1.0),
            FamilySpec::SorokinLaguerre { r, .. } => Support::Rays(*r),
            _ => Support::HalfLine,
        }
    }

    /// Whether the index is a single degree `n` rather than a vector.
    pub fn scalar_index(&self) -> bool {
        matches!(
            self,
            FamilySpec::SorokinLaguerre { .. }
                | FamilySpec::KBesselMop { .. }
                | FamilySpec::IBesselMop { .. }
                | FamilySpec::MeijerGMop { .. }
        )
    }

    pub fn has_explicit_formula(&self) -> bool {
        !matches!(self, FamilySpec::IBesselMop { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::JacobiAngelesco { alpha, beta, gamma } => {
                gt_minus_one(alpha, "alpha")?;
                gt_minus_one(beta, "beta")?;
                gt_minus_one(gamma, "gamma")
            }
            FamilySpec::JacobiPineiro { alphas, beta } => {
                if alphas.is_empty() {
                    return Err(Error::InvalidParameters("at least one alpha required".into()));
                }
                for (j, a) in alphas.iter().enumerate() {
                    gt_minus_one(a, &format!("alpha_{}", j + 1))?;
                }
                gt_minus_one(beta, "beta")?;
                check_distinct_mod_z(alphas)
            }
            FamilySpec::MLaguerre1 { alphas } => {
                if alphas.is_empty() {
                    return Err(Error::InvalidParameters("at least one alpha required".into()));
                }
                for (j, a) in alphas.iter().enumerate() {
                    gt_minus_one(a, &format!("alpha_{}", j + 1))?;
                }
                check_distinct_mod_z(alphas)
            }
            FamilySpec::MLaguerre2 { alpha, cs } => {
                gt_minus_one(alpha, "alpha")?;
                if cs.is_empty() {
                    return Err(Error::InvalidParameters("at least one c required".into()));
                }
                for (j, c) in cs.iter().enumerate() {
                    positive(c, &format!("c_{}", j + 1))?;
                    for d in &cs[..j] {
                        if d == c {
                            return Err(Error::InvalidParameters(format!("c values must be distinct, {c} repeats")));
                        }
                    }
                }
                Ok(())
            }
            FamilySpec::SorokinLaguerre { p, r } => {
                if *r == 0 {
                    return Err(Error::InvalidParameters("r must be at least 1".into()));
                }
                gt_minus_one(p, "p")
            }
            FamilySpec::KBesselMop { alpha, nu } => {
                gt_minus_one(alpha, "alpha")?;
                if nu.cmp_int(0) == std::cmp::Ordering::Less {
                    return Err(Error::InvalidParameters(format!("nu = {nu} must be nonnegative")));
                }
                Ok(())
            }
            FamilySpec::IBesselMop { nu, c } => {
                gt_minus_one(nu, "nu")?;
                positive(c, "c")
            }
            FamilySpec::MeijerGMop { nus } => {
                if nus.is_empty() {
                    return Err(Error::InvalidParameters("at least one nu required".into()));
                }
                for (j, v) in nus.iter().enumerate() {
                    gt_minus_one(v, &format!("nu_{}", j + 1))?;
                }
                Ok(())
            }
        }
    }

    /// Expands a user index into the canonical multi-index: `[n, n]` for
    /// Angelesco given `[n]`, `[n]` for the scalar-index families.
    pub fn canonical_index(&self, idx: &MultiIndex) -> Result<MultiIndex> {
        let parts = idx.parts();
        match self {
            FamilySpec::JacobiAngelesco { .. } => match parts {
                [n] => MultiIndex::new(vec![*n, *n]),
                [_, _] => Ok(idx.clone()),
                _ => Err(Error::InvalidParameters("Angelesco index is n or (n, m)".into())),
            },
            _ if self.scalar_index() => match parts {
                [_] => Ok(idx.clone()),
                _ => Err(Error::InvalidParameters(format!("{} takes a single degree n", self.name()))),
            },
            _ => {
                if parts.len() == self.weights() {
                    Ok(idx.clone())
                } else if parts.len() == 1 {
                    Ok(MultiIndex::diagonal(parts[0], self.weights()))
                } else {
                    Err(Error::InvalidParameters(format!(
                        "multi-index has {} parts but the family has {} weights",
                        parts.len(),
                        self.weights()
                    )))
                }
            }
        }
    }

    /// Polynomial degree for a canonical index.
    pub fn degree(&self, idx: &MultiIndex) -> usize {
        match self {
            FamilySpec::SorokinLaguerre { r, .. } => r * idx.total(),
            _ => idx.total(),
        }
    }

    /// Orthogonality conditions per weight for a canonical index.
    pub fn conditions(&self, idx: &MultiIndex) -> Vec<usize> {
        match self {
            FamilySpec::KBesselMop { .. } | FamilySpec::IBesselMop { .. } => {
                let n = idx.total();
                vec![n.div_ceil(2), n / 2]
            }
            FamilySpec::MeijerGMop { nus } => {
                let m = idx.total();
                let r = nus.len();
                (0..r).map(|j| if m > j { (m - j).div_ceil(r) } else { 0 }).collect()
            }
            FamilySpec::SorokinLaguerre { r, .. } => vec![idx.total(); *r],
            _ => idx.parts().to_vec(),
        }
    }

    /// The `kappa` with `P = kappa N` (see the module table).
    pub fn normalization<T: Scalar>(&self, idx: &MultiIndex, ctx: &PrecisionContext) -> Result<T> {
        let idx = self.canonical_index(idx)?;
        let one = T::from_int(1, ctx);
        let sign = |m: usize| if m % 2 == 0 { one.clone() } else { -one.clone() };
        let total = idx.total();
        Ok(match self {
            FamilySpec::JacobiAngelesco { beta, .. } => {
                let b = T::from_param(beta, ctx)?;
                let n = idx.parts()[0];
                sign(n) * pochhammer(&(b + &one), n)
            }
            FamilySpec::JacobiPineiro { alphas, beta } => {
                let b = T::from_param(beta, ctx)?;
                let mut k = sign(total);
                for (a, &nj) in alphas.iter().zip(idx.parts()) {
                    let a = T::from_param(a, ctx)?;
                    k *= pochhammer(&(a.clone() + &one), nj);
                    k /= pochhammer(&(one.int_like(total as i64) + &a + &b + &one), nj);
                }
                k
            }
            FamilySpec::MLaguerre1 { alphas } => {
                let mut k = sign(total);
                for (a, &nj) in alphas.iter().zip(idx.parts()) {
                    k *= pochhammer(&(T::from_param(a, ctx)? + &one), nj);
                }
                k
            }
            FamilySpec::MLaguerre2 { alpha, cs } => {
                let mut k = sign(total) * pochhammer(&(T::from_param(alpha, ctx)? + &one), total);
                for (c, &nj) in cs.iter().zip(idx.parts()) {
                    let c = T::from_param(c, ctx)?;
                    for _ in 0..nj {
                        k /= &c;
                    }
                }
                k
            }
            FamilySpec::SorokinLaguerre { .. } => one,
            FamilySpec::KBesselMop { alpha, nu } => {
                let a = T::from_param(alpha, ctx)?;
                let v = T::from_param(nu, ctx)?;
                sign(total) * pochhammer(&(a.clone() + &one), total) * pochhammer(&(a + &v + &one), total)
            }
            FamilySpec::MeijerGMop { nus } => {
                let mut k = sign(total);
                for v in nus {
                    k *= pochhammer(&(T::from_param(v, ctx)? + &one), total);
                }
                k
            }
            FamilySpec::IBesselMop { .. } => {
                return Err(Error::InvalidParameters("the I-Bessel family has no explicit formula".into()))
            }
        })
    }

    /// Coefficients of the normalized polynomial `N` from the explicit
    /// formula.
    pub fn normalized_coefficients<T: Scalar>(&self, idx: &MultiIndex, ctx: &PrecisionContext) -> Result<BigPoly<T>> {
        self.validate()?;
        let idx = self.canonical_index(idx)?;
        let one = T::from_int(1, ctx);
        let p = |x: &Param| T::from_param(x, ctx);
        Ok(match self {
            FamilySpec::JacobiAngelesco { alpha, beta, gamma } => {
                let [n, m] = idx.parts() else { unreachable!() };
                if n != m {
                    return Err(Error::InvalidParameters("explicit Angelesco formula needs n = m".into()));
                }
                if T::EXACT {
                    angelesco_normalized(*n, &p(alpha)?, &p(beta)?, &p(gamma)?)
                } else {
                    // the truncated prefactor products cancel like the series values do
                    let work = ctx.boosted(ctx.guard() + (0.7 * *n as f64) as u32);
                    let w = |x: &Param| T::from_param(x, &work);
                    let c = angelesco_normalized(*n, &w(alpha)?, &w(beta)?, &w(gamma)?);
                    BigPoly::new(c.coeffs().iter().map(|v| T::from_float(&v.to_float(&work), ctx)).collect())
                }
            }
            FamilySpec::JacobiPineiro { alphas, beta } => {
                let alphas = alphas.iter().map(p).collect::<Result<Vec<T>>>()?;
                pineiro_normalized(idx.parts(), &alphas, &p(beta)?, ctx)
            }
            FamilySpec::MLaguerre1 { alphas } => {
                let alphas = alphas.iter().map(p).collect::<Result<Vec<T>>>()?;
                laguerre1_normalized(idx.parts(), &alphas, ctx)
            }
            FamilySpec::MLaguerre2 { alpha, cs } => {
                let cs = cs.iter().map(p).collect::<Result<Vec<T>>>()?;
                laguerre2_normalized(idx.parts(), &p(alpha)?, &cs)
            }
            FamilySpec::SorokinLaguerre { p: pp, r } => sorokin_coefficients(idx.total(), &p(pp)?, *r),
            FamilySpec::KBesselMop { alpha, nu } => {
                let a = p(alpha)?;
                let v = p(nu)?;
                terminating_1fr(idx.total(), &[a.clone() + &one, a + &v + &one], ctx)?
            }
            FamilySpec::MeijerGMop { nus } => {
                let den = nus.iter().map(|v| p(v).map(|v| v + &one)).collect::<Result<Vec<T>>>()?;
                terminating_1fr(idx.total(), &den, ctx)?
            }
            FamilySpec::IBesselMop { .. } => {
                return Err(Error::InvalidParameters("the I-Bessel family has no explicit formula".into()))
            }
        })
    }

    /// Coefficients of `P = kappa N` in the customary normalization.
    pub fn explicit_coefficients<T: Scalar>(&self, idx: &MultiIndex, ctx: &PrecisionContext) -> Result<BigPoly<T>> {
        let n = self.normalized_coefficients::<T>(idx, ctx)?;
        Ok(n.scale(&self.normalization::<T>(idx, ctx)?))
    }
}

/// `1F_r(-n; den; x)` as a polynomial.
fn terminating_1fr<T: Scalar>(n: usize, den: &[T], ctx: &PrecisionContext) -> Result<BigPoly<T>> {
    let one = T::from_int(1, ctx);
    let spec = HypSeriesSpec::new(vec![one.int_like(-(n as i64))], den.to_vec());
    spec.validate(ctx)?;
    Ok(BigPoly::new(pfq_coefficients(&spec, n + 1, &one)))
}

/// Coefficients of `d_l(n)` for `l < count` by the direct alternating
/// sum `sum_k (-1)^k C(n+a, k) C(n+g, l-k)`.
pub fn d_ell_sequence<T: Scalar>(n: usize, alpha: &T, gamma: &T, count: usize) -> Vec<T> {
    let nn = alpha.int_like(n as i64);
    let a: Vec<T> = (0..count)
        .map(|k| {
            let c = gen_binomial(&(nn.clone() + alpha), k);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let b: Vec<T> = (0..count).map(|k| gen_binomial(&(nn.clone() + gamma), k)).collect();
    series_mul(&a, &b, count)
}

/// `d_l(n)` by the direct sum.
pub fn d_ell<T: Scalar>(n: usize, alpha: &T, gamma: &T, ell: usize) -> T {
    let nn = alpha.int_like(n as i64);
    let mut s = alpha.zero_like();
    for k in 0..=ell {
        let t = gen_binomial(&(nn.clone() + alpha), k) * gen_binomial(&(nn.clone() + gamma), ell - k);
        if k % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    s
}

/// `d_l(n) = sum_k (-1)^k C(n, k) c_{l-2k}` where
/// `(1-z)^a (1+z)^g = sum c_k z^k`.
pub fn d_ell_convolution<T: Scalar>(n: usize, alpha: &T, gamma: &T, ell: usize) -> T {
    let one = alpha.one_like();
    let c = series_mul(
        &binomial_series(&(-alpha.clone()), &one, ell + 1),
        &binomial_series(&(-gamma.clone()), &(-one.clone()), ell + 1),
        ell + 1,
    );
    let nn = alpha.int_like(n as i64);
    let mut s = alpha.zero_like();
    for k in 0..=ell / 2 {
        let t = gen_binomial(&nn, k) * &c[ell - 2 * k];
        if k % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    s
}

/// Limit of `n^{-l/2} d_l(n)`: `(-1)^{l/2} / (l/2)!` for even `l`, else 0.
pub fn d_ell_limit(ell: usize) -> Rational {
    if ell % 2 == 1 {
        return Rational::new();
    }
    let h = ell / 2;
    let f = pochhammer(&Rational::from(1), h);
    let v = Rational::from(f.recip());
    if h % 2 == 0 {
        v
    } else {
        -v
    }
}

fn angelesco_series_terms<T: Scalar>(n: usize, alpha: &T, beta: &T, gamma: &T, count: usize) -> Vec<T> {
    let one = alpha.one_like();
    let d = d_ell_sequence(n, alpha, gamma, count);
    let top = one.int_like(n as i64) + beta + &one;
    let bottom = beta.clone() + &one;
    let mut ratio = one.clone();
    let mut out = Vec::with_capacity(count);
    for (l, dl) in d.into_iter().enumerate() {
        let v = dl * &ratio;
        out.push(if l % 2 == 0 { v } else { -v });
        ratio *= top.clone() + &one.int_like(l as i64);
        ratio /= bottom.clone() + &one.int_like(l as i64);
    }
    out
}

fn angelesco_normalized<T: Scalar>(n: usize, alpha: &T, beta: &T, gamma: &T) -> BigPoly<T> {
    let len = 2 * n + 1;
    let one = alpha.one_like();
    let s = angelesco_series_terms(n, alpha, beta, gamma, len);
    let pre = series_mul(&binomial_series(alpha, &(-one.clone()), len), &binomial_series(gamma, &one, len), len);
    BigPoly::new(series_mul(&pre, &s, len))
}

fn pineiro_hyp<T: Scalar>(parts: &[usize], alphas: &[T], beta: &T, one: &T) -> HypSeriesSpec<T> {
    let total = one.int_like(parts.iter().sum::<usize>() as i64);
    let mut num = vec![-(total + beta)];
    let mut den = Vec::new();
    for (a, &nj) in alphas.iter().zip(parts) {
        num.push(a.clone() + &one.int_like(nj as i64 + 1));
        den.push(a.clone() + one);
    }
    HypSeriesSpec::new(num, den)
}

fn pineiro_normalized<T: Scalar>(parts: &[usize], alphas: &[T], beta: &T, ctx: &PrecisionContext) -> BigPoly<T> {
    let one = T::from_int(1, ctx);
    let len = parts.iter().sum::<usize>() + 1;
    let f = pfq_coefficients(&pineiro_hyp(parts, alphas, beta, &one), len, &one);
    BigPoly::new(series_mul(&binomial_series(beta, &one, len), &f, len))
}

fn laguerre1_hyp<T: Scalar>(parts: &[usize], alphas: &[T], one: &T) -> HypSeriesSpec<T> {
    HypSeriesSpec::new(
        alphas.iter().zip(parts).map(|(a, &nj)| a.clone() + &one.int_like(nj as i64 + 1)).collect(),
        alphas.iter().map(|a| a.clone() + one).collect(),
    )
}

fn laguerre1_normalized<T: Scalar>(parts: &[usize], alphas: &[T], ctx: &PrecisionContext) -> BigPoly<T> {
    let one = T::from_int(1, ctx);
    let len = parts.iter().sum::<usize>() + 1;
    let f: Vec<T> = pfq_coefficients(&laguerre1_hyp(parts, alphas, &one), len, &one)
        .into_iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { c } else { -c })
        .collect();
    let e: Vec<T> = (0..len).map(|k| one.clone() / pochhammer(&one, k)).collect();
    BigPoly::new(series_mul(&e, &f, len))
}

fn laguerre2_normalized<T: Scalar>(parts: &[usize], alpha: &T, cs: &[T]) -> BigPoly<T> {
    let one = alpha.one_like();
    let mut t = BigPoly::constant(one.clone());
    for (c, &nj) in cs.iter().zip(parts) {
        let f = BigPoly::new(vec![one.clone(), c.clone()]);
        for _ in 0..nj {
            t = t.mul(&f);
        }
    }
    let a1 = alpha.clone() + &one;
    BigPoly::new(
        t.coeffs()
            .iter()
            .enumerate()
            .map(|(m, tm)| {
                let v = tm.clone() / pochhammer(&a1, m);
                if m % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect(),
    )
}

/// Coefficient of `x^{rM}` in `L_n(x, p)`:
/// `(1/M!) sum_m (-1)^m C(M, m) (p + r m + 1)_n / n!`.
fn sorokin_coefficients<T: Scalar>(n: usize, p: &T, r: usize) -> BigPoly<T> {
    let one = p.one_like();
    let nf = pochhammer(&one, n);
    let f: Vec<T> = (0..=n).map(|m| pochhammer(&(p.clone() + &one.int_like((r * m + 1) as i64)), n) / &nf).collect();
    let mut coeffs = vec![one.zero_like(); r * n + 1];
    for big_m in 0..=n {
        let mut s = one.zero_like();
        for (m, fm) in f.iter().enumerate().take(big_m + 1) {
            let t = gen_binomial(&one.int_like(big_m as i64), m) * fm;
            if m % 2 == 0 {
                s += t;
            } else {
                s -= t;
            }
        }
        coeffs[r * big_m] = s / pochhammer(&one, big_m);
    }
    BigPoly::new(coeffs)
}

fn real_power(base: &Float, e: &Float) -> Float {
    use rug::ops::Pow;
    Float::with_val(base.prec(), base.pow(e))
}

/// `P_{n,n}(x)` in the Rodrigues normalization, from the power series
/// about 0. Valid for `|x| < 1 - ANGELESCO_MARGIN`.
pub fn jacobi_angelesco_eval<T: Scalar>(
    n: usize,
    alpha: &T,
    beta: &T,
    gamma: &T,
    x: &T,
    ctx: &PrecisionContext,
) -> Result<Float> {
    let xf = x.to_float(ctx);
    if xf.clone().abs() >= 1.0 - ANGELESCO_MARGIN {
        return Err(Error::OutOfDomain(format!("|x| = {} too close to 1", xf.to_f64().abs())));
    }
    let s = angelesco_series_value(n, alpha, beta, gamma, &xf, ctx)?;
    let one = alpha.one_like();
    let pre = real_power(&(ctx.float(1.0) + &xf), &(-alpha.to_float(ctx)))
        * real_power(&(ctx.float(1.0) - &xf), &(-gamma.to_float(ctx)));
    let kappa = pochhammer(&(beta.clone() + &one), n).to_float(ctx);
    let v = s * pre * kappa;
    Ok(if n % 2 == 0 { v } else { -v })
}

/// Normalized Angelesco value `(-1)^n P_{n,n}(x) / (b+1)_n`.
pub fn jacobi_angelesco_normalized_eval<T: Scalar>(
    n: usize,
    alpha: &T,
    beta: &T,
    gamma: &T,
    x: &T,
    ctx: &PrecisionContext,
) -> Result<Float> {
    let v = jacobi_angelesco_eval(n, alpha, beta, gamma, x, ctx)?;
    let kappa = pochhammer(&(beta.clone() + &beta.one_like()), n).to_float(ctx);
    let v = v / kappa;
    Ok(if n % 2 == 0 { v } else { -v })
}

fn angelesco_series_value<T: Scalar>(
    n: usize,
    alpha: &T,
    beta: &T,
    gamma: &T,
    x: &Float,
    ctx: &PrecisionContext,
) -> Result<Float> {
    // d_l(n) can reach 4^n in size while the sum stays O(1)
    let work = ctx.boosted(ctx.guard() + (0.7 * n as f64) as u32);
    let bits = work.bits();
    let a = alpha.to_float(&work);
    let g = gamma.to_float(&work);
    let top = Float::with_val(bits, beta.to_float(&work) + (n as u32 + 1));
    let bottom = Float::with_val(bits, beta.to_float(&work) + 1u32);
    let na = Float::with_val(bits, &a + n as u32);
    let ng = Float::with_val(bits, &g + n as u32);
    let x = Float::with_val(bits, x);
    // (-1)^k C(n+a, k) and C(n+g, k), extended on demand
    let mut av: Vec<Float> = vec![Float::with_val(bits, 1)];
    let mut bv: Vec<Float> = vec![Float::with_val(bits, 1)];
    let eps = ctx.eps_float();
    let mut sum = Float::with_val(bits, 0);
    let mut max_term = Float::with_val(bits, 0);
    let mut coef = Float::with_val(bits, 1);
    let mut xp = Float::with_val(bits, 1);
    let mut small = 0;
    for l in 0..crate::hypergeom::MAX_TERMS {
        if l > 0 {
            let k = (l - 1) as u32;
            let na_k = Float::with_val(bits, &na - k);
            let ng_k = Float::with_val(bits, &ng - k);
            let an = -Float::with_val(bits, &av[l - 1] * &na_k) / (k + 1);
            let bn = Float::with_val(bits, &bv[l - 1] * &ng_k) / (k + 1);
            av.push(an);
            bv.push(bn);
            coef *= Float::with_val(bits, &top + k);
            coef /= Float::with_val(bits, &bottom + k);
            xp *= &x;
        }
        let mut d = Float::with_val(bits, 0);
        for k in 0..=l {
            d += Float::with_val(bits, &av[k] * &bv[l - k]);
        }
        let mut term = d * &coef * &xp;
        if l % 2 == 1 {
            term = -term;
        }
        sum += &term;
        let ta = term.abs();
        if ta > max_term {
            max_term = ta.clone();
        }
        let reference = Float::with_val(bits, &max_term * &eps).max(&sum.clone().abs());
        if l >= 2 * n && ta <= Float::with_val(bits, &eps * &reference) {
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

/// A family value: the normalized `N(x)` and the raw `P(x) = kappa N(x)`.
#[derive(Clone, Debug)]
pub struct FamilyValue<T> {
    pub normalized: T,
    pub raw: T,
}

/// Evaluates a family's explicit polynomial at `x` through its coefficient
/// vector (exact when `T` is rational).
pub fn family_eval<T: Scalar>(
    fam: &FamilySpec,
    idx: &MultiIndex,
    x: &T,
    ctx: &PrecisionContext,
) -> Result<FamilyValue<T>> {
    let n = fam.normalized_coefficients::<T>(idx, ctx)?;
    let kappa = fam.normalization::<T>(idx, ctx)?;
    let normalized = n.eval(x);
    Ok(FamilyValue { raw: normalized.clone() * &kappa, normalized })
}

/// Jacobi-Pineiro `N(x) = (1-x)^{-b} (r+1)F_r(..; x)` summed as a series,
/// for `|x| < 1`.
pub fn jacobi_pineiro_eval_series<T: Scalar>(
    parts: &[usize],
    alphas: &[T],
    beta: &T,
    x: &T,
    ctx: &PrecisionContext,
) -> Result<Float> {
    let one = beta.one_like();
    let f = eval_pfq(&pineiro_hyp(parts, alphas, beta, &one), x, ctx)?.value.to_float(ctx);
    let xf = x.to_float(ctx);
    Ok(f * real_power(&(ctx.float(1.0) - &xf), &(-beta.to_float(ctx))))
}

/// Laguerre I `N(x) = e^x rF_r(a_j+n_j+1; a_j+1; -x)` as a series.
pub fn mlaguerre1_eval_series<T: Scalar>(
    parts: &[usize],
    alphas: &[T],
    x: &T,
    ctx: &PrecisionContext,
) -> Result<Float> {
    let one = x.one_like();
    let f = eval_pfq(&laguerre1_hyp(parts, alphas, &one), &(-x.clone()), ctx)?.value.to_float(ctx);
    Ok(f * x.to_float(ctx).exp())
}

/// Laguerre II `L(x)` from the explicit `r`-fold sum over `k_j <= n_j`
/// (after `k_j -> n_j - k_j`):
/// `(-1)^|n| L = sum prod C(n_j,k_j) C(|n|+a, |n|-|k|) (-1)^|k| (|n|-|k|)! / prod c_j^{n_j-k_j} x^|k|`.
pub fn mlaguerre2_eval<T: Scalar>(parts: &[usize], alpha: &T, cs: &[T], x: &T) -> Result<T> {
    for (i, c) in cs.iter().enumerate() {
        if *c <= c.zero_like() || cs[..i].contains(c) {
            return Err(Error::InvalidParameters("c_j must be distinct and positive".into()));
        }
    }
    let one = alpha.one_like();
    let total: usize = parts.iter().sum();
    let big = one.int_like(total as i64) + alpha;
    let mut sum = one.zero_like();
    let mut k = vec![0usize; parts.len()];
    loop {
        let kt: usize = k.iter().sum();
        let mut term = gen_binomial(&big, total - kt) * pochhammer(&one, total - kt);
        for ((c, &nj), &kj) in cs.iter().zip(parts).zip(&k) {
            term *= gen_binomial(&one.int_like(nj as i64), kj);
            for _ in 0..nj - kj {
                term /= c;
            }
        }
        for _ in 0..kt {
            term *= x;
        }
        if kt % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        // odometer over the box 0..=n_j
        let mut i = 0;
        loop {
            if i == k.len() {
                return Ok(if total % 2 == 0 { sum } else { -sum });
            }
            if k[i] < parts[i] {
                k[i] += 1;
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

/// `L_n(x, p) = e^{x^r} sum_m (-1)^m / m! (p+rm+1)_n / n! x^{rm}`, summed
/// as an entire series.
pub fn sorokin_eval_series<T: Scalar>(n: usize, p: &T, r: usize, x: &T, ctx: &PrecisionContext) -> Result<Float> {
    let xf = x.to_float(ctx);
    let xr = pow_usize(&xf, r);
    let one = ctx.float(1.0);
    let pf = p.to_float(ctx);
    let mut sum = ctx.float(0.0);
    let mut xpow = one.clone();
    let mut mfact = one.clone();
    let mut nfact = one.clone();
    for i in 1..=n {
        nfact *= i as u32;
    }
    let eps = ctx.eps_float();
    let mut small = 0;
    let mut max_term = ctx.float(0.0);
    for m in 0..crate::hypergeom::MAX_TERMS {
        if m > 0 {
            mfact *= m as u32;
            xpow *= &xr;
        }
        let base = Float::with_val(ctx.bits(), &pf + (r * m + 1) as u32);
        let t = pochhammer(&base, n) / &nfact * &xpow / &mfact;
        let t = if m % 2 == 0 { t } else { -t };
        sum += &t;
        let ta = t.abs();
        if ta > max_term {
            max_term = ta.clone();
        }
        let reference = Float::with_val(ctx.bits(), sum.clone().abs().max(&(Float::with_val(ctx.bits(), &max_term * &eps))));
        if m > n && ta < Float::with_val(ctx.bits(), &eps * &reference) {
            small += 1;
            if small == 3 {
                return Ok(sum * xr.exp());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::TruncationLimit(crate::hypergeom::MAX_TERMS))
}

/// `L_n(x, p)` at a complex point, from the coefficient vector. On the
/// rays `x = w^j t` this equals `L_n(t, p)` since `L_n` is a polynomial in
/// `x^r`.
pub fn sorokin_eval_complex(
    n: usize,
    p: &Float,
    r: usize,
    x: &Complex<Float>,
    ctx: &PrecisionContext,
) -> Result<Complex<Float>> {
    let coeffs = sorokin_coefficients(n, p, r);
    let mut acc = Complex::real(ctx.float(0.0));
    for c in coeffs.coeffs().iter().rev() {
        acc = acc.mul(x).add(&Complex::real(c.clone()));
    }
    Ok(acc)
}

fn pow_usize(x: &Float, k: usize) -> Float {
    let mut acc = Float::with_val(x.prec(), 1);
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Which theorem's limit to evaluate, with the parameters it needs.
#[derive(Clone, Debug)]
pub enum LimitParams {
    /// `0F2(-; (b+1)/2, b/2+1; -z^2/4)`.
    Angelesco { beta: Param },
    /// `0F_r(-; a_j+1; -q_1...q_r z)` (Jacobi-Pineiro and Laguerre I).
    GenBessel { alphas: Vec<Param>, q: Vec<Rational> },
    /// `0F1(-; a+1; -Q z)` with `Q = sum q_j c_j`.
    LaguerreII { alpha: Param, q: Vec<Rational>, cs: Vec<Param> },
    /// `0F_r(-; (p+1)/r, .., (p+r)/r; -(z/r)^r) / Gamma(p+1)`.
    Sorokin { p: Param, r: usize },
    /// `0F2(-; a+1, a+v+1; -z)`.
    KBessel { alpha: Param, nu: Param },
    /// `e^{1/c} (cz)^{-v/2} J_v(2 sqrt(cz))`.
    IBessel { nu: Param, c: Param },
    /// `0F_r(-; v_j+1; -z)`.
    MeijerG { nus: Vec<Param> },
}

/// `Q = sum q_j c_j`.
pub fn laguerre2_q(q: &[Rational], cs: &[Param]) -> Param {
    q.iter().zip(cs).fold(Param::from(0), |acc, (qj, cj)| acc.add(&Param::Exact(qj.clone()).mul(cj)))
}

/// Evaluates the right-hand side of a hard-edge limit theorem at `z`.
pub fn mh_limit_eval(params: &LimitParams, z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let f = |p: &Param| p.to_float(ctx);
    let one = ctx.float(1.0);
    let gen = |den: Vec<Float>, arg: Float| -> Result<Float> {
        eval_pfq(&HypSeriesSpec::new(vec![], den), &arg, ctx).map(|v| v.value)
    };
    match params {
        LimitParams::Angelesco { beta } => {
            let b = f(beta);
            let den = vec![Float::with_val(ctx.bits(), &b + 1u32) / 2u32, Float::with_val(ctx.bits(), &b / 2u32) + 1u32];
            gen(den, -Float::with_val(ctx.bits(), z * z) / 4u32)
        }
        LimitParams::GenBessel { alphas, q } => {
            let prod = q.iter().fold(ctx.float(1.0), |acc, qj| acc * ctx.float_from(qj));
            gen(alphas.iter().map(|a| f(a) + &one).collect(), -(prod * z))
        }
        LimitParams::LaguerreII { alpha, q, cs } => {
            let qq = f(&laguerre2_q(q, cs));
            gen(vec![f(alpha) + &one], -(qq * z))
        }
        LimitParams::Sorokin { p, r } => {
            let pf = f(p);
            let rf = ctx.float(*r as f64);
            let den = (1..=*r).map(|i| Float::with_val(ctx.bits(), &pf + i as u32) / &rf).collect();
            let arg = -pow_usize(&Float::with_val(ctx.bits(), z / &rf), *r);
            let g = Float::with_val(ctx.bits(), &pf + 1u32).gamma();
            Ok(gen(den, arg)? / g)
        }
        LimitParams::KBessel { alpha, nu } => {
            let a = f(alpha);
            let v = f(nu);
            gen(vec![a.clone() + &one, a + v + &one], -z.clone())
        }
        LimitParams::IBessel { nu, c } => {
            let v = f(nu);
            let cf = f(c);
            let base = gen(vec![v.clone() + &one], -Float::with_val(ctx.bits(), &cf * z))?;
            let g = Float::with_val(ctx.bits(), &v + 1u32).gamma();
            Ok(base * cf.recip().exp() / g)
        }
        LimitParams::MeijerG { nus } => gen(nus.iter().map(|v| f(v) + &one).collect(), -z.clone()),
    }
}

/// `J_a(x)` from its defining series, independent of the hypergeometric
/// engine.
pub fn bessel_j_series(alpha: &Float, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let hi = ctx.boosted(ctx.guard() + 10);
    let a = Float::with_val(hi.bits(), alpha);
    let half = Float::with_val(hi.bits(), x / 2u32);
    let h2 = Float::with_val(hi.bits(), &half * &half);
    let mut term = real_power(&half, &a) / Float::with_val(hi.bits(), &a + 1u32).gamma();
    let mut sum = term.clone();
    let eps = hi.eps_float();
    let mut small = 0;
    for k in 1..crate::hypergeom::MAX_TERMS as u32 {
        term *= &h2;
        term /= k;
        term /= Float::with_val(hi.bits(), &a + k);
        term = -term;
        sum += &term;
        if term.clone().abs() < Float::with_val(hi.bits(), &eps * sum.clone().abs()) && Float::with_val(hi.bits(), &h2 / k) < k {
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
