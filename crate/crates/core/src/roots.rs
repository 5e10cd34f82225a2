//! Real zeros of polynomials on an interval, and of the entire functions
//! `0F_r(-; a_j+1; -z)` and `J_a`.
//!
//! Polynomial zeros are isolated exactly: the polynomial is mapped to
//! `t in [0, 1]`, scaled to integer coefficients, and split with Descartes'
//! rule of signs (Vincent-Collins-Akritas). Each isolating interval is then
//! bisected; signs are taken from a floating evaluation with an error
//! bound, falling back to exact integer evaluation at the dyadic midpoint
//! when the bound is inconclusive.

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::hypergeom::{eval_pfq, HypSeriesSpec};
use crate::poly::BigPoly;
use crate::precision::{PrecisionContext, Scalar};

/// What a [`ZeroList`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroKind {
    /// Zeros `x_{k,n}` of a polynomial.
    Polynomial,
    /// Zeros `f_k` of `0F_r(-; a_j+1; -z)`.
    GenBessel,
    /// Zeros `j_k` of `J_a`.
    Bessel,
}

/// Increasing list of zeros.
#[derive(Clone, Debug)]
pub struct ZeroList {
    pub values: Vec<Float>,
    pub kind: ZeroKind,
    /// Largest relative width of the final brackets.
    pub achieved_tolerance: f64,
}

impl ZeroList {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Integer polynomial in `t`, coefficient `i` of `t^i`.
type IPoly = Vec<Integer>;

/// Sign variations, zeros skipped.
fn variations(c: &[Integer]) -> usize {
    let mut last = 0;
    let mut v = 0;
    for x in c {
        let s = x.cmp0() as i32;
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// `q(t + 1)`.
fn shift1(q: &[Integer]) -> IPoly {
    let mut c = q.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
    c
}

/// `2^d q(t/2)`.
fn halve(q: &[Integer]) -> IPoly {
    let d = q.len() - 1;
    q.iter().enumerate().map(|(i, c)| Integer::from(c << (d - i) as u32)).collect()
}

/// Upper bound on the number of roots in `(0, 1)`.
fn roots_in_unit(q: &[Integer]) -> usize {
    let mut r = q.to_vec();
    r.reverse();
    variations(&shift1(&r))
}

/// Isolating interval `[k/2^depth, (k+1)/2^depth]`, or an exact dyadic root.
#[derive(Clone, Debug)]
enum Isolated {
    Bracket { k: Integer, depth: u32 },
    Exact { k: Integer, depth: u32 },
}

const MAX_DEPTH: u32 = 4000;

fn isolate(mut q: IPoly, k: Integer, depth: u32, out: &mut Vec<Isolated>) -> Result<()> {
    if q.len() > 1 && q[0] == 0 {
        out.push(Isolated::Exact { k: k.clone(), depth });
        q.remove(0);
    }
    if q.len() <= 1 {
        return Ok(());
    }
    match roots_in_unit(&q) {
        0 => Ok(()),
        1 => {
            out.push(Isolated::Bracket { k, depth });
            Ok(())
        }
        _ if depth >= MAX_DEPTH => Err(Error::ZeroCountMismatch { expected: 1, found: 2 }),
        _ => {
            let left = halve(&q);
            let right = shift1(&left);
            isolate(left, Integer::from(&k << 1u32), depth + 1, out)?;
            isolate(right, Integer::from(&k << 1u32) + 1u32, depth + 1, out)
        }
    }
}

/// Primitive integer polynomial proportional to `p(a + (b - a) t)`.
fn to_unit_interval(p: &BigPoly<Rational>, a: &Rational, b: &Rational) -> IPoly {
    let w = Rational::from(b - a);
    let q = p.taylor_shift(a).scale_arg(&w);
    let mut lcm = Integer::from(1);
    for c in q.coeffs() {
        lcm.lcm_mut(c.denom());
    }
    let mut out: IPoly = q.coeffs().iter().map(|c| Integer::from(c.numer() * &lcm) / c.denom()).collect();
    let mut g = Integer::new();
    for c in &out {
        g.gcd_mut(c);
    }
    if g > 1 {
        for c in out.iter_mut() {
            *c /= &g;
        }
    }
    out
}

/// Cauchy bound `1 + max |c_i / c_d|`, rounded up to a power of two.
fn positive_root_bound(p: &BigPoly<Rational>) -> Rational {
    let lead = p.leading().cloned().unwrap_or_else(|| Rational::from(1));
    let mut m = Rational::new();
    for c in &p.coeffs()[..p.degree()] {
        let r = Rational::from(c / &lead).abs();
        if r > m {
            m = r;
        }
    }
    m += 1;
    let mut b = Rational::from(1);
    while b < m {
        b *= 2;
    }
    b
}

/// Sign of `q(t)` at `t = m / 2^s`, exactly.
fn exact_sign(q: &[Integer], m: &Integer, s: u32) -> i32 {
    let d = q.len() - 1;
    let mut acc = q[d].clone();
    for i in (0..d).rev() {
        acc *= m;
        acc += Integer::from(&q[i] << (s * (d - i) as u32));
    }
    acc.cmp0() as i32
}

struct SignOracle<'a> {
    q: &'a [Integer],
    qf: Vec<Float>,
    bits: u32,
}

impl<'a> SignOracle<'a> {
    fn new(q: &'a [Integer], bits: u32) -> Self {
        SignOracle { q, qf: q.iter().map(|c| Float::with_val(bits, c)).collect(), bits }
    }

    /// Sign at `t = m / 2^s`.
    fn sign(&self, m: &Integer, s: u32) -> i32 {
        let t = Float::with_val(self.bits, m) >> s;
        let mut acc = Float::with_val(self.bits, 0);
        let mut mag = Float::with_val(self.bits, 0);
        let ta = t.clone().abs();
        for c in self.qf.iter().rev() {
            acc *= &t;
            acc += c;
            mag *= &ta;
            mag += c.clone().abs();
        }
        let slack = Float::with_val(self.bits, &mag * (4 * self.qf.len() as u32)) >> (self.bits - 2);
        if acc.clone().abs() > slack {
            acc.cmp0().map_or(0, |o| o as i32)
        } else {
            exact_sign(self.q, m, s)
        }
    }
}

/// All zeros of `p` in `(a, b)`; `b = None` means `+inf`. With
/// `expected`, fewer zeros than expected is an error.
pub fn poly_real_zeros<T: Scalar>(
    p: &BigPoly<T>,
    a: &Rational,
    b: Option<&Rational>,
    expected: Option<usize>,
    ctx: &PrecisionContext,
) -> Result<ZeroList> {
    let exact: BigPoly<Rational> = BigPoly::new(p.coeffs().iter().map(Scalar::to_rational).collect());
    let b = match b {
        Some(b) => b.clone(),
        None => {
            let shifted = exact.taylor_shift(a);
            Rational::from(a + positive_root_bound(&shifted))
        }
    };
    let width = Rational::from(&b - a);
    let q = to_unit_interval(&exact, a, &b);
    let mut isolated = Vec::new();
    if q.len() > 1 {
        isolate(q.clone(), Integer::new(), 0, &mut isolated)?;
    }
    let eps = ctx.eps_float();
    let bits = ctx.bits() + 64;
    let oracle = SignOracle::new(&q, bits);
    let to_x = |m: &Integer, s: u32| -> Float {
        let t = Float::with_val(bits, m) >> s;
        Float::with_val(ctx.bits(), Float::with_val(bits, a) + t * Float::with_val(bits, &width))
    };
    let mut out: Vec<Float> = Vec::new();
    let mut worst = 0.0f64;
    for iso in isolated {
        match iso {
            Isolated::Exact { k, depth } => out.push(to_x(&k, depth)),
            Isolated::Bracket { k, depth } => {
                let (mut lo, mut s) = (k, depth);
                let s_lo = oracle.sign(&lo, s);
                if s_lo == 0 {
                    out.push(to_x(&lo, s));
                    continue;
                }
                loop {
                    let x_lo = to_x(&lo, s);
                    let x_hi = to_x(&(lo.clone() + 1u32), s);
                    let w = Float::with_val(ctx.bits(), &x_hi - &x_lo);
                    let scale = x_lo.clone().abs().max(&x_hi.clone().abs());
                    if w <= Float::with_val(ctx.bits(), &eps * &scale) || s > MAX_DEPTH {
                        if !scale.is_zero() {
                            worst = worst.max((w / &scale).to_f64());
                        }
                        out.push(Float::with_val(ctx.bits(), &x_lo + &x_hi) / 2u32);
                        break;
                    }
                    lo <<= 1;
                    s += 1;
                    let mid = Integer::from(&lo + 1u32);
                    let sm = oracle.sign(&mid, s);
                    if sm == 0 {
                        out.push(to_x(&mid, s));
                        break;
                    }
                    if sm == s_lo {
                        lo = mid;
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite zeros"));
    if let Some(e) = expected {
        if out.len() < e {
            return Err(Error::ZeroCountMismatch { expected: e, found: out.len() });
        }
    }
    Ok(ZeroList { values: out, kind: ZeroKind::Polynomial, achieved_tolerance: worst })
}

/// Scan step near `z` for `0F_r(-; ..; -z)`: zeros are spaced about
/// `pi z^{r/(r+1)}` apart for large `z`.
fn scan_step(z: &Float, r: usize, floor: f64) -> f64 {
    let zf = z.to_f64().max(1.0);
    (0.05 * std::f64::consts::PI * zf.powf(r as f64 / (r as f64 + 1.0))).max(floor)
}

/// First `count` positive zeros of `0F_r(-; a_1+1, .., a_r+1; -z)`.
pub fn genbessel_zeros(alphas: &[Float], count: usize, ctx: &PrecisionContext) -> Result<ZeroList> {
    let r = alphas.len();
    let den: Vec<Float> = alphas.iter().map(|a| Float::with_val(ctx.bits(), a + 1u32)).collect();
    let spec = HypSeriesSpec::new(vec![], den);
    spec.validate(ctx)?;
    let f = |z: &Float| -> Result<Float> { eval_pfq(&spec, &Float::with_val(ctx.bits(), -z), ctx).map(|v| v.value) };
    let scale: f64 = alphas.iter().map(|a| (a.to_f64() + 1.0).max(1.0)).product();
    let bound = 10.0 * ((count + 1) as f64).powi(r as i32 + 1) * scale;
    let floor = 1e-3 * scale.min(1.0);
    scan_and_bisect(&f, r, count, bound, floor, ZeroKind::GenBessel, ctx)
}

fn scan_and_bisect(
    f: &dyn Fn(&Float) -> Result<Float>,
    r: usize,
    count: usize,
    bound: f64,
    floor: f64,
    kind: ZeroKind,
    ctx: &PrecisionContext,
) -> Result<ZeroList> {
    let eps = ctx.eps_float();
    let mut out = Vec::with_capacity(count);
    let mut worst = 0.0f64;
    let mut z = ctx.float(0.0);
    let mut fz = f(&z)?;
    while out.len() < count {
        if z > bound {
            return Err(Error::SearchExhausted { bound: format!("{bound:.3e}"), found: out.len(), wanted: count });
        }
        let next = Float::with_val(ctx.bits(), &z + scan_step(&z, r, floor));
        let fn_ = f(&next)?;
        if fn_.is_zero() {
            out.push(next.clone());
            let nn = Float::with_val(ctx.bits(), &next + floor);
            fz = f(&nn)?;
            z = nn;
            continue;
        }
        if fz.is_sign_negative() != fn_.is_sign_negative() && !fz.is_zero() {
            let (mut lo, mut hi) = (z.clone(), next.clone());
            let s_lo = fz.is_sign_negative();
            loop {
                let w = Float::with_val(ctx.bits(), &hi - &lo);
                if w <= Float::with_val(ctx.bits(), &eps * &hi) {
                    worst = worst.max((w / &hi).to_f64());
                    break;
                }
                let mid = Float::with_val(ctx.bits(), &lo + &hi) / 2u32;
                let fm = f(&mid)?;
                if fm.is_zero() {
                    lo = mid.clone();
                    hi = mid;
                    break;
                }
                if fm.is_sign_negative() == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(Float::with_val(ctx.bits(), &lo + &hi) / 2u32);
        }
        z = next;
        fz = fn_;
    }
    Ok(ZeroList { values: out, kind, achieved_tolerance: worst })
}

/// First `count` positive zeros of `J_a`, from `J_a(t) ~ (t/2)^a 0F1(-; a+1; -t^2/4)`.
pub fn bessel_zeros(alpha: &Float, count: usize, ctx: &PrecisionContext) -> Result<ZeroList> {
    if *alpha <= -1 {
        return Err(Error::InvalidParameters(format!("alpha = {alpha} must exceed -1")));
    }
    let f = genbessel_zeros(std::slice::from_ref(alpha), count, ctx)?;
    Ok(ZeroList {
        values: f.values.iter().map(|v| Float::with_val(ctx.bits(), v * 4u32).sqrt()).collect(),
        kind: ZeroKind::Bessel,
        achieved_tolerance: f.achieved_tolerance,
    })
}
