//! Double-exponential quadrature, used only to check the moment catalog.
//!
//! `tanh-sinh` on `[0, 1]` hands the integrand both `x` and `1 - x`, each
//! computed without cancellation, so algebraic endpoint singularities are
//! resolved to full precision. `exp-sinh` covers `[0, inf)`. The step is
//! halved until two successive estimates agree to the target.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

/// Integral estimate with the difference between the last two levels.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: Float,
    pub error_estimate: Float,
}

const MAX_LEVEL: u32 = 12;

fn converge(
    ctx: &PrecisionContext,
    target: &Float,
    mut level_sum: impl FnMut(&Float, bool) -> Result<Float>,
) -> Result<Quadrature> {
    let mut h = ctx.float(0.5);
    // level 0 includes all nodes kh; later levels add the odd multiples
    let mut total = level_sum(&h, false)?;
    let mut est = Float::with_val(ctx.bits(), &total * &h);
    for _ in 0..MAX_LEVEL {
        h /= 2u32;
        total += level_sum(&h, true)?;
        let next = Float::with_val(ctx.bits(), &total * &h);
        let diff = Float::with_val(ctx.bits(), &next - &est).abs();
        let scale = next.clone().abs().max(&ctx.float(1e-300));
        est = next;
        if diff <= Float::with_val(ctx.bits(), target * &scale) {
            return Ok(Quadrature { value: est, error_estimate: diff });
        }
    }
    Err(Error::TruncationLimit(1 << MAX_LEVEL))
}

/// `int_0^1 f(x, 1-x) dx`.
pub fn tanh_sinh(
    f: impl Fn(&Float, &Float) -> Float,
    target: &Float,
    ctx: &PrecisionContext,
) -> Result<Quadrature> {
    let bits = ctx.bits();
    let pi = ctx.pi();
    let tiny = Float::with_val(bits, ctx.eps_float().square()) * ctx.eps_float();
    converge(ctx, target, |h, odd| {
        let mut acc = Float::with_val(bits, 0);
        let step = if odd { 2 } else { 1 };
        for sign in [1i32, -1] {
            let mut k: i64 = if odd { 1 } else if sign == 1 { 0 } else { 1 };
            loop {
                let t = Float::with_val(bits, h * (sign as i64 * k));
                let u = Float::with_val(bits, &pi * t.clone().sinh());
                let e = u.clone().exp();
                let x = Float::with_val(bits, &e / Float::with_val(bits, &e + 1u32));
                let y = Float::with_val(bits, 1u32 / Float::with_val(bits, &e + 1u32));
                if x.is_zero() || y.is_zero() {
                    break;
                }
                let w = Float::with_val(bits, &x * &y) * &pi * t.cosh();
                let term = f(&x, &y) * &w;
                acc += &term;
                if term.abs() < tiny && k > 4 {
                    break;
                }
                k += step;
            }
        }
        Ok(acc)
    })
}

/// `int_0^inf f(x) dx` by `x = exp(pi/2 sinh t)`.
pub fn exp_sinh(f: impl Fn(&Float) -> Float, target: &Float, ctx: &PrecisionContext) -> Result<Quadrature> {
    let bits = ctx.bits();
    let half_pi = Float::with_val(bits, ctx.pi() / 2u32);
    let tiny = Float::with_val(bits, ctx.eps_float().square()) * ctx.eps_float();
    converge(ctx, target, |h, odd| {
        let mut acc = Float::with_val(bits, 0);
        let step = if odd { 2 } else { 1 };
        for sign in [1i32, -1] {
            let mut k: i64 = if odd { 1 } else if sign == 1 { 0 } else { 1 };
            let mut quiet = 0;
            loop {
                let t = Float::with_val(bits, h * (sign as i64 * k));
                let x = Float::with_val(bits, &half_pi * t.clone().sinh()).exp();
                if x.is_zero() || x.is_infinite() {
                    break;
                }
                let w = Float::with_val(bits, &x * &half_pi) * t.cosh();
                let term = f(&x) * &w;
                if !term.is_finite() {
                    break;
                }
                acc += &term;
                if term.abs() < tiny {
                    quiet += 1;
                    if quiet > 3 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                k += step;
            }
        }
        Ok(acc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn beta_integral_with_endpoint_singularities() {
        let ctx = PrecisionContext::new(40).unwrap();
        let target = ctx.float(1e-30);
        // B(1/2, 1/3) = Gamma(1/2)Gamma(1/3)/Gamma(5/6)
        let a = ctx.float(-0.5);
        let b = Float::with_val(ctx.bits(), -2) / 3u32;
        let q = tanh_sinh(|x, y| Float::with_val(ctx.bits(), x.pow(&a)) * Float::with_val(ctx.bits(), y.pow(&b)), &target, &ctx)
            .unwrap();
        let g = |v: Float| v.gamma();
        let want = g(ctx.float(0.5)) * g(Float::with_val(ctx.bits(), 1) / 3u32) / g(Float::with_val(ctx.bits(), 5) / 6u32);
        let rel = Float::with_val(ctx.bits(), &q.value - &want).abs() / &want;
        assert!(rel < 1e-30, "{rel}");
    }

    #[test]
    fn gamma_integral() {
        let ctx = PrecisionContext::new(40).unwrap();
        let target = ctx.float(1e-30);
        let s = ctx.float(2.5);
        let q = exp_sinh(|x| Float::with_val(ctx.bits(), x.pow(&s)) * Float::with_val(ctx.bits(), -x).exp(), &target, &ctx)
            .unwrap();
        let want = Float::with_val(ctx.bits(), 3.5).gamma();
        let rel = Float::with_val(ctx.bits(), &q.value - &want).abs() / &want;
        assert!(rel < 1e-30, "{rel}");
    }
}
