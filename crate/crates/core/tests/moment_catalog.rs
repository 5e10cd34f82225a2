use mopasym::families::FamilySpec;
use mopasym::hypergeom::{eval_pfq, HypSeriesSpec};
use mopasym::moments::{normalized_moments, sorokin_class_factor, sorokin_class_gamma};
use mopasym::quadrature::{exp_sinh, tanh_sinh};
use mopasym::{Param, PrecisionContext};
use rug::ops::Pow;
use rug::{Float, Rational};

const K_MAX: usize = 4;

fn p(s: &str) -> Param {
    Param::parse(s).unwrap()
}

fn ctx() -> PrecisionContext {
    PrecisionContext::new(40).unwrap()
}

fn close(a: &Float, b: &Float, tol: f64) -> bool {
    let d = Float::with_val(a.prec(), a - b).abs();
    d <= b.clone().abs().max(&Float::with_val(a.prec(), 1e-300)) * tol
}

fn check(fam: &FamilySpec, j: usize, raw: &[Float]) {
    let ctx = ctx();
    let got = normalized_moments::<Float>(fam, j, raw.len(), &ctx).unwrap();
    for (k, (g, r)) in got.iter().zip(raw).enumerate() {
        let want = Float::with_val(ctx.bits(), r / &raw[0]);
        assert!(close(g, &want, 1e-28), "{fam} weight {j} k={k}: {g} vs {want}");
    }
}

fn fl(v: &str, ctx: &PrecisionContext) -> Float {
    p(v).to_float(ctx)
}

#[test]
fn jacobi_pineiro_and_laguerre_moments() {
    let ctx = ctx();
    let target = ctx.float(1e-32);
    let bits = ctx.bits();
    let (a, b) = (fl("-1/2", &ctx), fl("1/3", &ctx));
    let raw: Vec<Float> = (0..K_MAX)
        .map(|k| {
            let e = Float::with_val(bits, &a + k as u32);
            tanh_sinh(|x, y| Float::with_val(bits, x.pow(&e)) * Float::with_val(bits, y.pow(&b)), &target, &ctx)
                .unwrap()
                .value
        })
        .collect();
    check(&FamilySpec::JacobiPineiro { alphas: vec![p("-1/2"), p("0")], beta: p("1/3") }, 0, &raw);

    let lag = |alpha: &str, c: &str| -> Vec<Float> {
        let a = fl(alpha, &ctx);
        let c = fl(c, &ctx);
        (0..K_MAX)
            .map(|k| {
                let e = Float::with_val(bits, &a + k as u32);
                exp_sinh(|x| Float::with_val(bits, x.pow(&e)) * Float::with_val(bits, -Float::with_val(bits, &c * x)).exp(), &target, &ctx)
                    .unwrap()
                    .value
            })
            .collect()
    };
    check(&FamilySpec::MLaguerre1 { alphas: vec![p("0"), p("1/3")] }, 1, &lag("1/3", "1"));
    check(&FamilySpec::MLaguerre2 { alpha: p("1/2"), cs: vec![p("1"), p("3/2")] }, 1, &lag("1/2", "3/2"));
    // Meijer-G with one parameter is x^v e^{-x}
    check(&FamilySpec::MeijerGMop { nus: vec![p("2/5")] }, 0, &lag("2/5", "1"));
}

#[test]
fn angelesco_moments_both_intervals() {
    let ctx = ctx();
    let target = ctx.float(1e-32);
    let bits = ctx.bits();
    let (a, b, g) = (fl("1/3", &ctx), fl("1/2", &ctx), fl("3/4", &ctx));
    let fam = FamilySpec::JacobiAngelesco { alpha: p("1/3"), beta: p("1/2"), gamma: p("3/4") };
    // [0,1]: x^{k+b} (1+x)^a (1-x)^g
    let right: Vec<Float> = (0..K_MAX)
        .map(|k| {
            let e = Float::with_val(bits, &b + k as u32);
            tanh_sinh(
                |x, y| {
                    Float::with_val(bits, x.pow(&e))
                        * Float::with_val(bits, Float::with_val(bits, x + 1u32).pow(&a))
                        * Float::with_val(bits, y.pow(&g))
                },
                &target,
                &ctx,
            )
            .unwrap()
            .value
        })
        .collect();
    check(&fam, 1, &right);
    // [-1,0] with x = -t: (-1)^k t^{k+b} (1-t)^a (1+t)^g
    let left: Vec<Float> = (0..K_MAX)
        .map(|k| {
            let e = Float::with_val(bits, &b + k as u32);
            let v = tanh_sinh(
                |t, y| {
                    Float::with_val(bits, t.pow(&e))
                        * Float::with_val(bits, y.pow(&a))
                        * Float::with_val(bits, Float::with_val(bits, t + 1u32).pow(&g))
                },
                &target,
                &ctx,
            )
            .unwrap()
            .value;
            if k % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    check(&fam, 0, &left);

    // integer a, g: rational moments from the finite sum over C(a, m)
    let fam = FamilySpec::JacobiAngelesco { alpha: p("2"), beta: p("1/2"), gamma: p("1") };
    let exact = normalized_moments::<Rational>(&fam, 1, K_MAX, &ctx).unwrap();
    let beta_fn = |x: Rational, y: Rational| -> Rational {
        // B(x, 1+y) for y a nonnegative integer: (y)! / (x)_{y+1}
        let yi = y.numer().to_u32().unwrap();
        let mut num = Rational::from(1);
        let mut den = Rational::from(1);
        for i in 0..=yi {
            if i > 0 {
                num *= i;
            }
            den *= Rational::from(&x + i);
        }
        num / den
    };
    let raw: Vec<Rational> = (0..K_MAX)
        .map(|k| {
            let mut s = Rational::new();
            for (m, c) in [1, 2, 1].iter().enumerate() {
                s += Rational::from(*c) * beta_fn(Rational::from((3, 2)) + (k + m) as u32, Rational::from(1));
            }
            s
        })
        .collect();
    for k in 0..K_MAX {
        assert_eq!(exact[k], Rational::from(&raw[k] / &raw[0]));
    }
}

#[test]
fn bessel_weight_moments() {
    let ctx = ctx();
    let target = ctx.float(1e-32);
    let bits = ctx.bits();
    // K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}, K_{3/2}(z) = K_{1/2}(z)(1 + 1/z)
    let k_half = |z: &Float| Float::with_val(bits, ctx.pi() / Float::with_val(bits, z * 2u32)).sqrt() * Float::with_val(bits, -z).exp();
    let alpha = fl("1/3", &ctx);
    let nu = fl("1/2", &ctx);
    let kb = FamilySpec::KBesselMop { alpha: p("1/3"), nu: p("1/2") };
    for j in 0..2 {
        let raw: Vec<Float> = (0..K_MAX)
            .map(|k| {
                let e = Float::with_val(bits, &alpha + Float::with_val(bits, &nu + j as u32) / 2u32) + k as u32;
                exp_sinh(
                    |x| {
                        let z = Float::with_val(bits, x.clone().sqrt() * 2u32);
                        let mut kv = k_half(&z);
                        if j == 1 {
                            kv *= Float::with_val(bits, Float::with_val(bits, 1u32 / &z) + 1u32);
                        }
                        Float::with_val(bits, x.pow(&e)) * kv
                    },
                    &target,
                    &ctx,
                )
                .unwrap()
                .value
            })
            .collect();
        check(&kb, j, &raw);
        // Meijer-G with r = 2 is the same pair of weights
        let mg = FamilySpec::MeijerGMop { nus: vec![p("5/6"), p("1/3")] };
        check(&mg, j, &raw);
    }

    // x^{v/2} I_v(2 sqrt x) = x^v 0F1(; v+1; x) / Gamma(v+1)
    let ib = FamilySpec::IBesselMop { nu: p("1/2"), c: p("2") };
    for j in 0..2u32 {
        let v = Float::with_val(bits, fl("1/2", &ctx) + j);
        let spec = HypSeriesSpec::new(vec![], vec![Float::with_val(bits, &v + 1u32)]);
        let raw: Vec<Float> = (0..K_MAX)
            .map(|k| {
                let e = Float::with_val(bits, &v + k as u32);
                exp_sinh(
                    |x| {
                        // e^{-2x} e^{2 sqrt x} is far below the target here
                        if *x > 400 {
                            return Float::with_val(bits, 0);
                        }
                        let f = eval_pfq(&spec, x, &ctx).unwrap().value;
                        Float::with_val(bits, x.pow(&e)) * f * Float::with_val(bits, x * -2i32).exp()
                    },
                    &target,
                    &ctx,
                )
                .unwrap()
                .value
            })
            .collect();
        check(&ib, j as usize, &raw);
    }
}

#[test]
fn ibessel_finite_form_matches_infinite_series() {
    // sum_m Gamma(k+v+m+1) / (m! Gamma(v+m+1) c^m), up to k-independent factors
    let ctx = ctx();
    let bits = ctx.bits();
    let v = fl("1/2", &ctx);
    let c = ctx.float(2.0);
    let raw: Vec<Float> = (0..6)
        .map(|k| {
            let mut s = Float::with_val(bits, 0);
            let mut mf = Float::with_val(bits, 1);
            for m in 0..200u32 {
                if m > 0 {
                    mf *= m;
                }
                let num = Float::with_val(bits, &v + (k + m + 1)).gamma();
                let den = Float::with_val(bits, &v + (m + 1)).gamma();
                s += num / den / &mf / Float::with_val(bits, c.clone().pow(m));
            }
            s / Float::with_val(bits, c.clone().pow(k))
        })
        .collect();
    check(&FamilySpec::IBesselMop { nu: p("1/2"), c: p("2") }, 0, &raw);
}

#[test]
fn sorokin_ray_moments() {
    let ctx = ctx();
    let target = ctx.float(1e-32);
    let bits = ctx.bits();
    let pp = fl("1/2", &ctx);
    let r = 3usize;
    let raw: Vec<Float> = (0..6)
        .map(|k| {
            let e = Float::with_val(bits, &pp + k as u32);
            exp_sinh(|x| Float::with_val(bits, x.pow(&e)) * Float::with_val(bits, -Float::with_val(bits, x.pow(r as u32))).exp(), &target, &ctx)
                .unwrap()
                .value
        })
        .collect();
    for (k, m) in raw.iter().enumerate() {
        let want = Float::with_val(bits, m / &raw[0]);
        let got = sorokin_class_factor(&pp, r, k) * sorokin_class_gamma(&pp, r, k % r, &ctx);
        assert!(close(&got, &want, 1e-28), "k={k}");
    }
}

#[test]
fn catalog_examples() {
    let ctx = PrecisionContext::default();
    let pin = FamilySpec::JacobiPineiro { alphas: vec![p("0"), p("1/2")], beta: p("0") };
    let m = normalized_moments::<Rational>(&pin, 0, 6, &ctx).unwrap();
    for (k, v) in m.iter().enumerate() {
        assert_eq!(*v, Rational::from((1, k as i64 + 1)));
    }
    let lag = FamilySpec::MLaguerre1 { alphas: vec![p("0"), p("1/2")] };
    let m = normalized_moments::<Rational>(&lag, 0, 6, &ctx).unwrap();
    assert_eq!(m, [1, 1, 2, 6, 24, 120].map(Rational::from).to_vec());
    let kb = FamilySpec::KBesselMop { alpha: p("0"), nu: p("1") };
    let m = normalized_moments::<Rational>(&kb, 0, 2, &ctx).unwrap();
    assert_eq!(m[1], 2);
    let bad = FamilySpec::MLaguerre1 { alphas: vec![p("-1")] };
    assert!(matches!(normalized_moments::<Rational>(&bad, 0, 2, &ctx), Err(mopasym::Error::NonIntegrable(_))));
}
