use mopasym::families::{bessel_j_series, FamilySpec};
use mopasym::moments::construct_mop;
use mopasym::roots::{bessel_zeros, genbessel_zeros, poly_real_zeros};
use mopasym::{MultiIndex, Param, PrecisionContext};
use rug::{Float, Rational};

fn p(s: &str) -> Param {
    Param::parse(s).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

// First zeros of J_0, frozen from an independent bisection on the Bessel series.
const J0_ZEROS: [f64; 5] = [2.404825557695773, 5.520078110286311, 8.653727912911013, 11.791534439014281, 14.930917708487787];

#[test]
fn j0_zeros_against_series_bisection() {
    let ctx = PrecisionContext::default();
    let zero = ctx.float(0.0);
    // independent bisection on the Bessel series around each frozen value
    for want in J0_ZEROS {
        let (mut lo, mut hi) = (ctx.float(want - 1e-6), ctx.float(want + 1e-6));
        let s_lo = bessel_j_series(&zero, &lo, &ctx).unwrap().is_sign_negative();
        for _ in 0..150 {
            let mid = Float::with_val(ctx.bits(), &lo + &hi) / 2u32;
            if bessel_j_series(&zero, &mid, &ctx).unwrap().is_sign_negative() == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo.to_f64() - want).abs() < 1e-14);
    }
    let z = bessel_zeros(&zero, 5, &ctx).unwrap();
    for (v, want) in z.values.iter().zip(J0_ZEROS) {
        assert!((v.to_f64() - want).abs() < 1e-10);
    }
    // f_k = (j_k / 2)^2
    let f = genbessel_zeros(&[zero.clone()], 1, &ctx).unwrap();
    assert!((f.values[0].to_f64() - 1.445796491).abs() < 1e-8);
}

#[test]
fn bessel_zero_interlacing() {
    let ctx = PrecisionContext::new(30).unwrap();
    let j0 = bessel_zeros(&ctx.float(0.0), 6, &ctx).unwrap();
    let j1 = bessel_zeros(&ctx.float(1.0), 6, &ctx).unwrap();
    for k in 0..5 {
        assert!(j0.values[k] < j1.values[k] && j1.values[k] < j0.values[k + 1]);
    }
}

#[test]
fn genbessel_zeros_r2() {
    let ctx = PrecisionContext::new(30).unwrap();
    let f = genbessel_zeros(&[ctx.float(0.0), ctx.float(0.5)], 1, &ctx).unwrap();
    assert!((f.values[0].to_f64() - 1.8088813923060523).abs() < 1e-12);
    let f = genbessel_zeros(&[ctx.float(0.0), ctx.float(0.0)], 5, &ctx).unwrap();
    let want = [1.1615155, 11.159395, 40.61411, 100.12538, 200.30176];
    for (v, w) in f.values.iter().zip(want) {
        assert!((v.to_f64() - w).abs() / w < 1e-6, "{v} vs {w}");
    }
    assert!(f.values.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn refining_precision_keeps_zeros_within_tolerance() {
    let coarse = PrecisionContext::new(25).unwrap();
    let fine = PrecisionContext::new(60).unwrap();
    let a = genbessel_zeros(&[coarse.float(0.0), coarse.float(1.0 / 3.0)], 3, &coarse).unwrap();
    let b = genbessel_zeros(&[fine.float(0.0), fine.float(1.0 / 3.0)], 3, &fine).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        let d = Float::with_val(fine.bits(), x - y).abs() / y;
        assert!(d.to_f64() <= 2.0 * a.achieved_tolerance.max(1e-15), "{d}");
    }
}

#[test]
fn oracle_polynomial_zero_locations() {
    let ctx = PrecisionContext::default();
    let pin = FamilySpec::JacobiPineiro { alphas: vec![p("0"), p("1/2")], beta: p("0") };
    let poly = construct_mop::<Rational>(&pin, &MultiIndex::new(vec![2, 2]).unwrap(), &ctx).unwrap().poly;
    let z = poly_real_zeros(&poly, &q(-10, 1), Some(&q(10, 1)), Some(4), &ctx).unwrap();
    assert_eq!(z.len(), 4);
    assert!(z.values.iter().all(|v| *v > 0 && *v < 1));

    for n in 1..=8 {
        let fam = FamilySpec::JacobiAngelesco { alpha: p("0"), beta: p("1/2"), gamma: p("1") };
        let poly = construct_mop::<Rational>(&fam, &MultiIndex::new(vec![n, n]).unwrap(), &ctx).unwrap().poly;
        let left = poly_real_zeros(&poly, &q(-1, 1), Some(&q(0, 1)), Some(n), &ctx).unwrap();
        let right = poly_real_zeros(&poly, &q(0, 1), Some(&q(1, 1)), Some(n), &ctx).unwrap();
        assert_eq!((left.len(), right.len()), (n, n));
    }

    let kb = FamilySpec::KBesselMop { alpha: p("0"), nu: p("1") };
    let poly = construct_mop::<Rational>(&kb, &MultiIndex::new(vec![1]).unwrap(), &ctx).unwrap().poly;
    let z = poly_real_zeros(&poly, &q(0, 1), None, Some(1), &ctx).unwrap();
    assert_eq!(z.values[0], 2);
}
