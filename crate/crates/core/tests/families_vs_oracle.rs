use mopasym::families::{
    d_ell, d_ell_convolution, d_ell_limit, family_eval, jacobi_angelesco_eval, jacobi_pineiro_eval_series,
    mlaguerre1_eval_series, mlaguerre2_eval, sorokin_eval_series, FamilySpec,
};
use mopasym::moments::{construct_mop, orthogonality_residual, sorokin_exact_residual_zero};
use mopasym::poly::BigPoly;
use mopasym::{MultiIndex, Param, PrecisionContext};
use rug::{Float, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn p(s: &str) -> Param {
    Param::parse(s).unwrap()
}

fn idx(parts: &[usize]) -> MultiIndex {
    MultiIndex::new(parts.to_vec()).unwrap()
}

/// Exact proportionality: every coefficient ratio is the same rational.
fn assert_proportional(a: &BigPoly<Rational>, b: &BigPoly<Rational>) {
    assert_eq!(a.coeffs().len(), b.coeffs().len(), "{a:?} vs {b:?}");
    let ratio = Rational::from(a.leading().unwrap() / b.leading().unwrap());
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        assert_eq!(*x, Rational::from(y * &ratio));
    }
}

fn exact_panel() -> Vec<(FamilySpec, Vec<MultiIndex>)> {
    vec![
        (
            FamilySpec::JacobiAngelesco { alpha: p("0"), beta: p("1/2"), gamma: p("1") },
            (0..=5).map(|n| idx(&[n, n])).collect(),
        ),
        (
            FamilySpec::JacobiPineiro { alphas: vec![p("0"), p("1/2")], beta: p("1/3") },
            vec![idx(&[1, 0]), idx(&[2, 2]), idx(&[3, 2]), idx(&[4, 4])],
        ),
        (
            FamilySpec::JacobiPineiro { alphas: vec![p("-1/2"), p("1/3"), p("0")], beta: p("2") },
            vec![idx(&[2, 2, 2]), idx(&[3, 2, 2])],
        ),
        (FamilySpec::MLaguerre1 { alphas: vec![p("0"), p("1/2")] }, vec![idx(&[3, 3]), idx(&[4, 3])]),
        (
            FamilySpec::MLaguerre2 { alpha: p("1/2"), cs: vec![p("1"), p("2"), p("5/2")] },
            vec![idx(&[2, 2, 2]), idx(&[3, 2, 1])],
        ),
        (FamilySpec::SorokinLaguerre { p: p("1/2"), r: 2 }, (0..=5).map(|n| idx(&[n])).collect()),
        (FamilySpec::SorokinLaguerre { p: p("0"), r: 3 }, (0..=4).map(|n| idx(&[n])).collect()),
        (FamilySpec::KBesselMop { alpha: p("0"), nu: p("1") }, (0..=8).map(|n| idx(&[n])).collect()),
        (FamilySpec::KBesselMop { alpha: p("1/3"), nu: p("1/2") }, (0..=7).map(|n| idx(&[n])).collect()),
        (
            FamilySpec::MeijerGMop { nus: vec![p("1/2"), p("1/3"), p("0")] },
            (0..=9).map(|n| idx(&[n])).collect(),
        ),
    ]
}

#[test]
fn explicit_formulas_match_oracle_exactly() {
    let ctx = PrecisionContext::default();
    for (fam, indices) in exact_panel() {
        for i in indices {
            let explicit = fam.explicit_coefficients::<Rational>(&i, &ctx).unwrap();
            let oracle = construct_mop::<Rational>(&fam, &i, &ctx).unwrap().poly;
            assert_eq!(explicit.degree(), fam.degree(&fam.canonical_index(&i).unwrap()), "{fam} {i:?}");
            assert_proportional(&explicit, &oracle);
            let res = orthogonality_residual(&fam, &i, &explicit, &ctx).unwrap();
            assert_eq!(res, 0, "{fam} {i:?}");
        }
    }
}

#[test]
fn small_cases_by_hand() {
    let ctx = PrecisionContext::default();
    let lag = FamilySpec::MLaguerre1 { alphas: vec![p("0")] };
    let poly = construct_mop::<Rational>(&lag, &idx(&[1]), &ctx).unwrap().poly;
    assert_eq!(poly, BigPoly::from_ints(&[-1, 1]));
    let v = family_eval(&lag, &idx(&[1]), &q(0, 1), &ctx).unwrap();
    assert_eq!(v.raw, -1);
    assert_eq!(v.normalized, 1);
    // residual of p = x against the single condition is |m_1| = 1
    let x = BigPoly::from_ints(&[0, 1]);
    assert_eq!(orthogonality_residual(&lag, &idx(&[1]), &x, &ctx).unwrap(), 1);

    let kb = FamilySpec::KBesselMop { alpha: p("0"), nu: p("1") };
    assert_eq!(kb.explicit_coefficients::<Rational>(&idx(&[1]), &ctx).unwrap(), BigPoly::from_ints(&[-2, 1]));
    assert_eq!(construct_mop::<Rational>(&kb, &idx(&[1]), &ctx).unwrap().poly, BigPoly::from_ints(&[-2, 1]));
    assert_eq!(family_eval(&kb, &idx(&[1]), &q(3, 1), &ctx).unwrap().raw, 1);

    let ang = FamilySpec::JacobiAngelesco { alpha: p("0"), beta: p("0"), gamma: p("0") };
    assert_eq!(ang.explicit_coefficients::<Rational>(&idx(&[1]), &ctx).unwrap(), BigPoly::from_ints(&[-1, 0, 3]));

    let so = FamilySpec::SorokinLaguerre { p: p("0"), r: 1 };
    assert_eq!(so.explicit_coefficients::<Rational>(&idx(&[1]), &ctx).unwrap(), BigPoly::from_ints(&[1, -1]));

    for n in 0..4 {
        let ib = FamilySpec::IBesselMop { nu: p("1/2"), c: p("2") };
        let r = construct_mop::<Rational>(&ib, &idx(&[n]), &ctx).unwrap();
        assert_eq!(r.poly.degree(), n);
        assert_eq!(orthogonality_residual(&ib, &idx(&[n]), &r.poly, &ctx).unwrap(), 0);
    }
}

#[test]
fn angelesco_leading_coefficient() {
    let ctx = PrecisionContext::default();
    for (a, b, g) in [("0", "0", "0"), ("1", "1/2", "2"), ("1/3", "-1/2", "3/4")] {
        let s = p(a).as_rational().unwrap().clone()
            + p(b).as_rational().unwrap()
            + p(g).as_rational().unwrap()
            + Rational::from(1);
        let fam = FamilySpec::JacobiAngelesco { alpha: p(a), beta: p(b), gamma: p(g) };
        for n in 0..6 {
            let c = fam.explicit_coefficients::<Rational>(&idx(&[n]), &ctx).unwrap();
            let mut want = Rational::from(1);
            for i in 2 * n..3 * n {
                want *= Rational::from(&s + i as u32);
            }
            assert_eq!(*c.leading().unwrap(), want, "n={n} {fam}");
        }
    }
}

#[test]
fn angelesco_series_matches_coefficients() {
    let ctx = PrecisionContext::default();
    let (a, b, g) = (q(1, 3), q(1, 2), q(3, 4));
    let fam = FamilySpec::JacobiAngelesco { alpha: Param::Exact(a.clone()), beta: Param::Exact(b.clone()), gamma: Param::Exact(g.clone()) };
    for n in [0usize, 1, 3, 6] {
        let c = fam.explicit_coefficients::<Rational>(&idx(&[n]), &ctx).unwrap();
        for x in [q(1, 2), q(-1, 2), q(1, 4), q(-9, 10)] {
            let v = jacobi_angelesco_eval(n, &a, &b, &g, &x, &ctx).unwrap();
            let want = ctx.float_from(&c.eval(&x));
            let err = Float::with_val(ctx.bits(), &v - &want).abs() / want.clone().abs().max(&ctx.float(1.0));
            assert!(err < 1e-38, "n={n} x={x} err={err}");
        }
    }
    let out = jacobi_angelesco_eval(2, &a, &b, &g, &q(9995, 10000), &ctx);
    assert!(matches!(out, Err(mopasym::Error::OutOfDomain(_))));
}

#[test]
fn angelesco_n1_matches_rescaled_oracle() {
    let ctx = PrecisionContext::default();
    let fam = FamilySpec::JacobiAngelesco { alpha: p("0"), beta: p("0"), gamma: p("0") };
    let oracle = construct_mop::<Rational>(&fam, &idx(&[1]), &ctx).unwrap().poly.scale(&q(3, 1));
    let z = q(0, 1);
    for x in [q(1, 2), q(-1, 2), q(1, 4)] {
        let v = jacobi_angelesco_eval(1, &z, &z, &z, &x, &ctx).unwrap();
        let want = ctx.float_from(&oracle.eval(&x));
        assert!(Float::with_val(ctx.bits(), &v - &want).abs() < 1e-40);
    }
}

#[test]
fn series_evaluators_match_polynomials() {
    let ctx = PrecisionContext::default();
    let alphas = [q(0, 1), q(1, 2)];
    let pin = FamilySpec::JacobiPineiro { alphas: vec![p("0"), p("1/2")], beta: p("1/3") };
    let lag = FamilySpec::MLaguerre1 { alphas: vec![p("0"), p("1/2")] };
    for parts in [[0usize, 0], [2, 2], [3, 2]] {
        let i = idx(&parts);
        for x in [q(1, 3), q(-2, 5), q(7, 10)] {
            let poly = family_eval(&pin, &i, &x, &ctx).unwrap().normalized;
            let ser = jacobi_pineiro_eval_series(&parts, &alphas, &q(1, 3), &x, &ctx).unwrap();
            assert!(Float::with_val(ctx.bits(), &ser - &ctx.float_from(&poly)).abs() < 1e-38);
            let poly = family_eval(&lag, &i, &x, &ctx).unwrap().normalized;
            let ser = mlaguerre1_eval_series(&parts, &alphas, &x, &ctx).unwrap();
            assert!(Float::with_val(ctx.bits(), &ser - &ctx.float_from(&poly)).abs() < 1e-38);
        }
    }
    let lag2 = FamilySpec::MLaguerre2 { alpha: p("1/2"), cs: vec![p("1"), p("3")] };
    for parts in [[0usize, 0], [1, 2], [3, 3]] {
        let i = idx(&parts);
        for x in [q(0, 1), q(5, 2)] {
            let poly = family_eval(&lag2, &i, &x, &ctx).unwrap().raw;
            let sum = mlaguerre2_eval(&parts, &q(1, 2), &[q(1, 1), q(3, 1)], &x).unwrap();
            assert_eq!(poly, sum);
        }
    }
    let so = FamilySpec::SorokinLaguerre { p: p("1/2"), r: 2 };
    for n in [0usize, 1, 4] {
        for x in [q(1, 2), q(3, 2)] {
            let poly = family_eval(&so, &idx(&[n]), &x, &ctx).unwrap().raw;
            let ser = sorokin_eval_series(n, &q(1, 2), 2, &x, &ctx).unwrap();
            assert!(Float::with_val(ctx.bits(), &ser - &ctx.float_from(&poly)).abs() < 1e-38, "n={n}");
        }
    }
}

#[test]
fn sorokin_exact_over_cyclotomic_field() {
    let ctx = PrecisionContext::default();
    for r in 1..=3 {
        for n in 0..=4 {
            let fam = FamilySpec::SorokinLaguerre { p: p("1/3"), r };
            let poly = construct_mop::<Rational>(&fam, &idx(&[n]), &ctx).unwrap().poly;
            assert!(sorokin_exact_residual_zero(&q(1, 3), r, n, &poly));
            // only powers of x^r appear
            for (i, c) in poly.coeffs().iter().enumerate() {
                if i % r != 0 {
                    assert_eq!(*c, 0);
                }
            }
        }
    }
}

#[test]
fn real_mode_oracle_agrees_with_explicit() {
    let ctx = PrecisionContext::default();
    let fam = FamilySpec::JacobiPineiro { alphas: vec![p("sqrt(2)-1"), p("1/3")], beta: p("pi/4") };
    for parts in [[2usize, 2], [4, 3]] {
        let i = idx(&parts);
        let explicit = fam.explicit_coefficients::<Float>(&i, &ctx).unwrap().monic();
        let oracle = construct_mop::<Float>(&fam, &i, &ctx).unwrap();
        for (a, b) in explicit.coeffs().iter().zip(oracle.poly.coeffs()) {
            let rel = Float::with_val(ctx.bits(), a - b).abs() / b.clone().abs();
            assert!(rel < 1e-35, "{rel}");
        }
    }
}

#[test]
fn d_ell_routes_agree() {
    for (a, g) in [(q(0, 1), q(0, 1)), (q(1, 3), q(-1, 2)), (q(5, 2), q(1, 1))] {
        for n in [0usize, 1, 3, 10] {
            for l in 0..8 {
                assert_eq!(d_ell(n, &a, &g, l), d_ell_convolution(n, &a, &g, l));
            }
        }
    }
    assert_eq!(d_ell(3, &q(0, 1), &q(0, 1), 2), -3);
    assert_eq!(d_ell(7, &q(1, 2), &q(1, 3), 0), 1);
    assert_eq!(d_ell_limit(2), -1);
    assert_eq!(d_ell_limit(4), q(1, 2));
    assert_eq!(d_ell_limit(3), 0);
}
