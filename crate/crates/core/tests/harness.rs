use mopasym::config::RunConfig;
use mopasym::error::Error;
use mopasym::families::FamilySpec;
use mopasym::harness::{default_z_grid, estimate_order, run_mh_experiment, run_zero_scaling, Experiment};
use mopasym::moments::{construct_mop, orthogonality_residual};
use mopasym::{MultiIndex, Param, PrecisionContext};
use proptest::prelude::*;
use rug::Rational;

fn p(s: &str) -> Param {
    Param::parse(s).unwrap()
}

fn kbessel() -> FamilySpec {
    FamilySpec::KBesselMop { alpha: p("0"), nu: p("1/2") }
}

#[test]
fn order_of_power_laws() {
    let ns = [8, 16, 32, 64];
    for k in [0.5, 1.0, 2.0] {
        let errs: Vec<f64> = ns.iter().map(|n| 3.0 * (*n as f64).powf(-k)).collect();
        assert!((estimate_order(&errs, &ns).unwrap() - k).abs() < 1e-12);
    }
    assert!(matches!(estimate_order(&[1.0, 0.5], &[8, 16]), Err(Error::DegenerateFit(_))));
    assert!(matches!(estimate_order(&[1.0, 0.0, 0.1], &[8, 16, 32]), Err(Error::DegenerateFit(_))));
}

#[test]
fn kbessel_mehler_heine_rate() {
    let ctx = PrecisionContext::new(30).unwrap();
    let exp = Experiment { theorem: 6, family: kbessel(), q: None };
    let rep = run_mh_experiment(&exp, &[8, 16, 32, 64], &default_z_grid(), &ctx).unwrap();
    let errs: Vec<f64> = rep.sup_errors.iter().map(|e| e.to_f64()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    let order = rep.estimated_order.unwrap();
    assert!((0.8..=1.3).contains(&order), "{order}");
    assert_eq!(rep.z_sup.len(), 4);
}

#[test]
fn experiment_inputs_are_checked() {
    let ctx = PrecisionContext::new(30).unwrap();
    let wrong = Experiment { theorem: 3, family: kbessel(), q: None };
    assert!(run_mh_experiment(&wrong, &[8, 16], &[0.5], &ctx).is_err());
    let ok = Experiment { theorem: 6, family: kbessel(), q: None };
    assert!(run_mh_experiment(&ok, &[], &[0.5], &ctx).is_err());
    assert!(run_mh_experiment(&ok, &[16, 8], &[0.5], &ctx).is_err());
    assert!(run_mh_experiment(&ok, &[8], &[], &ctx).is_err());
}

#[test]
fn zero_scaling_kbessel() {
    let ctx = PrecisionContext::new(30).unwrap();
    let rep = run_zero_scaling(&kbessel(), &None, 1, &[16, 32, 64], &ctx).unwrap();
    assert!(rep.rel_errors[2] < 0.05);
    assert!(rep.rel_errors.windows(2).all(|w| w[1] < w[0]));
    assert!(run_zero_scaling(&kbessel(), &None, 6, &[16], &ctx).is_err());
    let ang = FamilySpec::JacobiAngelesco { alpha: p("0"), beta: p("0"), gamma: p("0") };
    assert!(matches!(run_zero_scaling(&ang, &None, 1, &[16], &ctx), Err(Error::InvalidParameters(_))));
}

#[test]
fn bundled_config_is_valid() {
    let cfg = RunConfig::default();
    cfg.validate().unwrap();
    assert_eq!(cfg.digits, 50);
    assert!(!cfg.mh.is_empty() && !cfg.exact.is_empty());
}

#[test]
fn config_errors() {
    let base = "[[mh]]\nfamily = \"kbessel\"\nalpha = \"0\"\nnu = \"1/2\"\n";
    assert!(RunConfig::parse(base).is_ok());
    for bad in [
        "digits = 10\n".to_string() + base,
        "n_grid = [16, 8]\n".to_string() + base,
        "n_grid = [8, 256]\n".to_string() + base,
        "k_range = [0, 2]\n".to_string() + base,
        "digits = 30\n".to_string(),
        base.replace("\"1/2\"", "\"-1\""),
        base.to_string() + "[[exact]]\nfamily = \"kbessel\"\nalpha = \"sqrt(2)\"\nnu = \"1/2\"\n",
        "digits = \"many\"\n".to_string() + base,
    ] {
        assert!(matches!(RunConfig::parse(&bad), Err(Error::Config(_))), "{bad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn order_ignores_constant(c in 1e-6f64..1e6, k in 0.3f64..2.5) {
        let ns = [8, 16, 32, 64];
        let errs: Vec<f64> = ns.iter().map(|n| (*n as f64).powf(-k)).collect();
        let scaled: Vec<f64> = errs.iter().map(|e| e * c).collect();
        let a = estimate_order(&errs, &ns).unwrap();
        let b = estimate_order(&scaled, &ns).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn kbessel_oracle_is_monic_and_orthogonal(an in 0i64..12, ad in 1i64..5, vn in 1i64..9, vd in 2i64..5, n in 1usize..6) {
        let ctx = PrecisionContext::default();
        let nu = Rational::from((vn, vd));
        prop_assume!(!nu.is_integer());
        let fam = FamilySpec::KBesselMop { alpha: Param::Exact(Rational::from((an, ad))), nu: Param::Exact(nu) };
        let idx = MultiIndex::new(vec![n]).unwrap();
        let poly = construct_mop::<Rational>(&fam, &idx, &ctx).unwrap().poly;
        prop_assert_eq!(poly.degree(), n);
        prop_assert_eq!(poly.leading().unwrap().clone(), Rational::from(1));
        prop_assert_eq!(orthogonality_residual(&fam, &idx, &poly, &ctx).unwrap(), Rational::new());
    }

    #[test]
    fn mlag2_oracle_is_orthogonal(a in 0i64..6, c1 in 1i64..5, c2 in 5i64..9, n1 in 0usize..4, n2 in 0usize..4) {
        prop_assume!(n1 + n2 > 0);
        let ctx = PrecisionContext::default();
        let fam = FamilySpec::MLaguerre2 {
            alpha: Param::Exact(Rational::from((a, 2))),
            cs: vec![Param::Exact(Rational::from(c1)), Param::Exact(Rational::from(c2))],
        };
        let idx = MultiIndex::new(vec![n1, n2]).unwrap();
        let poly = construct_mop::<Rational>(&fam, &idx, &ctx).unwrap().poly;
        prop_assert_eq!(poly.degree(), n1 + n2);
        prop_assert_eq!(orthogonality_residual(&fam, &idx, &poly, &ctx).unwrap(), Rational::new());
    }
}
