use meanbound_core::means::{self, MeanId, PExponent, PositivePair};
use proptest::prelude::*;

fn pair() -> impl Strategy<Value = PositivePair> {
    (-6.0..6.0f64, -6.0..6.0f64).prop_map(|(x, y)| PositivePair::new(x.exp(), y.exp()).unwrap())
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs())
}

const ALL: [MeanId; 5] = [MeanId::A, MeanId::G, MeanId::H, MeanId::L, MeanId::I];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn means_lie_between_arguments(p in pair()) {
        for id in ALL {
            let v = means::evaluate(id, p, None).value;
            prop_assert!(p.lo() <= v && v <= p.hi(), "{id:?} = {v} outside [{}, {}]", p.lo(), p.hi());
        }
    }

    #[test]
    fn means_are_symmetric(p in pair()) {
        for id in ALL {
            let (x, y) = (means::evaluate(id, p, None).value, means::evaluate(id, p.swapped(), None).value);
            prop_assert!(close(x, y, 4e-16), "{id:?}: {x} vs {y}");
        }
    }

    #[test]
    fn means_are_homogeneous(p in pair(), k in -4.0..4.0f64) {
        let lambda = k.exp();
        let scaled = PositivePair::new(p.a() * lambda, p.b() * lambda).unwrap();
        for id in ALL {
            let (x, y) = (means::evaluate(id, scaled, None).value, lambda * means::evaluate(id, p, None).value);
            prop_assert!(close(x, y, 1e-14), "{id:?}: {x} vs {y}");
        }
    }

    #[test]
    fn chain_is_ordered(p in pair()) {
        let s = means::mean_chain_slacks(p);
        prop_assert!(s.iter().all(|&v| v >= 0.0), "{s:?}");
    }

    #[test]
    fn lp_is_monotone_in_p(p in pair(), p1 in -4.0..4.0f64, dp in 0.01..2.0f64) {
        let lo = means::p_logarithmic_mean(p, PExponent::new(p1).unwrap());
        let hi = means::p_logarithmic_mean(p, PExponent::new(p1 + dp).unwrap());
        prop_assert!(lo <= hi * (1.0 + 1e-14), "L_{p1} = {lo} > L_{} = {hi}", p1 + dp);
    }

    #[test]
    fn lp_hits_named_means(p in pair()) {
        let lp = |e: f64| means::p_logarithmic_mean(p, PExponent::new(e).unwrap());
        prop_assert!(close(lp(1.0), means::arithmetic_mean(p), 1e-14));
        prop_assert!(close(lp(-2.0), means::geometric_mean(p), 1e-14));
        prop_assert_eq!(lp(0.0), means::identric_mean(p));
        prop_assert_eq!(lp(-1.0), means::logarithmic_mean(p));
    }

    #[test]
    fn identric_branches_agree_near_threshold(b in -3.0..3.0f64, t in 2e-4..5e-3f64) {
        let lo = b.exp();
        let p = PositivePair::new(lo * (1.0 + t) / (1.0 - t), lo).unwrap();
        let (s, d) = (means::identric_mean_series(p), means::identric_mean_direct(p));
        prop_assert!(close(s, d, 1e-12), "series {s} direct {d}");
    }
}

#[test]
fn ties_are_exact() {
    for a in [1e-300, 1e-3, 0.7, 1.0, 3.5, 1e300] {
        let p = PositivePair::new(a, a).unwrap();
        for id in ALL {
            assert_eq!(means::evaluate(id, p, None).value, a, "{id:?} at {a}");
        }
        assert_eq!(means::mean_chain_slacks(p), [0.0; 4]);
    }
}

#[test]
fn rejects_bad_arguments() {
    assert!(PositivePair::new(0.0, 1.0).is_err());
    assert!(PositivePair::new(-1.0, 1.0).is_err());
    assert!(PositivePair::new(f64::NAN, 1.0).is_err());
    assert!(PositivePair::new(1.0, f64::INFINITY).is_err());
    assert!(PExponent::new(f64::NAN).is_err());
}

#[test]
fn extreme_ratios_stay_finite() {
    let p = PositivePair::new(1e300, 1e-300).unwrap();
    for id in ALL {
        let v = means::evaluate(id, p, None).value;
        assert!(v.is_finite() && v > 0.0, "{id:?} = {v}");
    }
    assert!(means::mean_chain_slacks(p).iter().all(|&s| s >= 0.0));
}
