//! Randomised properties of the public API.

use pilotwave::ensemble::run_chain;
use pilotwave::models::{ExcitedStateSplit, GroundStateSplit, Model, ModelKind, WaveModel};
use pilotwave::numerics::ode::OdeSpec;
use pilotwave::numerics::special::{erf, erfc, erfcx};
use pilotwave::stats::{build_histogram, histogram_l1, merge};
use pilotwave::trajectories::trajectory_fan;
use proptest::prelude::*;

fn samples() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-4.0f64..4.0, 1..200)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn erf_symmetries(x in -30.0f64..30.0) {
        prop_assert_eq!(erf(-x), -erf(x));
        prop_assert!((erfc(x) + erfc(-x) - 2.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert!((erf(x) + erfc(x) - 1.0).abs() <= 4.0 * f64::EPSILON);
        let y = x.abs().min(20.0);
        let direct = (y * y).exp() * erfc(y);
        prop_assert!((erfcx(y) - direct).abs() <= 1e-13 * direct.max(1e-300) * (1.0 + y * y));
    }

    #[test]
    fn histogram_merge_associative_and_commutative(a in samples(), b in samples(), c in samples()) {
        let w = 0.1;
        let (ha, hb, hc) = (
            build_histogram(&a, w).unwrap(),
            build_histogram(&b, w).unwrap(),
            build_histogram(&c, w).unwrap(),
        );
        let left = merge(&merge(&ha, &hb).unwrap(), &hc).unwrap();
        let right = merge(&ha, &merge(&hb, &hc).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(merge(&ha, &hb).unwrap(), merge(&hb, &ha).unwrap());
        let all: Vec<f64> = a.iter().chain(&b).chain(&c).copied().collect();
        prop_assert_eq!(&left, &build_histogram(&all, w).unwrap());
    }

    #[test]
    fn histogram_l1_is_a_metric(a in samples(), b in samples()) {
        let (ha, hb) = (build_histogram(&a, 0.2).unwrap(), build_histogram(&b, 0.2).unwrap());
        let d = histogram_l1(&ha, &hb).unwrap();
        prop_assert!((0.0..=2.0 + 1e-12).contains(&d));
        prop_assert_eq!(d, histogram_l1(&hb, &ha).unwrap());
        prop_assert_eq!(histogram_l1(&ha, &ha).unwrap(), 0.0);
    }

    #[test]
    fn bins_are_half_open(x in -50.0f64..50.0, w in 0.01f64..2.0) {
        let h = build_histogram(&[x], w).unwrap();
        let k = h.bin_of(x);
        prop_assert!(h.edge(k) <= x && x < h.edge(k + 1));
        prop_assert_eq!(h.count(k), 1);
    }

    #[test]
    fn velocity_fields_are_odd(x in 0.0f64..6.0, t in 0.0f64..10.0) {
        let g = GroundStateSplit::new();
        prop_assert_eq!(g.velocity(-x, t).unwrap(), -g.velocity(x, t).unwrap());
        let e = ExcitedStateSplit::new();
        if x > 0.05 {
            prop_assert_eq!(e.velocity(-x, t).unwrap(), -e.velocity(x, t).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(12) })]

    #[test]
    fn ground_fans_do_not_cross(mut x0 in prop::collection::vec(-3.0f64..3.0, 2..6)) {
        x0.sort_by(f64::total_cmp);
        x0.dedup();
        let fan = trajectory_fan(&GroundStateSplit::new(), &x0, (0.0, 20.0), &OdeSpec::default(), 81);
        let trajs: Vec<_> = fan.iter().map(|e| e.result.as_ref().unwrap()).collect();
        for pair in trajs.windows(2) {
            for (lo, hi) in pair[0].samples.iter().zip(&pair[1].samples) {
                prop_assert!(lo.x <= hi.x, "crossing at t = {}", lo.t);
            }
        }
    }

    #[test]
    fn ground_chains_mirror_exactly(x0 in 0.01f64..3.0) {
        let m = Model::from_kind(ModelKind::Ground);
        let ode = OdeSpec::default();
        let a = run_chain(&m, x0, 20.0, 40, &ode).unwrap();
        let b = run_chain(&m, -x0, 20.0, 40, &ode).unwrap();
        for (r, s) in a.records.iter().zip(&b.records) {
            prop_assert_eq!(r.relative_position, -s.relative_position);
            prop_assert_eq!(r.outcome, s.outcome.flipped());
        }
    }

    #[test]
    fn chains_are_deterministic(x0 in -3.0f64..3.0) {
        prop_assume!(x0 != 0.0);
        let m = Model::from_kind(ModelKind::Ground);
        let ode = OdeSpec::default();
        prop_assert_eq!(run_chain(&m, x0, 20.0, 30, &ode).unwrap(), run_chain(&m, x0, 20.0, 30, &ode).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(4) })]

    #[test]
    fn excited_fans_do_not_cross_the_node(mut x0 in prop::collection::vec(0.1f64..2.5, 2..4)) {
        x0.sort_by(f64::total_cmp);
        x0.dedup();
        let model = ExcitedStateSplit::new();
        let fan = trajectory_fan(&model, &x0, (0.0, 10.0), &OdeSpec::default(), 21);
        let trajs: Vec<_> = fan.iter().map(|e| e.result.as_ref().unwrap()).collect();
        for tr in &trajs {
            prop_assert!(tr.samples.iter().all(|s| s.x > 0.0));
        }
        for pair in trajs.windows(2) {
            for (lo, hi) in pair[0].samples.iter().zip(&pair[1].samples) {
                prop_assert!(lo.x <= hi.x);
            }
        }
    }
}
