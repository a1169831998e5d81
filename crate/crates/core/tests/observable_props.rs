use flexsearch::model::{ModelParams, Regime};
use flexsearch::observable::{
    active_search_threshold, comparative_static_signs, competition_solve, equilibrium_foc_check, fixed_point_check,
    kappa_case_partition, trade_threshold, StaticParam,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn market() -> impl Strategy<Value = ModelParams> {
    (-1.0..2.0f64, 0.05..10.0f64, 0.01..0.99f64)
        .prop_map(|(mu, kappa, frac)| ModelParams::new(mu, frac * 0.25 / kappa, kappa).unwrap())
}

fn rank(r: Regime) -> u8 {
    match r {
        Regime::NoTrade => 0,
        Regime::LearnNoSearch => 1,
        _ => 2,
    }
}

fn bump(p: &ModelParams, which: StaticParam, h: f64) -> ModelParams {
    match which {
        StaticParam::Mu => ModelParams { mu: p.mu + h, ..*p },
        StaticParam::C => ModelParams { c: p.c + h, ..*p },
        StaticParam::Kappa => ModelParams { kappa: p.kappa + h, ..*p },
    }
}

fn value_of(p: &ModelParams, which: StaticParam) -> f64 {
    match which {
        StaticParam::Mu => p.mu,
        StaticParam::C => p.c,
        StaticParam::Kappa => p.kappa,
    }
}

fn fd_signs(p: &ModelParams, which: StaticParam) -> [i8; 3] {
    let h = 1e-6 * value_of(p, which).abs().max(1.0);
    let (up, down) = (competition_solve(&bump(p, which, h)), competition_solve(&bump(p, which, -h)));
    let s = |d: f64| {
        if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            0
        }
    };
    [s(up.price - down.price), s(up.profit - down.profit), s(up.consumer_welfare - down.consumer_welfare)]
}

fn near_boundary(p: &ModelParams) -> bool {
    (p.mu - trade_threshold(p.kappa)).abs() < 1e-3 || (p.mu - active_search_threshold(p)).abs() < 1e-3
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn regimes_ordered_in_mu(kappa in 0.05..10.0f64, frac in 0.01..0.99f64) {
        let c = frac * 0.25 / kappa;
        let mut last = 0;
        for i in 0..300 {
            let mu = -3.0 + 6.0 * i as f64 / 299.0;
            let p = ModelParams::new(mu, c, kappa).unwrap();
            let r = rank(competition_solve(&p).regime);
            prop_assert!(r >= last);
            let expect = if mu >= active_search_threshold(&p) { 2 } else if mu >= -0.25 / kappa { 1 } else { 0 };
            prop_assert_eq!(r, expect);
            last = r;
        }
    }

    #[test]
    fn welfare_and_profit_nondecreasing_in_mu(kappa in 0.05..10.0f64, frac in 0.01..0.99f64) {
        let c = frac * 0.25 / kappa;
        let mut prev = competition_solve(&ModelParams::new(-3.0, c, kappa).unwrap());
        for i in 1..300 {
            let mu = -3.0 + 6.0 * i as f64 / 299.0;
            let eq = competition_solve(&ModelParams::new(mu, c, kappa).unwrap());
            prop_assert!(eq.consumer_welfare >= prev.consumer_welfare - 1e-12);
            prop_assert!(eq.profit >= prev.profit - 1e-12);
            prev = eq;
        }
    }

    #[test]
    fn duration_jumps_at_search_threshold(kappa in 0.05..10.0f64, frac in 0.01..0.99f64) {
        let c = frac * 0.25 / kappa;
        let base = ModelParams::new(0.0, c, kappa).unwrap();
        let at = active_search_threshold(&base);
        let above = competition_solve(&base.with_mu(at).unwrap());
        let below = competition_solve(&base.with_mu(at - 1e-9).unwrap());
        prop_assert_eq!(above.regime, Regime::SearchAndLearn);
        prop_assert_eq!(below.expected_duration, 1.0);
        prop_assert!((above.expected_duration - 0.5 / (c * kappa).sqrt()).abs() < 1e-12);
        prop_assert!(above.expected_duration > 1.0);
    }

    #[test]
    fn search_profit_is_twice_cost(p in market()) {
        let eq = competition_solve(&p);
        if eq.regime == Regime::SearchAndLearn {
            prop_assert_eq!(eq.profit, 2.0 * p.c);
        }
    }

    #[test]
    fn analytic_signs_match_finite_differences(p in market()) {
        prop_assume!(competition_solve(&p).regime.has_trade() && !near_boundary(&p));
        for which in [StaticParam::Mu, StaticParam::C, StaticParam::Kappa] {
            let bumped = bump(&p, which, 1e-6 * value_of(&p, which).abs().max(1.0));
            prop_assume!(bumped.c < 0.25 / bumped.kappa);
            let a = comparative_static_signs(&p, which);
            let fd = fd_signs(&p, which);
            // a sign that is a function of 16 c kappa - 1 or 4 kappa |mu| - 1 is only
            // resolvable by differences away from its own root
            let flat_profit = (4.0 * p.kappa * p.mu.abs() - 1.0).abs() < 1e-3;
            let flat_welfare = flat_profit || (16.0 * p.c * p.kappa - 1.0).abs() < 1e-3;
            prop_assert_eq!(a.price, fd[0], "{:?} price", which);
            if !flat_profit {
                prop_assert_eq!(a.profit, fd[1], "{:?} profit", which);
            }
            if !flat_welfare {
                prop_assert_eq!(a.welfare, fd[2], "{:?} welfare", which);
            }
        }
    }

    #[test]
    fn search_equilibrium_certified(p in market()) {
        prop_assume!(competition_solve(&p).regime == Regime::SearchAndLearn);
        prop_assert!(equilibrium_foc_check(&p, 1000).unwrap() <= 0.0);
        prop_assert!(fixed_point_check(&p, p.search_markup()).unwrap() < 1e-10);
    }
}

#[test]
fn case_two_duration_pattern() {
    let part = kappa_case_partition(1.0, 0.3).unwrap();
    let (lo, hi) = (part.kappa_low_obs.unwrap(), part.kappa_high_obs.unwrap());
    assert!((lo - 0.105051).abs() < 1e-5 && (hi - 0.594949).abs() < 1e-5);
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    for _ in 0..2000 {
        let kappa = rng.gen_range(1e-3..(0.25 / 0.3));
        let p = ModelParams::new(1.0, 0.3, kappa).unwrap();
        let eq = competition_solve(&p);
        let expect = if kappa <= lo || kappa >= hi { 0.5 / (0.3 * kappa).sqrt() } else { 1.0 };
        assert_eq!(part.is_active(kappa), eq.regime == Regime::SearchAndLearn);
        assert!((eq.expected_duration - expect).abs() < 1e-12, "kappa {kappa}");
    }
}
