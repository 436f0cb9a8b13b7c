use proptest::prelude::*;

use infobroker::complement::{
    complement_binary, complement_bruteforce, complement_diagonal_simple, BruteForceConfig,
};
use infobroker::mechanism::{best_deviation, build_menu_binary, Choice};
use infobroker::random;
use infobroker::rational::{int, rat};
use infobroker::scenario::{parse_scenario, MenuEntry, MenuSpec, ScenarioFile, TypeEntry};
use infobroker::{IntervalSet, Signal};

fn grid_set(bits: u16, q: i64) -> IntervalSet {
    let mut s = IntervalSet::empty();
    for k in 0..q {
        if bits & (1 << k) != 0 {
            s = s.union(&IntervalSet::interval(rat(k, q), rat(k + 1, q)).unwrap());
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interval_measure_is_modular(a in any::<u16>(), b in any::<u16>()) {
        let (x, y) = (grid_set(a, 12), grid_set(b, 12));
        prop_assert_eq!(
            x.union(&y).measure() + x.intersection(&y).measure(),
            x.measure() + y.measure()
        );
        prop_assert_eq!(x.complement().measure(), int(1) - x.measure());
        prop_assert!(x.difference(&y).intersection(&y).is_empty());
        prop_assert_eq!(x.measure(), rat((a & 0x0fff).count_ones() as i64, 12));
    }

    #[test]
    fn binary_complement_is_complete_and_dominant(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let p = random::binary_problem(&mut rng, 3);
        let own = random::signal(&mut rng, "own", p.states(), 3);
        let c = complement_binary(&own, &p).unwrap();
        prop_assert_eq!(p.exante_payoff(&own.join(&c.complement).unwrap()).unwrap(), p.full_info_payoff());
        prop_assert!(c.complement.messages().len() <= 2);
        let v_own = p.incremental_value(&c.complement, &own).unwrap().increment;
        let other = random::signal(&mut rng, "other", p.states(), 3);
        prop_assert!(p.incremental_value(&c.complement, &other).unwrap().increment <= v_own);
    }

    #[test]
    fn oracle_never_exceeds_a_grid_candidate(seed in any::<u64>()) {
        // keep/switch of a grid signal is itself a 2-message grid signal, so
        // the exhaustive minimum can only be lower or equal.
        let mut rng = random::rng(seed);
        let p = random::binary_problem(&mut rng, 2);
        let own = random::grid_signal(&mut rng, "own", p.states(), 3, 4);
        let keep_switch = complement_binary(&own, &p).unwrap();
        let brute = complement_bruteforce(&own, &p, &BruteForceConfig::new(2, 4)).unwrap();
        prop_assert!(brute.u_complement <= keep_switch.u_complement);
        prop_assert_eq!(p.exante_payoff(&own.join(&brute.complement).unwrap()).unwrap(), p.full_info_payoff());
    }

    #[test]
    fn diagonal_complement_matches_simple_payoff(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = random::rng(seed);
        let p = random::diagonal_problem(&mut rng, n);
        let own = random::simple_signal(&mut rng, "own", p.states());
        prop_assert_eq!(p.simple_signal_payoff(&own).unwrap(), p.exante_payoff(&own).unwrap());
        let c = complement_diagonal_simple(&own, &p).unwrap();
        prop_assert_eq!(c.u_join, p.full_info_payoff());
        prop_assert_eq!(p.simple_signal_payoff(&c.complement).unwrap(), c.u_complement);
    }

    #[test]
    fn built_menus_leave_no_profitable_deviation(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let p = random::binary_problem(&mut rng, 3);
        let types = random::type_space(&mut rng, &p, 4, 3).unwrap();
        let menu = build_menu_binary(&types, &p).unwrap();
        for (id, _) in types.types() {
            let d = best_deviation(id, &menu, &types, &p).unwrap();
            prop_assert_eq!(d.choice, Choice::Item(id.clone()));
            prop_assert_eq!(d.net, int(0));
        }
    }

    #[test]
    fn normalize_is_idempotent_and_label_blind(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let states = random::state_ids(3);
        let s = random::signal(&mut rng, "s", &states, 4);
        let n = s.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert!(s.same_partition(&n));
        let relabelled = Signal::new(
            "r",
            states.clone(),
            s.messages().iter().enumerate()
                .map(|(i, m)| infobroker::Message::new(format!("r{i}"), m.support().to_vec()))
                .collect(),
        ).unwrap();
        prop_assert_eq!(relabelled.partition_key(), s.partition_key());
    }

    #[test]
    fn scenarios_round_trip(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let problem = random::binary_problem(&mut rng, 3);
        let signals: Vec<Signal> = (0..3)
            .map(|i| random::signal(&mut rng, &format!("sig{i}"), problem.states(), 3))
            .collect();
        let scenario = ScenarioFile {
            types: Some(vec![
                TypeEntry { id: "t0".into(), signal: "sig0".into(), weight: rat(1, 3) },
                TypeEntry { id: "t1".into(), signal: "trivial".into(), weight: rat(2, 3) },
            ]),
            menus: vec![MenuSpec {
                name: "m".into(),
                items: vec![
                    MenuEntry { type_id: "t0".into(), signal: "sig1".into(), price: rat(7, 5) },
                    MenuEntry { type_id: "t1".into(), signal: "full".into(), price: int(2) },
                ],
            }],
            problem,
            signals,
        };
        let text = scenario.serialize();
        let back = parse_scenario(&text).unwrap();
        prop_assert_eq!(&back, &scenario);
        prop_assert_eq!(back.serialize(), text);
    }
}
