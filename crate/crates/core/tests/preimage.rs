use proptest::prelude::*;
use smallprog::ca::*;
use smallprog::preimage::*;

fn rule110() -> RuleTable {
    RuleTable::from_number(110).unwrap()
}

/// `reach[e]`: some ring of width `n` evolves to `e` in exactly `t` steps.
fn forward_reach(n: usize, t: usize, r: &RuleTable) -> Vec<bool> {
    let mut reach = vec![false; 1 << n];
    for x in 0..1u64 << n {
        let mut y = x;
        for _ in 0..t {
            y = step_word(y, n, r, Boundary::Cyclic);
        }
        reach[y as usize] = true;
    }
    reach
}

#[test]
fn exact_and_solver_agree_with_forward_evolution() {
    let r = rule110();
    for n in 6..=9 {
        for t in 1..=3 {
            let reach = forward_reach(n, t, &r);
            for e in 0..1u64 << n {
                let ending = Configuration::from_index(e, n, Boundary::Cyclic).unwrap();
                assert_eq!(exists_initial_exact_t(&ending, &r, t).unwrap(), reach[e as usize], "n {n} t {t} e {e}");
                let out = solve_init(&InitProblem::rule110(ending, t, Predicate::AlwaysTrue, 1 << n)).unwrap();
                assert_eq!(matches!(out.kind, OutcomeKind::Found { .. }), reach[e as usize]);
            }
        }
    }
}

#[test]
fn mean_predecessor_count_is_one() {
    for n in [4, 7, 10] {
        let s = predecessor_count_stats(n, 3, &rule110(), StatsMode::Exhaustive, 10).unwrap();
        assert_eq!(s.mean_exact, Some(num_rational::Ratio::from_integer(1)));
        assert!(s.abort_fraction <= 0.1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planted_rows_are_recovered(bits in prop::collection::vec(any::<bool>(), 5..24), t in 1usize..4) {
        let r = rule110();
        let init = Configuration::from_bits(bits, Boundary::Cyclic).unwrap();
        let ending = evolve_final(&init, &r, t);
        prop_assert!(has_ancestor(&step(&init, &r), &r));
        prop_assert!(preimages_one_step(&step(&init, &r), &r).contains(&init));
        if 2 * t + 1 <= init.len() {
            prop_assert!(exists_initial_exact_t(&ending, &r, t).unwrap());
        }
        let out = solve_init(&InitProblem::rule110(ending.clone(), t, Predicate::AlwaysTrue, 1 << 16)).unwrap();
        match out.kind {
            OutcomeKind::Found { initial } => {
                prop_assert!(initial <= init);
                prop_assert_eq!(evolve_final(&initial, &r, t), ending);
            }
            OutcomeKind::Aborted { .. } => {}
            OutcomeKind::None => prop_assert!(false, "planted row missed"),
        }
    }

    #[test]
    fn one_step_preimages_are_exact(bits in prop::collection::vec(any::<bool>(), 1..12), rule in any::<u8>()) {
        let r = RuleTable::from_number(i64::from(rule)).unwrap();
        let e = Configuration::from_bits(bits, Boundary::Cyclic).unwrap();
        let n = e.len();
        let mut want: Vec<Configuration> = (0..1u64 << n)
            .map(|i| Configuration::from_index(i, n, Boundary::Cyclic).unwrap())
            .filter(|c| step(c, &r) == e)
            .collect();
        want.sort();
        let mut got = preimages_one_step(&e, &r);
        got.sort();
        prop_assert_eq!(has_ancestor(&e, &r), !want.is_empty());
        prop_assert_eq!(got, want);
    }
}
