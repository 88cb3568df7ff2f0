use proptest::prelude::*;
use smallprog::ca::*;

fn naive(bits: &[bool], rule: u8, boundary: Boundary) -> Vec<bool> {
    let n = bits.len();
    let at = |j: isize| match boundary {
        Boundary::Cyclic => bits[j.rem_euclid(n as isize) as usize],
        Boundary::FixedZero => j >= 0 && (j as usize) < n && bits[j as usize],
    };
    (0..n as isize)
        .map(|j| {
            let idx = 4 * usize::from(at(j - 1)) + 2 * usize::from(at(j)) + usize::from(at(j + 1));
            rule >> idx & 1 == 1
        })
        .collect()
}

fn boundary() -> impl Strategy<Value = Boundary> {
    prop_oneof![Just(Boundary::Cyclic), Just(Boundary::FixedZero)]
}

#[test]
fn recurrence_gives_rule_110() {
    let r = RuleTable::rule110_from_recurrence();
    assert_eq!(r, RuleTable::from_number(110).unwrap());
    // p + q - (1 + o) p q on every neighbourhood
    for idx in 0..8i64 {
        let (o, p, q) = (idx >> 2 & 1, idx >> 1 & 1, idx & 1);
        assert_eq!(i64::from(r.entries()[idx as usize]), p + q - (1 + o) * p * q);
    }
}

#[test]
fn rule_110_diagram_from_a_single_cell() {
    let r = RuleTable::from_number(110).unwrap();
    let d = evolve(&Configuration::single(5, Boundary::Cyclic).unwrap(), &r, 1);
    assert_eq!(d.rows()[1].to_bitstring(), "01100");
    let d = evolve(&Configuration::single(101, Boundary::Cyclic).unwrap(), &r, 40);
    // rule 110 grows to the left only
    for (i, row) in d.rows().iter().enumerate() {
        let first = row.iter().position(|b| b).unwrap();
        assert_eq!(first, 50 - i, "row {i}");
        assert!(!row.iter().skip(51).any(|b| b));
    }
}

proptest! {
    #[test]
    fn step_matches_naive(bits in prop::collection::vec(any::<bool>(), 1..300), rule in any::<u8>(), b in boundary()) {
        let c = Configuration::from_bits(bits.clone(), b).unwrap();
        let r = RuleTable::from_number(i64::from(rule)).unwrap();
        let next = step(&c, &r);
        prop_assert_eq!(next.len(), bits.len());
        prop_assert_eq!(next.iter().collect::<Vec<_>>(), naive(&bits, rule, b));
    }

    #[test]
    fn evolve_rows_are_steps(bits in prop::collection::vec(any::<bool>(), 1..80), rule in any::<u8>(), t in 0usize..20) {
        let c = Configuration::from_bits(bits, Boundary::Cyclic).unwrap();
        let r = RuleTable::from_number(i64::from(rule)).unwrap();
        let d = evolve(&c, &r, t);
        prop_assert_eq!(d.rows().len(), t + 1);
        for w in d.rows().windows(2) {
            prop_assert_eq!(&w[1], &step(&w[0], &r));
        }
        prop_assert_eq!(d.last(), &evolve_final(&c, &r, t));
    }

    #[test]
    fn identity_rule_fixes_everything(bits in prop::collection::vec(any::<bool>(), 1..200), b in boundary()) {
        let c = Configuration::from_bits(bits, b).unwrap();
        prop_assert_eq!(step(&c, &RuleTable::from_number(204).unwrap()), c);
    }

    #[test]
    fn bitstrings_round_trip(bits in prop::collection::vec(any::<bool>(), 1..200)) {
        let c = Configuration::from_bits(bits, Boundary::Cyclic).unwrap();
        prop_assert_eq!(Configuration::parse(&c.to_bitstring(), Boundary::Cyclic).unwrap(), c);
    }
}
