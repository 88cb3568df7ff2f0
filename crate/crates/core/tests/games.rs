use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use smallprog::games::*;

/// Real rotations on the Bell pair: outputs agree with probability
/// `cos^2(a - b)`.
fn chsh_oracle(a: [f64; 2], b: [f64; 2]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, slot) in out.iter_mut().enumerate() {
        let (xa, xb) = (i >> 1, i & 1);
        let same = (a[xa] - b[xb]).cos().powi(2);
        *slot = if xa & xb == 1 { 1.0 - same } else { same };
    }
    out
}

#[test]
fn chsh_matches_the_closed_form_at_defaults() {
    let q = chsh_quantum(DEFAULT_ANGLES[0], DEFAULT_ANGLES[1]);
    let want = chsh_oracle([0.0, DEFAULT_ANGLES[0]], [0.0, DEFAULT_ANGLES[1]]);
    for (g, w) in q.per_input.iter().zip(want) {
        assert!((g - w).abs() < 1e-12);
    }
    assert!((q.success - 0.801_776_695_296_636_9).abs() < 1e-9);
}

#[test]
fn classical_values_by_brute_force() {
    // every pair, against a direct count over inputs
    for a in Response::ALL {
        for b in Response::ALL {
            let wins = (0..4).filter(|i| {
                let (xa, xb) = (i >> 1 == 1, i & 1 == 1);
                (a.apply(xa) != b.apply(xb)) == (xa && xb)
            });
            assert_eq!(chsh_value(a, b), Ratio::new(wins.count() as u64, 4));
        }
    }
    assert_eq!(chsh_classical_optimum().value.0, Ratio::new(3, 4));
    assert_eq!(ghz_classical_exhaustive().max_wins, 3);
}

#[test]
fn ghz_protocol_is_perfect_and_predicate_consistent() {
    for &x in &PROMISE_INPUTS {
        let d = ghz_outcome_distribution(GHZ_PROTOCOL, x);
        let win: f64 = d.iter().enumerate().filter(|&(o, _)| ghz_wins(x, [o & 4 != 0, o & 2 != 0, o & 1 != 0])).map(|(_, p)| p).sum();
        assert!((win - 1.0).abs() < 1e-9);
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
    assert!(matches!(ghz_success(GHZ_PROTOCOL, [true, false, false]), Err(GameError::OutsidePromise(_))));
}

#[test]
fn bounded_family_supports_the_local_bound() {
    let s = family_sweep();
    assert_eq!(s.protocols, FAMILY_SIZE);
    assert_eq!(s.counterexamples, 0);
    assert!(s.best_discrepancy_free.0 <= Ratio::new(3, 4));
    assert_eq!(s.best_discrepancy_free.0, Ratio::new(3, 4));
    assert!(s.exceeding > 0);
    assert_eq!(s.exceeding_with_discrepancy, s.exceeding);
    let example = s.example.unwrap().protocol();
    let r = order_robustness_check(&example).unwrap();
    assert!(!r.is_robust() && !r.discrepancies.is_empty());
}

fn arb_operator() -> impl Strategy<Value = Operator> {
    (0.0..2.0 * PI, 0.0..2.0 * PI, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(t, a, b, g)| {
        let (s, c) = t.sin_cos();
        let e = |x: f64| Complex64::from_polar(1.0, x);
        [[e(a) * c, -e(a + g) * s], [e(a + b) * s, e(a + b + g) * c]]
    })
}

fn arb_state() -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8).prop_filter_map("zero vector", |v| {
        let a: Vec<Complex64> = v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
        let n = a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        (n > 1e-3).then(|| StateVector::new(a.into_iter().map(|x| x / n).collect()).unwrap())
    })
}

/// Random programs over a few shared bits with optional constant inits.
fn arb_protocol() -> impl Strategy<Value = ThreadProtocol> {
    let names = ["x_A", "x_B", "y_A", "y_B", "a", "b", "s", "t"];
    let sides = [Side::Alice, Side::Bob, Side::Alice, Side::Bob, Side::Alice, Side::Bob, Side::Shared, Side::Shared];
    let instr = (2usize..8, prop::collection::vec(0usize..8, 0..4), any::<u64>());
    (prop::collection::vec(instr, 0..7), any::<[bool; 4]>()).prop_map(move |(prog, random)| {
        let mut variables = vec![];
        for (i, (&n, &side)) in names.iter().zip(&sides).enumerate() {
            let init = match i {
                0 | 1 => Init::Input,
                2 | 3 => Init::Zero,
                _ if random[i - 4] => Init::Random,
                _ => Init::One,
            };
            variables.push(Variable::new(n, side, init));
        }
        let program = prog
            .into_iter()
            .filter_map(|(target, inputs, table)| {
                // keep only instructions that stay on one side
                let touched: Vec<Side> = std::iter::once(target).chain(inputs.iter().copied()).map(|v| sides[v]).collect();
                if touched.contains(&Side::Alice) && touched.contains(&Side::Bob) {
                    return None;
                }
                let t: String = (0..1 << inputs.len()).map(|i| if table >> i & 1 == 1 { '1' } else { '0' }).collect();
                let ins: Vec<&str> = inputs.iter().map(|&v| names[v]).collect();
                Some(Instruction::new(names[target], &ins, &t))
            })
            .collect();
        ThreadProtocol { variables, program, outputs: Outputs { alice: "y_A".into(), bob: "y_B".into() } }
    })
}

proptest! {
    #[test]
    fn chsh_quantum_matches_oracle(a in -PI..PI, b in -PI..PI) {
        let q = chsh_quantum(a, b);
        let want = chsh_oracle([0.0, a], [0.0, b]);
        for (g, w) in q.per_input.iter().zip(want) {
            prop_assert!((g - w).abs() < 1e-9);
        }
        prop_assert!(q.success <= (2.0 + 2f64.sqrt()) / 4.0 + 1e-9);
    }

    #[test]
    fn local_operations_preserve_norm(s in arb_state(), u in arb_operator(), q in 0usize..3) {
        check_unitary(&u).unwrap();
        let mut s = s;
        s.apply(q, &u).unwrap();
        prop_assert!((s.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mixtures_never_beat_three_quarters(w in prop::collection::vec(0u32..100, 16)) {
        let total: u64 = w.iter().map(|&x| u64::from(x)).sum();
        prop_assume!(total > 0);
        let mut value = Ratio::new(0u64, 1);
        for (i, &wi) in w.iter().enumerate() {
            value += chsh_value(Response::ALL[i / 4], Response::ALL[i % 4]) * u64::from(wi);
        }
        prop_assert!(value / total <= Ratio::new(3, 4));
    }

    #[test]
    fn discrepancy_free_protocols_are_local(p in arb_protocol()) {
        let r = order_robustness_check(&p).unwrap();
        prop_assert_eq!(&r, &order_robustness_check(&p).unwrap());
        if r.is_robust() {
            let v = lhv_bound_theorem_check(&p).unwrap();
            prop_assert!(v.reproduces_protocol && v.within_classical_bound);
            prop_assert!(r.success_first <= Exact(Ratio::new(3, 4)));
        } else {
            prop_assert!(lhv_bound_theorem_check(&p).is_err());
        }
        for m in marginal_invariance_check(&p).unwrap() {
            prop_assert!(m.distance.0 <= Ratio::new(1, 1));
        }
    }
}
