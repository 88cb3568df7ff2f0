use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallprog::causal::generators::*;
use smallprog::causal::*;

fn closed(vertices: usize, edges: &[[usize; 2]]) -> RuleGraph {
    RuleGraph { vertices, edges: edges.to_vec(), boundary: vec![] }
}

fn theta_g() -> RuleGraph {
    closed(2, &[[0, 1], [0, 1], [0, 1]])
}

fn k4_g() -> RuleGraph {
    closed(4, &[[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]])
}

fn k33_g() -> RuleGraph {
    closed(6, &[[0, 3], [0, 4], [0, 5], [1, 3], [1, 4], [1, 5], [2, 3], [2, 4], [2, 5]])
}

/// Terminating and non-terminating rules, some overlapping, some not.
fn corpus() -> Vec<UpdateRule> {
    let tri = RuleGraph { vertices: 3, edges: vec![[0, 1], [1, 2], [2, 0]], boundary: vec![0, 1, 2] };
    let vertex = RuleGraph { vertices: 1, edges: vec![], boundary: vec![0, 0, 0] };
    let diamond = RuleGraph { vertices: 4, edges: vec![[0, 2], [0, 3], [1, 2], [1, 3], [2, 3]], boundary: vec![0, 1] };
    let digon = RuleGraph { vertices: 2, edges: vec![[0, 1], [0, 1]], boundary: vec![0, 1] };
    vec![
        UpdateRule::new("theta-k4", theta_g(), k4_g()).unwrap(),
        UpdateRule::new("k4-k33", k4_g(), k33_g()).unwrap(),
        UpdateRule::new("triangle-vertex", tri, vertex).unwrap(),
        UpdateRule::new("diamond-digon", diamond, digon).unwrap(),
        UpdateRule::new("k33-theta", k33_g(), theta_g()).unwrap(),
    ]
}

fn host(rng: &mut ChaCha8Rng) -> SpaceGraph {
    let parts = rng.gen_range(1..=3);
    let pieces: Vec<SpaceGraph> = (0..parts)
        .map(|_| match rng.gen_range(0..5) {
            0 => theta(),
            1 => complete4(),
            2 => prism_ladder(3),
            3 => complete_bipartite33(),
            _ => random_trivalent(2 * rng.gen_range(1..=4), rng.gen()),
        })
        .collect();
    disjoint_union(&pieces)
}

#[test]
fn overlap_free_sets_are_invariant_in_a_random_sweep() {
    let rules = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut free_runs, mut free_with_events, mut violations, mut runaway) = (0, 0, 0, 0);
    for _ in 0..400 {
        let k = rng.gen_range(1..=3);
        let mut chosen: Vec<UpdateRule> = rules.choose_multiple(&mut rng, k).cloned().collect();
        chosen.sort_by(|a, b| a.name.cmp(&b.name));
        let set = RuleSet::new(chosen);
        let g = host(&mut rng);
        let free = check_overlap_freedom(&set).overlap_free;
        let cfg = InvarianceConfig { steps: 24, samples: 8, seed: rng.gen(), ..InvarianceConfig::default() };
        match causal_invariance_test(&g, &set, &cfg) {
            Ok(v) => {
                if free {
                    assert!(v.is_invariant(), "overlap-free set {:?} violated: {v:?}", set.rules);
                    free_runs += 1;
                    if let InvarianceVerdict::InvariantOverSample { events, .. } = v {
                        free_with_events += usize::from(events > 1);
                    }
                } else if !v.is_invariant() {
                    violations += 1;
                }
            }
            Err(CausalError::LimitExceeded { .. }) => runaway += 1,
            Err(e) => panic!("{e}"),
        }
    }
    assert!(free_runs > 30 && free_with_events > 10, "{free_runs} {free_with_events}");
    assert!(violations > 0 && runaway > 0, "{violations} {runaway}");
}

#[test]
fn corpus_overlap_classification() {
    let rules = corpus();
    let set = |idx: &[usize]| RuleSet::new(idx.iter().map(|&i| rules[i].clone()).collect());
    assert!(check_overlap_freedom(&set(&[0, 1, 4])).overlap_free);
    for bad in [&[2][..], &[3], &[2, 3], &[0, 2]] {
        assert!(!check_overlap_freedom(&set(bad)).overlap_free, "{bad:?}");
    }
}

#[test]
fn chained_closed_rules_are_invariant_exhaustively() {
    let rules = corpus();
    let set = RuleSet::new(vec![rules[0].clone(), rules[1].clone()]);
    let g = disjoint_union(&[theta(), theta(), complete4()]);
    let v = causal_invariance_test(&g, &set, &InvarianceConfig::default()).unwrap();
    // interleavings of chains of length 2, 2 and 1
    assert_eq!(v, InvarianceVerdict::InvariantOverSample { schedules: 30, exhaustive: true, events: 5 });
    let r = build_causal_network(&g, &set, &Schedule::FixedOrder, 10).unwrap();
    assert_eq!(r.network.dependencies.len(), 2);
}

#[test]
fn overlapping_counterexample_has_a_witness() {
    let set = RuleSet::new(vec![UpdateRule::triangle_to_vertex()]);
    assert!(!check_overlap_freedom(&set).overlap_free);
    let g = prism_ladder(3);
    let v = causal_invariance_test(&g, &set, &InvarianceConfig::default()).unwrap();
    let InvarianceVerdict::Violated { first, second, .. } = v else { panic!("{v:?}") };
    let a = build_causal_network(&g, &set, &Schedule::Explicit(first), 10).unwrap().network;
    let b = build_causal_network(&g, &set, &Schedule::Explicit(second), 10).unwrap().network;
    // one order makes the second contraction use the first one's vertex
    let mut deps = [a.dependencies.len(), b.dependencies.len()];
    deps.sort_unstable();
    assert_eq!(deps, [0, 1]);
}

#[test]
fn k4_vertex_to_triangle_hand_trace() {
    let set = RuleSet::new(vec![UpdateRule::vertex_to_triangle()]);
    let r = build_causal_network(&complete4(), &set, &Schedule::FixedOrder, 4).unwrap();
    assert_eq!(r.network.len(), 4);
    assert_eq!(r.graph.vertex_count(), 4 + 2 * 4);
    assert_eq!(r.graph.edge_count(), 18);
    // the truncated tetrahedron: every vertex on exactly one triangle
    let tri = UpdateRule::triangle_to_vertex();
    assert_eq!(find_matches(&r.graph, &tri).unwrap().len(), 4);
}

fn relabel_perm(n: u32, seed: u64) -> Vec<u32> {
    let mut p: Vec<u32> = (0..n).map(|i| 1000 + 7 * i).collect();
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn builds_stay_trivalent_and_sound(n in 1u32..6, gseed in any::<u64>(), sseed in any::<u64>(), steps in 0usize..12) {
        let g = random_trivalent(2 * n, gseed);
        let set = RuleSet::new(vec![UpdateRule::vertex_to_triangle(), UpdateRule::triangle_to_vertex()]);
        let mut h = g.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(sseed);
        for _ in 0..steps {
            let ms = all_matches(&h, &set).unwrap();
            if ms.is_empty() {
                break;
            }
            let (rule, site) = &ms[rng.gen_range(0..ms.len())];
            apply_in_place(&mut h, &set.rules[*rule], site).unwrap();
            h.check_trivalent().unwrap();
        }
        let a = build_causal_network(&g, &set, &Schedule::Random(sseed), steps).unwrap();
        a.network.check().unwrap();
        a.graph.check_trivalent().unwrap();
        let b = build_causal_network(&g, &set, &Schedule::Random(sseed), steps).unwrap();
        prop_assert_eq!(&a, &b);
        for &(x, y) in &a.network.dependencies {
            prop_assert!(a.network.events[(y - 1) as usize].site_tags.contains(&x));
        }
    }

    #[test]
    fn dimension_ignores_labels(seed in any::<u64>()) {
        let g = prism_ladder(30);
        let perm = relabel_perm(60, seed);
        let h = g.relabelled(|v| perm[v as usize]).unwrap();
        let centers = [0u32, 11, 29, 45, 59];
        let mapped: Vec<u32> = centers.iter().map(|&c| perm[c as usize]).collect();
        let a = estimate_dimension(&g, &centers, 2, 10).unwrap();
        let b = estimate_dimension(&h, &mapped, 2, 10).unwrap();
        prop_assert_eq!(a, b);
    }
}
