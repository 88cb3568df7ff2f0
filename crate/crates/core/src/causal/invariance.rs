//! Does the causal network depend on the order of rewriting?
//!
//! Every run is taken to completion (no match left). Networks from
//! different runs are compared as DAGs labelled by rule index. With few
//! events every complete schedule is tried; otherwise a seeded sample.

use rayon::prelude::*;
use serde::Serialize;

use super::graph::SpaceGraph;
use super::network::{all_matches, apply_event, build_causal_network, CausalNetwork, Schedule};
use super::rule::RuleSet;
use super::CausalError;

/// Runs with at most this many events are enumerated exhaustively.
pub const DEFAULT_EXHAUSTIVE_EVENTS: usize = 6;

/// Upper bound on complete schedules enumerated before giving up.
pub const MAX_EXHAUSTIVE_SCHEDULES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceConfig {
    /// Event limit per run; a run still able to continue is an error.
    pub steps: usize,
    pub samples: usize,
    pub seed: u64,
    pub exhaustive_events: usize,
}

impl Default for InvarianceConfig {
    fn default() -> Self {
        InvarianceConfig { steps: 64, samples: 32, seed: 0, exhaustive_events: DEFAULT_EXHAUSTIVE_EVENTS }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InvarianceVerdict {
    InvariantOverSample { schedules: usize, exhaustive: bool, events: usize },
    Violated { first: Vec<usize>, second: Vec<usize>, first_events: usize, second_events: usize },
}

impl InvarianceVerdict {
    pub fn is_invariant(&self) -> bool {
        matches!(self, InvarianceVerdict::InvariantOverSample { .. })
    }
}

struct Run {
    choices: Vec<usize>,
    network: CausalNetwork,
}

/// Complete schedules by depth-first search; `None` once a run exceeds
/// `max_events` or the schedule count passes the cap.
fn exhaustive_runs(g: &SpaceGraph, rules: &RuleSet, max_events: usize) -> Result<Option<Vec<Run>>, CausalError> {
    fn go(
        g: &SpaceGraph,
        rules: &RuleSet,
        net: &CausalNetwork,
        choices: &mut Vec<usize>,
        max_events: usize,
        out: &mut Vec<Run>,
    ) -> Result<bool, CausalError> {
        let matches = all_matches(g, rules)?;
        if matches.is_empty() {
            out.push(Run { choices: choices.clone(), network: net.clone() });
            return Ok(out.len() <= MAX_EXHAUSTIVE_SCHEDULES);
        }
        if choices.len() == max_events {
            return Ok(false);
        }
        for (i, (rule, site)) in matches.iter().enumerate() {
            let mut h = g.clone();
            let mut n = net.clone();
            apply_event(&mut h, rules, &mut n, *rule, site)?;
            choices.push(i);
            let ok = go(&h, rules, &n, choices, max_events, out)?;
            choices.pop();
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
    let mut out = Vec::new();
    let net = CausalNetwork { base: g.events(), ..CausalNetwork::default() };
    let ok = go(g, rules, &net, &mut Vec::new(), max_events, &mut out)?;
    Ok(ok.then_some(out))
}

fn sampled_runs(g: &SpaceGraph, rules: &RuleSet, cfg: &InvarianceConfig) -> Result<Vec<Run>, CausalError> {
    (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i);
            let r = build_causal_network(g, rules, &Schedule::Random(seed), cfg.steps)?;
            if !r.terminated {
                return Err(CausalError::LimitExceeded { steps: cfg.steps });
            }
            Ok(Run { choices: r.choices, network: r.network })
        })
        .collect()
}

/// Builds complete causal networks under many schedules and compares them.
pub fn causal_invariance_test(
    g: &SpaceGraph,
    rules: &RuleSet,
    cfg: &InvarianceConfig,
) -> Result<InvarianceVerdict, CausalError> {
    let limit = cfg.exhaustive_events.min(cfg.steps);
    let (runs, exhaustive) = match exhaustive_runs(g, rules, limit)? {
        Some(runs) => (runs, true),
        None => {
            if cfg.samples == 0 {
                return Err(CausalError::NoSamples);
            }
            (sampled_runs(g, rules, cfg)?, false)
        }
    };
    let reference = &runs[0];
    for run in &runs[1..] {
        if !reference.network.same_shape(&run.network) {
            return Ok(InvarianceVerdict::Violated {
                first: reference.choices.clone(),
                second: run.choices.clone(),
                first_events: reference.network.len(),
                second_events: run.network.len(),
            });
        }
    }
    Ok(InvarianceVerdict::InvariantOverSample { schedules: runs.len(), exhaustive, events: reference.network.len() })
}
