//! Distribution of `|{I : step^t(I) = E}|` over uniformly random endings.

use std::ops::ControlFlow;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::scan::{for_each_preimage, Work};
use crate::ca::{step_word, Boundary, Configuration, RuleTable};

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 16;

/// Largest predecessor list a sampled ending may produce.
pub const SAMPLE_LIST_CEILING: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum StatsMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("exhaustive mode needs width <= {limit}, got {width}")]
    LimitExceeded { width: usize, limit: usize },
    #[error("a sampled ending produced more than {0} predecessors")]
    ListCeiling(usize),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("width must be between 1 and 64")]
    BadWidth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredecessorStats {
    pub width: usize,
    pub steps: usize,
    pub rule: u8,
    pub endings: u64,
    /// Mean number of `t`-step predecessors per ending.
    pub mean: f64,
    /// The same mean as an exact fraction; exhaustive mode only.
    #[serde(serialize_with = "serialize_ratio")]
    pub mean_exact: Option<Ratio<u64>>,
    pub max: u64,
    pub threshold: u64,
    /// Endings whose `t`-step predecessor count exceeds the threshold.
    pub fraction_exceeding: f64,
    /// Endings for which some list of `1..=t`-step predecessors exceeds the
    /// threshold, i.e. the level-by-level solver with `bound = threshold`
    /// aborts.
    pub abort_fraction: f64,
}

fn serialize_ratio<S: serde::Serializer>(r: &Option<Ratio<u64>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

pub fn predecessor_count_stats(
    width: usize,
    steps: usize,
    rule: &RuleTable,
    mode: StatsMode,
    threshold: u64,
) -> Result<PredecessorStats, StatsError> {
    predecessor_count_stats_with(width, steps, rule, mode, threshold, Boundary::Cyclic, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn predecessor_count_stats_with(
    width: usize,
    steps: usize,
    rule: &RuleTable,
    mode: StatsMode,
    threshold: u64,
    boundary: Boundary,
    exhaustive_limit: usize,
) -> Result<PredecessorStats, StatsError> {
    if width == 0 || width > 64 {
        return Err(StatsError::BadWidth);
    }
    match mode {
        StatsMode::Exhaustive => {
            if width > exhaustive_limit {
                return Err(StatsError::LimitExceeded { width, limit: exhaustive_limit });
            }
            Ok(exhaustive(width, steps, rule, threshold, boundary))
        }
        StatsMode::Sampled { count, seed } => sampled(width, steps, rule, count, seed, threshold, boundary),
    }
}

fn exhaustive(width: usize, steps: usize, rule: &RuleTable, threshold: u64, boundary: Boundary) -> PredecessorStats {
    let size = 1usize << width;
    let image: Vec<u32> = (0..size as u64)
        .into_par_iter()
        .map(|x| step_word(x, width, rule, boundary) as u32)
        .collect();
    // counts[e] = |step^-k(e)|, advanced one level at a time
    let mut counts = vec![1u64; size];
    let mut aborts = vec![false; size];
    for _ in 0..steps {
        let mut next = vec![0u64; size];
        for (x, &c) in counts.iter().enumerate() {
            next[image[x] as usize] += c;
        }
        counts = next;
        for (flag, &c) in aborts.iter_mut().zip(&counts) {
            *flag |= c > threshold;
        }
    }
    let total: u64 = counts.iter().sum();
    let endings = size as u64;
    PredecessorStats {
        width,
        steps,
        rule: rule.number(),
        endings,
        mean: total as f64 / endings as f64,
        mean_exact: Some(Ratio::new(total, endings)),
        max: counts.iter().copied().max().unwrap_or(0),
        threshold,
        fraction_exceeding: counts.iter().filter(|&&c| c > threshold).count() as f64 / endings as f64,
        abort_fraction: aborts.iter().filter(|&&a| a).count() as f64 / endings as f64,
    }
}

/// Sizes of the predecessor lists `1..=steps` levels back from `e`.
pub fn level_sizes(e: &Configuration, rule: &RuleTable, steps: usize, ceiling: usize) -> Result<Vec<u64>, StatsError> {
    let mut sizes = Vec::with_capacity(steps);
    let mut level = vec![e.clone()];
    let mut work = Work::default();
    for _ in 0..steps {
        let mut next = Vec::new();
        for c in &level {
            let flow = for_each_preimage(c, rule, &mut work, |pre| {
                next.push(pre);
                if next.len() > ceiling {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if flow.is_break() {
                return Err(StatsError::ListCeiling(ceiling));
            }
        }
        sizes.push(next.len() as u64);
        level = next;
    }
    Ok(sizes)
}

fn sampled(
    width: usize,
    steps: usize,
    rule: &RuleTable,
    count: u64,
    seed: u64,
    threshold: u64,
    boundary: Boundary,
) -> Result<PredecessorStats, StatsError> {
    if count == 0 {
        return Err(StatsError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    let endings: Vec<u64> = (0..count).map(|_| rng.gen::<u64>() & mask).collect();
    let sizes = endings
        .par_iter()
        .map(|&e| {
            let c = Configuration::from_index(e, width, boundary).expect("width checked");
            level_sizes(&c, rule, steps, SAMPLE_LIST_CEILING)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let finals: Vec<u64> = sizes.iter().map(|s| s.last().copied().unwrap_or(1)).collect();
    let total: u64 = finals.iter().sum();
    Ok(PredecessorStats {
        width,
        steps,
        rule: rule.number(),
        endings: count,
        mean: total as f64 / count as f64,
        mean_exact: None,
        max: finals.iter().copied().max().unwrap_or(0),
        threshold,
        fraction_exceeding: finals.iter().filter(|&&c| c > threshold).count() as f64 / count as f64,
        abort_fraction: sizes.iter().filter(|s| s.iter().any(|&c| c > threshold)).count() as f64 / count as f64,
    })
}
