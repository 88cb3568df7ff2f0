//! Ancestors and predecessors of elementary CA configurations.
//!
//! - [`has_ancestor`] and [`preimages_one_step`] scan the row once, left to
//!   right, tracking feasible `(left, center)` pairs.
//! - [`exists_initial_exact_t`] decides exact-`t` reachability on a ring by
//!   joining tables of `(2t + 1)`-cell blocks, for `t` logarithmic in the
//!   width.
//! - [`solve_init`] walks back level by level holding every predecessor,
//!   giving up once a level exceeds the caller's bound. Because each row has
//!   exactly one successor, the mean number of `t`-step predecessors over
//!   all `2^n` endings is exactly 1, so by Markov's inequality at most a
//!   `1/bound` fraction of endings have more than `bound` of them;
//!   [`predecessor_count_stats`] measures this.

mod exact;
mod scan;
mod solve;
mod stats;

pub use exact::{exists_initial_exact_t, exists_initial_exact_t_with_budget, ExactError, DEFAULT_BLOCK_BUDGET};
pub use scan::{has_ancestor, preimages_one_step, Work};
pub use solve::{solve_init, InitProblem, OutcomeKind, Predicate, PredicateParseError, SolveError, SolveOutcome};
pub use stats::{
    level_sizes, predecessor_count_stats, predecessor_count_stats_with, PredecessorStats, StatsError, StatsMode,
    DEFAULT_EXHAUSTIVE_LIMIT, SAMPLE_LIST_CEILING,
};
