//! Rewriting trivalent graphs and the causal networks it produces.
//!
//! A rule replaces an embedded pattern by a replacement with the same
//! number of boundary half-edges. Every vertex and edge carries the id of
//! the event that created it (0 for the input), and an event depends on
//! each earlier event whose creations it rewrites or attaches to.

mod dimension;
pub mod generators;
mod graph;
mod invariance;
mod matching;
mod network;
mod overlap;
mod rule;

use thiserror::Error;

pub use dimension::{diameter, estimate_dimension, DimensionEstimate};
pub use graph::{isomorphic, Edge, EdgeEnd, EdgeId, EventId, GraphFile, SpaceGraph, VertexId};
pub use invariance::{
    causal_invariance_test, InvarianceConfig, InvarianceVerdict, DEFAULT_EXHAUSTIVE_EVENTS, MAX_EXHAUSTIVE_SCHEDULES,
};
pub use matching::{apply_in_place, apply_rule, find_matches, is_current, site_tags, Match};
pub use network::{all_matches, build_causal_network, BuildResult, CausalNetwork, Event, Schedule};
pub use overlap::{check_overlap_freedom, OverlapReport, OverlapWitness};
pub use rule::{RuleGraph, RuleSet, UpdateRule, MAX_PATTERN_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CausalError {
    #[error("vertex {0} listed twice")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotTrivalent { vertex: VertexId, degree: usize },
    #[error("bad {role}: {detail}")]
    BadRule { role: &'static str, detail: String },
    #[error("pattern has {pattern} boundary half-edges but replacement has {replacement}")]
    BoundaryMismatch { pattern: usize, replacement: usize },
    #[error("rule {rule:?}: pattern symmetry {permutation:?} of the boundary is not a symmetry of the replacement")]
    SymmetryBroken { rule: String, permutation: Vec<usize> },
    #[error("pattern has {vertices} vertices, limit is {limit}")]
    PatternTooLarge { vertices: usize, limit: usize },
    #[error("site is no longer a match")]
    StaleSite,
    #[error("bad schedule {0:?}; expected fixed, random:<seed> or explicit:<i>,<j>,...")]
    BadSchedule(String),
    #[error("step {step}: choice {choice} out of range, {available} matches available")]
    ChoiceOutOfRange { step: usize, choice: usize, available: usize },
    #[error("causal network dependencies do not match recorded site tags")]
    InconsistentNetwork,
    #[error("a run was still able to continue after {steps} events")]
    LimitExceeded { steps: usize },
    #[error("no schedules to sample")]
    NoSamples,
    #[error("degenerate radius window: {0}")]
    DegenerateWindow(String),
    #[error("no centres given")]
    NoCenters,
    #[error("graph is disconnected or empty")]
    Disconnected,
}
