//! Turing machines on a two-way infinite blank tape, exhaustive enumeration
//! and busy beaver search over small tables, and cyclic tag systems.
//!
//! Conventions: state 0 starts, symbol 0 is blank, there is a single halt
//! pseudo-state, and every executed transition counts as one step,
//! including the one into halt.

mod enumerate;
mod search;
mod tag;
mod tm;

pub use enumerate::{enumerate_tms, orbit_size, raw_count, EnumMode, Enumeration, DEFAULT_ENUM_BUDGET};
pub use search::{busy_beaver_search, busy_beaver_search_with, BbResult, Strategy, SEARCH_CELL_LIMIT};
pub use tag::{run_cyclic_tag, CyclicTagSystem, TagError, TagTrace, Word, DEFAULT_WORD_CEILING};
pub use tm::{
    run_tm, run_tm_with, CycleKind, MachineError, MachineRow, Move, NextState, RunResult, RunStatus, Transition,
    TuringMachine,
};
