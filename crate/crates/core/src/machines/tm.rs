use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("a machine needs at least one state")]
    NoStates,
    #[error("a machine needs at least two symbols")]
    TooFewSymbols,
    #[error("transition table has {got} entries, expected {expected}")]
    WrongTableSize { got: usize, expected: usize },
    #[error("transition ({state}, {read}) refers to {what} {value} out of range")]
    OutOfRange { state: u8, read: u8, what: &'static str, value: u8 },
    #[error("transition ({state}, {read}) is missing")]
    Missing { state: u8, read: u8 },
    #[error("transition ({state}, {read}) is given twice")]
    Duplicate { state: u8, read: u8 },
    #[error("bad next-state field {0:?}; expected a state index or \"H\"")]
    BadNext(String),
    #[error("{candidates} candidate machines exceed the enumeration budget of {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },
    #[error("{states} states x {symbols} symbols exceeds the search budget of {limit} table cells")]
    SearchTooLarge { states: u8, symbols: u8, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
}

impl Move {
    pub fn mirror(self) -> Move {
        match self {
            Move::L => Move::R,
            Move::R => Move::L,
        }
    }
}

/// `None` for the next state means halt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub write: u8,
    pub mv: Move,
    pub next: Option<u8>,
}

impl Transition {
    pub const fn halt() -> Self {
        Transition { write: 1, mv: Move::R, next: None }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mv = match self.mv {
            Move::L => 'L',
            Move::R => 'R',
        };
        match self.next {
            Some(q) => write!(f, "{}{}{}", self.write, mv, (b'A' + q) as char),
            None => write!(f, "{}{}H", self.write, mv),
        }
    }
}

/// A deterministic machine over states `0..states` (0 is the start state)
/// and symbols `0..symbols` (0 is blank), with a total transition table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuringMachine {
    states: u8,
    symbols: u8,
    table: Vec<Transition>,
}

impl TuringMachine {
    /// `table[state * symbols + read]`.
    pub fn new(states: u8, symbols: u8, table: Vec<Transition>) -> Result<Self, MachineError> {
        if states == 0 {
            return Err(MachineError::NoStates);
        }
        if symbols < 2 {
            return Err(MachineError::TooFewSymbols);
        }
        let expected = usize::from(states) * usize::from(symbols);
        if table.len() != expected {
            return Err(MachineError::WrongTableSize { got: table.len(), expected });
        }
        for (idx, t) in table.iter().enumerate() {
            let (state, read) = ((idx / usize::from(symbols)) as u8, (idx % usize::from(symbols)) as u8);
            if t.write >= symbols {
                return Err(MachineError::OutOfRange { state, read, what: "symbol", value: t.write });
            }
            if let Some(q) = t.next.filter(|&q| q >= states) {
                return Err(MachineError::OutOfRange { state, read, what: "state", value: q });
            }
        }
        Ok(TuringMachine { states, symbols, table })
    }

    pub fn states(&self) -> u8 {
        self.states
    }

    pub fn symbols(&self) -> u8 {
        self.symbols
    }

    pub fn table(&self) -> &[Transition] {
        &self.table
    }

    #[inline]
    pub fn transition(&self, state: u8, read: u8) -> Transition {
        self.table[usize::from(state) * usize::from(self.symbols) + usize::from(read)]
    }

    pub fn rows(&self) -> Vec<MachineRow> {
        self.table
            .iter()
            .enumerate()
            .map(|(idx, t)| {
                let s = usize::from(self.symbols);
                MachineRow((idx / s) as u8, (idx % s) as u8, t.write, t.mv, NextState::from(t.next))
            })
            .collect()
    }

    /// Builds a machine from file rows; states and symbols are inferred from
    /// the largest indices present (at least two symbols).
    pub fn from_rows(rows: &[MachineRow]) -> Result<Self, MachineError> {
        let mut states = 0u8;
        let mut symbols = 2u8;
        for MachineRow(state, read, write, _, next) in rows {
            states = states.max(state + 1);
            symbols = symbols.max(read + 1).max(write + 1);
            if let NextState::State(q) = next {
                states = states.max(q + 1);
            }
        }
        if states == 0 {
            return Err(MachineError::NoStates);
        }
        let size = usize::from(states) * usize::from(symbols);
        let mut table: Vec<Option<Transition>> = vec![None; size];
        for MachineRow(state, read, write, mv, next) in rows {
            let slot = &mut table[usize::from(*state) * usize::from(symbols) + usize::from(*read)];
            if slot.is_some() {
                return Err(MachineError::Duplicate { state: *state, read: *read });
            }
            *slot = Some(Transition { write: *write, mv: *mv, next: next.as_option() });
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(idx, t)| {
                t.ok_or(MachineError::Missing {
                    state: (idx / usize::from(symbols)) as u8,
                    read: (idx % usize::from(symbols)) as u8,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        TuringMachine::new(states, symbols, table)
    }
}

impl fmt::Display for TuringMachine {
    /// Standard text format, e.g. `1RB1LB_1LA1RH`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, t) in self.table.iter().enumerate() {
            if idx > 0 && idx % usize::from(self.symbols) == 0 {
                f.write_str("_")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// One row of the machine file format: `[state, read, write, move, next]`
/// where `next` is a state index or `"H"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineRow(pub u8, pub u8, pub u8, pub Move, pub NextState);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NextRepr", into = "NextRepr")]
pub enum NextState {
    State(u8),
    Halt,
}

impl NextState {
    fn as_option(self) -> Option<u8> {
        match self {
            NextState::State(q) => Some(q),
            NextState::Halt => None,
        }
    }
}

impl From<Option<u8>> for NextState {
    fn from(next: Option<u8>) -> Self {
        next.map_or(NextState::Halt, NextState::State)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NextRepr {
    State(u8),
    Name(String),
}

impl TryFrom<NextRepr> for NextState {
    type Error = MachineError;

    fn try_from(r: NextRepr) -> Result<Self, Self::Error> {
        match r {
            NextRepr::State(q) => Ok(NextState::State(q)),
            NextRepr::Name(s) if s == "H" => Ok(NextState::Halt),
            NextRepr::Name(s) => Err(MachineError::BadNext(s)),
        }
    }
}

impl From<NextState> for NextRepr {
    fn from(n: NextState) -> Self {
        match n {
            NextState::State(q) => NextRepr::State(q),
            NextState::Halt => NextRepr::Name("H".to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    /// Halted after `steps` transitions, the halting one included.
    Halted { steps: u64, nonzero: u64 },
    CapExceeded,
    CycleDetected { kind: CycleKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleKind {
    /// The full configuration recurred.
    Exact,
    /// The configuration recurred shifted, at the edge of unvisited tape.
    Translated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunResult {
    #[serde(flatten)]
    pub status: RunStatus,
    pub steps_executed: u64,
}

/// What the simulator stopped on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stop {
    Halted,
    Cap,
    Cycle(CycleKind),
    /// The table has no entry for `(state, read)`.
    Undefined { state: u8, read: u8 },
}

#[inline]
fn mix(pos: i64, symbol: u8) -> u64 {
    if symbol == 0 {
        return 0;
    }
    // splitmix64 finaliser
    let mut z = (pos as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ u64::from(symbol).wrapping_mul(0xd1b5_4a32_d192_ed03);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
struct Snapshot {
    state: u8,
    head: i64,
    hash: u64,
    tape: Vec<u8>,
    origin: i64,
}

#[derive(Debug, Clone)]
struct EdgeSnapshot {
    state: u8,
    head: i64,
    tape: Vec<u8>,
    origin: i64,
    /// Furthest the head has backed away from the edge since the snapshot.
    reach: i64,
}

/// Blank-tape simulator with two sound non-halting detectors:
///
/// - exact recurrence, checked against a snapshot retaken at steps
///   1, 2, 4, 8, ... (Brent's scheme), with an incremental tape hash to
///   make the per-step check cheap;
/// - translated recurrence: at two moments the head stands on a fresh cell
///   at the right (left) edge of visited tape in the same state, and the
///   tape between the furthest the head backed off in between and the edge
///   is identical up to the shift. Everything beyond the edge is blank in
///   both, so the run repeats shifted forever.
#[derive(Debug, Clone)]
pub(crate) struct Sim {
    tape: Vec<u8>,
    /// Absolute position of `tape[0]`.
    origin: i64,
    head: i64,
    state: u8,
    steps: u64,
    hash: u64,
    lo: i64,
    hi: i64,
    detect: bool,
    exact: Option<Snapshot>,
    next_checkpoint: u64,
    right: Option<EdgeSnapshot>,
    right_records: u64,
    left: Option<EdgeSnapshot>,
    left_records: u64,
}

impl Sim {
    pub(crate) fn new(detect: bool) -> Self {
        Sim {
            tape: vec![0; 32],
            origin: -16,
            head: 0,
            state: 0,
            steps: 0,
            hash: 0,
            lo: 0,
            hi: 0,
            detect,
            exact: None,
            next_checkpoint: 1,
            right: None,
            right_records: 0,
            left: None,
            left_records: 0,
        }
    }

    pub(crate) fn steps(&self) -> u64 {
        self.steps
    }

    pub(crate) fn nonzero(&self) -> u64 {
        self.tape.iter().filter(|&&s| s != 0).count() as u64
    }

    #[inline]
    fn read(&self) -> u8 {
        self.tape[(self.head - self.origin) as usize]
    }

    fn cell(tape: &[u8], origin: i64, pos: i64) -> u8 {
        let idx = pos - origin;
        if idx < 0 || idx as usize >= tape.len() {
            0
        } else {
            tape[idx as usize]
        }
    }

    fn ensure_room(&mut self) {
        let idx = self.head - self.origin;
        if idx < 0 {
            let extra = self.tape.len().max(16);
            let mut grown = vec![0; extra];
            grown.extend_from_slice(&self.tape);
            self.tape = grown;
            self.origin -= extra as i64;
        } else if idx as usize >= self.tape.len() {
            let extra = self.tape.len().max(16);
            self.tape.resize(self.tape.len() + extra, 0);
        }
    }

    /// Executes one transition. Returns true if it halted.
    #[inline]
    pub(crate) fn apply(&mut self, t: Transition) -> bool {
        let idx = (self.head - self.origin) as usize;
        let old = self.tape[idx];
        if old != t.write {
            self.hash ^= mix(self.head, old) ^ mix(self.head, t.write);
            self.tape[idx] = t.write;
        }
        self.steps += 1;
        match t.next {
            None => true,
            Some(q) => {
                self.state = q;
                self.head += match t.mv {
                    Move::L => -1,
                    Move::R => 1,
                };
                self.ensure_room();
                false
            }
        }
    }

    fn same_tape(a: &[u8], a_origin: i64, b: &[u8], b_origin: i64) -> bool {
        let lo = a_origin.min(b_origin);
        let hi = (a_origin + a.len() as i64).max(b_origin + b.len() as i64);
        (lo..hi).all(|p| Self::cell(a, a_origin, p) == Self::cell(b, b_origin, p))
    }

    /// Checks the detectors after a non-halting step.
    fn detect_cycle(&mut self) -> Option<CycleKind> {
        if let Some(s) = &self.exact {
            if s.state == self.state
                && s.head == self.head
                && s.hash == self.hash
                && Self::same_tape(&s.tape, s.origin, &self.tape, self.origin)
            {
                return Some(CycleKind::Exact);
            }
        }
        if self.steps == self.next_checkpoint {
            self.exact = Some(Snapshot {
                state: self.state,
                head: self.head,
                hash: self.hash,
                tape: self.tape.clone(),
                origin: self.origin,
            });
            self.next_checkpoint *= 2;
        }

        if let Some(r) = &mut self.right {
            r.reach = r.reach.min(self.head);
        }
        if let Some(l) = &mut self.left {
            l.reach = l.reach.max(self.head);
        }
        if self.head > self.hi {
            self.hi = self.head;
            if let Some(r) = &self.right {
                if r.state == self.state {
                    let shift = self.head - r.head;
                    let same = (r.reach..=r.head).all(|p| {
                        Self::cell(&r.tape, r.origin, p) == Self::cell(&self.tape, self.origin, p + shift)
                    });
                    if same {
                        return Some(CycleKind::Translated);
                    }
                }
            }
            self.right_records += 1;
            if self.right_records.is_power_of_two() {
                self.right = Some(EdgeSnapshot {
                    state: self.state,
                    head: self.head,
                    tape: self.tape.clone(),
                    origin: self.origin,
                    reach: self.head,
                });
            }
        } else if self.head < self.lo {
            self.lo = self.head;
            if let Some(l) = &self.left {
                if l.state == self.state {
                    let shift = self.head - l.head;
                    let same = (l.head..=l.reach).all(|p| {
                        Self::cell(&l.tape, l.origin, p) == Self::cell(&self.tape, self.origin, p + shift)
                    });
                    if same {
                        return Some(CycleKind::Translated);
                    }
                }
            }
            self.left_records += 1;
            if self.left_records.is_power_of_two() {
                self.left = Some(EdgeSnapshot {
                    state: self.state,
                    head: self.head,
                    tape: self.tape.clone(),
                    origin: self.origin,
                    reach: self.head,
                });
            }
        }
        None
    }

    /// Runs until halt, cap, a detected cycle, or a missing transition.
    pub(crate) fn run<F>(&mut self, cap: u64, lookup: F) -> Stop
    where
        F: Fn(u8, u8) -> Option<Transition>,
    {
        loop {
            if self.steps >= cap {
                return Stop::Cap;
            }
            let read = self.read();
            let Some(t) = lookup(self.state, read) else {
                return Stop::Undefined { state: self.state, read };
            };
            if self.apply(t) {
                return Stop::Halted;
            }
            if self.detect {
                if let Some(kind) = self.detect_cycle() {
                    return Stop::Cycle(kind);
                }
            }
        }
    }
}

/// Runs `m` from a blank tape for at most `cap` transitions.
///
/// Every executed transition counts as a step, the halting one included.
/// Cycle detection only ever reports machines that provably never halt.
pub fn run_tm(m: &TuringMachine, cap: u64) -> RunResult {
    run_tm_with(m, cap, true)
}

pub fn run_tm_with(m: &TuringMachine, cap: u64, detect_cycles: bool) -> RunResult {
    let mut sim = Sim::new(detect_cycles);
    let stop = sim.run(cap, |q, a| Some(m.transition(q, a)));
    let status = match stop {
        Stop::Halted => RunStatus::Halted { steps: sim.steps(), nonzero: sim.nonzero() },
        Stop::Cap => RunStatus::CapExceeded,
        Stop::Cycle(kind) => RunStatus::CycleDetected { kind },
        Stop::Undefined { .. } => unreachable!("total table"),
    };
    RunResult { status, steps_executed: sim.steps() }
}
