//! Busy beaver search.
//!
//! The default strategy grows tables lazily: a machine runs on a partial
//! table, and only when it reaches an undefined cell do we branch, once per
//! possible entry plus once for halting there. Branches that differ only
//! by an unreached cell would behave identically and are never built. New
//! states and symbols are introduced in first-use order and the first move
//! is always right, which removes relabelled and mirrored duplicates.
//!
//! Every leaf is one of: halted, ran into the cap, or caught by a cycle
//! detector. Because a leaf's run only uses defined cells, its outcome
//! holds for every completion of the table.

use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{enumerate_tms, EnumMode, DEFAULT_ENUM_BUDGET};
use super::tm::{run_tm, MachineError, MachineRow, Move, RunStatus, Sim, Stop, Transition, TuringMachine};

/// Largest `states * symbols` the search accepts.
pub const SEARCH_CELL_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Lazy table growth with first-use normalisation.
    #[default]
    Tree,
    /// Run every table from [`enumerate_tms`].
    Enumerate(#[serde(skip)] EnumMode),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BbResult {
    pub states: u8,
    pub symbols: u8,
    pub cap: u64,
    pub strategy: Strategy,
    pub max_steps: u64,
    /// Nonzero cells left by the champion.
    pub champion_nonzero: u64,
    /// Transition rows of a machine achieving `max_steps`; cells it never
    /// reads are filled with halting entries.
    pub champion: Option<Vec<MachineRow>>,
    pub halting_count: u64,
    pub undecided_count: u64,
    pub cap_exceeded_count: u64,
    pub cycle_count: u64,
    /// Tables whose every cell was defined without a halt entry; these can
    /// never halt and are not run further.
    pub no_halt_count: u64,
    /// Leaves for the tree strategy, tables for enumeration.
    pub machines_examined: u64,
}

impl BbResult {
    pub fn champion_machine(&self) -> Option<TuringMachine> {
        self.champion.as_ref().map(|rows| TuringMachine::from_rows(rows).expect("champion is well formed"))
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    max_steps: u64,
    champion: Option<(Vec<u32>, TuringMachine, u64)>,
    halting: u64,
    cap: u64,
    cycle: u64,
    no_halt: u64,
    examined: u64,
}

fn encode(m: &TuringMachine) -> Vec<u32> {
    m.table().iter().map(|t| u32::from(t.write) << 16 | u32::from(t.mv == Move::R) << 8 | t.next.map_or(255, u32::from)).collect()
}

impl Tally {
    fn halted(&mut self, m: TuringMachine, steps: u64, nonzero: u64) {
        self.halting += 1;
        self.examined += 1;
        let key = encode(&m);
        let better = match &self.champion {
            None => true,
            Some((k, _, _)) => steps > self.max_steps || (steps == self.max_steps && key < *k),
        };
        if better {
            self.max_steps = steps;
            self.champion = Some((key, m, nonzero));
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        if let Some((key, m, nonzero)) = other.champion {
            let better = match &self.champion {
                None => true,
                Some((k, _, _)) => other.max_steps > self.max_steps || (other.max_steps == self.max_steps && key < *k),
            };
            if better {
                self.max_steps = other.max_steps;
                self.champion = Some((key, m, nonzero));
            }
        }
        self.halting += other.halting;
        self.cap += other.cap;
        self.cycle += other.cycle;
        self.no_halt += other.no_halt;
        self.examined += other.examined;
        self
    }

    fn finish(self, states: u8, symbols: u8, cap: u64, strategy: Strategy) -> BbResult {
        let (champion, champion_nonzero) = match self.champion {
            Some((_, m, nz)) => (Some(m.rows()), nz),
            None => (None, 0),
        };
        BbResult {
            states,
            symbols,
            cap,
            strategy,
            max_steps: self.max_steps,
            champion_nonzero,
            champion,
            halting_count: self.halting,
            undecided_count: self.cap + self.cycle,
            cap_exceeded_count: self.cap,
            cycle_count: self.cycle,
            no_halt_count: self.no_halt,
            machines_examined: self.examined,
        }
    }
}

/// Busy beaver search with the tree strategy.
pub fn busy_beaver_search(states: u8, symbols: u8, cap: u64) -> Result<BbResult, MachineError> {
    busy_beaver_search_with(states, symbols, cap, Strategy::Tree)
}

pub fn busy_beaver_search_with(states: u8, symbols: u8, cap: u64, strategy: Strategy) -> Result<BbResult, MachineError> {
    if states == 0 {
        return Err(MachineError::NoStates);
    }
    if symbols < 2 {
        return Err(MachineError::TooFewSymbols);
    }
    if usize::from(states) * usize::from(symbols) > SEARCH_CELL_LIMIT {
        return Err(MachineError::SearchTooLarge { states, symbols, limit: SEARCH_CELL_LIMIT });
    }
    let tally = match strategy {
        Strategy::Tree => tree_search(states, symbols, cap),
        Strategy::Enumerate(mode) => enumerate_search(states, symbols, cap, mode)?,
    };
    Ok(tally.finish(states, symbols, cap, strategy))
}

fn enumerate_search(states: u8, symbols: u8, cap: u64, mode: EnumMode) -> Result<Tally, MachineError> {
    let machines: Vec<(TuringMachine, u128)> = enumerate_tms(states, symbols, mode, DEFAULT_ENUM_BUDGET)?.collect();
    Ok(machines
        .into_par_iter()
        .with_min_len(256)
        .fold(Tally::default, |mut t, (m, _)| {
            match run_tm(&m, cap).status {
                RunStatus::Halted { steps, nonzero } => t.halted(m, steps, nonzero),
                RunStatus::CapExceeded => {
                    t.cap += 1;
                    t.examined += 1;
                }
                RunStatus::CycleDetected { .. } => {
                    t.cycle += 1;
                    t.examined += 1;
                }
            }
            t
        })
        .reduce(Tally::default, Tally::merge))
}

/// A partially defined machine paused at an undefined cell.
#[derive(Clone)]
struct Node {
    table: Vec<Option<Transition>>,
    sim: Sim,
    /// Highest state index referenced so far.
    top_state: u8,
    /// Highest symbol written so far.
    top_symbol: u8,
}

struct Tree {
    states: u8,
    symbols: u8,
    cap: u64,
}

impl Tree {
    fn complete(&self, table: &[Option<Transition>]) -> TuringMachine {
        TuringMachine::new(self.states, self.symbols, table.iter().map(|t| t.unwrap_or(Transition::halt())).collect())
            .expect("entries in range")
    }

    /// Runs `node` until it stops; returns the cell to branch on, if any.
    fn advance(&self, node: &mut Node, tally: &mut Tally) -> Option<usize> {
        let k = usize::from(self.symbols);
        let table = &node.table;
        let stop = node.sim.run(self.cap, |q, a| table[usize::from(q) * k + usize::from(a)]);
        match stop {
            Stop::Halted => unreachable!("partial tables never hold halt entries"),
            Stop::Cap => {
                tally.cap += 1;
                tally.examined += 1;
                None
            }
            Stop::Cycle(_) => {
                tally.cycle += 1;
                tally.examined += 1;
                None
            }
            Stop::Undefined { state, read } => Some(usize::from(state) * k + usize::from(read)),
        }
    }

    /// Children of `node` at undefined cell `cell`, after recording the
    /// halting leaf.
    fn children(&self, node: &Node, cell: usize, tally: &mut Tally) -> Vec<Node> {
        let mut halt = node.sim.clone();
        let write = node.top_symbol.saturating_add(1).min(self.symbols - 1);
        halt.apply(Transition { write, mv: Move::R, next: None });
        let mut table = node.table.clone();
        table[cell] = Some(Transition { write, mv: Move::R, next: None });
        tally.halted(self.complete(&table), halt.steps(), halt.nonzero());

        let first = node.sim.steps() == 0;
        let last_cell = node.table.iter().filter(|t| t.is_none()).count() == 1;
        let mut out = Vec::new();
        let max_write = node.top_symbol.saturating_add(1).min(self.symbols - 1);
        let max_next = node.top_state.saturating_add(1).min(self.states - 1);
        for write in 0..=max_write {
            for mv in [Move::L, Move::R] {
                if first && mv == Move::L {
                    continue;
                }
                for next in 0..=max_next {
                    if last_cell {
                        tally.no_halt += 1;
                        continue;
                    }
                    let t = Transition { write, mv, next: Some(next) };
                    let mut child = node.clone();
                    child.table[cell] = Some(t);
                    child.top_state = child.top_state.max(next);
                    child.top_symbol = child.top_symbol.max(write);
                    out.push(child);
                }
            }
        }
        out
    }

    fn dfs(&self, mut node: Node, tally: &mut Tally) {
        if let Some(cell) = self.advance(&mut node, tally) {
            for child in self.children(&node, cell, tally) {
                self.dfs(child, tally);
            }
        }
    }
}

fn tree_search(states: u8, symbols: u8, cap: u64) -> Tally {
    let tree = Tree { states, symbols, cap };
    let root = Node {
        table: vec![None; usize::from(states) * usize::from(symbols)],
        sim: Sim::new(true),
        top_state: 0,
        top_symbol: 0,
    };
    // Expand breadth-first until there is enough independent work.
    let mut tally = Tally::default();
    let mut frontier = vec![root];
    for _ in 0..3 {
        let mut next = Vec::new();
        for mut node in frontier {
            if let Some(cell) = tree.advance(&mut node, &mut tally) {
                next.extend(tree.children(&node, cell, &mut tally));
            }
        }
        frontier = next;
    }
    frontier
        .into_par_iter()
        .fold(Tally::default, |mut t, node| {
            tree.dfs(node, &mut t);
            t
        })
        .reduce(Tally::default, Tally::merge)
        .merge(tally)
}
