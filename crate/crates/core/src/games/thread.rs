//! Deterministic programs over side-tagged bits, run in two orders.
//!
//! Every instruction touches the sides of the variables it reads and
//! writes. Schedule (i) runs every instruction that does not touch Bob's
//! side, in program order, and then Bob's; schedule (ii) is the mirror.
//! Under (i) `y_A` is final before anything of Bob's is touched, so it
//! depends only on `x_A` and the random bits, and likewise `y_B` under
//! (ii). If both schedules agree on every assignment, the pair
//! `(y_A under (i), y_B under (ii))` is a local hidden variable strategy.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chsh::{chsh_value, chsh_wins};
use super::{Exact, GameError, Response};

/// Largest number of input and random bits swept exhaustively.
pub const MAX_ASSIGNMENT_BITS: usize = 24;
pub const MAX_VARIABLES: usize = 32;
pub const MAX_INSTRUCTION_INPUTS: usize = 6;
const LISTED_DISCREPANCIES: usize = 16;
const CHUNK: u32 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Alice,
    Bob,
    /// Thread and shared-randomness bits.
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// The party's input; exactly one on each of Alice's and Bob's side.
    Input,
    /// Uniform, part of the swept assignment.
    Random,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variable {
    pub name: String,
    pub side: Side,
    pub init: Init,
    /// Included in the marginal check.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hidden: bool,
}

impl Variable {
    pub fn new(name: &str, side: Side, init: Init) -> Self {
        Variable { name: name.to_string(), side, init, hidden: false }
    }

    pub fn hidden(mut self) -> Self {
        self.hidden = true;
        self
    }
}

/// `target := table[inputs]`, with the first input as the most significant
/// bit of the row index and `table` a string of `'0'`/`'1'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instruction {
    pub target: String,
    pub inputs: Vec<String>,
    pub table: String,
}

impl Instruction {
    pub fn new(target: &str, inputs: &[&str], table: &str) -> Self {
        Instruction {
            target: target.to_string(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            table: table.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(rename = "y_A")]
    pub alice: String,
    #[serde(rename = "y_B")]
    pub bob: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreadProtocol {
    pub variables: Vec<Variable>,
    pub program: Vec<Instruction>,
    pub outputs: Outputs,
}

impl ThreadProtocol {
    fn with(variables: Vec<Variable>, program: Vec<Instruction>) -> Self {
        ThreadProtocol { variables, program, outputs: Outputs { alice: "y_A".into(), bob: "y_B".into() } }
    }

    fn parties() -> Vec<Variable> {
        vec![
            Variable::new("x_A", Side::Alice, Init::Input),
            Variable::new("x_B", Side::Bob, Init::Input),
            Variable::new("y_A", Side::Alice, Init::Zero),
            Variable::new("y_B", Side::Bob, Init::Zero),
        ]
    }

    /// Both parties output one shared random bit.
    pub fn shared_bit() -> Self {
        let mut vars = Self::parties();
        vars.push(Variable::new("r", Side::Shared, Init::Random));
        Self::with(vars, vec![Instruction::new("y_A", &["r"], "01"), Instruction::new("y_B", &["r"], "01")])
    }

    /// Both parties output 0 and never look at anything.
    pub fn constant() -> Self {
        Self::with(Self::parties(), vec![])
    }

    /// Alice outputs a shared bit `u` and writes `u xor x_A` into the thread
    /// bit `t`; Bob reads `t` back. When Alice goes first Bob learns `x_A`
    /// and they always win; when Bob goes first he reads noise.
    pub fn thread_example() -> Self {
        let mut vars = Self::parties();
        vars.push(Variable::new("t", Side::Shared, Init::Random).hidden());
        vars.push(Variable::new("u", Side::Shared, Init::Random).hidden());
        Self::with(
            vars,
            vec![
                Instruction::new("y_A", &["u"], "01"),
                Instruction::new("t", &["u", "x_A"], "0110"),
                // u xor ((t xor u) and x_B)
                Instruction::new("y_B", &["u", "t", "x_B"], "00011011"),
            ],
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("protocol serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, GameError> {
        let p: ThreadProtocol = serde_json::from_str(s).map_err(|e| GameError::BadProtocol(e.to_string()))?;
        p.compile()?;
        Ok(p)
    }

    pub(crate) fn compile(&self) -> Result<Compiled, GameError> {
        if self.variables.len() > MAX_VARIABLES {
            return Err(GameError::BadProtocol(format!("more than {MAX_VARIABLES} variables")));
        }
        let mut index = HashMap::new();
        for (i, v) in self.variables.iter().enumerate() {
            if index.insert(v.name.as_str(), i as u8).is_some() {
                return Err(GameError::BadProtocol(format!("variable {:?} declared twice", v.name)));
            }
        }
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| GameError::BadProtocol(format!("unknown variable {name:?}")));
        let input_on = |side: Side| {
            let found: Vec<u8> = self
                .variables
                .iter()
                .enumerate()
                .filter(|(_, v)| v.init == Init::Input && v.side == side)
                .map(|(i, _)| i as u8)
                .collect();
            match found[..] {
                [i] => Ok(i),
                _ => Err(GameError::BadProtocol(format!("need exactly one input on {side:?}'s side, found {}", found.len()))),
            }
        };
        let (xa, xb) = (input_on(Side::Alice)?, input_on(Side::Bob)?);
        if self.variables.iter().filter(|v| v.init == Init::Input).count() != 2 {
            return Err(GameError::BadProtocol("shared variables cannot be inputs".into()));
        }
        let mut z_vars = vec![xa, xb];
        z_vars.extend(self.variables.iter().enumerate().filter(|(_, v)| v.init == Init::Random).map(|(i, _)| i as u8));
        if z_vars.len() > MAX_ASSIGNMENT_BITS {
            return Err(GameError::TooManyBits { bits: z_vars.len(), cap: MAX_ASSIGNMENT_BITS });
        }
        let init = self.variables.iter().enumerate().filter(|(_, v)| v.init == Init::One).fold(0u32, |m, (i, _)| m | 1 << i);
        let mut program = Vec::new();
        for (n, ins) in self.program.iter().enumerate() {
            let target = lookup(&ins.target)?;
            if target == xa || target == xb {
                return Err(GameError::BadProtocol(format!("instruction {n} writes the input {:?}", ins.target)));
            }
            if ins.inputs.len() > MAX_INSTRUCTION_INPUTS {
                return Err(GameError::BadProtocol(format!("instruction {n} reads more than {MAX_INSTRUCTION_INPUTS} variables")));
            }
            let mut inputs = [0u8; MAX_INSTRUCTION_INPUTS];
            for (slot, name) in inputs.iter_mut().zip(&ins.inputs) {
                *slot = lookup(name)?;
            }
            if ins.table.len() != 1 << ins.inputs.len() || !ins.table.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(GameError::BadProtocol(format!(
                    "instruction {n}: table needs {} characters 0 or 1",
                    1 << ins.inputs.len()
                )));
            }
            let table = ins.table.bytes().enumerate().fold(0u64, |m, (i, b)| m | u64::from(b == b'1') << i);
            let sides: Vec<Side> =
                std::iter::once(target).chain(inputs[..ins.inputs.len()].iter().copied()).map(|i| self.variables[i as usize].side).collect();
            let class = match (sides.contains(&Side::Alice), sides.contains(&Side::Bob)) {
                (true, true) => return Err(GameError::Straddling { instruction: n }),
                (true, false) => Class::Alice,
                (false, true) => Class::Bob,
                (false, false) => Class::Neutral,
            };
            program.push(Op { target, inputs, arity: ins.inputs.len() as u8, table, class });
        }
        let ya = lookup(&self.outputs.alice)?;
        let yb = lookup(&self.outputs.bob)?;
        if self.variables[ya as usize].side != Side::Alice || self.variables[yb as usize].side != Side::Bob {
            return Err(GameError::BadProtocol("y_A must be on Alice's side and y_B on Bob's".into()));
        }
        let mut hidden = Vec::new();
        for (i, v) in self.variables.iter().enumerate().filter(|(_, v)| v.hidden) {
            if v.side == Side::Alice {
                return Err(GameError::BadProtocol(format!("hidden variable {:?} is on Alice's side", v.name)));
            }
            hidden.push(i as u8);
        }
        Ok(Compiled { names: self.variables.iter().map(|v| v.name.clone()).collect(), init, z_vars, program, y: [ya, yb], hidden })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Alice,
    Bob,
    Neutral,
}

#[derive(Debug, Clone, Copy)]
struct Op {
    target: u8,
    inputs: [u8; MAX_INSTRUCTION_INPUTS],
    arity: u8,
    table: u64,
    class: Class,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    names: Vec<String>,
    init: u32,
    /// Variable for each assignment bit: `x_A`, `x_B`, then random bits.
    z_vars: Vec<u8>,
    program: Vec<Op>,
    y: [u8; 2],
    hidden: Vec<u8>,
}

/// Schedule (i) defers Bob's instructions, (ii) defers Alice's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    AliceFirst,
    BobFirst,
}

impl Order {
    fn deferred(self) -> Class {
        match self {
            Order::AliceFirst => Class::Bob,
            Order::BobFirst => Class::Alice,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    discrepancies: u64,
    listed: Vec<u32>,
    wins: [u64; 2],
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.discrepancies += other.discrepancies;
        self.listed.extend(other.listed);
        self.listed.truncate(LISTED_DISCREPANCIES);
        self.wins[0] += other.wins[0];
        self.wins[1] += other.wins[1];
        self
    }
}

fn bit(state: u32, v: u8) -> bool {
    state >> v & 1 != 0
}

impl Compiled {
    fn assignments(&self) -> u32 {
        1 << self.z_vars.len()
    }

    fn initial(&self, z: u32) -> u32 {
        self.z_vars.iter().enumerate().fold(self.init, |s, (i, &v)| s | (z >> i & 1) << v)
    }

    fn inputs(z: u32) -> [bool; 2] {
        [z & 1 != 0, z & 2 != 0]
    }

    fn exec(state: u32, op: &Op) -> u32 {
        let row = op.inputs[..op.arity as usize].iter().fold(0u32, |r, &v| r << 1 | (state >> v & 1));
        let out = (op.table >> row & 1) as u32;
        state & !(1 << op.target) | out << op.target
    }

    /// State after the first phase of `order`.
    fn first_phase(&self, z: u32, order: Order) -> u32 {
        let skip = order.deferred();
        self.program.iter().filter(|op| op.class != skip).fold(self.initial(z), Self::exec)
    }

    fn run(&self, z: u32, order: Order) -> [bool; 2] {
        let skip = order.deferred();
        let s = self.program.iter().filter(|op| op.class == skip).fold(self.first_phase(z, order), Self::exec);
        [bit(s, self.y[0]), bit(s, self.y[1])]
    }

    fn tally_range(&self, zs: std::ops::Range<u32>) -> Tally {
        let mut t = Tally::default();
        for z in zs {
            let (a, b) = (self.run(z, Order::AliceFirst), self.run(z, Order::BobFirst));
            let x = Self::inputs(z);
            t.wins[0] += u64::from(chsh_wins(x, a));
            t.wins[1] += u64::from(chsh_wins(x, b));
            if a != b {
                t.discrepancies += 1;
                if t.listed.len() < LISTED_DISCREPANCIES {
                    t.listed.push(z);
                }
            }
        }
        t
    }

    fn tally(&self) -> Tally {
        let n = self.assignments();
        if n <= CHUNK {
            return self.tally_range(0..n);
        }
        let parts: Vec<Tally> = (0..n / CHUNK).into_par_iter().map(|c| self.tally_range(c * CHUNK..(c + 1) * CHUNK)).collect();
        parts.into_iter().fold(Tally::default(), Tally::merge)
    }

    fn assignment(&self, z: u32) -> BTreeMap<String, u8> {
        self.z_vars.iter().enumerate().map(|(i, &v)| (self.names[v as usize].clone(), (z >> i & 1) as u8)).collect()
    }

    fn report(&self) -> OrderReport {
        let t = self.tally();
        let n = u64::from(self.assignments());
        let discrepancies = t
            .listed
            .iter()
            .map(|&z| Discrepancy {
                assignment: self.assignment(z),
                first: self.run(z, Order::AliceFirst).map(u8::from),
                second: self.run(z, Order::BobFirst).map(u8::from),
            })
            .collect();
        OrderReport {
            assignment_bits: self.z_vars.len(),
            bit_cap: MAX_ASSIGNMENT_BITS,
            assignments: n,
            discrepancy_count: t.discrepancies,
            discrepancies,
            success_first: Exact(Ratio::new(t.wins[0], n)),
            success_second: Exact(Ratio::new(t.wins[1], n)),
        }
    }

    /// The local strategy as a mixture over the random bits, and whether
    /// it reproduces schedule (i) on every assignment.
    fn lhv(&self) -> (Vec<(Response, Response, u64)>, Ratio<u64>, bool) {
        let hidden = self.assignments() >> 2;
        let mut weights: BTreeMap<(Response, Response), u64> = BTreeMap::new();
        let mut matches = true;
        for h in 0..hidden {
            let z = |xa: u32, xb: u32| h << 2 | xb << 1 | xa;
            let a = Response::from_table([0, 1].map(|xa| self.run(z(xa, 0), Order::AliceFirst)[0]));
            let b = Response::from_table([0, 1].map(|xb| self.run(z(0, xb), Order::BobFirst)[1]));
            *weights.entry((a, b)).or_default() += 1;
            for xa in 0..2 {
                for xb in 0..2 {
                    let want = self.run(z(xa, xb), Order::AliceFirst);
                    matches &= want == [a.apply(xa == 1), b.apply(xb == 1)];
                }
            }
        }
        let value = weights.iter().map(|(&(a, b), &w)| chsh_value(a, b) * w).sum::<Ratio<u64>>() / u64::from(hidden);
        (weights.into_iter().map(|((a, b), w)| (a, b, w)).collect(), value, matches)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub assignment: BTreeMap<String, u8>,
    /// `(y_A, y_B)` under schedule (i).
    pub first: [u8; 2],
    /// `(y_A, y_B)` under schedule (ii).
    pub second: [u8; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub assignment_bits: usize,
    pub bit_cap: usize,
    pub assignments: u64,
    pub discrepancy_count: u64,
    /// The first few, by assignment with `x_A` as the lowest bit.
    pub discrepancies: Vec<Discrepancy>,
    /// CHSH success under schedule (i), over uniform assignments.
    pub success_first: Exact,
    pub success_second: Exact,
}

impl OrderReport {
    pub fn is_robust(&self) -> bool {
        self.discrepancy_count == 0
    }
}

/// Runs both schedules on every assignment of inputs and random bits.
pub fn order_robustness_check(p: &ThreadProtocol) -> Result<OrderReport, GameError> {
    Ok(p.compile()?.report())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LhvVerdict {
    /// Deterministic pairs and how many random-bit assignments use each.
    pub mixture: Vec<(Response, Response, u64)>,
    pub value: Exact,
    /// The strategy gives the protocol's outputs on every assignment.
    pub reproduces_protocol: bool,
    pub within_classical_bound: bool,
}

/// Builds the local strategy of a discrepancy-free protocol and evaluates
/// it.
pub fn lhv_bound_theorem_check(p: &ThreadProtocol) -> Result<LhvVerdict, GameError> {
    let c = p.compile()?;
    let t = c.tally();
    if t.discrepancies > 0 {
        return Err(GameError::Discrepancies { count: t.discrepancies });
    }
    let (mixture, value, reproduces_protocol) = c.lhv();
    Ok(LhvVerdict { mixture, value: Exact(value), reproduces_protocol, within_classical_bound: value <= Ratio::new(3, 4) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarginalBit {
    pub name: String,
    /// Probability of 1 before and after the instructions that run ahead
    /// of Bob's in schedule (i).
    pub before: Exact,
    pub after: Exact,
    /// Total variation distance between the two.
    pub distance: Exact,
}

/// Compares each hidden bit's distribution before and after Alice's
/// updates.
pub fn marginal_invariance_check(p: &ThreadProtocol) -> Result<Vec<MarginalBit>, GameError> {
    let c = p.compile()?;
    let n = c.assignments();
    let mut ones = vec![[0u64; 2]; c.hidden.len()];
    for z in 0..n {
        let (s0, s1) = (c.initial(z), c.first_phase(z, Order::AliceFirst));
        for (count, &v) in ones.iter_mut().zip(&c.hidden) {
            count[0] += u64::from(bit(s0, v));
            count[1] += u64::from(bit(s1, v));
        }
    }
    Ok(c.hidden
        .iter()
        .zip(ones)
        .map(|(&v, [b, a])| MarginalBit {
            name: c.names[v as usize].clone(),
            before: Exact(Ratio::new(b, u64::from(n))),
            after: Exact(Ratio::new(a, u64::from(n))),
            distance: Exact(Ratio::new(b.abs_diff(a), u64::from(n))),
        })
        .collect())
}

/// One protocol of the bounded family: optional thread writes `t := f(x, t)`
/// by each party (4-entry tables) and outputs `y := g(x, r, t)` (8-entry
/// tables), over inputs, a shared random bit `r` and a random thread bit
/// `t`. Program order is Alice's write, `y_A`, Bob's write, `y_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub alice_thread: Option<u8>,
    pub alice_output: u8,
    pub bob_thread: Option<u8>,
    pub bob_output: u8,
}

pub const FAMILY_SIZE: u64 = 17 * 256 * 17 * 256;

fn table_string(t: u8, width: usize) -> String {
    (0..width).map(|i| if t >> i & 1 == 1 { '1' } else { '0' }).collect()
}

impl FamilyMember {
    pub fn from_index(i: u64) -> Self {
        assert!(i < FAMILY_SIZE, "family index out of range");
        let thread = |v: u64| (v > 0).then(|| (v - 1) as u8);
        FamilyMember {
            alice_thread: thread(i / (256 * 17 * 256)),
            alice_output: (i / (17 * 256) % 256) as u8,
            bob_thread: thread(i / 256 % 17),
            bob_output: (i % 256) as u8,
        }
    }

    pub fn protocol(&self) -> ThreadProtocol {
        let mut vars = ThreadProtocol::parties();
        vars.push(Variable::new("r", Side::Shared, Init::Random));
        vars.push(Variable::new("t", Side::Shared, Init::Random));
        let mut program = Vec::new();
        if let Some(f) = self.alice_thread {
            program.push(Instruction::new("t", &["x_A", "t"], &table_string(f, 4)));
        }
        program.push(Instruction::new("y_A", &["x_A", "r", "t"], &table_string(self.alice_output, 8)));
        if let Some(f) = self.bob_thread {
            program.push(Instruction::new("t", &["x_B", "t"], &table_string(f, 4)));
        }
        program.push(Instruction::new("y_B", &["x_B", "r", "t"], &table_string(self.bob_output, 8)));
        ThreadProtocol::with(vars, program)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySweep {
    pub protocols: u64,
    pub discrepancy_free: u64,
    /// Best local-strategy value among discrepancy-free protocols.
    pub best_discrepancy_free: Exact,
    /// Discrepancy-free protocols whose local strategy beats 3/4 or does
    /// not reproduce the protocol. Zero when the argument holds.
    pub counterexamples: u64,
    /// Protocols beating 3/4 under some schedule.
    pub exceeding: u64,
    pub exceeding_with_discrepancy: u64,
    /// The first exceeding protocol, by family index.
    pub example: Option<FamilyMember>,
}

#[derive(Debug, Clone, Default)]
struct SweepPart {
    free: u64,
    best: Ratio<u64>,
    counterexamples: u64,
    exceeding: u64,
    with_discrepancy: u64,
    example: Option<u64>,
}

impl SweepPart {
    fn merge(self, o: SweepPart) -> SweepPart {
        SweepPart {
            free: self.free + o.free,
            best: self.best.max(o.best),
            counterexamples: self.counterexamples + o.counterexamples,
            exceeding: self.exceeding + o.exceeding,
            with_discrepancy: self.with_discrepancy + o.with_discrepancy,
            example: match (self.example, o.example) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }
}

/// Checks every protocol of the bounded family: a discrepancy-free one must
/// reduce to a local strategy worth at most 3/4.
pub fn family_sweep() -> FamilySweep {
    let full = FamilyMember { alice_thread: Some(0), alice_output: 0, bob_thread: Some(0), bob_output: 0 }
        .protocol()
        .compile()
        .expect("family protocols are valid");
    let bound = Ratio::new(3u64, 4);
    let part = (0..FAMILY_SIZE)
        .into_par_iter()
        .fold(SweepPart::default, |mut acc, i| {
            let m = FamilyMember::from_index(i);
            let mut c = full.clone();
            c.program = [(m.alice_thread, 0), (Some(m.alice_output), 1), (m.bob_thread, 2), (Some(m.bob_output), 3)]
                .into_iter()
                .filter_map(|(t, k)| t.map(|t| Op { table: u64::from(t), ..full.program[k] }))
                .collect();
            let t = c.tally_range(0..c.assignments());
            let n = u64::from(c.assignments());
            let exceeds = t.wins.iter().any(|&w| Ratio::new(w, n) > bound);
            if t.discrepancies == 0 {
                let (_, value, reproduces) = c.lhv();
                acc.free += 1;
                acc.best = acc.best.max(value);
                acc.counterexamples += u64::from(value > bound || !reproduces || exceeds);
            }
            if exceeds {
                acc.exceeding += 1;
                acc.with_discrepancy += u64::from(t.discrepancies > 0);
                acc.example = Some(acc.example.map_or(i, |e: u64| e.min(i)));
            }
            acc
        })
        .reduce(SweepPart::default, SweepPart::merge);
    FamilySweep {
        protocols: FAMILY_SIZE,
        discrepancy_free: part.free,
        best_discrepancy_free: Exact(part.best),
        counterexamples: part.counterexamples,
        exceeding: part.exceeding,
        exceeding_with_discrepancy: part.with_discrepancy,
        example: part.example.map(FamilyMember::from_index),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_protocols_are_robust() {
        let r = order_robustness_check(&ThreadProtocol::shared_bit()).unwrap();
        assert!(r.is_robust());
        assert_eq!(r.success_first, Exact(Ratio::new(3, 4)));
        let r = order_robustness_check(&ThreadProtocol::constant()).unwrap();
        assert_eq!((r.assignment_bits, r.success_second), (2, Exact(Ratio::new(3, 4))));
        let v = lhv_bound_theorem_check(&ThreadProtocol::shared_bit()).unwrap();
        assert!(v.reproduces_protocol && v.within_classical_bound);
        assert_eq!(v.mixture, vec![(Response::Zero, Response::Zero, 1), (Response::One, Response::One, 1)]);
    }

    #[test]
    fn thread_example_has_discrepancies() {
        let p = ThreadProtocol::thread_example();
        let r = order_robustness_check(&p).unwrap();
        assert_eq!(r.success_first, Exact(Ratio::new(1, 1)));
        assert!(r.discrepancy_count > 0);
        assert_eq!(lhv_bound_theorem_check(&p), Err(GameError::Discrepancies { count: r.discrepancy_count }));
        for m in marginal_invariance_check(&p).unwrap() {
            assert_eq!(m.distance, Exact(Ratio::new(0, 1)), "{}", m.name);
        }
    }

    #[test]
    fn flipping_a_thread_bit() {
        let mut vars = ThreadProtocol::parties();
        vars.push(Variable::new("f", Side::Shared, Init::Random).hidden());
        vars.push(Variable::new("g", Side::Shared, Init::Zero).hidden());
        let p = ThreadProtocol::with(
            vars,
            vec![Instruction::new("f", &["x_A", "f"], "1010"), Instruction::new("g", &["x_A", "g"], "1010")],
        );
        let m = marginal_invariance_check(&p).unwrap();
        assert_eq!(m[0].distance, Exact(Ratio::new(0, 1)));
        assert_eq!(m[1].distance, Exact(Ratio::new(1, 1)));
    }

    #[test]
    fn rejections() {
        let mut p = ThreadProtocol::constant();
        p.program.push(Instruction::new("y_B", &["x_A"], "01"));
        assert_eq!(order_robustness_check(&p), Err(GameError::Straddling { instruction: 0 }));
        let mut p = ThreadProtocol::constant();
        p.program.push(Instruction::new("x_A", &[], "1"));
        assert!(matches!(p.compile(), Err(GameError::BadProtocol(_))));
        let mut p = ThreadProtocol::constant();
        p.program.push(Instruction::new("y_A", &["x_A"], "011"));
        assert!(matches!(p.compile(), Err(GameError::BadProtocol(_))));
        let mut p = ThreadProtocol::constant();
        for i in 0..23 {
            p.variables.push(Variable::new(&format!("r{i}"), Side::Shared, Init::Random));
        }
        assert_eq!(p.compile().err(), Some(GameError::TooManyBits { bits: 25, cap: 24 }));
    }

    #[test]
    fn json_round_trip() {
        let p = ThreadProtocol::thread_example();
        assert_eq!(ThreadProtocol::from_json(&p.to_json()).unwrap(), p);
        assert!(ThreadProtocol::from_json(r#"{"variables": []}"#).is_err());
    }

    #[test]
    fn family_indexing() {
        let m = FamilyMember::from_index(FAMILY_SIZE - 1);
        assert_eq!(m, FamilyMember { alice_thread: Some(15), alice_output: 255, bob_thread: Some(15), bob_output: 255 });
        assert_eq!(FamilyMember::from_index(0).protocol().program.len(), 2);
    }
}
