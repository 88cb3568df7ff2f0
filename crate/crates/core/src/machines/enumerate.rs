//! Exhaustive enumeration of `s`-state, `k`-symbol tables.
//!
//! Each table cell takes one of `2k(s + 1)` values (write symbol, move,
//! next state or halt), so there are `(2k(s + 1))^(sk)` raw tables. Raw
//! order reads the cells as digits of a mixed-radix number, cell `(0, 0)`
//! most significant, and counts up.
//!
//! Relabelling the non-start states, or mirroring every move, gives a
//! machine with the same step count and the same halting behaviour. The
//! canonical mode keeps one table per orbit of that group, the smallest in
//! raw order, and reports each orbit's size so totals can be expanded back.

use super::tm::{MachineError, Move, Transition, TuringMachine};

pub const DEFAULT_ENUM_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumMode {
    #[default]
    Raw,
    Canonical,
}

/// `(2k(s + 1))^(sk)`, saturating.
pub fn raw_count(states: u8, symbols: u8) -> u128 {
    let base = 2 * u128::from(symbols) * (u128::from(states) + 1);
    let cells = u32::from(states) * u32::from(symbols);
    base.checked_pow(cells).unwrap_or(u128::MAX)
}

fn group_order(states: u8) -> u128 {
    2 * (1..u128::from(states.max(1))).product::<u128>()
}

fn digit(t: &Transition, states: u8) -> u32 {
    let s1 = u32::from(states) + 1;
    let next = t.next.map_or(u32::from(states), u32::from);
    let mv = u32::from(t.mv == Move::R);
    u32::from(t.write) * 2 * s1 + mv * s1 + next
}

fn from_digit(d: u32, states: u8) -> Transition {
    let s1 = u32::from(states) + 1;
    let next = d % s1;
    let mv = if (d / s1) % 2 == 1 { Move::R } else { Move::L };
    Transition { write: (d / (2 * s1)) as u8, mv, next: (next < u32::from(states)).then_some(next as u8) }
}

/// Permutations of `1..states`, in lexicographic order.
fn relabellings(states: u8) -> Vec<Vec<u8>> {
    fn go(rest: &mut Vec<u8>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..states).collect(), &mut vec![0], &mut out);
    out
}

/// Image of `m` under the relabelling `perm` (old state `q` becomes
/// `perm[q]`), optionally mirrored.
fn transform(m: &TuringMachine, perm: &[u8], mirror: bool) -> Vec<u32> {
    let (s, k) = (usize::from(m.states()), usize::from(m.symbols()));
    let mut digits = vec![0; s * k];
    for q in 0..s {
        for a in 0..k {
            let mut t = m.table()[q * k + a];
            t.next = t.next.map(|n| perm[usize::from(n)]);
            if mirror {
                t.mv = t.mv.mirror();
            }
            digits[usize::from(perm[q]) * k + a] = digit(&t, m.states());
        }
    }
    digits
}

fn digits_of(m: &TuringMachine) -> Vec<u32> {
    m.table().iter().map(|t| digit(t, m.states())).collect()
}

struct Symmetry {
    perms: Vec<Vec<u8>>,
}

impl Symmetry {
    fn new(states: u8) -> Self {
        Symmetry { perms: relabellings(states) }
    }

    /// `Some(orbit size)` if `m` is the smallest table in its orbit.
    fn canonical_orbit(&self, m: &TuringMachine) -> Option<u128> {
        let own = digits_of(m);
        let mut stabiliser = 0u128;
        for perm in &self.perms {
            for mirror in [false, true] {
                let img = transform(m, perm, mirror);
                match img.cmp(&own) {
                    std::cmp::Ordering::Less => return None,
                    std::cmp::Ordering::Equal => stabiliser += 1,
                    std::cmp::Ordering::Greater => {}
                }
            }
        }
        Some(2 * self.perms.len() as u128 / stabiliser)
    }
}

/// Size of the orbit of `m` under state relabelling and mirroring.
pub fn orbit_size(m: &TuringMachine) -> u128 {
    let own = digits_of(m);
    let perms = relabellings(m.states());
    let stabiliser = perms
        .iter()
        .flat_map(|p| [false, true].map(|mirror| transform(m, p, mirror)))
        .filter(|img| *img == own)
        .count() as u128;
    group_order(m.states()) / stabiliser
}

/// Iterator over tables in raw order, yielding `(machine, orbit size)`.
/// Raw mode reports orbit size 1.
pub struct Enumeration {
    states: u8,
    symbols: u8,
    base: u32,
    digits: Vec<u32>,
    done: bool,
    symmetry: Option<Symmetry>,
}

impl Enumeration {
    fn advance(&mut self) {
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.base {
                return;
            }
            *d = 0;
        }
        self.done = true;
    }
}

impl Iterator for Enumeration {
    type Item = (TuringMachine, u128);

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let table = self.digits.iter().map(|&d| from_digit(d, self.states)).collect();
            let m = TuringMachine::new(self.states, self.symbols, table).expect("digits in range");
            self.advance();
            match &self.symmetry {
                None => return Some((m, 1)),
                Some(sym) => {
                    if let Some(orbit) = sym.canonical_orbit(&m) {
                        return Some((m, orbit));
                    }
                }
            }
        }
        None
    }
}

/// Enumerates every `states x symbols` table, or one per symmetry orbit.
///
/// The budget is checked against the number of tables yielded: the raw
/// count, or in canonical mode the raw count divided by the group order
/// (a lower bound on the number of orbits, tight up to tables with
/// nontrivial stabilisers).
pub fn enumerate_tms(states: u8, symbols: u8, mode: EnumMode, budget: u128) -> Result<Enumeration, MachineError> {
    if states == 0 {
        return Err(MachineError::NoStates);
    }
    if symbols < 2 {
        return Err(MachineError::TooFewSymbols);
    }
    let raw = raw_count(states, symbols);
    let candidates = match mode {
        EnumMode::Raw => raw,
        EnumMode::Canonical => raw / group_order(states),
    };
    if candidates > budget {
        return Err(MachineError::BudgetExceeded { candidates, budget });
    }
    Ok(Enumeration {
        states,
        symbols,
        base: 2 * u32::from(symbols) * (u32::from(states) + 1),
        digits: vec![0; usize::from(states) * usize::from(symbols)],
        done: false,
        symmetry: (mode == EnumMode::Canonical).then(|| Symmetry::new(states)),
    })
}
