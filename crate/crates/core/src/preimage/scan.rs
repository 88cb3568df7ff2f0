//! One-step preimages by a left-to-right scan over `(left, center)` cell
//! pairs.
//!
//! Cell `j` of the successor is fixed by the triple `(I[j-1], I[j], I[j+1])`,
//! so once a pair `(I[j-1], I[j])` is known the constraint at `j` admits at
//! most two choices of `I[j+1]`. A backward pass marks the pairs from which
//! the remaining constraints (and, on a ring, the two constraints that
//! straddle the seam) can still be met; the forward pass then only walks
//! live pairs, so every branch it opens ends in a preimage.

use std::ops::ControlFlow;

use crate::ca::{Boundary, Configuration, RuleTable};

/// A pair `(I[j-1], I[j])` packed as `2 * left + center`.
type Pair = usize;

#[inline]
fn pair(left: bool, center: bool) -> Pair {
    (usize::from(left) << 1) | usize::from(center)
}

/// Counts rule-table evaluations.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Work(pub u64);

struct Start {
    /// Cells fixed before the scan begins.
    prefix: Vec<bool>,
    /// Pair held at position `first`.
    state: Pair,
    /// Closing neighbour for the last constraint, and for rings the two
    /// seam cells.
    seam: Seam,
}

#[derive(Clone, Copy)]
enum Seam {
    Zero,
    Ring { first: bool, second: bool },
}

struct Scan<'a> {
    ending: Vec<bool>,
    rule: &'a RuleTable,
    /// Position of the pair a start holds.
    first: usize,
}

impl<'a> Scan<'a> {
    fn starts(&self, boundary: Boundary) -> Vec<Start> {
        match boundary {
            Boundary::Cyclic => [(false, false), (false, true), (true, false), (true, true)]
                .into_iter()
                .map(|(a, b)| Start { prefix: vec![a, b], state: pair(a, b), seam: Seam::Ring { first: a, second: b } })
                .collect(),
            Boundary::FixedZero => [false, true]
                .into_iter()
                .map(|a| Start { prefix: vec![a], state: pair(false, a), seam: Seam::Zero })
                .collect(),
        }
    }

    fn accepts(&self, seam: Seam, state: Pair, work: &mut Work) -> bool {
        let n = self.ending.len();
        let (p, q) = (state & 2 != 0, state & 1 != 0);
        match seam {
            Seam::Zero => {
                work.0 += 1;
                self.rule.output(p, q, false) == self.ending[n - 1]
            }
            Seam::Ring { first, second } => {
                work.0 += 2;
                self.rule.output(p, q, first) == self.ending[n - 1]
                    && self.rule.output(q, first, second) == self.ending[0]
            }
        }
    }

    /// `live[j - first][s]`: from pair `s` at position `j` the scan can still
    /// reach an accepted final pair.
    fn live_table(&self, seam: Seam, work: &mut Work) -> Vec<[bool; 4]> {
        let n = self.ending.len();
        let layers = n - self.first;
        let mut live = vec![[false; 4]; layers];
        for s in 0..4 {
            live[layers - 1][s] = self.accepts(seam, s, work);
        }
        for j in (self.first..n - 1).rev() {
            let idx = j - self.first;
            for s in 0..4 {
                let (p, q) = (s & 2 != 0, s & 1 != 0);
                live[idx][s] = [false, true].into_iter().any(|x| {
                    work.0 += 1;
                    self.rule.output(p, q, x) == self.ending[j] && live[idx + 1][pair(q, x)]
                });
            }
        }
        live
    }
}

fn brute_force_small(e: &Configuration, rule: &RuleTable) -> Vec<Configuration> {
    let n = e.len();
    let mut v: Vec<Configuration> = (0..1u64 << n)
        .map(|i| Configuration::from_index(i, n, e.boundary()).expect("n >= 1"))
        .filter(|c| &crate::ca::step(c, rule) == e)
        .collect();
    v.sort();
    v
}

fn scan_for<'r>(e: &Configuration, rule: &'r RuleTable) -> Scan<'r> {
    let first = match e.boundary() {
        Boundary::Cyclic => 1,
        Boundary::FixedZero => 0,
    };
    Scan { ending: e.iter().collect(), rule, first }
}

/// Whether `e` has a one-step preimage. Linear in the width.
///
/// This also answers whether `e` has an ancestor at any depth: the
/// configuration one step before `e` on any longer path is itself a
/// one-step preimage.
pub fn has_ancestor(e: &Configuration, rule: &RuleTable) -> bool {
    has_preimage_counted(e, rule, &mut Work::default())
}

pub(crate) fn has_preimage_counted(e: &Configuration, rule: &RuleTable, work: &mut Work) -> bool {
    if e.boundary() == Boundary::Cyclic && e.len() <= 2 {
        work.0 += (e.len() as u64) << e.len();
        return !brute_force_small(e, rule).is_empty();
    }
    let scan = scan_for(e, rule);
    scan.starts(e.boundary()).into_iter().any(|start| {
        let live = scan.live_table(start.seam, work);
        live[0][start.state]
    })
}

/// All one-step preimages of `e`, in increasing lexicographic order.
pub fn preimages_one_step(e: &Configuration, rule: &RuleTable) -> Vec<Configuration> {
    let mut out = Vec::new();
    let _ = for_each_preimage(e, rule, &mut Work::default(), |c| {
        out.push(c);
        ControlFlow::<()>::Continue(())
    });
    out
}

/// Visits one-step preimages of `e` in increasing lexicographic order until
/// the visitor breaks.
pub(crate) fn for_each_preimage<B>(
    e: &Configuration,
    rule: &RuleTable,
    work: &mut Work,
    mut visit: impl FnMut(Configuration) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if e.boundary() == Boundary::Cyclic && e.len() <= 2 {
        work.0 += (e.len() as u64) << e.len();
        for c in brute_force_small(e, rule) {
            visit(c)?;
        }
        return ControlFlow::Continue(());
    }
    let n = e.len();
    let scan = scan_for(e, rule);
    for start in scan.starts(e.boundary()) {
        let live = scan.live_table(start.seam, work);
        if !live[0][start.state] {
            continue;
        }
        let mut cells = vec![false; n];
        cells[..start.prefix.len()].copy_from_slice(&start.prefix);
        extend(&scan, &live, scan.first, start.state, &mut cells, e.boundary(), work, &mut visit)?;
    }
    ControlFlow::Continue(())
}

#[allow(clippy::too_many_arguments)]
fn extend<B>(
    scan: &Scan<'_>,
    live: &[[bool; 4]],
    j: usize,
    state: Pair,
    cells: &mut Vec<bool>,
    boundary: Boundary,
    work: &mut Work,
    visit: &mut impl FnMut(Configuration) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let n = cells.len();
    if j == n - 1 {
        let c = Configuration::from_bits(cells.iter().copied(), boundary).expect("n >= 1");
        return visit(c);
    }
    let (p, q) = (state & 2 != 0, state & 1 != 0);
    for x in [false, true] {
        work.0 += 1;
        let next = pair(q, x);
        if scan.rule.output(p, q, x) == scan.ending[j] && live[j + 1 - scan.first][next] {
            cells[j + 1] = x;
            extend(scan, live, j + 1, next, cells, boundary, work, visit)?;
        }
    }
    ControlFlow::Continue(())
}
