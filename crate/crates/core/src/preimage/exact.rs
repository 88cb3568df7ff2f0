//! Exact-`t` ancestor existence on a ring by the block method.
//!
//! After `t` steps, cell `j` depends only on the `2t + 1` initial cells
//! `j - t ..= j + t`. We tabulate once which of the `2^(2t+1)` initial
//! blocks land on a 0 and which on a 1, then look for a cyclic sequence of
//! blocks, one per cell, in which neighbouring blocks agree on their `2t`
//! shared cells. The shared cells form the states of a layered graph and a
//! valid initial row is a closed walk of length `n` through it.

use thiserror::Error;

use crate::ca::{Boundary, Configuration, RuleTable};

/// Default cap on `n * 2^(2t+1)` block-table entries.
pub const DEFAULT_BLOCK_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("t = {t} needs {entries} block-table entries, over the budget of {budget}")]
    BudgetExceeded { t: usize, entries: u128, budget: u64 },
    #[error("step count must be at least 1")]
    ZeroSteps,
    #[error("the block method works on rings; got a fixed-zero row")]
    NotCyclic,
}

/// `image[w]` is the single cell that block `w` (bit `i` = cell `i`) becomes
/// after `t` steps.
fn block_images(rule: &RuleTable, t: usize) -> Vec<bool> {
    let width = 2 * t + 1;
    (0..1usize << width)
        .map(|w| {
            let mut cells: Vec<bool> = (0..width).map(|i| (w >> i) & 1 == 1).collect();
            while cells.len() > 1 {
                cells = cells.windows(3).map(|n| rule.output(n[0], n[1], n[2])).collect();
            }
            cells[0]
        })
        .collect()
}

/// Whether some initial ring evolves to `e` in exactly `t` steps.
pub fn exists_initial_exact_t(e: &Configuration, rule: &RuleTable, t: usize) -> Result<bool, ExactError> {
    exists_initial_exact_t_with_budget(e, rule, t, DEFAULT_BLOCK_BUDGET)
}

pub fn exists_initial_exact_t_with_budget(
    e: &Configuration,
    rule: &RuleTable,
    t: usize,
    budget: u64,
) -> Result<bool, ExactError> {
    if t == 0 {
        return Err(ExactError::ZeroSteps);
    }
    if e.boundary() != Boundary::Cyclic {
        return Err(ExactError::NotCyclic);
    }
    let n = e.len();
    let entries = (n as u128) << (2 * t + 1).min(127);
    if 2 * t + 1 >= 64 || entries > u128::from(budget) {
        return Err(ExactError::BudgetExceeded { t, entries, budget });
    }

    let image = block_images(rule, t);
    let overlap = 2 * t;
    let states = 1usize << overlap;
    let ending: Vec<bool> = e.iter().collect();

    // successors[b][s]: states reachable from s through a block whose image is b
    let successors: [Vec<[Option<usize>; 2]>; 2] = [false, true].map(|target| {
        (0..states)
            .map(|s| {
                [0usize, 1].map(|x| {
                    let block = s | (x << overlap);
                    (image[block] == target).then_some(block >> 1)
                })
            })
            .collect()
    });

    let mut current = vec![false; states];
    let mut next = vec![false; states];
    for start in 0..states {
        current.fill(false);
        current[start] = true;
        for &cell in &ending {
            next.fill(false);
            let table = &successors[usize::from(cell)];
            let mut any = false;
            for (s, _) in current.iter().enumerate().filter(|(_, &on)| on) {
                for succ in table[s].into_iter().flatten() {
                    next[succ] = true;
                    any = true;
                }
            }
            std::mem::swap(&mut current, &mut next);
            if !any {
                break;
            }
        }
        if current[start] {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{evolve_final, step_word};
    use crate::preimage::has_ancestor;

    fn reachable_exact(n: usize, rule: &RuleTable, t: usize) -> Vec<bool> {
        let mut seen = vec![false; 1 << n];
        for i in 0..1u64 << n {
            let mut x = i;
            for _ in 0..t {
                x = step_word(x, n, rule, Boundary::Cyclic);
            }
            seen[x as usize] = true;
        }
        seen
    }

    #[test]
    fn one_step_agrees_with_scan() {
        for rule in [30, 54, 90, 110] {
            let r = RuleTable::from_number(rule).unwrap();
            for n in 1..=9 {
                for i in 0..1u64 << n {
                    let e = Configuration::from_index(i, n, Boundary::Cyclic).unwrap();
                    assert_eq!(exists_initial_exact_t(&e, &r, 1).unwrap(), has_ancestor(&e, &r), "rule {rule} e={e}");
                }
            }
        }
    }

    #[test]
    fn rule_110_width_10_three_steps() {
        let r = RuleTable::from_number(110).unwrap();
        let n = 10;
        let oracle = reachable_exact(n, &r, 3);
        for i in 0..1u64 << n {
            let e = Configuration::from_index(i, n, Boundary::Cyclic).unwrap();
            assert_eq!(exists_initial_exact_t(&e, &r, 3).unwrap(), oracle[i as usize], "e={e}");
        }
    }

    #[test]
    fn narrow_rings_wider_than_the_block() {
        // 2t + 1 > n: blocks wrap onto themselves
        let r = RuleTable::from_number(110).unwrap();
        for n in 1..=5 {
            for t in 1..=4 {
                let oracle = reachable_exact(n, &r, t);
                for i in 0..1u64 << n {
                    let e = Configuration::from_index(i, n, Boundary::Cyclic).unwrap();
                    assert_eq!(exists_initial_exact_t(&e, &r, t).unwrap(), oracle[i as usize], "n {n} t {t}");
                }
            }
        }
    }

    #[test]
    fn identity_rule_always_reachable() {
        let id = RuleTable::from_number(204).unwrap();
        let e = Configuration::parse("1100101110", Boundary::Cyclic).unwrap();
        for t in 1..=5 {
            assert!(exists_initial_exact_t(&e, &id, t).unwrap());
            assert_eq!(evolve_final(&e, &id, t), e);
        }
    }

    #[test]
    fn refuses_over_budget_and_bad_input() {
        let r = RuleTable::from_number(110).unwrap();
        let e = Configuration::zeros(100, Boundary::Cyclic).unwrap();
        assert_eq!(
            exists_initial_exact_t(&e, &r, 12),
            Err(ExactError::BudgetExceeded { t: 12, entries: 100 << 25, budget: DEFAULT_BLOCK_BUDGET })
        );
        assert!(exists_initial_exact_t_with_budget(&e, &r, 3, 100).is_err());
        assert_eq!(exists_initial_exact_t(&e, &r, 0), Err(ExactError::ZeroSteps));
        let z = Configuration::zeros(5, Boundary::FixedZero).unwrap();
        assert_eq!(exists_initial_exact_t(&z, &r, 1), Err(ExactError::NotCyclic));
    }
}
