use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::scan::{for_each_preimage, Work};
use crate::ca::{Configuration, RuleTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PredicateParseError {
    #[error("unknown predicate {0:?}")]
    Unknown(String),
    #[error("predicate {name} expects {expected}")]
    BadArgument { name: &'static str, expected: &'static str },
}

/// Named predicates on initial rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Predicate {
    AlwaysTrue,
    /// An even number of black cells.
    EvenParity,
    /// The bits occur as a contiguous run of cells (no wrap-around).
    ContainsPattern(Vec<bool>),
    /// At most this fraction of cells are black.
    DensityAtMost(f64),
}

impl Predicate {
    pub fn holds(&self, c: &Configuration) -> bool {
        match self {
            Predicate::AlwaysTrue => true,
            Predicate::EvenParity => c.count_ones() % 2 == 0,
            Predicate::ContainsPattern(pattern) => {
                if pattern.is_empty() {
                    return true;
                }
                let cells: Vec<bool> = c.iter().collect();
                cells.windows(pattern.len()).any(|w| w == pattern.as_slice())
            }
            Predicate::DensityAtMost(fraction) => (c.count_ones() as f64) <= fraction * c.len() as f64,
        }
    }
}

impl FromStr for Predicate {
    type Err = PredicateParseError;

    /// `always_true`, `even_parity`, `contains_pattern:<bits>` or
    /// `density_at_most:<fraction>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        match (name, arg) {
            ("always_true", None) => Ok(Predicate::AlwaysTrue),
            ("even_parity", None) => Ok(Predicate::EvenParity),
            ("contains_pattern", Some(bits)) => bits
                .chars()
                .map(|ch| match ch {
                    '0' => Some(false),
                    '1' => Some(true),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()
                .map(Predicate::ContainsPattern)
                .ok_or(PredicateParseError::BadArgument { name: "contains_pattern", expected: "a 0/1 string" }),
            ("density_at_most", Some(frac)) => frac
                .parse::<f64>()
                .ok()
                .filter(|f| (0.0..=1.0).contains(f))
                .map(Predicate::DensityAtMost)
                .ok_or(PredicateParseError::BadArgument { name: "density_at_most", expected: "a fraction in [0, 1]" }),
            _ => Err(PredicateParseError::Unknown(s.to_string())),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::AlwaysTrue => f.write_str("always_true"),
            Predicate::EvenParity => f.write_str("even_parity"),
            Predicate::ContainsPattern(bits) => {
                let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(f, "contains_pattern:{s}")
            }
            Predicate::DensityAtMost(x) => write!(f, "density_at_most:{x}"),
        }
    }
}

impl TryFrom<String> for Predicate {
    type Error = PredicateParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Predicate> for String {
    fn from(p: Predicate) -> String {
        p.to_string()
    }
}

/// Find an initial row satisfying a predicate that reaches `ending` in
/// exactly `steps` steps.
#[derive(Debug, Clone)]
pub struct InitProblem {
    pub ending: Configuration,
    pub steps: usize,
    pub predicate: Predicate,
    /// Largest predecessor list the solver will hold before giving up.
    pub bound: usize,
    pub rule: RuleTable,
}

impl InitProblem {
    pub fn rule110(ending: Configuration, steps: usize, predicate: Predicate, bound: usize) -> Self {
        InitProblem { ending, steps, predicate, bound, rule: RuleTable::from_number(110).expect("110 is a rule") }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("steps must be at least 1")]
    ZeroSteps,
    #[error("bound must be at least 1")]
    ZeroBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OutcomeKind {
    Found {
        #[serde(serialize_with = "serialize_bits")]
        initial: Configuration,
    },
    None,
    /// The predecessor list at `level` steps back grew past the bound.
    Aborted { level: usize },
}

fn serialize_bits<S: serde::Serializer>(c: &Configuration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_bitstring())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveOutcome {
    #[serde(flatten)]
    pub kind: OutcomeKind,
    /// Configurations placed on any predecessor list.
    pub predecessors_examined: u64,
    /// Rule-table evaluations.
    pub work: u64,
}

/// Traces the ending back one level at a time, holding every predecessor,
/// and tests the predicate on the rows found at the last level. The
/// witness, if any, is the lexicographically smallest satisfying row.
///
/// Work is `O(n * steps * bound)` rule evaluations: each level holds at most
/// `bound` rows and the scan spends `O(n)` per row plus `O(n)` per
/// predecessor produced.
pub fn solve_init(p: &InitProblem) -> Result<SolveOutcome, SolveError> {
    if p.steps == 0 {
        return Err(SolveError::ZeroSteps);
    }
    if p.bound == 0 {
        return Err(SolveError::ZeroBound);
    }
    let mut work = Work::default();
    let mut examined = 0u64;
    let mut level = vec![p.ending.clone()];
    for depth in 1..=p.steps {
        let mut next = Vec::new();
        let mut overflow = false;
        for c in &level {
            let flow = for_each_preimage(c, &p.rule, &mut work, |pre| {
                next.push(pre);
                examined += 1;
                if next.len() > p.bound {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if flow.is_break() {
                overflow = true;
                break;
            }
        }
        if overflow {
            return Ok(SolveOutcome { kind: OutcomeKind::Aborted { level: depth }, predecessors_examined: examined, work: work.0 });
        }
        level = next;
        if level.is_empty() {
            break;
        }
    }
    let kind = match level.into_iter().filter(|c| p.predicate.holds(c)).min() {
        Some(initial) => OutcomeKind::Found { initial },
        None => OutcomeKind::None,
    };
    Ok(SolveOutcome { kind, predecessors_examined: examined, work: work.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{evolve_final, step_word, Boundary};

    #[test]
    fn predicate_parsing() {
        assert_eq!("always_true".parse::<Predicate>().unwrap(), Predicate::AlwaysTrue);
        assert_eq!("even_parity".parse::<Predicate>().unwrap(), Predicate::EvenParity);
        assert_eq!(
            "contains_pattern:101".parse::<Predicate>().unwrap(),
            Predicate::ContainsPattern(vec![true, false, true])
        );
        assert_eq!("density_at_most:0.25".parse::<Predicate>().unwrap(), Predicate::DensityAtMost(0.25));
        assert!("density_at_most:2".parse::<Predicate>().is_err());
        assert!("contains_pattern:12".parse::<Predicate>().is_err());
        assert!("odd".parse::<Predicate>().is_err());
        for s in ["always_true", "even_parity", "contains_pattern:0110", "density_at_most:0.5"] {
            assert_eq!(s.parse::<Predicate>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn predicate_semantics() {
        let c = Configuration::parse("0110100", Boundary::Cyclic).unwrap();
        assert!(!Predicate::EvenParity.holds(&c));
        assert!(Predicate::ContainsPattern(vec![true, false, true]).holds(&c));
        assert!(!Predicate::ContainsPattern(vec![true, true, true]).holds(&c));
        // no wrap-around: the run 0..0 | 0 across the seam does not count as 000
        let seam = Configuration::parse("0110110", Boundary::Cyclic).unwrap();
        assert!(!Predicate::ContainsPattern(vec![false, false]).holds(&seam));
        assert!(Predicate::DensityAtMost(3.0 / 7.0).holds(&c));
        assert!(!Predicate::DensityAtMost(0.4).holds(&c));
    }

    #[test]
    fn planted_witness_is_recovered() {
        let rule = RuleTable::from_number(110).unwrap();
        let initial = Configuration::parse("1011000111010010", Boundary::Cyclic).unwrap();
        for steps in 1..=4 {
            let ending = evolve_final(&initial, &rule, steps);
            let out = solve_init(&InitProblem::rule110(ending.clone(), steps, Predicate::AlwaysTrue, 1 << 16)).unwrap();
            match out.kind {
                OutcomeKind::Found { initial: w } => {
                    assert_eq!(evolve_final(&w, &rule, steps), ending);
                    assert!(w <= initial);
                }
                other => panic!("expected a witness, got {other:?}"),
            }
        }
    }

    #[test]
    fn agrees_with_forward_oracle_on_non_aborted_instances() {
        let rule = RuleTable::from_number(110).unwrap();
        let (n, t, bound) = (10usize, 4usize, 10usize);
        // smallest even-parity ancestor of every ending, by forward evolution
        let mut best: Vec<Option<Configuration>> = vec![None; 1 << n];
        for i in 0..1u64 << n {
            let c = Configuration::from_index(i, n, Boundary::Cyclic).unwrap();
            if c.count_ones() % 2 != 0 {
                continue;
            }
            let mut x = i;
            for _ in 0..t {
                x = step_word(x, n, &rule, Boundary::Cyclic);
            }
            let slot = &mut best[x as usize];
            if slot.as_ref().map_or(true, |b| c < *b) {
                *slot = Some(c);
            }
        }
        let mut aborted = 0;
        for e in 0..1u64 << n {
            let ending = Configuration::from_index(e, n, Boundary::Cyclic).unwrap();
            let out = solve_init(&InitProblem::rule110(ending, t, Predicate::EvenParity, bound)).unwrap();
            match out.kind {
                OutcomeKind::Aborted { .. } => aborted += 1,
                OutcomeKind::Found { initial } => assert_eq!(Some(initial), best[e as usize]),
                OutcomeKind::None => assert_eq!(best[e as usize], None),
            }
        }
        assert!(aborted * 10 <= 1 << n, "aborted {aborted}");
    }

    #[test]
    fn rejects_degenerate_problems() {
        let e = Configuration::zeros(6, Boundary::Cyclic).unwrap();
        assert_eq!(solve_init(&InitProblem::rule110(e.clone(), 0, Predicate::AlwaysTrue, 4)), Err(SolveError::ZeroSteps));
        assert_eq!(solve_init(&InitProblem::rule110(e, 2, Predicate::AlwaysTrue, 0)), Err(SolveError::ZeroBound));
    }

    #[test]
    fn garden_of_eden_ending_has_no_witness() {
        let rule = RuleTable::from_number(110).unwrap();
        let n = 8;
        let eden = (0..1u64 << n)
            .map(|i| Configuration::from_index(i, n, Boundary::Cyclic).unwrap())
            .find(|e| !crate::preimage::has_ancestor(e, &rule))
            .unwrap();
        let out = solve_init(&InitProblem::rule110(eden, 3, Predicate::AlwaysTrue, 100)).unwrap();
        assert_eq!(out.kind, OutcomeKind::None);
        assert_eq!(out.predecessors_examined, 0);
    }
}
