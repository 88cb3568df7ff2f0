use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_WORD_CEILING: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TagError {
    #[error("a cyclic tag system needs at least one appendant")]
    NoAppendants,
    #[error("bad character {0:?} in a binary word")]
    BadBit(char),
    #[error("word grew to {len} bits at step {step}, over the ceiling of {ceiling}")]
    WordTooLong { step: u64, len: usize, ceiling: usize },
}

/// A binary word written as a string of `0` and `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<bool>);

impl FromStr for Word {
    type Err = TagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(TagError::BadBit(other)),
            })
            .collect::<Result<_, _>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemFile")]
pub struct CyclicTagSystem {
    appendants: Vec<Word>,
}

#[derive(Deserialize)]
struct SystemFile {
    appendants: Vec<Word>,
}

impl TryFrom<SystemFile> for CyclicTagSystem {
    type Error = TagError;

    fn try_from(f: SystemFile) -> Result<Self, Self::Error> {
        CyclicTagSystem::new(f.appendants)
    }
}

impl CyclicTagSystem {
    pub fn new(appendants: Vec<Word>) -> Result<Self, TagError> {
        if appendants.is_empty() {
            return Err(TagError::NoAppendants);
        }
        Ok(CyclicTagSystem { appendants })
    }

    pub fn parse(appendants: &[&str]) -> Result<Self, TagError> {
        CyclicTagSystem::new(appendants.iter().map(|s| s.parse()).collect::<Result<_, _>>()?)
    }

    pub fn appendants(&self) -> &[Word] {
        &self.appendants
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TagTrace {
    /// The starting word followed by the word after each step.
    pub words: Vec<Word>,
    pub steps: u64,
    /// The word became empty.
    pub halted: bool,
}

/// Runs `c` on `word` for at most `max_steps` steps.
///
/// Each step deletes the leading bit and, if it was 1, appends the current
/// appendant; the current appendant moves on by one every step.
pub fn run_cyclic_tag(c: &CyclicTagSystem, word: &Word, max_steps: u64, ceiling: usize) -> Result<TagTrace, TagError> {
    let mut w: VecDeque<bool> = word.0.iter().copied().collect();
    let mut words = vec![word.clone()];
    let mut pointer = 0usize;
    let mut steps = 0u64;
    while steps < max_steps {
        let Some(head) = w.pop_front() else { break };
        if head {
            w.extend(c.appendants[pointer].0.iter().copied());
        }
        pointer = (pointer + 1) % c.appendants.len();
        steps += 1;
        if w.len() > ceiling {
            return Err(TagError::WordTooLong { step: steps, len: w.len(), ceiling });
        }
        words.push(Word(w.iter().copied().collect()));
    }
    Ok(TagTrace { words, steps, halted: w.is_empty() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn empty_appendant_halts_after_one_step() {
        let c = CyclicTagSystem::parse(&[""]).unwrap();
        let t = run_cyclic_tag(&c, &w("1"), 10, DEFAULT_WORD_CEILING).unwrap();
        assert_eq!(t.words, vec![w("1"), w("")]);
        assert_eq!(t.steps, 1);
        assert!(t.halted);
    }

    #[test]
    fn empty_word_halts_immediately() {
        let c = CyclicTagSystem::parse(&["1"]).unwrap();
        let t = run_cyclic_tag(&c, &w(""), 10, DEFAULT_WORD_CEILING).unwrap();
        assert_eq!(t.words, vec![w("")]);
        assert_eq!(t.steps, 0);
        assert!(t.halted);
    }

    #[test]
    fn pointer_advances_on_zero() {
        // the 0 consumes appendant "0", so the 1 gets "11"
        let c = CyclicTagSystem::parse(&["0", "11"]).unwrap();
        let t = run_cyclic_tag(&c, &w("01"), 2, DEFAULT_WORD_CEILING).unwrap();
        assert_eq!(t.words, vec![w("01"), w("1"), w("11")]);
    }

    #[test]
    fn ceiling() {
        let c = CyclicTagSystem::parse(&["111"]).unwrap();
        assert_eq!(
            run_cyclic_tag(&c, &w("1"), 100, 8),
            Err(TagError::WordTooLong { step: 4, len: 9, ceiling: 8 })
        );
    }

    #[test]
    fn file_format() {
        let c: CyclicTagSystem = serde_json::from_str(r#"{"appendants": ["011", ""]}"#).unwrap();
        assert_eq!(c.appendants(), &[w("011"), w("")]);
        assert!(serde_json::from_str::<CyclicTagSystem>(r#"{"appendants": []}"#).is_err());
        assert!(serde_json::from_str::<CyclicTagSystem>(r#"{"appendants": ["012"]}"#).is_err());
    }
}
