//! Elementary cellular automata: rule tables, packed configurations, single
//! steps and spacetime diagrams.
//!
//! Cells are stored packed, 64 to a word, with cell `j` at bit `j % 64` of
//! word `j / 64`. Rule numbers follow the usual convention: the output for
//! the neighbourhood `(left, center, right) = (a, b, c)` is bit `4a + 2b + c`
//! of the rule number.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaError {
    #[error("rule number {0} is outside 0..=255")]
    RuleOutOfRange(i64),
    #[error("configuration width must be at least 1")]
    EmptyConfiguration,
    #[error("invalid cell character {0:?} (expected '0' or '1')")]
    BadCell(char),
    #[error("width {0} is even; pass an explicit column index")]
    EvenWidth(usize),
    #[error("column {column} is outside a row of width {width}")]
    ColumnOutOfRange { column: usize, width: usize },
    #[error("unknown boundary mode {0:?}")]
    BadBoundary(String),
}

/// How the two ends of a finite row see their missing neighbour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// The row is a ring.
    #[default]
    Cyclic,
    /// Out-of-range neighbours read as 0 at every step.
    FixedZero,
}

impl FromStr for Boundary {
    type Err = CaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cyclic" => Ok(Boundary::Cyclic),
            "zero" | "fixed-zero" => Ok(Boundary::FixedZero),
            other => Err(CaError::BadBoundary(other.to_string())),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Cyclic => "cyclic",
            Boundary::FixedZero => "zero",
        })
    }
}

/// The local map of an elementary cellular automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleTable {
    entries: [bool; 8],
    number: u8,
}

impl RuleTable {
    /// Builds the table for a rule number in standard numbering.
    pub fn from_number(k: i64) -> Result<Self, CaError> {
        let number = u8::try_from(k).map_err(|_| CaError::RuleOutOfRange(k))?;
        let mut entries = [false; 8];
        for (idx, entry) in entries.iter_mut().enumerate() {
            *entry = (number >> idx) & 1 == 1;
        }
        Ok(RuleTable { entries, number })
    }

    pub fn from_entries(entries: [bool; 8]) -> Self {
        let number = entries
            .iter()
            .enumerate()
            .fold(0u8, |acc, (idx, &bit)| acc | (u8::from(bit) << idx));
        RuleTable { entries, number }
    }

    /// Rule 110 built by evaluating the arithmetic recurrence
    /// `p + q - (1 + o) p q` on each neighbourhood `(o, p, q)`, rather than
    /// from its number.
    pub fn rule110_from_recurrence() -> Self {
        let mut entries = [false; 8];
        for (idx, entry) in entries.iter_mut().enumerate() {
            let o = ((idx >> 2) & 1) as i32;
            let p = ((idx >> 1) & 1) as i32;
            let q = (idx & 1) as i32;
            let value = p + q - (1 + o) * p * q;
            debug_assert!(value == 0 || value == 1);
            *entry = value == 1;
        }
        RuleTable::from_entries(entries)
    }

    pub fn number(&self) -> u8 {
        self.number
    }

    pub fn entries(&self) -> [bool; 8] {
        self.entries
    }

    #[inline]
    pub fn output(&self, left: bool, center: bool, right: bool) -> bool {
        self.entries[(usize::from(left) << 2) | (usize::from(center) << 1) | usize::from(right)]
    }

    /// Applies the rule to packed neighbourhood words, 64 cells at a time.
    #[inline]
    pub(crate) fn apply_words(&self, left: u64, center: u64, right: u64) -> u64 {
        let mut out = 0u64;
        for (idx, &on) in self.entries.iter().enumerate() {
            if !on {
                continue;
            }
            let l = if idx & 4 != 0 { left } else { !left };
            let c = if idx & 2 != 0 { center } else { !center };
            let r = if idx & 1 != 0 { right } else { !right };
            out |= l & c & r;
        }
        out
    }
}

impl fmt::Display for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}", self.number)
    }
}

#[inline]
fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// One step of a row of at most 64 cells held in the low bits of a word.
#[inline]
pub fn step_word(cells: u64, width: usize, rule: &RuleTable, boundary: Boundary) -> u64 {
    debug_assert!((1..=64).contains(&width));
    let mask = low_mask(width);
    let (left, right) = match boundary {
        Boundary::Cyclic => {
            let top = (cells >> (width - 1)) & 1;
            let left = ((cells << 1) | top) & mask;
            let right = (cells >> 1) | ((cells & 1) << (width - 1));
            (left, right)
        }
        Boundary::FixedZero => ((cells << 1) & mask, cells >> 1),
    };
    rule.apply_words(left, cells, right) & mask
}

/// A finite row of binary cells together with its boundary mode.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    words: Vec<u64>,
    len: usize,
    boundary: Boundary,
}

impl Configuration {
    pub fn zeros(len: usize, boundary: Boundary) -> Result<Self, CaError> {
        if len == 0 {
            return Err(CaError::EmptyConfiguration);
        }
        Ok(Configuration { words: vec![0; len.div_ceil(64)], len, boundary })
    }

    /// A single black cell at index `len / 2`.
    pub fn single(len: usize, boundary: Boundary) -> Result<Self, CaError> {
        let mut c = Self::zeros(len, boundary)?;
        c.set(len / 2, true);
        Ok(c)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I, boundary: Boundary) -> Result<Self, CaError> {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut c = Self::zeros(bits.len(), boundary)?;
        for (j, b) in bits.into_iter().enumerate() {
            c.set(j, b);
        }
        Ok(c)
    }

    /// Parses a string of `0`/`1` characters, cell 0 first.
    pub fn parse(s: &str, boundary: Boundary) -> Result<Self, CaError> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CaError::BadCell(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_bits(bits, boundary)
    }

    /// Row whose cell `j` is bit `j` of `index`. Width at most 64.
    pub fn from_index(index: u64, len: usize, boundary: Boundary) -> Result<Self, CaError> {
        assert!(len <= 64, "from_index supports widths up to 64");
        let mut c = Self::zeros(len, boundary)?;
        c.words[0] = index & low_mask(len);
        Ok(c)
    }

    /// Inverse of [`Configuration::from_index`]. Width at most 64.
    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 64, "to_index supports widths up to 64");
        self.words[0]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len, "cell {j} out of range for width {}", self.len);
        (self.words[j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, j: usize, value: bool) {
        assert!(j < self.len, "cell {j} out of range for width {}", self.len);
        let bit = 1u64 << (j % 64);
        if value {
            self.words[j / 64] |= bit;
        } else {
            self.words[j / 64] &= !bit;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |j| self.get(j))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn to_bitstring(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Cyclic rotation: cell `j` of the result is cell `j - k` of `self`.
    pub fn rotate(&self, k: usize) -> Self {
        let mut out = self.clone();
        for j in 0..self.len {
            out.set((j + k) % self.len, self.get(j));
        }
        out
    }

    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Configuration { words, len: self.len, boundary: self.boundary }
    }

    fn last_mask(&self) -> u64 {
        low_mask(self.len - 64 * (self.words.len() - 1))
    }

    /// Row whose cell `j` holds cell `j - 1` of `self` (the left neighbours).
    fn left_neighbours(&self) -> Vec<u64> {
        let n = self.words.len();
        let mut out = vec![0u64; n];
        let mut carry = match self.boundary {
            Boundary::Cyclic => u64::from(self.get(self.len - 1)),
            Boundary::FixedZero => 0,
        };
        for (i, &w) in self.words.iter().enumerate() {
            out[i] = (w << 1) | carry;
            carry = w >> 63;
        }
        out[n - 1] &= self.last_mask();
        out
    }

    /// Row whose cell `j` holds cell `j + 1` of `self` (the right neighbours).
    fn right_neighbours(&self) -> Vec<u64> {
        let n = self.words.len();
        let mut out = vec![0u64; n];
        for i in 0..n {
            let next = if i + 1 < n { self.words[i + 1] & 1 } else { 0 };
            out[i] = (self.words[i] >> 1) | (next << 63);
        }
        out[n - 1] &= self.last_mask();
        if self.boundary == Boundary::Cyclic && self.get(0) {
            let j = self.len - 1;
            out[j / 64] |= 1 << (j % 64);
        }
        out
    }
}

impl Ord for Configuration {
    /// Width first, then lexicographic order of the cells read from cell 0.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| {
                self.words
                    .iter()
                    .map(|w| w.reverse_bits())
                    .cmp(other.words.iter().map(|w| w.reverse_bits()))
            })
            .then_with(|| (self.boundary as u8).cmp(&(other.boundary as u8)))
    }
}

impl PartialOrd for Configuration {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({}, {})", self.to_bitstring(), self.boundary)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// Advances every cell of `c` by one generation.
pub fn step(c: &Configuration, rule: &RuleTable) -> Configuration {
    let left = c.left_neighbours();
    let right = c.right_neighbours();
    let mut words: Vec<u64> = c
        .words
        .iter()
        .zip(left.iter().zip(&right))
        .map(|(&w, (&l, &r))| rule.apply_words(l, w, r))
        .collect();
    let last = words.len() - 1;
    words[last] &= c.last_mask();
    Configuration { words, len: c.len, boundary: c.boundary }
}

/// Rows of an evolution; row `i` is generation `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpacetimeDiagram {
    rule: RuleTable,
    rows: Vec<Configuration>,
}

impl SpacetimeDiagram {
    pub fn rule(&self) -> RuleTable {
        self.rule
    }

    pub fn rows(&self) -> &[Configuration] {
        &self.rows
    }

    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn last(&self) -> &Configuration {
        self.rows.last().expect("a diagram always has row 0")
    }

    /// First pair `(i, j)`, `i < j`, with identical rows, if any.
    pub fn first_repeat(&self) -> Option<(usize, usize)> {
        let mut seen = std::collections::HashMap::new();
        for (j, row) in self.rows.iter().enumerate() {
            if let Some(&i) = seen.get(row) {
                return Some((i, j));
            }
            seen.insert(row, j);
        }
        None
    }

    /// Portable bitmap, one image row per generation, black = 1. Binary `P4`
    /// unless `ascii` asks for `P1`.
    pub fn to_pbm(&self, ascii: bool) -> Vec<u8> {
        let (w, h) = (self.width(), self.rows.len());
        let mut out = Vec::new();
        if ascii {
            out.extend_from_slice(format!("P1\n{w} {h}\n").as_bytes());
            for row in &self.rows {
                let line: Vec<String> = row.iter().map(|b| u8::from(b).to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        } else {
            out.extend_from_slice(format!("P4\n{w} {h}\n").as_bytes());
            for row in &self.rows {
                let mut byte = 0u8;
                for j in 0..w {
                    if row.get(j) {
                        byte |= 0x80 >> (j % 8);
                    }
                    if j % 8 == 7 || j + 1 == w {
                        out.push(byte);
                        byte = 0;
                    }
                }
            }
        }
        out
    }
}

/// Runs `t` steps from `initial`. The result has `t + 1` rows.
pub fn evolve(initial: &Configuration, rule: &RuleTable, t: usize) -> SpacetimeDiagram {
    let mut rows = Vec::with_capacity(t + 1);
    rows.push(initial.clone());
    for i in 0..t {
        let next = step(&rows[i], rule);
        rows.push(next);
    }
    SpacetimeDiagram { rule: *rule, rows }
}

/// Runs `t` steps and keeps only the final row.
pub fn evolve_final(initial: &Configuration, rule: &RuleTable, t: usize) -> Configuration {
    let mut c = initial.clone();
    for _ in 0..t {
        c = step(&c, rule);
    }
    c
}

/// The bit of one column in every row, in time order. With no column given
/// the width must be odd and the middle column is used.
pub fn center_column(d: &SpacetimeDiagram, column: Option<usize>) -> Result<Vec<bool>, CaError> {
    let width = d.width();
    let column = match column {
        Some(c) if c >= width => return Err(CaError::ColumnOutOfRange { column: c, width }),
        Some(c) => c,
        None if width % 2 == 0 => return Err(CaError::EvenWidth(width)),
        None => width / 2,
    };
    Ok(d.rows.iter().map(|row| row.get(column)).collect())
}
