//! One-sided cellular automata.
//!
//! The automaton runs on a bi-infinite row of bits starting from `...000111...`
//! (cell `i` is 1 iff `i >= 0`). The next state of cell `i` depends on cell
//! `i` and the `n-1` cells immediately to its left, through a Boolean
//! function `f` with `f(0,...,0) = 0`. Because the dependence is strictly
//! leftward and cells left of 0 stay 0, the window `[0, W)` is self-contained:
//! simulating any prefix of the tape is exact, with no boundary
//! approximation on the right.

use crate::bits::BitVec;

/// Errors from rule construction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("arity {0} is too large to tabulate")]
    ArityTooLarge(usize),
    #[error("rule of arity {arity} needs a table of {expected} entries, found {found}")]
    TableLength {
        arity: usize,
        expected: usize,
        found: usize,
    },
    #[error("f(0,...,0) must be 0")]
    OriginNotZero,
}

/// An update rule: arity `n` plus the full truth table of `f`.
///
/// `table[m]` is the output for the neighborhood read as a binary number with
/// the leftmost cell as the most significant bit. Equivalently, bit `j` of
/// the index is the value of the cell `j` steps to the left of the updated
/// cell (bit 0 = the cell itself). The table must have `f(0,...,0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CARule {
    n: usize,
    table: Vec<bool>,
}

impl CARule {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self, RuleError> {
        if n == 0 {
            return Err(RuleError::ZeroArity);
        }
        if n > 20 {
            return Err(RuleError::ArityTooLarge(n));
        }
        if table.len() != 1 << n {
            return Err(RuleError::TableLength {
                arity: n,
                expected: 1 << n,
                found: table.len(),
            });
        }
        if table[0] {
            return Err(RuleError::OriginNotZero);
        }
        Ok(CARule { n, table })
    }

    /// Convenience constructor from 0/1 entries.
    pub fn from_bits(n: usize, bits: &[u8]) -> Result<Self, RuleError> {
        Self::new(n, bits.iter().map(|&b| b != 0).collect())
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    /// Applies the rule to a neighborhood index.
    #[inline]
    pub fn apply(&self, neighborhood: usize) -> bool {
        self.table[neighborhood]
    }
}

/// The first `T` rows of an automaton, restricted to the window `[0, W)`.
///
/// Row 0 is all ones (the window restriction of `...000111...`); cells at
/// negative indices are implicitly 0 and never stored. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CARows {
    width: usize,
    rows: Vec<BitVec>,
}

impl CARows {
    /// Number of rows, i.e. the time horizon `T`.
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Cell value at time `t`, window index `i`.
    pub fn get(&self, t: usize, i: usize) -> bool {
        self.rows[t].get(i)
    }

    pub fn row(&self, t: usize) -> &BitVec {
        &self.rows[t]
    }

    /// The same rows cut down to a narrower window.
    pub fn truncated(&self, width: usize) -> CARows {
        assert!(width <= self.width);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = BitVec::zeros(width);
                for i in 0..width {
                    row.set(i, r.get(i));
                }
                row
            })
            .collect();
        CARows { width, rows }
    }

    /// Builds rows directly from bit data; used by grid extraction.
    pub(crate) fn from_rows(width: usize, rows: Vec<BitVec>) -> CARows {
        CARows { width, rows }
    }
}

/// Runs the automaton for `T` rows over the window `[0, W)`.
pub fn ca_rows(rule: &CARule, t_rows: usize, width: usize) -> CARows {
    assert!(t_rows >= 1, "need at least one row");
    assert!(width >= 1, "need a nonempty window");
    let n = rule.arity();
    let mask = (1usize << n) - 1;
    let mut rows = Vec::with_capacity(t_rows);
    rows.push(BitVec::ones(width));
    for t in 1..t_rows {
        let prev = &rows[t - 1];
        let mut row = BitVec::zeros(width);
        // Sliding neighborhood register: after pushing cell i, bit j holds
        // the cell j steps to its left. Cells left of index 0 are zero, so
        // the register simply starts at 0.
        let mut reg = 0usize;
        for i in 0..width {
            reg = (reg << 1 | prev.get(i) as usize) & mask;
            row.set(i, rule.apply(reg));
        }
        rows.push(row);
    }
    CARows {
        width,
        rows,
    }
}

/// Finds the first occurrence of `pattern` in the space-time diagram: the
/// smallest `t`, then the smallest start index `i`, such that the pattern
/// occurs in row `t` beginning at cell `i`. Occurrences may begin at negative
/// indices (cells left of 0 read as 0) but must end inside the window.
/// Returns `None` if the pattern is absent from all rows `t < T`.
pub fn find_pattern(
    rule: &CARule,
    pattern: &[bool],
    t_rows: usize,
    width: usize,
) -> Option<(usize, i64)> {
    assert!(!pattern.is_empty(), "pattern must be nonempty");
    assert!(width >= pattern.len(), "window must fit the pattern");
    let rows = ca_rows(rule, t_rows, width);
    let len = pattern.len() as i64;
    for t in 0..rows.row_count() {
        let row = rows.row(t);
        for start in (1 - len)..=(width as i64 - len) {
            let hit = pattern.iter().enumerate().all(|(j, &want)| {
                let idx = start + j as i64;
                let cell = idx >= 0 && row.get(idx as usize);
                cell == want
            });
            if hit {
                return Some((t, start));
            }
        }
    }
    None
}

/// Parses a pattern string of `0`/`1` characters.
pub fn parse_pattern(s: &str) -> Option<Vec<bool>> {
    if s.is_empty() {
        return None;
    }
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// The running example: `f(x, y) = x XOR y`.
pub fn xor_rule() -> CARule {
    CARule::from_bits(2, &[0, 1, 1, 0]).unwrap()
}
