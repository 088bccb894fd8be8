//! Heap games: invariant games (a fixed move set of integer vectors applied
//! to `d` heaps) and modular games (two heaps, with the available move set
//! selected by the time-heap count modulo `k`).
//!
//! A position is a *P-position* when the player who just moved wins with
//! optimal play; equivalently, no legal move leads to another P-position.

mod grid;
mod oracle;
mod solve;

pub use grid::{first_difference, first_difference_masked, Bounds, PGrid};
pub use oracle::{outcome_invariant, OutcomeCache};
pub use solve::{solve_invariant, solve_modular, SolvedGrid};

use std::fmt;

/// Errors from game validation and grid plumbing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("move {0} has {found} components, expected {expected}", found = .0.dim(), expected = .1)]
    DimensionMismatch(MoveVector, usize),
    #[error("move {0} does not strictly decrease the total match count")]
    NonnegativeSumMove(MoveVector),
    #[error("duplicate move {0}")]
    DuplicateMove(MoveVector),
    #[error("a game needs at least one heap")]
    ZeroDimension,
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("expected {expected} move sets, found {found}")]
    MoveSetCount { expected: usize, found: usize },
    #[error("modular move ({0}, {1}) must have m1 <= 0 and m2 < 0")]
    IllegalModularMove(i64, i64),
    #[error("duplicate modular move ({0}, {1}) in move set {2}")]
    DuplicateModularMove(i64, i64, usize),
    #[error("position has {found} coordinates, expected {expected}")]
    PositionDimension { expected: usize, found: usize },
    #[error("box bounds must all be at least 1")]
    ZeroBound,
    #[error("box holds too many cells to index")]
    BoxTooLarge,
    #[error("box dimension {found} does not match the game's {expected} heaps")]
    BoxDimension { expected: usize, found: usize },
    #[error("grids cover different boxes")]
    BoxMismatch,
}

/// A single move of an invariant game: the vector added to the heap counts.
/// Components may be positive (matches added) as long as the sum is strictly
/// negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveVector(Vec<i64>);

impl MoveVector {
    pub fn new(components: Vec<i64>) -> Self {
        MoveVector(components)
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn component_sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl From<Vec<i64>> for MoveVector {
    fn from(v: Vec<i64>) -> Self {
        MoveVector(v)
    }
}

impl fmt::Display for MoveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An invariant game: `d` heaps and a finite set of move vectors.
///
/// The move set may be empty (every position is then terminal, hence P).
/// Moves are stored sorted lexicographically, so two games constructed from
/// the same set compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantGame {
    d: usize,
    moves: Vec<MoveVector>,
}

impl InvariantGame {
    /// Validates and canonicalizes a move list. Rejects moves of the wrong
    /// dimension, moves whose component sum is not strictly negative, and
    /// exact duplicates (duplicates signal caller bugs and are not silently
    /// merged).
    pub fn new(d: usize, mut moves: Vec<MoveVector>) -> Result<Self, GameError> {
        if d == 0 {
            return Err(GameError::ZeroDimension);
        }
        for m in &moves {
            if m.dim() != d {
                return Err(GameError::DimensionMismatch(m.clone(), d));
            }
            if m.component_sum() >= 0 {
                return Err(GameError::NonnegativeSumMove(m.clone()));
            }
        }
        moves.sort();
        for pair in moves.windows(2) {
            if pair[0] == pair[1] {
                return Err(GameError::DuplicateMove(pair[0].clone()));
            }
        }
        Ok(InvariantGame { d, moves })
    }

    /// Number of heaps.
    pub fn heap_count(&self) -> usize {
        self.d
    }

    /// Moves in lexicographic order.
    pub fn moves(&self) -> &[MoveVector] {
        &self.moves
    }
}

impl fmt::Display for InvariantGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant(d={}, {} moves)", self.d, self.moves.len())
    }
}

/// A modular game: two heaps (tape, time) and `k` move sets, one per residue
/// class of the time-heap count modulo `k`. Every move satisfies `m1 <= 0`
/// and `m2 < 0`, so the time-heap strictly decreases and the tape-heap never
/// grows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularGame {
    k: usize,
    move_sets: Vec<Vec<(i64, i64)>>,
}

impl ModularGame {
    /// Validates and canonicalizes the move sets (each sorted, duplicates
    /// rejected). Individual sets may be empty.
    pub fn new(k: usize, mut move_sets: Vec<Vec<(i64, i64)>>) -> Result<Self, GameError> {
        if k == 0 {
            return Err(GameError::ZeroModulus);
        }
        if move_sets.len() != k {
            return Err(GameError::MoveSetCount {
                expected: k,
                found: move_sets.len(),
            });
        }
        for (residue, set) in move_sets.iter_mut().enumerate() {
            for &(m1, m2) in set.iter() {
                if m1 > 0 || m2 >= 0 {
                    return Err(GameError::IllegalModularMove(m1, m2));
                }
            }
            set.sort();
            for pair in set.windows(2) {
                if pair[0] == pair[1] {
                    return Err(GameError::DuplicateModularMove(pair[0].0, pair[0].1, residue));
                }
            }
        }
        Ok(ModularGame { k, move_sets })
    }

    pub fn modulus(&self) -> usize {
        self.k
    }

    pub fn move_sets(&self) -> &[Vec<(i64, i64)>] {
        &self.move_sets
    }

    pub fn move_set(&self, residue: usize) -> &[(i64, i64)] {
        &self.move_sets[residue]
    }

    /// Largest `|m2|` over all moves; 0 for a game with no moves.
    pub fn max_time_step(&self) -> i64 {
        self.move_sets
            .iter()
            .flatten()
            .map(|&(_, m2)| -m2)
            .max()
            .unwrap_or(0)
    }

    /// Total number of moves across all residues.
    pub fn move_count(&self) -> usize {
        self.move_sets.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for ModularGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "modular(k={}, {} moves)", self.k, self.move_count())
    }
}

/// Either kind of game, for operations that work on both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Game {
    Invariant(InvariantGame),
    Modular(ModularGame),
}

impl Game {
    /// Heap count: `d` for invariant games, 2 for modular games.
    pub fn heap_count(&self) -> usize {
        match self {
            Game::Invariant(g) => g.heap_count(),
            Game::Modular(_) => 2,
        }
    }
}

/// A game position: one nonnegative match count per heap.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<u64>);

impl Position {
    pub fn new(coords: Vec<u64>) -> Self {
        Position(coords)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total number of matches on the table.
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl From<Vec<u64>> for Position {
    fn from(v: Vec<u64>) -> Self {
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Outcome of a position under optimal play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// Previous player wins: no move leads to another P-position.
    P,
    /// Next player wins: some move leads to a P-position.
    N,
}

impl Outcome {
    pub fn is_p(self) -> bool {
        matches!(self, Outcome::P)
    }

    pub fn from_p(p: bool) -> Self {
        if p {
            Outcome::P
        } else {
            Outcome::N
        }
    }
}
