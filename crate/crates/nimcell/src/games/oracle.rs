//! Top-down memoized outcome evaluation, independent of the grid solvers.
//!
//! Every move strictly decreases the total match count, so the recursion
//! terminates and the set of positions it can ever visit is finite. No box is
//! involved: the oracle follows moves with positive components wherever they
//! lead, which is what makes it a useful cross-check for the bounded solver.

use std::collections::HashMap;

use super::{GameError, InvariantGame, Outcome, Position};

/// Memo table for repeated outcome queries against one game.
pub struct OutcomeCache<'g> {
    game: &'g InvariantGame,
    memo: HashMap<Vec<u64>, Outcome>,
}

impl<'g> OutcomeCache<'g> {
    pub fn new(game: &'g InvariantGame) -> Self {
        OutcomeCache {
            game,
            memo: HashMap::new(),
        }
    }

    pub fn outcome(&mut self, pos: &Position) -> Result<Outcome, GameError> {
        if pos.dim() != self.game.heap_count() {
            return Err(GameError::PositionDimension {
                expected: self.game.heap_count(),
                found: pos.dim(),
            });
        }
        Ok(self.eval(pos.coords().to_vec()))
    }

    fn eval(&mut self, coords: Vec<u64>) -> Outcome {
        if let Some(&o) = self.memo.get(&coords) {
            return o;
        }
        let mut outcome = Outcome::P;
        'moves: for m in self.game.moves() {
            let mut target = Vec::with_capacity(coords.len());
            for (&c, &d) in coords.iter().zip(m.components()) {
                let t = c as i64 + d;
                if t < 0 {
                    continue 'moves;
                }
                target.push(t as u64);
            }
            if self.eval(target).is_p() {
                outcome = Outcome::N;
                break;
            }
        }
        self.memo.insert(coords, outcome);
        outcome
    }
}

/// One-shot outcome of a single position.
pub fn outcome_invariant(game: &InvariantGame, pos: &Position) -> Result<Outcome, GameError> {
    OutcomeCache::new(game).outcome(pos)
}
