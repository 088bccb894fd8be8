//! The reduction chain: gate lists compile to modular games laid out one
//! gate per time-row; a pattern check splices three extra rows into any such
//! game, yielding a pair of games that differ exactly where the input ends
//! in `101`; and any modular game compiles to an invariant game through a
//! gadget of `k` extra heaps that track the time-heap's residue class with a
//! single traveling match.

use serde::Serialize;

use crate::circuits::{GateInput, GateList};
use crate::games::{GameError, InvariantGame, ModularGame, MoveVector, Position};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("a layout needs at least the output level")]
    EmptyLayout,
    #[error("level {level} child at level {child} would not move strictly downward")]
    LayoutViolation { level: usize, child: usize },
    #[error("gadget with {k_star} heaps is too small for trash destination pairs (need 4)")]
    GadgetTooSmall { k_star: usize },
    #[error("move ({m1}, {m2}) does not change the time residue modulo {k_star}")]
    MoveNotPhaseChanging { m1: i64, m2: i64, k_star: usize },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// One option of a level in a layout: another level of the same block, or a
/// tape cell of the block's input row, addressed by shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelChild {
    Level(usize),
    Cell(usize),
}

/// A row layout for a modular game of modulus `k`: levels `1..k` each hold
/// one gate, level 0 holds the output (its rows sit a full block of `k`
/// above the input row they read). Each level's children must lie strictly
/// below it, so every derived move has `m1 <= 0` and `m2 < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutPlan {
    levels: Vec<Vec<LevelChild>>,
}

impl LayoutPlan {
    /// `levels[0]` is the output level; `levels[l]` for `l >= 1` are the
    /// intermediate gates.
    pub fn new(levels: Vec<Vec<LevelChild>>) -> Result<Self, ReductionError> {
        let k = levels.len();
        if k == 0 {
            return Err(ReductionError::EmptyLayout);
        }
        for (level, children) in levels.iter().enumerate() {
            // The output level sits k rows above the block's input.
            let effective = if level == 0 { k } else { level };
            for child in children {
                if let LevelChild::Level(c) = child {
                    if *c >= effective || *c == 0 {
                        return Err(ReductionError::LayoutViolation {
                            level,
                            child: *c,
                        });
                    }
                }
            }
        }
        Ok(LayoutPlan { levels })
    }

    /// Modulus of the game this layout describes.
    pub fn modulus(&self) -> usize {
        self.levels.len()
    }

    /// Assigns gate `j` (of `K`) to level `j + 1`, and the output gate to
    /// level 0.
    pub fn from_gates(gates: &GateList) -> Self {
        let k = gates.len();
        let as_child = |input: &GateInput| match input {
            GateInput::Gate(g) => LevelChild::Level(g + 1),
            GateInput::Var(j) => LevelChild::Cell(*j),
        };
        let mut levels = vec![gates.gate(k - 1).iter().map(as_child).collect::<Vec<_>>()];
        for j in 0..k - 1 {
            levels.push(gates.gate(j).iter().map(as_child).collect());
        }
        LayoutPlan::new(levels).expect("gate lists are topologically ordered")
    }

    /// Derives the move sets. A gate at level `l` reading level `l'`
    /// contributes `(0, -(l - l'))`; reading the input cell at shift `j`
    /// contributes `(-j, -l)`; the output level behaves as level `k` but
    /// lands its moves in the residue-0 set.
    pub fn game(&self) -> ModularGame {
        let k = self.modulus();
        let mut sets: Vec<std::collections::BTreeSet<(i64, i64)>> = vec![Default::default(); k];
        for (level, children) in self.levels.iter().enumerate() {
            let effective = if level == 0 { k } else { level };
            for child in children {
                let mv = match child {
                    LevelChild::Level(c) => (0, -((effective - c) as i64)),
                    LevelChild::Cell(j) => (-(*j as i64), -(effective as i64)),
                };
                sets[level].insert(mv);
            }
        }
        ModularGame::new(k, sets.into_iter().map(|s| s.into_iter().collect()).collect())
            .expect("layout moves satisfy m1 <= 0 and m2 < 0")
    }
}

/// Compiles a gate list into the modular game that evaluates it: modulus
/// `K`, one gate per residue, output at residue 0. Rows of the solved game
/// at multiples of `K` then reproduce the automaton of the circuit's rule.
pub fn modular_from_gates(gates: &GateList) -> ModularGame {
    LayoutPlan::from_gates(gates).game()
}

/// Splices a `101` check into a circuit, returning the pair `(G', G'')`.
///
/// Both games have modulus `K + 3`. Levels 1 and 2 hold the inverter boxes
/// `b1 = [cell 0]` and `b2 = [cell 2]`; level 3 holds the check box `b3`;
/// the original gates move up three levels with their move depths
/// recomputed. In `G'`, `b3` reads the penultimate cell, `b1` and `b2`, so it
/// is P exactly when the input row ends in `101` at its column. In `G''`,
/// `b3` reads `b2` and cell 2 instead and is N everywhere. The two games
/// differ in move set 3 only.
pub fn augment_101(gates: &GateList) -> (ModularGame, ModularGame) {
    let k = gates.len();
    let as_child = |input: &GateInput| match input {
        GateInput::Gate(g) => LevelChild::Level(g + 4),
        GateInput::Var(j) => LevelChild::Cell(*j),
    };

    let mut levels = Vec::with_capacity(k + 3);
    levels.push(gates.gate(k - 1).iter().map(as_child).collect::<Vec<_>>());
    levels.push(vec![LevelChild::Cell(0)]); // b1 inverts the last cell
    levels.push(vec![LevelChild::Cell(2)]); // b2 inverts the third-from-last cell
    levels.push(Vec::new()); // b3, filled in per game below
    for j in 0..k - 1 {
        levels.push(gates.gate(j).iter().map(as_child).collect());
    }

    let mut prime_levels = levels.clone();
    prime_levels[3] = vec![
        LevelChild::Cell(1),
        LevelChild::Level(1),
        LevelChild::Level(2),
    ];
    let mut dummy_levels = levels;
    dummy_levels[3] = vec![LevelChild::Level(2), LevelChild::Cell(2)];

    let prime = LayoutPlan::new(prime_levels).expect("check layout is strictly downward");
    let dummy = LayoutPlan::new(dummy_levels).expect("dummy layout is strictly downward");
    (prime.game(), dummy.game())
}

/// Re-describes a `k`-modular game as an `l*k`-modular game. The move set of
/// residue `r` in the new game is the move set of `r mod k` in the old one;
/// solved grids are bit-identical over any box.
pub fn remodularize(game: &ModularGame, l: usize) -> ModularGame {
    assert!(l >= 1, "multiplier must be positive");
    let k = game.modulus();
    let sets = (0..l * k).map(|r| game.move_set(r % k).to_vec()).collect();
    ModularGame::new(l * k, sets).expect("copied move sets stay valid")
}

/// Parameters of the heap gadget built by [`invariant_from_modular`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GadgetSpec {
    /// Gadget heap count: the modulus after re-modularization.
    pub k: usize,
    /// Multiplier applied to the original modulus.
    pub l: usize,
    /// Trash moves remove up to `N - 1` matches from each main heap.
    #[serde(rename = "N")]
    pub trash_bound: i64,
}

impl GadgetSpec {
    /// Heap count of the invariant game: tape, time, and the gadget.
    pub fn heap_count(&self) -> usize {
        2 + self.k
    }

    /// Smallest multiplier making every move change the time residue
    /// (`l * k` must exceed every `|m2|`) while leaving room for trash
    /// destination pairs (`l * k >= 4`).
    pub fn choose(game: &ModularGame) -> GadgetSpec {
        let k = game.modulus();
        let max_step = game.max_time_step();
        let mut l = 1;
        while (l * k) as i64 <= max_step || l * k < 4 {
            l += 1;
        }
        GadgetSpec {
            k: l * k,
            l,
            trash_bound: 1 + game
                .move_sets()
                .iter()
                .flatten()
                .map(|&(m1, m2)| m1.abs().max(m2.abs()))
                .max()
                .unwrap_or(0),
        }
    }
}

/// Compiles a modular game into an invariant game on `2 + k*` heaps
/// (tape, time, gadget heaps `0..k*`), choosing the re-modularization
/// multiplier automatically.
///
/// Each modular move from residue `r` becomes a vector that applies the move
/// to the main heaps, empties gadget heap `r`, and refills the heap of the
/// new time residue. Trash moves transfer two gadget matches (from two
/// distinct heaps, or both from one) to two other heaps while removing
/// `p + q >= 1` matches from the main heaps, `p, q < N`; they make every
/// position with two or more gadget matches trivial.
pub fn invariant_from_modular(game: &ModularGame) -> (InvariantGame, GadgetSpec) {
    let spec = GadgetSpec::choose(game);
    build_gadget_game(game, spec).expect("the chosen multiplier satisfies the gadget conditions")
}

/// Like [`invariant_from_modular`] with an explicit multiplier; fails if the
/// resulting gadget is too small for trash destinations or some move does
/// not change the time residue.
pub fn invariant_from_modular_with(
    game: &ModularGame,
    l: usize,
) -> Result<(InvariantGame, GadgetSpec), ReductionError> {
    assert!(l >= 1, "multiplier must be positive");
    let spec = GadgetSpec {
        k: l * game.modulus(),
        l,
        trash_bound: GadgetSpec::choose(game).trash_bound,
    };
    build_gadget_game(game, spec)
}

fn build_gadget_game(
    game: &ModularGame,
    spec: GadgetSpec,
) -> Result<(InvariantGame, GadgetSpec), ReductionError> {
    let k_star = spec.k;
    if k_star < 4 {
        return Err(ReductionError::GadgetTooSmall { k_star });
    }
    let expanded = remodularize(game, spec.l);
    let d = spec.heap_count();
    let mut moves = Vec::new();

    // Game moves: follow the modular move and walk the gadget match from the
    // current residue heap to the new one.
    for (residue, set) in expanded.move_sets().iter().enumerate() {
        for &(m1, m2) in set {
            if m2.rem_euclid(k_star as i64) == 0 {
                return Err(ReductionError::MoveNotPhaseChanging { m1, m2, k_star });
            }
            let target = (residue as i64 + m2).rem_euclid(k_star as i64) as usize;
            let mut v = vec![0i64; d];
            v[0] = m1;
            v[1] = m2;
            v[2 + residue] -= 1;
            v[2 + target] += 1;
            moves.push(MoveVector::new(v));
        }
    }

    // Trash moves. Sources: two distinct heaps, or two matches from one heap;
    // destinations: two distinct heaps disjoint from the sources.
    let n = spec.trash_bound;
    let push_trash = |sources: &[usize], dests: (usize, usize), p: i64, q: i64, moves: &mut Vec<MoveVector>| {
        let mut v = vec![0i64; d];
        v[0] = -p;
        v[1] = -q;
        for &s in sources {
            v[2 + s] -= 1;
        }
        v[2 + dests.0] += 1;
        v[2 + dests.1] += 1;
        moves.push(MoveVector::new(v));
    };
    let source_sets: Vec<Vec<usize>> = {
        let mut sets = Vec::new();
        for i in 0..k_star {
            for j in i + 1..k_star {
                sets.push(vec![i, j]);
            }
            sets.push(vec![i, i]);
        }
        sets
    };
    for sources in &source_sets {
        for d0 in 0..k_star {
            if sources.contains(&d0) {
                continue;
            }
            for d1 in d0 + 1..k_star {
                if sources.contains(&d1) {
                    continue;
                }
                for p in 0..n {
                    for q in 0..n {
                        if p + q >= 1 {
                            push_trash(sources, (d0, d1), p, q, &mut moves);
                        }
                    }
                }
            }
        }
    }

    let invariant = InvariantGame::new(d, moves)?;
    Ok((invariant, spec))
}

/// Lifts a modular position into the invariant game: the gadget holds a
/// single match at the heap indexed by the time count modulo `k*`.
pub fn embed(pos: (u64, u64), k_star: usize) -> Position {
    let (tape, time) = pos;
    let mut coords = vec![0u64; 2 + k_star];
    coords[0] = tape;
    coords[1] = time;
    coords[2 + (time % k_star as u64) as usize] = 1;
    Position::new(coords)
}

/// Inverse of [`embed`] on in-phase single-match positions: `Some((a1, a2))`
/// iff the gadget holds exactly one match, sitting at heap `a2 mod k*`.
pub fn project(pos: &Position, k_star: usize) -> Result<Option<(u64, u64)>, GameError> {
    if pos.dim() != 2 + k_star {
        return Err(GameError::PositionDimension {
            expected: 2 + k_star,
            found: pos.dim(),
        });
    }
    let c = pos.coords();
    let (tape, time) = (c[0], c[1]);
    let gadget = &c[2..];
    let matches: u64 = gadget.iter().sum();
    let expected = (time % k_star as u64) as usize;
    if matches == 1 && gadget[expected] == 1 {
        Ok(Some((tape, time)))
    } else {
        Ok(None)
    }
}

/// True when an invariant-game move vector is one of the gadget's trash
/// moves (it adds a match to two gadget heaps) rather than a lifted modular
/// move (which adds to exactly one).
pub fn is_trash_move(mv: &MoveVector) -> bool {
    mv.components()[2..].iter().filter(|&&c| c > 0).count() == 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{gates_from_expr, xor_expr, BracketExpr};
    use crate::games::{solve_invariant, solve_modular, Bounds};

    fn xor_gates() -> GateList {
        gates_from_expr(&xor_expr()).unwrap()
    }

    fn set(moves: &[(i64, i64)]) -> Vec<(i64, i64)> {
        moves.to_vec()
    }

    #[test]
    fn xor_compiles_to_the_worked_move_sets() {
        let game = modular_from_gates(&xor_gates());
        let expected = ModularGame::new(
            5,
            vec![
                set(&[(0, -1), (0, -2)]),
                set(&[(-1, -1)]),
                set(&[(0, -2)]),
                set(&[(0, -3), (-1, -3)]),
                set(&[(0, -2), (0, -3)]),
            ],
        )
        .unwrap();
        assert_eq!(game, expected);
    }

    #[test]
    fn identity_circuit_compiles_to_two_levels() {
        let gates =
            gates_from_expr(&BracketExpr::Bracket(vec![BracketExpr::Bracket(vec![
                BracketExpr::Var(0),
            ])]))
            .unwrap();
        let game = modular_from_gates(&gates);
        assert_eq!(game.modulus(), 2);
        assert_eq!(game.move_set(1), &[(0, -1)]);
        assert_eq!(game.move_set(0), &[(0, -1)]);
    }

    #[test]
    fn upward_layouts_are_rejected() {
        // A level may only read levels strictly below it.
        assert_eq!(
            LayoutPlan::new(vec![vec![], vec![LevelChild::Level(2)], vec![]]),
            Err(ReductionError::LayoutViolation { level: 1, child: 2 })
        );
        // The output cannot be anyone's child.
        assert_eq!(
            LayoutPlan::new(vec![vec![], vec![LevelChild::Level(0)]]),
            Err(ReductionError::LayoutViolation { level: 1, child: 0 })
        );
    }

    #[test]
    fn single_gate_circuit_compiles_to_a_one_level_game() {
        let gates = gates_from_expr(&BracketExpr::Bracket(vec![BracketExpr::Var(0)])).unwrap();
        let game = modular_from_gates(&gates);
        assert_eq!(game.modulus(), 1);
        assert_eq!(game.move_set(0), &[(0, -1)]);
    }

    #[test]
    fn constant_zero_circuit_has_an_empty_gate_level() {
        let gates = gates_from_expr(&BracketExpr::Bracket(vec![BracketExpr::Bracket(vec![])]))
            .unwrap();
        let game = modular_from_gates(&gates);
        assert_eq!(game.modulus(), 2);
        assert!(game.move_set(1).is_empty());
        assert_eq!(game.move_set(0), &[(0, -1)]);
    }

    #[test]
    fn duplicate_children_collapse_into_a_set() {
        // [x0 x0] contributes the move (0, -l) only once.
        let gates = gates_from_expr(&BracketExpr::Bracket(vec![BracketExpr::Bracket(vec![
            BracketExpr::Var(0),
            BracketExpr::Var(0),
        ])]))
        .unwrap();
        let game = modular_from_gates(&gates);
        assert_eq!(game.move_set(1), &[(0, -1)]);
    }

    #[test]
    fn check_pair_modulus_and_delta() {
        let (prime, dummy) = augment_101(&xor_gates());
        assert_eq!(prime.modulus(), 8);
        assert_eq!(dummy.modulus(), 8);
        assert_eq!(prime.move_set(3), &[(-1, -3), (0, -2), (0, -1)]);
        assert_eq!(dummy.move_set(3), &[(-2, -3), (0, -1)]);
        for r in (0..8).filter(|&r| r != 3) {
            assert_eq!(prime.move_set(r), dummy.move_set(r), "residue {r}");
        }
    }

    #[test]
    fn check_box_semantics() {
        // b3's options in G' mean its value is [y [z] [x]]: P exactly on 101.
        let b3_prime = |x: bool, y: bool, z: bool| !(y || !z || !x);
        // In G'' the value is [[x] x]: never P.
        let b3_dummy = |x: bool, _y: bool, _z: bool| !(!x || x);
        for bits in 0..8u8 {
            let (x, y, z) = (bits & 4 != 0, bits & 2 != 0, bits & 1 != 0);
            assert_eq!(b3_prime(x, y, z), (x, y, z) == (true, false, true));
            assert!(!b3_dummy(x, y, z));
        }
    }

    #[test]
    fn remodularize_copies_sets_cyclically() {
        let game = modular_from_gates(&xor_gates());
        let doubled = remodularize(&game, 2);
        assert_eq!(doubled.modulus(), 10);
        assert_eq!(doubled.move_set(7), game.move_set(2));
        assert_eq!(remodularize(&game, 1), game);
    }

    #[test]
    fn remodularize_preserves_the_grid() {
        let game = modular_from_gates(&xor_gates());
        let bounds = Bounds::new(vec![50, 50]).unwrap();
        let base = solve_modular(&game, &bounds).unwrap();
        let doubled = solve_modular(&remodularize(&game, 2), &bounds).unwrap();
        assert_eq!(base, doubled);
    }

    #[test]
    fn xor_gadget_parameters() {
        let (invariant, spec) = invariant_from_modular(&modular_from_gates(&xor_gates()));
        // max |m2| = 3 < 5, so no re-modularization is needed.
        assert_eq!(spec, GadgetSpec { k: 5, l: 1, trash_bound: 4 });
        assert_eq!(spec.heap_count(), 7);
        assert_eq!(invariant.heap_count(), 7);
    }

    #[test]
    fn lifted_move_wraps_the_residue() {
        let (invariant, _) = invariant_from_modular(&modular_from_gates(&xor_gates()));
        // The residue-1 move (-1,-1) sends the match from heap 1 to heap 0.
        let lifted = MoveVector::new(vec![-1, -1, 1, -1, 0, 0, 0]);
        assert!(invariant.moves().contains(&lifted), "missing {lifted}");
        assert!(!is_trash_move(&lifted));
    }

    #[test]
    fn trash_move_shape() {
        let (invariant, _) = invariant_from_modular(&modular_from_gates(&xor_gates()));
        // Sources {0,1}, destinations {2,3}, (p,q) = (1,0).
        let trash = MoveVector::new(vec![-1, 0, -1, -1, 1, 1, 0]);
        assert!(invariant.moves().contains(&trash), "missing {trash}");
        assert!(is_trash_move(&trash));
        assert!(trash.component_sum() < 0);
    }

    #[test]
    fn double_match_in_one_heap_has_trash_moves() {
        let (invariant, _) = invariant_from_modular(&modular_from_gates(&xor_gates()));
        let trash = MoveVector::new(vec![-1, 0, -2, 0, 1, 1, 0]);
        assert!(invariant.moves().contains(&trash), "missing {trash}");
        assert!(is_trash_move(&trash));
    }

    #[test]
    fn every_gadget_move_changes_the_time_residue() {
        let (invariant, spec) = invariant_from_modular(&modular_from_gates(&xor_gates()));
        for mv in invariant.moves() {
            if !is_trash_move(mv) {
                let m2 = mv.components()[1];
                assert_ne!(m2.rem_euclid(spec.k as i64), 0, "move {mv}");
            }
        }
    }

    #[test]
    fn small_modulus_forces_remodularization() {
        // k = 1 with |m2| = 1 needs l*k > 1 and l*k >= 4.
        let game = ModularGame::new(1, vec![vec![(0, -1)]]).unwrap();
        let (_, spec) = invariant_from_modular(&game);
        assert_eq!(spec.k, 4);
        assert_eq!(spec.l, 4);
    }

    #[test]
    fn explicit_multiplier_can_fail() {
        let game = ModularGame::new(1, vec![vec![(0, -1)]]).unwrap();
        assert_eq!(
            invariant_from_modular_with(&game, 2).unwrap_err(),
            ReductionError::GadgetTooSmall { k_star: 2 }
        );
        let tall = ModularGame::new(1, vec![vec![(0, -4)]]).unwrap();
        assert_eq!(
            invariant_from_modular_with(&tall, 4).unwrap_err(),
            ReductionError::MoveNotPhaseChanging {
                m1: 0,
                m2: -4,
                k_star: 4
            }
        );
    }

    #[test]
    fn embed_examples() {
        assert_eq!(
            embed((3, 7), 5),
            Position::new(vec![3, 7, 0, 0, 1, 0, 0])
        );
        assert_eq!(
            embed((0, 0), 5),
            Position::new(vec![0, 0, 1, 0, 0, 0, 0])
        );
        assert_eq!(embed((10, 9), 3), Position::new(vec![10, 9, 1, 0, 0]));
    }

    #[test]
    fn project_inverts_embed_and_rejects_bad_states() {
        assert_eq!(
            project(&Position::new(vec![3, 7, 0, 0, 1, 0, 0]), 5).unwrap(),
            Some((3, 7))
        );
        // Out of phase.
        assert_eq!(
            project(&Position::new(vec![3, 7, 1, 0, 0, 0, 0]), 5).unwrap(),
            None
        );
        // Two matches.
        assert_eq!(
            project(&Position::new(vec![3, 7, 0, 0, 1, 1, 0]), 5).unwrap(),
            None
        );
        assert!(project(&Position::new(vec![3, 7]), 5).is_err());
    }

    #[test]
    fn embedded_positions_are_closed_under_non_trash_moves() {
        let modular = modular_from_gates(&xor_gates());
        let (invariant, spec) = invariant_from_modular(&modular);
        let k_star = spec.k;
        for tape in 0..15u64 {
            for time in 0..15u64 {
                let from = embed((tape, time), k_star);
                for mv in invariant.moves() {
                    let target: Option<Vec<u64>> = from
                        .coords()
                        .iter()
                        .zip(mv.components())
                        .map(|(&c, &m)| u64::try_from(c as i64 + m).ok())
                        .collect();
                    let Some(target) = target else { continue };
                    // No trash move is legal from a single-match position.
                    assert!(!is_trash_move(mv), "trash move {mv} legal from {from}");
                    let target = Position::new(target);
                    let projected = project(&target, k_star).unwrap();
                    assert!(projected.is_some(), "{from} -{mv}-> {target} left the embedding");
                }
            }
        }
    }

    #[test]
    fn embedded_cells_match_the_modular_grid() {
        let modular = modular_from_gates(&xor_gates());
        let (invariant, spec) = invariant_from_modular(&modular);
        let bounds2 = Bounds::new(vec![12, 12]).unwrap();
        let modular_grid = solve_modular(&modular, &bounds2).unwrap();
        let mut dims = vec![12u64, 12];
        dims.extend(std::iter::repeat_n(3, spec.k));
        let solved = solve_invariant(&invariant, &Bounds::new(dims).unwrap()).unwrap();
        for tape in 0..12u64 {
            for time in 0..12u64 {
                let lifted = embed((tape, time), spec.k);
                assert!(solved.reliable.get(&lifted), "unreliable at {lifted}");
                assert_eq!(
                    solved.grid.get(&lifted),
                    modular_grid.get(&Position::new(vec![tape, time])),
                    "mismatch at ({tape},{time})"
                );
            }
        }
    }
}
