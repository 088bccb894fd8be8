//! The bounded solver against the top-down memoized oracle.
//!
//! The two take different routes to the same fixed point: the solver sweeps
//! a box level by level, the oracle recurses through the unbounded position
//! space. They must agree on every cell whose reachable cone stays inside
//! the box.

use nimcell::games::{
    outcome_invariant, solve_invariant, Bounds, InvariantGame, MoveVector, OutcomeCache, Position,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_game(rng: &mut ChaCha8Rng) -> InvariantGame {
    let d = rng.random_range(1..=3);
    let move_count = rng.random_range(0..=6);
    let mut moves = std::collections::BTreeSet::new();
    while moves.len() < move_count {
        let v: Vec<i64> = (0..d).map(|_| rng.random_range(-5..=5)).collect();
        if v.iter().sum::<i64>() < 0 {
            moves.insert(MoveVector::new(v));
        }
    }
    InvariantGame::new(d, moves.into_iter().collect()).unwrap()
}

#[test]
fn solver_agrees_with_oracle_on_reliable_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for round in 0..12 {
        let game = random_game(&mut rng);
        let dims: Vec<u64> = (0..game.heap_count())
            .map(|_| rng.random_range(3..=20))
            .collect();
        let bounds = Bounds::new(dims).unwrap();
        let solved = solve_invariant(&game, &bounds).unwrap();
        let mut oracle = OutcomeCache::new(&game);
        let mut checked = 0usize;
        for pos in bounds.positions() {
            if !solved.reliable.get(&pos) {
                continue;
            }
            checked += 1;
            assert_eq!(
                solved.grid.get(&pos),
                oracle.outcome(&pos).unwrap().is_p(),
                "round {round}: {game} disagrees with the oracle at {pos}"
            );
        }
        assert!(checked > 0, "round {round} had no reliable cells");
    }
}

#[test]
fn terminal_positions_are_p_in_every_solver_output() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..8 {
        let game = random_game(&mut rng);
        let dims: Vec<u64> = (0..game.heap_count())
            .map(|_| rng.random_range(3..=12))
            .collect();
        let bounds = Bounds::new(dims).unwrap();
        let solved = solve_invariant(&game, &bounds).unwrap();
        for pos in bounds.positions() {
            let terminal = game.moves().iter().all(|m| {
                pos.coords()
                    .iter()
                    .zip(m.components())
                    .any(|(&c, &d)| c as i64 + d < 0)
            });
            if terminal {
                assert!(solved.grid.get(&pos), "terminal {pos} not P in {game}");
            }
        }
    }
}

/// The eight-move game whose P-positions mix periodic sectors with rough
/// borders: cross-check a sample of a large grid against the oracle.
#[test]
fn large_irregular_game_matches_oracle_on_sampled_cells() {
    let game = InvariantGame::new(
        2,
        [
            [0, -2],
            [-2, 0],
            [2, -3],
            [-3, 2],
            [-5, 4],
            [-5, -2],
            [-4, -3],
            [-1, -4],
        ]
        .iter()
        .map(|m| MoveVector::new(m.to_vec()))
        .collect(),
    )
    .unwrap();
    let bounds = Bounds::new(vec![100, 100]).unwrap();
    let solved = solve_invariant(&game, &bounds).unwrap();

    let mut oracle = OutcomeCache::new(&game);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    while checked < 200 {
        let pos = Position::new(vec![rng.random_range(0..100), rng.random_range(0..100)]);
        if !solved.reliable.get(&pos) {
            continue;
        }
        assert_eq!(
            solved.grid.get(&pos),
            oracle.outcome(&pos).unwrap().is_p(),
            "disagreement at {pos}"
        );
        checked += 1;
    }
}

#[test]
fn one_shot_oracle_matches_known_cells() {
    let game = InvariantGame::new(
        2,
        vec![MoveVector::new(vec![-1, -3]), MoveVector::new(vec![-2, 1])],
    )
    .unwrap();
    assert!(outcome_invariant(&game, &Position::new(vec![0, 0]))
        .unwrap()
        .is_p());
    assert!(!outcome_invariant(&game, &Position::new(vec![1, 3]))
        .unwrap()
        .is_p());
    assert!(outcome_invariant(&game, &Position::new(vec![5, 0]))
        .unwrap()
        .is_p());
}
