//! Randomized invariants, proptest-style.

use nimcell::cellular::{ca_rows, CARule};
use nimcell::circuits::{eval_bracket, gates_from_expr, BracketExpr};
use nimcell::games::{solve_invariant, Bounds, InvariantGame, MoveVector, Position};
use proptest::collection::vec;
use proptest::prelude::*;

fn arb_rule() -> impl Strategy<Value = CARule> {
    (1usize..=4).prop_flat_map(|n| {
        vec(any::<bool>(), (1 << n) - 1).prop_map(move |tail| {
            let mut table = vec![false];
            table.extend(tail);
            CARule::new(n, table).unwrap()
        })
    })
}

fn arb_expr() -> impl Strategy<Value = BracketExpr> {
    let leaf = (0usize..4).prop_map(BracketExpr::Var);
    leaf.prop_recursive(5, 64, 4, |inner| {
        vec(inner, 0..4).prop_map(BracketExpr::Bracket)
    })
}

/// Moves with components in [-5, 5] and strictly negative sum.
fn arb_game(d: usize) -> impl Strategy<Value = InvariantGame> {
    vec(vec(-5i64..=5, d), 0..6).prop_map(move |candidates| {
        let mut moves: Vec<MoveVector> = candidates
            .into_iter()
            .filter(|m| m.iter().sum::<i64>() < 0)
            .map(MoveVector::new)
            .collect();
        moves.sort();
        moves.dedup();
        InvariantGame::new(d, moves).unwrap()
    })
}

proptest! {
    /// Widening the window never changes the cells already computed: the
    /// update rule only looks leftward.
    #[test]
    fn automaton_window_is_leftward_closed(
        rule in arb_rule(),
        t_rows in 1usize..=16,
        width in 1usize..=24,
        extra in 1usize..=16,
    ) {
        let wide = ca_rows(&rule, t_rows, width + extra);
        let narrow = ca_rows(&rule, t_rows, width);
        prop_assert_eq!(wide.truncated(width), narrow);
    }

    /// Once a window row is all zeros, every later row is too: the left
    /// context is zero and f(0,...,0) = 0.
    #[test]
    fn all_zero_rows_stay_zero(rule in arb_rule()) {
        let rows = ca_rows(&rule, 20, 12);
        let mut dead = false;
        for t in 0..20 {
            let empty = rows.row(t).count_ones() == 0;
            if dead {
                prop_assert!(empty, "row {} revived", t);
            }
            dead |= empty;
        }
    }

    /// Flattening to gates preserves the evaluated function.
    #[test]
    fn gate_lists_evaluate_like_their_trees(expr in arb_expr()) {
        if let Ok(gates) = gates_from_expr(&expr) {
            for index in 0..16usize {
                let assignment: Vec<bool> = (0..4).map(|j| index >> j & 1 != 0).collect();
                prop_assert_eq!(
                    gates.eval(&assignment).unwrap(),
                    eval_bracket(&expr, &assignment).unwrap()
                );
            }
        }
    }

    /// Full re-scan of the solver's defining fixed point over random games:
    /// a cell whose move targets all stay inside the box is P exactly when
    /// none of its targets is P.
    #[test]
    fn solver_grids_are_fixed_points(
        (game, dims) in (1usize..=3).prop_flat_map(|d| {
            (arb_game(d), vec(2u64..=10, d))
        }),
    ) {
        let bounds = Bounds::new(dims).unwrap();
        let solved = solve_invariant(&game, &bounds).unwrap();
        for pos in bounds.positions() {
            let mut all_in_box = true;
            let mut any_p_target = false;
            for m in game.moves() {
                let target: Vec<i64> = pos
                    .coords()
                    .iter()
                    .zip(m.components())
                    .map(|(&c, &d)| c as i64 + d)
                    .collect();
                if target.iter().any(|&x| x < 0) {
                    continue;
                }
                if target.iter().zip(bounds.dims()).any(|(&x, &b)| x as u64 >= b) {
                    all_in_box = false;
                    continue;
                }
                let target = Position::new(target.into_iter().map(|x| x as u64).collect());
                any_p_target |= solved.grid.get(&target);
            }
            if all_in_box {
                prop_assert_eq!(solved.grid.get(&pos), !any_p_target, "at {}", pos);
            }
        }
    }
}
