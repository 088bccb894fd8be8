//! The full circuit pipeline emulates its automaton: exhaustively for small
//! arities, on a random sample for arity 4, and invariantly under
//! re-modularization.

use nimcell::cellular::CARule;
use nimcell::circuits::{bracket_from_rule, gates_from_expr, xor_expr};
use nimcell::games::{solve_modular, Bounds};
use nimcell::reductions::{modular_from_gates, remodularize};
use nimcell::verify::check_emulation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All tables of the given arity with f(0,...,0) = 0.
fn all_rules(n: usize) -> impl Iterator<Item = CARule> {
    let entries = 1usize << n;
    (0..(1usize << (entries - 1))).map(move |code| {
        let table: Vec<bool> = (0..entries).map(|i| i > 0 && code >> (i - 1) & 1 != 0).collect();
        CARule::new(n, table).unwrap()
    })
}

#[test]
fn every_small_rule_is_emulated_exactly() {
    for n in 1..=3 {
        for rule in all_rules(n) {
            let report = check_emulation(&rule, 8, 40).unwrap();
            assert!(
                report.all_match(),
                "arity {n} table {:?} mismatch at {:?}",
                report.table,
                report.first_mismatch
            );
        }
    }
}

#[test]
fn sampled_arity_four_rules_are_emulated_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..20 {
        let mut table = vec![false; 16];
        for cell in table.iter_mut().skip(1) {
            *cell = rng.random_bool(0.5);
        }
        let rule = CARule::new(4, table).unwrap();
        let report = check_emulation(&rule, 8, 40).unwrap();
        assert!(
            report.all_match(),
            "table {:?} mismatch at {:?}",
            report.table,
            report.first_mismatch
        );
    }
}

#[test]
fn remodularization_leaves_grids_bit_identical() {
    let games = [
        modular_from_gates(&gates_from_expr(&xor_expr()).unwrap()),
        modular_from_gates(
            &gates_from_expr(&bracket_from_rule(&CARule::from_bits(2, &[0, 1, 0, 1]).unwrap()))
                .unwrap(),
        ),
    ];
    for game in &games {
        let bounds = Bounds::new(vec![40, 60]).unwrap();
        let base = solve_modular(game, &bounds).unwrap();
        for l in 1..=3 {
            let expanded = remodularize(game, l);
            assert_eq!(expanded.modulus(), l * game.modulus());
            let grid = solve_modular(&expanded, &bounds).unwrap();
            assert_eq!(base, grid, "{game} changed under l={l}");
        }
    }
}
