//! Cross-checks for every stage of the reduction chain, at bounded scale.
//!
//! None of these checks prove anything beyond the box they run in; a clean
//! report means "no counterexample below these bounds", never equivalence.

use rand::Rng;
use serde::Serialize;

use crate::bits::BitVec;
use crate::cellular::{ca_rows, CARows, CARule};
use crate::circuits::{bracket_from_rule, gates_from_expr, CircuitError};
use crate::games::{
    first_difference, first_difference_masked, solve_invariant, solve_modular, Bounds, Game,
    GameError, ModularGame, PGrid, Position,
};
use crate::reductions::{embed, invariant_from_modular, GadgetSpec, modular_from_gates};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("grid box ({tape} x {time}) too small for {want_tape} tape cells and {want_time} time rows")]
    BoxTooSmall {
        tape: u64,
        time: u64,
        want_tape: u64,
        want_time: u64,
    },
    #[error("games have different shapes and cannot be compared")]
    ShapeMismatch,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Reads automaton rows back out of a solved modular grid: row `t` of the
/// automaton is the grid row at time `k * t`, truncated to `width` columns.
pub fn extract_ca_from_modular(
    grid: &PGrid,
    k: usize,
    t_rows: usize,
    width: usize,
) -> Result<CARows, VerifyError> {
    let dims = grid.bounds().dims();
    let (tape, time) = (dims[0], dims[1]);
    if tape < width as u64 || time < (k * t_rows) as u64 {
        return Err(VerifyError::BoxTooSmall {
            tape,
            time,
            want_tape: width as u64,
            want_time: (k * t_rows) as u64,
        });
    }
    let rows = (0..t_rows)
        .map(|t| {
            let mut row = BitVec::zeros(width);
            for i in 0..width {
                let pos = Position::new(vec![i as u64, (k * t) as u64]);
                row.set(i, grid.get(&pos));
            }
            row
        })
        .collect();
    Ok(CARows::from_rows(width, rows))
}

/// Outcome of running a rule through the circuit and game pipeline and
/// comparing the re-extracted rows against the automaton itself.
#[derive(Debug, Clone, Serialize)]
pub struct EmulationReport {
    pub arity: usize,
    pub table: Vec<u8>,
    /// Modulus of the compiled game.
    pub k: usize,
    pub horizon: usize,
    pub window: usize,
    /// One flag per automaton row.
    pub row_matches: Vec<bool>,
    /// First `(t, i)` where the game grid and the automaton disagree.
    pub first_mismatch: Option<(usize, usize)>,
}

impl EmulationReport {
    pub fn all_match(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compiles `rule` to a modular game (via synthesis and flattening), solves
/// it over `window x (k * horizon + 1)`, and compares every extracted row
/// against [`ca_rows`].
pub fn check_emulation(
    rule: &CARule,
    horizon: usize,
    window: usize,
) -> Result<EmulationReport, VerifyError> {
    let gates = gates_from_expr(&bracket_from_rule(rule))?;
    let game = modular_from_gates(&gates);
    let k = game.modulus();
    let bounds = Bounds::new(vec![window as u64, (k * horizon + 1) as u64])?;
    let grid = solve_modular(&game, &bounds)?;
    let extracted = extract_ca_from_modular(&grid, k, horizon, window)?;
    let expected = ca_rows(rule, horizon, window);

    let mut row_matches = Vec::with_capacity(horizon);
    let mut first_mismatch = None;
    for t in 0..horizon {
        let ok = extracted.row(t) == expected.row(t);
        row_matches.push(ok);
        if !ok && first_mismatch.is_none() {
            let i = (0..window)
                .find(|&i| extracted.get(t, i) != expected.get(t, i))
                .expect("rows differ");
            first_mismatch = Some((t, i));
        }
    }
    Ok(EmulationReport {
        arity: rule.arity(),
        table: rule.table().iter().map(|&b| b as u8).collect(),
        k,
        horizon,
        window,
        row_matches,
        first_mismatch,
    })
}

/// What a mis-phased gadget slice did at its first finished-computation row.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseObservation {
    /// How far the single gadget match is ahead of the time residue.
    pub offset: usize,
    /// First row the gadget treats as a finished computation that is
    /// constant across the window, with its value; `None` if no such row is
    /// constant inside the box.
    pub first_constant_row: Option<(u64, bool)>,
}

/// Comparison of a modular game against its gadget compilation.
#[derive(Debug, Clone, Serialize)]
pub struct GadgetReport {
    /// Display id of the modular game checked.
    pub game: String,
    pub gadget: GadgetSpec,
    pub tape_bound: u64,
    pub time_bound: u64,
    pub embedded_cells: usize,
    /// Embedded cells whose invariant value is reliable and equals the
    /// modular value.
    pub embedded_agreements: usize,
    pub first_disagreement: Option<(u64, u64)>,
    pub out_of_phase: Vec<PhaseObservation>,
}

impl GadgetReport {
    pub fn all_match(&self) -> bool {
        self.embedded_agreements == self.embedded_cells
    }
}

/// Builds the gadget game for `game`, solves it with every gadget heap
/// bounded by 3 (enough for all single- and double-match states plus trash
/// destinations), and compares each embedded cell with the modular solution.
/// Also records, per phase offset, whether the mis-phased slice shows the
/// expected constant finished-computation row within the box.
pub fn check_gadget(game: &ModularGame, box2d: &Bounds) -> Result<GadgetReport, VerifyError> {
    if box2d.dim() != 2 {
        return Err(VerifyError::ShapeMismatch);
    }
    let (tape_bound, time_bound) = (box2d.dims()[0], box2d.dims()[1]);
    let (invariant, spec) = invariant_from_modular(game);
    let k_star = spec.k;

    let modular_grid = solve_modular(game, box2d)?;
    let mut dims = vec![tape_bound, time_bound];
    dims.extend(std::iter::repeat_n(3, k_star));
    let solved = solve_invariant(&invariant, &Bounds::new(dims)?)?;

    let mut agreements = 0usize;
    let mut first_disagreement = None;
    for tape in 0..tape_bound {
        for time in 0..time_bound {
            let lifted = embed((tape, time), k_star);
            let ok = solved.reliable.get(&lifted)
                && solved.grid.get(&lifted) == modular_grid.get(&Position::new(vec![tape, time]));
            if ok {
                agreements += 1;
            } else if first_disagreement.is_none() {
                first_disagreement = Some((tape, time));
            }
        }
    }

    // Out-of-phase slices: a single match sitting `offset` heaps ahead of the
    // time residue. The gadget treats rows with the match at heap 0 as
    // finished computations; scan them bottom-up for the first constant one.
    let mut out_of_phase = Vec::new();
    for offset in 1..k_star {
        let mut first_constant_row = None;
        // The match is at heap (time + offset) mod k*, so the first row it
        // treats as a finished computation is time = k* - offset.
        let mut time = (k_star - offset) as u64;
        while time < time_bound {
            let probe = |tape: u64| {
                let mut coords = vec![tape, time];
                coords.extend(std::iter::repeat_n(0, k_star));
                coords[2 + ((time + offset as u64) % k_star as u64) as usize] = 1;
                Position::new(coords)
            };
            let head = solved.grid.get(&probe(0));
            if (1..tape_bound).all(|tape| solved.grid.get(&probe(tape)) == head) {
                first_constant_row = Some((time, head));
                break;
            }
            time += k_star as u64;
        }
        out_of_phase.push(PhaseObservation {
            offset,
            first_constant_row,
        });
    }

    Ok(GadgetReport {
        game: game.to_string(),
        gadget: spec,
        tape_bound,
        time_bound,
        embedded_cells: (tape_bound * time_bound) as usize,
        embedded_agreements: agreements,
        first_disagreement,
        out_of_phase,
    })
}

/// Solves both games over the box and returns the first position (smallest
/// total, then lexicographic) where their P-grids differ on cells whose
/// values are reliable. `None` means equal *within the box*; it is not a
/// proof of P-equivalence.
pub fn equiv_bounded(a: &Game, b: &Game, bounds: &Bounds) -> Result<Option<Position>, VerifyError> {
    match (a, b) {
        (Game::Invariant(a), Game::Invariant(b)) => {
            if a.heap_count() != b.heap_count() || bounds.dim() != a.heap_count() {
                return Err(VerifyError::ShapeMismatch);
            }
            let sa = solve_invariant(a, bounds)?;
            let sb = solve_invariant(b, bounds)?;
            let mut mask = sa.reliable;
            mask_and(&mut mask, &sb.reliable);
            Ok(first_difference_masked(&sa.grid, &sb.grid, &mask)?)
        }
        (Game::Modular(a), Game::Modular(b)) => {
            if bounds.dim() != 2 {
                return Err(VerifyError::ShapeMismatch);
            }
            let ga = solve_modular(a, bounds)?;
            let gb = solve_modular(b, bounds)?;
            Ok(first_difference(&ga, &gb)?)
        }
        _ => Err(VerifyError::ShapeMismatch),
    }
}

fn mask_and(acc: &mut PGrid, other: &PGrid) {
    for i in 0..acc.bounds().cell_count() {
        if !other.get_index(i) {
            acc.set_index(i, false);
        }
    }
}

/// Draws a random small modular game: modulus `k`, at most
/// `max_moves_per_residue` moves per residue, `|m1| <= max_tape`,
/// `1 <= |m2| <= max_time`. Used by the randomized gadget checks; pass a
/// seeded RNG for reproducibility.
pub fn sample_modular_game(
    rng: &mut impl Rng,
    k: usize,
    max_moves_per_residue: usize,
    max_tape: i64,
    max_time: i64,
) -> ModularGame {
    let mut sets = Vec::with_capacity(k);
    for _ in 0..k {
        let count = rng.random_range(0..=max_moves_per_residue);
        let mut set = std::collections::BTreeSet::new();
        for _ in 0..count {
            let m1 = -rng.random_range(0..=max_tape);
            let m2 = -rng.random_range(1..=max_time);
            set.insert((m1, m2));
        }
        sets.push(set.into_iter().collect());
    }
    ModularGame::new(k, sets).expect("sampled moves satisfy m1 <= 0 and m2 < 0")
}
