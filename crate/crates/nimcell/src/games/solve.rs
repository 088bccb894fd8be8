//! Bottom-up P-position solvers.
//!
//! Both solvers are exact fixed-point computations: a cell is P iff no legal
//! move from it reaches a P cell. The invariant solver sweeps positions in
//! nondecreasing total match count (every move strictly decreases the total,
//! so each level only reads completed levels); cells within one level are
//! independent and are computed in parallel when the level is large enough.
//! Results are identical for every thread count.

use rayon::prelude::*;

use super::{Bounds, GameError, InvariantGame, ModularGame, PGrid};
use crate::bits::BitVec;

/// Cutoff below which a level is not worth farming out to rayon.
const PAR_LEVEL_MIN: usize = 4096;

/// Output of [`solve_invariant`]: the P-grid plus a validity mask.
///
/// A move with a positive component can point at a position outside the box.
/// The solver skips such moves, and `reliable` marks the cells whose entire
/// reachable cone stays inside the box: exactly those cells carry the true
/// P-status of the unbounded game. Comparisons and acceptance checks must
/// consult only reliable cells. For games whose moves are all componentwise
/// `<= 0` the mask is all-true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedGrid {
    pub grid: PGrid,
    pub reliable: PGrid,
}

/// Solves an invariant game over a box by dynamic programming in
/// nondecreasing total match count.
pub fn solve_invariant(game: &InvariantGame, bounds: &Bounds) -> Result<SolvedGrid, GameError> {
    let d = game.heap_count();
    if bounds.dim() != d {
        return Err(GameError::BoxDimension {
            expected: d,
            found: bounds.dim(),
        });
    }

    let dims = bounds.dims();
    let strides = bounds.strides();
    let moves: Vec<&[i64]> = game.moves().iter().map(|m| m.components()).collect();

    // Bucket cell indices by total match count.
    let max_total: usize = dims.iter().map(|&b| b as usize - 1).sum();
    let mut levels: Vec<Vec<u32>> = vec![Vec::new(); max_total + 1];
    {
        let mut coords = vec![0u64; d];
        let mut total = 0usize;
        for index in 0..bounds.cell_count() {
            levels[total].push(index as u32);
            // Odometer step.
            for i in (0..d).rev() {
                coords[i] += 1;
                total += 1;
                if coords[i] < dims[i] {
                    break;
                }
                total -= coords[i] as usize;
                coords[i] = 0;
            }
        }
    }

    let mut grid = PGrid::new(bounds.clone());
    let mut reliable = PGrid::new(bounds.clone());

    let solve_cell = |index: u32, coords: &mut [u64], grid: &PGrid, reliable: &PGrid| -> (bool, bool) {
        let mut rest = index as usize;
        for (c, &s) in coords.iter_mut().zip(strides) {
            *c = (rest / s) as u64;
            rest %= s;
        }
        let mut is_p = true;
        let mut is_reliable = true;
        'moves: for m in &moves {
            let mut target_index = 0usize;
            let mut exits_box = false;
            for i in 0..d {
                let t = coords[i] as i64 + m[i];
                if t < 0 {
                    continue 'moves; // illegal, not a move at all
                }
                if t as u64 >= dims[i] {
                    exits_box = true;
                } else {
                    target_index += t as usize * strides[i];
                }
            }
            if exits_box {
                // A legal move whose target lies outside the box: the cell's
                // value cannot be trusted, but the move contributes nothing
                // to the in-box fixed point.
                is_reliable = false;
                continue;
            }
            // Targets have strictly smaller totals, so their level is done.
            if grid.get_index(target_index) {
                is_p = false;
            }
            if !reliable.get_index(target_index) {
                is_reliable = false;
            }
            if !is_p && !is_reliable {
                break;
            }
        }
        (is_p, is_reliable)
    };

    let mut scratch = vec![0u64; d];
    for level in &levels {
        let results: Vec<(u32, bool, bool)> = if level.len() >= PAR_LEVEL_MIN {
            level
                .par_iter()
                .map_init(
                    || vec![0u64; d],
                    |coords, &i| {
                        let (p, r) = solve_cell(i, coords, &grid, &reliable);
                        (i, p, r)
                    },
                )
                .collect()
        } else {
            level
                .iter()
                .map(|&i| {
                    let (p, r) = solve_cell(i, &mut scratch, &grid, &reliable);
                    (i, p, r)
                })
                .collect()
        };
        for (i, p, r) in results {
            grid.set_index(i as usize, p);
            reliable.set_index(i as usize, r);
        }
    }

    Ok(SolvedGrid { grid, reliable })
}

/// Solves a modular game over a two-dimensional box (tape bound, time bound).
///
/// Exact for every box: `m1 <= 0` and `m2 < 0` keep all dependencies inside,
/// so no validity mask is needed. Rows are processed in increasing time, and
/// each row is computed with word-parallel shifts of the rows it depends on.
pub fn solve_modular(game: &ModularGame, bounds: &Bounds) -> Result<PGrid, GameError> {
    if bounds.dim() != 2 {
        return Err(GameError::BoxDimension {
            expected: 2,
            found: bounds.dim(),
        });
    }
    let width = bounds.dims()[0] as usize;
    let height = bounds.dims()[1] as usize;
    let k = game.modulus();

    let mut rows: Vec<BitVec> = Vec::with_capacity(height);
    for time in 0..height {
        // Cell (a1, time) is N iff some move reaches a P cell; collect the
        // attacked-by-P mask and invert it.
        let mut n_mask = BitVec::zeros(width);
        for &(m1, m2) in game.move_set(time % k) {
            // Every dependency lies in a strictly earlier row.
            assert!(m2 < 0 && m1 <= 0);
            let source = time as i64 + m2;
            if source < 0 {
                continue;
            }
            n_mask.or_shifted_left(&rows[source as usize], (-m1) as usize);
        }
        n_mask.negate();
        rows.push(n_mask);
    }

    let mut grid = PGrid::new(bounds.clone());
    for (time, row) in rows.iter().enumerate() {
        for tape in 0..width {
            if row.get(tape) {
                grid.set_index(tape * height + time, true);
            }
        }
    }
    Ok(grid)
}
