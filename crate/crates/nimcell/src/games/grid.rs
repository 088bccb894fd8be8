//! Bounded boxes of positions and bit-packed P-position grids.

use super::{GameError, Position};
use crate::bits::BitVec;

/// A box of positions: per-dimension exclusive upper bounds. A position is
/// inside iff `0 <= coord[i] < bound[i]` for every `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    dims: Vec<u64>,
    /// Row-major strides, last coordinate fastest.
    strides: Vec<usize>,
}

impl Bounds {
    pub fn new(dims: Vec<u64>) -> Result<Self, GameError> {
        if dims.is_empty() {
            return Err(GameError::ZeroDimension);
        }
        if dims.contains(&0) {
            return Err(GameError::ZeroBound);
        }
        let mut cells = 1usize;
        for &b in &dims {
            cells = usize::try_from(b)
                .ok()
                .and_then(|b| cells.checked_mul(b))
                .ok_or(GameError::BoxTooLarge)?;
        }
        // Cells are indexed with u32 in the solver's level lists.
        if cells >= u32::MAX as usize {
            return Err(GameError::BoxTooLarge);
        }
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len() - 1).rev() {
            strides[i] = strides[i + 1] * dims[i + 1] as usize;
        }
        Ok(Bounds { dims, strides })
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    /// Number of positions inside the box.
    pub fn cell_count(&self) -> usize {
        self.strides[0] * self.dims[0] as usize
    }

    pub fn contains(&self, pos: &Position) -> bool {
        pos.dim() == self.dim() && pos.coords().iter().zip(&self.dims).all(|(&c, &b)| c < b)
    }

    /// Row-major index (last coordinate fastest) of an in-box position.
    pub fn index_of(&self, pos: &Position) -> usize {
        debug_assert!(self.contains(pos));
        pos.coords()
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    /// Inverse of [`Bounds::index_of`].
    pub fn position_of(&self, mut index: usize) -> Position {
        debug_assert!(index < self.cell_count());
        let coords = self
            .strides
            .iter()
            .map(|&s| {
                let c = index / s;
                index %= s;
                c as u64
            })
            .collect();
        Position::new(coords)
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Iterates all positions in index order (lexicographic in coordinates).
    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.cell_count()).map(|i| self.position_of(i))
    }
}

/// A packed boolean grid over a box; `true` marks a P-position.
///
/// Bits are stored row-major with the last coordinate fastest, so serialized
/// grids are portable bit-exactly. For grids produced by the solvers, a cell
/// is true iff it has no legal in-box move to a true cell (checkable by
/// re-scan).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PGrid {
    bounds: Bounds,
    bits: BitVec,
}

impl PGrid {
    /// All-false grid.
    pub fn new(bounds: Bounds) -> Self {
        let bits = BitVec::zeros(bounds.cell_count());
        PGrid { bounds, bits }
    }

    /// All-true grid.
    pub fn new_true(bounds: Bounds) -> Self {
        let bits = BitVec::ones(bounds.cell_count());
        PGrid { bounds, bits }
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn get(&self, pos: &Position) -> bool {
        self.bits.get(self.bounds.index_of(pos))
    }

    pub fn set(&mut self, pos: &Position, value: bool) {
        let i = self.bounds.index_of(pos);
        self.bits.set(i, value);
    }

    #[inline]
    pub fn get_index(&self, index: usize) -> bool {
        self.bits.get(index)
    }

    #[inline]
    pub fn set_index(&mut self, index: usize, value: bool) {
        self.bits.set(index, value);
    }

    /// Number of P-positions in the box.
    pub fn count_p(&self) -> usize {
        self.bits.count_ones()
    }

    /// True iff every cell is set.
    pub fn all(&self) -> bool {
        self.bits.all()
    }

    /// P-positions in index order.
    pub fn p_positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.bounds.cell_count())
            .filter(|&i| self.bits.get(i))
            .map(|i| self.bounds.position_of(i))
    }
}

/// First position where two grids over the same box differ, ordered by total
/// match count with lexicographic tie-break; `None` if the grids are equal.
pub fn first_difference(a: &PGrid, b: &PGrid) -> Result<Option<Position>, GameError> {
    first_difference_filtered(a, b, None)
}

/// Like [`first_difference`], but only cells where `mask` is true are
/// compared.
pub fn first_difference_masked(
    a: &PGrid,
    b: &PGrid,
    mask: &PGrid,
) -> Result<Option<Position>, GameError> {
    if mask.bounds != a.bounds {
        return Err(GameError::BoxMismatch);
    }
    first_difference_filtered(a, b, Some(mask))
}

fn first_difference_filtered(
    a: &PGrid,
    b: &PGrid,
    mask: Option<&PGrid>,
) -> Result<Option<Position>, GameError> {
    if a.bounds != b.bounds {
        return Err(GameError::BoxMismatch);
    }
    let mut best: Option<(u64, Position)> = None;
    for i in a.bits.diff_indices(&b.bits) {
        if let Some(m) = mask {
            if !m.bits.get(i) {
                continue;
            }
        }
        let pos = a.bounds.position_of(i);
        let total = pos.total();
        // Index order is lexicographic, so the first hit wins each tie.
        if best.as_ref().is_none_or(|(t, _)| total < *t) {
            best = Some((total, pos));
        }
    }
    Ok(best.map(|(_, p)| p))
}
