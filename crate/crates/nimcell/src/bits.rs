//! Packed bit vectors backed by `u64` words.
//!
//! Everything grid-shaped in this crate (P-position grids, automaton rows)
//! stores its cells here. Bits past `len` are kept zero so that equality and
//! popcounts can work word-by-word.

const WORD_BITS: usize = 64;

/// A fixed-length bit vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    /// All-one vector of the given length.
    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: vec![!0u64; len.div_ceil(WORD_BITS)],
        };
        v.clear_tail();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / WORD_BITS];
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True iff every bit is set.
    pub fn all(&self) -> bool {
        self.count_ones() == self.len
    }

    /// `self |= src << shift`, i.e. bit `i` of `src` lands on bit `i + shift`.
    /// Both vectors must have the same length; bits shifted past the end are
    /// dropped.
    pub fn or_shifted_left(&mut self, src: &BitVec, shift: usize) {
        assert_eq!(self.len, src.len);
        if shift >= self.len {
            return;
        }
        let word_shift = shift / WORD_BITS;
        let bit_shift = shift % WORD_BITS;
        for i in (word_shift..self.words.len()).rev() {
            let mut w = src.words[i - word_shift] << bit_shift;
            if bit_shift > 0 && i > word_shift {
                w |= src.words[i - word_shift - 1] >> (WORD_BITS - bit_shift);
            }
            self.words[i] |= w;
        }
        self.clear_tail();
    }

    /// Flip every bit in place.
    pub fn negate(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        self.clear_tail();
    }

    /// Bitwise AND with another vector of the same length.
    pub fn and(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    /// Indices where `self` and `other` differ, ascending.
    pub fn diff_indices<'a>(&'a self, other: &'a BitVec) -> impl Iterator<Item = usize> + 'a {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .flat_map(|(wi, (a, b))| {
                let mut x = a ^ b;
                std::iter::from_fn(move || {
                    if x == 0 {
                        None
                    } else {
                        let bit = x.trailing_zeros() as usize;
                        x &= x - 1;
                        Some(wi * WORD_BITS + bit)
                    }
                })
            })
    }

    fn clear_tail(&mut self) {
        let used = self.len % WORD_BITS;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut v = BitVec::zeros(131);
        v.set(0, true);
        v.set(64, true);
        v.set(130, true);
        assert!(v.get(0) && v.get(64) && v.get(130));
        assert!(!v.get(1) && !v.get(129));
        assert_eq!(v.count_ones(), 3);
    }

    #[test]
    fn negate_keeps_tail_clear() {
        let mut v = BitVec::zeros(70);
        v.negate();
        assert_eq!(v.count_ones(), 70);
        assert!(v.all());
        assert_eq!(v, BitVec::ones(70));
    }

    #[test]
    fn shifted_or_crosses_words() {
        let mut acc = BitVec::zeros(130);
        let mut src = BitVec::zeros(130);
        src.set(0, true);
        src.set(63, true);
        src.set(100, true);
        acc.or_shifted_left(&src, 65);
        assert!(acc.get(65));
        assert!(acc.get(128));
        // 100 + 65 shifts past the end
        assert_eq!(acc.count_ones(), 2);
    }

    #[test]
    fn diff_indices_ascending() {
        let mut a = BitVec::zeros(200);
        let mut b = BitVec::zeros(200);
        a.set(3, true);
        b.set(150, true);
        let diffs: Vec<_> = a.diff_indices(&b).collect();
        assert_eq!(diffs, vec![3, 150]);
    }
}
