use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::CompiledMinor;
use crate::gf::{Field, PointSpace};
use crate::{Error, Result};

/// One bit per point of a [`PointSpace`], set where a minor is nonzero.
///
/// Bit `b` lives in word `b / 64` at position `b % 64`; bits past the end of
/// the space are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalTable {
    space: PointSpace,
    len: u64,
    words: Vec<u64>,
}

impl EvalTable {
    pub fn word_count(space: PointSpace) -> usize {
        (space.len() as u64).div_ceil(64) as usize
    }

    pub fn build(field: &Field, minor: &CompiledMinor, space: PointSpace) -> Self {
        let words = Self::build_words(field, minor, space, 0..Self::word_count(space));
        EvalTable {
            space,
            len: space.len() as u64,
            words,
        }
    }

    /// The words in `range` of the table; lets callers split construction.
    pub fn build_words(
        field: &Field,
        minor: &CompiledMinor,
        space: PointSpace,
        range: Range<usize>,
    ) -> Vec<u64> {
        let len = space.len() as u64;
        let mut out = vec![0u64; range.len()];
        let start = range.start as u64 * 64;
        if start >= len {
            return out;
        }
        let end = (range.end as u64 * 64).min(len);
        let mut point = vec![0u8; space.k];
        space.point_at(start, &mut point);
        for b in start..end {
            if minor.eval(field, &point) != 0 {
                let local = b - start;
                out[(local / 64) as usize] |= 1 << (local % 64);
            }
            space.advance(&mut point);
        }
        out
    }

    pub fn from_words(space: PointSpace, words: Vec<u64>) -> Result<Self> {
        let len = space.len() as u64;
        let expected = Self::word_count(space);
        if words.len() != expected {
            return Err(Error::Parse(alloc::format!(
                "table has {} words, expected {expected}",
                words.len()
            )));
        }
        if !len.is_multiple_of(64) && words[expected - 1] >> (len % 64) != 0 {
            return Err(Error::Parse(
                "table has bits past the end of its space".into(),
            ));
        }
        Ok(EvalTable { space, len, words })
    }

    /// Every bit set.
    pub fn full(space: PointSpace) -> Self {
        let len = space.len() as u64;
        let mut words = vec![u64::MAX; Self::word_count(space)];
        if !len.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1 << (len % 64)) - 1;
        }
        EvalTable { space, len, words }
    }

    pub fn space(&self) -> PointSpace {
        self.space
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, bit: u64) -> bool {
        self.words[(bit / 64) as usize] >> (bit % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count_ones() == self.len
    }
}

/// Smallest point index set in every table.
pub fn first_common(tables: &[&EvalTable]) -> Option<u64> {
    let words = tables.first()?.words.len();
    (0..words).find_map(|w| {
        let acc = tables.iter().fold(u64::MAX, |acc, t| acc & t.words[w]);
        (acc != 0).then(|| w as u64 * 64 + u64::from(acc.trailing_zeros()))
    })
}

pub fn any_common(tables: &[&EvalTable]) -> bool {
    first_common(tables).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::minor;
    use crate::{Lattice, Placement};

    #[test]
    fn bits_match_direct_evaluation() {
        let l = Lattice::new(4).unwrap();
        let f = Field::new(3).unwrap();
        let space = PointSpace::new(3, 12, true);
        for labels in [[1, 4, 5, 10], [2, 5, 7, 10], [1, 3, 4, 10]] {
            let m = minor(&l, &Placement::new(&l, labels).unwrap());
            let t = EvalTable::build(&f, &CompiledMinor::new(&m, &f), space);
            let mut pt = [0u8; 12];
            for b in 0..t.len() {
                space.point_at(b, &mut pt);
                assert_eq!(t.get(b), f.eval(&m, &pt).unwrap() != 0);
            }
            // split construction agrees
            let words = EvalTable::word_count(space);
            let mut parts = EvalTable::build_words(&f, &CompiledMinor::new(&m, &f), space, 0..7);
            parts.extend(EvalTable::build_words(
                &f,
                &CompiledMinor::new(&m, &f),
                space,
                7..words,
            ));
            assert_eq!(EvalTable::from_words(space, parts).unwrap(), t);
        }
    }

    #[test]
    fn full_and_common() {
        let space = PointSpace::new(3, 3, false); // 27 points
        let full = EvalTable::full(space);
        assert!(full.is_full());
        assert_eq!(full.count_ones(), 27);
        assert_eq!(first_common(&[&full]), Some(0));
        let mut w = vec![0u64; 1];
        w[0] = 1 << 20;
        let single = EvalTable::from_words(space, w).unwrap();
        assert_eq!(first_common(&[&full, &single]), Some(20));
        assert!(EvalTable::from_words(space, vec![1 << 40]).is_err());
        assert!(EvalTable::from_words(space, vec![0, 0]).is_err());
    }
}
