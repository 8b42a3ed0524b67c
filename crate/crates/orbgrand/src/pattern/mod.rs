//! Putative noise-effect pattern generators.
//!
//! All generators work in the *rank domain*: bit index `j` means the `j`-th
//! least reliable received bit (1-based). The decoder maps rank indices back
//! to received positions through the block's sort permutation.
//!
//! A pattern's likelihood surrogate depends on the generator:
//!
//! * [`hard_order`] — non-decreasing Hamming weight,
//! * [`basic_order`] — non-decreasing logistic weight (sum of flipped rank
//!   indices),
//! * [`full_order`] — non-decreasing reliability weight under a quantized
//!   piece-wise linear [`SegmentModel`](crate::model::SegmentModel).
//!
//! Every stream is pull-based so a decoder can stop at its first code-book
//! hit, and every stream accepts a query budget after which it ends.

mod full;
mod landslide;
mod orders;

pub use full::{
    full_order, full_order_with_sweep, integer_splitting, reliability_weight,
    valid_partial_hamming_weights, FullOrder, SplitPattern, SplitSweep,
};
pub use landslide::{landslide, Landslide};
pub use orders::{basic_order, hard_order, weight_class_order, BasicOrder, HardOrder};

use smallvec::SmallVec;

/// Inline capacity for flip lists; weights beyond this spill to the heap.
pub(crate) type FlipVec = SmallVec<[u16; 12]>;

/// A putative noise effect: the set of rank-domain bit positions to flip.
///
/// Flip indices are 1-based and strictly increasing. The empty pattern is the
/// "no error" guess and is always queried first by every generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NoisePattern {
    flips: FlipVec,
}

impl NoisePattern {
    /// Builds a pattern from strictly increasing 1-based indices.
    ///
    /// # Panics
    /// Panics if the indices are not strictly increasing or contain 0.
    pub fn new(flips: impl IntoIterator<Item = u16>) -> Self {
        let flips: FlipVec = flips.into_iter().collect();
        assert!(
            flips.windows(2).all(|w| w[0] < w[1]) && flips.first().is_none_or(|&f| f >= 1),
            "flip indices must be strictly increasing and 1-based"
        );
        Self { flips }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub(crate) fn from_sorted(flips: FlipVec) -> Self {
        debug_assert!(flips.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(flips.first().is_none_or(|&f| f >= 1));
        Self { flips }
    }

    /// 1-based rank indices of the flipped bits, strictly increasing.
    pub fn flips(&self) -> &[u16] {
        &self.flips
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    /// Number of flipped bits.
    pub fn hamming_weight(&self) -> usize {
        self.flips.len()
    }

    /// Sum of the flipped 1-based positions. Ranges from 0 (empty pattern)
    /// to n(n+1)/2 (all bits flipped).
    pub fn logistic_weight(&self) -> u64 {
        self.flips.iter().map(|&f| u64::from(f)).sum()
    }
}

/// An integer partition of some `W'` into `w` non-decreasing, non-negative
/// parts each bounded by a maximum part value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: FlipVec,
}

impl Partition {
    /// Builds a partition from non-decreasing parts.
    ///
    /// # Panics
    /// Panics if the parts are not non-decreasing.
    pub fn new(parts: impl IntoIterator<Item = u16>) -> Self {
        let parts: FlipVec = parts.into_iter().collect();
        assert!(
            parts.windows(2).all(|w| w[0] <= w[1]),
            "parts must be non-decreasing"
        );
        Self { parts }
    }

    pub(crate) fn from_sorted(parts: FlipVec) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] <= w[1]));
        Self { parts }
    }

    pub fn parts(&self) -> &[u16] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }
}

/// Maps a partition with repeatable parts onto a flip pattern with distinct
/// positions by adding `i` to the `i`-th part (1-based).
///
/// A partition of `W'` into `w` parts becomes a pattern of Hamming weight `w`
/// and logistic weight `W' + w(w+1)/2`.
pub fn shift_to_distinct(partition: &Partition) -> NoisePattern {
    let flips: FlipVec = partition
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &u)| u + (i as u16) + 1)
        .collect();
    NoisePattern::from_sorted(flips)
}

/// Largest `w` with `w(w+1)/2 <= target`, i.e. the maximum Hamming weight a
/// pattern of logistic weight `target` can have.
pub(crate) fn max_hamming_for(target: u64) -> u64 {
    if target == 0 {
        return 0;
    }
    let mut w = ((8.0 * target as f64 + 1.0).sqrt() as u64).div_ceil(2);
    while w * (w + 1) / 2 > target {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= target {
        w += 1;
    }
    w
}
