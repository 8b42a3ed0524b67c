//! Exact soft-ML reference decoding and brute-force enumerators.
//!
//! These exist to validate the production streams: they are slow on purpose
//! and favour obviously-correct constructions. [`exact_ml_stream`] emits
//! every pattern in non-decreasing *true* reliability sum using a priority
//! queue, so pairing it with the same code-book test yields a maximum
//! likelihood decoding to compare ORBGRAND against.

use crate::channel::ReceivedBlock;
use crate::code::BinaryLinearCode;
use crate::decoder::DecodeOutcome;
use crate::pattern::{NoisePattern, Partition};
use crate::{Error, Result};
use num_traits::Float;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// A pattern tagged with its true reliability sum.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPattern<F> {
    pub pattern: NoisePattern,
    pub weight: F,
}

/// Exhaustive enumeration of partitions of `wp` into `w` non-decreasing
/// parts in `0..=np`, ascending lexicographic. Ground truth for the
/// landslide generator; refuses instances past desk scale.
pub fn brute_force_partitions(wp: u64, w: usize, np: u64) -> Result<Vec<Partition>> {
    if (w as u64) * np > 80 {
        return Err(Error::TooLarge(format!("brute force partition grid w*np = {}", w as u64 * np)));
    }
    fn rec(wp: u64, w: usize, min: u64, np: u64, acc: &mut Vec<u16>, out: &mut Vec<Partition>) {
        if w == 0 {
            if wp == 0 {
                out.push(Partition::new(acc.iter().copied()));
            }
            return;
        }
        for part in min..=np.min(wp) {
            if wp - part > (w as u64 - 1) * np {
                continue;
            }
            acc.push(part as u16);
            rec(wp - part, w - 1, part, np, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(wp, w, 0, np, &mut Vec::new(), &mut out);
    Ok(out)
}

struct HeapEntry<F> {
    weight: F,
    pattern: NoisePattern,
}

impl<F: Float> PartialEq for HeapEntry<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<F: Float> Eq for HeapEntry<F> {}

impl<F: Float> Ord for HeapEntry<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap by weight; weights are finite sums of finite
        // reliabilities. Flip lists break ties so the order is total.
        other
            .weight
            .partial_cmp(&self.weight)
            .expect("pattern weights are never NaN")
            .then_with(|| other.pattern.flips().cmp(self.pattern.flips()))
    }
}

impl<F: Float> PartialOrd for HeapEntry<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Priority-queue stream over all patterns in non-decreasing true
/// reliability sum.
///
/// `sorted_reliability` must be non-decreasing (rank domain). Popping a
/// pattern whose largest flip is `j` pushes two successors, replace `j` by
/// `j+1` and extend by `j+1`; every subset of positions is reached exactly
/// once, and successors never weigh less than their parent, which makes the
/// pop order globally non-decreasing.
pub struct ExactMlStream<F> {
    reliability: Vec<F>,
    heap: BinaryHeap<HeapEntry<F>>,
    limit: u64,
    emitted: u64,
}

pub fn exact_ml_stream<F: Float>(sorted_reliability: &[F], limit: u64) -> ExactMlStream<F> {
    assert!(
        sorted_reliability.windows(2).all(|w| w[0] <= w[1]),
        "reliabilities must be sorted ascending"
    );
    assert!(sorted_reliability.len() <= u16::MAX as usize);
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry {
        weight: F::zero(),
        pattern: NoisePattern::empty(),
    });
    ExactMlStream {
        reliability: sorted_reliability.to_vec(),
        heap,
        limit,
        emitted: 0,
    }
}

impl<F: Float> Iterator for ExactMlStream<F> {
    type Item = WeightedPattern<F>;

    fn next(&mut self) -> Option<WeightedPattern<F>> {
        if self.emitted >= self.limit {
            return None;
        }
        let entry = self.heap.pop()?;
        self.emitted += 1;
        let n = self.reliability.len() as u16;
        let rel = |j: u16| self.reliability[usize::from(j) - 1];
        match entry.pattern.flips().last().copied() {
            None => {
                if n >= 1 {
                    self.heap.push(HeapEntry {
                        weight: rel(1),
                        pattern: NoisePattern::new([1]),
                    });
                }
            }
            Some(j) if j < n => {
                let mut replaced: Vec<u16> = entry.pattern.flips().to_vec();
                *replaced.last_mut().unwrap() = j + 1;
                self.heap.push(HeapEntry {
                    weight: entry.weight - rel(j) + rel(j + 1),
                    pattern: NoisePattern::new(replaced),
                });
                let mut extended: Vec<u16> = entry.pattern.flips().to_vec();
                extended.push(j + 1);
                self.heap.push(HeapEntry {
                    weight: entry.weight + rel(j + 1),
                    pattern: NoisePattern::new(extended),
                });
            }
            Some(_) => {}
        }
        Some(WeightedPattern {
            pattern: entry.pattern,
            weight: entry.weight,
        })
    }
}

/// Maximum likelihood decoding by exhaustive likelihood-ordered guessing.
///
/// Identical loop to the production decoder but driven by the exact stream,
/// so the first code-book hit maximizes true likelihood. Abandons at
/// `budget` queries like any other variant.
pub fn exact_ml_decode<F: Float>(
    code: &BinaryLinearCode,
    block: &ReceivedBlock<F>,
    budget: u64,
) -> Result<DecodeOutcome> {
    if block.n() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            got: block.n(),
        });
    }
    let base = code.syndrome(block.hard())?;
    let perm = block.perm();
    let mut queries = 0u64;
    for wp in exact_ml_stream(&block.sorted_reliability(), budget) {
        queries += 1;
        let mut syndrome = base.clone();
        for &flip in wp.pattern.flips() {
            code.syndrome_flip(&mut syndrome, perm[usize::from(flip) - 1] as usize);
        }
        if syndrome.is_zero() {
            let mut word = block.hard().to_vec();
            for &flip in wp.pattern.flips() {
                word[perm[usize::from(flip) - 1] as usize] ^= 1;
            }
            return Ok(DecodeOutcome {
                word: Some(word),
                queries,
                abandoned: false,
            });
        }
    }
    Ok(DecodeOutcome {
        word: None,
        queries,
        abandoned: true,
    })
}

/// True reliability sum of flipping `word` relative to the block's hard
/// decisions: the quantity `exact_ml_decode` minimizes over the code-book.
pub fn flip_cost<F: Float>(block: &ReceivedBlock<F>, word: &[u8]) -> F {
    debug_assert_eq!(block.n(), word.len());
    block
        .hard()
        .iter()
        .zip(word)
        .zip(block.reliability())
        .filter(|((h, w), _)| h != w)
        .fold(F::zero(), |acc, (_, &r)| acc + r)
}
