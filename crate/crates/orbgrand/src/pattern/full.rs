//! Full ORBGRAND: pattern generation under an m-segment reliability model.
//!
//! For a target reliability weight `W`, the block decomposes segment by
//! segment: a *split* assigns a partial weight `W_i` to each segment, a
//! partial Hamming weight `w_i` fixes how many bits flip inside segment `i`,
//! and the flip positions then satisfy
//!
//! ```text
//! sum of relative positions = (W_i - w_i * J[i-1]) / beta[i],
//! ```
//!
//! which is exactly the bounded-partition problem the landslide generator
//! solves. Patterns for one weight are the Cartesian product of the
//! per-segment partial patterns, unioned over all valid splits; sweeping `W`
//! upward yields the stream in non-decreasing reliability weight.
//!
//! A split is valid only when every nonzero part admits at least one partial
//! Hamming weight; parts are validated eagerly so invalid subtrees are
//! pruned. When a segment's offset is divisible by its slope, only partial
//! weights divisible by the slope can be valid, and the strided sweep
//! ([`SplitSweep::Strided`]) skips the rest.

use super::landslide::{landslide, Landslide};
use super::{FlipVec, NoisePattern};
use crate::model::SegmentModel;
use smallvec::SmallVec;

/// How `integer_splitting` walks candidate partial weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitSweep {
    /// Every value `0..=W` is tried and validated.
    #[default]
    Exhaustive,
    /// Where `beta[i]` divides `J[i-1]`, partial weights advance in steps of
    /// `beta[i]` starting from the cheapest nonzero segment weight. Exact in
    /// those segments; other segments fall back to the exhaustive sweep.
    Strided,
}

/// One way of splitting a reliability weight across the model segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPattern {
    /// Partial weights, one per segment, summing to the split's total.
    pub parts: Vec<u64>,
    /// Valid per-segment Hamming weights, ascending. A part of 0 always
    /// admits 0; it can also admit 1 when the segment starts with a
    /// zero-valued bit.
    pub hamming_options: Vec<Vec<u16>>,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    /// Absolute rank offset `I[i-1]`; relative position v maps to rank
    /// `start + v`.
    start: u32,
    len: u32,
    offset: i64,
    slope: u64,
    /// Weight of flipping every bit in the segment.
    max_weight: u64,
}

impl Segment {
    fn from_model(model: &SegmentModel) -> Vec<Segment> {
        (0..model.segments())
            .map(|i| {
                let start = model.anchors()[i];
                let len = model.anchors()[i + 1] - start;
                let offset = model.offsets()[i];
                let slope = model.slopes()[i];
                let lenu = u64::from(len);
                let max_weight =
                    (offset * lenu as i64 + (slope * lenu * (lenu + 1) / 2) as i64).max(0) as u64;
                Segment {
                    start,
                    len,
                    offset,
                    slope,
                    max_weight,
                }
            })
            .collect()
    }

    /// Valid Hamming weights for carrying partial weight `wi` in this
    /// segment; includes 0 exactly when `wi` is 0. `None` means a nonzero
    /// `wi` is unreachable and the enclosing split must be discarded.
    fn hamming_options(&self, wi: u64) -> Option<SmallVec<[u16; 6]>> {
        let mut opts: SmallVec<[u16; 6]> = SmallVec::new();
        if wi == 0 {
            opts.push(0);
        }
        let len = u64::from(self.len);
        for w in 1..=len {
            let numer = wi as i64 - w as i64 * self.offset;
            if numer <= 0 || numer % self.slope as i64 != 0 {
                continue;
            }
            let lseg = (numer / self.slope as i64) as u64;
            let tri = w * (w + 1) / 2;
            // Partial logistic weight of w distinct positions in 1..=len.
            if lseg >= tri && lseg <= w * len - w * (w - 1) / 2 {
                opts.push(w as u16);
            }
        }
        if wi > 0 && opts.is_empty() {
            None
        } else {
            Some(opts)
        }
    }

    /// Landslide parameters for (partial weight, Hamming weight): the
    /// partition target and maximum part value.
    fn landslide_params(&self, wi: u64, w: u64) -> (u64, u64) {
        let lseg = ((wi as i64 - w as i64 * self.offset) / self.slope as i64) as u64;
        (lseg - w * (w + 1) / 2, u64::from(self.len) - w)
    }
}

/// Collects the Hamming weights that can realize partial weight `wi` in a
/// segment with offset `j`, slope `beta` and length `len`, or fails when
/// there are none.
///
/// A weight `w` qualifies when `wi - w*j` is positive, divisible by `beta`,
/// and the quotient is an achievable sum of `w` distinct positions in
/// `1..=len`. A failure invalidates the whole split containing `wi`.
pub fn valid_partial_hamming_weights(
    wi: u64,
    offset: i64,
    slope: u64,
    len: u32,
) -> Option<Vec<u16>> {
    assert!(wi >= 1, "zero partial weight is always realizable");
    assert!(slope >= 1, "slope must be positive");
    let seg = Segment {
        start: 0,
        len,
        offset,
        slope,
        max_weight: 0,
    };
    seg.hamming_options(wi).map(|o| o.to_vec())
}

/// Enumerates the valid splits of reliability weight `w` across the model's
/// segments, lexicographically ascending in the leading parts.
pub fn integer_splitting(w: u64, model: &SegmentModel, sweep: SplitSweep) -> Vec<SplitPattern> {
    let segments = Segment::from_model(model);
    splits_over(w, &segments, sweep)
}

fn splits_over(total: u64, segments: &[Segment], sweep: SplitSweep) -> Vec<SplitPattern> {
    let mut out = Vec::new();
    let mut parts = vec![0u64; segments.len()];
    let mut opts: Vec<Vec<u16>> = vec![Vec::new(); segments.len()];
    descend(total, 0, segments, sweep, &mut parts, &mut opts, &mut out);
    out
}

fn descend(
    remaining: u64,
    i: usize,
    segments: &[Segment],
    sweep: SplitSweep,
    parts: &mut Vec<u64>,
    opts: &mut Vec<Vec<u16>>,
    out: &mut Vec<SplitPattern>,
) {
    let seg = &segments[i];
    if i == segments.len() - 1 {
        // Last part takes the residual.
        if remaining > seg.max_weight {
            return;
        }
        if let Some(o) = seg.hamming_options(remaining) {
            parts[i] = remaining;
            opts[i] = o.to_vec();
            out.push(SplitPattern {
                parts: parts.clone(),
                hamming_options: opts.clone(),
            });
        }
        return;
    }
    let hi = remaining.min(seg.max_weight);
    let mut wi = 0u64;
    loop {
        if wi > hi {
            break;
        }
        if let Some(o) = seg.hamming_options(wi) {
            parts[i] = wi;
            opts[i] = o.to_vec();
            descend(remaining - wi, i + 1, segments, sweep, parts, opts, out);
        }
        // Advance the sweep.
        wi = match (sweep, wi) {
            (SplitSweep::Exhaustive, _) => wi + 1,
            (SplitSweep::Strided, 0) => {
                let stride = if seg.offset.rem_euclid(seg.slope as i64) == 0 {
                    seg.slope
                } else {
                    1
                };
                // The cheapest nonzero segment weight is the cheapest bit.
                let min_nonzero = (seg.offset + seg.slope as i64).max(0) as u64;
                min_nonzero.max(stride)
            }
            (SplitSweep::Strided, _) => {
                let stride = if seg.offset.rem_euclid(seg.slope as i64) == 0 {
                    seg.slope
                } else {
                    1
                };
                wi + stride
            }
        };
    }
}

/// Model-weighted pattern weight: the sum of the model values at the flipped
/// ranks. Equals the logistic weight under the basic model.
pub fn reliability_weight(pattern: &NoisePattern, model: &SegmentModel) -> u64 {
    pattern
        .flips()
        .iter()
        .map(|&f| model.evaluate(f as usize))
        .sum()
}

/// Full ORBGRAND stream over `n` bits: every pattern exactly once, in
/// non-decreasing reliability weight under `model`, exhaustive sweep.
pub fn full_order(n: usize, model: &SegmentModel, limit: u64) -> FullOrder {
    full_order_with_sweep(n, model, limit, SplitSweep::Exhaustive)
}

/// [`full_order`] with an explicit splitting sweep.
pub fn full_order_with_sweep(
    n: usize,
    model: &SegmentModel,
    limit: u64,
    sweep: SplitSweep,
) -> FullOrder {
    assert!(n >= 1 && n <= u16::MAX as usize, "block length out of range");
    assert_eq!(model.n(), n, "model must cover exactly n ranks");
    let segments = Segment::from_model(model);
    let max_weight = model.max_weight();
    FullOrder {
        segments,
        sweep,
        limit,
        emitted: 0,
        weight: 0,
        entered: false,
        max_weight,
        work: Vec::new(),
        work_idx: 0,
        product: None,
    }
}

/// Work item: one (split, per-segment Hamming weights) cell of the current
/// weight, tagged with its total Hamming weight for ordering.
#[derive(Debug, Clone)]
struct WorkItem {
    total_hamming: u32,
    tuple: SmallVec<[u16; 6]>,
    parts: SmallVec<[u64; 6]>,
}

#[derive(Debug)]
pub struct FullOrder {
    segments: Vec<Segment>,
    sweep: SplitSweep,
    limit: u64,
    emitted: u64,
    weight: u64,
    entered: bool,
    max_weight: u64,
    work: Vec<WorkItem>,
    work_idx: usize,
    product: Option<SegmentProduct>,
}

impl FullOrder {
    /// Builds the ordered work list for the current weight: all (split,
    /// Hamming tuple) cells, sorted by total Hamming weight with the
    /// (split lex, tuple lex) generation order preserved inside a weight
    /// class.
    fn enter_weight(&mut self) {
        self.work.clear();
        self.work_idx = 0;
        let splits = splits_over(self.weight, &self.segments, self.sweep);
        for split in &splits {
            let mut tuple: SmallVec<[u16; 6]> = SmallVec::new();
            expand_tuples(&split.hamming_options, &mut tuple, &mut |t| {
                self.work.push(WorkItem {
                    total_hamming: t.iter().map(|&w| u32::from(w)).sum(),
                    tuple: t.iter().copied().collect(),
                    parts: split.parts.iter().copied().collect(),
                });
            });
        }
        self.work.sort_by_key(|item| item.total_hamming);
    }
}

fn expand_tuples(options: &[Vec<u16>], acc: &mut SmallVec<[u16; 6]>, emit: &mut impl FnMut(&[u16])) {
    if acc.len() == options.len() {
        emit(acc);
        return;
    }
    for &w in &options[acc.len()] {
        acc.push(w);
        expand_tuples(options, acc, emit);
        acc.pop();
    }
}

impl Iterator for FullOrder {
    type Item = NoisePattern;

    fn next(&mut self) -> Option<NoisePattern> {
        if self.emitted >= self.limit {
            return None;
        }
        loop {
            if let Some(product) = self.product.as_mut() {
                if let Some(pattern) = product.next() {
                    self.emitted += 1;
                    return Some(pattern);
                }
                self.product = None;
                self.work_idx += 1;
            }
            if let Some(item) = self.work.get(self.work_idx) {
                self.product = Some(SegmentProduct::new(&self.segments, item));
                continue;
            }
            if self.entered && self.weight >= self.max_weight {
                return None;
            }
            if self.entered {
                self.weight += 1;
            }
            self.entered = true;
            self.enter_weight();
        }
    }
}

/// Cartesian product of per-segment landslide streams for one work item.
/// The right-most active segment advances fastest; exhausted inner cursors
/// restart while an outer cursor steps.
#[derive(Debug)]
struct SegmentProduct {
    cursors: Vec<SegmentCursor>,
    fresh: bool,
}

#[derive(Debug)]
struct SegmentCursor {
    start: u32,
    wp: u64,
    w: usize,
    np: u64,
    iter: Landslide,
    /// Absolute flip indices of the cursor's current partial pattern.
    current: FlipVec,
}

impl SegmentCursor {
    fn new(seg: &Segment, wi: u64, w: u64) -> Self {
        let (wp, np) = seg.landslide_params(wi, w);
        let mut cursor = SegmentCursor {
            start: seg.start,
            wp,
            w: w as usize,
            np,
            iter: landslide(wp, w as usize, np).expect("validated options are feasible"),
            current: FlipVec::new(),
        };
        cursor.pull();
        cursor
    }

    fn pull(&mut self) -> bool {
        match self.iter.next() {
            Some(partition) => {
                self.current.clear();
                for (i, &u) in partition.parts().iter().enumerate() {
                    self.current.push(self.start as u16 + u + i as u16 + 1);
                }
                true
            }
            None => false,
        }
    }

    fn restart(&mut self) {
        self.iter = landslide(self.wp, self.w, self.np).expect("feasible on restart");
        self.pull();
    }
}

impl SegmentProduct {
    fn new(segments: &[Segment], item: &WorkItem) -> Self {
        let cursors = item
            .tuple
            .iter()
            .enumerate()
            .filter(|&(_, &w)| w > 0)
            .map(|(i, &w)| SegmentCursor::new(&segments[i], item.parts[i], u64::from(w)))
            .collect();
        SegmentProduct {
            cursors,
            fresh: true,
        }
    }

    fn assemble(&self) -> NoisePattern {
        let mut flips = FlipVec::new();
        for cursor in &self.cursors {
            flips.extend_from_slice(&cursor.current);
        }
        NoisePattern::from_sorted(flips)
    }
}

impl Iterator for SegmentProduct {
    type Item = NoisePattern;

    fn next(&mut self) -> Option<NoisePattern> {
        if self.fresh {
            self.fresh = false;
            return Some(self.assemble());
        }
        // Odometer over cursors, last one fastest.
        for idx in (0..self.cursors.len()).rev() {
            if self.cursors[idx].pull() {
                for cursor in &mut self.cursors[idx + 1..] {
                    cursor.restart();
                }
                return Some(self.assemble());
            }
        }
        None
    }
}
