//! Piece-wise linear modelling of the rank-ordered reliability curve.
//!
//! Sorting the per-bit reliabilities of a received block produces a
//! non-decreasing curve whose shape depends on the channel quality: near
//! linear through the origin at low SNR, strongly curved near the left edge
//! at high SNR. Full ORBGRAND approximates that curve per received block with
//! `m` integer-parameter line segments,
//!
//! ```text
//! value(j) = J[i-1] + beta[i] * (j - I[i-1])   for I[i-1] < j <= I[i],
//! ```
//!
//! with anchors `I[0] = 0 < I[1] < ... < I[m] = n`, integer offsets `J` and
//! positive integer slopes `beta`. Integer parameters are what make pattern
//! generation reduce to bounded integer partitions; the quantization unit `Q`
//! records the scale that was divided out and has no effect on query order.
//!
//! Fitting is a two-stage procedure: anchor selection on the sorted curve
//! ([`fit_anchors`]), then slope/offset quantization against the smallest
//! fitted slope ([`quantize`]).

use crate::{Error, Result};
use num_traits::Float;

/// Quantized `m`-segment linear model of a sorted reliability curve.
///
/// The basic ORBGRAND model is the special case `m = 1`, `J = 0`,
/// `beta = 1`, under which a bit's value is its reliability rank.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentModel {
    /// Segment boundaries `I[0] = 0 < ... < I[m] = n`.
    anchors: Vec<u32>,
    /// Per-segment offsets `J[0] ..= J[m-1]`; `J[0]` may be negative.
    offsets: Vec<i64>,
    /// Per-segment slopes `beta[1] ..= beta[m]`, all >= 1.
    slopes: Vec<u64>,
    /// Reliability units per integer step; metadata only.
    q_step: f64,
}

impl SegmentModel {
    /// Validates and builds a model.
    ///
    /// Every slope must be >= 1, anchors must strictly increase from 0 to n,
    /// and each segment's first value `J[i-1] + beta[i]` must be
    /// non-negative so pattern weights stay in the non-negative integers.
    /// Cross-segment monotonicity is a property of fitted models, not a
    /// constructor requirement.
    pub fn new(anchors: Vec<u32>, offsets: Vec<i64>, slopes: Vec<u64>, q_step: f64) -> Result<Self> {
        let m = slopes.len();
        if m == 0 || offsets.len() != m || anchors.len() != m + 1 {
            return Err(Error::InvalidModel(format!(
                "field counts disagree: {} anchors, {} offsets, {} slopes",
                anchors.len(),
                offsets.len(),
                m
            )));
        }
        if anchors[0] != 0 || !anchors.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidModel("anchors must strictly increase from 0".into()));
        }
        if slopes.contains(&0) {
            return Err(Error::InvalidModel("every slope must be at least 1".into()));
        }
        for i in 0..m {
            if offsets[i] + (slopes[i] as i64) < 0 {
                return Err(Error::InvalidModel(format!(
                    "segment {} starts below zero (J = {}, beta = {})",
                    i + 1,
                    offsets[i],
                    slopes[i]
                )));
            }
        }
        if !(q_step.is_finite() && q_step > 0.0) {
            return Err(Error::InvalidModel("quantization step must be positive".into()));
        }
        Ok(Self {
            anchors,
            offsets,
            slopes,
            q_step,
        })
    }

    /// The basic ORBGRAND model over `n` bits: one segment through the
    /// origin with unit slope.
    pub fn basic(n: usize) -> Self {
        Self {
            anchors: vec![0, n as u32],
            offsets: vec![0],
            slopes: vec![1],
            q_step: 1.0,
        }
    }

    pub fn n(&self) -> usize {
        *self.anchors.last().unwrap() as usize
    }

    /// Number of segments `m`.
    pub fn segments(&self) -> usize {
        self.slopes.len()
    }

    pub fn anchors(&self) -> &[u32] {
        &self.anchors
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn slopes(&self) -> &[u64] {
        &self.slopes
    }

    pub fn q_step(&self) -> f64 {
        self.q_step
    }

    /// Segment index (0-based) owning rank `j`; boundaries belong to the
    /// segment they close, so `j = I[i]` falls in segment `i`.
    pub fn segment_of(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.n(), "rank {j} out of 1..={}", self.n());
        self.anchors[..self.anchors.len() - 1]
            .partition_point(|&a| (a as usize) < j)
            - 1
    }

    /// Model value at rank `j` (1-based).
    ///
    /// # Panics
    /// Panics if `j` is outside `1..=n`.
    pub fn evaluate(&self, j: usize) -> u64 {
        let i = self.segment_of(j);
        let v = self.offsets[i] + self.slopes[i] as i64 * (j as i64 - self.anchors[i] as i64);
        debug_assert!(v >= 0, "negative model value at rank {j}");
        v.max(0) as u64
    }

    /// Sum of all model values: the terminal reliability weight of the
    /// all-ones pattern.
    pub fn max_weight(&self) -> u64 {
        (1..=self.n()).map(|j| self.evaluate(j)).sum()
    }

    /// True when values never decrease with rank, which fitted models
    /// guarantee by construction.
    pub fn is_monotone(&self) -> bool {
        (1..self.n()).all(|j| self.evaluate(j + 1) >= self.evaluate(j))
    }
}

/// Anchor indices selected on a sorted reliability curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FittedAnchors {
    /// Segment boundaries `0 = I[0] < ... < I[m] = n`.
    pub anchors: Vec<u32>,
    /// Set when fewer segments than requested were achievable (flat or tiny
    /// curves).
    pub reduced: bool,
}

impl FittedAnchors {
    pub fn segments(&self) -> usize {
        self.anchors.len() - 1
    }
}

/// Selects segment boundaries for an `m`-segment fit of a sorted curve.
///
/// The procedure starts from the edge point at index 1 and the center point
/// at index n/2, then repeatedly inserts the index with the maximum vertical
/// gap between the current chord and the curve. Refinement is restricted to
/// the low-reliability half, where the curvature that matters for query order
/// lives; the central chord covers the flat upper half. A refinement step
/// that finds no positive gap stops early and flags the reduction.
pub fn fit_anchors<F: Float>(sorted_reliability: &[F], m: usize) -> FittedAnchors {
    let n = sorted_reliability.len();
    assert!(m >= 1, "segment count must be at least 1");
    debug_assert!(
        sorted_reliability.windows(2).all(|w| w[0] <= w[1]),
        "reliability curve must be non-decreasing"
    );
    let mut anchors = vec![0u32, n as u32];
    if m == 1 || n < 4 {
        return FittedAnchors {
            anchors,
            reduced: m > 1,
        };
    }
    // Working point set on the curve, 1-based indices, all within the lower
    // half [1, n/2]. Chords run between consecutive points.
    let mut points: Vec<usize> = vec![1, n / 2];
    let value = |j: usize| sorted_reliability[j - 1];
    // Gaps below this are interpolation round-off, not curvature.
    let scale = sorted_reliability[n - 1] - sorted_reliability[0];
    let threshold = scale * F::from(1e-9).unwrap();
    let mut reduced = false;
    for _ in 0..m - 1 {
        let mut best: Option<(F, usize)> = None;
        for pair in points.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b - a < 2 {
                continue;
            }
            let (ya, yb) = (value(a), value(b));
            let span = F::from(b - a).unwrap();
            for t in a + 1..b {
                let chord = ya + (yb - ya) * F::from(t - a).unwrap() / span;
                let gap = (chord - value(t)).abs();
                if best.is_none_or(|(g, _)| gap > g) {
                    best = Some((gap, t));
                }
            }
        }
        match best {
            Some((gap, t)) if gap > threshold => {
                let pos = points.partition_point(|&p| p < t);
                points.insert(pos, t);
            }
            _ => {
                reduced = true;
                break;
            }
        }
    }
    // Inserted points become interior boundaries; the initial edge and center
    // points only steered the search.
    for &p in &points {
        if p != 1 && p != n / 2 {
            anchors.push(p as u32);
        }
    }
    anchors.sort_unstable();
    FittedAnchors { anchors, reduced }
}

/// Rounds half away from zero, which is plain half-up on the non-negative
/// values that appear everywhere except offset arithmetic.
fn round_half_away(x: f64) -> i64 {
    (x.abs() + 0.5).floor() as i64 * x.signum() as i64
}

/// Quantizes chord slopes and offsets of the segments defined by `anchors`
/// into a [`SegmentModel`].
///
/// The quantization unit is the smallest chord slope, floored so the whole
/// curve spans at most 4n integer steps; the first segment's chord runs from
/// index 1 (not 0) to the first boundary, since there is no reliability at
/// rank 0. Slopes rounding to 0 are clamped to 1. Degenerate curves with a
/// non-positive minimum slope fall back to the basic model. Offsets are
/// bumped upward where rounding broke monotonicity across a boundary; the
/// bump is logged at debug level.
pub fn quantize<F: Float>(sorted_reliability: &[F], anchors: &[u32]) -> Result<SegmentModel> {
    let n = sorted_reliability.len();
    if anchors.len() < 2
        || anchors[0] != 0
        || *anchors.last().unwrap() as usize != n
        || !anchors.windows(2).all(|w| w[0] < w[1])
    {
        return Err(Error::InvalidModel("anchors must strictly increase from 0 to n".into()));
    }
    if sorted_reliability
        .iter()
        .any(|r| !r.is_finite() || *r < F::zero())
    {
        return Err(Error::InvalidModel("reliabilities must be finite and non-negative".into()));
    }
    let m = anchors.len() - 1;
    let value = |j: u32| sorted_reliability[j as usize - 1].to_f64().unwrap();
    // Chord slope per segment; the first uses (L[I1] - L[1]) / (I1 - 1),
    // falling back to the raw rise when the first boundary is index 1.
    let slope_of = |i: usize| -> f64 {
        let (lo, hi) = (anchors[i], anchors[i + 1]);
        if i == 0 {
            if hi <= 1 {
                return value(hi);
            }
            (value(hi) - value(1)) / f64::from(hi - 1)
        } else {
            (value(hi) - value(lo)) / f64::from(hi - lo)
        }
    };
    let q = (0..m).map(slope_of).fold(f64::INFINITY, f64::min);
    if !(q.is_finite() && q > 0.0) {
        return Ok(SegmentModel::basic(n));
    }
    // Resolution floor. A near-flat chord between two anchors otherwise
    // drives the quantized dynamic range — and with it the weight sweep the
    // generator must walk — without bound; capping the curve at 4n steps
    // keeps per-bit quantization error well under the mean inter-rank gap.
    let q = q.max(value(n as u32) / (4.0 * n as f64));
    let slopes: Vec<u64> = (0..m)
        .map(|i| round_half_away(slope_of(i) / q).max(1) as u64)
        .collect();
    let offsets: Vec<i64> = (0..m)
        .map(|i| {
            if i == 0 {
                round_half_away(value(1) / q) - slopes[0] as i64
            } else {
                round_half_away(value(anchors[i]) / q)
            }
        })
        .collect();
    let mut model = SegmentModel {
        anchors: anchors.to_vec(),
        offsets,
        slopes,
        q_step: q,
    };
    repair_monotonicity(&mut model, 1);
    Ok(model)
}

/// Bumps offsets upward, in multiples of `step`, until values never decrease
/// across segment boundaries. A single left-to-right pass suffices because
/// bumps only raise the requirement downstream.
fn repair_monotonicity(model: &mut SegmentModel, step: i64) {
    let m = model.segments();
    for i in 1..m {
        let boundary = model.anchors[i] as usize;
        let left = model.evaluate(boundary) as i64;
        let right = model.offsets[i] + model.slopes[i] as i64;
        if right < left {
            let deficit = left - right;
            let bump = ((deficit as u64).div_ceil(step as u64) * step as u64) as i64;
            model.offsets[i] += bump;
            log::debug!(
                "monotonicity repair: offset J[{i}] raised by {bump} at boundary {boundary}"
            );
        }
    }
}

/// Replaces each offset `J[i-1]` by the nearest integer multiple of the
/// segment slope `beta[i]`, enabling the strided splitting sweep.
///
/// Rounding an offset down can dent monotonicity at a boundary, so the same
/// repair pass runs afterwards in slope-sized steps, preserving
/// divisibility.
pub fn enforce_divisibility(model: &SegmentModel) -> SegmentModel {
    let mut out = model.clone();
    for i in 0..out.segments() {
        let beta = out.slopes[i] as i64;
        out.offsets[i] = round_half_away(out.offsets[i] as f64 / beta as f64) * beta;
    }
    for i in 1..out.segments() {
        let beta = out.slopes[i] as i64;
        let boundary = out.anchors[i] as usize;
        let left = out.evaluate(boundary) as i64;
        let right = out.offsets[i] + beta;
        if right < left {
            let bump = (((left - right) as u64).div_ceil(beta as u64) * beta as u64) as i64;
            out.offsets[i] += bump;
            log::debug!("divisibility repair: offset J[{i}] raised by {bump}");
        }
    }
    out
}

/// Fits and quantizes an `m`-segment model for one sorted reliability curve.
pub fn fit_model<F: Float>(sorted_reliability: &[F], m: usize) -> SegmentModel {
    let fitted = fit_anchors(sorted_reliability, m);
    quantize(sorted_reliability, &fitted.anchors).expect("fitted anchors are valid")
}
