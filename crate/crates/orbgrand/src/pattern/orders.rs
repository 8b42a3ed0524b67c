//! Hard-detection and basic ORBGRAND query orders.

use super::landslide::{landslide, Landslide};
use super::{max_hamming_for, shift_to_distinct, NoisePattern};

/// Basic ORBGRAND stream: every pattern over `n` rank-ordered bits, in
/// non-decreasing logistic weight.
///
/// Within one logistic weight the Hamming weight ascends, and within one
/// Hamming weight patterns follow the landslide emission order. Ties carry no
/// likelihood meaning; the order is fixed so campaigns are reproducible.
pub fn basic_order(n: usize, limit: u64) -> BasicOrder {
    assert!(n >= 1 && n <= u16::MAX as usize, "block length out of range");
    BasicOrder {
        n: n as u64,
        limit,
        emitted: 0,
        weight: 0,
        hamming: 0,
        inner: None,
    }
}

#[derive(Debug)]
pub struct BasicOrder {
    n: u64,
    limit: u64,
    emitted: u64,
    /// Current logistic weight W.
    weight: u64,
    /// Current Hamming weight w within W; 0 before the first class.
    hamming: u64,
    inner: Option<Landslide>,
}

impl Iterator for BasicOrder {
    type Item = NoisePattern;

    fn next(&mut self) -> Option<NoisePattern> {
        if self.emitted >= self.limit {
            return None;
        }
        loop {
            if let Some(ls) = self.inner.as_mut() {
                if let Some(partition) = ls.next() {
                    self.emitted += 1;
                    return Some(shift_to_distinct(&partition));
                }
                self.inner = None;
            }
            // Advance to the next (W, w) class. W = 0 holds only the empty
            // pattern, emitted on the way into W = 1.
            let max_w = max_hamming_for(self.weight).min(self.n);
            if self.hamming < max_w {
                self.hamming += 1;
            } else {
                if self.weight >= self.n * (self.n + 1) / 2 {
                    return None;
                }
                self.weight += 1;
                if self.weight == 1 {
                    self.emitted += 1;
                    self.hamming = 0;
                    return Some(NoisePattern::empty());
                }
                self.hamming = 1;
            }
            let w = self.hamming;
            let wp = self.weight - w * (w + 1) / 2;
            let np = self.n - w;
            if wp <= w * np {
                self.inner = Some(landslide(wp, w as usize, np).expect("feasible by bound"));
            }
        }
    }
}

/// Hard-detection GRAND stream: every pattern over `n` bits in non-decreasing
/// Hamming weight, with logistic weight ascending inside each weight class.
pub fn hard_order(n: usize, limit: u64) -> HardOrder {
    assert!(n >= 1 && n <= u16::MAX as usize, "block length out of range");
    HardOrder {
        n: n as u64,
        limit,
        emitted: 0,
        hamming: 0,
        logistic: 0,
        inner: None,
        primed: false,
    }
}

#[derive(Debug)]
pub struct HardOrder {
    n: u64,
    limit: u64,
    emitted: u64,
    hamming: u64,
    /// Offset W' of the logistic weight within the current Hamming class.
    logistic: u64,
    inner: Option<Landslide>,
    primed: bool,
}

impl Iterator for HardOrder {
    type Item = NoisePattern;

    fn next(&mut self) -> Option<NoisePattern> {
        if self.emitted >= self.limit {
            return None;
        }
        if !self.primed {
            self.primed = true;
            self.emitted += 1;
            return Some(NoisePattern::empty());
        }
        loop {
            if let Some(ls) = self.inner.as_mut() {
                if let Some(partition) = ls.next() {
                    self.emitted += 1;
                    return Some(shift_to_distinct(&partition));
                }
                self.inner = None;
            }
            let np = self.n - self.hamming;
            if self.hamming > 0 && self.logistic < self.hamming * np {
                self.logistic += 1;
            } else {
                if self.hamming >= self.n {
                    return None;
                }
                self.hamming += 1;
                self.logistic = 0;
            }
            let w = self.hamming;
            self.inner = Some(landslide(self.logistic, w as usize, self.n - w).expect("in range"));
        }
    }
}

/// One Hamming-weight shard of the basic order: all patterns of weight `w`
/// over `n` bits in non-decreasing logistic weight.
///
/// Shards for different weights are independent, matching a parallel
/// deployment where one partition routine runs per Hamming weight; merging
/// shards by logistic weight reproduces the single-stream class content.
pub fn weight_class_order(n: usize, w: usize) -> impl Iterator<Item = NoisePattern> {
    assert!(n >= 1 && n <= u16::MAX as usize && w <= n);
    let np = (n - w) as u64;
    (0..=(w as u64) * np).flat_map(move |wp| {
        landslide(wp, w, np)
            .expect("in range")
            .map(|p| shift_to_distinct(&p))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn basic_order_first_five() {
        let got: Vec<_> = basic_order(8, 5).map(|p| p.flips().to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![], vec![1], vec![2], vec![3], vec![1, 2]],
        );
    }

    #[test]
    fn basic_order_enumerates_everything_once_in_weight_order() {
        let n = 16;
        let mut seen = HashSet::new();
        let mut last = 0u64;
        let mut count = 0u64;
        for p in basic_order(n, u64::MAX) {
            let w = p.logistic_weight();
            assert!(w >= last, "logistic weight decreased");
            last = w;
            assert!(seen.insert(p.flips().to_vec()), "duplicate {:?}", p.flips());
            count += 1;
        }
        assert_eq!(count, 1u64 << n);
        assert_eq!(seen.len(), 1usize << n);
    }

    #[test]
    fn basic_order_weight_five_class() {
        let count = basic_order(16, u64::MAX)
            .filter(|p| p.logistic_weight() == 5)
            .count();
        assert_eq!(count, 3); // {5}, {1,4}, {2,3}
    }

    #[test]
    fn basic_order_respects_limit() {
        assert_eq!(basic_order(16, 10).count(), 10);
        assert_eq!(basic_order(4, u64::MAX).count(), 16);
    }

    #[test]
    fn basic_order_tiny_block() {
        let got: Vec<_> = basic_order(1, u64::MAX).map(|p| p.flips().to_vec()).collect();
        assert_eq!(got, vec![vec![], vec![1]]);
    }

    #[test]
    fn hard_order_full_stream_n3() {
        let got: Vec<_> = hard_order(3, u64::MAX).map(|p| p.flips().to_vec()).collect();
        let want: Vec<Vec<u16>> = vec![
            vec![],
            vec![1],
            vec![2],
            vec![3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
            vec![1, 2, 3],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn hard_order_covers_n16_in_weight_then_logistic_order() {
        let n = 16;
        let mut seen = HashSet::new();
        let mut last = (0usize, 0u64);
        for p in hard_order(n, u64::MAX) {
            let key = (p.hamming_weight(), p.logistic_weight());
            assert!(key >= last, "order violated at {:?}", p.flips());
            last = key;
            assert!(seen.insert(p.flips().to_vec()));
        }
        assert_eq!(seen.len(), 1usize << n);
    }

    #[test]
    fn weight_class_shards_recompose_basic_classes() {
        let n = 12;
        for w in 0..=n {
            let shard: Vec<_> = weight_class_order(n, w).collect();
            let direct: Vec<_> = hard_order(n, u64::MAX)
                .filter(|p| p.hamming_weight() == w)
                .collect();
            assert_eq!(shard, direct);
        }
    }

    #[test]
    fn large_n_prefix_has_no_duplicates() {
        let mut seen = HashSet::new();
        for p in basic_order(512, 200_000) {
            assert!(seen.insert(p.flips().to_vec()));
        }
        assert_eq!(seen.len(), 200_000);
    }
}
