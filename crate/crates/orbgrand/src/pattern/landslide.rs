//! Iterative generator for bounded integer partitions.
//!
//! [`landslide`] enumerates every partition of `W'` into exactly `w`
//! non-decreasing, non-negative parts no larger than `n'`, in a fixed order
//! that starts from the fewest-nonzero-parts extreme and ends when the total
//! drop `D(1) = u_w - u_1` has fallen below 2. Each step increments the
//! right-most part that still has room and rebuilds everything to its right
//! by pushing the unallocated cells as far right as possible (the
//! "build-mountain" step), so successive partitions cost O(w) work with no
//! re-enumeration from scratch.
//!
//! The generator is the workhorse of every ORBGRAND variant: a pattern of
//! Hamming weight `w` and logistic weight `W` corresponds to a partition of
//! `W - w(w+1)/2` into `w` parts bounded by `n - w`, recovered through
//! [`shift_to_distinct`](super::shift_to_distinct).

use super::{FlipVec, Partition};
use crate::{Error, Result};

/// Streaming iterator over the partitions of `wp` into `w` parts `<= np`.
#[derive(Debug, Clone)]
pub struct Landslide {
    parts: Vec<u64>,
    max_part: u64,
    target: u64,
    started: bool,
    done: bool,
    builds: u64,
}

/// Enumerates all partitions of `wp` into exactly `w` non-decreasing parts in
/// `0..=np`, erroring out when no such partition exists (`wp > w * np`).
///
/// `w = 0` is accepted and yields the single empty partition when `wp = 0`.
pub fn landslide(wp: u64, w: usize, np: u64) -> Result<Landslide> {
    if wp > (w as u64).saturating_mul(np) {
        return Err(Error::InfeasiblePartition {
            target: wp,
            parts: w,
            max_part: np,
        });
    }
    let mut ls = Landslide {
        parts: vec![0; w],
        max_part: np,
        target: wp,
        started: false,
        done: false,
        builds: 0,
    };
    ls.build_mountain(0);
    Ok(ls)
}

impl Landslide {
    /// Rebuilds `parts[fixed..]`: levels them to the last fixed part and then
    /// pushes the remaining cells onto the right-most parts.
    fn build_mountain(&mut self, fixed: usize) {
        self.builds += 1;
        let w = self.parts.len();
        let base = if fixed == 0 { 0 } else { self.parts[fixed - 1] };
        for p in &mut self.parts[fixed..] {
            *p = base;
        }
        let used: u64 = self.parts.iter().sum();
        let rem = self.target - used;
        let headroom = self.max_part - base;
        if headroom == 0 {
            debug_assert_eq!(rem, 0);
            return;
        }
        let q = (rem / headroom) as usize;
        let r = rem % headroom;
        debug_assert!(q <= w - fixed);
        for p in &mut self.parts[w - q..] {
            *p = self.max_part;
        }
        if r > 0 {
            self.parts[w - q - 1] += r;
        }
    }

    /// Number of build-mountain invocations so far; at most one per emitted
    /// partition.
    pub fn builds(&self) -> u64 {
        self.builds
    }

    fn capture(&self) -> Partition {
        let parts: FlipVec = self.parts.iter().map(|&p| p as u16).collect();
        Partition::from_sorted(parts)
    }
}

impl Iterator for Landslide {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.capture());
        }
        let w = self.parts.len();
        // Total drop D(1) = u_w - u_1; below 2 the migration is complete.
        if w == 0 || self.parts[w - 1] - self.parts[0] < 2 {
            self.done = true;
            return None;
        }
        let last = self.parts[w - 1];
        // Largest k with accumulated drop D(k) = u_w - u_k >= 2.
        let k = (0..w).rev().find(|&k| last - self.parts[k] >= 2).unwrap();
        self.parts[k] += 1;
        self.build_mountain(k + 1);
        Some(self.capture())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive enumeration of non-decreasing bounded partitions, used as
    /// the ground truth for the iterative generator.
    fn brute_force(wp: u64, w: usize, np: u64) -> Vec<Vec<u16>> {
        fn rec(wp: u64, w: usize, min: u64, np: u64, acc: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
            if w == 0 {
                if wp == 0 {
                    out.push(acc.clone());
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
        out
    }

    #[test]
    fn worked_eight_partition_instance() {
        let got: Vec<_> = landslide(8, 4, 4).unwrap().map(|p| p.parts().to_vec()).collect();
        let want: Vec<Vec<u16>> = vec![
            vec![0, 0, 4, 4],
            vec![0, 1, 3, 4],
            vec![0, 2, 2, 4],
            vec![0, 2, 3, 3],
            vec![1, 1, 2, 4],
            vec![1, 1, 3, 3],
            vec![1, 2, 2, 3],
            vec![2, 2, 2, 2],
        ];
        assert_eq!(got, want);
        // Terminal partition has total drop <= 1.
        let last = got.last().unwrap();
        assert!(last[last.len() - 1] - last[0] <= 1);
    }

    #[test]
    fn degenerate_instances() {
        let zero: Vec<_> = landslide(0, 3, 5).unwrap().collect();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].parts(), &[0, 0, 0]);

        let full: Vec<_> = landslide(12, 3, 4).unwrap().collect();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].parts(), &[4, 4, 4]);

        let empty: Vec<_> = landslide(0, 0, 7).unwrap().collect();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].is_empty());
    }

    #[test]
    fn infeasible_is_an_error() {
        assert!(matches!(
            landslide(13, 3, 4),
            Err(Error::InfeasiblePartition { .. })
        ));
        assert!(landslide(1, 0, 9).is_err());
    }

    #[test]
    fn matches_brute_force_on_small_grid() {
        for w in 0..=5usize {
            for np in 0..=8u64 {
                for wp in 0..=(w as u64 * np) {
                    let got: Vec<_> =
                        landslide(wp, w, np).unwrap().map(|p| p.parts().to_vec()).collect();
                    let want = brute_force(wp, w, np);
                    let mut sorted = got.clone();
                    sorted.sort();
                    assert_eq!(sorted, want, "wp={wp} w={w} np={np}");
                    // No duplicates: sorted equality plus equal lengths covers it.
                    assert_eq!(got.len(), want.len());
                }
            }
        }
    }

    #[test]
    fn one_build_per_partition() {
        let mut ls = landslide(23, 5, 9).unwrap();
        let mut count = 0u64;
        while ls.next().is_some() {
            count += 1;
        }
        assert!(ls.builds() <= count + 1, "builds {} for {} partitions", ls.builds(), count);
    }

    proptest! {
        #[test]
        fn parts_are_valid_partitions(wp in 0u64..40, w in 0usize..7, np in 0u64..12) {
            prop_assume!(wp <= w as u64 * np);
            for p in landslide(wp, w, np).unwrap() {
                prop_assert_eq!(p.len(), w);
                prop_assert!(p.parts().windows(2).all(|x| x[0] <= x[1]));
                prop_assert!(p.parts().iter().all(|&x| u64::from(x) <= np));
                prop_assert_eq!(p.sum(), wp);
            }
        }
    }
}
