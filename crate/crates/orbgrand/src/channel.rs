//! BPSK modulation, AWGN corruption and reliability extraction.
//!
//! # SNR convention
//!
//! Soft values are `Y = mod(c) + N` with unit-energy antipodal symbols
//! `mod(c) = 2c - 1` and `N ~ Normal(0, sigma^2)` per sample. The dB scale is
//!
//! ```text
//! SNR_dB = 20 * log10(1 / sigma),
//! ```
//!
//! so the hard-decision bit flip probability is `Q(1/sigma)`; 9.8 dB gives
//! `1/sigma = 10^0.49 ≈ 3.09` and a flip probability of 1e-3. All campaign
//! SNR figures in this crate use this convention.
//!
//! For BPSK over AWGN the log-likelihood ratio is proportional to `Y`, and
//! decoding orders depend only on the relative size of reliabilities, so the
//! channel reports `|Y|` directly as the reliability instead of the scaled
//! LLR magnitude `2|Y|/sigma^2`.

use crate::{Error, Result};
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

/// AWGN channel configuration: SNR in dB (see the module docs for the
/// convention) and the seed driving noise generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub snr_db: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(snr_db: f64, seed: u64) -> Self {
        Self { snr_db, seed }
    }

    /// Per-sample noise standard deviation `10^(-snr_db / 20)`.
    pub fn sigma(&self) -> f64 {
        snr_db_to_sigma(self.snr_db)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub fn snr_db_to_sigma(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 20.0)
}

/// Antipodal mapping `c -> 2c - 1`: bit 0 to -1, bit 1 to +1.
pub fn bpsk_modulate<F: Float>(codeword: &[u8]) -> Vec<F> {
    codeword
        .iter()
        .map(|&c| if c != 0 { F::one() } else { -F::one() })
        .collect()
}

/// One received block: soft values with their demodulation products.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBlock<F> {
    soft: Vec<F>,
    reliability: Vec<F>,
    hard: Vec<u8>,
    perm: Vec<u32>,
}

impl<F: Float> ReceivedBlock<F> {
    /// Demodulates raw soft values (channel outputs or LLRs): hard bit 1 for
    /// non-negative values, reliability is the magnitude, and the rank
    /// permutation sorts reliabilities ascending with ties broken by
    /// received position.
    ///
    /// Soft values must not be NaN; an exact 0 demodulates to bit 1.
    pub fn from_soft(soft: Vec<F>) -> Result<Self> {
        if let Some(pos) = soft.iter().position(|y| y.is_nan()) {
            return Err(Error::NonFiniteInput(pos));
        }
        let reliability: Vec<F> = soft.iter().map(|y| y.abs()).collect();
        let hard: Vec<u8> = soft.iter().map(|y| u8::from(*y >= F::zero())).collect();
        let perm = rank_permutation(&reliability);
        Ok(Self {
            soft,
            reliability,
            hard,
            perm,
        })
    }

    pub fn n(&self) -> usize {
        self.soft.len()
    }

    pub fn soft(&self) -> &[F] {
        &self.soft
    }

    /// Per-bit reliability `|Y_i|` in received order.
    pub fn reliability(&self) -> &[F] {
        &self.reliability
    }

    /// Hard decisions in received order.
    pub fn hard(&self) -> &[u8] {
        &self.hard
    }

    /// Rank permutation: `perm()[r]` is the 0-based received index of the
    /// `(r+1)`-th least reliable bit.
    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    /// Reliabilities in ascending rank order, i.e. the sorted curve the
    /// model fitting consumes.
    pub fn sorted_reliability(&self) -> Vec<F> {
        self.perm
            .iter()
            .map(|&i| self.reliability[i as usize])
            .collect()
    }
}

/// Transmits a codeword over the configured channel. Deterministic: the same
/// configuration always produces the same block.
pub fn transmit<F>(codeword: &[u8], cfg: &ChannelConfig) -> ReceivedBlock<F>
where
    F: Float,
    StandardNormal: Distribution<F>,
{
    let sigma = F::from(cfg.sigma()).unwrap();
    transmit_with(codeword, sigma, &mut cfg.rng())
}

/// Transmits a codeword with a caller-supplied noise source, the form used
/// by campaign trials where each trial owns an RNG stream.
pub fn transmit_with<F, R>(codeword: &[u8], sigma: F, rng: &mut R) -> ReceivedBlock<F>
where
    F: Float,
    R: Rng + ?Sized,
    StandardNormal: Distribution<F>,
{
    let soft = if sigma > F::zero() {
        let noise = Normal::new(F::zero(), sigma).expect("finite positive sigma");
        codeword
            .iter()
            .map(|&c| {
                let s = if c != 0 { F::one() } else { -F::one() };
                s + noise.sample(rng)
            })
            .collect()
    } else {
        bpsk_modulate(codeword)
    };
    ReceivedBlock::from_soft(soft).expect("gaussian samples are finite")
}

/// Stable ascending sort of reliabilities: element `r` of the result is the
/// 0-based input index of the `(r+1)`-th smallest value.
pub fn rank_permutation<F: Float>(reliability: &[F]) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..reliability.len() as u32).collect();
    perm.sort_by(|&a, &b| {
        reliability[a as usize]
            .partial_cmp(&reliability[b as usize])
            .expect("reliabilities are not NaN")
            .then(a.cmp(&b))
    });
    perm
}

/// A posteriori probability that a hard decision with the given LLR
/// magnitude is wrong: `e^-x / (1 + e^-x)`, strictly decreasing from 1/2 at
/// x = 0 towards 0.
pub fn posterior_flip_probability<F: Float>(llr_magnitude: F) -> F {
    debug_assert!(llr_magnitude >= F::zero());
    let e = (-llr_magnitude).exp();
    e / (F::one() + e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn modulation_points() {
        assert_eq!(bpsk_modulate::<f64>(&[0]), vec![-1.0]);
        assert_eq!(bpsk_modulate::<f64>(&[1]), vec![1.0]);
        assert_eq!(bpsk_modulate::<f64>(&[0, 1, 1]), vec![-1.0, 1.0, 1.0]);
    }

    #[test]
    fn rank_permutation_examples() {
        assert_eq!(rank_permutation(&[0.9, 0.1, 0.5]), vec![1, 2, 0]);
        assert_eq!(rank_permutation(&[0.4, 0.4, 0.4]), vec![0, 1, 2]);
    }

    #[test]
    fn noiseless_limit_reproduces_codeword() {
        let cw = vec![1, 0, 1, 1, 0];
        let block: ReceivedBlock<f64> = transmit(&cw, &ChannelConfig::new(f64::INFINITY, 1));
        assert_eq!(block.hard(), cw.as_slice());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let block = transmit_with::<f32, _>(&cw, 0.0, &mut rng);
        assert_eq!(block.hard(), cw.as_slice());
    }

    #[test]
    fn transmit_is_deterministic_per_seed() {
        let cw = vec![0, 1, 0, 0, 1, 1, 0, 1];
        let cfg = ChannelConfig::new(3.0, 99);
        let a: ReceivedBlock<f64> = transmit(&cw, &cfg);
        let b: ReceivedBlock<f64> = transmit(&cw, &cfg);
        assert_eq!(a, b);
        let c: ReceivedBlock<f64> = transmit(&cw, &ChannelConfig::new(3.0, 100));
        assert_ne!(a, c);
    }

    #[test]
    fn zero_soft_value_demodulates_to_one() {
        let block = ReceivedBlock::from_soft(vec![0.0f64, -0.5]).unwrap();
        assert_eq!(block.hard(), &[1, 0]);
    }

    #[test]
    fn nan_soft_value_is_rejected() {
        assert!(matches!(
            ReceivedBlock::from_soft(vec![0.1f64, f64::NAN]),
            Err(Error::NonFiniteInput(1))
        ));
    }

    #[test]
    fn posterior_flip_probability_examples() {
        assert!((posterior_flip_probability(0.0f64) - 0.5).abs() < 1e-12);
        assert!((posterior_flip_probability(3f64.ln()) - 0.25).abs() < 1e-12);
        assert!(posterior_flip_probability(40.0f64) < 1e-12);
        assert!((posterior_flip_probability(0.0f32) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn empirical_ber_matches_gaussian_tail() {
        // Q(1/sigma) within 3 standard errors over a million bits.
        let q = |x: f64| 0.5 * libm::erfc(x / std::f64::consts::SQRT_2);
        let cw = vec![0u8; 1000];
        for (sigma, seed) in [(0.5, 1u64), (0.33, 2), (0.25, 3)] {
            let p = q(1.0 / sigma);
            let trials = 1000;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut flips = 0u64;
            for _ in 0..trials {
                let block = transmit_with::<f64, _>(&cw, sigma, &mut rng);
                flips += block.hard().iter().filter(|&&b| b != 0).count() as u64;
            }
            let n_bits = (trials * cw.len()) as f64;
            let se = (p * (1.0 - p) / n_bits).sqrt();
            let observed = flips as f64 / n_bits;
            assert!(
                (observed - p).abs() < 3.0 * se,
                "sigma={sigma}: observed {observed:.3e}, expected {p:.3e} +- {:.1e}",
                3.0 * se
            );
        }
    }

    proptest! {
        #[test]
        fn permuted_reliabilities_are_sorted(values in proptest::collection::vec(0.0f64..10.0, 1..200)) {
            let perm = rank_permutation(&values);
            let sorted: Vec<f64> = perm.iter().map(|&i| values[i as usize]).collect();
            prop_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
            let mut indices: Vec<u32> = perm.clone();
            indices.sort_unstable();
            prop_assert!(indices.iter().enumerate().all(|(i, &p)| i as u32 == p));
        }

        #[test]
        fn flip_probability_is_decreasing(a in 0.0f64..30.0, b in 0.0f64..30.0) {
            prop_assume!(a < b);
            let (pa, pb) = (posterior_flip_probability(a), posterior_flip_probability(b));
            prop_assert!(pa > pb);
            prop_assert!(pa <= 0.5 && pb > 0.0);
        }
    }
}
