//! The GRAND query loop.
//!
//! One decode walks the configured pattern stream; each rank-domain pattern
//! is mapped to received positions through the block's sort permutation,
//! applied to the base syndrome of the hard-decision word (one column XOR
//! per flipped bit), and checked for zero. The first zero syndrome ends the
//! search; exhausting the query budget abandons the block, which campaigns
//! count as a block error. No guess is returned on abandonment.

use crate::channel::{transmit_with, ReceivedBlock};
use crate::code::{random_message, BinaryLinearCode};
use crate::model::{enforce_divisibility, fit_model};
use crate::pattern::{basic_order, full_order_with_sweep, hard_order, NoisePattern, SplitSweep};
use crate::{ChannelConfig, Error, Result};
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Pattern generator selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Hamming-weight order; uses no soft information.
    Hard,
    /// Logistic-weight order; uses only the reliability ranking.
    Basic,
    /// Reliability-weight order under a model fitted per block.
    Full { segments: usize },
}

/// Decoder configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoderConfig {
    pub variant: Variant,
    /// Round model offsets to multiples of their segment slopes and use the
    /// strided splitting sweep. Full variant only.
    pub divisibility_opt: bool,
    /// Abandonment budget: decoding stops after this many code-book queries.
    pub max_queries: u64,
}

/// The stock abandonment budget used throughout the campaigns.
pub const DEFAULT_MAX_QUERIES: u64 = 5_000_000;

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Basic,
            divisibility_opt: false,
            max_queries: DEFAULT_MAX_QUERIES,
        }
    }
}

impl DecoderConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            ..Self::default()
        }
    }

    pub fn with_max_queries(mut self, max_queries: u64) -> Self {
        self.max_queries = max_queries;
        self
    }

    pub fn with_divisibility_opt(mut self, on: bool) -> Self {
        self.divisibility_opt = on;
        self
    }
}

/// Outcome of one decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// The decoded codeword in received order; `None` when abandoned.
    pub word: Option<Vec<u8>>,
    /// Number of code-book queries performed, counting the first (empty
    /// pattern) query; a soft measure of decoding confidence.
    pub queries: u64,
    pub abandoned: bool,
}

/// Decodes one received block by serial guessing.
pub fn grand_decode<F: Float>(
    code: &BinaryLinearCode,
    block: &ReceivedBlock<F>,
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome> {
    if block.n() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            got: block.n(),
        });
    }
    let n = code.n();
    match cfg.variant {
        Variant::Hard => run_loop(code, block, hard_order(n, cfg.max_queries)),
        Variant::Basic => run_loop(code, block, basic_order(n, cfg.max_queries)),
        Variant::Full { segments } => {
            let mut model = fit_model(&block.sorted_reliability(), segments);
            let sweep = if cfg.divisibility_opt {
                model = enforce_divisibility(&model);
                SplitSweep::Strided
            } else {
                SplitSweep::Exhaustive
            };
            run_loop(
                code,
                block,
                full_order_with_sweep(n, &model, cfg.max_queries, sweep),
            )
        }
    }
}

fn run_loop<F: Float>(
    code: &BinaryLinearCode,
    block: &ReceivedBlock<F>,
    stream: impl Iterator<Item = NoisePattern>,
) -> Result<DecodeOutcome> {
    let base = code.syndrome(block.hard())?;
    let perm = block.perm();
    let mut queries = 0u64;
    for pattern in stream {
        queries += 1;
        let mut syndrome = base.clone();
        for &flip in pattern.flips() {
            code.syndrome_flip(&mut syndrome, perm[usize::from(flip) - 1] as usize);
        }
        if syndrome.is_zero() {
            let mut word = block.hard().to_vec();
            for &flip in pattern.flips() {
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

/// One Monte-Carlo trial outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Wrong decode or abandonment.
    pub block_error: bool,
    pub queries: u64,
    pub abandoned: bool,
}

/// Runs one end-to-end trial: encode a random message, transmit it at the
/// configured SNR using the caller's RNG stream, decode, and compare.
///
/// The channel seed field is ignored here; trial RNG streams are owned by
/// the campaign layer so that results are independent of scheduling.
pub fn decode_campaign_trial<F, R>(
    code: &BinaryLinearCode,
    channel: &ChannelConfig,
    decoder: &DecoderConfig,
    rng: &mut R,
) -> Result<TrialOutcome>
where
    F: Float,
    R: Rng + ?Sized,
    StandardNormal: Distribution<F>,
{
    let message = random_message(code.k(), rng);
    let codeword = code.encode(&message)?;
    let sigma = F::from(channel.sigma()).unwrap();
    let block = transmit_with(&codeword, sigma, rng);
    let outcome = grand_decode(code, &block, decoder)?;
    Ok(TrialOutcome {
        block_error: outcome.abandoned || outcome.word.as_deref() != Some(codeword.as_slice()),
        queries: outcome.queries,
        abandoned: outcome.abandoned,
    })
}
