//! Guessing Random Additive Noise Decoding (GRAND) for moderate-redundancy
//! binary block codes.
//!
//! GRAND decodes by guessing: putative noise-effect patterns are generated in
//! decreasing likelihood order, subtracted from the demodulated word, and the
//! result is tested for code-book membership. The first hit is the decoding.
//! The code-book test is a syndrome check, so any binary linear code works
//! unchanged; only the pattern generator varies between decoder variants:
//!
//! * **hard** — patterns in increasing Hamming weight (no soft information),
//! * **basic ORBGRAND** — patterns in increasing logistic weight, i.e. the sum
//!   of flipped positions after sorting bits by reliability,
//! * **full ORBGRAND** — patterns in increasing reliability weight under a
//!   per-block quantized piece-wise linear model of the sorted reliability
//!   curve, recovering near-ML accuracy at high SNR.
//!
//! The crate provides the code constructions ([`code`]), the BPSK/AWGN channel
//! ([`channel`]), the pattern generators ([`pattern`]), the reliability-curve
//! fitting ([`model`]), the decoder loop ([`decoder`]) and, behind the
//! `oracle` feature (on by default), an exact soft-ML reference decoder
//! ([`oracle`]) used to validate decoding accuracy.
//!
//! Channel-facing code is generic over the scalar type `F` carrying soft
//! values (`f32` or `f64`); pattern generation and code-book tests are integer
//! and bit domain and take no scalar parameter.

pub mod channel;
pub mod code;
pub mod decoder;
pub mod galois;
mod gf2;
pub mod model;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod pattern;

pub use channel::{ChannelConfig, ReceivedBlock};
pub use code::{BinaryLinearCode, Syndrome};
pub use decoder::{grand_decode, DecodeOutcome, DecoderConfig, Variant};
pub use model::SegmentModel;
pub use pattern::NoisePattern;

/// Received block carrying `f32` soft values.
pub type ReceivedBlock32 = ReceivedBlock<f32>;
/// Received block carrying `f64` soft values.
pub type ReceivedBlock64 = ReceivedBlock<f64>;

/// Errors reported by code construction, channel transforms and decoding.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("infeasible partition: target {target} with {parts} parts bounded by {max_part}")]
    InfeasiblePartition {
        target: u64,
        parts: usize,
        max_part: u64,
    },
    #[error("non-finite soft value at position {0}")]
    NonFiniteInput(usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
