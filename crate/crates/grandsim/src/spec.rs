//! Colon-separated specification strings for codes and decoder variants.
//!
//! Codes: `rlc:n:k[:seed]`, `crc:n:k:<hex divisor>`, `bch:m:t`,
//! `file:<path>`. Variants: `hard`, `basic`, `full:m[:div]`, `oracle`.

use anyhow::{anyhow, bail, Context};
use orbgrand::code::{bch_code, crc_code, random_linear_code};
use orbgrand::decoder::{DecoderConfig, Variant};
use orbgrand::BinaryLinearCode;
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSpec {
    Rlc { n: usize, k: usize, seed: u64 },
    Crc { n: usize, k: usize, divisor: u128 },
    Bch { m: u32, t: u32 },
    File { path: PathBuf },
}

impl CodeSpec {
    pub fn build(&self) -> anyhow::Result<BinaryLinearCode> {
        match self {
            CodeSpec::Rlc { n, k, seed } => Ok(random_linear_code(*n, *k, *seed)?),
            CodeSpec::Crc { n, k, divisor } => Ok(crc_code(*n, *k, *divisor)?),
            CodeSpec::Bch { m, t } => Ok(bch_code(*m, *t)?),
            CodeSpec::File { path } => {
                let file = File::open(path).with_context(|| format!("opening {path:?}"))?;
                Ok(BinaryLinearCode::load(&mut BufReader::new(file))?)
            }
        }
    }
}

impl FromStr for CodeSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let fields: Vec<&str> = s.split(':').collect();
        match fields.as_slice() {
            ["rlc", n, k] => Ok(CodeSpec::Rlc {
                n: n.parse()?,
                k: k.parse()?,
                seed: 0,
            }),
            ["rlc", n, k, seed] => Ok(CodeSpec::Rlc {
                n: n.parse()?,
                k: k.parse()?,
                seed: seed.parse()?,
            }),
            ["crc", n, k, divisor] => Ok(CodeSpec::Crc {
                n: n.parse()?,
                k: k.parse()?,
                divisor: u128::from_str_radix(divisor.trim_start_matches("0x"), 16)
                    .context("divisor must be hex")?,
            }),
            ["bch", m, t] => Ok(CodeSpec::Bch {
                m: m.parse()?,
                t: t.parse()?,
            }),
            ["file", path @ ..] if !path.is_empty() => Ok(CodeSpec::File {
                path: PathBuf::from(path.join(":")),
            }),
            _ => bail!("unrecognized code spec `{s}` (rlc:n:k[:seed] | crc:n:k:hex | bch:m:t | file:path)"),
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSpec::Rlc { n, k, seed } => write!(f, "rlc:{n}:{k}:{seed}"),
            CodeSpec::Crc { n, k, divisor } => write!(f, "crc:{n}:{k}:{divisor:X}"),
            CodeSpec::Bch { m, t } => write!(f, "bch:{m}:{t}"),
            CodeSpec::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

/// A decoder selection for a campaign: the production variants plus the
/// exact-ML reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantSpec {
    Decoder(DecoderConfig),
    /// Exact soft-ML decoding via the priority-queue stream.
    Oracle,
}

impl VariantSpec {
    /// Short label used in CSV rows: `hard`, `basic`, `full3`, `full3div`,
    /// `oracle`.
    pub fn label(&self) -> String {
        match self {
            VariantSpec::Oracle => "oracle".into(),
            VariantSpec::Decoder(cfg) => match cfg.variant {
                Variant::Hard => "hard".into(),
                Variant::Basic => "basic".into(),
                Variant::Full { segments } => {
                    if cfg.divisibility_opt {
                        format!("full{segments}div")
                    } else {
                        format!("full{segments}")
                    }
                }
            },
        }
    }

    pub fn with_max_queries(self, max_queries: u64) -> Self {
        match self {
            VariantSpec::Oracle => VariantSpec::Oracle,
            VariantSpec::Decoder(cfg) => VariantSpec::Decoder(cfg.with_max_queries(max_queries)),
        }
    }
}

impl FromStr for VariantSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let fields: Vec<&str> = s.split(':').collect();
        let spec = match fields.as_slice() {
            ["hard"] => VariantSpec::Decoder(DecoderConfig::new(Variant::Hard)),
            ["basic"] => VariantSpec::Decoder(DecoderConfig::new(Variant::Basic)),
            ["oracle"] => VariantSpec::Oracle,
            ["full", m] => VariantSpec::Decoder(DecoderConfig::new(Variant::Full {
                segments: m.parse()?,
            })),
            ["full", m, "div"] => VariantSpec::Decoder(
                DecoderConfig::new(Variant::Full {
                    segments: m.parse()?,
                })
                .with_divisibility_opt(true),
            ),
            _ => {
                return Err(anyhow!(
                    "unrecognized variant `{s}` (hard | basic | full:m[:div] | oracle)"
                ))
            }
        };
        Ok(spec)
    }
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariantSpec::Oracle => write!(f, "oracle"),
            VariantSpec::Decoder(cfg) => match cfg.variant {
                Variant::Hard => write!(f, "hard"),
                Variant::Basic => write!(f, "basic"),
                Variant::Full { segments } => {
                    if cfg.divisibility_opt {
                        write!(f, "full:{segments}:div")
                    } else {
                        write!(f, "full:{segments}")
                    }
                }
            },
        }
    }
}
