//! Deterministic parallel Monte-Carlo campaigns.
//!
//! Every trial owns a ChaCha stream derived from the master seed, the cell
//! index (one cell per code/SNR combination) and the trial index, so results
//! are byte-identical for any worker count and all decoder variants of a
//! campaign see the same noise realizations — paired comparisons come for
//! free. Trials run in fixed-size batches; the stopping rule (a minimum
//! block-error count per variant) is evaluated only at batch boundaries,
//! which keeps early stopping deterministic too.

use crate::spec::{CodeSpec, VariantSpec};
use anyhow::Context;
use orbgrand::channel::{snr_db_to_sigma, transmit_with};
use orbgrand::code::random_message;
use orbgrand::decoder::{grand_decode, DEFAULT_MAX_QUERIES};
use orbgrand::oracle::exact_ml_decode;
use orbgrand::BinaryLinearCode;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

const BATCH: u64 = 1024;

/// Campaign description; the string fields hold the same spec syntax the CLI
/// accepts so a config echoes verbatim into the CSV header.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampaignConfig {
    /// Code spec, e.g. `rlc:64:52:1`.
    pub code: String,
    /// SNR grid in dB (20 log10(1/sigma) convention).
    pub snr_db: Vec<f64>,
    /// Trial budget per SNR point.
    pub trials: u64,
    /// Stop a point early once every variant has this many block errors.
    pub min_errors: Option<u64>,
    /// Decoder variants, e.g. `["basic", "full:3", "oracle"]`.
    pub variants: Vec<String>,
    /// Abandonment budget per decode.
    pub max_queries: u64,
    /// Master seed; everything else derives from it.
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    pub workers: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            code: "rlc:64:52:1".into(),
            snr_db: vec![6.0],
            trials: 10_000,
            min_errors: None,
            variants: vec!["basic".into()],
            max_queries: DEFAULT_MAX_QUERIES,
            seed: 1,
            workers: 0,
        }
    }
}

/// Rate/length sweep description: RLCs over a grid of lengths and
/// redundancies at one SNR.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub lengths: Vec<usize>,
    pub redundancies: Vec<usize>,
    pub snr_db: f64,
    /// Seed for drawing each cell's random linear code.
    pub code_seed: u64,
    pub trials: u64,
    pub min_errors: Option<u64>,
    pub variants: Vec<String>,
    pub max_queries: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            lengths: vec![32, 64, 128],
            redundancies: vec![4, 8, 12, 16, 20],
            snr_db: 9.8,
            code_seed: 1,
            trials: 100_000,
            min_errors: Some(100),
            variants: vec!["basic".into()],
            max_queries: DEFAULT_MAX_QUERIES,
            seed: 1,
            workers: 0,
        }
    }
}

/// Aggregates for one (variant, code, SNR) point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointStats {
    pub variant: String,
    pub n: usize,
    pub k: usize,
    pub snr_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub abandonments: u64,
    pub mean_queries: f64,
    pub p99_queries: u64,
    pub max_queries_observed: u64,
    pub seconds: f64,
}

impl PointStats {
    pub fn bler(&self) -> f64 {
        self.block_errors as f64 / self.trials as f64
    }

    pub fn abandonment_rate(&self) -> f64 {
        self.abandonments as f64 / self.trials as f64
    }
}

/// A finished campaign: per-point rows plus the config echo for the CSV
/// header.
#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub rows: Vec<PointStats>,
    pub config_echo: String,
}

impl CampaignResult {
    /// Fixed-column CSV with the configuration as `#` comments.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        for line in self.config_echo.lines() {
            writeln!(out, "# {line}")?;
        }
        writeln!(
            out,
            "variant,n,k,snr_db,trials,block_errors,bler,mean_queries,p99_queries,abandonment_rate,seconds"
        )?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{:.3},{},{},{:.6e},{:.3},{},{:.6e},{:.3}",
                r.variant,
                r.n,
                r.k,
                r.snr_db,
                r.trials,
                r.block_errors,
                r.bler(),
                r.mean_queries,
                r.p99_queries,
                r.abandonment_rate(),
                r.seconds
            )?;
        }
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Rows for one variant, in emission order.
    pub fn rows_for(&self, variant: &str) -> Vec<&PointStats> {
        self.rows.iter().filter(|r| r.variant == variant).collect()
    }
}

/// One decode result inside a trial.
#[derive(Debug, Clone, Copy)]
struct TrialDecode {
    error: bool,
    queries: u32,
    abandoned: bool,
}

fn parse_variants(specs: &[String], max_queries: u64) -> anyhow::Result<Vec<VariantSpec>> {
    specs
        .iter()
        .map(|s| {
            VariantSpec::from_str(s)
                .map(|v| v.with_max_queries(max_queries))
                .with_context(|| format!("variant `{s}`"))
        })
        .collect()
}

/// Runs one trial: one message, one noise realization, every variant.
fn run_trial(
    code: &BinaryLinearCode,
    sigma: f64,
    variants: &[VariantSpec],
    max_queries: u64,
    seed: u64,
    cell: u64,
    trial: u64,
) -> Vec<TrialDecode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((cell << 40) | trial);
    let message = random_message(code.k(), &mut rng);
    let codeword = code.encode(&message).expect("message length matches k");
    let block = transmit_with::<f64, _>(&codeword, sigma, &mut rng);
    variants
        .iter()
        .map(|variant| {
            let outcome = match variant {
                VariantSpec::Decoder(cfg) => {
                    grand_decode(code, &block, cfg).expect("block length matches n")
                }
                VariantSpec::Oracle => {
                    exact_ml_decode(code, &block, max_queries).expect("block length matches n")
                }
            };
            TrialDecode {
                error: outcome.abandoned || outcome.word.as_deref() != Some(codeword.as_slice()),
                queries: outcome.queries as u32,
                abandoned: outcome.abandoned,
            }
        })
        .collect()
}

struct CellAccumulator {
    errors: u64,
    abandonments: u64,
    queries: Vec<u32>,
}

/// Shared cell runner: one code at one SNR, all variants paired.
#[allow(clippy::too_many_arguments)]
fn run_cell(
    pool: &rayon::ThreadPool,
    code: &BinaryLinearCode,
    snr_db: f64,
    variants: &[VariantSpec],
    max_queries: u64,
    trials: u64,
    min_errors: Option<u64>,
    seed: u64,
    cell: u64,
) -> Vec<PointStats> {
    let sigma = snr_db_to_sigma(snr_db);
    let mut acc: Vec<CellAccumulator> = variants
        .iter()
        .map(|_| CellAccumulator {
            errors: 0,
            abandonments: 0,
            queries: Vec::new(),
        })
        .collect();
    let start = Instant::now();
    let mut run = 0u64;
    while run < trials {
        let batch_end = (run + BATCH).min(trials);
        let batch: Vec<Vec<TrialDecode>> = pool.install(|| {
            (run..batch_end)
                .into_par_iter()
                .map(|t| run_trial(code, sigma, variants, max_queries, seed, cell, t))
                .collect()
        });
        for decodes in &batch {
            for (a, d) in acc.iter_mut().zip(decodes) {
                a.errors += u64::from(d.error);
                a.abandonments += u64::from(d.abandoned);
                a.queries.push(d.queries);
            }
        }
        run = batch_end;
        if let Some(min) = min_errors {
            if acc.iter().all(|a| a.errors >= min) {
                break;
            }
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    variants
        .iter()
        .zip(acc)
        .map(|(variant, a)| {
            let mut sorted = a.queries.clone();
            sorted.sort_unstable();
            let p99 = sorted[((sorted.len() as f64 * 0.99).ceil() as usize)
                .saturating_sub(1)
                .min(sorted.len() - 1)];
            PointStats {
                variant: variant.label(),
                n: code.n(),
                k: code.k(),
                snr_db,
                trials: run,
                block_errors: a.errors,
                abandonments: a.abandonments,
                mean_queries: a.queries.iter().map(|&q| q as f64).sum::<f64>() / run as f64,
                p99_queries: u64::from(p99),
                max_queries_observed: u64::from(*sorted.last().unwrap()),
                seconds,
            }
        })
        .collect()
}

fn build_pool(workers: usize) -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        builder = builder.num_threads(workers);
    }
    Ok(builder.build()?)
}

/// BLER-versus-SNR campaign over one code.
pub fn run_campaign(cfg: &CampaignConfig) -> anyhow::Result<CampaignResult> {
    anyhow::ensure!(!cfg.snr_db.is_empty(), "empty SNR grid");
    anyhow::ensure!(cfg.trials >= 1, "need at least one trial");
    anyhow::ensure!(cfg.max_queries >= 1, "need at least one query");
    let code = CodeSpec::from_str(&cfg.code)?.build()?;
    let variants = parse_variants(&cfg.variants, cfg.max_queries)?;
    anyhow::ensure!(!variants.is_empty(), "no decoder variants");
    let pool = build_pool(cfg.workers)?;
    let mut rows = Vec::new();
    for (snr_idx, &snr_db) in cfg.snr_db.iter().enumerate() {
        rows.extend(run_cell(
            &pool,
            &code,
            snr_db,
            &variants,
            cfg.max_queries,
            cfg.trials,
            cfg.min_errors,
            cfg.seed,
            snr_idx as u64,
        ));
    }
    Ok(CampaignResult {
        rows,
        config_echo: format!(
            "grandsim simulate\n{}",
            toml::to_string(cfg).expect("config serializes")
        ),
    })
}

/// Rate/length heatmap campaign: random linear codes over a grid of
/// (length, redundancy) cells at one SNR.
pub fn run_sweep(cfg: &SweepConfig) -> anyhow::Result<CampaignResult> {
    anyhow::ensure!(
        !cfg.lengths.is_empty() && !cfg.redundancies.is_empty(),
        "empty sweep grid"
    );
    let variants = parse_variants(&cfg.variants, cfg.max_queries)?;
    anyhow::ensure!(!variants.is_empty(), "no decoder variants");
    let pool = build_pool(cfg.workers)?;
    let mut rows = Vec::new();
    let mut cell = 0u64;
    for &n in &cfg.lengths {
        for &r in &cfg.redundancies {
            anyhow::ensure!(r < n, "redundancy {r} must be below length {n}");
            let code = orbgrand::code::random_linear_code(n, n - r, cfg.code_seed + cell)?;
            rows.extend(run_cell(
                &pool,
                &code,
                cfg.snr_db,
                &variants,
                cfg.max_queries,
                cfg.trials,
                cfg.min_errors,
                cfg.seed,
                cell,
            ));
            cell += 1;
        }
    }
    Ok(CampaignResult {
        rows,
        config_echo: format!(
            "grandsim sweep\n{}",
            toml::to_string(cfg).expect("config serializes")
        ),
    })
}
