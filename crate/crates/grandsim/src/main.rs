//! Monte-Carlo campaign runner for GRAND/ORBGRAND decoders.

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use grandsim::{run_campaign, run_sweep, CampaignConfig, CodeSpec, SweepConfig, VariantSpec};
use orbgrand::channel::ReceivedBlock;
use orbgrand::decoder::{grand_decode, DEFAULT_MAX_QUERIES};
use orbgrand::oracle::exact_ml_decode;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "grandsim", version, about = "GRAND/ORBGRAND decoding campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run BLER-versus-SNR curves for one code.
    Simulate(SimulateArgs),
    /// Run a rate/length heatmap over random linear codes.
    Sweep(SweepArgs),
    /// Decode a single block from a file of soft values.
    Decode(DecodeArgs),
    /// Construct a code and write its code file.
    Gencode(GencodeArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML campaign config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Code spec: rlc:n:k[:seed] | crc:n:k:hex | bch:m:t | file:path.
    #[arg(long)]
    code: Option<String>,
    /// Comma-separated SNR grid in dB.
    #[arg(long, value_delimiter = ',')]
    snr: Vec<f64>,
    /// Trial budget per SNR point.
    #[arg(long)]
    trials: Option<u64>,
    /// Stop a point once every variant has this many block errors.
    #[arg(long)]
    min_errors: Option<u64>,
    /// Decoder variant (repeatable): hard | basic | full:m[:div] | oracle.
    #[arg(long = "variant")]
    variants: Vec<String>,
    /// Segment count for a bare `full` variant.
    #[arg(long)]
    segments: Option<usize>,
    /// Apply the offset-divisibility optimization to `full` variants.
    #[arg(long)]
    div_opt: bool,
    /// Abandonment budget per decode.
    #[arg(long)]
    max_queries: Option<u64>,
    /// Master seed for reproducible campaigns.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated code lengths.
    #[arg(long, value_delimiter = ',')]
    lengths: Vec<usize>,
    /// Comma-separated redundancy values n-k.
    #[arg(long, value_delimiter = ',')]
    redundancies: Vec<usize>,
    /// Single SNR in dB.
    #[arg(long)]
    snr: Option<f64>,
    /// Seed for drawing each cell's code.
    #[arg(long)]
    code_seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long = "variant")]
    variants: Vec<String>,
    #[arg(long)]
    max_queries: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    /// Code spec, as in `simulate`.
    #[arg(long)]
    code: String,
    /// Decoder variant.
    #[arg(long, default_value = "basic")]
    variant: String,
    /// File with one soft value (LLR) per line, length n.
    #[arg(long)]
    llr: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_QUERIES)]
    max_queries: u64,
}

#[derive(Args)]
struct GencodeArgs {
    /// Code spec to construct.
    #[arg(long)]
    code: String,
    /// Output code file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_output(out: Option<&PathBuf>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path).with_context(|| format!("creating {path:?}"))?);
            file.write_all(body.as_bytes())?;
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn expand_variants(variants: &[String], segments: Option<usize>, div_opt: bool) -> Vec<String> {
    variants
        .iter()
        .map(|v| {
            if v == "full" {
                let m = segments.unwrap_or(3);
                if div_opt {
                    format!("full:{m}:div")
                } else {
                    format!("full:{m}")
                }
            } else {
                v.clone()
            }
        })
        .collect()
}

fn load_config<T: serde::de::DeserializeOwned + Default>(path: Option<&PathBuf>) -> anyhow::Result<T> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {p:?}"))?;
            Ok(toml::from_str(&text)?)
        }
        None => Ok(T::default()),
    }
}

fn simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let mut cfg: CampaignConfig = load_config(args.config.as_ref())?;
    if let Some(code) = args.code {
        cfg.code = code;
    }
    if !args.snr.is_empty() {
        cfg.snr_db = args.snr;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if args.min_errors.is_some() {
        cfg.min_errors = args.min_errors;
    }
    if !args.variants.is_empty() {
        cfg.variants = args.variants;
    }
    cfg.variants = expand_variants(&cfg.variants, args.segments, args.div_opt);
    if let Some(q) = args.max_queries {
        cfg.max_queries = q;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    let result = run_campaign(&cfg)?;
    write_output(args.out.as_ref(), &result.csv_string())
}

fn sweep(args: SweepArgs) -> anyhow::Result<()> {
    let mut cfg: SweepConfig = load_config(args.config.as_ref())?;
    if !args.lengths.is_empty() {
        cfg.lengths = args.lengths;
    }
    if !args.redundancies.is_empty() {
        cfg.redundancies = args.redundancies;
    }
    if let Some(snr) = args.snr {
        cfg.snr_db = snr;
    }
    if let Some(s) = args.code_seed {
        cfg.code_seed = s;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if args.min_errors.is_some() {
        cfg.min_errors = args.min_errors;
    }
    if !args.variants.is_empty() {
        cfg.variants = args.variants;
    }
    if let Some(q) = args.max_queries {
        cfg.max_queries = q;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    let result = run_sweep(&cfg)?;
    write_output(args.out.as_ref(), &result.csv_string())
}

/// Exit code 2 distinguishes abandonment from decoding success.
fn decode(args: DecodeArgs) -> anyhow::Result<ExitCode> {
    let code = CodeSpec::from_str(&args.code)?.build()?;
    let text = std::fs::read_to_string(&args.llr).with_context(|| format!("reading {:?}", args.llr))?;
    let soft: Vec<f64> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.parse::<f64>().with_context(|| format!("bad soft value `{l}`")))
        .collect::<anyhow::Result<_>>()?;
    anyhow::ensure!(
        soft.len() == code.n(),
        "expected {} soft values, got {}",
        code.n(),
        soft.len()
    );
    let block = ReceivedBlock::from_soft(soft)?;
    let variant = VariantSpec::from_str(&args.variant)?.with_max_queries(args.max_queries);
    let outcome = match variant {
        VariantSpec::Decoder(cfg) => grand_decode(&code, &block, &cfg)?,
        VariantSpec::Oracle => exact_ml_decode(&code, &block, args.max_queries)?,
    };
    match outcome.word {
        Some(word) => {
            let bits: String = word.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect();
            println!("decoded {bits}");
            println!("queries {}", outcome.queries);
            println!("abandoned false");
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("queries {}", outcome.queries);
            println!("abandoned true");
            Ok(ExitCode::from(2))
        }
    }
}

fn gencode(args: GencodeArgs) -> anyhow::Result<()> {
    let code = CodeSpec::from_str(&args.code)?.build()?;
    let mut buf = Vec::new();
    code.save(&mut buf)?;
    write_output(args.out.as_ref(), &String::from_utf8(buf).expect("code file is ascii"))
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args).map(|()| ExitCode::SUCCESS),
        Command::Sweep(args) => sweep(args).map(|()| ExitCode::SUCCESS),
        Command::Decode(args) => decode(args),
        Command::Gencode(args) => gencode(args).map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
