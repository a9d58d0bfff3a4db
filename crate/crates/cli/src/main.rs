//! `pcpa`: reproducible experiments for projection-aggregation decoding of
//! Reed-Muller codes.
//!
//! Machine-readable results go to files (or stdout where noted); summaries go
//! to stderr. Exit status is 0 on success, 2 for usage errors and 3 for data,
//! format or I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use pcpa_core::Strategy;

mod commands;
mod manifest;
mod output;

#[derive(Parser)]
#[command(
    name = "pcpa",
    version,
    about = "Projection-aggregation decoding of Reed-Muller codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write every s-dimensional subspace of F2^m and print the count.
    Subspaces(SubspacesArgs),
    /// Build a collection of subspaces and print its r_S.
    Select(SelectArgs),
    /// Decode LLR rows read from a CSV file.
    Decode(DecodeArgs),
    /// Word error rate over a list of SNRs.
    Wer(WerArgs),
    /// Agreement frequencies of first-iteration estimates against r_ij.
    Freqmat(FreqmatArgs),
    /// Closed form and Monte Carlo estimate of the parity agreement probability.
    Theorem1(TheoremArgs),
}

#[derive(Args, Serialize)]
pub struct SubspacesArgs {
    #[arg(short)]
    pub m: usize,
    #[arg(short)]
    pub s: usize,
    /// Output file [default: $PCPA_OUT_DIR/subspaces_m<m>_s<s>.txt]
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct SelectArgs {
    #[arg(short)]
    pub m: usize,
    #[arg(short)]
    pub s: usize,
    /// Collection size.
    #[arg(short = 'k', long = "size")]
    pub size: usize,
    /// greedy_min_rs, random, spread_first or target_rs:<value>
    #[arg(long, default_value = "greedy_min_rs")]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file [default: $PCPA_OUT_DIR/collection_m<m>_s<s>_k<k>.txt]
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Which subspaces the decoder projects onto, and how it iterates.
#[derive(Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["full", "collection", "strategy"])))]
pub struct DecoderArgs {
    /// Every (r-1)-dimensional subspace (CPA).
    #[arg(long)]
    pub full: bool,
    /// Collection file as written by `select`.
    #[arg(long)]
    pub collection: Option<PathBuf>,
    /// Build the collection on the fly with this strategy; needs --size.
    #[arg(long, requires = "size")]
    pub strategy: Option<Strategy>,
    #[arg(short = 'k', long = "size")]
    pub size: Option<usize>,
    /// Seed for --strategy.
    #[arg(long, default_value_t = 0)]
    pub collection_seed: u64,
    #[arg(long, default_value_t = 3)]
    pub t_max: usize,
    /// Aggregation scale [default: 1 / collection size]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Stop when the hard decision repeats and is a codeword.
    #[arg(long)]
    pub early_stop: bool,
    /// Add the channel LLR to each aggregated value.
    #[arg(long)]
    pub channel_prior: bool,
    /// Min-sum instead of the exact tanh rule.
    #[arg(long)]
    pub min_sum: bool,
}

#[derive(Args, Serialize)]
pub struct DecodeArgs {
    #[arg(short)]
    pub r: usize,
    #[arg(short)]
    pub m: usize,
    /// CSV file with one LLR vector per row, `-` for stdin.
    #[arg(long)]
    pub llr: PathBuf,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    /// Also report the estimates of every iteration.
    #[arg(long)]
    pub record_estimates: bool,
    /// Output JSON file [default: stdout]
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct WerArgs {
    #[arg(short)]
    pub r: usize,
    #[arg(short)]
    pub m: usize,
    /// Comma-separated Eb/N0 values in dB.
    #[arg(long, value_delimiter = ',', required = true)]
    pub snr: Vec<f64>,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    /// Fixed number of trials per point.
    #[arg(long, conflicts_with_all = ["target_errors", "cap"])]
    pub trials: Option<u64>,
    /// Stop a point after this many word errors.
    #[arg(long, default_value_t = 100)]
    pub target_errors: u64,
    /// Trial cap per point when stopping on errors.
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Output prefix for .csv and .json [default: $PCPA_OUT_DIR/wer]
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct FreqmatArgs {
    #[arg(short)]
    pub r: usize,
    #[arg(short)]
    pub m: usize,
    #[arg(long, default_value_t = 2.0)]
    pub snr: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Output prefix for _p.csv, _r.csv and .json [default: $PCPA_OUT_DIR/freqmat]
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct TheoremArgs {
    #[arg(short)]
    pub s: usize,
    /// Dimension of the intersection.
    #[arg(short)]
    pub d: usize,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ambient dimension [default: 2s - d + 1]
    #[arg(short)]
    pub m: Option<usize>,
    /// Coset offset point.
    #[arg(short, default_value_t = 0)]
    pub z: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Subspaces(a) => commands::subspaces(a),
        Command::Select(a) => commands::select(a),
        Command::Decode(a) => commands::decode(a),
        Command::Wer(a) => commands::wer(a),
        Command::Freqmat(a) => commands::freqmat(a),
        Command::Theorem1(a) => commands::theorem1(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pcpa: {f}");
            ExitCode::from(f.code)
        }
    }
}
