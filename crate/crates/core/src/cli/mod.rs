//! Command-line front end. Every command that writes files also writes
//! `manifest.json` (tool version, argv, resolved configuration) into the
//! output directory, which defaults to `$VARIANT_LAB_OUT` or
//! `./variant-lab-out`.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Args, Parser, Subcommand};

use crate::engine::ProviderSpec;
use crate::rules::Variant;

pub use commands::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "VARIANT_LAB_OUT";

#[derive(Parser, Debug)]
#[command(name = "variant-lab", version, about = "Chess-variant rules, self-play and statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count leaf nodes of the legal-move tree.
    Perft(PerftArgs),
    /// Generate self-play games into games.jsonl.
    Selfplay(SelfplayArgs),
    /// Check that every game in a file replays legally to its stored result.
    Replay(ReplayArgs),
    /// Posterior comparison of two game sets.
    Outcomes(OutcomesArgs),
    /// Opening-tree entropy and candidate-move curves.
    Diversity(DiversityArgs),
    /// Relative entropy between two variants' opening trees.
    Kl(KlArgs),
    /// Extra candidate moves a reference prior needs under the combined prior.
    Candidates(CandidatesArgs),
    /// Fit material values to game outcomes.
    PieceValues(PieceValuesArgs),
    /// Frequency of variant-specific move types.
    Utilization(GamesInput),
    /// Game-length histograms.
    Lengths(LengthsArgs),
    /// Self-play from fixed openings with per-opening result tallies.
    OpeningEval(OpeningEvalArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = "variant-lab-out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct PerftArgs {
    #[arg(long, default_value = "classical")]
    pub variant: Variant,
    #[arg(long)]
    pub depth: u32,
    /// Start position; defaults to the initial array.
    #[arg(long)]
    pub fen: Option<String>,
    /// Print per-move counts as well.
    #[arg(long)]
    pub divide: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 800, value_parser = clap::value_parser!(u32).range(1..))]
    pub sims: u32,
    #[arg(long, default_value_t = 1.5)]
    pub cpuct: f64,
    #[arg(long, default_value_t = 0.3)]
    pub noise_alpha: f64,
    /// Root noise mix; off by default for evaluation sets.
    #[arg(long, default_value_t = 0.0)]
    pub noise_weight: f64,
    #[arg(long, default_value_t = 20)]
    pub softmax_plies: u32,
    #[arg(long, default_value_t = 512)]
    pub max_plies: u32,
    /// uniform or material.
    #[arg(long, default_value = "uniform")]
    pub prior: ProviderSpec,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Store visit counts for every ply.
    #[arg(long)]
    pub record_plies: bool,
    /// No progress lines on stderr.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SelfplayArgs {
    #[arg(long, default_value = "classical")]
    pub variant: Variant,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub games: u64,
    /// Files of start FENs, cycled through by game index.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub fens: Vec<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub games: Vec<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct GamesInput {
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub games: Vec<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct OutcomesArgs {
    /// Games of set A.
    #[arg(long, required = true)]
    pub a: PathBuf,
    /// Games of set B.
    #[arg(long, required = true)]
    pub b: PathBuf,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct TreeArgs {
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub plies: u32,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Enumerate every sequence instead of sampling.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug, Clone)]
pub struct DiversityArgs {
    #[arg(long, default_value = "classical")]
    pub variant: Variant,
    #[arg(long, default_value = "uniform")]
    pub prior: ProviderSpec,
    #[command(flatten)]
    pub tree: TreeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Variant whose prior generates the sequences.
    #[arg(long)]
    pub p_variant: Variant,
    /// Reference variant.
    #[arg(long)]
    pub q_variant: Variant,
    #[arg(long, default_value = "uniform")]
    pub p_prior: ProviderSpec,
    #[arg(long, default_value = "uniform")]
    pub q_prior: ProviderSpec,
}

#[derive(Args, Debug, Clone)]
pub struct KlArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub tree: TreeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct CandidatesArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub plies: u32,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct PieceValuesArgs {
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub games: Vec<PathBuf>,
    /// Skip positions with fewer plies played.
    #[arg(long, default_value_t = 20)]
    pub min_ply: usize,
    /// Take one random qualifying position per game.
    #[arg(long)]
    pub one_per_game: bool,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iterations: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct LengthsArgs {
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub games: Vec<PathBuf>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub width: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct OpeningEvalArgs {
    #[arg(long, default_value = "classical")]
    pub variant: Variant,
    /// Opening files, one FEN per line.
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub fens: Vec<PathBuf>,
    /// Games per opening.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub games: u64,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// One-line diagnostic naming the offending flag where clap knows it.
fn usage_line(e: &clap::Error) -> String {
    let rendered = e.to_string();
    let first = rendered
        .lines()
        .next()
        .unwrap_or("invalid arguments")
        .trim_start_matches("error: ")
        .to_string();
    match e.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(flag)) => format!("usage error: {first} [flag: {flag}]"),
        Some(ContextValue::Strings(flags)) => format!("usage error: {first} [flag: {}]", flags.join(", ")),
        _ => format!("usage error: {first}"),
    }
}

/// Runs the tool; returns 0 on success, 1 on a usage error, 2 on a data error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    eprint!("{e}");
                    1
                }
                _ => {
                    eprintln!("{}", usage_line(&e));
                    1
                }
            };
        }
    };
    let argv: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::dispatch(&cli.command, &argv) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
