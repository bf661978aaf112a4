mod commands;
mod dot;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Distances between rooted trees and merge trees.
#[derive(Debug, Parser)]
#[command(name = "treemetrics", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance between two trees, or a decision at a fixed threshold.
    Dist(DistArgs),
    /// Build the partition gadget for a multiset and check the 1-vs-3 gap.
    Gadget(GadgetArgs),
    /// Compare interleaving and merge Frechet-Like distances on random pairs.
    CheckLemma(CheckArgs),
    /// Generate seeded random merge trees.
    GenRandom(GenArgs),
    /// Render trees, and optionally a correspondence, as Graphviz DOT.
    ExportDot(DotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    FlMerge,
    FlEuclid,
    Interleaving,
    Edit,
    Alignment,
    Hausdorff,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// First tree (JSON or extended Newick).
    pub first: PathBuf,
    /// Second tree.
    pub second: PathBuf,
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    /// Decide whether a correspondence of at most this cost exists (fl-*).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Decide whether a good map with this shift exists (interleaving).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Sampling step for geometric metrics.
    #[arg(long, default_value_t = 0.1)]
    pub resolution: f64,
    /// Relabel, insert and delete costs.
    #[arg(long, default_value = "1,1,1")]
    pub costs: String,
    /// Translate the second drawing so both roots coincide (fl-euclid).
    #[arg(long)]
    pub align_roots: bool,
    /// Largest node degree accepted by the alignment metric.
    #[arg(long, default_value_t = treemetrics_core::classic::DEFAULT_DEGREE_BOUND)]
    pub degree_bound: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GadgetArgs {
    /// Comma-separated positive integers.
    #[arg(long = "X")]
    pub x: String,
    #[arg(long)]
    pub k: usize,
    /// Length of the leaf edges; defaults to ten times the element sum.
    #[arg(long = "A")]
    pub a: Option<f64>,
    /// Length of the trunk; defaults to ten times the element sum.
    #[arg(long = "B")]
    pub b: Option<f64>,
    /// Allow any number of elements instead of exactly 3k.
    #[arg(long)]
    pub relaxed: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SummaryFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 500)]
    pub count: usize,
    /// Upper bound on the leaves of each random tree.
    #[arg(long, default_value_t = 6)]
    pub leaves: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SummaryFormat::Json)]
    pub format: SummaryFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeFormatArg {
    Json,
    Newick,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact number of leaves.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub leaves: u64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = TreeFormatArg::Json)]
    pub format: TreeFormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DotArgs {
    /// One or two trees, or a single gadget file holding both.
    #[arg(required = true, num_args = 1..=2)]
    pub files: Vec<PathBuf>,
    /// Distance report or correspondence whose pairs are overlaid.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dist(a) => commands::dist(&a),
        Command::Gadget(a) => commands::gadget(&a),
        Command::CheckLemma(a) => commands::check_lemma(&a),
        Command::GenRandom(a) => commands::gen_random(&a),
        Command::ExportDot(a) => commands::export_dot(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
