//! `perronet`: Perron communicability and edge recommendations from the
//! command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "perronet", version, about = "Perron communicability and edge sensitivity of multilayer networks")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Header `N L`, then `layer i j weight` lines.
    Multiplex,
    /// Header `N L`, then `k i l j weight` lines.
    Multilayer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Entry,
    Pair,
    Reciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    /// Unordered when edits touch both orientations, ordered otherwise.
    Auto,
    Ordered,
    Unordered,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, value_enum, global = true, default_value = "multiplex")]
    pub input_format: InputFormat,
    /// Inter-layer coupling weight of a multiplex.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, global = true)]
    pub directed: bool,
    /// Residual tolerance of the eigensolver.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Largest supra dimension for dense computations.
    #[arg(long, global = true, default_value_t = perronet::prelude::DEFAULT_DENSE_CAP)]
    pub dense_cap: usize,
    #[arg(long, value_enum, global = true, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Perron root, condition numbers and solver diagnostics.
    Spectrum(SpectrumArgs),
    /// Perron communicability, its bounds and layer centralities.
    Communicability(CommunicabilityArgs),
    /// Largest (or smallest) entries of the root sensitivity matrix.
    Sensitivity(SensitivityArgs),
    /// Rank edges to add (or strengthen) or to remove (or weaken).
    #[command(subcommand)]
    Rank(RankMode),
    /// Apply an edit to each listed edge and re-solve, with random baselines.
    Experiment(ExperimentArgs),
    /// Rewrite the input in another format.
    Convert(ConvertArgs),
}

impl Command {
    pub fn input(&self) -> &std::path::Path {
        match self {
            Command::Spectrum(a) => &a.input,
            Command::Communicability(a) => &a.input,
            Command::Sensitivity(a) => &a.input,
            Command::Rank(RankMode::Add { common, .. } | RankMode::Remove { common, .. }) => &common.input,
            Command::Experiment(a) => &a.input,
            Command::Convert(a) => &a.input,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Edge-list file; relative paths that do not exist are also tried under $PERRON_DATA_DIR.
    pub input: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CommunicabilityArgs {
    /// Edge-list file; relative paths that do not exist are also tried under $PERRON_DATA_DIR.
    pub input: PathBuf,
    /// Number of nodes in the versatility ranking.
    #[arg(long, default_value_t = 5)]
    pub top_k: usize,
    /// Comma-separated layer weights for versatility.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// Also report the total communicability 1ᵀ(exp(B) − I)1 (dense).
    #[arg(long)]
    pub total: bool,
    /// Also report hub and authority communicabilities.
    #[arg(long)]
    pub hub_authority: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SensitivityArgs {
    /// Edge-list file; relative paths that do not exist are also tried under $PERRON_DATA_DIR.
    pub input: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub top_k: usize,
    /// Restrict to the existing intra-layer edges.
    #[arg(long)]
    pub structured: bool,
    /// Report the smallest entries instead of the largest.
    #[arg(long)]
    pub smallest: bool,
    /// Report the first-order relative root change of deleting each edge.
    #[arg(long, conflicts_with_all = ["structured", "smallest"])]
    pub impact: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    /// Edge-list file; relative paths that do not exist are also tried under $PERRON_DATA_DIR.
    pub input: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub top_k: usize,
    /// Weight change used by --recompute.
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    /// Re-solve the eigenproblem for every ranked edge.
    #[arg(long)]
    pub recompute: bool,
    /// Restrict to existing intra-layer edges.
    #[arg(long)]
    pub structured: bool,
    #[arg(long, value_enum, default_value = "reciprocal")]
    pub scope: Scope,
    #[arg(long, value_enum, default_value = "auto")]
    pub pairing: PairingArg,
}

#[derive(Debug, Subcommand)]
pub enum RankMode {
    /// Edges whose insertion or strengthening raises the root most.
    Add {
        #[command(flatten)]
        common: RankArgs,
        /// Consider only absent edges.
        #[arg(long, conflicts_with = "structured")]
        absent_only: bool,
        #[arg(long)]
        allow_self_loops: bool,
    },
    /// Edges whose removal or weakening lowers the root least.
    Remove {
        #[command(flatten)]
        common: RankArgs,
        /// Recompute with a decrease by epsilon instead of a removal.
        #[arg(long)]
        decrease: bool,
        /// Also rank edges whose removal breaks strong connectivity.
        #[arg(long)]
        allow_disconnect: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ActionArg {
    Increase,
    Decrease,
    Remove,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineArg {
    /// Any position, present or absent.
    All,
    Existing,
    None,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Edge-list file; relative paths that do not exist are also tried under $PERRON_DATA_DIR.
    pub input: PathBuf,
    /// File of `i j k l` lines (edge from node i in layer k to node j in layer l), or `i j l` for intra-layer edges.
    #[arg(long, required_unless_present = "auto", conflicts_with = "auto")]
    pub edges: Option<PathBuf>,
    /// Use the top-k ranked edges for the action.
    #[arg(long)]
    pub auto: bool,
    #[arg(long, value_enum, default_value = "increase")]
    pub action: ActionArg,
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 5)]
    pub top_k: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Pool of the random baseline edges; defaults to all positions for increases, existing edges otherwise.
    #[arg(long, value_enum)]
    pub baseline: Option<BaselineArg>,
    #[arg(long, value_enum, default_value = "reciprocal")]
    pub scope: Scope,
    /// With --auto, restrict to existing intra-layer edges.
    #[arg(long)]
    pub structured: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConvertArgs {
    /// Edge-list file; relative paths that do not exist are also tried under $PERRON_DATA_DIR.
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub to: InputFormat,
    /// Keep only the largest connected component of the aggregate graph.
    #[arg(long)]
    pub largest_component: bool,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
