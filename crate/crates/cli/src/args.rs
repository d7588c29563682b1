use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frt::metrics::FirstContactRule;
use frt::{PropagationMode, TieBreak};

pub const DEFAULT_DELTA_T: u64 = 20;

#[derive(Debug, Parser)]
#[command(
    name = "frt",
    version,
    about = "Flooding and Fastest Route Trees over temporal contact traces"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for synthetic generation; overrides the seed in a config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: available parallelism). Never changes results.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Frame length in seconds [default: 20].
    #[arg(long, global = true)]
    pub delta_t: Option<u64>,
    /// Propagation mode for simulate.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::OneHop)]
    pub mode: ModeArg,
}

impl GlobalArgs {
    pub fn delta_t(&self) -> u64 {
        self.delta_t.unwrap_or(DEFAULT_DELTA_T)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    OneHop,
    IntraFrame,
    Both,
}

impl ModeArg {
    pub fn modes(self) -> Vec<PropagationMode> {
        match self {
            ModeArg::OneHop => vec![PropagationMode::OneHopPerFrame],
            ModeArg::IntraFrame => vec![PropagationMode::IntraFrame],
            ModeArg::Both => PropagationMode::ALL.to_vec(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModeArg::OneHop => "one-hop",
            ModeArg::IntraFrame => "intra-frame",
            ModeArg::Both => "both",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic contact trace from a TOML config.
    Generate(GenerateArgs),
    /// Flood messages over a trace and write FRTs and the delay-record table.
    Simulate(SimulateArgs),
    /// Turn a delay-record table into distributions and summary statistics.
    Analyze(AnalyzeArgs),
    /// Tabulate several summaries side by side.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Rwp,
    Tlw,
    Bursty,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// TOML config with `model = "rwp" | "tlw" | "bursty"` and model fields.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in reference configuration instead of a config file.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Override the number of nodes.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Override the recorded duration in seconds (mobility models only).
    #[arg(long)]
    pub duration: Option<u64>,
    /// Trace file to write; the manifest goes to `<out>.manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreakArg {
    Permuted,
    LowestId,
}

impl From<TieBreakArg> for TieBreak {
    fn from(t: TieBreakArg) -> Self {
        match t {
            TieBreakArg::Permuted => TieBreak::Permuted,
            TieBreakArg::LowestId => TieBreak::LowestId,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FirstContactArg {
    Inclusive,
    Exclusive,
}

impl From<FirstContactArg> for FirstContactRule {
    fn from(r: FirstContactArg) -> Self {
        match r {
            FirstContactArg::Inclusive => FirstContactRule::Inclusive,
            FirstContactArg::Exclusive => FirstContactRule::Exclusive,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// Output directory; `--mode both` writes `one-hop/` and `intra-frame/` inside it.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// `all` or a comma-separated list of node labels.
    #[arg(long, default_value = "all")]
    pub roots: String,
    /// A count N of evenly spaced injection frames over the active timeline,
    /// or a comma-separated list of injection times in seconds (`40,` for one).
    #[arg(long, default_value = "50")]
    pub times: String,
    #[arg(long, value_enum, default_value_t = TieBreakArg::Permuted)]
    pub tie_break: TieBreakArg,
    #[arg(long, value_enum, default_value_t = FirstContactArg::Inclusive)]
    pub first_contact: FirstContactArg,
    /// Also write one CSV per tree under `frt/`.
    #[arg(long)]
    pub export_trees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Metric {
    DelayT0,
    DelayRoot,
    DelayFirstContact,
    ElapsedContact,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::DelayT0,
        Metric::DelayRoot,
        Metric::DelayFirstContact,
        Metric::ElapsedContact,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Metric::DelayT0 => "delay_t0",
            Metric::DelayRoot => "delay_root",
            Metric::DelayFirstContact => "delay_first_contact",
            Metric::ElapsedContact => "elapsed_contact",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Metric::ElapsedContact => "contact frames",
            _ => "seconds",
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Delay-record table written by `simulate`.
    #[arg(long)]
    pub delays: PathBuf,
    /// Tree table [default: trees.csv next to the delay table].
    #[arg(long)]
    pub trees: Option<PathBuf>,
    /// Source trace, enables the contact-time histogram and exact timeline length.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Metrics to analyze (repeatable) [default: all].
    #[arg(long = "metric", value_enum)]
    pub metrics: Vec<Metric>,
    #[arg(long, default_value_t = frt::stats::DEFAULT_LOG_FACTOR)]
    pub log_factor: f64,
    #[arg(long, default_value_t = frt::stats::DEFAULT_DEGREE_BIN)]
    pub degree_bin: f64,
    /// Tree level whose arrival times are histogrammed.
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    /// Half-width of the arrival-time windows in seconds.
    #[arg(long, default_value_t = 1800)]
    pub window: u64,
    /// Dataset name used by `compare` [default: trace file stem].
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Two or more `summary.json` files.
    #[arg(required = true, num_args = 2..)]
    pub summaries: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Metric::ElapsedContact)]
    pub metric: Metric,
    /// CSV output; the aligned table always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
