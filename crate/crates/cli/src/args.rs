use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mrt_core::localsearch::Objective;
use mrt_core::netgraph::UncoveredMode;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "mrt",
    version,
    about = "Reconnection orderings for radial distribution networks"
)]
pub struct Cli {
    /// Directory receiving artifacts.
    #[arg(long, global = true, env = "MRT_OUT_DIR", default_value = "mrt-out")]
    pub out_dir: PathBuf,
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "MRT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Treatment of tree edges no switch covers: exclude or penalty.
    #[arg(long, global = true, env = "MRT_UNCOVERED", default_value = "exclude", value_parser = parse_mode)]
    #[serde(serialize_with = "display")]
    pub uncovered: UncoveredMode,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_mode(s: &str) -> Result<UncoveredMode, String> {
    s.parse()
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    s.parse()
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct NetInput {
    #[arg(long, env = "MRT_BUSES")]
    pub buses: PathBuf,
    #[arg(long, env = "MRT_LINES")]
    pub lines: PathBuf,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Check a network and print a summary.
    Validate(NetInput),
    /// Read a network and write it back normalized, with explicit failure weights.
    Ingest(NetInput),
    /// Merge light leaves and degree-2 vertices.
    Contract(ContractArgs),
    /// Place new switches greedily by exposure.
    AddSwitches(AddSwitchesArgs),
    /// Order the switches of a network, or the vertices of a hypergraph.
    Order(OrderArgs),
    /// Branch-exchange search over spanning trees.
    LocalSearch(LocalSearchArgs),
    /// Metrics, per-vertex expected outage and class means.
    Report(ReportArgs),
    /// Write a generated instance.
    Gen(GenArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ContractArgs {
    #[command(flatten)]
    pub input: NetInput,
    /// Leaves with demand below this (kW) are merged.
    #[arg(long, env = "MRT_THRESHOLD", default_value_t = 20.0)]
    pub threshold: f64,
    /// Scale the leaf-rule transfer by the parent's demand before the merge.
    #[arg(long)]
    pub pre_update: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct AddSwitchesArgs {
    #[command(flatten)]
    pub input: NetInput,
    /// Longest candidate switch (same unit as coordinates, normally meters).
    #[arg(long, env = "MRT_RADIUS", default_value_t = 1000.0)]
    pub radius: f64,
    /// Most switches to add.
    #[arg(long, short = 'k', env = "MRT_K", default_value_t = 20)]
    pub k: usize,
    /// Stop once this share of exposure is covered.
    #[arg(long, env = "MRT_TARGET", default_value_t = 0.9)]
    pub target: f64,
    /// Keep only the nearest candidates.
    #[arg(long, env = "MRT_CAP")]
    pub cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Greedy,
    Alpha,
    Exact,
    /// Switches in id order (report only).
    Identity,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Weights {
    /// b(e) = p(e)
    Rtime,
    /// b(e) = f(e) p(e)
    Saidi,
}

#[derive(Debug, Args, Serialize)]
pub struct OrderArgs {
    #[arg(
        long,
        env = "MRT_BUSES",
        requires = "lines",
        conflicts_with = "hypergraph"
    )]
    pub buses: Option<PathBuf>,
    #[arg(long, env = "MRT_LINES", requires = "buses")]
    pub lines: Option<PathBuf>,
    /// Hypergraph file instead of a network.
    #[arg(long, required_unless_present = "buses")]
    pub hypergraph: Option<PathBuf>,
    #[arg(long, value_enum, env = "MRT_SOLVER", default_value = "greedy")]
    pub solver: Solver,
    /// Edge weights when ordering a network.
    #[arg(long, value_enum, default_value = "rtime")]
    pub weights: Weights,
    /// α-point samples.
    #[arg(long, env = "MRT_SAMPLES", default_value_t = 100)]
    pub samples: usize,
    /// Pad to this uniformity before rounding (default: largest hyperedge).
    #[arg(long)]
    pub kernel_c: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct LocalSearchArgs {
    #[command(flatten)]
    pub input: NetInput,
    #[arg(long, env = "MRT_OBJECTIVE", default_value = "composite", value_parser = parse_objective)]
    #[serde(serialize_with = "display")]
    pub objective: Objective,
    /// Stop after this many accepted exchanges.
    #[arg(long, env = "MRT_MAX_STEPS", default_value_t = 100)]
    pub max_steps: usize,
    /// Leave the ΔA·ΔB term out of the product greedy.
    #[arg(long)]
    pub no_cross_term: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: NetInput,
    /// How the switches are ordered.
    #[arg(long, value_enum, default_value = "greedy")]
    pub solver: Solver,
    #[arg(long, value_enum, default_value = "rtime")]
    pub weights: Weights,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum WheelTree {
    Spoke,
    Wheel,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    /// Wheel network with hub root.
    Wheel {
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, value_enum, default_value = "wheel")]
        tree: WheelTree,
    },
    /// The 5-vertex network where lexicographic greedy is 7/6 off.
    GapExample,
    /// Unit grid with a comb tree.
    Grid {
        #[arg(long, default_value_t = 10)]
        rows: usize,
        #[arg(long, default_value_t = 10)]
        cols: usize,
    },
    /// Random tree plus random switches.
    RandomNetwork {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        extra: usize,
    },
    /// Random c-uniform hypergraph.
    RandomMssc {
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        c: usize,
    },
    /// Disjoint complete c-uniform blocks and their fractional LP point.
    IntegralityGap {
        #[arg(long, default_value_t = 3)]
        c: usize,
        #[arg(long, default_value_t = 7)]
        scale: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
    },
    /// A hypergraph with no network realization.
    NonMrt,
    /// Tree augmentation reduction of an input network.
    TapReduction {
        #[command(flatten)]
        input: NetInput,
        #[arg(long, default_value_t = 2000)]
        max_vertices: usize,
    },
}
