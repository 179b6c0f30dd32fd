//! Command-line surface: argument parsing and conversion into the typed,
//! replayable command specs stored in run manifests.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mapland_core::instance::{DEFAULT_HIGH, DEFAULT_LOW};
use mapland_core::landscape::GraphCaps;
use mapland_core::search::NeighborhoodMode;
use mapland_core::Error;

use crate::manifest::CommandSpec;

/// Default refusal threshold for generated instance bytes (1 GiB).
pub const DEFAULT_MAX_BYTES: u64 = 1 << 30;

#[derive(Parser, Debug)]
#[command(
    name = "mapland",
    version,
    about = "Search and fitness-landscape experiments on multidimensional assignment problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Worker threads for parallel work (defaults to all cores). Outputs do
    /// not depend on this setting.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Record wall-clock milliseconds in CSV outputs and manifests. Off by
    /// default so repeated runs produce byte-identical files.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Generate seeded random instances (binary .mapc files + JSON sidecars).
    Generate(GenerateArgs),
    /// Run one steepest descent on one instance and report the sink.
    Solve(SolveArgs),
    /// Compare two algorithms over a batch of instances from shared starts.
    Compare(CompareArgs),
    /// Multi-start search on one instance with landscape recording.
    Multistart(MultistartArgs),
    /// Record and export the improving-move digraph of one instance.
    Explore(ExploreArgs),
    /// Verify the N=2 hypercube structure of the move graph.
    VerifyHypercube(VerifyHypercubeArgs),
    /// Fitness-distance correlation of explored sinks over a batch.
    AnalyzeFdc(AnalyzeFdcArgs),
    /// Re-execute a command from a previously written manifest.
    Rerun(RerunArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Number of dimensions D (>= 3).
    #[arg(long)]
    pub dims: usize,
    /// Cardinality N per dimension (>= 2).
    #[arg(long)]
    pub card: usize,
    /// How many instances to generate (per-instance seeds are seed + i).
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Smallest coefficient value (inclusive).
    #[arg(long, default_value_t = DEFAULT_LOW)]
    pub low: i64,
    /// Largest coefficient value (inclusive).
    #[arg(long, default_value_t = DEFAULT_HIGH)]
    pub high: i64,
    /// Refuse generation when the estimated total output exceeds this many
    /// bytes (approximately 8 * N^D per instance).
    #[arg(long, default_value_t = DEFAULT_MAX_BYTES)]
    pub max_bytes: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Instance file (.mapc).
    #[arg(long)]
    pub instance: PathBuf,
    /// Algorithm: vlsn, vlsn-nod1, vns:K, or vns-all.
    #[arg(long, default_value = "vlsn")]
    pub algo: String,
    /// Starting solution: "identity", "random", or an explicit encoding
    /// such as "2,1|1,2".
    #[arg(long, default_value = "identity")]
    pub start: String,
    /// Seed for --start random.
    #[arg(long, default_value_t = 0)]
    pub start_seed: u64,
    /// Verify the sink against the exhaustive optimum when the solution
    /// space has at most this many solutions (0 disables the check).
    #[arg(long, default_value_t = 10_000)]
    pub check_optimum_cap: u64,
    /// Also explore the improving-move digraph from the start and export it
    /// (requires --out).
    #[arg(long)]
    pub export_graph: bool,
    #[arg(long, default_value_t = GraphCaps::default().max_nodes)]
    pub node_cap: u64,
    #[arg(long, default_value_t = GraphCaps::default().max_edges)]
    pub edge_cap: u64,
    /// Output directory for solve.csv (and graph exports).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Directory of .mapc instances (every instance is used, sorted by
    /// file name).
    #[arg(long)]
    pub batch: PathBuf,
    /// First algorithm (baseline).
    #[arg(long)]
    pub algo_a: String,
    /// Second algorithm; deltas are reported as B - A.
    #[arg(long)]
    pub algo_b: String,
    /// Per-instance start seed base (instance i starts from seed base + i).
    #[arg(long, default_value_t = 0)]
    pub start_seed: u64,
    #[arg(long, default_value_t = GraphCaps::default().max_nodes)]
    pub node_cap: u64,
    #[arg(long, default_value_t = GraphCaps::default().max_edges)]
    pub edge_cap: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct MultistartArgs {
    /// Instance file (.mapc).
    #[arg(long)]
    pub instance: PathBuf,
    /// Algorithm: vlsn, vlsn-nod1, vns:K, or vns-all.
    #[arg(long, default_value = "vlsn")]
    pub algo: String,
    /// Start strategy.
    #[arg(long, value_enum, default_value_t = StartsArg::Random)]
    pub starts: StartsArg,
    /// Number of random starts (defaults to N^(D-1), mirroring the grid
    /// size). Only meaningful with --starts random.
    #[arg(long)]
    pub mu: Option<usize>,
    /// Seed for random starts.
    #[arg(long, default_value_t = 0)]
    pub start_seed: u64,
    /// File with one solution encoding per line (for --starts file).
    #[arg(long)]
    pub starts_file: Option<PathBuf>,
    #[arg(long, default_value_t = GraphCaps::default().max_nodes)]
    pub node_cap: u64,
    #[arg(long, default_value_t = GraphCaps::default().max_edges)]
    pub edge_cap: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExploreArgs {
    /// Instance file (.mapc).
    #[arg(long)]
    pub instance: PathBuf,
    /// Neighborhood mode defining the recorded edges.
    #[arg(long, default_value = "vlsn")]
    pub algo: String,
    /// Start strategy ("all" explores from every feasible solution).
    #[arg(long, value_enum, default_value_t = StartsArg::Random)]
    pub starts: StartsArg,
    /// Number of random starts (defaults to 1).
    #[arg(long)]
    pub mu: Option<usize>,
    /// Seed for random starts.
    #[arg(long, default_value_t = 0)]
    pub start_seed: u64,
    /// File with one solution encoding per line (for --starts file).
    #[arg(long)]
    pub starts_file: Option<PathBuf>,
    #[arg(long, default_value_t = GraphCaps::default().max_nodes)]
    pub node_cap: u64,
    #[arg(long, default_value_t = GraphCaps::default().max_edges)]
    pub edge_cap: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyHypercubeArgs {
    /// Dimension or inclusive range, e.g. "4" or "3..10".
    #[arg(long, default_value = "3..10")]
    pub dims: String,
    /// Optional output directory for hypercube.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeFdcArgs {
    /// Directory of .mapc instances.
    #[arg(long)]
    pub batch: PathBuf,
    /// Algorithm whose landscape is explored.
    #[arg(long, default_value = "vlsn")]
    pub algo: String,
    /// Random starts per instance.
    #[arg(long, default_value_t = 8)]
    pub mu: usize,
    /// Per-instance start seed base (instance i uses base + i).
    #[arg(long, default_value_t = 0)]
    pub start_seed: u64,
    #[arg(long, default_value_t = GraphCaps::default().max_nodes)]
    pub node_cap: u64,
    #[arg(long, default_value_t = GraphCaps::default().max_edges)]
    pub edge_cap: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RerunArgs {
    /// Manifest written by a previous run.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Redirect outputs to this directory (defaults to the original).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Start strategies exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StartsArg {
    Random,
    Grid,
    File,
    All,
}

impl StartsArg {
    pub fn name(&self) -> &'static str {
        match self {
            StartsArg::Random => "random",
            StartsArg::Grid => "grid",
            StartsArg::File => "file",
            StartsArg::All => "all",
        }
    }

    pub fn parse_name(s: &str) -> mapland_core::Result<Self> {
        match s {
            "random" => Ok(StartsArg::Random),
            "grid" => Ok(StartsArg::Grid),
            "file" => Ok(StartsArg::File),
            "all" => Ok(StartsArg::All),
            other => Err(Error::Config(format!("unknown start strategy '{other}'"))),
        }
    }
}

/// Parses an `--algo` string into a neighborhood mode.
pub fn parse_algo(s: &str) -> mapland_core::Result<NeighborhoodMode> {
    match s {
        "vlsn" => Ok(NeighborhoodMode::VlsnAllDims),
        "vlsn-nod1" => Ok(NeighborhoodMode::VlsnNoDim1),
        "vns-all" => Ok(NeighborhoodMode::VnsAllOrders),
        other => {
            if let Some(k) = other.strip_prefix("vns:") {
                let k: usize = k.parse().map_err(|_| {
                    Error::Config(format!("invalid VNS order in algo '{other}'"))
                })?;
                Ok(NeighborhoodMode::VnsOrder(k))
            } else {
                Err(Error::Config(format!(
                    "unknown algo '{other}' (expected vlsn, vlsn-nod1, vns:K, or vns-all)"
                )))
            }
        }
    }
}

/// Parses a `--dims` value: a single dimension or an inclusive `lo..hi`.
pub fn parse_dims_range(s: &str) -> mapland_core::Result<(usize, usize)> {
    let bad = || Error::Config(format!("invalid dims range '{s}' (expected D or LO..HI)"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(Error::Config(format!("empty dims range '{s}'")));
        }
        Ok((lo, hi))
    } else {
        let d: usize = s.trim().parse().map_err(|_| bad())?;
        Ok((d, d))
    }
}

impl Cmd {
    /// The replayable spec plus the output directory, if the command has one.
    pub fn to_spec(&self) -> Option<(CommandSpec, Option<PathBuf>)> {
        let spec = match self {
            Cmd::Generate(g) => (
                CommandSpec::Generate {
                    dims: g.dims,
                    card: g.card,
                    count: g.count,
                    seed: g.seed,
                    low: g.low,
                    high: g.high,
                    max_bytes: g.max_bytes,
                },
                Some(g.out.clone()),
            ),
            Cmd::Solve(s) => (
                CommandSpec::Solve {
                    instance: s.instance.display().to_string(),
                    algo: s.algo.clone(),
                    start: s.start.clone(),
                    start_seed: s.start_seed,
                    check_optimum_cap: s.check_optimum_cap,
                    export_graph: s.export_graph,
                    node_cap: s.node_cap,
                    edge_cap: s.edge_cap,
                },
                s.out.clone(),
            ),
            Cmd::Compare(c) => (
                CommandSpec::Compare {
                    batch: c.batch.display().to_string(),
                    algo_a: c.algo_a.clone(),
                    algo_b: c.algo_b.clone(),
                    start_seed: c.start_seed,
                    node_cap: c.node_cap,
                    edge_cap: c.edge_cap,
                },
                Some(c.out.clone()),
            ),
            Cmd::Multistart(m) => (
                CommandSpec::Multistart {
                    instance: m.instance.display().to_string(),
                    algo: m.algo.clone(),
                    starts: m.starts.name().to_string(),
                    mu: m.mu,
                    start_seed: m.start_seed,
                    starts_file: m.starts_file.as_ref().map(|p| p.display().to_string()),
                    node_cap: m.node_cap,
                    edge_cap: m.edge_cap,
                },
                Some(m.out.clone()),
            ),
            Cmd::Explore(e) => (
                CommandSpec::Explore {
                    instance: e.instance.display().to_string(),
                    algo: e.algo.clone(),
                    starts: e.starts.name().to_string(),
                    mu: e.mu,
                    start_seed: e.start_seed,
                    starts_file: e.starts_file.as_ref().map(|p| p.display().to_string()),
                    node_cap: e.node_cap,
                    edge_cap: e.edge_cap,
                },
                Some(e.out.clone()),
            ),
            Cmd::VerifyHypercube(v) => (
                CommandSpec::VerifyHypercube {
                    dims: v.dims.clone(),
                },
                v.out.clone(),
            ),
            Cmd::AnalyzeFdc(f) => (
                CommandSpec::AnalyzeFdc {
                    batch: f.batch.display().to_string(),
                    algo: f.algo.clone(),
                    mu: f.mu,
                    start_seed: f.start_seed,
                    node_cap: f.node_cap,
                    edge_cap: f.edge_cap,
                },
                Some(f.out.clone()),
            ),
            Cmd::Rerun(_) => return None,
        };
        Some(spec)
    }
}
