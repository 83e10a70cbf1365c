use std::ops::Range;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Tree nim and tripod nim analysis.
#[derive(Debug, Parser)]
#[command(name = "tnim", version)]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Directory for cached arrays.
    #[arg(long, global = true, default_value = "tnim-cache")]
    pub cache_dir: PathBuf,
    /// Read and write cached arrays in the cache directory.
    #[arg(long, global = true)]
    pub use_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classic and misère nim.
    #[command(subcommand)]
    Nim(NimCmd),
    /// Classify a tree nim position and compute its Grundy value.
    Solve(SolveArgs),
    /// Rays and P-completions.
    #[command(subcommand)]
    Ray(RayCmd),
    /// Box-barrier shadow map as CSV.
    Shadow(ShadowArgs),
    /// Generate a completion array.
    Array(ArrayArgs),
    /// Additive period of array rows.
    Period(PeriodArgs),
    /// Detect a band around the diagonal.
    Band(BandArgs),
    /// Compare two completion arrays away from the origin.
    Equiv(EquivArgs),
    /// Seed dynamical systems.
    #[command(subcommand)]
    Dynsys(DynCmd),
    /// Render an array comparison, band or P-position plot.
    Plot(PlotArgs),
}

#[derive(Debug, Subcommand)]
pub enum NimCmd {
    Sum { a: u64, b: u64 },
    Outcome { stacks: Vec<u64> },
    Misere { stacks: Vec<u64> },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TreeSource {
    /// Tree JSON file.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Tripod as center,a,b,c.
    #[arg(long, value_delimiter = ',')]
    pub tripod: Option<Vec<u64>>,
    /// Path of stack sizes s1,s2,...
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub path: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: TreeSource,
    /// Cap on memo entries.
    #[arg(long)]
    pub memo_limit: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum RayCmd {
    /// P-completion of the ray attaching a variable leaf at a vertex.
    Complete {
        #[command(flatten)]
        source: TreeSource,
        #[arg(long)]
        attach: u32,
        #[arg(long)]
        memo_limit: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ShadowSource {
    Oracle,
    Array,
}

#[derive(Debug, Args)]
pub struct ShadowArgs {
    /// World JSON file.
    #[arg(long, conflicts_with = "tripod_center", required_unless_present = "tripod_center")]
    pub world: Option<PathBuf>,
    /// Use the tripod world with this center.
    #[arg(long)]
    pub tripod_center: Option<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub thresholds: Vec<u64>,
    #[arg(long, default_value_t = 64)]
    pub horizon: u64,
    /// Where P-completions come from; `array` needs a tripod world.
    #[arg(long, value_enum, default_value_t = ShadowSource::Oracle)]
    pub source: ShadowSource,
}

#[derive(Debug, Args)]
pub struct ArrayArgs {
    #[arg(long)]
    pub center: u32,
    #[arg(long)]
    pub dim: usize,
    /// Output: a .csv or .tnim path, or - for CSV on stdout.
    #[arg(long, default_value = "-")]
    pub out: String,
    /// Fill value by value instead of entry by entry.
    #[arg(long)]
    pub layers: bool,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct PeriodArgs {
    #[command(subcommand)]
    pub table: Option<PeriodTable>,
    #[arg(long)]
    pub center: Option<u32>,
    #[arg(long)]
    pub row: Option<usize>,
    #[arg(long, default_value_t = 20_000)]
    pub terms: usize,
}

#[derive(Debug, Subcommand)]
pub enum PeriodTable {
    /// One CSV line per row: row, period, mode.
    Table {
        #[arg(long)]
        center: u32,
        /// Row range, `a..b` (exclusive) or `a..=b`.
        #[arg(long, value_parser = parse_range)]
        rows: Range<usize>,
        #[arg(long, default_value_t = 20_000)]
        terms: usize,
    },
}

#[derive(Debug, Args)]
pub struct BandArgs {
    #[arg(long)]
    pub center: u32,
    #[arg(long)]
    pub vmax: u32,
    #[arg(long)]
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EquivMode {
    /// Every completion value must agree.
    Values,
    /// Only P positions with all leaves at least the threshold must agree.
    PPositions,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    #[arg(long)]
    pub c1: u32,
    #[arg(long)]
    pub c2: u32,
    #[arg(long, default_value_t = 8)]
    pub threshold: usize,
    #[arg(long, default_value_t = 200)]
    pub extent: usize,
    #[arg(long, value_enum, default_value_t = EquivMode::Values)]
    pub mode: EquivMode,
}

#[derive(Debug, Subcommand)]
pub enum DynCmd {
    /// Iterate a D(1,n) seed.
    D1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Iterate a D(k,n) state read from a file of k bit lines.
    Dk {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Orbit of a D(1,n) seed.
    Orbit {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
    },
    /// Every D(1,n) seed.
    SweepD1 {
        #[arg(long)]
        n: u32,
    },
    /// Check D(3,n) cycle periods against 2(4n)(4n+1).
    D3Conjecture {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long, required_unless_present = "exhaustive")]
        samples: Option<usize>,
        #[arg(long, default_value_t = 42)]
        rng_seed: u64,
    },
    /// Band induction check on a completion array.
    BandInduction {
        #[arg(long)]
        center: u32,
        #[arg(long, default_value_t = 1)]
        kmax: usize,
        #[arg(long, default_value_t = 4096)]
        dim: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PlotKindArg {
    Compare,
    Band,
    Ppositions,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Svg,
    Pgm,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub kind: PlotKindArg,
    /// Center for band and ppositions plots.
    #[arg(long)]
    pub center: Option<u32>,
    #[arg(long)]
    pub c1: Option<u32>,
    #[arg(long)]
    pub c2: Option<u32>,
    /// Red cells hold values up to this (band plots).
    #[arg(long)]
    pub vmax: Option<u32>,
    /// Third leaf size (ppositions plots).
    #[arg(long)]
    pub leaf: Option<u32>,
    /// Row window, `a..b` (exclusive) or `a..=b`.
    #[arg(long, value_parser = parse_range, default_value = "0..128")]
    pub rows: Range<usize>,
    /// Column window, same syntax as rows.
    #[arg(long, value_parser = parse_range, default_value = "0..128")]
    pub cols: Range<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Svg)]
    pub format: FormatArg,
    /// Output file; - for stdout.
    #[arg(long, default_value = "-")]
    pub out: String,
}

pub fn parse_range(s: &str) -> Result<Range<usize>, String> {
    let bad = || format!("expected a..b or a..=b, got {s:?}");
    let (lo, hi, inclusive) = if let Some((lo, hi)) = s.split_once("..=") {
        (lo, hi, true)
    } else if let Some((lo, hi)) = s.split_once("..") {
        (lo, hi, false)
    } else {
        return Err(bad());
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    let end = if inclusive { hi + 1 } else { hi };
    if end < lo {
        return Err(format!("empty range {s:?} runs backwards"));
    }
    Ok(lo..end)
}
