//! `packlab`: sphere packings, curvature counts, exponent fits, lattice
//! identities and surface orbit counts from the command line.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "packlab", version, about = "Exact sphere packings, orbit counts and critical exponents")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate a packing and write its spheres as CSV.
    Pack(PackArgs),
    /// Fit a critical exponent to a counts CSV.
    Fit(FitArgs),
    /// Discriminant groups, duals, even sublattices and basis changes.
    Lattice(LatticeArgs),
    /// Verify a surface model and count orbit points by height.
    Surface(SurfaceArgs),
    /// Draw a planar packing as SVG.
    Render(RenderArgs),
    /// Gram matrix of the dual polytope.
    Dual(SourceArgs),
}

/// Where the polytope and seed come from.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Catalog polytope: apollonian2, apollonian:n=3, boyd, ideal-triangle, rank11.
    #[arg(long, conflicts_with = "gram_file")]
    catalog: Option<String>,
    /// JSON file with `gram`, optional `seed` and `spheres`.
    #[arg(long)]
    gram_file: Option<PathBuf>,
    /// Seed curvatures, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct EnumerationArgs {
    /// Curvature bound.
    #[arg(long = "T")]
    bound: Option<String>,
    /// Expand every reduced word up to this length instead of pruning by curvature.
    #[arg(long)]
    depth: Option<usize>,
    /// Pruning slack; defaults to 1 for Apollonian polytopes and 4 otherwise.
    #[arg(long)]
    slack: Option<String>,
    /// Rerun at twice the slack and flag truncation on any difference.
    #[arg(long)]
    check: bool,
    /// Lower corner of the counting box on centers, comma separated.
    #[arg(long, allow_hyphen_values = true, requires = "region_max")]
    region_min: Option<String>,
    /// Upper corner of the counting box on centers, comma separated.
    #[arg(long, allow_hyphen_values = true, requires = "region_min")]
    region_max: Option<String>,
    /// Cluster budget; with PACKLAB_CHECKPOINT_DIR set, overruns are resumable.
    #[arg(long)]
    max_clusters: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PackArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    enumeration: EnumerationArgs,
    /// Spheres CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Counting-function CSV for `fit`.
    #[arg(long)]
    counts: Option<PathBuf>,
    /// SVG drawing of the packing.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Counts CSV written by `pack --counts` or `surface --count`.
    #[arg(long)]
    counts: PathBuf,
    /// Decades below the top of the curve used in the fit.
    #[arg(long, default_value_t = 2.0)]
    decades: f64,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Catalog lattice: U, E8, A4, A4^v, Ap2, Ap2ev, Ap3perp, <2>, with optional (t).
    #[arg(long, conflicts_with = "gram")]
    name: Option<String>,
    /// Gram matrix as JSON rows.
    #[arg(long)]
    gram: Option<String>,
    /// Rescale the form by this factor.
    #[arg(long)]
    scale: Option<String>,
    /// Basis matrix as JSON rows; columns are the new basis vectors.
    #[arg(long)]
    basis: Option<String>,
    /// Require the basis to span a sublattice.
    #[arg(long, requires = "basis")]
    sublattice: bool,
    #[arg(long)]
    discriminant: bool,
    #[arg(long)]
    even: bool,
    #[arg(long)]
    dual: bool,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Built-in model: baragar_p2p2, baragar_222, triangle or triangle(a,b,c).
    #[arg(long, conflicts_with = "model_file")]
    model: Option<String>,
    /// JSON model file.
    #[arg(long)]
    model_file: Option<PathBuf>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
    /// Ample class H, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// Seed class C, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    class: Option<String>,
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    count: bool,
    /// Fit the exponent over the top two decades of the count.
    #[arg(long)]
    fit: bool,
    /// Height bound.
    #[arg(long = "T", default_value = "10000")]
    bound: String,
    #[arg(long, default_value = "2")]
    slack: String,
    /// Counts CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    enumeration: EnumerationArgs,
    /// SVG output path.
    #[arg(long)]
    out: PathBuf,
    /// Label circles with their curvatures.
    #[arg(long)]
    labels: bool,
    #[arg(long)]
    pixels: Option<u32>,
    /// Visible box `min_x,min_y,max_x,max_y`.
    #[arg(long, allow_hyphen_values = true)]
    viewport: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Math(packlab::Error),
    Truncated(String),
}

impl From<packlab::Error> for CliError {
    fn from(e: packlab::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else if e.is_truncation() {
            CliError::Truncated(e.to_string())
        } else {
            CliError::Math(e)
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Math(e) => write!(f, "{e}"),
            CliError::Truncated(m) => write!(f, "truncated: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Math(_) => 3,
            CliError::Truncated(_) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    let result = match cli.command {
        Command::Pack(args) => commands::pack(&args, threads),
        Command::Fit(args) => commands::fit(&args),
        Command::Lattice(args) => commands::lattice(&args),
        Command::Surface(args) => commands::surface(&args, threads),
        Command::Render(args) => commands::render(&args, threads),
        Command::Dual(args) => commands::dual(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("packlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
