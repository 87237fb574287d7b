mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use specset::ExtComplex;

#[derive(Debug, Parser)]
#[command(name = "specset", version, about = "Spectral-set criteria for complex matrices")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the point cloud of the verb as CSV (`re,im`).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Add a Unix timestamp to the report, which makes reports differ between runs.
    #[arg(long, global = true)]
    timestamp: bool,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Boundary of the numerical range.
    Range {
        #[arg(long)]
        matrix: PathBuf,
        /// Number of support directions.
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(8..=1 << 16))]
        grid: u32,
    },
    /// ρ-contraction test.
    Rho {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rho: f64,
        #[arg(long, value_enum, default_value_t = Route::Disks)]
        route: Route,
        /// Angles and tangency points; radii and |μ| samples scale with it.
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(8..=1 << 14))]
        grid: u32,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Good generalized disk test.
    GoodDisk {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        disk: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Seeded lower bound for the spectral constant of a domain.
    Kbound {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        /// Comma-separated pole set, e.g. `inf,0.5+2i`; defaults to one pole per complementary component.
        #[arg(long, value_parser = parse_points)]
        poles: Option<Points>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=64))]
        degree: u32,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
        s: u32,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(8..=1 << 14))]
        grid: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random restarts.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=4096))]
        budget: u32,
    },
    /// Blaschke similarity that turns T into a contraction.
    BlaschkeSim {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        blaschke: PathBuf,
    },
    /// Domain geometry: components, pole sets, exterior disks, transversality.
    Geometry {
        #[arg(long)]
        domain: PathBuf,
        /// Boundary samples for the CSV and the exterior-disk check.
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(4..=1 << 16))]
        grid: u32,
        #[arg(long, value_parser = parse_points)]
        poles: Option<Points>,
        /// Radius for the exterior disk condition.
        #[arg(long)]
        radius: Option<f64>,
        /// Second domain for the transversality test.
        #[arg(long, requires = "at")]
        domain2: Option<PathBuf>,
        /// Boundary point for the transversality test.
        #[arg(long, value_parser = parse_point, requires = "domain2")]
        at: Option<ExtComplex>,
    },
    /// Hypotheses of the piecewise-circular spectral-set theorem.
    Theorem2 {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        /// Attach normal exterior centers of this radius to every arc.
        #[arg(long)]
        radius: Option<f64>,
        /// Center samples per arc when `--radius` is given.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(2..=4096))]
        grid: u32,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Hyponormality test and resolvent identity.
    Hyponormal {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        /// Point at which to compare ‖(λ - T)^{-1}‖ with 1/dist(λ, σ(T)).
        #[arg(long, value_parser = parse_point)]
        at: Option<ExtComplex>,
    },
    /// Split a rational function by the pole locations of two domains.
    Split {
        #[arg(long)]
        rational: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        domain2: PathBuf,
        /// Check f(T) = f1(T) + f2(T) on this matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Worked examples with their numeric claims.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Debug, Subcommand)]
enum GalleryAction {
    List,
    /// Run one item, or `all`.
    Run { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Poisson,
    Disks,
    Tangent,
    /// Poisson and disk routes, failing on disagreement.
    Both,
}

type Points = Vec<ExtComplex>;

fn parse_point(s: &str) -> Result<ExtComplex, String> {
    s.parse()
}

fn parse_points(s: &str) -> Result<Points, String> {
    s.split(',').map(parse_point).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.output.csv.is_some() && !matches!(cli.verb, Verb::Range { .. } | Verb::Geometry { .. }) {
        eprintln!("error: --csv applies to range and geometry only");
        return ExitCode::from(2);
    }
    match commands::dispatch(&cli.verb).and_then(|outcome| outcome.emit(&cli.output)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
