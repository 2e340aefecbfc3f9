//! `tropdyn`: skeleton meshes, orbits, potentials, 1D measures, twist
//! profiles and self-checks from the command line.

mod commands;
mod config;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    NotHyperbolic(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Domain(_) => 2,
            CliError::NotHyperbolic(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "tropdyn", version, about = "Exact tropical dynamics on K3 skeletons, elliptic curves and the line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeshFormat {
    Obj,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Boundary mesh of `{h° ≥ c}` as OBJ or CSV.
    Skeleton {
        /// `kummer`, `rubik`, `rubik:<s>`, `random:<seed>` or a config path.
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        level: Option<String>,
        #[arg(long, value_enum, default_value = "obj")]
        format: MeshFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbit of a start point under a word in the reflections.
    Orbit {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        level: Option<String>,
        #[arg(long, default_value = "xyz")]
        word: String,
        /// `x,y,z`; a seeded random skeleton point when absent.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Bit size at which exact orbits continue in floating point.
        #[arg(long, default_value_t = 4096)]
        max_bits: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Config with all 26 coefficients drawn from `k/64` in `[-R, R]`.
    RandomSurface {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "2")]
        coeff_range: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Potential and functional-equation residual at skeleton points.
    Potential {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        level: Option<String>,
        #[arg(long, default_value = "xyz")]
        word: String,
        /// `grid`, `grid:<k>` (face lattice with denominator k) or a file of `x,y,z` rows.
        #[arg(long, default_value = "grid")]
        points: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure `g''` of the potential of a PL map of the line, as JSON.
    Measure1d {
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Number of equal cells on the interval.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        /// `a:b`; wide enough to hold all the mass when absent.
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
        /// Truncation tolerance of the potential series.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Minimum number of series terms; kinks of the truncated potential
        /// must be far below the derivative step.
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write `x,g` rows of the potential on the grid.
        #[arg(long)]
        potential_csv: Option<PathBuf>,
    },
    /// Rotation number of `σ₁σ₂` across a range of levels.
    Elliptic {
        /// `symmetric`, `random:<seed>` or a planar config path.
        spec: String,
        /// `a:b:step`.
        #[arg(long, allow_hyphen_values = true)]
        levels: String,
        /// Also report the limit of the rotation number at the maximum.
        #[arg(long)]
        near_max: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the built-in checks; the exit code is the number of failed suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: verify::Suite,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, hide = true, allow_hyphen_values = true)]
        corrupt_coefficient: Option<String>,
    },
}

fn init_threads() {
    let Ok(value) = std::env::var("TROPDYN_THREADS") else { return };
    match value.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("TROPDYN_THREADS ignored: {e}");
            }
        }
        _ => log::warn!("TROPDYN_THREADS={value} is not a positive integer; ignored"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    init_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Skeleton { spec, level, format, out } => commands::skeleton(&spec, level.as_deref(), format, out.as_deref()),
        Command::Orbit { spec, level, word, start, seed, steps, mode, max_bits, out, svg } => commands::orbit(&commands::OrbitArgs {
            spec,
            level,
            word,
            start,
            seed,
            steps,
            mode,
            max_bits,
            out,
            svg,
        }),
        Command::RandomSurface { seed, coeff_range, out } => commands::random_surface(seed, &coeff_range, out.as_deref()),
        Command::Potential { spec, level, word, points, tol, out } => {
            commands::potential(&spec, level.as_deref(), &word, &points, tol, out.as_deref())
        }
        Command::Measure1d { preset, config, grid, interval, tol, depth, out, potential_csv } => {
            let source = match (&preset, &config) {
                (Some(p), _) => p.clone(),
                (None, Some(c)) => c.display().to_string(),
                (None, None) => unreachable!("clap requires one"),
            };
            commands::measure1d(&source, grid, interval.as_deref(), tol, depth, out.as_deref(), potential_csv.as_deref())
        }
        Command::Elliptic { spec, levels, near_max, out } => commands::elliptic(&spec, &levels, near_max, out.as_deref()),
        Command::Verify { suite, samples, seed, corrupt_coefficient } => {
            return commands::verify(suite, samples, seed, corrupt_coefficient.as_deref());
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
