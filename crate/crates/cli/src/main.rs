mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::{RunReport, Settings};

#[derive(Parser, Debug)]
#[command(name = "cdl", version, about = "Complex spherical designs, codes, bounds and association schemes")]
pub struct Cli {
    /// Residual tolerance for design and scheme checks.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tol: f64,
    /// Largest total degree k+l examined.
    #[arg(long, global = true, default_value_t = 8)]
    pub cutoff: u32,
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads; 1 gives fully deterministic runs.
    #[arg(long, global = true, env = "CDL_THREADS")]
    pub threads: Option<usize>,
    /// Output file for point sets (construct, derive) or the report (other commands).
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Angle set, degree, design strength and inner product invariance of a point set.
    Verify {
        file: PathBuf,
        /// Also test membership for this lower set, e.g. `cl{(3,2),(2,3)}` or `k+l<=2`.
        #[arg(long)]
        design: Option<String>,
    },
    /// Association scheme test with eigenmatrices and Krein parameters.
    Scheme {
        file: PathBuf,
        /// Allow point sets with more than 500 points.
        #[arg(long)]
        slow: bool,
    },
    /// Linear programming, absolute and antipodal bounds.
    Bound {
        /// Dimension d of the ambient space.
        d: u32,
        /// Built-in annihilator.
        #[arg(long, value_enum, conflicts_with_all = ["annihilator", "absolute", "antipodal"])]
        builtin: Option<Builtin>,
        /// Annihilator file, one `a b coeff` term of x^a x̄^b per line.
        #[arg(long)]
        annihilator: Option<PathBuf>,
        /// `upper` (codes) or `lower` (designs; requires --design-set).
        #[arg(long, value_enum, default_value_t = Mode::Upper)]
        mode: Mode,
        /// Design set T for the lower bound.
        #[arg(long)]
        design_set: Option<String>,
        /// Point set whose angles are checked against the sign conditions.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Absolute bound for the lower set S: Σ_S dim Harm(k,l).
        #[arg(long, conflicts_with_all = ["annihilator", "antipodal"])]
        absolute: Option<String>,
        /// Antipodal order n; uses --set as S.
        #[arg(long, requires = "set")]
        antipodal: Option<u32>,
        #[arg(long)]
        set: Option<String>,
    },
    /// Write a built-in point set (see `cdl construct list`).
    Construct {
        name: String,
        params: Vec<u64>,
    },
    /// Molien series of a finite group: `pauli <d>`, `trivial <d>`, `sic-d2-group`,
    /// `hoggar-group` or `file <path>`, followed by kmax and lmax.
    Molien {
        #[arg(num_args = 3..=4, required = true)]
        args: Vec<String>,
    },
    /// Derived code X_α(z); `alpha` indexes the angle set as listed by `verify`.
    Derive {
        file: PathBuf,
        z: usize,
        alpha: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Builtin {
    Sic,
    Kerdock,
    KerdockEven,
    Simplex,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Mode {
    Upper,
    Lower,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("cdl: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let settings = Settings {
        tol: cli.tol,
        cutoff: cli.cutoff,
        threads: cli.threads,
        slow: matches!(cli.command, Command::Scheme { slow: true, .. }),
    };
    let started = std::time::Instant::now();
    let outcome = commands::run(&cli);
    let (mut report, text) = match outcome {
        Ok(v) => v,
        Err(e) => {
            eprintln!("cdl: {e:#}");
            return ExitCode::from(2);
        }
    };
    report.command = std::env::args().collect();
    report.settings = settings;
    report.timings_ms.insert("total".into(), started.elapsed().as_secs_f64() * 1e3);
    if let Err(e) = emit(&cli, &report, &text) {
        eprintln!("cdl: {e:#}");
        return ExitCode::from(2);
    }
    if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit(cli: &Cli, report: &RunReport, text: &str) -> anyhow::Result<()> {
    let body = if cli.json { serde_json::to_string_pretty(report)? + "\n" } else { text.to_string() };
    let writes_points = matches!(cli.command, Command::Construct { .. } | Command::Derive { .. });
    match &cli.output {
        Some(path) if !writes_points => std::fs::write(path, body)?,
        _ => print!("{body}"),
    }
    Ok(())
}
