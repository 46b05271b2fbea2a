use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fracrd::frac_laplacian::{assemble_regional, principal_eigenpair, Grid1D};
use fracrd::harness::{default_suite, parse_config, run_campaigns, write_outputs, Campaign};
use fracrd::special_functions::{
    calibrate_envelope, format_envelope_table, ml_eval, MlParams, ENVELOPE_ALPHAS,
};
use fracrd::{Error, Result};

const OUT_DIR_ENV: &str = "FRACRD_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "fracrd-out";

#[derive(Parser)]
#[command(
    name = "fracrd",
    version,
    about = "Fractional logistic reaction-diffusion simulator and verification harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the campaigns of a configuration file, or the built-in suite.
    Run {
        /// Campaign configuration (TOML).
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        config: Option<PathBuf>,
        /// Run the built-in acceptance suite.
        #[arg(long)]
        all: bool,
        /// Output directory; overrides FRACRD_OUT_DIR.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        /// Run only the named campaigns.
        #[arg(long = "campaign")]
        campaigns: Vec<String>,
    },
    /// Print E_alpha(z).
    MlEval {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// Print the principal eigenvalue and write the eigenfunction as CSV.
    Eig {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        n: usize,
        /// Interval endpoints `a,b`.
        #[arg(long, value_parser = parse_domain, allow_hyphen_values = true, default_value = "0,1")]
        domain: (f64, f64),
        /// Eigenfunction CSV path; defaults to e1.csv in the output directory.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the assembled matrix as `i j value` triplets.
        #[arg(long)]
        triplets: Option<PathBuf>,
    },
    /// Recompute the Mittag-Leffler envelope table.
    #[command(hide = true)]
    CalibrateEnvelope { path: PathBuf },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_domain(s: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts[..] else {
        return Err(format!("expected `a,b`, got `{s}`"));
    };
    let a: f64 = a.parse().map_err(|e| format!("`{a}`: {e}"))?;
    let b: f64 = b.parse().map_err(|e| format!("`{b}`: {e}"))?;
    Ok((a, b))
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn run(config: Option<&Path>, out: PathBuf, workers: usize, names: &[String]) -> Result<bool> {
    let catalog = match config {
        Some(path) => parse_config(path)?,
        None => default_suite()?,
    };
    for name in names {
        if !catalog.iter().any(|c| &c.name == name) {
            return Err(Error::Unsupported(format!("no campaign named `{name}`")));
        }
    }
    let selected: Vec<Campaign> = catalog
        .iter()
        .filter(|c| names.is_empty() || names.contains(&c.name))
        .cloned()
        .collect();
    let (report, traces) = run_campaigns(&selected, &catalog, workers)?;
    let path = write_outputs(&report, &traces, &out)?;
    for r in report.failed() {
        eprintln!("FAIL {}", r.line());
    }
    println!("{}", path.display());
    Ok(report.passed())
}

fn eig(
    s: f64,
    n: usize,
    domain: (f64, f64),
    csv: Option<PathBuf>,
    triplets: Option<PathBuf>,
) -> Result<()> {
    let grid = Grid1D::new(domain.0, domain.1, n)?;
    let op = assemble_regional(&grid, s)?;
    let pair = principal_eigenpair(&op, &grid)?;
    let csv = match csv {
        Some(p) => p,
        None => {
            let dir = out_dir(None);
            std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
                path: dir.clone(),
                source: e,
            })?;
            dir.join("e1.csv")
        }
    };
    pair.dump_csv(&csv)?;
    if let Some(t) = triplets {
        op.dump_triplets(&t)?;
    }
    println!("{:.14e}", pair.lambda1);
    Ok(())
}

fn calibrate(path: &Path) -> Result<()> {
    let rows = calibrate_envelope(&ENVELOPE_ALPHAS)?;
    std::fs::write(path, format_envelope_table(&rows)).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            all: _,
            out,
            workers,
            campaigns,
        } => run(config.as_deref(), out_dir(out), workers, &campaigns),
        Command::MlEval { alpha, z } => MlParams::new(alpha, z).and_then(ml_eval).map(|v| {
            println!("{v:.14e}");
            true
        }),
        Command::Eig {
            s,
            n,
            domain,
            csv,
            triplets,
        } => eig(s, n, domain, csv, triplets).map(|()| true),
        Command::CalibrateEnvelope { path } => calibrate(&path).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
