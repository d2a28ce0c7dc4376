//! Command-line runner for the ymcyl checks.
//!
//! Exit status: 0 when every row passes, 2 for configuration errors
//! (reported as a JSON object on stderr), 3 when a Monte Carlo row has
//! z ≥ 4, 4 for deterministic or numerical failures.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use ymcyl::report::{Outcome, Report};

use commands::RunError;
use config::{ConfigError, Format, Params};

const EXIT_CONFIG: u8 = 2;
const EXIT_STATISTICAL: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(name = "ymcyl", version, about = "Numerical checks for Yang-Mills on a spacetime cylinder")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Holonomy pushforward moment against the heat-kernel moment.
    Pushforward(Params),
    /// Unitarity diagram: Gram matrix of characters on both legs.
    Gram(Params),
    /// Lattice Laplacian of a character of the holonomy.
    LaplacianCheck(Params),
    /// Heat smoothing on the lattice against the heat semigroup on K.
    SemigroupCheck(Params),
    /// Euclidean Segal-Bargmann isometry on monomials.
    EuclidUnitarity(Params),
    /// Coherent-state overlaps by series and by quadrature.
    CoherentOverlap(Params),
    /// Resolution of the identity by coherent states.
    ResolutionCheck(Params),
    /// Holonomy of free motion against geodesics on K.
    Geodesic(Params),
    /// Planar Laplacian of radial functions.
    RadialLaplacian(Params),
    /// Singular values of the holonomy differential.
    SubmersionCheck(Params),
    /// Run the experiment named by the `command` key of a config table.
    Run(Params),
}

impl Command {
    fn split(self) -> (Option<&'static str>, Params) {
        match self {
            Command::Pushforward(p) => (Some("pushforward"), p),
            Command::Gram(p) => (Some("gram"), p),
            Command::LaplacianCheck(p) => (Some("laplacian-check"), p),
            Command::SemigroupCheck(p) => (Some("semigroup-check"), p),
            Command::EuclidUnitarity(p) => (Some("euclid-unitarity"), p),
            Command::CoherentOverlap(p) => (Some("coherent-overlap"), p),
            Command::ResolutionCheck(p) => (Some("resolution-check"), p),
            Command::Geodesic(p) => (Some("geodesic"), p),
            Command::RadialLaplacian(p) => (Some("radial-laplacian"), p),
            Command::SubmersionCheck(p) => (Some("submersion-check"), p),
            Command::Run(p) => (None, p),
        }
    }
}

fn error_exit(kind: &str, message: &str, code: u8) -> ExitCode {
    let obj = serde_json::json!({ "error": { "kind": kind, "message": message, "exit_code": code } });
    eprintln!("{obj}");
    ExitCode::from(code)
}

fn write_report(report: &Report, p: &Params) -> Result<(), String> {
    let mut buf = Vec::new();
    match p.format() {
        Format::Csv => report.write_csv(&mut buf).map_err(|e| e.to_string())?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &report.to_json_value()).map_err(|e| e.to_string())?;
            buf.push(b'\n');
        }
    }
    match &p.output {
        Some(path) => std::fs::write(path, &buf).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(&buf).map_err(|e| e.to_string()),
    }
}

fn execute(cli: Cli) -> Result<(Report, Params), RunError> {
    let (fixed, params) = cli.command.split();
    let p = params.resolve()?;
    let command = match (fixed, p.command.as_deref()) {
        (Some(c), Some(t)) if c != t => {
            return Err(RunError::Config(ConfigError(format!("config table is for '{t}' but '{c}' was requested"))));
        }
        (Some(c), _) => c.to_string(),
        (None, Some(t)) => t.to_string(),
        (None, None) => return Err(RunError::Config(ConfigError("run needs a config table with a command key".into()))),
    };
    if let Some(t) = p.threads {
        if t == 0 {
            return Err(RunError::Config(ConfigError("threads must be at least 1".into())));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| RunError::Config(e.into()))?;
    }
    let start = Instant::now();
    let mut report = commands::run(&command, &p)?;
    if let Some(t) = p.threads {
        report.params.insert("threads".into(), t.to_string());
    }
    report.wall_time_s = Some(start.elapsed().as_secs_f64());
    Ok((report, p))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return error_exit("config", e.to_string().trim(), EXIT_CONFIG),
    };
    match execute(cli) {
        Ok((report, p)) => {
            if let Err(e) = write_report(&report, &p) {
                return error_exit("config", &e, EXIT_CONFIG);
            }
            match report.outcome() {
                Outcome::Pass => ExitCode::SUCCESS,
                Outcome::StatisticalFailure => ExitCode::from(EXIT_STATISTICAL),
                Outcome::NumericalFailure => ExitCode::from(EXIT_NUMERICAL),
            }
        }
        Err(RunError::Config(ConfigError(msg))) => error_exit("config", &msg, EXIT_CONFIG),
        Err(RunError::Numerical(msg)) => error_exit("numerical", &msg, EXIT_NUMERICAL),
    }
}
