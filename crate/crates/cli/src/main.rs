//! `gaudin`: batch front end. Reads problem instances, writes one JSON
//! report to stdout. Exit status 0 when every assertion passes, 1 when one
//! fails, 2 on invalid input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use gaudin_core::config::Config;
use gaudin_core::numeric::scalar::{parse_rational, PIPELINE_PRECISION};
use gaudin_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Spectrum,
    Construct,
    Verify,
    Completeness,
    Selftest,
}

#[derive(Debug, Parser)]
#[command(name = "gaudin", version, about = "Bethe eigenvectors and Fuchsian operators for the glN Gaudin model")]
pub struct Args {
    /// Instance file: one instance object or a list of them.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, value_enum)]
    command: Command,
    /// Mantissa bits for floating-point stages.
    #[arg(long, env = "GAUDIN_PRECISION")]
    precision: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// First degeneration parameter, e.g. 1/100.
    #[arg(long)]
    eps0: Option<String>,
    /// Ratio between successive parameters, e.g. 1/2.
    #[arg(long)]
    eps_ratio: Option<String>,
    #[arg(long)]
    eps_steps: Option<usize>,
    /// Tolerance for eigen residuals and operator agreement.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Also write the report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random cell points checked by `verify` and `selftest`.
    #[arg(long, default_value_t = 4)]
    random_points: usize,
    /// Let `completeness` run the bijection check as well.
    #[arg(long)]
    with_verify: bool,
}

fn rational_arg(name: &str, s: &str) -> Result<gaudin_core::Rational, Error> {
    parse_rational(s).ok_or_else(|| Error::Input(format!("--{name}: not a rational number: {s:?}")))
}

/// Configuration from the flags; `instance_precision` applies when neither
/// the flag nor the environment sets one.
pub fn config_from(args: &Args, instance_precision: Option<u32>) -> Result<Config, Error> {
    let precision = args.precision.or(instance_precision).unwrap_or(PIPELINE_PRECISION);
    let mut cfg = Config::with_precision(precision);
    if let Some(s) = &args.eps0 {
        cfg.schedule.eps0 = rational_arg("eps0", s)?;
    }
    if let Some(s) = &args.eps_ratio {
        cfg.schedule.ratio = rational_arg("eps-ratio", s)?;
    }
    if let Some(n) = args.eps_steps {
        cfg.schedule.steps = n;
    }
    if let Some(t) = args.tol {
        cfg.tol.operator = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let threads = if args.jobs == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        args.jobs
    };
    let outcome = gaudin_core::par::with_threads(threads, || commands::run(&args));
    match outcome {
        Ok((report, pass)) => {
            let text = match serde_json::to_string_pretty(&report) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            println!("{text}");
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
