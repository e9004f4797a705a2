//! Thin command-line front end over `avglab::harness`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use avglab::forcing::Membership;
use avglab::harness::{self, exit_code, ExperimentConfig};
use avglab::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "avglab", version, about = "Averaging experiments for oscillatory forced Navier-Stokes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML) or a previously written manifest.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for per-n integrations.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output directory; defaults to `[output] dir` of the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Treat failed rows and non-member forces as check failures.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the unforced reference problem and write its snapshots.
    Run(Common),
    /// Run the n-sweep and write report.csv, manifest, plot and histories.
    Sweep(Common),
    /// Tabulate averaged-integrability membership of the configured force.
    VerifyAvr(Common),
    /// Cross-check the linear stepper against the Duhamel oracle.
    OracleCheck(Common),
    /// Run the invariant suite on seeded random fields.
    Selftest(Common),
}

fn load(common: &Common) -> Result<ExperimentConfig, ExitCode> {
    let Some(path) = &common.config else {
        eprintln!("error: --config is required");
        return Err(ExitCode::from(exit_code::CONFIG_ERROR as u8));
    };
    ExperimentConfig::from_path(path)
        .and_then(|c| c.validate().map(|_| c))
        .map_err(|e| {
            eprintln!("config error: {e}");
            ExitCode::from(exit_code::CONFIG_ERROR as u8)
        })
}

fn out_dir(common: &Common, config: &ExperimentConfig) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from(&config.output.dir))
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::BlowUp { .. } => ExitCode::from(exit_code::REFERENCE_BLOW_UP as u8),
        Error::Config(_) | Error::MalformedField(_) => ExitCode::from(exit_code::CONFIG_ERROR as u8),
        _ => ExitCode::FAILURE,
    }
}

fn report_files(files: &[PathBuf], dir: &Path) {
    println!("wrote {} files to {}", files.len(), dir.display());
}

fn check(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(exit_code::CHECK_FAILED as u8)
    }
}

fn run(command: Command) -> Result<ExitCode, ExitCode> {
    match command {
        Command::Run(common) => {
            let config = load(&common)?;
            let traj = harness::run_reference(&config).map_err(fail)?;
            let dir = out_dir(&common, &config);
            let files = harness::emit_reference(&traj, &config, &dir).map_err(fail)?;
            report_files(&files, &dir);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(common) => {
            let config = load(&common)?;
            let (_, report) = harness::run_sweep(&config, common.workers).map_err(fail)?;
            let dir = out_dir(&common, &config);
            let files = harness::emit_outputs(&report, &config, &dir).map_err(fail)?;
            print!("{}", harness::report_csv(&report));
            report_files(&files, &dir);
            let failed = report.rows.iter().any(|r| r.failure_time.is_some());
            Ok(check(!(common.strict && failed)))
        }
        Command::VerifyAvr(common) => {
            let config = load(&common)?;
            let table = harness::verify_avr(&config).map_err(fail)?;
            print!("{}", table.render());
            let member = table.rows.iter().all(|r| r.membership == Membership::Member);
            Ok(check(!common.strict || member))
        }
        Command::OracleCheck(common) => {
            let config = load(&common)?;
            let report = harness::oracle_check(&config, 5, common.workers).map_err(fail)?;
            println!("modes: {:?}", report.modes);
            for row in &report.rows {
                println!("n = {:<4} max |error| = {:.3e}", row.n, row.max_abs_error);
            }
            println!("tolerance {:.0e}: {}", harness::ORACLE_TOLERANCE, if report.passed() { "PASS" } else { "FAIL" });
            Ok(check(report.passed()))
        }
        Command::Selftest(common) => {
            let seed = match &common.config {
                Some(_) => load(&common)?.problem.seed,
                None => 0,
            };
            let outcomes = harness::selftest(seed, 100).map_err(fail)?;
            for o in &outcomes {
                println!("[{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
            }
            Ok(check(outcomes.iter().all(|o| o.passed)))
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse().command).unwrap_or_else(|code| code)
}
