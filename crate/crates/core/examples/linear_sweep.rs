// Convergence sweep for the linear problem: reference run, n-sweep, report
// and output files in a temporary directory.

use std::path::PathBuf;

use avglab::harness::{emit_outputs, report_csv, run_sweep, ExperimentConfig};

pub fn run_example() -> avglab::Result<PathBuf> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/linear_member.toml");
    let mut config = ExperimentConfig::from_path(path.as_ref())?;
    config.sweep.n_list = vec![1, 2, 4, 8];
    let (_, report) = run_sweep(&config, 4)?;
    print!("{}", report_csv(&report));
    println!("fitted constant C = {:?}", report.metadata.fitted_constant);

    let dir = std::env::temp_dir().join("avglab-linear-sweep");
    for file in emit_outputs(&report, &config, &dir)? {
        println!("wrote {}", file.display());
    }
    Ok(dir)
}

fn main() -> avglab::Result<()> {
    run_example().map(|_| ())
}
