// Averaging for the forced Navier-Stokes equations: Taylor-Green base flow
// and an oscillating member force, errors against the unforced flow.

use avglab::harness::{run_sweep, ExperimentConfig};

const CONFIG: &str = r#"
[problem]
kind = "navier-stokes"
viscosity = 0.1
grid = 16
horizon = 0.5
initial = "taylor-green"
amplitude = 1.0

[force]
beta = 0.5
carrier = "sin"
omega = 1.0
phase = 1.5707963267948966
profile = "taylor-green"
profile_norm = 0.5

[sweep]
rho = 0.5
p = 3.0
n_list = [1, 2, 4, 8, 16]

[stepper]
base_dt = 0.005
sample_stride = 2

[output]
dir = "out/ns"
"#;

pub fn run_example() -> avglab::Result<Vec<f64>> {
    let config = ExperimentConfig::from_toml_str(CONFIG)?;
    let (reference, report) = run_sweep(&config, 4)?;
    println!(
        "reference: {} samples, final L2 norm {:.6}",
        reference.len(),
        reference.final_state().l2_norm()
    );
    println!("    n  sup H^s error   mixed-norm error");
    for row in &report.rows {
        println!(
            "{:>5}  {:<14.6e}  {:.6e}",
            row.n,
            row.sup_error_hs.unwrap_or(f64::NAN),
            row.mixed_norm_error.unwrap_or(f64::NAN)
        );
    }
    Ok(report.sup_errors_hs())
}

fn main() -> avglab::Result<()> {
    run_example().map(|_| ())
}
