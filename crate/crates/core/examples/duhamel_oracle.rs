// Linear Stokes with oscillatory forcing: the stepper against per-mode
// Duhamel quadrature for several frequencies.

use avglab::harness::{oracle_check, ExperimentConfig, ORACLE_TOLERANCE};

const CONFIG: &str = r#"
[problem]
kind = "linear"
viscosity = 0.05
grid = 16
horizon = 1.0
initial = "random-divfree"
amplitude = 0.5
seed = 3

[force]
beta = 0.5
carrier = "sin"
omega = 1.0
profile = "random-divfree"
profile_norm = 1.0

[sweep]
rho = 0.5
p = 2.0
n_list = [1, 8, 64]

[stepper]
base_dt = 0.01
oscillation_safety = 0.005
sample_stride = 10

[output]
dir = "out/duhamel"
"#;

pub fn run_example() -> avglab::Result<f64> {
    let config = ExperimentConfig::from_toml_str(CONFIG)?;
    let report = oracle_check(&config, 5, 3)?;
    println!("checked modes {:?}", report.modes);
    for row in &report.rows {
        println!("n = {:<3} max |stepper - oracle| = {:.3e}", row.n, row.max_abs_error);
    }
    println!("within {ORACLE_TOLERANCE:.0e}: {}", report.passed());
    Ok(report.max_error())
}

fn main() -> avglab::Result<()> {
    run_example().map(|_| ())
}
