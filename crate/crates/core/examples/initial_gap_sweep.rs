// Continuous dependence on initial data: no forcing, initial states
// perturbed by `ic_gap * 2^{-n}`, sup-error against the unperturbed flow.

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
carrier = "one"
profile = "zero"

[sweep]
rho = 0.5
p = 2.0
n_list = [1, 2, 3, 4, 5, 6]
ic_gap = 1.0

[stepper]
base_dt = 0.01
sample_stride = 5

[output]
dir = "out/gap"
"#;

pub fn run_example() -> avglab::Result<Vec<f64>> {
    let config = ExperimentConfig::from_toml_str(CONFIG)?;
    let (_, report) = run_sweep(&config, 2)?;
    let mut constants = Vec::new();
    for row in &report.rows {
        let err = row.sup_error_hs.unwrap_or(f64::NAN);
        let c = err / config.gap_size(row.n);
        println!("n = {}  gap = {:.4e}  sup error = {err:.4e}  C = {c:.4}", row.n, config.gap_size(row.n));
        constants.push(c);
    }
    Ok(constants)
}

fn main() -> avglab::Result<()> {
    run_example().map(|_| ())
}
