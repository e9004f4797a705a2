// Decaying Taylor-Green vortex: the full Navier-Stokes stepper against the
// analytic solution `e^{-2νt} v0`.

use avglab::evolution::{integrate, StepperConfig};
use avglab::navier_stokes::{exact_tg_solution, InitialCondition, NSProblemSpec};
use avglab::spectral::WaveGrid;

pub fn run_example() -> avglab::Result<f64> {
    let grid = WaveGrid::new(32)?;
    let viscosity = 0.1;
    let problem = NSProblemSpec {
        viscosity,
        initial: InitialCondition::TaylorGreen { amplitude: 1.0 },
        grid,
        horizon: 1.0,
    }
    .build()?;
    let traj = integrate(&problem, &StepperConfig::new(1e-2).with_stride(10))?;

    let mut worst: f64 = 0.0;
    for (&t, state) in traj.sample_times().iter().zip(traj.states()) {
        let exact = exact_tg_solution(1.0, viscosity, t, grid);
        let err = state.sub(&exact)?.l2_norm();
        println!("t = {t:.2}  |u|_2 = {:.8}  error = {err:.2e}", state.l2_norm());
        worst = worst.max(err);
    }
    println!("worst L2 deviation from the analytic decay: {worst:.2e}");
    Ok(worst)
}

fn main() -> avglab::Result<()> {
    run_example().map(|_| ())
}
