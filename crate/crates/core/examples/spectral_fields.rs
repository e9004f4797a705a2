// Spectral toolkit: projection, divergence, Sobolev norms and dealiasing on
// a seeded random field.

use avglab::navier_stokes::random_velocity;
use avglab::spectral::{trace_order, DiagonalStokesOperator, WaveGrid};

pub fn run_example() -> avglab::Result<()> {
    let grid = WaveGrid::new(32)?;
    let v = random_velocity(grid, 42, 1.5)?;
    println!("raw field: |div v| = {:.3e}", v.divergence().max_modulus());

    let p = v.leray_project();
    println!("projected: |div Pv| = {:.3e}", p.divergence().max_modulus());
    println!("idempotence: |PPv - Pv| = {:.3e}", p.leray_project().sub(&p)?.max_modulus());
    println!("certified divergence-free: {}", p.is_certified_divergence_free());

    for s in [0.0, trace_order(3.0), 1.0, 2.0] {
        println!("H^{s:.3} norm = {:.6}", p.sobolev_norm(s));
    }

    let a = DiagonalStokesOperator::new(0.5)?;
    let av = a.apply(&p);
    println!("<Av, v> = {:.6} (nonnegative)", av.inner(&p)?.re);

    let [x, _] = p.components();
    let phys = x.physical_l2_norm()?;
    println!("Parseval: physical {phys:.12} vs spectral {:.12}", x.sobolev_norm(0.0) * std::f64::consts::TAU);
    println!("dealias cutoff |k_i| <= {}", grid.dealias_cutoff());
    Ok(())
}

fn main() -> avglab::Result<()> {
    run_example()
}
