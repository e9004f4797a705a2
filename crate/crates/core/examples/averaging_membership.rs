// Averaged integrability of `(1+t)^{-β} c(t) ψ`: classification and the
// averaging functional at growing horizons.

use avglab::forcing::{
    averaging_functional, classify_lp_avr, scaled_force_lp_norm, Carrier, ForceFamily,
    OscillationParams, CONFIRMATION_HORIZONS,
};
use avglab::navier_stokes::taylor_green;
use avglab::spectral::WaveGrid;

pub fn run_example() -> avglab::Result<()> {
    let grid = WaveGrid::new(16)?;
    let profile = taylor_green(1.0, grid).scale(2.0);
    let (rho, p) = (0.5, 2.0);
    for beta in [0.0, 0.2, 0.25, 0.5, 1.0] {
        let force = ForceFamily::new(beta, Carrier::ConstantOne, profile.clone())?;
        let c = classify_lp_avr(&force, rho, p)?;
        print!("beta = {beta:<5} p*beta = {:<5} {:?}", c.p_beta, c.membership);
        for (t, v) in &c.samples {
            print!("  A({t:.0e}) = {v:.6}");
        }
        println!("  confirmed = {}", c.confirmed);
    }

    let unit = ForceFamily::new(0.5, Carrier::ConstantOne, profile.scale(1.0 / profile.l2_norm()))?;
    println!(
        "A(100) for beta = 0.5, unit profile: {:.7}",
        averaging_functional(&unit, rho, p, CONFIRMATION_HORIZONS[0])?
    );
    let params = OscillationParams::new(4, rho, p)?;
    println!(
        "scaled force norm, n = 4, T = 25: {:.7}",
        scaled_force_lp_norm(&unit, &params, 0.0, 25.0)?
    );
    Ok(())
}

fn main() -> avglab::Result<()> {
    run_example()
}
