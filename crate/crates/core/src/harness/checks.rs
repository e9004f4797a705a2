//! Membership tables, the linear oracle cross-check and the self-test.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::evolution::{integrate_with_order, EvolutionProblem, Forcing, ZeroNonlinearity};
use crate::forcing::{averaging_functional, classify_lp_avr, Carrier, ForceFamily, Membership};
use crate::navier_stokes::{nonlinear_term, random_velocity, taylor_green};
use crate::oracle::duhamel_solution;
use crate::spectral::{VelocityField, WaveGrid};
use crate::{Error, Result};

/// Absolute agreement required between stepper and Duhamel oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct AvrRow {
    pub label: String,
    pub beta: f64,
    pub p: f64,
    pub rho: f64,
    pub p_beta: f64,
    pub membership: Membership,
    pub samples: Vec<(f64, f64)>,
    pub confirmed: bool,
    pub within_theorem_hypothesis: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvrTable {
    pub rows: Vec<AvrRow>,
}

impl AvrTable {
    pub fn all_members(&self) -> bool {
        self.rows.iter().all(|r| r.membership == Membership::Member)
    }

    pub fn all_confirmed(&self) -> bool {
        self.rows.iter().all(|r| r.confirmed)
    }

    pub fn render(&self) -> String {
        let mut out = String::from(
            "label         beta     p        rho      p*beta   member  A(1e2)        A(1e3)        A(1e4)        confirmed\n",
        );
        for r in &self.rows {
            let _ = write!(
                out,
                "{:<13} {:<8} {:<8} {:<8} {:<8} {:<7}",
                r.label,
                r.beta,
                r.p,
                r.rho,
                r.p_beta,
                if r.membership == Membership::Member { "yes" } else { "no" }
            );
            for (_, v) in &r.samples {
                let _ = write!(out, " {v:<13.6e}");
            }
            let _ = write!(out, " {}", r.confirmed);
            if !r.within_theorem_hypothesis {
                out.push_str("  (rho = 0: outside theorem hypothesis)");
            }
            out.push('\n');
        }
        out
    }
}

/// Classifies one force family and tabulates its averaging functional.
pub fn avr_row(label: &str, force: &ForceFamily, rho: f64, p: f64) -> Result<AvrRow> {
    let c = classify_lp_avr(force, rho, p)?;
    Ok(AvrRow {
        label: label.to_string(),
        beta: force.envelope_exponent(),
        p,
        rho,
        p_beta: c.p_beta,
        membership: c.membership,
        samples: c.samples,
        confirmed: c.confirmed,
        within_theorem_hypothesis: c.within_theorem_hypothesis,
    })
}

/// Membership table for the configured force.
pub fn verify_avr(config: &ExperimentConfig) -> Result<AvrTable> {
    config.validate()?;
    let force = config.force_family()?;
    Ok(AvrTable {
        rows: vec![avr_row("configured", &force, config.sweep.rho, config.sweep.p)?],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub n: u32,
    /// Worst absolute mode discrepancy over all samples.
    pub max_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub modes: Vec<(i64, i64)>,
    pub rows: Vec<OracleRow>,
}

impl OracleReport {
    pub fn max_error(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.max_abs_error))
    }

    pub fn passed(&self) -> bool {
        self.max_error() <= ORACLE_TOLERANCE
    }
}

/// Retained modes with the largest profile coefficients, one per ±k pair.
pub fn dominant_modes(profile: &VelocityField, count: usize) -> Vec<(i64, i64)> {
    let grid = profile.grid();
    let [px, py] = profile.components();
    let mut modes: Vec<((i64, i64), f64)> = px
        .coeffs()
        .indexed_iter()
        .filter(|((i, j), _)| grid.is_retained(*i, *j))
        .map(|((i, j), cx)| (grid.k(i, j), cx.norm() + py.coeffs()[[i, j]].norm()))
        .filter(|((kx, ky), w)| *w > 0.0 && (*kx > 0 || (*kx == 0 && *ky > 0)))
        .collect();
    modes.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    modes.into_iter().take(count).map(|m| m.0).collect()
}

/// Linear cross-validation: integrates `u' + A u = n^{ρ/p} g(n t)` for every
/// configured `n` and compares `modes` modes against the Duhamel oracle.
pub fn oracle_check(config: &ExperimentConfig, mode_count: usize, workers: usize) -> Result<OracleReport> {
    config.validate()?;
    let family = config.force_family()?;
    let operator = config.operator()?;
    let base = EvolutionProblem::new(
        operator,
        std::sync::Arc::new(ZeroNonlinearity),
        config.initial_state()?,
        config.problem.t0,
        config.problem.horizon,
    )?;
    let modes = dominant_modes(family.profile(), mode_count);
    let s = config.sobolev_order();

    let check = |n: u32| -> Result<OracleRow> {
        let params = config.params(n)?;
        let problem = base.clone().with_forcing(Some(Forcing {
            family: family.clone(),
            params,
        }))?;
        let traj = integrate_with_order(&problem, &config.stepper, s)?;
        if let Some(time) = traj.failure_time() {
            return Err(Error::BlowUp { time });
        }
        let mut worst: f64 = 0.0;
        for (&t, state) in traj.sample_times().iter().zip(traj.states()) {
            for &(kx, ky) in &modes {
                let lambda = operator.eigenvalue_of(kx, ky);
                for (comp, (u0, psi)) in state.components().iter().zip(
                    base.initial_state
                        .components()
                        .into_iter()
                        .zip(family.profile().components()),
                ) {
                    let exact: Complex64 = duhamel_solution(
                        lambda,
                        u0.coeff(kx, ky),
                        psi.coeff(kx, ky),
                        &family,
                        &params,
                        config.problem.t0,
                        t,
                    )?;
                    worst = worst.max((comp.coeff(kx, ky) - exact).norm());
                }
            }
        }
        Ok(OracleRow { n, max_abs_error: worst })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let rows = pool.install(|| {
        config
            .sweep
            .n_list
            .par_iter()
            .map(|&n| check(n))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(OracleReport { modes, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= tol,
        detail: format!("worst {worst:.3e} (tolerance {tol:.0e})"),
    }
}

/// Invariant suite on seeded random fields (`N = 32`).
pub fn selftest(seed: u64, fields: usize) -> Result<Vec<CheckOutcome>> {
    let grid = WaveGrid::new(32)?;
    let mut idem: f64 = 0.0;
    let mut div: f64 = 0.0;
    let mut parseval: f64 = 0.0;
    let mut homog: f64 = 0.0;
    let mut energy: f64 = 0.0;
    for i in 0..fields as u64 {
        let v = random_velocity(grid, seed.wrapping_add(i), 1.5)?;
        let p = v.leray_project();
        idem = idem.max(p.leray_project().sub(&p)?.max_modulus() / v.max_modulus());
        div = div.max(p.divergence().max_modulus() / v.max_modulus());
        let [x, _] = v.components();
        let phys = x.physical_l2_norm()?;
        let spec = x.sobolev_norm(0.0) * 2.0 * std::f64::consts::PI;
        parseval = parseval.max((phys - spec).abs() / spec);
        let c = -2.75;
        homog = homog.max((v.scale(c).sobolev_norm(1.3) - c.abs() * v.sobolev_norm(1.3)).abs() / v.sobolev_norm(1.3));
        energy = energy.max(nonlinear_term(&p).inner(&p)?.norm() / p.l2_norm().powi(2));
    }
    let tg = nonlinear_term(&taylor_green(1.0, grid)).max_modulus();
    let zero_avr = averaging_functional(&ForceFamily::zero(grid), 0.5, 2.0, 100.0)?;
    let member = {
        let profile = taylor_green(1.0, grid);
        let f = ForceFamily::new(0.5, Carrier::ConstantOne, profile)?;
        classify_lp_avr(&f, 0.5, 2.0)?
    };
    Ok(vec![
        outcome("leray idempotence", idem, 1e-12),
        outcome("divergence annihilation", div, 1e-12),
        outcome("parseval", parseval, 1e-12),
        outcome("norm homogeneity", homog, 1e-12),
        outcome("advection energy neutrality", energy, 1e-10),
        outcome("taylor-green advection is a gradient", tg, 1e-12),
        outcome("zero force averages to zero", zero_avr, 0.0),
        CheckOutcome {
            name: "beta = 0.5, p = 2, rho = 0.5 is a confirmed member",
            passed: member.membership == Membership::Member && member.confirmed,
            detail: format!("p*beta = {}", member.p_beta),
        },
    ])
}
