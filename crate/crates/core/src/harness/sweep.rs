use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use crate::evolution::{
    integrate_with_order, mixed_norm_distance, sup_norm_distance, Forcing, Trajectory,
};
use crate::forcing::scaled_force_lp_norm;
use crate::oracle::{bound_ratio, gronwall_rhs, GronwallInputs};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Failed,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Failed => "failed",
        }
    }
}

/// Error history of one forced run against the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryPoint {
    pub t: f64,
    pub l2: f64,
    pub hs: f64,
    pub enstrophy: f64,
    pub error_l2: f64,
    pub error_hs: f64,
    /// Errors in the extra Sobolev orders of `[output] norms`.
    pub error_extra: Vec<f64>,
}

/// One `n` of a sweep. Metrics are `None` for failed rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    pub sup_error_hs: Option<f64>,
    pub sup_error_l2: Option<f64>,
    pub mixed_norm_error: Option<f64>,
    pub gronwall_rhs_root: Option<f64>,
    pub bound_ratio: Option<f64>,
    pub status: RowStatus,
    pub failure_time: Option<f64>,
    pub wall_time_s: f64,
    pub ic_gap: f64,
    pub history: Vec<HistoryPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportMetadata {
    pub config_hash: String,
    pub code_version: String,
    pub sobolev_order: f64,
    /// Largest bound ratio over successful rows: the fitted constant `C`.
    pub fitted_constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<SweepRow>,
    pub metadata: ReportMetadata,
}

impl ConvergenceReport {
    pub fn row(&self, n: u32) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn sup_errors_hs(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.sup_error_hs).collect()
    }

    pub fn bound_ratios(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.bound_ratio).collect()
    }
}

/// SHA-256 of the canonical TOML rendering of the config.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let digest = Sha256::digest(config.to_toml_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Integrates the unforced problem `v' + A v = f(v)`.
///
/// A truncated reference is an error: nothing downstream can be compared
/// against it.
pub fn run_reference(config: &ExperimentConfig) -> Result<Trajectory> {
    config.validate()?;
    let problem = config.reference_problem()?;
    let traj = integrate_with_order(&problem, &config.stepper, config.sobolev_order())?;
    match traj.failure_time() {
        Some(time) => Err(Error::BlowUp { time }),
        None => Ok(traj),
    }
}

/// Runs the forced problem for every `n` and compares against `reference`.
pub fn run_sweep_against(
    config: &ExperimentConfig,
    reference: &Trajectory,
    workers: usize,
) -> Result<ConvergenceReport> {
    config.validate()?;
    let family = config.force_family()?;
    let base = config.reference_problem()?;
    let operator = config.operator()?;
    let gap_direction = if config.sweep.ic_gap > 0.0 {
        Some(config.gap_direction()?)
    } else {
        None
    };
    let s = config.sobolev_order();
    let p = config.sweep.p;

    let compute = |n: u32| -> Result<SweepRow> {
        let started = Instant::now();
        let params = config.params(n)?;
        let gap = config.gap_size(n);
        let mut problem = base.clone();
        if let Some(dir) = &gap_direction {
            let u0 = problem.initial_state.add(&dir.scale(gap))?.leray_project();
            problem = problem.with_initial_state(u0)?;
        }
        let measured_gap = problem.initial_state.sub(&base.initial_state)?.sobolev_norm(s);
        let problem = problem.with_forcing(Some(Forcing {
            family: family.clone(),
            params,
        }))?;
        let traj = integrate_with_order(&problem, &config.stepper, s)?;
        let wall_time_s = if config.output.record_wall_time {
            started.elapsed().as_secs_f64()
        } else {
            0.0
        };
        if let Some(time) = traj.failure_time() {
            return Ok(SweepRow {
                n,
                sup_error_hs: None,
                sup_error_l2: None,
                mixed_norm_error: None,
                gronwall_rhs_root: None,
                bound_ratio: None,
                status: RowStatus::Failed,
                failure_time: Some(time),
                wall_time_s,
                ic_gap: measured_gap,
                history: Vec::new(),
            });
        }
        let sup_hs = sup_norm_distance(&traj, reference, s)?;
        let sup_l2 = sup_norm_distance(&traj, reference, 0.0)?;
        let mixed = mixed_norm_distance(&traj, reference, &operator, p)?;
        let force_term = scaled_force_lp_norm(&family, &params, config.problem.t0, config.problem.horizon)?
            .powf(p);
        let inputs = GronwallInputs::new(measured_gap, force_term, p, 1.0)?;
        let ratio = bound_ratio(sup_hs, &inputs)?;
        let history = history(&traj, reference, s, &config.output.norms)?;
        Ok(SweepRow {
            n,
            sup_error_hs: Some(sup_hs),
            sup_error_l2: Some(sup_l2),
            mixed_norm_error: Some(mixed),
            gronwall_rhs_root: Some(gronwall_rhs(&inputs).root),
            bound_ratio: Some(ratio),
            status: RowStatus::Ok,
            failure_time: None,
            wall_time_s,
            ic_gap: measured_gap,
            history,
        })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let mut rows = pool.install(|| {
        config
            .sweep
            .n_list
            .par_iter()
            .map(|&n| compute(n))
            .collect::<Result<Vec<_>>>()
    })?;
    rows.sort_by_key(|r| r.n);

    let fitted_constant = rows
        .iter()
        .filter_map(|r| r.bound_ratio)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    Ok(ConvergenceReport {
        rows,
        metadata: ReportMetadata {
            config_hash: config_hash(config),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            sobolev_order: s,
            fitted_constant,
        },
    })
}

/// Reference run followed by the n-sweep.
pub fn run_sweep(config: &ExperimentConfig, workers: usize) -> Result<(Trajectory, ConvergenceReport)> {
    let reference = run_reference(config)?;
    let report = run_sweep_against(config, &reference, workers)?;
    Ok((reference, report))
}

fn history(
    traj: &Trajectory,
    reference: &Trajectory,
    s: f64,
    extra: &[f64],
) -> Result<Vec<HistoryPoint>> {
    traj.sample_times()
        .iter()
        .zip(traj.states())
        .zip(reference.states())
        .zip(traj.norm_series())
        .map(|(((&t, a), b), norms)| {
            let d = a.sub(b)?;
            Ok(HistoryPoint {
                t,
                l2: norms.l2,
                hs: norms.hs,
                enstrophy: norms.enstrophy,
                error_l2: d.l2_norm(),
                error_hs: d.sobolev_norm(s),
                error_extra: extra.iter().map(|&o| d.sobolev_norm(o)).collect(),
            })
        })
        .collect()
}
