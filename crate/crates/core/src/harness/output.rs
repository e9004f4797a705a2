use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::sweep::{ConvergenceReport, HistoryPoint};
use crate::evolution::Trajectory;
use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "n,sup_error_hs,sup_error_l2,mixed_norm_error,gronwall_rhs_root,bound_ratio,status,failure_time,wall_time_s";

/// Shortest decimal that round-trips to the same `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// `report.csv` contents, rows in ascending `n`.
pub fn report_csv(report: &ConvergenceReport) -> String {
    let mut rows: Vec<_> = report.rows.iter().collect();
    rows.sort_by_key(|r| r.n);
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            fmt_opt(r.sup_error_hs),
            fmt_opt(r.sup_error_l2),
            fmt_opt(r.mixed_norm_error),
            fmt_opt(r.gronwall_rhs_root),
            fmt_opt(r.bound_ratio),
            r.status.as_str(),
            fmt_opt(r.failure_time),
            fmt_float(r.wall_time_s),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub config_hash: String,
    pub code_version: String,
    pub sobolev_order: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fitted_constant: Option<f64>,
}

/// Run record; the embedded config replays the run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub run: RunInfo,
    pub config: ExperimentConfig,
}

impl Manifest {
    pub fn new(config: &ExperimentConfig, report: &ConvergenceReport) -> Self {
        Self {
            run: RunInfo {
                config_hash: report.metadata.config_hash.clone(),
                code_version: report.metadata.code_version.clone(),
                sobolev_order: report.metadata.sobolev_order,
                fitted_constant: report.metadata.fitted_constant,
            },
            config: config.clone(),
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }
}

fn history_csv(points: &[HistoryPoint], extra: &[f64]) -> String {
    let mut out = String::from("t,l2,hs,enstrophy,error_l2,error_hs");
    for s in extra {
        let _ = write!(out, ",error_s{}", fmt_float(*s));
    }
    out.push('\n');
    for p in points {
        let _ = write!(
            out,
            "{},{},{},{},{},{}",
            fmt_float(p.t),
            fmt_float(p.l2),
            fmt_float(p.hs),
            fmt_float(p.enstrophy),
            fmt_float(p.error_l2),
            fmt_float(p.error_hs)
        );
        for e in &p.error_extra {
            let _ = write!(out, ",{}", fmt_float(*e));
        }
        out.push('\n');
    }
    out
}

/// Norm history of a single trajectory.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,l2,hs,enstrophy\n");
    for (t, n) in traj.sample_times().iter().zip(traj.norm_series()) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_float(*t),
            fmt_float(n.l2),
            fmt_float(n.hs),
            fmt_float(n.enstrophy)
        );
    }
    out
}

/// Nonzero coefficients of the first and last recorded states.
pub fn snapshots_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,component,kx,ky,re,im\n");
    let last = traj.len() - 1;
    let picks: Vec<usize> = if last == 0 { vec![0] } else { vec![0, last] };
    for i in picks {
        let t = traj.sample_times()[i];
        let state = &traj.states()[i];
        let grid = state.grid();
        for (name, comp) in ["x", "y"].iter().zip(state.components()) {
            for ((ix, iy), c) in comp.coeffs().indexed_iter() {
                if c.norm() == 0.0 {
                    continue;
                }
                let (kx, ky) = grid.k(ix, iy);
                let _ = writeln!(
                    out,
                    "{},{name},{kx},{ky},{},{}",
                    fmt_float(t),
                    fmt_float(c.re),
                    fmt_float(c.im)
                );
            }
        }
    }
    out
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `report.csv`, `manifest.toml`, `error_vs_n.svg` and one
/// `history_n<n>.csv` per successful row. Returns the written paths.
pub fn emit_outputs(report: &ConvergenceReport, config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = vec![
        write(dir.join("report.csv"), &report_csv(report))?,
        write(dir.join("manifest.toml"), &Manifest::new(config, report).to_toml_string())?,
        write(dir.join("error_vs_n.svg"), &super::plot::error_vs_n_svg(report))?,
    ];
    for row in &report.rows {
        if row.history.is_empty() {
            continue;
        }
        written.push(write(
            dir.join(format!("history_n{}.csv", row.n)),
            &history_csv(&row.history, &config.output.norms),
        )?);
    }
    Ok(written)
}

/// Writes the reference norm history and its first/last snapshots.
pub fn emit_reference(traj: &Trajectory, config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    Ok(vec![
        write(dir.join("reference_history.csv"), &trajectory_csv(traj))?,
        write(dir.join("reference_snapshots.csv"), &snapshots_csv(traj))?,
        write(dir.join("reference_config.toml"), &config.to_toml_string())?,
    ])
}
