//! Experiment configuration: a flat TOML file with the sections
//! `[problem]`, `[force]`, `[sweep]`, `[stepper]` and `[output]`.
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::evolution::{EvolutionProblem, Nonlinearity, StepperConfig, ZeroNonlinearity};
use crate::forcing::{validate_exponents, Carrier, ForceFamily, OscillationParams};
use crate::navier_stokes::{random_divfree, taylor_green, InitialCondition, NavierStokesAdvection};
use crate::spectral::{trace_order, DiagonalStokesOperator, VelocityField, WaveGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    NavierStokes,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldShape {
    TaylorGreen,
    RandomDivfree,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarrierKind {
    One,
    Sin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub kind: ProblemKind,
    pub viscosity: f64,
    /// Modes per axis.
    pub grid: usize,
    pub horizon: f64,
    #[serde(default)]
    pub t0: f64,
    pub initial: FieldShape,
    /// Taylor-Green amplitude, or ℓ² norm of a random initial field.
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_decay")]
    pub decay: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceSection {
    /// Envelope exponent β of `(1+t)^{-β}`.
    pub beta: f64,
    pub carrier: CarrierKind,
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default)]
    pub phase: f64,
    pub profile: FieldShape,
    /// X-norm (coefficient ℓ²) of the spatial profile.
    #[serde(default = "one")]
    pub profile_norm: f64,
    #[serde(default = "one_u64")]
    pub profile_seed: u64,
    #[serde(default = "default_decay")]
    pub profile_decay: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub rho: f64,
    pub p: f64,
    pub n_list: Vec<u32>,
    /// Initial-data gap `‖u_0^n - u_0^0‖_{X_p} = ic_gap · 2^{-n}`.
    #[serde(default)]
    pub ic_gap: f64,
    #[serde(default = "default_gap_seed")]
    pub ic_gap_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Extra Sobolev orders tabulated in the per-n history files.
    #[serde(default)]
    pub norms: Vec<f64>,
    /// Off by default so that report.csv is byte-reproducible.
    #[serde(default)]
    pub record_wall_time: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSection,
    pub force: ForceSection,
    pub sweep: SweepSection,
    pub stepper: StepperConfig,
    pub output: OutputSection,
}

fn one() -> f64 {
    1.0
}

fn one_u64() -> u64 {
    1
}

fn default_decay() -> f64 {
    2.0
}

fn default_gap_seed() -> u64 {
    2
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file, or the config embedded in a run manifest.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let table: toml::Table = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        if table.contains_key("run") && table.contains_key("config") {
            let manifest: super::Manifest =
                toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            manifest.config.validate()?;
            return Ok(manifest.config);
        }
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |e: Error| Error::Config(e.to_string());
        WaveGrid::new(self.problem.grid).map_err(cfg)?;
        DiagonalStokesOperator::new(self.problem.viscosity).map_err(cfg)?;
        if !(self.problem.horizon > 0.0 && self.problem.horizon.is_finite()) {
            return Err(Error::Config("problem.horizon must be positive".into()));
        }
        if !(self.problem.t0 >= 0.0 && self.problem.t0.is_finite()) {
            return Err(Error::Config("problem.t0 must be >= 0".into()));
        }
        validate_exponents(self.sweep.rho, self.sweep.p).map_err(cfg)?;
        if self.sweep.n_list.contains(&0) {
            return Err(Error::Config("sweep.n_list entries must be positive".into()));
        }
        if self.sweep.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("sweep.n_list must be strictly increasing".into()));
        }
        if !(self.sweep.ic_gap >= 0.0 && self.sweep.ic_gap.is_finite()) {
            return Err(Error::Config("sweep.ic_gap must be >= 0".into()));
        }
        if !(self.force.profile_norm >= 0.0 && self.force.profile_norm.is_finite()) {
            return Err(Error::Config("force.profile_norm must be >= 0".into()));
        }
        if self.output.norms.iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::Config("output.norms must be >= 0".into()));
        }
        self.stepper.validate().map_err(cfg)?;
        Ok(())
    }

    pub fn grid(&self) -> Result<WaveGrid> {
        WaveGrid::new(self.problem.grid)
    }

    /// Sobolev order `2 - 2/p` of the trace-space surrogate.
    pub fn sobolev_order(&self) -> f64 {
        trace_order(self.sweep.p)
    }

    pub fn operator(&self) -> Result<DiagonalStokesOperator> {
        DiagonalStokesOperator::new(self.problem.viscosity)
    }

    pub fn initial_state(&self) -> Result<VelocityField> {
        let p = &self.problem;
        let ic = match p.initial {
            FieldShape::TaylorGreen => InitialCondition::TaylorGreen { amplitude: p.amplitude },
            FieldShape::RandomDivfree => InitialCondition::RandomDivfree {
                seed: p.seed,
                decay: p.decay,
                amplitude: p.amplitude,
            },
            FieldShape::Zero => InitialCondition::Zero,
        };
        ic.build(self.grid()?)
    }

    pub fn nonlinearity(&self) -> Arc<dyn Nonlinearity> {
        match self.problem.kind {
            ProblemKind::NavierStokes => Arc::new(NavierStokesAdvection),
            ProblemKind::Linear => Arc::new(ZeroNonlinearity),
        }
    }

    /// Unforced problem (the limit problem of the sweep).
    pub fn reference_problem(&self) -> Result<EvolutionProblem> {
        EvolutionProblem::new(
            self.operator()?,
            self.nonlinearity(),
            self.initial_state()?,
            self.problem.t0,
            self.problem.horizon,
        )
    }

    pub fn force_family(&self) -> Result<ForceFamily> {
        let f = &self.force;
        let grid = self.grid()?;
        let shape = match f.profile {
            FieldShape::TaylorGreen => taylor_green(1.0, grid),
            FieldShape::RandomDivfree => random_divfree(grid, f.profile_seed, f.profile_decay)?,
            FieldShape::Zero => return Ok(ForceFamily::zero(grid)),
        };
        let norm = shape.l2_norm();
        let profile = shape.scale(if norm > 0.0 { f.profile_norm / norm } else { 0.0 });
        let carrier = match f.carrier {
            CarrierKind::One => Carrier::ConstantOne,
            CarrierKind::Sin => Carrier::Sine {
                frequency: f.omega,
                phase: f.phase,
            },
        };
        ForceFamily::new(f.beta, carrier, profile)
    }

    pub fn params(&self, n: u32) -> Result<OscillationParams> {
        OscillationParams::new(n, self.sweep.rho, self.sweep.p)
    }

    /// Unit-norm (in the trace-space surrogate) perturbation direction for
    /// the initial-data gap.
    pub fn gap_direction(&self) -> Result<VelocityField> {
        let raw = random_divfree(self.grid()?, self.sweep.ic_gap_seed, self.problem.decay.max(1.5))?;
        let norm = raw.sobolev_norm(self.sobolev_order());
        Ok(raw.scale(1.0 / norm))
    }

    /// `ic_gap · 2^{-n}`.
    pub fn gap_size(&self, n: u32) -> f64 {
        self.sweep.ic_gap * 0.5f64.powi(n as i32)
    }
}
