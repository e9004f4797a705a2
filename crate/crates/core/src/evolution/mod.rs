//! Time integration of `u' + A u = f(u) + n^{ρ/p} g(n t)` with diagonal `A`.
//!
//! The stiff linear part is propagated exactly per mode; the nonlinearity
//! and the force enter through ETDRK4 (Cox–Matthews) or an integrating
//! factor RK4. Step sizes are chosen so that every sample time is hit
//! exactly and the fast scale `n t` is resolved.

mod scheme;
mod trajectory;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::forcing::{scaled_trace, ForceFamily, OscillationParams};
use crate::spectral::{DiagonalStokesOperator, SpectralField, VelocityField, WaveGrid};
use crate::{Error, Result};

use scheme::{Coefficients, Pair};
pub use trajectory::{mixed_norm_distance, sup_norm_distance, NormSample, Trajectory};

/// Growth of `‖u‖_{L²}` over its initial value treated as blow-up.
pub const BLOW_UP_FACTOR: f64 = 1e6;

/// State-dependent part `f(u)` of the right-hand side.
pub trait Nonlinearity: Send + Sync + std::fmt::Debug {
    fn apply(&self, v: &VelocityField) -> VelocityField;

    /// When true the stepper skips evaluating the term.
    fn is_zero(&self) -> bool {
        false
    }
}

/// `f = 0`: the linear Stokes problem.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroNonlinearity;

impl Nonlinearity for ZeroNonlinearity {
    fn apply(&self, v: &VelocityField) -> VelocityField {
        VelocityField::zeros(v.grid())
    }

    fn is_zero(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    Etdrk4,
    IntegratingFactorRk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperConfig {
    pub base_dt: f64,
    /// `c_osc` in `dt <= c_osc / (n ω)`.
    #[serde(default = "default_oscillation_safety")]
    pub oscillation_safety: f64,
    /// Base steps between recorded samples.
    #[serde(default = "default_sample_stride")]
    pub sample_stride: usize,
    #[serde(default)]
    pub scheme: Scheme,
}

fn default_oscillation_safety() -> f64 {
    0.1
}

fn default_sample_stride() -> usize {
    10
}

impl StepperConfig {
    pub fn new(base_dt: f64) -> Self {
        Self {
            base_dt,
            oscillation_safety: default_oscillation_safety(),
            sample_stride: default_sample_stride(),
            scheme: Scheme::Etdrk4,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_oscillation_safety(mut self, c: f64) -> Self {
        self.oscillation_safety = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_dt > 0.0 && self.base_dt.is_finite()) {
            return Err(Error::Domain(format!("base_dt must be positive, got {}", self.base_dt)));
        }
        if !(self.oscillation_safety > 0.0 && self.oscillation_safety.is_finite()) {
            return Err(Error::Domain(format!(
                "oscillation_safety must be positive, got {}",
                self.oscillation_safety
            )));
        }
        if self.sample_stride == 0 {
            return Err(Error::Domain("sample_stride must be >= 1".into()));
        }
        Ok(())
    }
}

/// Scaled oscillating force attached to a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Forcing {
    pub family: ForceFamily,
    pub params: OscillationParams,
}

impl Forcing {
    /// False for `n = 0` or a zero profile; such forcing is never evaluated.
    pub fn is_active(&self) -> bool {
        self.params.n() > 0 && !self.family.is_null()
    }

    /// Fastest time scale `n ω` of the scaled force; the envelope alone
    /// varies on `1/n`, so the constant carrier counts as `ω = 1`.
    pub fn fast_rate(&self) -> f64 {
        self.params.n() as f64 * self.family.carrier().frequency().unwrap_or(1.0)
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionProblem {
    pub operator: DiagonalStokesOperator,
    pub nonlinearity: Arc<dyn Nonlinearity>,
    pub forcing: Option<Forcing>,
    pub initial_state: VelocityField,
    pub t0: f64,
    pub horizon: f64,
}

impl EvolutionProblem {
    pub fn new(
        operator: DiagonalStokesOperator,
        nonlinearity: Arc<dyn Nonlinearity>,
        initial_state: VelocityField,
        t0: f64,
        horizon: f64,
    ) -> Result<Self> {
        let problem = Self {
            operator,
            nonlinearity,
            forcing: None,
            initial_state,
            t0,
            horizon,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn with_forcing(mut self, forcing: Option<Forcing>) -> Result<Self> {
        if let Some(f) = &forcing {
            self.initial_state.grid().check_same(&f.family.profile().grid())?;
        }
        self.forcing = forcing;
        Ok(self)
    }

    pub fn with_initial_state(mut self, state: VelocityField) -> Result<Self> {
        self.initial_state = state;
        self.validate()?;
        Ok(self)
    }

    pub fn grid(&self) -> WaveGrid {
        self.initial_state.grid()
    }

    fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !self.t0.is_finite() {
            return Err(Error::Domain("t0 must be finite".into()));
        }
        if !self.initial_state.is_certified_divergence_free() {
            return Err(Error::MalformedField(
                "initial state lacks the divergence-free certificate".into(),
            ));
        }
        Ok(())
    }

    fn active_forcing(&self) -> Option<&Forcing> {
        self.forcing.as_ref().filter(|f| f.is_active())
    }

    /// Right-hand side `f(u) + n^{ρ/p} g(n t)` on raw coefficient pairs.
    fn rhs(&self, u: &Pair, t: f64) -> Result<Pair> {
        let grid = self.grid();
        let mut out: Pair = if self.nonlinearity.is_zero() {
            let n = grid.modes_per_axis();
            [ndarray::Array2::zeros((n, n)), ndarray::Array2::zeros((n, n))]
        } else {
            let v = from_pair(grid, u)?;
            into_pair(self.nonlinearity.apply(&v))
        };
        if let Some(f) = self.active_forcing() {
            let amp = scaled_trace(&f.family, &f.params, t);
            for (o, psi) in out.iter_mut().zip(f.family.profile().components()) {
                o.zip_mut_with(psi.coeffs(), |a, b| *a += amp * b);
            }
        }
        Ok(out)
    }
}

fn into_pair(v: VelocityField) -> Pair {
    let [x, y] = v.components();
    [x.coeffs().clone(), y.coeffs().clone()]
}

fn from_pair(grid: WaveGrid, u: &Pair) -> Result<VelocityField> {
    VelocityField::new(
        SpectralField::from_coeffs(grid, u[0].clone())?,
        SpectralField::from_coeffs(grid, u[1].clone())?,
    )
}

fn finalize(grid: WaveGrid, u: Pair) -> Result<VelocityField> {
    let mut v = from_pair(grid, &u)?;
    v.dealias_in_place();
    v.leray_project_in_place();
    Ok(v)
}

fn blow_up_threshold(initial: &VelocityField) -> f64 {
    let norm = initial.l2_norm();
    BLOW_UP_FACTOR * if norm > 0.0 { norm } else { 1.0 }
}

fn check_state(v: &VelocityField, threshold: f64, time: f64) -> Result<()> {
    if !v.is_finite() || !(v.l2_norm() <= threshold) {
        return Err(Error::BlowUp { time });
    }
    Ok(())
}

/// Prepared single-step map for a fixed step size.
struct Stepper<'a> {
    problem: &'a EvolutionProblem,
    coefficients: Coefficients,
    threshold: f64,
}

impl<'a> Stepper<'a> {
    fn new(problem: &'a EvolutionProblem, scheme: Scheme, dt: f64) -> Self {
        let eigen = problem.operator.eigenvalues(&problem.grid());
        Self {
            problem,
            coefficients: Coefficients::new(scheme, &eigen, dt),
            threshold: blow_up_threshold(&problem.initial_state),
        }
    }

    fn advance(&self, state: &VelocityField, t: f64) -> Result<VelocityField> {
        let grid = self.problem.grid();
        let u = into_pair(state.clone());
        let next = self
            .coefficients
            .advance(&u, t, |x, s| self.problem.rhs(x, s))?;
        let v = finalize(grid, next)?;
        check_state(&v, self.threshold, t + self.coefficients.dt())?;
        Ok(v)
    }
}

/// Advances `state` from `t` to `t + dt` with ETDRK4.
///
/// Fails with [`Error::BlowUp`] at `t + dt` when the result is not finite
/// or exceeds [`BLOW_UP_FACTOR`] times the problem's initial L² norm.
pub fn step(problem: &EvolutionProblem, state: &VelocityField, t: f64, dt: f64) -> Result<VelocityField> {
    step_with(problem, Scheme::Etdrk4, state, t, dt)
}

pub fn step_with(
    problem: &EvolutionProblem,
    scheme: Scheme,
    state: &VelocityField,
    t: f64,
    dt: f64,
) -> Result<VelocityField> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    if !state.is_certified_divergence_free() {
        return Err(Error::MalformedField("state is not divergence-free".into()));
    }
    Stepper::new(problem, scheme, dt).advance(state, t)
}

/// Step layout of one integration: `base_steps` base intervals, each split
/// into `substeps` equal steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    pub base_steps: usize,
    pub substeps: usize,
    pub base_dt: f64,
    pub dt: f64,
}

impl StepPlan {
    pub fn new(problem: &EvolutionProblem, config: &StepperConfig) -> Result<Self> {
        config.validate()?;
        let base_steps = ((problem.horizon / config.base_dt) - 1e-9).ceil().max(1.0) as usize;
        let base_dt = problem.horizon / base_steps as f64;
        let substeps = match problem.active_forcing() {
            Some(f) => {
                let limit = config.oscillation_safety / f.fast_rate();
                ((base_dt / limit) - 1e-12).ceil().max(1.0) as usize
            }
            None => 1,
        };
        Ok(Self {
            base_steps,
            substeps,
            base_dt,
            dt: base_dt / substeps as f64,
        })
    }
}

/// Integrates over `[t0, t0 + T]`, recording every `sample_stride` base steps
/// and at the final time. Blow-up truncates the trajectory and records the
/// failure time instead of returning an error.
pub fn integrate(problem: &EvolutionProblem, config: &StepperConfig) -> Result<Trajectory> {
    let plan = StepPlan::new(problem, config)?;
    let s = config_sobolev_order(problem);
    integrate_planned(problem, config, &plan, s)
}

/// Like [`integrate`], recording H^s norms of order `sobolev_order`.
pub fn integrate_with_order(
    problem: &EvolutionProblem,
    config: &StepperConfig,
    sobolev_order: f64,
) -> Result<Trajectory> {
    let plan = StepPlan::new(problem, config)?;
    integrate_planned(problem, config, &plan, sobolev_order)
}

fn config_sobolev_order(problem: &EvolutionProblem) -> f64 {
    let p = problem.forcing.as_ref().map_or(3.0, |f| f.params.p());
    crate::spectral::trace_order(p)
}

fn integrate_planned(
    problem: &EvolutionProblem,
    config: &StepperConfig,
    plan: &StepPlan,
    sobolev_order: f64,
) -> Result<Trajectory> {
    let stepper = Stepper::new(problem, config.scheme, plan.dt);
    let mut state = problem.initial_state.clone();
    let mut traj = Trajectory {
        sample_times: vec![problem.t0],
        norms: vec![NormSample::of(&state, sobolev_order)],
        states: vec![state.clone()],
        sobolev_order,
        failure_time: None,
    };
    for m in 0..plan.base_steps {
        let base_t = problem.t0 + m as f64 * plan.base_dt;
        for j in 0..plan.substeps {
            let t = base_t + j as f64 * plan.dt;
            match stepper.advance(&state, t) {
                Ok(next) => state = next,
                Err(Error::BlowUp { time }) => {
                    traj.failure_time = Some(time);
                    return Ok(traj);
                }
                Err(e) => return Err(e),
            }
        }
        let done = m + 1;
        if done % config.sample_stride == 0 || done == plan.base_steps {
            let t = if done == plan.base_steps {
                problem.t0 + problem.horizon
            } else {
                problem.t0 + done as f64 * plan.base_dt
            };
            traj.sample_times.push(t);
            traj.norms.push(NormSample::of(&state, sobolev_order));
            traj.states.push(state.clone());
        }
    }
    Ok(traj)
}
