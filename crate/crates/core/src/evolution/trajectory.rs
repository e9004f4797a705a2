use crate::spectral::{DiagonalStokesOperator, VelocityField};
use crate::{Error, Result};

/// Norms recorded at one sample time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSample {
    pub l2: f64,
    /// Sobolev norm of order [`Trajectory::sobolev_order`].
    pub hs: f64,
    /// `½ Σ |ω̂(k)|²` with `ω` the scalar vorticity.
    pub enstrophy: f64,
}

impl NormSample {
    pub fn of(state: &VelocityField, s: f64) -> Self {
        let w = state.curl();
        Self {
            l2: state.l2_norm(),
            hs: state.sobolev_norm(s),
            enstrophy: 0.5 * w.sobolev_norm(0.0).powi(2),
        }
    }
}

/// Time-sampled solution record.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub(crate) sample_times: Vec<f64>,
    pub(crate) states: Vec<VelocityField>,
    pub(crate) norms: Vec<NormSample>,
    pub(crate) sobolev_order: f64,
    pub(crate) failure_time: Option<f64>,
}

impl Trajectory {
    /// Complete trajectory from recorded samples; times must be strictly
    /// increasing and all states must share one grid.
    pub fn from_samples(sample_times: Vec<f64>, states: Vec<VelocityField>, sobolev_order: f64) -> Result<Self> {
        if sample_times.is_empty() || sample_times.len() != states.len() {
            return Err(Error::Shape(format!(
                "{} sample times for {} states",
                sample_times.len(),
                states.len()
            )));
        }
        if !sample_times.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::Domain("sample times must be strictly increasing".into()));
        }
        for s in &states[1..] {
            s.grid().check_same(&states[0].grid())?;
        }
        let norms = states.iter().map(|s| NormSample::of(s, sobolev_order)).collect();
        Ok(Self {
            sample_times,
            states,
            norms,
            sobolev_order,
            failure_time: None,
        })
    }

    pub fn sample_times(&self) -> &[f64] {
        &self.sample_times
    }

    pub fn states(&self) -> &[VelocityField] {
        &self.states
    }

    pub fn norm_series(&self) -> &[NormSample] {
        &self.norms
    }

    pub fn sobolev_order(&self) -> f64 {
        self.sobolev_order
    }

    /// Time of blow-up when the integration stopped early.
    pub fn failure_time(&self) -> Option<f64> {
        self.failure_time
    }

    pub fn is_complete(&self) -> bool {
        self.failure_time.is_none()
    }

    pub fn len(&self) -> usize {
        self.sample_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample_times.is_empty()
    }

    pub fn final_state(&self) -> &VelocityField {
        self.states.last().expect("trajectory holds the initial state")
    }
}

fn check_same_times(a: &Trajectory, b: &Trajectory) -> Result<()> {
    if a.sample_times != b.sample_times {
        return Err(Error::Shape(format!(
            "sample grids differ ({} vs {} samples)",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `max_t ‖a(t) - b(t)‖_{H^s}` over the shared sample grid.
pub fn sup_norm_distance(a: &Trajectory, b: &Trajectory, s: f64) -> Result<f64> {
    check_same_times(a, b)?;
    let mut worst: f64 = 0.0;
    for (x, y) in a.states.iter().zip(&b.states) {
        worst = worst.max(x.sub(y)?.sobolev_norm(s));
    }
    Ok(worst)
}

/// Discrete `W^{1,p}(X) ∩ L^p(D(A))` distance:
/// `(Σ_t w_t (‖∂_t d‖^p + ‖A d‖^p + ‖d‖^p))^{1/p}` with `d = a - b`,
/// trapezoidal weights `w_t`, L² norms, and second-order three-point
/// differences (centered inside, one-sided at the ends; exact for
/// quadratics on non-uniform grids too).
pub fn mixed_norm_distance(
    a: &Trajectory,
    b: &Trajectory,
    operator: &DiagonalStokesOperator,
    p: f64,
) -> Result<f64> {
    check_same_times(a, b)?;
    let m = a.len();
    if m < 3 {
        return Err(Error::Domain(format!(
            "mixed norm needs at least 3 samples, got {m}"
        )));
    }
    let t = &a.sample_times;
    let diffs = a
        .states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| x.sub(y))
        .collect::<Result<Vec<_>>>()?;
    let combine = |i: usize, c: [f64; 3]| -> Result<VelocityField> {
        diffs[i].scale(c[0]).add(&diffs[i + 1].scale(c[1]))?.add(&diffs[i + 2].scale(c[2]))
    };
    let mut total = 0.0;
    for i in 0..m {
        let derivative = if i == 0 {
            let (h1, h2) = (t[1] - t[0], t[2] - t[1]);
            combine(0, [
                -(2.0 * h1 + h2) / (h1 * (h1 + h2)),
                (h1 + h2) / (h1 * h2),
                -h1 / (h2 * (h1 + h2)),
            ])?
        } else if i == m - 1 {
            let (h1, h2) = (t[m - 2] - t[m - 3], t[m - 1] - t[m - 2]);
            combine(m - 3, [
                h2 / (h1 * (h1 + h2)),
                -(h1 + h2) / (h1 * h2),
                (2.0 * h2 + h1) / (h2 * (h1 + h2)),
            ])?
        } else {
            let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
            combine(i - 1, [
                -h2 / (h1 * (h1 + h2)),
                (h2 - h1) / (h1 * h2),
                h1 / (h2 * (h1 + h2)),
            ])?
        };
        let weight = 0.5 * (t[(i + 1).min(m - 1)] - t[i.saturating_sub(1)]);
        let d = &diffs[i];
        total += weight
            * (derivative.l2_norm().powf(p) + operator.apply(d).l2_norm().powf(p) + d.l2_norm().powf(p));
    }
    Ok(total.powf(1.0 / p))
}
