//! Independent references: per-mode Duhamel integrals for the linear
//! problem and the Gronwall-type error bound.
//!
//! For a diagonal operator the variation-of-constants formula gives each
//! Fourier mode in closed form up to one scalar integral,
//!
//! ```text
//! û(t) = e^{-λ(t-t0)} û(t0) + ψ̂ n^{ρ/p} ∫_{t0}^{t} e^{-λ(t-s)} a(ns) c(ns) ds,
//! ```
//!
//! which is evaluated here by adaptive quadrature, never by time stepping.

use num_complex::Complex64;

use crate::forcing::{ForceFamily, OscillationParams};
use crate::quadrature::{integrate_with_breaks, QuadratureOptions};
use crate::{Error, Result};

/// Relative tolerance of the Duhamel quadrature.
pub const DUHAMEL_TOL: f64 = 1e-10;

/// `n^{ρ/p} ∫_{t0}^{t} e^{-λ(t-s)} a(ns) c(ns) ds`, the response of a mode
/// with eigenvalue `λ` to a unit profile coefficient (zero for a null force).
pub fn duhamel_mode(
    eigenvalue: f64,
    force: &ForceFamily,
    params: &OscillationParams,
    t0: f64,
    t: f64,
) -> Result<f64> {
    if !(eigenvalue >= 0.0 && eigenvalue.is_finite()) {
        return Err(Error::Domain(format!("eigenvalue must be >= 0, got {eigenvalue}")));
    }
    if !(t >= t0 && t0 >= 0.0) {
        return Err(Error::Domain(format!("need 0 <= t0 <= t, got t0 = {t0}, t = {t}")));
    }
    if params.n() == 0 || force.is_null() || t == t0 {
        return Ok(0.0);
    }
    let n = params.n() as f64;
    let mut breaks = vec![t0];
    breaks.extend(force.carrier().zeros_in(n * t0, n * t).into_iter().map(|z| z / n));
    breaks.push(t);
    let amp = params.amplitude();
    let opts = QuadratureOptions::relative(DUHAMEL_TOL).with_abs_tol(1e-15 * amp * (t - t0));
    let q = integrate_with_breaks(
        |s| (-eigenvalue * (t - s)).exp() * force.trace(n * s),
        &breaks,
        opts,
    )
    .map_err(|e| match e {
        Error::OracleFailure(msg) => Error::OracleFailure(format!("duhamel quadrature: {msg}")),
        other => other,
    })?;
    Ok(amp * q.value)
}

/// Full mode value `e^{-λ(t-t0)} û0 + ψ̂ · duhamel_mode(...)`.
pub fn duhamel_solution(
    eigenvalue: f64,
    initial: Complex64,
    profile: Complex64,
    force: &ForceFamily,
    params: &OscillationParams,
    t0: f64,
    t: f64,
) -> Result<Complex64> {
    let response = duhamel_mode(eigenvalue, force, params, t0, t)?;
    Ok(initial * (-eigenvalue * (t - t0)).exp() + profile * response)
}

/// Terms of `‖φ_n(t) - φ_0(t)‖^p ≤ C (‖u_0^n - u_0^0‖^p + ‖n^{ρ/p} g(n·)‖^p_{L^p})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallInputs {
    /// `‖u_0^n - u_0^0‖` in the trace-space surrogate.
    pub ic_gap: f64,
    /// `‖n^{ρ/p} g(n·)‖^p_{L^p(t0, t0+T; X)}`, already raised to `p`.
    pub force_term: f64,
    pub p: f64,
    pub constant: f64,
}

impl GronwallInputs {
    pub fn new(ic_gap: f64, force_term: f64, p: f64, constant: f64) -> Result<Self> {
        for (name, v) in [("ic_gap", ic_gap), ("force_term", force_term), ("constant", constant)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::Domain(format!("p must be > 1, got {p}")));
        }
        Ok(Self {
            ic_gap,
            force_term,
            p,
            constant,
        })
    }

    /// `ic_gap^p + force_term`.
    pub fn data_term(&self) -> f64 {
        self.ic_gap.powf(self.p) + self.force_term
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallBound {
    /// `C (ic_gap^p + force_term)`
    pub value: f64,
    /// `value^{1/p}`, comparable with a measured norm.
    pub root: f64,
}

pub fn gronwall_rhs(inputs: &GronwallInputs) -> GronwallBound {
    let value = inputs.constant * inputs.data_term();
    GronwallBound {
        value,
        root: value.powf(1.0 / inputs.p),
    }
}

/// `measured^p / (ic_gap^p + force_term)`.
///
/// Both data terms vanishing forces `measured = 0` (uniqueness); the
/// ratio is then `0`, and any positive measurement is an inconsistency.
pub fn bound_ratio(measured_sup_error: f64, inputs: &GronwallInputs) -> Result<f64> {
    if !(measured_sup_error >= 0.0) {
        return Err(Error::Domain(format!(
            "measured error must be >= 0, got {measured_sup_error}"
        )));
    }
    let denominator = inputs.data_term();
    if denominator == 0.0 {
        if measured_sup_error == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::Inconsistency(format!(
            "error {measured_sup_error:e} with identical data and zero force"
        )));
    }
    Ok(measured_sup_error.powf(inputs.p) / denominator)
}
