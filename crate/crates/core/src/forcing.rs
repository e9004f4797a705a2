//! Separable oscillating forces `g(t, x) = a(t) c(t) ψ(x)` and the scaled
//! family `n^{ρ/p} g(n t, x)`.
//!
//! Only the time profile of `‖g(t)‖_X` matters for the averaging class, so
//! every integral here reduces to `‖ψ‖^p ∫ (1+s)^{-pβ} |c(s)|^p ds`. The
//! X-norm is measured as the coefficient ℓ² norm of the profile.

use std::f64::consts::PI;

use crate::quadrature::{integrate_with_breaks, QuadratureOptions};
use crate::spectral::VelocityField;
use crate::{Error, Result};

/// Relative tolerance of every quadrature in this module.
pub const FORCING_QUADRATURE_TOL: f64 = 1e-10;

/// Horizons used to confirm an `L^p_avr` classification numerically.
pub const CONFIRMATION_HORIZONS: [f64; 3] = [1e2, 1e3, 1e4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Carrier {
    ConstantOne,
    /// `sin(frequency * t + phase)`.
    Sine { frequency: f64, phase: f64 },
}

impl Carrier {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Carrier::ConstantOne => 1.0,
            Carrier::Sine { frequency, phase } => (frequency * t + phase).sin(),
        }
    }

    /// Angular frequency, or `None` for the constant carrier.
    pub fn frequency(&self) -> Option<f64> {
        match *self {
            Carrier::ConstantOne => None,
            Carrier::Sine { frequency, .. } => Some(frequency),
        }
    }

    /// Zeros of the carrier strictly inside `(a, b)`, ascending.
    pub fn zeros_in(&self, a: f64, b: f64) -> Vec<f64> {
        match *self {
            Carrier::ConstantOne => Vec::new(),
            Carrier::Sine { frequency, phase } => {
                let first = ((frequency * a + phase) / PI).floor() as i64 + 1;
                let mut out = Vec::new();
                let mut m = first;
                loop {
                    let z = (m as f64 * PI - phase) / frequency;
                    if z >= b {
                        break;
                    }
                    if z > a {
                        out.push(z);
                    }
                    m += 1;
                }
                out
            }
        }
    }
}

/// Oscillating force `g(t) = (1+t)^{-β} c(t) ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceFamily {
    envelope_exponent: f64,
    carrier: Carrier,
    profile: VelocityField,
    profile_norm: f64,
}

impl ForceFamily {
    /// The profile must pass the divergence-free certificate.
    pub fn new(envelope_exponent: f64, carrier: Carrier, profile: VelocityField) -> Result<Self> {
        if !(envelope_exponent >= 0.0 && envelope_exponent.is_finite()) {
            return Err(Error::Domain(format!(
                "envelope exponent must be finite and >= 0, got {envelope_exponent}"
            )));
        }
        if let Carrier::Sine { frequency, phase } = carrier {
            if !(frequency > 0.0 && frequency.is_finite() && phase.is_finite()) {
                return Err(Error::Domain(format!(
                    "carrier frequency must be positive, got {frequency}"
                )));
            }
        }
        let profile = profile.certify_divergence_free()?;
        let profile_norm = profile.l2_norm();
        Ok(Self {
            envelope_exponent,
            carrier,
            profile,
            profile_norm,
        })
    }

    /// The zero force on the profile's grid.
    pub fn zero(profile_grid: crate::spectral::WaveGrid) -> Self {
        Self {
            envelope_exponent: 0.0,
            carrier: Carrier::ConstantOne,
            profile: VelocityField::zeros(profile_grid),
            profile_norm: 0.0,
        }
    }

    pub fn envelope_exponent(&self) -> f64 {
        self.envelope_exponent
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn profile(&self) -> &VelocityField {
        &self.profile
    }

    /// Cached X-norm (coefficient ℓ²) of the profile.
    pub fn profile_norm(&self) -> f64 {
        self.profile_norm
    }

    pub fn is_null(&self) -> bool {
        self.profile_norm == 0.0
    }

    /// `a(t) = (1+t)^{-β}`.
    pub fn envelope(&self, t: f64) -> f64 {
        (1.0 + t).powf(-self.envelope_exponent)
    }

    /// Scalar time trace `a(t) c(t)`; the force is this times the profile.
    pub fn trace(&self, t: f64) -> f64 {
        self.envelope(t) * self.carrier.value(t)
    }

    /// `‖g(t)‖_X`.
    pub fn norm_at(&self, t: f64) -> f64 {
        self.envelope(t) * self.carrier.value(t).abs() * self.profile_norm
    }

    /// `∫_a^b ‖g(s)‖^p ds`, in closed form for the constant carrier.
    pub fn norm_power_integral(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        if !(b >= a && a >= 0.0) {
            return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
        }
        if self.is_null() || a == b {
            return Ok(0.0);
        }
        let q = p * self.envelope_exponent;
        let time_part = match self.carrier {
            Carrier::ConstantOne => envelope_power_integral(q, a, b),
            Carrier::Sine { .. } => {
                let mut breaks = vec![a];
                breaks.extend(self.carrier.zeros_in(a, b));
                breaks.push(b);
                let carrier = self.carrier;
                integrate_with_breaks(
                    |s| (1.0 + s).powf(-q) * carrier.value(s).abs().powf(p),
                    &breaks,
                    QuadratureOptions::relative(FORCING_QUADRATURE_TOL),
                )?
                .value
            }
        };
        Ok(self.profile_norm.powf(p) * time_part)
    }
}

/// `∫_a^b (1+s)^{-q} ds` without cancellation near `q = 1`.
pub fn envelope_power_integral(q: f64, a: f64, b: f64) -> f64 {
    let log_ratio = ((1.0 + b) / (1.0 + a)).ln();
    let e = 1.0 - q;
    if e == 0.0 {
        log_ratio
    } else {
        (1.0 + a).powf(e) * (e * log_ratio).exp_m1() / e
    }
}

/// Frequency index `n`, scaling `ρ` and integrability exponent `p`.
///
/// `n = 0` denotes the unforced limit problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationParams {
    n: u32,
    rho: f64,
    p: f64,
}

impl OscillationParams {
    pub fn new(n: u32, rho: f64, p: f64) -> Result<Self> {
        validate_exponents(rho, p)?;
        Ok(Self { n, rho, p })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn with_n(self, n: u32) -> Self {
        Self { n, ..self }
    }

    /// Amplitude factor `n^{ρ/p}`.
    pub fn amplitude(&self) -> f64 {
        (self.n as f64).powf(self.rho / self.p)
    }

    /// The convergence theorem assumes `ρ ∈ (0, 1)`; `ρ = 0` is accepted
    /// but falls outside it.
    pub fn within_theorem_hypothesis(&self) -> bool {
        self.rho > 0.0
    }
}

pub(crate) fn validate_exponents(rho: f64, p: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho must lie in [0, 1), got {rho}")));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("p must be finite and > 1, got {p}")));
    }
    Ok(())
}

/// Scalar factor `n^{ρ/p} a(nt) c(nt)` multiplying the profile.
pub fn scaled_trace(force: &ForceFamily, params: &OscillationParams, t: f64) -> f64 {
    if params.n == 0 {
        return 0.0;
    }
    let n = params.n as f64;
    params.amplitude() * force.trace(n * t)
}

/// `n^{ρ/p} g(n t)`; the zero field for `n = 0`.
pub fn evaluate_scaled_force(force: &ForceFamily, params: &OscillationParams, t: f64) -> VelocityField {
    if params.n == 0 || force.is_null() {
        return VelocityField::zeros(force.profile.grid());
    }
    force.profile.scale(scaled_trace(force, params, t))
}

/// `T^{ρ-1} ∫_0^T ‖g(s)‖^p ds`.
pub fn averaging_functional(force: &ForceFamily, rho: f64, p: f64, horizon: f64) -> Result<f64> {
    validate_exponents(rho, p)?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    Ok(horizon.powf(rho - 1.0) * force.norm_power_integral(p, 0.0, horizon)?)
}

fn check_window(t0: f64, horizon: f64) -> Result<()> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    if !(t0 >= 0.0 && t0.is_finite()) {
        return Err(Error::Domain(format!("t0 must be >= 0, got {t0}")));
    }
    Ok(())
}

/// `‖n^{ρ/p} g(n·)‖_{L^p(t0, t0+T; X)}` through the substitution `s = n t`:
/// `(n^{ρ-1} ∫_{n t0}^{n (t0+T)} ‖g(s)‖^p ds)^{1/p}`.
pub fn scaled_force_lp_norm(
    force: &ForceFamily,
    params: &OscillationParams,
    t0: f64,
    horizon: f64,
) -> Result<f64> {
    check_window(t0, horizon)?;
    if params.n == 0 {
        return Ok(0.0);
    }
    let n = params.n as f64;
    let integral = force.norm_power_integral(params.p, n * t0, n * (t0 + horizon))?;
    Ok((n.powf(params.rho - 1.0) * integral).powf(1.0 / params.p))
}

/// Same quantity as [`scaled_force_lp_norm`], by quadrature in the original
/// time variable.
pub fn scaled_force_lp_norm_direct(
    force: &ForceFamily,
    params: &OscillationParams,
    t0: f64,
    horizon: f64,
) -> Result<f64> {
    check_window(t0, horizon)?;
    if params.n == 0 || force.is_null() {
        return Ok(0.0);
    }
    let n = params.n as f64;
    let p = params.p;
    let end = t0 + horizon;
    let mut breaks = vec![t0];
    breaks.extend(force.carrier.zeros_in(n * t0, n * end).into_iter().map(|z| z / n));
    breaks.push(end);
    let q = integrate_with_breaks(
        |t| (params.amplitude() * force.norm_at(n * t)).powf(p),
        &breaks,
        QuadratureOptions::relative(FORCING_QUADRATURE_TOL),
    )?;
    Ok(q.value.powf(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvrClassification {
    pub membership: Membership,
    /// `p β`, compared against `ρ`.
    pub p_beta: f64,
    /// `(T, averaging_functional(T))` at [`CONFIRMATION_HORIZONS`].
    pub samples: Vec<(f64, f64)>,
    /// The sampled values behave as the analytic decision predicts.
    pub confirmed: bool,
    pub within_theorem_hypothesis: bool,
}

/// Decides `g ∈ L^p_avr` for the separable family.
///
/// `∫_0^T (1+s)^{-pβ} ds` grows like `T^{1-pβ}` for `pβ < 1` and at most
/// logarithmically otherwise, so the functional tends to zero exactly when
/// `pβ > ρ`. The carrier only changes constants. The decision is then
/// checked against the functional at `T = 10², 10³, 10⁴`: strictly
/// decreasing for members, strictly increasing otherwise.
pub fn classify_lp_avr(force: &ForceFamily, rho: f64, p: f64) -> Result<AvrClassification> {
    validate_exponents(rho, p)?;
    let p_beta = p * force.envelope_exponent;
    let membership = if force.is_null() || p_beta > rho {
        Membership::Member
    } else {
        Membership::NotMember
    };
    let samples = CONFIRMATION_HORIZONS
        .iter()
        .map(|&t| averaging_functional(force, rho, p, t).map(|v| (t, v)))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let confirmed = match membership {
        Membership::Member if force.is_null() => values.iter().all(|&v| v == 0.0),
        Membership::Member => values.windows(2).all(|w| w[1] < w[0]),
        Membership::NotMember => values.windows(2).all(|w| w[1] > w[0]),
    };
    Ok(AvrClassification {
        membership,
        p_beta,
        samples,
        confirmed,
        within_theorem_hypothesis: rho > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::WaveGrid;
    use approx::assert_relative_eq;

    /// Divergence-free shear `(cos y, 0)` scaled to ℓ² norm `norm`.
    fn shear(norm: f64) -> VelocityField {
        let g = WaveGrid::new(16).unwrap();
        let v = VelocityField::from_fn(g, |_, y| y.cos(), |_, _| 0.0);
        let s = norm / v.l2_norm();
        v.scale(s).leray_project()
    }

    fn family(beta: f64, carrier: Carrier, norm: f64) -> ForceFamily {
        ForceFamily::new(beta, carrier, shear(norm)).unwrap()
    }

    #[test]
    fn unscaled_at_origin() {
        let f = family(0.7, Carrier::ConstantOne, 1.0);
        let p = OscillationParams::new(1, 0.0, 2.0).unwrap();
        let g = evaluate_scaled_force(&f, &p, 0.0);
        assert_eq!(&g, f.profile());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn constant_envelope_scales_by_n_power() {
        let f = family(0.0, Carrier::ConstantOne, 1.0);
        let p = OscillationParams::new(4, 0.5, 2.0).unwrap();
        for t in [0.0, 0.3, 7.0] {
            let g = evaluate_scaled_force(&f, &p, t);
            assert_relative_eq!(g.l2_norm(), 2f64.sqrt(), max_relative = 1e-14);
        }
        assert_relative_eq!(p.amplitude(), 1.41421, max_relative = 1e-5);
    }

    #[test]
    fn zero_profile_gives_zero_everywhere() {
        let f = ForceFamily::zero(WaveGrid::new(16).unwrap());
        for n in [0, 1, 7] {
            let p = OscillationParams::new(n, 0.5, 2.0).unwrap();
            for t in [0.0, 1.5] {
                assert_eq!(evaluate_scaled_force(&f, &p, t).max_modulus(), 0.0);
            }
        }
        assert_eq!(averaging_functional(&f, 0.5, 2.0, 10.0).unwrap(), 0.0);
        let p = OscillationParams::new(3, 0.5, 2.0).unwrap();
        assert_eq!(scaled_force_lp_norm(&f, &p, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn index_zero_is_unforced() {
        let f = family(0.0, Carrier::ConstantOne, 1.0);
        let p = OscillationParams::new(0, 0.5, 2.0).unwrap();
        assert_eq!(evaluate_scaled_force(&f, &p, 0.2).max_modulus(), 0.0);
    }

    #[test]
    fn averaging_functional_closed_forms() {
        let f = family(0.5, Carrier::ConstantOne, 1.0);
        let v = averaging_functional(&f, 0.5, 2.0, 100.0).unwrap();
        assert_relative_eq!(v, 0.1 * 101f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(v, 0.4615121, max_relative = 1e-6);

        let f = family(1.0, Carrier::ConstantOne, 1.0);
        for t in [1e2, 1e4, 1e6] {
            let v = averaging_functional(&f, 0.0, 2.0, t).unwrap();
            assert_relative_eq!(v, (1.0 - 1.0 / (1.0 + t)) / t, max_relative = 1e-12);
        }
    }

    #[test]
    fn nonpositive_horizon_is_domain_error() {
        let f = family(0.5, Carrier::ConstantOne, 1.0);
        assert!(matches!(averaging_functional(&f, 0.5, 2.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(averaging_functional(&f, 0.5, 2.0, -1.0), Err(Error::Domain(_))));
        let p = OscillationParams::new(2, 0.5, 2.0).unwrap();
        assert!(scaled_force_lp_norm(&f, &p, 0.0, 0.0).is_err());
        assert!(scaled_force_lp_norm(&f, &p, -1.0, 1.0).is_err());
    }

    #[test]
    fn scaled_norm_closed_form() {
        let f = family(0.5, Carrier::ConstantOne, 1.0);
        let p = OscillationParams::new(4, 0.5, 2.0).unwrap();
        let v = scaled_force_lp_norm(&f, &p, 0.0, 25.0).unwrap();
        let expected = (0.5 * 101f64.ln()).sqrt();
        assert_relative_eq!(v, expected, max_relative = 1e-14);
        assert_relative_eq!(v * v, 2.30756, max_relative = 1e-5);
    }

    #[test]
    fn scaled_norm_decreases_with_doubling_n() {
        let f = family(0.5, Carrier::ConstantOne, 1.0);
        let values: Vec<f64> = (0..8)
            .map(|k| {
                let p = OscillationParams::new(1 << k, 0.5, 2.0).unwrap();
                scaled_force_lp_norm(&f, &p, 0.0, 25.0).unwrap()
            })
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    }

    #[test]
    fn classification_examples() {
        let member = classify_lp_avr(&family(0.5, Carrier::ConstantOne, 1.0), 0.5, 2.0).unwrap();
        assert_eq!(member.membership, Membership::Member);
        assert!(member.confirmed);

        let not = classify_lp_avr(&family(0.2, Carrier::ConstantOne, 1.0), 0.5, 2.0).unwrap();
        assert_eq!(not.membership, Membership::NotMember);
        assert!(not.confirmed);

        let zero = ForceFamily::zero(WaveGrid::new(16).unwrap());
        let z = classify_lp_avr(&zero, 0.5, 2.0).unwrap();
        assert_eq!(z.membership, Membership::Member);
        assert!(z.confirmed);
    }

    #[test]
    fn sine_carrier_does_not_change_membership() {
        let sine = Carrier::Sine { frequency: 1.0, phase: 0.3 };
        let member = classify_lp_avr(&family(0.5, sine, 1.0), 0.5, 2.0).unwrap();
        assert_eq!(member.membership, Membership::Member);
        assert!(member.confirmed);
        let not = classify_lp_avr(&family(0.2, sine, 1.0), 0.5, 2.0).unwrap();
        assert_eq!(not.membership, Membership::NotMember);
        assert!(not.confirmed);
    }

    #[test]
    fn carrier_zeros_are_interior_and_sorted() {
        let c = Carrier::Sine { frequency: 2.0, phase: 0.5 };
        let z = c.zeros_in(0.0, 10.0);
        assert!(!z.is_empty());
        assert!(z.windows(2).all(|w| w[1] > w[0]));
        for s in z {
            assert!(s > 0.0 && s < 10.0);
            assert!(c.value(s).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_exponents_rejected() {
        assert!(OscillationParams::new(1, 1.0, 2.0).is_err());
        assert!(OscillationParams::new(1, -0.1, 2.0).is_err());
        assert!(OscillationParams::new(1, 0.5, 1.0).is_err());
        assert!(!OscillationParams::new(1, 0.0, 2.0).unwrap().within_theorem_hypothesis());
    }

    #[test]
    fn compressible_profile_rejected() {
        let g = WaveGrid::new(16).unwrap();
        let v = VelocityField::from_fn(g, |x, _| x.cos(), |_, _| 0.0);
        assert!(ForceFamily::new(0.5, Carrier::ConstantOne, v).is_err());
    }
}
