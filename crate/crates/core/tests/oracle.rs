use avglab::forcing::{scaled_force_lp_norm, Carrier, ForceFamily, OscillationParams};
use avglab::harness::{oracle_check, ExperimentConfig};
use avglab::navier_stokes::taylor_green;
use avglab::oracle::{bound_ratio, duhamel_mode, gronwall_rhs, GronwallInputs};
use avglab::spectral::WaveGrid;
use avglab::Error;
use proptest::prelude::*;

fn unit_profile() -> avglab::spectral::VelocityField {
    let tg = taylor_green(1.0, WaveGrid::new(16).unwrap());
    tg.scale(1.0 / tg.l2_norm())
}

#[test]
fn constant_carrier_example() {
    let force = ForceFamily::new(0.0, Carrier::ConstantOne, unit_profile()).unwrap();
    let params = OscillationParams::new(1, 0.0, 2.0).unwrap();
    let v = duhamel_mode(2.0, &force, &params, 0.0, 1.0).unwrap();
    assert!((v - 0.5 * (1.0 - (-2.0f64).exp())).abs() < 1e-12);
    assert!((v - 0.4323324).abs() < 5e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn undamped_sine_response_closed_form(n in 1u32..64, omega in 0.3f64..3.0, t in 0.01f64..5.0) {
        // λ = 0, β = 0: n^{ρ/p} (1 - cos(ω n t)) / (ω n).
        let force = ForceFamily::new(0.0, Carrier::Sine { frequency: omega, phase: 0.0 }, unit_profile()).unwrap();
        let params = OscillationParams::new(n, 0.5, 2.0).unwrap();
        let v = duhamel_mode(0.0, &force, &params, 0.0, t).unwrap();
        let nf = n as f64;
        let exact = nf.powf(0.25) * (1.0 - (omega * nf * t).cos()) / (omega * nf);
        // Relative 1e-10, or the oracle's absolute floor 1e-15 * amplitude * t
        // where 1 - cos cancels.
        let tol = 1e-10 * exact.abs() + 1e-15 * nf.powf(0.25) * t;
        prop_assert!((v - exact).abs() <= tol, "{v} vs {exact}");
    }

    #[test]
    fn single_mode_ratio_obeys_holder_bound(lambda in 0.0f64..5.0, beta in 0.0f64..1.0, p in 1.5f64..4.0) {
        // |∫ e^{-λ(t-s)} f| ≤ |f|_{L^p} T^{1-1/p}, so the ratio is at most T^{p-1} for every n.
        let horizon = 2.0;
        let force = ForceFamily::new(beta, Carrier::Sine { frequency: 1.0, phase: 0.0 }, unit_profile()).unwrap();
        for n in [1, 4, 16, 64] {
            let params = OscillationParams::new(n, 0.5, p).unwrap();
            let sup = (1..=20)
                .map(|i| duhamel_mode(lambda, &force, &params, 0.0, horizon * i as f64 / 20.0).unwrap().abs())
                .fold(0.0, f64::max);
            let force_term = scaled_force_lp_norm(&force, &params, 0.0, horizon).unwrap().powf(p);
            let inputs = GronwallInputs::new(0.0, force_term, p, 1.0).unwrap();
            prop_assert!(bound_ratio(sup, &inputs).unwrap() <= horizon.powf(p - 1.0) * (1.0 + 1e-9));
        }
    }
}

#[test]
fn gronwall_examples() {
    let zero = GronwallInputs::new(0.0, 0.0, 2.0, 1.0).unwrap();
    assert_eq!(gronwall_rhs(&zero).value, 0.0);
    let b = gronwall_rhs(&GronwallInputs::new(0.1, 0.03, 2.0, 1.0).unwrap());
    assert!((b.value - 0.04).abs() < 1e-15 && (b.root - 0.2).abs() < 1e-15);

    let force = ForceFamily::new(0.5, Carrier::ConstantOne, unit_profile()).unwrap();
    let params = OscillationParams::new(4, 0.5, 2.0).unwrap();
    let term = scaled_force_lp_norm(&force, &params, 0.0, 25.0).unwrap().powi(2);
    let b = gronwall_rhs(&GronwallInputs::new(0.0, term, 2.0, 1.0).unwrap());
    assert!((b.value - 2.30756).abs() < 1e-5);
}

#[test]
fn ratio_conventions() {
    let zero = GronwallInputs::new(0.0, 0.0, 2.0, 1.0).unwrap();
    assert_eq!(bound_ratio(0.0, &zero).unwrap(), 0.0);
    assert!(matches!(bound_ratio(1e-3, &zero), Err(Error::Inconsistency(_))));
    let some = GronwallInputs::new(0.5, 0.0, 2.0, 1.0).unwrap();
    assert_eq!(bound_ratio(0.0, &some).unwrap(), 0.0);
    assert!((bound_ratio(0.5, &some).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn stepper_agrees_with_oracle_on_dominant_modes() {
    let config = ExperimentConfig::from_toml_str(
        r#"
[problem]
kind = "linear"
viscosity = 0.1
grid = 16
horizon = 0.5
initial = "random-divfree"
seed = 21

[force]
beta = 0.3
carrier = "sin"
omega = 2.0
phase = 0.4
profile = "random-divfree"
profile_seed = 5

[sweep]
rho = 0.5
p = 3.0
n_list = [1, 5, 20]

[stepper]
base_dt = 0.01
oscillation_safety = 0.005

[output]
dir = "unused"
"#,
    )
    .unwrap();
    let report = oracle_check(&config, 5, 2).unwrap();
    assert_eq!(report.modes.len(), 5);
    assert_eq!(report.rows.len(), 3);
    assert!(report.passed(), "{report:?}");
}
