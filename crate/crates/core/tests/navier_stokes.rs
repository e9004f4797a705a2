use avglab::navier_stokes::{
    exact_tg_solution, nonlinear_term, random_divfree, taylor_green, InitialCondition, NSProblemSpec,
};
use avglab::evolution::{integrate, StepperConfig};
use avglab::spectral::{VelocityField, WaveGrid};
use proptest::prelude::*;

fn grid(n: usize) -> WaveGrid {
    WaveGrid::new(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn advection_is_energy_neutral(seed in any::<u64>(), scale in 0.1f64..10.0) {
        let v = random_divfree(grid(32), seed, 1.5).unwrap().scale(scale);
        let e = nonlinear_term(&v).inner(&v).unwrap().norm();
        prop_assert!(e <= 1e-10 * v.l2_norm().powi(2), "{e}");
    }

    #[test]
    fn advection_output_is_solenoidal_and_dealiased(seed in any::<u64>()) {
        let v = random_divfree(grid(32), seed, 1.5).unwrap();
        let b = nonlinear_term(&v);
        prop_assert!(b.is_certified_divergence_free());
        prop_assert_eq!(b.dealias(), b.clone());
    }

    #[test]
    fn random_fields_are_reproducible(seed in any::<u64>()) {
        let a = random_divfree(grid(16), seed, 2.0).unwrap();
        prop_assert_eq!(&a, &random_divfree(grid(16), seed, 2.0).unwrap());
        prop_assert!(a.is_certified_divergence_free());
    }
}

#[test]
fn advection_vanishes_on_special_flows() {
    let g = grid(32);
    assert_eq!(nonlinear_term(&VelocityField::zeros(g)).max_modulus(), 0.0);
    assert!(nonlinear_term(&taylor_green(3.0, g)).max_modulus() <= 1e-12);
    let shear = VelocityField::from_fn(g, |_, y| y.sin(), |_, _| 0.0).leray_project();
    assert!(nonlinear_term(&shear).max_modulus() <= 1e-15);
}

#[test]
fn taylor_green_closed_form() {
    let g = grid(16);
    assert_eq!(exact_tg_solution(1.5, 0.1, 0.0, g), taylor_green(1.5, g));
    let ratio = exact_tg_solution(1.0, 0.1, 1.0, g).l2_norm() / taylor_green(1.0, g).l2_norm();
    assert!((ratio - 0.81873075).abs() < 5e-9);
    assert_eq!(exact_tg_solution(1.0, 0.0, 7.0, g), taylor_green(1.0, g));
}

#[test]
fn full_solver_tracks_taylor_green_at_high_resolution() {
    let spec = NSProblemSpec {
        viscosity: 0.1,
        initial: InitialCondition::TaylorGreen { amplitude: 1.0 },
        grid: grid(64),
        horizon: 1.0,
    };
    let traj = integrate(&spec.build().unwrap(), &StepperConfig::new(1e-3).with_stride(100)).unwrap();
    for (&t, state) in traj.sample_times().iter().zip(traj.states()) {
        let exact = exact_tg_solution(1.0, 0.1, t, grid(64));
        assert!(state.sub(&exact).unwrap().l2_norm() <= 1e-6);
    }
}

#[test]
fn spectrum_follows_the_decay_exponent() {
    // Mean shell energy per mode ∝ |k|^{-2·decay}; for decay = 3 the
    // |k| = 4 to |k| = 2 ratio is about 2^{-6}.
    let g = grid(32);
    let shell = |v: &VelocityField, k: f64| {
        let (mut e, mut count) = (0.0, 0);
        for kx in -6i64..=6 {
            for ky in -6i64..=6 {
                let r = ((kx * kx + ky * ky) as f64).sqrt();
                if (r - k).abs() < 0.5 {
                    let [x, y] = v.components();
                    e += x.coeff(kx, ky).norm_sqr() + y.coeff(kx, ky).norm_sqr();
                    count += 1;
                }
            }
        }
        e / count as f64
    };
    let (mut e2, mut e4) = (0.0, 0.0);
    for seed in 0..32 {
        let v = random_divfree(g, seed, 3.0).unwrap();
        e2 += shell(&v, 2.0);
        e4 += shell(&v, 4.0);
    }
    let ratio = e4 / e2;
    let target = 2f64.powi(-6);
    assert!(ratio > 0.5 * target && ratio < 1.5 * target, "{ratio} vs {target}");
}

#[test]
fn local_lipschitz_constant_is_stable_across_batches() {
    // For pairs on the H^s sphere of radius R, the batch maximum of
    // |B(v1) - B(v2)|_2 / |v1 - v2|_{H^s} is a fitted L(R).
    let g = grid(32);
    let s = 4.0 / 3.0;
    let radius = 2.0;
    let on_sphere = |seed: u64| {
        let v = random_divfree(g, seed, 2.0).unwrap();
        v.scale(radius / v.sobolev_norm(s))
    };
    let batches: Vec<f64> = (0..4u64)
        .map(|b| {
            (0..16u64)
                .map(|i| {
                    let v1 = on_sphere(1000 * b + 2 * i);
                    let v2 = on_sphere(1000 * b + 2 * i + 1);
                    let db = nonlinear_term(&v1).sub(&nonlinear_term(&v2)).unwrap().l2_norm();
                    db / v1.sub(&v2).unwrap().sobolev_norm(s)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let mean = batches.iter().sum::<f64>() / batches.len() as f64;
    for l in &batches {
        assert!((l - mean).abs() <= 0.2 * mean, "{batches:?}");
    }
}
