use avglab::navier_stokes::{random_divfree, random_velocity, taylor_green};
use avglab::spectral::{DiagonalStokesOperator, SpectralField, VelocityField, WaveGrid};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> WaveGrid {
    WaveGrid::new(16).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_is_idempotent(seed in any::<u64>()) {
        let v = random_velocity(grid(), seed, 1.5).unwrap();
        let p = v.leray_project();
        let pp = p.leray_project();
        prop_assert!(pp.sub(&p).unwrap().max_modulus() <= 1e-12 * v.max_modulus());
        prop_assert!(p.divergence().max_modulus() <= 1e-12 * v.max_modulus());
    }

    #[test]
    fn projection_is_orthogonal(seed in any::<u64>()) {
        // <Pv, v - Pv> = 0 and |Pv| <= |v|.
        let v = random_velocity(grid(), seed, 1.5).unwrap();
        let p = v.leray_project();
        let rest = v.sub(&p).unwrap();
        prop_assert!(p.inner(&rest).unwrap().norm() <= 1e-12 * v.l2_norm().powi(2));
        prop_assert!(p.l2_norm() <= v.l2_norm() * (1.0 + 1e-14));
    }

    #[test]
    fn parseval_holds(seed in any::<u64>()) {
        let v = random_velocity(grid(), seed, 1.5).unwrap();
        for c in v.components() {
            let spectral = c.sobolev_norm(0.0) * std::f64::consts::TAU;
            let physical = c.physical_l2_norm().unwrap();
            prop_assert!((spectral - physical).abs() <= 1e-12 * spectral);
        }
    }

    #[test]
    fn sobolev_norm_is_homogeneous(seed in any::<u64>(), c in -10.0f64..10.0, s in 0.0f64..3.0) {
        let v = random_divfree(grid(), seed, 1.5).unwrap();
        let lhs = v.scale(c).sobolev_norm(s);
        let rhs = c.abs() * v.sobolev_norm(s);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn sobolev_norm_is_monotone_in_order(seed in any::<u64>(), s in 0.0f64..2.0, ds in 0.0f64..1.0) {
        let v = random_divfree(grid(), seed, 1.5).unwrap();
        prop_assert!(v.sobolev_norm(s) <= v.sobolev_norm(s + ds) * (1.0 + 1e-14));
    }

    #[test]
    fn stokes_operator_is_self_adjoint_and_positive(seed_a in any::<u64>(), seed_b in any::<u64>(), nu in 0.01f64..2.0) {
        let a = DiagonalStokesOperator::new(nu).unwrap();
        let u = random_divfree(grid(), seed_a, 1.5).unwrap();
        let v = random_divfree(grid(), seed_b, 1.5).unwrap();
        let lhs = a.apply(&u).inner(&v).unwrap();
        let rhs = u.inner(&a.apply(&v)).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        prop_assert!(a.apply(&u).inner(&u).unwrap().re >= 0.0);
    }

    #[test]
    fn physical_round_trip(seed in any::<u64>()) {
        let v = random_velocity(grid(), seed, 1.5).unwrap();
        let [x, _] = v.components();
        let back = SpectralField::from_physical(grid(), &x.to_physical().unwrap()).unwrap();
        prop_assert!(back.sub(x).unwrap().max_modulus() <= 1e-14 * x.max_modulus().max(1.0));
    }

    #[test]
    fn dealiasing_is_idempotent(seed in any::<u64>()) {
        let v = random_velocity(grid(), seed, 1.1).unwrap();
        let d = v.dealias();
        prop_assert_eq!(d.dealias(), d);
    }
}

#[test]
fn projection_removes_gradients() {
    // v = ∇φ with φ = cos(x + 2y): projects to zero.
    let g = grid();
    let phi = SpectralField::from_fn(g, |x, y| (x + 2.0 * y).cos());
    let v = VelocityField::new(phi.derivative(avglab::spectral::Direction::X), phi.derivative(avglab::spectral::Direction::Y)).unwrap();
    assert!(v.leray_project().max_modulus() < 1e-14);
}

#[test]
fn taylor_green_is_divergence_free_and_certified() {
    let tg = taylor_green(1.0, grid());
    assert!(tg.is_certified_divergence_free());
    assert_eq!(tg.divergence().max_modulus(), 0.0);
    assert!((tg.l2_norm() - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn asymmetric_coefficients_are_rejected_for_synthesis() {
    let g = grid();
    let mut f = SpectralField::zeros(g);
    f.set_coeff(1, 0, Complex64::new(1.0, 0.0));
    assert!(matches!(f.to_physical(), Err(avglab::Error::MalformedField(_))));
    f.enforce_symmetry();
    assert!(f.to_physical().is_ok());
}
