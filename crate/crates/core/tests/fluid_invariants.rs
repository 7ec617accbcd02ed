mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use qfluid::fluid::{zeno_decay, zeno_quadratic_regime, CriticalKind, SchrodingerFluid};
use qfluid::linalg::{HermitianOperator, StateVector};
use qfluid::projective::{GeodesicSphere, ProjectivePoint};

use common::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pressure_is_bounded_by_extreme_pair(seed in any::<u64>(), dim in 2usize..5) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, dim);
        let fluid = SchrodingerFluid::new(h.clone());
        let spread = h.eigenvalues()[dim - 1] - h.eigenvalues()[0];
        for _ in 0..20 {
            let p = random_point(&mut r, dim);
            let value = fluid.pressure(&p).unwrap();
            prop_assert!(value >= 0.0);
            prop_assert!(value <= spread * spread / 8.0 + 1e-12);
            prop_assert!((value - fluid.pressure_via_metric(&p).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn critical_points_are_certified(seed in any::<u64>(), dim in 2usize..5) {
        let h = random_hermitian(&mut rng(seed), dim);
        let points = SchrodingerFluid::new(h.clone()).critical_points().unwrap();
        prop_assert_eq!(points.len(), dim * (dim + 1) / 2);
        let lambda = h.eigenvalues();
        for p in &points {
            prop_assert!(p.gradient_norm < 1e-8, "{:?}: {:e}", p.indices, p.gradient_norm);
            let expected = match p.kind {
                CriticalKind::Eigenstate => 0.0,
                CriticalKind::PairSuperposition => (lambda[p.indices[0]] - lambda[p.indices[1]]).powi(2) / 8.0,
            };
            prop_assert!((p.pressure - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn spectral_shift_and_scale(seed in any::<u64>(), shift in -5.0f64..5.0, scale in 0.2f64..3.0) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, 3);
        let p = random_point(&mut r, 3);
        let base = SchrodingerFluid::new(h.clone()).pressure(&p).unwrap();
        let shifted = SchrodingerFluid::new(h.shifted(shift).unwrap()).pressure(&p).unwrap();
        let scaled = SchrodingerFluid::new(h.scaled(scale).unwrap()).pressure(&p).unwrap();
        prop_assert!((base - shifted).abs() < 1e-10);
        prop_assert!((scaled - scale * scale * base).abs() < 1e-10);
    }

    #[test]
    fn gradient_is_orthogonal_to_velocity(seed in any::<u64>(), dim in 2usize..5) {
        let mut r = rng(seed);
        let fluid = SchrodingerFluid::new(random_hermitian(&mut r, dim));
        let p = random_point(&mut r, dim);
        let grad = fluid.pressure_gradient(&p).unwrap();
        let velocity = fluid.velocity(&p).unwrap();
        prop_assert!(grad.inner(&velocity).abs() < 1e-6);
    }
}

#[test]
fn eigenstates_are_the_only_pressure_zeros() {
    let h = HermitianOperator::diagonal(&[1.0, 2.0, 3.0]).unwrap();
    let fluid = SchrodingerFluid::new(h);
    let mut r = rng(7);
    for _ in 0..2000 {
        let p = random_point(&mut r, 3);
        let value = fluid.pressure(&p).unwrap();
        let amps = p.representative().amplitudes();
        let max_pop = amps.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
        // unit gaps: Var ≥ ¼(1 - max population)
        assert!(value >= 0.125 * (1.0 - max_pop) - 1e-12);
    }
}

#[test]
fn qubit_critical_search_on_a_fine_grid() {
    let fluid = SchrodingerFluid::new(HermitianOperator::diagonal(&[0.0, 1.0]).unwrap());
    let n = 314;
    let norms: Vec<f64> = (0..=n)
        .map(|k| {
            let theta = PI * k as f64 / n as f64;
            let p = ProjectivePoint::from_amplitudes(&[c((theta / 2.0).cos()), c((theta / 2.0).sin())]).unwrap();
            fluid.pressure_gradient(&p).unwrap().norm()
        })
        .collect();
    let minima: Vec<f64> = (0..=n)
        .filter(|&k| {
            (k == 0 || norms[k - 1] >= norms[k]) && (k == n || norms[k + 1] >= norms[k])
        })
        .map(|k| PI * k as f64 / n as f64)
        .collect();
    assert_eq!(minima.len(), 3, "{minima:?}");
    for (found, expected) in minima.iter().zip([0.0, PI / 2.0, PI]) {
        assert!((found - expected).abs() < 0.01);
    }
}

#[test]
fn pressure_gradient_examples() {
    let fluid = SchrodingerFluid::new(HermitianOperator::diagonal(&[0.0, 1.0]).unwrap());
    let p = ProjectivePoint::from_amplitudes(&[c(0.7_f64.sqrt()), c(0.3_f64.sqrt())]).unwrap();
    let grad = fluid.pressure_gradient(&p).unwrap();
    assert!(grad.norm() > 1e-2);
    assert!(grad.inner(&fluid.velocity(&p).unwrap()).abs() < 1e-6);
}

#[test]
fn vorticity_on_every_sphere_of_a_qutrit() {
    let fluid = SchrodingerFluid::new(HermitianOperator::diagonal(&[1.0, 2.0, 3.5]).unwrap());
    for (i, j) in [(1, 0), (2, 0), (2, 1)] {
        let profile = fluid.vorticity_on_sphere(i, j, 17, 8).unwrap();
        assert!(profile.max_rel_err < 1e-4, "({i},{j}): {:e}", profile.max_rel_err);
        for s in &profile.samples {
            assert!(fluid.vorticity_transport_residual(i, j, s.theta, s.phi).unwrap() < 1e-8);
        }
    }
}

#[test]
fn perturbed_velocity_breaks_transport() {
    let fluid = SchrodingerFluid::new(HermitianOperator::diagonal(&[0.0, 1.0]).unwrap());
    let residual = fluid.transport_residual_perturbed(1, 0, 1.0, 0.5, 0.1).unwrap();
    assert!(residual > 1e-3);
}

#[test]
fn vorticity_integrates_to_zero_over_the_sphere() {
    let h = HermitianOperator::diagonal(&[0.0, 1.0]).unwrap();
    let fluid = SchrodingerFluid::new(h.clone());
    let sphere = GeodesicSphere::new(&h, 1, 0).unwrap();
    let n = 64;
    let mut total = 0.0;
    for a in 0..n {
        let theta = PI * (a as f64 + 0.5) / n as f64;
        let w = fluid.scalar_vorticity(&sphere, theta, 0.0).unwrap();
        total += w * 0.25 * theta.sin() * (PI / n as f64) * 2.0 * PI;
    }
    assert!(total.abs() < 1e-6, "{total:e}");
}

#[test]
fn zeno_deficit_falls_like_one_over_n() {
    let h = HermitianOperator::diagonal(&[0.0, 1.0]).unwrap();
    let v = StateVector::from_slice(&[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
    assert!(zeno_quadratic_regime(&h, &v, 0.1).unwrap());
    assert!(!zeno_quadratic_regime(&h, &v, 2.0).unwrap());
    let mut previous = 0.0;
    for n in [1, 2, 4, 8, 16, 1000] {
        let survival = zeno_decay(&h, &v, 0.5, n).unwrap();
        assert!(survival > previous);
        previous = survival;
    }
    assert!(1.0 - previous < 1e-4);
    assert!(zeno_decay(&h, &v, 0.5, 0).is_err());
    let e0 = StateVector::basis(2, 0).unwrap();
    assert_eq!(zeno_decay(&h, &e0, 3.0, 5).unwrap(), 1.0);
}
