mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use qfluid::fluid::SchrodingerFluid;
use qfluid::linalg::{dispersion_squared, propagator, HermitianOperator, StateVector};
use qfluid::projective::{
    chart_manifold, chart_pushforward, dispersion_via_metric, fs_distance, fubini_study_metric,
    horizontal_lift, GeodesicSphere, ProjectivePoint,
};

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_matches_dispersion(seed in any::<u64>(), dim in 2usize..6) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, dim);
        let p = random_point(&mut r, dim);
        let a = dispersion_via_metric(&h, &p).unwrap();
        let b = dispersion_squared(&h, p.representative()).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn charts_agree_on_overlaps(seed in any::<u64>(), dim in 2usize..5) {
        let mut r = rng(seed);
        let v = random_state(&mut r, dim);
        let dv = DVector::from_fn(dim, |_, _| complex(&mut r));
        let z = v.amplitudes();
        let norms: Vec<f64> = (0..dim)
            .filter(|&k| z[k].norm() > 0.2)
            .map(|k| {
                let chart = ProjectivePoint::new(v.clone()).chart_in(k).unwrap();
                let delta = chart_pushforward(z, &dv, k);
                let g = fubini_study_metric(chart.coords.as_slice());
                delta.dot(&(g * &delta))
            })
            .collect();
        for n in &norms {
            prop_assert!((n - norms[0]).abs() < 1e-9 * norms[0].max(1.0));
        }
    }

    #[test]
    fn unitary_covariance(seed in any::<u64>(), dim in 2usize..5) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, dim);
        let u = propagator(&random_hermitian(&mut r, dim), 0.9);
        let v = random_state(&mut r, dim);
        let moved = ProjectivePoint::new(StateVector::normalized(&u * v.amplitudes()).unwrap());
        let a = dispersion_via_metric(&h, &ProjectivePoint::new(v)).unwrap();
        let b = dispersion_via_metric(&h.conjugated(&u).unwrap(), &moved).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn phase_does_not_move_the_point(seed in any::<u64>(), dim in 2usize..5, phase in 0.0f64..6.3) {
        let mut r = rng(seed);
        let v = random_state(&mut r, dim);
        let (p, q) = (ProjectivePoint::new(v.clone()), ProjectivePoint::new(v.with_phase(phase)));
        prop_assert_eq!(&p, &q);
        let (a, b) = (p.chart(), q.chart());
        prop_assert_eq!(a.index, b.index);
        prop_assert!((&a.coords - &b.coords).norm() < 1e-12);
        prop_assert!(fs_distance(&v, &v.with_phase(phase)) < 1e-7);
    }

    #[test]
    fn lift_is_horizontal_and_isometric(seed in any::<u64>(), dim in 2usize..5) {
        let mut r = rng(seed);
        let p = random_point(&mut r, dim);
        let chart = p.chart();
        let delta = DVector::from_fn(2 * (dim - 1), |_, _| complex(&mut r).re);
        let lift = horizontal_lift(chart.coords.as_slice(), chart.index, &delta);
        let base = chart.to_point().unwrap();
        prop_assert!(base.representative().amplitudes().dotc(&lift).norm() < 1e-12);
        let g = fubini_study_metric(chart.coords.as_slice());
        prop_assert!((lift.norm_squared() - delta.dot(&(g * &delta))).abs() < 1e-10);
    }
}

#[test]
fn unit_speed_geodesic_measures_distance() {
    let m = chart_manifold(2);
    let x0 = [0.0; 4];
    let u0 = DVector::from_vec(vec![0.6, 0.0, 0.0, 0.8]);
    let curve = m.geodesic_integrate(&x0, &u0, 1.2, 400).unwrap();
    let start = StateVector::basis(3, 0).unwrap();
    for (t, p) in curve.times.iter().zip(&curve.points) {
        let v = StateVector::normalized(qfluid::projective::homogeneous(p.as_slice(), 0)).unwrap();
        assert!((fs_distance(&start, &v) - t).abs() < 1e-8, "t = {t}");
    }
    let e0 = StateVector::basis(3, 0).unwrap();
    let e2 = StateVector::basis(3, 2).unwrap();
    assert!((fs_distance(&e0, &e2) - FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn geodesic_sphere_is_round_with_radius_one_half() {
    let h = HermitianOperator::diagonal(&[0.3, 1.0, 2.5]).unwrap();
    let sphere = GeodesicSphere::new(&h, 2, 0).unwrap();
    for &theta in &[0.2, 1.0, FRAC_PI_2, 2.5] {
        for &phi in &[0.0, 1.3, 4.0] {
            let g = sphere.induced_metric(theta, phi);
            assert!((g[(0, 0)] - 0.25).abs() < 1e-12);
            assert!(g[(0, 1)].abs() < 1e-12);
            assert!((g[(1, 1)] - 0.25 * theta.sin().powi(2)).abs() < 1e-12);
        }
    }
    let n = 400;
    let mut area = 0.0;
    for a in 0..n {
        let theta = PI * (a as f64 + 0.5) / n as f64;
        let g = sphere.induced_metric(theta, 0.7);
        area += g.determinant().sqrt() * (PI / n as f64) * 2.0 * PI;
    }
    assert!((area - sphere.area()).abs() < 1e-4);
    assert!((sphere.area() - PI).abs() < 1e-15);
}

#[test]
fn sphere_is_invariant_under_the_flow() {
    let h = HermitianOperator::diagonal(&[0.0, 0.7, 2.0]).unwrap();
    let sphere = GeodesicSphere::new(&h, 2, 1).unwrap();
    let omega = sphere.omega();
    let p = sphere.point(1.1, 0.4);
    let later = qfluid::linalg::evolve(&h, p.representative(), 0.9).unwrap();
    let expected = sphere.point(1.1, 0.4 + omega * 0.9);
    assert_eq!(ProjectivePoint::new(later), expected);
}

#[test]
fn chart_flow_matches_schrodinger_evolution() {
    let mut r = rng(11);
    for n in 1..=3 {
        let fluid = SchrodingerFluid::new(random_hermitian(&mut r, n + 1));
        let p = random_point(&mut r, n + 1);
        let report = fluid.trajectory(&p, 1.0, 200).unwrap();
        if !report.exited {
            assert!(report.max_evolution_error < 1e-8, "{:e}", report.max_evolution_error);
        }
    }
}

#[test]
fn spin_half_bloch_sphere() {
    let sz = HermitianOperator::diagonal(&[-0.5, 0.5]).unwrap();
    let plus = ProjectivePoint::from_amplitudes(&[
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
    ])
    .unwrap();
    assert!((dispersion_via_metric(&sz, &plus).unwrap() - 0.25).abs() < 1e-14);
}
