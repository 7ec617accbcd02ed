#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qfluid::linalg::{HermitianOperator, StateVector};
use qfluid::projective::ProjectivePoint;
use qfluid::riemann::{ChartManifold, VectorField};
use qfluid::spin::{SU2Element, SpinWaveFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> HermitianOperator {
    loop {
        let a = DMatrix::from_fn(dim, dim, |_, _| complex(rng));
        let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        if let Ok(op) = HermitianOperator::nondegenerate(h) {
            return op;
        }
    }
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> StateVector {
    loop {
        let v = DVector::from_fn(dim, |_, _| complex(rng));
        if v.norm() > 0.1 {
            return StateVector::normalized(v).unwrap();
        }
    }
}

pub fn random_point(rng: &mut impl Rng, dim: usize) -> ProjectivePoint {
    ProjectivePoint::new(random_state(rng, dim))
}

/// Haar-distributed element via rejection sampling on the unit 3-sphere.
pub fn random_su2(rng: &mut impl Rng) -> SU2Element {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n2: f64 = q.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            return SU2Element::from_quaternion(q[0], q[1], q[2], q[3]).unwrap();
        }
    }
}

pub fn random_wavefunction(rng: &mut impl Rng, two_s: u32) -> SpinWaveFunction {
    loop {
        let coeffs: Vec<Complex64> = (0..=two_s).map(|_| complex(rng)).collect();
        if coeffs[two_s as usize].norm() > 0.2 {
            return SpinWaveFunction::new(two_s, coeffs).unwrap();
        }
    }
}

/// `g = I + L Lᵀ` with `L` entries random quadratic polynomials.
pub fn random_polynomial_metric(rng: &mut impl Rng, dim: usize) -> ChartManifold {
    let coeffs: Vec<Vec<(f64, Vec<f64>, Vec<f64>)>> = (0..dim * dim)
        .map(|_| {
            vec![(
                rng.random_range(-0.5..0.5),
                (0..dim).map(|_| rng.random_range(-0.5..0.5)).collect(),
                (0..dim).map(|_| rng.random_range(-0.3..0.3)).collect(),
            )]
        })
        .collect();
    let coeffs = Arc::new(coeffs);
    ChartManifold::new(
        dim,
        move |x: &[f64]| {
            let l = DMatrix::<f64>::from_fn(dim, dim, |i, j| {
                coeffs[i * dim + j]
                    .iter()
                    .map(|(c, lin, quad)| {
                        c + lin.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>()
                            + quad.iter().zip(x).map(|(a, xi)| a * xi * xi).sum::<f64>()
                    })
                    .sum::<f64>()
            });
            DMatrix::identity(dim, dim) + &l * l.transpose()
        },
        move |x: &[f64]| x.iter().all(|v| v.abs() < 3.0),
    )
}

/// `Y^i = Σ_k a_ik sin(b_ik · x + c_ik)` with three modes per component.
pub fn random_smooth_field(rng: &mut impl Rng, dim: usize) -> VectorField {
    let modes: Vec<Vec<(f64, Vec<f64>, f64)>> = (0..dim)
        .map(|_| {
            (0..3)
                .map(|_| {
                    (
                        rng.random_range(-1.0..1.0),
                        (0..dim).map(|_| rng.random_range(-1.5..1.5)).collect(),
                        rng.random_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect()
        })
        .collect();
    VectorField::new(move |x: &[f64]| {
        DVector::from_fn(dim, |i, _| {
            modes[i]
                .iter()
                .map(|(a, b, c)| a * (b.iter().zip(x).map(|(bi, xi)| bi * xi).sum::<f64>() + c).sin())
                .sum()
        })
    })
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}
