use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{poly, SpinWaveFunction, COEFF_ZERO_TOL};
use crate::error::{Error, Result};

const FINE_RADIUS: f64 = 1e-6;
const COARSE_RADIUS: f64 = 1e-3;
const NEWTON_ITERS: usize = 60;

/// One zero of `χ` with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub root: Complex64,
    pub multiplicity: u32,
}

/// `D = Σ μ_k a_k` over the finite zeros, plus whatever degree sits at `∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VorticityDivisor {
    pub entries: Vec<DivisorEntry>,
    pub two_s: u32,
}

impl VorticityDivisor {
    /// `Σ μ_k`.
    pub fn degree(&self) -> u32 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Vorticity that the finite plane does not see: `2s - Σ μ_k`.
    pub fn deficit_at_infinity(&self) -> u32 {
        self.two_s - self.degree()
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|e| e.root.norm()).fold(0.0, f64::max)
    }
}

fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Trims trailing negligible coefficients and splits off an exact zero at the origin.
fn split(coeffs: &[Complex64]) -> (usize, Vec<Complex64>) {
    let Some(degree) = poly::effective_degree(coeffs, COEFF_ZERO_TOL) else {
        return (0, vec![unit()]);
    };
    let trimmed = &coeffs[..=degree];
    let low = trimmed.iter().position(|c| c.norm() != 0.0).unwrap_or(0);
    (low, trimmed[low..].to_vec())
}

fn companion_eigenvalues(monic: &[Complex64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    match d {
        0 => return Vec::new(),
        1 => return vec![-monic[0]],
        _ => {}
    }
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = unit();
    }
    for i in 0..d {
        m[(i, d - 1)] = -monic[i];
    }
    Schur::try_new(m, 1e-15, 10_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect())
        .unwrap_or_else(|| durand_kerner(monic))
}

fn durand_kerner(monic: &[Complex64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    let radius = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| seed.powu(k as u32) * radius)
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0_f64;
        for i in 0..d {
            let denom: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| z[i] - z[j])
                .product();
            if denom.norm() == 0.0 {
                continue;
            }
            let step = poly::eval(monic, z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}

fn newton(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let (mut p, _) = poly::eval_with_derivative(coeffs, z);
    for _ in 0..NEWTON_ITERS {
        let (_, dp) = poly::eval_with_derivative(coeffs, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        let pc = poly::eval(coeffs, candidate);
        if !(pc.norm() < p.norm()) {
            break;
        }
        z = candidate;
        p = pc;
    }
    z
}

/// All zeros of the effective polynomial, repeated by multiplicity, Newton-polished.
pub(crate) fn polished_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let (at_origin, reduced) = split(coeffs);
    let lead = *reduced.last().expect("nonempty");
    let monic: Vec<Complex64> = reduced.iter().map(|c| c / lead).collect();
    let mut roots = vec![Complex64::new(0.0, 0.0); at_origin];
    roots.extend(
        companion_eigenvalues(&monic)
            .into_iter()
            .map(|z| newton(&monic, z)),
    );
    roots
}

fn single_linkage(points: &[Complex64], radius: f64) -> Vec<usize> {
    let mut label: Vec<usize> = (0..points.len()).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    (0..points.len()).map(|i| find(&mut label, i)).collect()
}

fn refine_cluster(monic: &[Complex64], mean: Complex64, multiplicity: u32) -> Complex64 {
    let mut derived = monic.to_vec();
    for _ in 1..multiplicity {
        derived = poly::derivative(&derived);
    }
    let refined = newton(&derived, mean);
    if (refined - mean).norm() <= COARSE_RADIUS * (1.0 + mean.norm()) {
        refined
    } else {
        mean
    }
}

/// Zeros of `χ` with multiplicities.
///
/// Roots within `1e-6 (1 + M)` of each other are merged. A group that merges
/// only at `1e-3 (1 + M)` is accepted when its spread matches the perturbation
/// size expected of an `m`-fold root, and is reported as ambiguous otherwise.
pub fn vorticity_divisor(chi: &SpinWaveFunction) -> Result<VorticityDivisor> {
    let (_, reduced) = split(chi.coeffs());
    let lead = *reduced.last().expect("nonempty");
    let monic: Vec<Complex64> = reduced.iter().map(|c| c / lead).collect();
    let roots = chi.roots();
    let big_m = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = 1.0 + big_m;
    let fine = single_linkage(roots, FINE_RADIUS * scale);
    let coarse = single_linkage(roots, COARSE_RADIUS * scale);

    let degree = monic.len() - 1;
    let kappa = if degree == 0 {
        1.0
    } else {
        monic
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * scale.powi(k as i32))
            .sum::<f64>()
            / scale.powi(degree as i32)
    };

    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, &label) in coarse.iter().enumerate() {
        match groups.iter_mut().find(|(l, _)| *l == label) {
            Some((_, members)) => members.push(i),
            None => groups.push((label, vec![i])),
        }
    }

    let mut entries = Vec::new();
    for (_, members) in groups {
        let fine_labels: Vec<usize> = {
            let mut l: Vec<usize> = members.iter().map(|&i| fine[i]).collect();
            l.sort_unstable();
            l.dedup();
            l
        };
        let m = members.len() as u32;
        let mean = members.iter().map(|&i| roots[i]).sum::<Complex64>() / m as f64;
        if fine_labels.len() > 1 {
            let spread = members
                .iter()
                .map(|&i| (roots[i] - mean).norm())
                .fold(0.0, f64::max);
            let expected = 10.0 * (kappa * f64::EPSILON).powf(1.0 / m as f64) * scale;
            if spread > expected {
                return Err(Error::AmbiguousClustering {
                    center: format!("{mean}"),
                    fine: fine_labels.len(),
                    coarse: 1,
                });
            }
        }
        let root = if members.iter().all(|&i| roots[i] == Complex64::new(0.0, 0.0)) {
            Complex64::new(0.0, 0.0)
        } else if m == 1 {
            mean
        } else {
            refine_cluster(&monic, mean, m)
        };
        entries.push(DivisorEntry {
            root,
            multiplicity: m,
        });
    }
    entries.sort_by(|a, b| {
        a.root
            .re
            .total_cmp(&b.root.re)
            .then(a.root.im.total_cmp(&b.root.im))
    });
    Ok(VorticityDivisor {
        entries,
        two_s: chi.two_s(),
    })
}
