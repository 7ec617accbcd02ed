//! Spin as vorticity.
//!
//! A spin-`s` state is a polynomial `χ(ζ) = Σ c_k ζ^k` of degree at most
//! `2s` (the dehomogenized Borel–Weil picture). Its Madelung velocity
//! `v = Im d log χ` is closed away from the zeros of `χ`, and the circulation
//! `(1/2π)∮ v` around a loop counts the enclosed zeros with multiplicity.

mod contour;
pub mod poly;
mod roots;

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use contour::{
    bohr_sommerfeld_check, circulation, total_spin_circulation, Contour, ContourShape,
    QuantizationCheck, TotalCirculation, DEFAULT_EDGE_NODES, DEFAULT_NODES, EXCLUSION_TOL,
    INTEGRALITY_TOL,
};
pub use roots::{vorticity_divisor, DivisorEntry, VorticityDivisor};

/// Relative threshold below which a coefficient counts as zero for the effective degree.
pub const COEFF_ZERO_TOL: f64 = 1e-14;

/// `binom(n, k)` as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A spin wavefunction: polynomial of degree `≤ 2s` in the affine coordinate `ζ`.
#[derive(Debug)]
pub struct SpinWaveFunction {
    two_s: u32,
    coeffs: Vec<Complex64>,
    roots: OnceLock<Vec<Complex64>>,
}

impl Clone for SpinWaveFunction {
    fn clone(&self) -> Self {
        Self {
            two_s: self.two_s,
            coeffs: self.coeffs.clone(),
            roots: OnceLock::new(),
        }
    }
}

impl PartialEq for SpinWaveFunction {
    fn eq(&self, other: &Self) -> bool {
        self.two_s == other.two_s && self.coeffs == other.coeffs
    }
}

impl SpinWaveFunction {
    /// `coeffs[k]` multiplies `ζ^k`; exactly `2s + 1` entries.
    pub fn new(two_s: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != two_s as usize + 1 {
            return Err(Error::InvalidWaveFunction(format!(
                "expected {} coefficients for 2s = {two_s}, got {}",
                two_s + 1,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidWaveFunction("non-finite coefficient".into()));
        }
        if coeffs.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::InvalidWaveFunction("identically zero".into()));
        }
        Ok(Self {
            two_s,
            coeffs,
            roots: OnceLock::new(),
        })
    }

    /// Monic `Π (ζ - a_k)^{μ_k}` embedded in spin `2s ≥ Σ μ_k`.
    pub fn from_roots(two_s: u32, roots: &[(Complex64, u32)]) -> Result<Self> {
        let degree: u32 = roots.iter().map(|&(_, m)| m).sum();
        if degree > two_s {
            return Err(Error::InvalidWaveFunction(format!(
                "root multiplicities sum to {degree} > 2s = {two_s}"
            )));
        }
        if roots.iter().any(|&(_, m)| m == 0) {
            return Err(Error::InvalidWaveFunction("zero multiplicity".into()));
        }
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &(a, m) in roots {
            coeffs = poly::multiply(&coeffs, &poly::pow(&[-a, Complex64::new(1.0, 0.0)], m as usize));
        }
        coeffs.resize(two_s as usize + 1, Complex64::new(0.0, 0.0));
        Self::new(two_s, coeffs)
    }

    /// The monomial `χ_k = ζ^k`.
    pub fn basis(two_s: u32, k: u32) -> Result<Self> {
        if k > two_s {
            return Err(Error::IndexOutOfRange {
                index: k as usize,
                len: two_s as usize + 1,
            });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); two_s as usize + 1];
        coeffs[k as usize] = Complex64::new(1.0, 0.0);
        Self::new(two_s, coeffs)
    }

    pub fn two_s(&self) -> u32 {
        self.two_s
    }

    /// Spin `s = two_s / 2`.
    pub fn spin(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree of `χ` ignoring coefficients below [`COEFF_ZERO_TOL`] relative to the largest.
    pub fn effective_degree(&self) -> usize {
        poly::effective_degree(&self.coeffs, COEFF_ZERO_TOL).unwrap_or(0)
    }

    /// Weighted inner product with `⟨ζ^j, ζ^k⟩ = δ_jk / binom(2s, k)`.
    pub fn weighted_inner(&self, other: &SpinWaveFunction) -> Result<Complex64> {
        if self.two_s != other.two_s {
            return Err(Error::DimensionMismatch {
                expected: self.two_s as usize + 1,
                found: other.two_s as usize + 1,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(k, (a, b))| a.conj() * b / binomial(self.two_s, k as u32))
            .sum())
    }

    pub fn weighted_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm_sqr() / binomial(self.two_s, k as u32))
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> SpinWaveFunction {
        let n = self.weighted_norm();
        SpinWaveFunction {
            two_s: self.two_s,
            coeffs: self.coeffs.iter().map(|c| c / n).collect(),
            roots: OnceLock::new(),
        }
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.weighted_norm() - 1.0).abs() <= tol
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        poly::eval(&self.coeffs, zeta)
    }

    /// Coordinates in the orthonormal basis `√binom(2s, k) ζ^k`.
    pub fn orthonormal_coords(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c / binomial(self.two_s, k as u32).sqrt())
            .collect()
    }

    /// Newton-polished companion-matrix roots (with repetitions), cached.
    pub fn roots(&self) -> &[Complex64] {
        self.roots.get_or_init(|| roots::polished_roots(&self.coeffs))
    }

    /// Distance from `zeta` to the nearest zero, `∞` if there is none.
    pub fn distance_to_zeros(&self, zeta: Complex64) -> f64 {
        self.roots()
            .iter()
            .map(|a| (a - zeta).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// `S_z χ_k = (k - s) χ_k`, extended linearly.
pub fn sz_apply(chi: &SpinWaveFunction) -> SpinWaveFunction {
    let s = chi.spin();
    let coeffs: Vec<Complex64> = chi
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * (k as f64 - s))
        .collect();
    // S_z of a nonzero state can vanish (s = 0, or the weight-zero vector);
    // the zero polynomial is then represented with an explicit zero coefficient list.
    SpinWaveFunction {
        two_s: chi.two_s,
        coeffs,
        roots: OnceLock::new(),
    }
}

/// The spectrum `{k - s : k = 0..2s}` of `S_z`.
pub fn sz_spectrum(two_s: u32) -> Vec<f64> {
    (0..=two_s).map(|k| k as f64 - two_s as f64 / 2.0).collect()
}

/// `[[a, b], [-b̄, ā]]` with `|a|² + |b|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2Element {
    pub a: Complex64,
    pub b: Complex64,
}

impl SU2Element {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let dev = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        if dev > 1e-12 {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { a, b })
    }

    /// Validates a full 2×2 matrix for unitarity and unit determinant.
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != 2 || m.ncols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.nrows(),
            });
        }
        let id = DMatrix::<Complex64>::identity(2, 2);
        let unit = crate::linalg::max_modulus(&(m.adjoint() * m - id));
        let det = (m.determinant() - Complex64::new(1.0, 0.0)).norm();
        if unit > 1e-12 || det > 1e-12 {
            return Err(Error::NotUnitary(unit.max(det)));
        }
        Self::new(m[(0, 0)], m[(0, 1)])
    }

    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// `diag(e^{-iα/2}, e^{iα/2})`.
    pub fn diagonal(alpha: f64) -> Self {
        Self {
            a: Complex64::from_polar(1.0, -alpha / 2.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Unit quaternion `(w, x, y, z) ↦ a = w + iz, b = y + ix`, normalized.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if n == 0.0 {
            return Err(Error::NotUnitary(1.0));
        }
        Self::new(Complex64::new(w / n, z / n), Complex64::new(y / n, x / n))
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[self.a, self.b, -self.b.conj(), self.a.conj()])
    }

    pub fn mul(&self, other: &SU2Element) -> SU2Element {
        // first row of the product determines the element
        SU2Element {
            a: self.a * other.a - self.b * other.b.conj(),
            b: self.a * other.b + self.b * other.a.conj(),
        }
    }

    pub fn inverse(&self) -> SU2Element {
        SU2Element {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// Image of a zero under the action: zeros of `ρ(g)χ` are `mobius(a_k)`.
    pub fn mobius(&self, zeta: Complex64) -> Complex64 {
        (self.a.conj() * zeta - self.b.conj()) / (self.a + self.b * zeta)
    }

    /// The point sent to `∞` by [`Self::mobius`], if finite.
    pub fn mobius_pole(&self) -> Option<Complex64> {
        (self.b.norm() > 0.0).then(|| -self.a / self.b)
    }
}

/// `(ρ(g)P)(z) = P(g⁻¹ z)` on homogeneous polynomials, dehomogenized at `z_0 = 1`:
/// `Σ c_k (ā - bζ)^{2s-k} (b̄ + aζ)^k`.
pub fn su2_act(g: &SU2Element, chi: &SpinWaveFunction) -> SpinWaveFunction {
    let n = chi.two_s as usize;
    let first = [g.a.conj(), -g.b];
    let second = [g.b.conj(), g.a];
    let first_pows: Vec<Vec<Complex64>> = (0..=n).map(|e| poly::pow(&first, e)).collect();
    let second_pows: Vec<Vec<Complex64>> = (0..=n).map(|e| poly::pow(&second, e)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, &c) in chi.coeffs.iter().enumerate() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let term = poly::multiply(&first_pows[n - k], &second_pows[k]);
        for (slot, t) in out.iter_mut().zip(term) {
            *slot += c * t;
        }
    }
    SpinWaveFunction {
        two_s: chi.two_s,
        coeffs: out,
        roots: OnceLock::new(),
    }
}

/// Matrix of `ρ(g)` in the orthonormal basis `√binom(2s, k) ζ^k`.
pub fn representation_matrix(g: &SU2Element, two_s: u32) -> DMatrix<Complex64> {
    let dim = two_s as usize + 1;
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        coeffs[k] = Complex64::new(binomial(two_s, k as u32).sqrt(), 0.0);
        let image = su2_act(
            g,
            &SpinWaveFunction {
                two_s,
                coeffs,
                roots: OnceLock::new(),
            },
        );
        for (row, c) in image.orthonormal_coords().into_iter().enumerate() {
            m[(row, k)] = c;
        }
    }
    m
}

/// Madelung–Bohm velocity `Im[(χ'/χ)(dx + i dy)]` as components `(v_x, v_y)`.
pub fn madelung_velocity(chi: &SpinWaveFunction, zeta: Complex64) -> Result<[f64; 2]> {
    let distance = chi.distance_to_zeros(zeta);
    let (p, dp) = poly::eval_with_derivative(&chi.coeffs, zeta);
    if distance <= EXCLUSION_TOL || p == Complex64::new(0.0, 0.0) {
        return Err(Error::NearZero {
            point: format!("{zeta}"),
            distance,
        });
    }
    let f = dp / p;
    Ok([f.im, f.re])
}
