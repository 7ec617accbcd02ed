//! Finite-dimensional Hilbert-space algebra: state vectors, Hermitian
//! observables, expectation values, dispersion and unitary evolution.
//!
//! Conventions: inner products are antilinear in the first slot and
//! `hbar = 1`, so the Schrödinger evolution is `v(t) = exp(-iHt) v`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative Hermiticity tolerance, scaled by the Frobenius norm of the matrix.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Relative eigenvalue-gap tolerance, scaled by the spectral range.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Absolute tolerance on `|‖v‖ - 1|` for a normalized state.
pub const NORM_TOL: f64 = 1e-10;

/// A normalized pure state `v = Σ α_i e_i` with `Σ |α_i|² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len()));
        }
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::normalized(DVector::from_column_slice(amplitudes))
    }

    /// The canonical basis vector `e_k` of `C^dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, len: dim });
        }
        let mut v = DVector::zeros(dim);
        v[k] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn with_phase(&self, phase: f64) -> StateVector {
        StateVector {
            amplitudes: &self.amplitudes * Complex64::from_polar(1.0, phase),
        }
    }

    /// Equality of rays: `|⟨u|v⟩| = 1` within `tol`.
    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim() && (1.0 - self.inner(other).norm()).abs() <= tol
    }

    /// Raw amplitude equality, sensitive to the global phase.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim() && max_modulus(&(&self.amplitudes - &other.amplitudes)) <= tol
    }

    /// Index of the amplitude with the largest modulus (first one on ties).
    pub fn dominant_index(&self) -> usize {
        let mut best = 0;
        let mut best_mod = -1.0;
        for (k, a) in self.amplitudes.iter().enumerate() {
            let m = a.norm();
            if m > best_mod + 1e-15 {
                best = k;
                best_mod = m;
            }
        }
        best
    }

    pub fn projector(&self) -> Projector {
        Projector {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// A Hermitian observable with its ascending spectrum cached at construction.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
    nondegenerate: bool,
}

impl HermitianOperator {
    /// Validates Hermiticity and diagonalizes.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.ncols(),
            });
        }
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let tol = HERMITICITY_TOL * matrix.norm();
        for r in 0..dim {
            for c in 0..dim {
                let deviation = (matrix[(r, c)] - matrix[(c, r)].conj()).norm();
                if deviation > tol {
                    return Err(Error::NotHermitian {
                        row: r,
                        col: c,
                        deviation,
                    });
                }
            }
        }
        let symmetric = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = symmetric.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        if eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(Error::Eigendecomposition("non-finite eigenvalue".into()));
        }
        let mut eigenvectors = DMatrix::zeros(dim, dim);
        for (col, &k) in order.iter().enumerate() {
            eigenvectors.set_column(col, &eig.eigenvectors.column(k));
        }
        let mut op = Self {
            matrix: symmetric,
            eigenvalues,
            eigenvectors,
            nondegenerate: false,
        };
        op.nondegenerate = op.check_nondegenerate().is_ok();
        Ok(op)
    }

    /// Like [`HermitianOperator::new`] but rejects degenerate spectra.
    pub fn nondegenerate(matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = Self::new(matrix)?;
        op.check_nondegenerate()?;
        Ok(op)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(values.len(), values.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::new(DMatrix::from_diagonal(&d))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    pub fn check_nondegenerate(&self) -> Result<()> {
        let range = self.eigenvalues[self.dim() - 1] - self.eigenvalues[0];
        let tolerance = DEGENERACY_TOL * range;
        for k in 0..self.dim() - 1 {
            let gap = self.eigenvalues[k + 1] - self.eigenvalues[k];
            if gap <= tolerance {
                return Err(Error::DegenerateSpectrum {
                    lower: k,
                    upper: k + 1,
                    gap,
                    tolerance,
                });
            }
        }
        Ok(())
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Ascending eigenvalues `λ_0 ≤ … ≤ λ_n`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose columns are eigenvectors, ordered like [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn eigenstate(&self, k: usize) -> Result<StateVector> {
        if k >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.dim(),
            });
        }
        StateVector::normalized(self.eigenvectors.column(k).into_owned())
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * v
    }

    /// `H + c·I`.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        Self::new(&self.matrix + id * Complex64::new(c, 0.0))
    }

    /// `s·H`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(&self.matrix * Complex64::new(s, 0.0))
    }

    /// `U H U^†` for unitary `U`.
    pub fn conjugated(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        Self::new(u * &self.matrix * u.adjoint())
    }

    fn check_dim(&self, v: &StateVector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        Ok(())
    }
}

/// A rank-one orthogonal projector `|v⟩⟨v|`.
#[derive(Debug, Clone)]
pub struct Projector {
    matrix: DMatrix<Complex64>,
}

impl Projector {
    /// Validates `P² = P`, `P^† = P` and `tr P = 1` to `tol`.
    pub fn new(matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let idem = max_modulus(&(&matrix * &matrix - &matrix));
        if idem > tol {
            return Err(Error::InvalidProjector(format!("|P² - P| = {idem:e}")));
        }
        let herm = max_modulus(&(&matrix - matrix.adjoint()));
        if herm > tol {
            return Err(Error::InvalidProjector(format!("|P - P^H| = {herm:e}")));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidProjector(format!("trace = {trace}")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Largest entry modulus of a complex matrix or vector.
pub fn max_modulus<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::RawStorage<Complex64, R, C>>(
    m: &nalgebra::Matrix<Complex64, R, C, S>,
) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `⟨v|Av⟩`, rejecting an imaginary residue above round-off.
pub fn expectation(a: &HermitianOperator, v: &StateVector) -> Result<f64> {
    a.check_dim(v)?;
    let z = v.amplitudes.dotc(&a.apply(&v.amplitudes));
    let scale = a.matrix.norm().max(1.0);
    if z.im.abs() > 1e-10 * scale {
        return Err(Error::NotHermitian {
            row: 0,
            col: 0,
            deviation: z.im.abs(),
        });
    }
    Ok(z.re)
}

/// Variance `⟨v|H²v⟩ - ⟨v|Hv⟩²`, computed as `‖Hv - ⟨H⟩v‖²`.
pub fn dispersion_squared(h: &HermitianOperator, v: &StateVector) -> Result<f64> {
    h.check_dim(v)?;
    let hv = h.apply(&v.amplitudes);
    let mean = v.amplitudes.dotc(&hv);
    let centered = hv - &v.amplitudes * mean;
    let value = centered.norm_squared();
    // The centered form is a sum of squares; only an ill-formed operator can
    // drive the textbook form noticeably below zero.
    let textbook = hv_norm_sq(h, v) - mean.re * mean.re;
    let scale = h.matrix.norm().powi(2).max(1.0);
    if textbook < -1e-9 * scale {
        return Err(Error::NegativeDispersion(textbook));
    }
    Ok(value.max(0.0))
}

fn hv_norm_sq(h: &HermitianOperator, v: &StateVector) -> f64 {
    h.apply(&v.amplitudes).norm_squared()
}

/// `exp(-iHt) v` through the cached eigendecomposition.
pub fn evolve(h: &HermitianOperator, v: &StateVector, t: f64) -> Result<StateVector> {
    h.check_dim(v)?;
    let u = &h.eigenvectors;
    let mut coeffs = u.adjoint() * &v.amplitudes;
    for (c, &lambda) in coeffs.iter_mut().zip(&h.eigenvalues) {
        *c *= Complex64::from_polar(1.0, -lambda * t);
    }
    let out = u * coeffs;
    // Renormalize away round-off so the invariant holds exactly.
    StateVector::normalized(out)
}

/// `exp(-iHt)` as a matrix.
pub fn propagator(h: &HermitianOperator, t: f64) -> DMatrix<Complex64> {
    let phases = DVector::from_iterator(
        h.dim(),
        h.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -l * t)),
    );
    &h.eigenvectors * DMatrix::from_diagonal(&phases) * h.eigenvectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> StateVector {
        StateVector::from_slice(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn expectation_examples() {
        let a = HermitianOperator::diagonal(&[0.0, 1.0]).unwrap();
        let e0 = StateVector::basis(2, 0).unwrap();
        assert_abs_diff_eq!(expectation(&a, &e0).unwrap(), 0.0);
        assert_abs_diff_eq!(expectation(&a, &plus()).unwrap(), 0.5, epsilon = 1e-15);
        let id = HermitianOperator::identity(3).unwrap();
        let v = StateVector::from_slice(&[c(0.3, 0.1), c(-0.2, 0.7), c(0.5, 0.0)]).unwrap();
        assert_abs_diff_eq!(expectation(&id, &v).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dispersion_examples() {
        let h = HermitianOperator::diagonal(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(
            dispersion_squared(&h, &StateVector::basis(2, 1).unwrap()).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(dispersion_squared(&h, &plus()).unwrap(), 0.25, epsilon = 1e-15);
        let h3 = HermitianOperator::diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let v = StateVector::from_slice(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(dispersion_squared(&h3, &v).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn evolve_examples() {
        let h = HermitianOperator::diagonal(&[0.0, 1.0]).unwrap();
        let v = plus();
        assert!(evolve(&h, &v, 0.0).unwrap().approx_eq(&v, 1e-15));
        let e0 = StateVector::basis(2, 0).unwrap();
        assert!(evolve(&h, &e0, 3.7).unwrap().approx_eq(&e0, 1e-15));
        let expected = StateVector::from_slice(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(evolve(&h, &v, std::f64::consts::PI).unwrap().approx_eq(&expected, 1e-14));
    }

    #[test]
    fn rejects_bad_input() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            HermitianOperator::nondegenerate(DMatrix::identity(3, 3)),
            Err(Error::DegenerateSpectrum { .. })
        ));
        assert!(matches!(
            StateVector::new(DVector::from_element(2, c(1.0, 0.0))),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::normalized(DVector::from_element(1, c(1.0, 0.0))),
            Err(Error::DimensionTooSmall(1))
        ));
        let h = HermitianOperator::diagonal(&[0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            expectation(&h, &plus()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eigenvalues_are_ascending() {
        let h = HermitianOperator::diagonal(&[3.0, -1.0, 2.0]).unwrap();
        assert_eq!(h.eigenvalues(), &[-1.0, 2.0, 3.0]);
        let e = h.eigenstate(0).unwrap();
        assert!(e.same_ray(&StateVector::basis(3, 1).unwrap(), 1e-14));
    }

    #[test]
    fn projector_invariants() {
        let p = plus().projector();
        assert!(Projector::new(p.matrix().clone(), 1e-12).is_ok());
        let bad = p.matrix() * c(2.0, 0.0);
        assert!(Projector::new(bad, 1e-12).is_err());
    }

    #[test]
    fn phase_insensitive_equality() {
        let v = plus();
        let w = v.with_phase(1.3);
        assert!(v.same_ray(&w, 1e-14));
        assert!(!v.approx_eq(&w, 1e-3));
    }
}
