//! Python bindings for `qfluid`.
//!
//! States and coefficients are passed as lists of Python `complex`, matrices
//! as nested lists. Library errors surface as `ValueError`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qfluid::fluid;
use qfluid::linalg::{self, StateVector};
use qfluid::projective::{self, ProjectivePoint};
use qfluid::spin::{self, Contour};

fn err(e: qfluid::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn state(amplitudes: Vec<Complex64>) -> PyResult<StateVector> {
    StateVector::normalized(DVector::from_vec(amplitudes)).map_err(err)
}

fn point(amplitudes: Vec<Complex64>) -> PyResult<ProjectivePoint> {
    Ok(ProjectivePoint::new(state(amplitudes)?))
}

fn rows(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Hermitian operator built from a square nested list of complex entries.
#[pyclass(name = "Hamiltonian", module = "qfluid_py", from_py_object)]
#[derive(Clone)]
pub struct PyHamiltonian {
    inner: linalg::HermitianOperator,
}

#[pymethods]
impl PyHamiltonian {
    #[new]
    fn new(matrix: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let m = DMatrix::from_fn(n, n, |i, j| matrix[i][j]);
        Ok(Self {
            inner: linalg::HermitianOperator::new(m).map_err(err)?,
        })
    }

    #[staticmethod]
    fn diagonal(values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: linalg::HermitianOperator::diagonal(&values).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().to_vec()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        rows(self.inner.matrix())
    }

    /// `⟨H²⟩ - ⟨H⟩²` in the normalized state.
    fn dispersion(&self, amplitudes: Vec<Complex64>) -> PyResult<f64> {
        linalg::dispersion_squared(&self.inner, &state(amplitudes)?).map_err(err)
    }

    /// `g_FS(X, X)` at the ray of the state.
    fn dispersion_via_metric(&self, amplitudes: Vec<Complex64>) -> PyResult<f64> {
        projective::dispersion_via_metric(&self.inner, &point(amplitudes)?).map_err(err)
    }

    fn evolve(&self, amplitudes: Vec<Complex64>, t: f64) -> PyResult<Vec<Complex64>> {
        let v = linalg::evolve(&self.inner, &state(amplitudes)?, t).map_err(err)?;
        Ok(v.amplitudes().iter().copied().collect())
    }

    fn __repr__(&self) -> String {
        format!("Hamiltonian(dim={}, eigenvalues={:?})", self.inner.dim(), self.inner.eigenvalues())
    }
}

/// The Schrödinger fluid of a Hamiltonian.
#[pyclass(name = "SchrodingerFluid", module = "qfluid_py")]
pub struct PySchrodingerFluid {
    inner: fluid::SchrodingerFluid,
}

#[pymethods]
impl PySchrodingerFluid {
    #[new]
    fn new(h: &PyHamiltonian) -> Self {
        Self {
            inner: fluid::SchrodingerFluid::new(h.inner.clone()),
        }
    }

    fn pressure(&self, amplitudes: Vec<Complex64>) -> PyResult<f64> {
        self.inner.pressure(&point(amplitudes)?).map_err(err)
    }

    fn pressure_gradient_norm(&self, amplitudes: Vec<Complex64>) -> PyResult<f64> {
        Ok(self.inner.pressure_gradient(&point(amplitudes)?).map_err(err)?.norm())
    }

    /// `‖(∇_X X)♭ + dp‖` at the ray of the state.
    fn euler_residual(&self, amplitudes: Vec<Complex64>) -> PyResult<f64> {
        Ok(self.inner.euler_residual(&point(amplitudes)?).map_err(err)?.norm())
    }

    /// List of `(indices, pressure, gradient_norm, state)` tuples.
    #[allow(clippy::type_complexity)]
    fn critical_points(&self) -> PyResult<Vec<(Vec<usize>, f64, f64, Vec<Complex64>)>> {
        let points = self.inner.critical_points().map_err(err)?;
        Ok(points
            .into_iter()
            .map(|c| {
                let amps = c.representative.representative().amplitudes().iter().copied().collect();
                (c.indices, c.pressure, c.gradient_norm, amps)
            })
            .collect())
    }

    /// Max relative error of the vorticity `2ω cosθ` on `S_ij`.
    fn vorticity_error(&self, i: usize, j: usize, n_theta: usize, n_phi: usize) -> PyResult<f64> {
        Ok(self.inner.vorticity_on_sphere(i, j, n_theta, n_phi).map_err(err)?.max_rel_err)
    }

    /// `(max flow/geodesic distance, max evolution error)`.
    fn trajectory(&self, amplitudes: Vec<Complex64>, t_end: f64, steps: usize) -> PyResult<(f64, f64)> {
        let r = self.inner.trajectory(&point(amplitudes)?, t_end, steps).map_err(err)?;
        Ok((r.max_deviation, r.max_evolution_error))
    }

    fn zeno_decay(&self, amplitudes: Vec<Complex64>, t: f64, n: usize) -> PyResult<f64> {
        self.inner.zeno_decay(&state(amplitudes)?, t, n).map_err(err)
    }
}

/// Spin-`s` wavefunction as a polynomial of degree at most `2s` in `ζ`.
#[pyclass(name = "SpinWaveFunction", module = "qfluid_py", from_py_object)]
#[derive(Clone)]
pub struct PySpinWaveFunction {
    inner: spin::SpinWaveFunction,
}

#[pymethods]
impl PySpinWaveFunction {
    #[new]
    fn new(two_s: u32, coeffs: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self {
            inner: spin::SpinWaveFunction::new(two_s, coeffs).map_err(err)?,
        })
    }

    /// `Π (ζ - a_k)^{μ_k}` from `(a_k, μ_k)` pairs.
    #[staticmethod]
    fn from_roots(two_s: u32, roots: Vec<(Complex64, u32)>) -> PyResult<Self> {
        Ok(Self {
            inner: spin::SpinWaveFunction::from_roots(two_s, &roots).map_err(err)?,
        })
    }

    #[getter]
    fn two_s(&self) -> u32 {
        self.inner.two_s()
    }

    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().to_vec()
    }

    fn __call__(&self, zeta: Complex64) -> Complex64 {
        self.inner.eval(zeta)
    }

    fn roots(&self) -> Vec<Complex64> {
        self.inner.roots().to_vec()
    }

    /// `(root, multiplicity)` pairs.
    fn divisor(&self) -> PyResult<Vec<(Complex64, u32)>> {
        let d = spin::vorticity_divisor(&self.inner).map_err(err)?;
        Ok(d.entries.iter().map(|e| (e.root, e.multiplicity)).collect())
    }

    fn madelung_velocity(&self, zeta: Complex64) -> PyResult<(f64, f64)> {
        let [vx, vy] = spin::madelung_velocity(&self.inner, zeta).map_err(err)?;
        Ok((vx, vy))
    }

    #[pyo3(signature = (center, radius, nodes = spin::DEFAULT_NODES))]
    fn circulation_circle(&self, center: Complex64, radius: f64, nodes: usize) -> PyResult<f64> {
        let contour = Contour::circle_with_nodes(center, radius, nodes).map_err(err)?;
        spin::circulation(&self.inner, &contour).map_err(err)
    }

    /// Circulation around a polygon traversed in vertex order.
    fn circulation_polygon(&self, vertices: Vec<Complex64>) -> PyResult<f64> {
        let contour = Contour::polygon(vertices).map_err(err)?;
        spin::circulation(&self.inner, &contour).map_err(err)
    }

    fn total_circulation(&self) -> PyResult<f64> {
        Ok(spin::total_spin_circulation(&self.inner).map_err(err)?.value)
    }

    fn weighted_norm(&self) -> f64 {
        self.inner.weighted_norm()
    }

    fn __repr__(&self) -> String {
        format!("SpinWaveFunction(two_s={}, coeffs={:?})", self.inner.two_s(), self.inner.coeffs())
    }
}

/// `[[a, -b̄], [b, ā]]` with `|a|² + |b|² = 1`.
#[pyclass(name = "SU2Element", module = "qfluid_py", from_py_object)]
#[derive(Clone)]
pub struct PySU2Element {
    inner: spin::SU2Element,
}

#[pymethods]
impl PySU2Element {
    #[new]
    fn new(a: Complex64, b: Complex64) -> PyResult<Self> {
        Ok(Self {
            inner: spin::SU2Element::new(a, b).map_err(err)?,
        })
    }

    #[staticmethod]
    fn diagonal(alpha: f64) -> Self {
        Self {
            inner: spin::SU2Element::diagonal(alpha),
        }
    }

    fn __mul__(&self, other: &PySU2Element) -> Self {
        Self {
            inner: self.inner.mul(&other.inner),
        }
    }

    fn inverse(&self) -> Self {
        Self {
            inner: self.inner.inverse(),
        }
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        rows(&self.inner.matrix())
    }

    fn mobius(&self, zeta: Complex64) -> Complex64 {
        self.inner.mobius(zeta)
    }

    fn act(&self, chi: &PySpinWaveFunction) -> PySpinWaveFunction {
        PySpinWaveFunction {
            inner: spin::su2_act(&self.inner, &chi.inner),
        }
    }

    /// Matrix of the spin-`s` representation in the orthonormal basis.
    fn representation_matrix(&self, two_s: u32) -> Vec<Vec<Complex64>> {
        rows(&spin::representation_matrix(&self.inner, two_s))
    }
}

#[pyfunction]
fn fs_distance(u: Vec<Complex64>, v: Vec<Complex64>) -> PyResult<f64> {
    Ok(projective::fs_distance(&state(u)?, &state(v)?))
}

#[pyfunction]
fn sz_spectrum(two_s: u32) -> Vec<f64> {
    spin::sz_spectrum(two_s)
}

#[pyfunction]
fn zeno_decay(h: &PyHamiltonian, amplitudes: Vec<Complex64>, t: f64, n: usize) -> PyResult<f64> {
    fluid::zeno_decay(&h.inner, &state(amplitudes)?, t, n).map_err(err)
}

#[pymodule]
fn qfluid_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHamiltonian>()?;
    m.add_class::<PySchrodingerFluid>()?;
    m.add_class::<PySpinWaveFunction>()?;
    m.add_class::<PySU2Element>()?;
    m.add_function(wrap_pyfunction!(fs_distance, m)?)?;
    m.add_function(wrap_pyfunction!(sz_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(zeno_decay, m)?)?;
    Ok(())
}
