//! Chart-based Riemannian geometry by finite differences.
//!
//! A [`ChartManifold`] is a metric `g_ij(x)` on an open subset of `R^d`.
//! Every derivative here is a second-order central difference with step
//! [`ChartManifold::step`]; stencil points must stay inside the chart domain,
//! otherwise the operation fails with [`Error::ChartBoundary`].
//!
//! Verifier operations (`euler_residual`, `transport_identity_residual`,
//! `lie_derivative_*`, `clairaut_check`) return raw residuals. Thresholds are
//! the caller's business.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default finite-difference step in coordinate units.
pub const DEFAULT_STEP: f64 = 1e-4;

type MetricFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
type DomainFn = dyn Fn(&[f64]) -> bool + Send + Sync;

/// A smooth vector field `x ↦ X^i(x)` in chart coordinates.
#[derive(Clone)]
pub struct VectorField(Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>);

/// A 1-form `x ↦ α_i(x)`.
#[derive(Clone)]
pub struct OneForm(Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>);

/// A 2-form `x ↦ w_ij(x)`, antisymmetric.
#[derive(Clone)]
pub struct TwoForm(Arc<dyn Fn(&[f64]) -> Result<DMatrix<f64>> + Send + Sync>);

/// A scalar function on the chart.
#[derive(Clone)]
pub struct ScalarField(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>);

impl VectorField {
    pub fn new(f: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(move |_| DVector::zeros(dim))
    }

    pub fn eval(&self, x: &[f64]) -> DVector<f64> {
        (self.0)(x)
    }

    /// `self + eps·other`.
    pub fn perturbed(&self, other: &VectorField, eps: f64) -> VectorField {
        let (a, b) = (self.clone(), other.clone());
        VectorField::new(move |x| a.eval(x) + b.eval(x) * eps)
    }
}

impl OneForm {
    pub fn new(f: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, x: &[f64]) -> DVector<f64> {
        (self.0)(x)
    }
}

impl TwoForm {
    pub fn new(f: impl Fn(&[f64]) -> Result<DMatrix<f64>> + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        (self.0)(x)
    }
}

impl ScalarField {
    pub fn new(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.0)(x)
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VectorField")
    }
}

/// Christoffel symbols `Γ^k_{ij}` at a point.
#[derive(Debug, Clone)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^k_{ij} u^i v^j`.
    pub fn contract(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let d = self.dim;
        DVector::from_fn(d, |k, _| {
            let mut s = 0.0;
            for i in 0..d {
                for j in 0..d {
                    s += self.get(k, i, j) * u[i] * v[j];
                }
            }
            s
        })
    }
}

/// A Riemannian metric given on a single coordinate chart.
#[derive(Clone)]
pub struct ChartManifold {
    dim: usize,
    metric: Arc<MetricFn>,
    domain: Arc<DomainFn>,
    step: f64,
}

impl fmt::Debug for ChartManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartManifold")
            .field("dim", &self.dim)
            .field("step", &self.step)
            .finish()
    }
}

/// Output of [`ChartManifold::geodesic_integrate`] and [`ChartManifold::integral_curve`].
#[derive(Debug, Clone)]
pub struct DiscreteCurve {
    pub times: Vec<f64>,
    pub points: Vec<DVector<f64>>,
    pub velocities: Vec<DVector<f64>>,
    /// Set when integration stopped early because the curve left the chart.
    pub exited: bool,
}

impl DiscreteCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<&DVector<f64>> {
        self.points.last()
    }
}

impl ChartManifold {
    pub fn new(
        dim: usize,
        metric: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
        domain: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            metric: Arc::new(metric),
            domain: Arc::new(domain),
            step: DEFAULT_STEP,
        }
    }

    /// Flat `R^d`.
    pub fn euclidean(dim: usize) -> Self {
        Self::new(dim, move |_| DMatrix::identity(dim, dim), |_| true)
    }

    /// Round 2-sphere of radius `r` in colatitude/azimuth `(θ, φ)`, chart `0 < θ < π`.
    pub fn round_sphere(r: f64) -> Self {
        Self::new(
            2,
            move |x| {
                let s = x[0].sin();
                DMatrix::from_row_slice(2, 2, &[r * r, 0.0, 0.0, r * r * s * s])
            },
            |x| x[0] > 0.0 && x[0] < std::f64::consts::PI,
        )
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim && x.iter().all(|c| c.is_finite()) && (self.domain)(x)
    }

    /// Raw metric matrix, no checks.
    pub fn metric_raw(&self, x: &[f64]) -> DMatrix<f64> {
        (self.metric)(x)
    }

    /// Metric at `x`, verified symmetric positive-definite.
    pub fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.ensure_inside(x)?;
        let g = (self.metric)(x);
        if g.nrows() != self.dim || g.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: g.nrows(),
            });
        }
        if g.clone().cholesky().is_none() {
            return Err(Error::SingularMetric { point: x.to_vec() });
        }
        Ok(g)
    }

    pub fn metric_inverse(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.metric(x)?;
        g.cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| Error::SingularMetric { point: x.to_vec() })
    }

    pub fn inner(&self, x: &[f64], u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        Ok(u.dot(&(self.metric(x)? * v)))
    }

    pub fn norm(&self, x: &[f64], u: &DVector<f64>) -> Result<f64> {
        Ok(self.inner(x, u, u)?.max(0.0).sqrt())
    }

    fn ensure_inside(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if !self.contains(x) {
            return Err(Error::ChartBoundary { point: x.to_vec() });
        }
        Ok(())
    }

    /// Checks that `x ± r·e_i` lie in the chart for `r = depth·h`.
    fn ensure_margin(&self, x: &[f64], depth: usize) -> Result<()> {
        self.ensure_inside(x)?;
        let r = self.step * depth as f64;
        let mut y = x.to_vec();
        for i in 0..self.dim {
            for sign in [-1.0, 1.0] {
                y[i] = x[i] + sign * r;
                if !self.contains(&y) {
                    return Err(Error::ChartBoundary { point: y.clone() });
                }
            }
            y[i] = x[i];
        }
        Ok(())
    }

    /// Central difference `∂_i f(x)` for vector-valued `f`; column `i` holds `∂_i f`.
    fn jacobian<F>(&self, x: &[f64], f: F) -> Result<DMatrix<f64>>
    where
        F: Fn(&[f64]) -> Result<DVector<f64>>,
    {
        let h = self.step;
        let mut y = x.to_vec();
        let mut cols = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            y[i] = x[i] + h;
            let fp = f(&y)?;
            y[i] = x[i] - h;
            let fm = f(&y)?;
            y[i] = x[i];
            cols.push((fp - fm) / (2.0 * h));
        }
        let rows = cols.first().map_or(0, |c| c.len());
        Ok(DMatrix::from_fn(rows, self.dim, |r, c| cols[c][r]))
    }

    fn scalar_gradient<F>(&self, x: &[f64], f: F) -> Result<DVector<f64>>
    where
        F: Fn(&[f64]) -> Result<f64>,
    {
        let h = self.step;
        let mut y = x.to_vec();
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            y[i] = x[i] + h;
            let fp = f(&y)?;
            y[i] = x[i] - h;
            let fm = f(&y)?;
            y[i] = x[i];
            out[i] = (fp - fm) / (2.0 * h);
        }
        Ok(out)
    }

    /// `∂_l g` for each `l`.
    fn metric_derivatives(&self, x: &[f64]) -> Result<Vec<DMatrix<f64>>> {
        let h = self.step;
        let mut y = x.to_vec();
        let mut out = Vec::with_capacity(self.dim);
        for l in 0..self.dim {
            y[l] = x[l] + h;
            let gp = (self.metric)(&y);
            y[l] = x[l] - h;
            let gm = (self.metric)(&y);
            y[l] = x[l];
            out.push((gp - gm) / (2.0 * h));
        }
        Ok(out)
    }

    fn field_jacobian(&self, field: &VectorField, x: &[f64]) -> Result<DMatrix<f64>> {
        self.jacobian(x, |y| Ok(field.eval(y)))
    }

    /// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij})`.
    pub fn christoffel(&self, x: &[f64]) -> Result<Christoffel> {
        self.ensure_margin(x, 1)?;
        let ginv = self.metric_inverse(x)?;
        let dg = self.metric_derivatives(x)?;
        let d = self.dim;
        let mut lowered = vec![0.0; d * d * d];
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    lowered[(l * d + i) * d + j] =
                        0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
            }
        }
        let mut data = vec![0.0; d * d * d];
        for k in 0..d {
            for i in 0..d {
                for j in i..d {
                    let mut s = 0.0;
                    for l in 0..d {
                        s += ginv[(k, l)] * lowered[(l * d + i) * d + j];
                    }
                    data[(k * d + i) * d + j] = s;
                    data[(k * d + j) * d + i] = s;
                }
            }
        }
        Ok(Christoffel { dim: d, data })
    }

    /// `(∇_X Y)^k = X^i ∂_i Y^k + Γ^k_{ij} X^i Y^j`.
    pub fn covariant_derivative(
        &self,
        x_field: &VectorField,
        y_field: &VectorField,
        x: &[f64],
    ) -> Result<DVector<f64>> {
        let gamma = self.christoffel(x)?;
        let xv = x_field.eval(x);
        let yv = y_field.eval(x);
        let dy = self.field_jacobian(y_field, x)?;
        Ok(&dy * &xv + gamma.contract(&xv, &yv))
    }

    /// `(L_X g)_{ij} = X^k ∂_k g_{ij} + g_{kj} ∂_i X^k + g_{ik} ∂_j X^k`.
    pub fn lie_derivative_metric(&self, field: &VectorField, x: &[f64]) -> Result<DMatrix<f64>> {
        self.ensure_margin(x, 1)?;
        let g = self.metric(x)?;
        let dg = self.metric_derivatives(x)?;
        let xv = field.eval(x);
        let dx = self.field_jacobian(field, x)?;
        let d = self.dim;
        let mut out = DMatrix::zeros(d, d);
        for k in 0..d {
            out += &dg[k] * xv[k];
        }
        // dx[(k, i)] = ∂_i X^k
        let term = dx.transpose() * &g;
        out += &term + term.transpose();
        Ok(out)
    }

    /// `(L_X α)_i = X^j ∂_j α_i + α_j ∂_i X^j`.
    pub fn lie_derivative_oneform(
        &self,
        field: &VectorField,
        alpha: &OneForm,
        x: &[f64],
    ) -> Result<DVector<f64>> {
        self.ensure_margin(x, 1)?;
        let xv = field.eval(x);
        let da = self.jacobian(x, |y| Ok(alpha.eval(y)))?;
        let dx = self.field_jacobian(field, x)?;
        let a = alpha.eval(x);
        Ok(&da * &xv + dx.transpose() * a)
    }

    /// `(L_X w)_{ij} = X^k ∂_k w_{ij} + w_{kj} ∂_i X^k + w_{ik} ∂_j X^k`.
    pub fn lie_derivative_twoform(
        &self,
        field: &VectorField,
        w: &TwoForm,
        x: &[f64],
    ) -> Result<DMatrix<f64>> {
        self.ensure_margin(x, 1)?;
        let h = self.step;
        let xv = field.eval(x);
        let dx = self.field_jacobian(field, x)?;
        let w0 = w.eval(x)?;
        let d = self.dim;
        let mut out = DMatrix::zeros(d, d);
        let mut y = x.to_vec();
        for k in 0..d {
            y[k] = x[k] + h;
            let wp = w.eval(&y)?;
            y[k] = x[k] - h;
            let wm = w.eval(&y)?;
            y[k] = x[k];
            out += (wp - wm) * (xv[k] / (2.0 * h));
        }
        let term = dx.transpose() * &w0;
        out += &term - term.transpose();
        Ok(out)
    }

    /// Index lowering `X ↦ X♭ = g X`.
    pub fn flat(&self, x: &[f64], v: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.metric(x)? * v)
    }

    /// Index raising `α ↦ α♯ = g⁻¹ α`.
    pub fn sharp(&self, x: &[f64], alpha: &DVector<f64>) -> Result<DVector<f64>> {
        let g = self.metric(x)?;
        g.cholesky()
            .map(|c| c.solve(alpha))
            .ok_or_else(|| Error::SingularMetric { point: x.to_vec() })
    }

    /// `X♭` as a 1-form field. Outside the chart it evaluates the raw metric.
    pub fn flat_field(&self, field: &VectorField) -> OneForm {
        let metric = self.metric.clone();
        let field = field.clone();
        OneForm::new(move |x| metric(x) * field.eval(x))
    }

    /// `(dα)_{ij} = ∂_i α_j - ∂_j α_i`.
    pub fn exterior_derivative_oneform(&self, alpha: &OneForm, x: &[f64]) -> Result<DMatrix<f64>> {
        self.ensure_margin(x, 1)?;
        let da = self.jacobian(x, |y| Ok(alpha.eval(y)))?;
        // da[(j, i)] = ∂_i α_j
        Ok(da.transpose() - da)
    }

    /// `dα` as a 2-form field, so it can itself be differentiated.
    pub fn exterior_derivative_field(&self, alpha: &OneForm) -> TwoForm {
        let m = self.clone();
        let alpha = alpha.clone();
        TwoForm::new(move |x| m.exterior_derivative_oneform(&alpha, x))
    }

    /// Differential of a scalar, `(df)_i = ∂_i f`.
    pub fn differential(&self, f: &ScalarField, x: &[f64]) -> Result<DVector<f64>> {
        self.ensure_margin(x, 1)?;
        self.scalar_gradient(x, |y| Ok(f.eval(y)))
    }

    /// Riemannian gradient `(df)♯`.
    pub fn gradient(&self, f: &ScalarField, x: &[f64]) -> Result<DVector<f64>> {
        let df = self.differential(f, x)?;
        self.sharp(x, &df)
    }

    /// `div X = (1/√det g) ∂_i(√det g X^i)`.
    pub fn divergence(&self, field: &VectorField, x: &[f64]) -> Result<f64> {
        self.ensure_margin(x, 1)?;
        let vol = |y: &[f64]| -> f64 { (self.metric)(y).determinant().max(0.0).sqrt() };
        let h = self.step;
        let mut y = x.to_vec();
        let mut s = 0.0;
        for i in 0..self.dim {
            y[i] = x[i] + h;
            let fp = vol(&y) * field.eval(&y)[i];
            y[i] = x[i] - h;
            let fm = vol(&y) * field.eval(&y)[i];
            y[i] = x[i];
            s += (fp - fm) / (2.0 * h);
        }
        let v0 = vol(x);
        if v0 == 0.0 {
            return Err(Error::SingularMetric { point: x.to_vec() });
        }
        Ok(s / v0)
    }

    /// Pointwise `⟨X, X⟩` as a scalar field.
    pub fn kinetic_energy_density(&self, field: &VectorField) -> ScalarField {
        let metric = self.metric.clone();
        let field = field.clone();
        ScalarField::new(move |x| {
            let v = field.eval(x);
            v.dot(&(metric(x) * &v))
        })
    }

    /// `(∇_X X)♭ + dp`; the stationary Euler equation holds where this vanishes.
    pub fn euler_residual(
        &self,
        field: &VectorField,
        pressure: &ScalarField,
        x: &[f64],
    ) -> Result<DVector<f64>> {
        let acc = self.covariant_derivative(field, field, x)?;
        let dp = self.differential(pressure, x)?;
        Ok(self.flat(x, &acc)? + dp)
    }

    /// `L_Y Y♭ - (∇_Y Y)♭ - ½ d⟨Y, Y⟩`, identically zero for smooth `Y`.
    pub fn transport_identity_residual(&self, field: &VectorField, x: &[f64]) -> Result<DVector<f64>> {
        let yflat = self.flat_field(field);
        let lie = self.lie_derivative_oneform(field, &yflat, x)?;
        let acc = self.covariant_derivative(field, field, x)?;
        let energy = self.kinetic_energy_density(field);
        let de = self.differential(&energy, x)?;
        Ok(lie - self.flat(x, &acc)? - de * 0.5)
    }

    /// Classical RK4 for `ẍ^k + Γ^k_{ij} ẋ^i ẋ^j = 0` with fixed step `t_end/steps`.
    ///
    /// If a stage leaves the chart the curve computed so far is returned with
    /// `exited` set.
    pub fn geodesic_integrate(
        &self,
        x0: &[f64],
        u0: &DVector<f64>,
        t_end: f64,
        steps: usize,
    ) -> Result<DiscreteCurve> {
        self.christoffel(x0)?;
        let d = self.dim;
        let rhs = |state: &DVector<f64>| -> Result<DVector<f64>> {
            let pos: Vec<f64> = state.rows(0, d).iter().copied().collect();
            let vel = state.rows(d, d).into_owned();
            let gamma = self.christoffel(&pos)?;
            let acc = -gamma.contract(&vel, &vel);
            let mut out = DVector::zeros(2 * d);
            out.rows_mut(0, d).copy_from(&vel);
            out.rows_mut(d, d).copy_from(&acc);
            Ok(out)
        };
        let mut state = DVector::zeros(2 * d);
        state.rows_mut(0, d).copy_from_slice(x0);
        state.rows_mut(d, d).copy_from(u0);
        self.rk4(state, t_end, steps, rhs)
    }

    /// Integral curve of `X` by RK4; velocities are `X` along the curve.
    pub fn integral_curve(
        &self,
        field: &VectorField,
        x0: &[f64],
        t_end: f64,
        steps: usize,
    ) -> Result<DiscreteCurve> {
        self.ensure_inside(x0)?;
        let d = self.dim;
        let rhs = |state: &DVector<f64>| -> Result<DVector<f64>> {
            let pos: Vec<f64> = state.iter().copied().collect();
            if !self.contains(&pos) {
                return Err(Error::ChartBoundary { point: pos });
            }
            Ok(field.eval(&pos))
        };
        let state = DVector::from_column_slice(x0);
        let mut curve = self.rk4(state, t_end, steps, rhs)?;
        curve.velocities = curve
            .points
            .iter()
            .map(|p| field.eval(p.as_slice()))
            .collect();
        debug_assert!(curve.points.iter().all(|p| p.len() == d));
        Ok(curve)
    }

    fn rk4<F>(&self, mut state: DVector<f64>, t_end: f64, steps: usize, rhs: F) -> Result<DiscreteCurve>
    where
        F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
    {
        let d = self.dim;
        let steps = steps.max(1);
        let dt = t_end / steps as f64;
        let split = |s: &DVector<f64>| -> (DVector<f64>, DVector<f64>) {
            let pos = s.rows(0, d).into_owned();
            let vel = if s.len() == 2 * d {
                s.rows(d, d).into_owned()
            } else {
                DVector::zeros(d)
            };
            (pos, vel)
        };
        let mut curve = DiscreteCurve {
            times: vec![0.0],
            points: vec![],
            velocities: vec![],
            exited: false,
        };
        let (p, v) = split(&state);
        curve.points.push(p);
        curve.velocities.push(v);
        for n in 0..steps {
            let step = (|| -> Result<DVector<f64>> {
                let k1 = rhs(&state)?;
                let k2 = rhs(&(&state + &k1 * (0.5 * dt)))?;
                let k3 = rhs(&(&state + &k2 * (0.5 * dt)))?;
                let k4 = rhs(&(&state + &k3 * dt))?;
                Ok(&state + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0))
            })();
            match step {
                Ok(next) => state = next,
                Err(Error::ChartBoundary { .. }) => {
                    curve.exited = true;
                    break;
                }
                Err(e) => return Err(e),
            }
            let (p, v) = split(&state);
            curve.times.push((n + 1) as f64 * dt);
            curve.points.push(p);
            curve.velocities.push(v);
        }
        Ok(curve)
    }

    /// Max deviation of `⟨γ̇, X⟩` from its initial value along a curve.
    pub fn clairaut_check(&self, curve: &DiscreteCurve, field: &VectorField) -> Result<f64> {
        let mut initial = None;
        let mut worst: f64 = 0.0;
        for (p, v) in curve.points.iter().zip(&curve.velocities) {
            let x = p.as_slice();
            let value = self.inner(x, v, &field.eval(x))?;
            let first = *initial.get_or_insert(value);
            worst = worst.max((value - first).abs());
        }
        Ok(worst)
    }
}

/// Surface of revolution `g = (1 + ρ'²) dz² + ρ² dφ²` in chart `(z, φ)`.
#[derive(Clone)]
pub struct SurfaceOfRevolution {
    manifold: ChartManifold,
    profile: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    z_range: (f64, f64),
}

impl fmt::Debug for SurfaceOfRevolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceOfRevolution")
            .field("z_range", &self.z_range)
            .finish()
    }
}

/// Builds a surface of revolution over the open interval `z_range`.
///
/// The profile is sampled on a fine grid and rejected if it is not strictly
/// positive there.
pub fn surface_of_revolution(
    profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
    derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    z_range: (f64, f64),
) -> Result<SurfaceOfRevolution> {
    let (z0, z1) = z_range;
    if !(z0 < z1) {
        return Err(Error::InvalidInput(format!("empty z range {z_range:?}")));
    }
    const SAMPLES: usize = 2048;
    for k in 1..SAMPLES {
        let z = z0 + (z1 - z0) * k as f64 / SAMPLES as f64;
        let value = profile(z);
        if !(value > 0.0) {
            return Err(Error::NonPositiveProfile { z, value });
        }
    }
    let profile: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(profile);
    let derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(derivative);
    let (rho, drho) = (profile.clone(), derivative.clone());
    let manifold = ChartManifold::new(
        2,
        move |x| {
            let r = rho(x[0]);
            let dr = drho(x[0]);
            DMatrix::from_row_slice(2, 2, &[1.0 + dr * dr, 0.0, 0.0, r * r])
        },
        move |x| x[0] > z0 && x[0] < z1,
    );
    Ok(SurfaceOfRevolution {
        manifold,
        profile,
        derivative,
        z_range,
    })
}

impl SurfaceOfRevolution {
    pub fn manifold(&self) -> &ChartManifold {
        &self.manifold
    }

    pub fn z_range(&self) -> (f64, f64) {
        self.z_range
    }

    pub fn profile(&self, z: f64) -> f64 {
        (self.profile)(z)
    }

    pub fn profile_derivative(&self, z: f64) -> f64 {
        (self.derivative)(z)
    }

    /// The rotation field `∂_φ`.
    pub fn killing_field(&self) -> VectorField {
        VectorField::new(|_| DVector::from_column_slice(&[0.0, 1.0]))
    }

    /// `p = ½⟨∂_φ, ∂_φ⟩ = ½ρ²`.
    pub fn pressure(&self) -> ScalarField {
        let rho = self.profile.clone();
        ScalarField::new(move |x| 0.5 * rho(x[0]).powi(2))
    }

    /// Heights where `ρ' = 0` on a sampling grid, refined by bisection.
    ///
    /// These are the parallels along which `∂_φ` flows on geodesics.
    pub fn critical_parallels(&self, samples: usize) -> Vec<f64> {
        let (z0, z1) = self.z_range;
        let n = samples.max(2);
        let zs: Vec<f64> = (0..=n).map(|k| z0 + (z1 - z0) * k as f64 / n as f64).collect();
        let mut out = Vec::new();
        for w in zs.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let (fa, fb) = (self.profile_derivative(a), self.profile_derivative(b));
            if fa == 0.0 && a > z0 {
                out.push(a);
                continue;
            }
            if fa * fb >= 0.0 {
                continue;
            }
            let mut fa = fa;
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = self.profile_derivative(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn rotation() -> VectorField {
        VectorField::new(|x| DVector::from_column_slice(&[-x[1], x[0]]))
    }

    fn dilation() -> VectorField {
        VectorField::new(|x| DVector::from_column_slice(&[x[0], x[1]]))
    }

    fn constant(v: [f64; 2]) -> VectorField {
        VectorField::new(move |_| DVector::from_column_slice(&v))
    }

    #[test]
    fn christoffel_flat_plane_vanishes() {
        let m = ChartManifold::euclidean(2);
        let g = m.christoffel(&[0.3, -1.2]).unwrap();
        assert!(g.data.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn christoffel_round_sphere_matches_closed_form() {
        for r in [0.5, 1.0, 2.0] {
            let m = ChartManifold::round_sphere(r);
            let th = 1.1;
            let g = m.christoffel(&[th, 0.4]).unwrap();
            assert_abs_diff_eq!(g.get(0, 1, 1), -th.sin() * th.cos(), epsilon = 1e-8);
            assert_abs_diff_eq!(g.get(1, 0, 1), th.cos() / th.sin(), epsilon = 1e-8);
            assert_abs_diff_eq!(g.get(1, 1, 0), th.cos() / th.sin(), epsilon = 1e-8);
            assert_abs_diff_eq!(g.get(0, 0, 0), 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(g.get(1, 1, 1), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn christoffel_cylinder_vanishes() {
        let s = surface_of_revolution(|_| 1.0, |_| 0.0, (-5.0, 5.0)).unwrap();
        let g = s.manifold().christoffel(&[0.2, 1.0]).unwrap();
        assert!(g.data.iter().all(|&c| c.abs() < 1e-12));
    }

    #[test]
    fn covariant_derivative_examples() {
        let m = ChartManifold::euclidean(2);
        let x = [0.7, 0.2];
        let c = constant([1.0, -2.0]);
        assert_abs_diff_eq!(m.covariant_derivative(&c, &c, &x).unwrap().norm(), 0.0, epsilon = 1e-12);
        let y = VectorField::new(|x| DVector::from_column_slice(&[x[0], 0.0]));
        let v = m.covariant_derivative(&constant([1.0, 0.0]), &y, &x).unwrap();
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(v[1], 0.0, epsilon = 1e-12);

        let s = ChartManifold::round_sphere(1.0);
        let th = 0.9;
        let dphi = constant([0.0, 1.0]);
        let v = s.covariant_derivative(&dphi, &dphi, &[th, 0.3]).unwrap();
        assert_abs_diff_eq!(v[0], -th.sin() * th.cos(), epsilon = 1e-8);
        assert_abs_diff_eq!(v[1], 0.0, epsilon = 1e-8);
    }

    #[test]
    fn lie_derivative_metric_examples() {
        let m = ChartManifold::euclidean(2);
        let x = [0.4, -0.8];
        assert!(m.lie_derivative_metric(&rotation(), &x).unwrap().amax() < 1e-10);
        let l = m.lie_derivative_metric(&dilation(), &x).unwrap();
        assert!((l - DMatrix::identity(2, 2) * 2.0).amax() < 1e-10);
        let s = surface_of_revolution(|z| 2.0 + z.sin(), |z| z.cos(), (-10.0, 10.0)).unwrap();
        assert!(s.manifold().lie_derivative_metric(&s.killing_field(), &[0.3, 1.0]).unwrap().amax() < 1e-10);
    }

    #[test]
    fn lie_derivative_oneform_examples() {
        let m = ChartManifold::euclidean(2);
        let x = [0.4, -0.8];
        let rf = m.flat_field(&rotation());
        assert!(m.lie_derivative_oneform(&rotation(), &rf, &x).unwrap().amax() < 1e-10);
        let alpha = OneForm::new(|x| DVector::from_column_slice(&[x[0], 0.0]));
        let zero = m.lie_derivative_oneform(&VectorField::zero(2), &alpha, &x).unwrap();
        assert_eq!(zero.amax(), 0.0);
        let l = m.lie_derivative_oneform(&constant([1.0, 0.0]), &alpha, &x).unwrap();
        assert_abs_diff_eq!(l[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(l[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn musical_isomorphisms() {
        let m = ChartManifold::euclidean(3);
        let v = DVector::from_column_slice(&[1.0, 2.0, 3.0]);
        assert_eq!(m.flat(&[0.0; 3], &v).unwrap(), v);
        let r = 1.5;
        let s = ChartManifold::round_sphere(r);
        let th: f64 = 0.8;
        let f = s.flat(&[th, 0.0], &DVector::from_column_slice(&[0.0, 1.0])).unwrap();
        assert_abs_diff_eq!(f[0], 0.0);
        assert_abs_diff_eq!(f[1], r * r * th.sin().powi(2), epsilon = 1e-14);
        let back = s.sharp(&[th, 0.0], &f).unwrap();
        assert_abs_diff_eq!(back[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn exterior_derivative_examples() {
        let m = ChartManifold::euclidean(2);
        let x = [0.3, 0.6];
        let df = OneForm::new(|x| DVector::from_column_slice(&[2.0 * x[0] * x[1], x[0] * x[0] + x[1].cos()]));
        assert!(m.exterior_derivative_oneform(&df, &x).unwrap().amax() < 1e-8);
        let a = OneForm::new(|x| DVector::from_column_slice(&[0.0, x[0]]));
        let w = m.exterior_derivative_oneform(&a, &x).unwrap();
        assert_abs_diff_eq!(w[(0, 1)], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(w[(1, 0)], -1.0, epsilon = 1e-10);
    }

    #[test]
    fn divergence_examples() {
        let m = ChartManifold::euclidean(2);
        let x = [0.3, 0.6];
        assert_abs_diff_eq!(m.divergence(&rotation(), &x).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(m.divergence(&dilation(), &x).unwrap(), 2.0, epsilon = 1e-10);
        let s = ChartManifold::round_sphere(1.0);
        assert_abs_diff_eq!(s.divergence(&constant([0.0, 1.0]), &[1.0, 0.0]).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn euler_residual_examples() {
        let m = ChartManifold::euclidean(2);
        let x = [0.3, 0.6];
        let p = ScalarField::new(|x| 0.5 * (x[0] * x[0] + x[1] * x[1]));
        assert!(m.euler_residual(&rotation(), &p, &x).unwrap().amax() < 1e-9);
        let zero = m.euler_residual(&VectorField::zero(2), &ScalarField::constant(3.0), &x).unwrap();
        assert_eq!(zero.amax(), 0.0);
    }

    #[test]
    fn identity_residual_on_sphere() {
        let s = ChartManifold::round_sphere(1.0);
        let r = s.transport_identity_residual(&constant([0.0, 1.0]), &[0.7, 0.1]).unwrap();
        assert!(r.amax() < 1e-6);
        let m = ChartManifold::euclidean(2);
        assert_eq!(m.transport_identity_residual(&VectorField::zero(2), &[0.1, 0.2]).unwrap().amax(), 0.0);
    }

    #[test]
    fn boundary_errors() {
        let s = ChartManifold::round_sphere(1.0);
        assert!(matches!(s.christoffel(&[5e-5, 0.0]), Err(Error::ChartBoundary { .. })));
        assert!(matches!(s.metric(&[-1.0, 0.0]), Err(Error::ChartBoundary { .. })));
        let bad = ChartManifold::new(2, |_| DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]), |_| true);
        assert!(matches!(bad.christoffel(&[0.0, 0.0]), Err(Error::SingularMetric { .. })));
    }

    #[test]
    fn geodesic_examples() {
        let m = ChartManifold::euclidean(2);
        let u = DVector::from_column_slice(&[0.3, -0.7]);
        let c = m.geodesic_integrate(&[1.0, 2.0], &u, 2.0, 100).unwrap();
        let end = c.last().unwrap();
        assert_abs_diff_eq!(end[0], 1.6, epsilon = 1e-12);
        assert_abs_diff_eq!(end[1], 0.6, epsilon = 1e-12);

        let s = ChartManifold::round_sphere(1.0);
        let c = s
            .geodesic_integrate(&[PI / 2.0, 0.0], &DVector::from_column_slice(&[0.0, 1.0]), 3.0, 300)
            .unwrap();
        assert!(c.points.iter().all(|p| (p[0] - PI / 2.0).abs() < 1e-10));

        let cyl = surface_of_revolution(|_| 1.0, |_| 0.0, (-10.0, 10.0)).unwrap();
        let c = cyl
            .manifold()
            .geodesic_integrate(&[0.0, 0.0], &DVector::from_column_slice(&[0.5, 2.0]), 1.0, 50)
            .unwrap();
        for (t, p) in c.times.iter().zip(&c.points) {
            assert_abs_diff_eq!(p[0], 0.5 * t, epsilon = 1e-12);
            assert_abs_diff_eq!(p[1], 2.0 * t, epsilon = 1e-12);
        }
    }

    #[test]
    fn geodesic_reports_chart_exit() {
        let cyl = surface_of_revolution(|_| 1.0, |_| 0.0, (-1.0, 1.0)).unwrap();
        let c = cyl
            .manifold()
            .geodesic_integrate(&[0.0, 0.0], &DVector::from_column_slice(&[1.0, 0.0]), 5.0, 500)
            .unwrap();
        assert!(c.exited);
        assert!(c.last().unwrap()[0] < 1.0);
    }

    #[test]
    fn clairaut_examples() {
        let s = ChartManifold::round_sphere(1.0);
        let th0 = PI / 3.0;
        // latitude circle traversed at unit angular rate: not a geodesic
        let n = 64;
        let curve = DiscreteCurve {
            times: (0..=n).map(|k| k as f64 / n as f64).collect(),
            points: (0..=n)
                .map(|k| DVector::from_column_slice(&[th0, 2.0 * PI * k as f64 / n as f64]))
                .collect(),
            velocities: vec![DVector::from_column_slice(&[0.0, 1.0]); n + 1],
            exited: false,
        };
        assert_eq!(s.clairaut_check(&curve, &VectorField::zero(2)).unwrap(), 0.0);
        // rotation about the x axis is Killing but not conserved along a non-geodesic
        let rot_x = VectorField::new(|x| {
            DVector::from_column_slice(&[-x[1].sin(), -x[0].cos() / x[0].sin() * x[1].cos()])
        });
        let dev = s.clairaut_check(&curve, &rot_x).unwrap();
        // ⟨∂_φ, X⟩ = -sinθ cosθ cosφ, so the deviation is 2 sinθ cosθ
        assert_abs_diff_eq!(dev, 2.0 * th0.sin() * th0.cos(), epsilon = 1e-12);
    }

    #[test]
    fn surface_of_revolution_examples() {
        let cyl = surface_of_revolution(|_| 1.0, |_| 0.0, (-1.0, 1.0)).unwrap();
        assert_eq!(cyl.manifold().metric(&[0.0, 0.5]).unwrap(), DMatrix::identity(2, 2));
        assert!(matches!(
            surface_of_revolution(|z| z, |_| 1.0, (-1.0, 1.0)),
            Err(Error::NonPositiveProfile { .. })
        ));
        let s = surface_of_revolution(|z| 2.0 + z.sin(), |z| z.cos(), (-4.0, 4.0)).unwrap();
        let crit = s.critical_parallels(1000);
        assert_eq!(crit.len(), 2);
        assert_abs_diff_eq!(crit[0], -PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(crit[1], PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.pressure().eval(&[PI / 2.0, 0.0]), 4.5, epsilon = 1e-12);
    }
}
