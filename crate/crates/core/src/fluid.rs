//! The Schrödinger fluid: the flow `[v] ↦ [exp(-iHt) v]` on `(CP^n, g_FS)`
//! read as a stationary perfect fluid.
//!
//! The velocity is the fundamental field `X` of `H`, which is Killing, so
//! `X` solves the stationary Euler equation with pressure
//! `p = ½⟨X, X⟩ = ½(ΔH)²`.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dispersion_squared, evolve, HermitianOperator, StateVector};
use crate::projective::{
    chart_manifold, fs_distance, fundamental_field, horizontal_lift, homogeneous,
    GeodesicSphere, ProjectivePoint, TangentAtPoint,
};
use crate::riemann::{ChartManifold, ScalarField, VectorField, DEFAULT_STEP};

/// Agreement required between `(dp)♯` and `-∇_X X` in [`SchrodingerFluid::pressure_gradient`].
pub const GRADIENT_AGREEMENT_TOL: f64 = 1e-5;
/// Gradient norm below which a point counts as critical.
pub const CRITICAL_GRADIENT_TOL: f64 = 1e-8;
/// `(ΔH)² t²` bound of the quadratic Zeno regime.
pub const ZENO_QUADRATIC_REGIME: f64 = 0.1;

/// `p([v]) = ½(ΔH)²`.
#[derive(Debug, Clone)]
pub struct PressureField {
    hamiltonian: HermitianOperator,
}

impl PressureField {
    pub fn new(hamiltonian: HermitianOperator) -> Self {
        Self { hamiltonian }
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    pub fn value(&self, p: &ProjectivePoint) -> Result<f64> {
        Ok(0.5 * dispersion_squared(&self.hamiltonian, p.representative())?)
    }

    /// The pressure pulled back to affine chart `k`.
    pub fn in_chart(&self, k: usize) -> ScalarField {
        let h = self.hamiltonian.clone();
        ScalarField::new(move |x| {
            let v = StateVector::normalized(homogeneous(x, k)).expect("chart point");
            0.5 * dispersion_squared(&h, &v).expect("matching dimension")
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Eigenstate,
    PairSuperposition,
}

/// A critical point of the pressure.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub kind: CriticalKind,
    /// `[i]` for eigenstates, `[i, j]` with `i > j` for pairs.
    pub indices: Vec<usize>,
    pub representative: ProjectivePoint,
    pub pressure: f64,
    pub gradient_norm: f64,
    /// Pairs come in a U(1) family `(e_j + e^{iα} e_i)/√2`; the representative has `α = 0`.
    pub phase_orbit: bool,
}

/// Pressure gradient computed along both routes.
#[derive(Debug, Clone)]
pub struct PressureGradient {
    pub tangent: TangentAtPoint,
    pub chart_index: usize,
    /// `(dp)♯` in chart coordinates.
    pub chart_vector: DVector<f64>,
    /// `g`-norm of `(dp)♯ + ∇_X X`.
    pub mismatch: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VorticitySample {
    pub theta: f64,
    pub phi: f64,
    pub numeric: f64,
    pub analytic: f64,
    pub abs_err: f64,
}

/// Scalar vorticity `w / dσ` sampled on a geodesic sphere.
#[derive(Debug, Clone)]
pub struct VorticityProfile {
    pub sphere: GeodesicSphere,
    pub omega: f64,
    pub samples: Vec<VorticitySample>,
    pub max_abs_err: f64,
    /// Max error relative to the peak value `2|ω|`.
    pub max_rel_err: f64,
}

/// A Schrödinger trajectory compared against the geodesic with the same
/// initial point and velocity.
#[derive(Debug, Clone)]
pub struct TrajectoryReport {
    pub chart_index: usize,
    pub times: Vec<f64>,
    pub flow: Vec<StateVector>,
    pub geodesic: Vec<StateVector>,
    /// Max Fubini–Study distance between the two curves at equal times.
    pub max_deviation: f64,
    /// Max distance between the chart flow and `exp(-iHt) v`.
    pub max_evolution_error: f64,
    pub exited: bool,
}

/// The Schrödinger fluid of a Hamiltonian.
#[derive(Debug, Clone)]
pub struct SchrodingerFluid {
    h: HermitianOperator,
    step: f64,
}

impl SchrodingerFluid {
    pub fn new(h: HermitianOperator) -> Self {
        Self {
            h,
            step: DEFAULT_STEP,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.dim() - 1
    }

    pub fn pressure_field(&self) -> PressureField {
        PressureField::new(self.h.clone())
    }

    /// Chart `k` of `CP^n` with the velocity field and pressure expressed there.
    pub fn chart(&self, k: usize) -> Result<(ChartManifold, VectorField, ScalarField)> {
        let m = chart_manifold(self.n()).with_step(self.step);
        let x = fundamental_field(&self.h, k)?;
        let p = self.pressure_field().in_chart(k);
        Ok((m, x, p))
    }

    fn check_point(&self, p: &ProjectivePoint) -> Result<()> {
        if p.representative().dim() != self.h.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.h.dim(),
                found: p.representative().dim(),
            });
        }
        Ok(())
    }

    pub fn pressure(&self, p: &ProjectivePoint) -> Result<f64> {
        self.pressure_field().value(p)
    }

    /// `½ g_FS(X, X)`, the metric route to the pressure.
    pub fn pressure_via_metric(&self, p: &ProjectivePoint) -> Result<f64> {
        Ok(0.5 * crate::projective::dispersion_via_metric(&self.h, p)?)
    }

    /// `(∇_X X)♭ + dp` at `p`, in `p`'s chart.
    pub fn euler_residual(&self, p: &ProjectivePoint) -> Result<DVector<f64>> {
        self.check_point(p)?;
        let chart = p.chart();
        let (m, x, pressure) = self.chart(chart.index)?;
        m.euler_residual(&x, &pressure, chart.coords.as_slice())
    }

    /// `(dp)♯` by Richardson-extrapolated central differences (steps `h`, `h/2`),
    /// cross-checked against `-∇_X X`.
    pub fn pressure_gradient_detailed(&self, p: &ProjectivePoint, tolerance: f64) -> Result<PressureGradient> {
        self.check_point(p)?;
        let chart = p.chart();
        let x0 = chart.coords.as_slice();
        let (m, x, pressure) = self.chart(chart.index)?;
        let coarse = m.gradient(&pressure, x0)?;
        let fine = m.clone().with_step(0.5 * m.step()).gradient(&pressure, x0)?;
        let grad = (fine * 4.0 - coarse) / 3.0;
        let acc = m.covariant_derivative(&x, &x, x0)?;
        let mismatch = m.norm(x0, &(&grad + &acc))?;
        if !(mismatch <= tolerance) {
            return Err(Error::GradientMismatch { mismatch, tolerance });
        }
        let tangent = TangentAtPoint {
            base: chart.to_point()?,
            horizontal: horizontal_lift(x0, chart.index, &grad),
        };
        Ok(PressureGradient {
            tangent,
            chart_index: chart.index,
            chart_vector: grad,
            mismatch,
        })
    }

    pub fn pressure_gradient(&self, p: &ProjectivePoint) -> Result<TangentAtPoint> {
        Ok(self.pressure_gradient_detailed(p, GRADIENT_AGREEMENT_TOL)?.tangent)
    }

    /// Horizontal lift `-i(H - ⟨H⟩)v` of the velocity at the chart representative of `p`.
    pub fn velocity(&self, p: &ProjectivePoint) -> Result<TangentAtPoint> {
        self.check_point(p)?;
        let chart = p.chart();
        let base = chart.to_point()?;
        let v = base.representative().amplitudes().clone();
        let hv = self.h.apply(&v);
        let mean = v.dotc(&hv);
        let horizontal = (hv - &v * mean) * Complex64::new(0.0, -1.0);
        Ok(TangentAtPoint { base, horizontal })
    }

    /// Eigenstates and equal-weight pair superpositions, each verified critical.
    pub fn critical_points(&self) -> Result<Vec<CriticalPoint>> {
        self.h.check_nondegenerate()?;
        let dim = self.h.dim();
        let lambda = self.h.eigenvalues();
        let mut out = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            let representative = ProjectivePoint::new(self.h.eigenstate(i)?);
            out.push(self.certify(CriticalKind::Eigenstate, vec![i], representative, 0.0)?);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ev = self.h.eigenvectors();
        for i in 1..dim {
            for j in 0..i {
                let v = (ev.column(j) + ev.column(i)) * Complex64::new(s, 0.0);
                let representative = ProjectivePoint::new(StateVector::normalized(v)?);
                let expected = (lambda[i] - lambda[j]).powi(2) / 8.0;
                out.push(self.certify(CriticalKind::PairSuperposition, vec![i, j], representative, expected)?);
            }
        }
        Ok(out)
    }

    fn certify(
        &self,
        kind: CriticalKind,
        indices: Vec<usize>,
        representative: ProjectivePoint,
        expected: f64,
    ) -> Result<CriticalPoint> {
        let pressure = self.pressure(&representative)?;
        debug_assert!((pressure - expected).abs() <= 1e-10 * expected.max(1.0));
        let gradient_norm = self.pressure_gradient(&representative)?.norm();
        if gradient_norm >= CRITICAL_GRADIENT_TOL {
            log::warn!("critical point {indices:?} has gradient norm {gradient_norm:e}");
        }
        Ok(CriticalPoint {
            kind,
            phase_orbit: kind == CriticalKind::PairSuperposition,
            indices,
            representative,
            pressure,
            gradient_norm,
        })
    }

    /// Numeric scalar vorticity `dX♭ / dσ` on `S_ij` at `(θ, φ)`.
    pub fn scalar_vorticity(&self, sphere: &GeodesicSphere, theta: f64, phi: f64) -> Result<f64> {
        let frame = sphere.frame(theta, phi);
        let (m, x, _) = self.chart(frame.chart_index)?;
        let xflat = m.flat_field(&x);
        let w = m.exterior_derivative_oneform(&xflat, frame.coords.as_slice())?;
        Ok(frame.u1.dot(&(w * &frame.u2)) / frame.area)
    }

    /// Samples numeric vs. analytic `2ω cosθ` on an `n_theta × n_phi` grid.
    ///
    /// `θ` runs over `[0, π]` including both poles, `φ` over `[0, 2π)`.
    pub fn vorticity_on_sphere(&self, i: usize, j: usize, n_theta: usize, n_phi: usize) -> Result<VorticityProfile> {
        if n_theta < 2 || n_phi < 1 {
            return Err(Error::InvalidInput(format!("grid {n_theta}x{n_phi} too small")));
        }
        let sphere = GeodesicSphere::new(&self.h, i, j)?;
        let omega = sphere.omega();
        let mut samples = Vec::with_capacity(n_theta * n_phi);
        for a in 0..n_theta {
            let theta = std::f64::consts::PI * a as f64 / (n_theta - 1) as f64;
            for b in 0..n_phi {
                let phi = 2.0 * std::f64::consts::PI * b as f64 / n_phi as f64;
                let numeric = self.scalar_vorticity(&sphere, theta, phi)?;
                let analytic = 2.0 * omega * theta.cos();
                samples.push(VorticitySample {
                    theta,
                    phi,
                    numeric,
                    analytic,
                    abs_err: (numeric - analytic).abs(),
                });
            }
        }
        let max_abs_err = samples.iter().fold(0.0_f64, |m, s| m.max(s.abs_err));
        let scale = 2.0 * omega.abs();
        let max_rel_err = if scale > 0.0 { max_abs_err / scale } else { max_abs_err };
        Ok(VorticityProfile {
            sphere,
            omega,
            samples,
            max_abs_err,
            max_rel_err,
        })
    }

    /// `|grad w̃ · X|` on `S_ij` with `w̃ = 2ω cosθ`.
    pub fn vorticity_transport_residual(&self, i: usize, j: usize, theta: f64, phi: f64) -> Result<f64> {
        self.transport_residual_perturbed(i, j, theta, phi, 0.0)
    }

    /// As [`Self::vorticity_transport_residual`] for the field `X + ε ∂_θ`.
    pub fn transport_residual_perturbed(&self, i: usize, j: usize, theta: f64, phi: f64, eps: f64) -> Result<f64> {
        let sphere = GeodesicSphere::new(&self.h, i, j)?;
        let omega = sphere.omega();
        let p = sphere.point(theta, phi);
        let chart = p.chart();
        let x0 = chart.coords.as_slice();
        let (m, x, _) = self.chart(chart.index)?;
        let (d_theta, d_phi) = sphere.coordinate_tangents(theta, phi, chart.index);
        let velocity = x.eval(x0) + &d_theta * eps;
        let g = m.metric(x0)?;
        let x_theta = velocity.dot(&(&g * &d_theta)) / d_theta.dot(&(&g * &d_theta));
        let phi_norm = d_phi.dot(&(&g * &d_phi));
        let x_phi = if phi_norm > 1e-24 {
            velocity.dot(&(&g * &d_phi)) / phi_norm
        } else {
            0.0
        };
        let dw_dtheta = -2.0 * omega * theta.sin();
        let dw_dphi = 0.0;
        Ok((x_theta * dw_dtheta + x_phi * dw_dphi).abs())
    }

    /// Survival probability under `N` evenly spaced measurements in `[0, t]`.
    pub fn zeno_decay(&self, v: &StateVector, t: f64, n: usize) -> Result<f64> {
        zeno_decay(&self.h, v, t, n)
    }

    /// Integrates the chart flow of `X` from `p0` and the geodesic with the
    /// same initial velocity, both by RK4 with `steps` steps over `[0, t_end]`.
    pub fn trajectory(&self, p0: &ProjectivePoint, t_end: f64, steps: usize) -> Result<TrajectoryReport> {
        self.check_point(p0)?;
        let chart = p0.chart();
        let k = chart.index;
        let x0 = chart.coords.as_slice();
        let (m, x, _) = self.chart(k)?;
        let flow = m.integral_curve(&x, x0, t_end, steps)?;
        let geo = m.geodesic_integrate(x0, &x.eval(x0), t_end, steps)?;
        let to_state = |c: &DVector<f64>| StateVector::normalized(homogeneous(c.as_slice(), k));
        let start = to_state(&chart.coords)?;
        let mut report = TrajectoryReport {
            chart_index: k,
            times: Vec::new(),
            flow: Vec::new(),
            geodesic: Vec::new(),
            max_deviation: 0.0,
            max_evolution_error: 0.0,
            exited: flow.exited || geo.exited,
        };
        for ((t, a), b) in flow.times.iter().zip(&flow.points).zip(&geo.points) {
            let (sa, sb) = (to_state(a)?, to_state(b)?);
            let exact = evolve(&self.h, &start, *t)?;
            report.max_deviation = report.max_deviation.max(fs_distance(&sa, &sb));
            report.max_evolution_error = report.max_evolution_error.max(fs_distance(&sa, &exact));
            report.times.push(*t);
            report.flow.push(sa);
            report.geodesic.push(sb);
        }
        Ok(report)
    }
}

/// `|⟨v| exp(-iHt/N) v⟩|^{2N}`.
pub fn zeno_decay(h: &HermitianOperator, v: &StateVector, t: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("measurement count must be at least 1".into()));
    }
    let step = evolve(h, v, t / n as f64)?;
    let single = v.inner(&step).norm_sqr();
    Ok(single.powi(n as i32))
}

/// Whether `(ΔH)² t²` is inside the quadratic Zeno regime.
pub fn zeno_quadratic_regime(h: &HermitianOperator, v: &StateVector, t: f64) -> Result<bool> {
    Ok(dispersion_squared(h, v)? * t * t < ZENO_QUADRATIC_REGIME)
}
