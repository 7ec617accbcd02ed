//! Complex projective space `CP^n` with the Fubini–Study metric, realized as a
//! [`ChartManifold`] on affine charts.
//!
//! Chart `k` is `{z_k ≠ 0}` with complex coordinates `ζ_a = z_a / z_k`
//! (`a ≠ k`), realified and interleaved as `(Re ζ_a, Im ζ_a)`. The metric is
//! normalized so that a horizontal tangent vector `w` at a unit vector `v` has
//! squared length `‖w‖²`. With this normalization `CP^1` is a round sphere of
//! radius ½ and the squared speed of the Schrödinger flow equals the energy
//! variance.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{HermitianOperator, StateVector};
use crate::riemann::{ChartManifold, VectorField};

/// Chart coordinates beyond this modulus are treated as outside the chart.
pub const CHART_RADIUS: f64 = 1e3;

/// A pure state up to phase, with its preferred affine chart.
#[derive(Debug, Clone)]
pub struct ProjectivePoint {
    representative: StateVector,
    chart_index: usize,
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        self.representative.same_ray(&other.representative, 1e-12)
    }
}

impl ProjectivePoint {
    pub fn new(representative: StateVector) -> Self {
        let chart_index = representative.dominant_index();
        Self {
            representative,
            chart_index,
        }
    }

    pub fn from_amplitudes(amplitudes: &[Complex64]) -> Result<Self> {
        Ok(Self::new(StateVector::from_slice(amplitudes)?))
    }

    pub fn representative(&self) -> &StateVector {
        &self.representative
    }

    pub fn chart_index(&self) -> usize {
        self.chart_index
    }

    /// Complex dimension `n` of the ambient `CP^n`.
    pub fn n(&self) -> usize {
        self.representative.dim() - 1
    }

    /// Coordinates in the preferred chart.
    pub fn chart(&self) -> AffineChart {
        self.chart_in(self.chart_index)
            .expect("dominant amplitude is nonzero")
    }

    /// Coordinates in chart `k`; fails if `z_k = 0`.
    pub fn chart_in(&self, k: usize) -> Result<AffineChart> {
        AffineChart::from_homogeneous(self.representative.amplitudes(), k)
    }
}

/// A point of `CP^n` written in affine chart `index`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineChart {
    pub index: usize,
    /// Realified coordinates, length `2n`.
    pub coords: DVector<f64>,
}

impl AffineChart {
    pub fn from_homogeneous(z: &DVector<Complex64>, k: usize) -> Result<Self> {
        let dim = z.len();
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, len: dim });
        }
        let zk = z[k];
        if zk.norm() <= f64::EPSILON * z.norm() {
            return Err(Error::ChartBoundary {
                point: z.iter().flat_map(|c| [c.re, c.im]).collect(),
            });
        }
        let mut coords = DVector::zeros(2 * (dim - 1));
        for (slot, a) in (0..dim).filter(|&a| a != k).enumerate() {
            let zeta = z[a] / zk;
            coords[2 * slot] = zeta.re;
            coords[2 * slot + 1] = zeta.im;
        }
        Ok(Self { index: k, coords })
    }

    /// Homogeneous representative with `z_k = 1` (not normalized).
    pub fn homogeneous(&self) -> DVector<Complex64> {
        homogeneous(self.coords.as_slice(), self.index)
    }

    pub fn to_point(&self) -> Result<ProjectivePoint> {
        Ok(ProjectivePoint::new(StateVector::normalized(self.homogeneous())?))
    }
}

/// A tangent vector at `[v]` represented by its horizontal lift `w ⊥ v`.
#[derive(Debug, Clone)]
pub struct TangentAtPoint {
    pub base: ProjectivePoint,
    pub horizontal: DVector<Complex64>,
}

impl TangentAtPoint {
    /// Fubini–Study length, `‖w‖`.
    pub fn norm(&self) -> f64 {
        self.horizontal.norm()
    }

    /// `g_FS(self, other) = Re⟨w₁|w₂⟩`; both must share a base representative.
    pub fn inner(&self, other: &TangentAtPoint) -> f64 {
        self.horizontal.dotc(&other.horizontal).re
    }

    /// `|⟨v|w⟩|`, zero for a valid horizontal lift.
    pub fn verticality(&self) -> f64 {
        self.base.representative().amplitudes().dotc(&self.horizontal).norm()
    }
}

/// Homogeneous representative `(…, ζ, 1, ζ, …)` of chart coordinates, `z_k = 1`.
pub fn homogeneous(coords: &[f64], k: usize) -> DVector<Complex64> {
    let dim = coords.len() / 2 + 1;
    let mut z = DVector::zeros(dim);
    for (slot, a) in (0..dim).filter(|&a| a != k).enumerate() {
        z[a] = Complex64::new(coords[2 * slot], coords[2 * slot + 1]);
    }
    z[k] = Complex64::new(1.0, 0.0);
    z
}

/// Realified chart velocity `dζ` induced by a homogeneous variation `dz` at `z`.
pub fn chart_pushforward(z: &DVector<Complex64>, dz: &DVector<Complex64>, k: usize) -> DVector<f64> {
    let dim = z.len();
    let zk = z[k];
    let mut out = DVector::zeros(2 * (dim - 1));
    for (slot, a) in (0..dim).filter(|&a| a != k).enumerate() {
        let d = (dz[a] * zk - z[a] * dz[k]) / (zk * zk);
        out[2 * slot] = d.re;
        out[2 * slot + 1] = d.im;
    }
    out
}

/// Horizontal lift at the unit representative of a realified chart velocity.
pub fn horizontal_lift(coords: &[f64], k: usize, delta: &DVector<f64>) -> DVector<Complex64> {
    let z = homogeneous(coords, k);
    let dim = z.len();
    let mut dz = DVector::zeros(dim);
    for (slot, a) in (0..dim).filter(|&a| a != k).enumerate() {
        dz[a] = Complex64::new(delta[2 * slot], delta[2 * slot + 1]);
    }
    let norm = z.norm();
    let v = &z / Complex64::new(norm, 0.0);
    let dv = &dz / Complex64::new(norm, 0.0);
    let overlap = v.dotc(&dv);
    dv - v * overlap
}

/// Realified Fubini–Study metric at chart coordinates `coords` (any chart).
///
/// In complex form `G_ab = [(1 + |ζ|²) δ_ab - ζ_a ζ̄_b] / (1 + |ζ|²)²`, and
/// `g(u, v) = Re(u^H G v)`.
pub fn fubini_study_metric(coords: &[f64]) -> DMatrix<f64> {
    let n = coords.len() / 2;
    let zeta: Vec<Complex64> = (0..n)
        .map(|a| Complex64::new(coords[2 * a], coords[2 * a + 1]))
        .collect();
    let s = 1.0 + zeta.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            let delta = if a == b { s } else { 0.0 };
            let gab = (Complex64::new(delta, 0.0) - zeta[a] * zeta[b].conj()) / (s * s);
            g[(2 * a, 2 * b)] = gab.re;
            g[(2 * a, 2 * b + 1)] = -gab.im;
            g[(2 * a + 1, 2 * b)] = gab.im;
            g[(2 * a + 1, 2 * b + 1)] = gab.re;
        }
    }
    g
}

/// `CP^n` in a single affine chart, as a real `2n`-dimensional manifold.
pub fn chart_manifold(n: usize) -> ChartManifold {
    ChartManifold::new(2 * n, fubini_study_metric, |x| {
        x.iter().map(|c| c * c).sum::<f64>() < CHART_RADIUS * CHART_RADIUS
    })
}

/// Chart components in chart `k` of the generator of `[v] ↦ [exp(-iAt) v]`.
///
/// Its horizontal lift at `v` is `-i(A - ⟨A⟩)v`, so `g_FS(X, X) = (ΔA)²`.
pub fn fundamental_field(a: &HermitianOperator, k: usize) -> Result<VectorField> {
    let dim = a.dim();
    if k >= dim {
        return Err(Error::IndexOutOfRange { index: k, len: dim });
    }
    let m = a.matrix().clone() * Complex64::new(0.0, -1.0);
    Ok(VectorField::new(move |x| {
        let z = homogeneous(x, k);
        let dz = &m * &z;
        chart_pushforward(&z, &dz, k)
    }))
}

/// `g_FS(X, X)` for the Schrödinger field `X` of `h` at `p`, in `p`'s chart.
pub fn dispersion_via_metric(h: &HermitianOperator, p: &ProjectivePoint) -> Result<f64> {
    if h.dim() != p.representative().dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: p.representative().dim(),
        });
    }
    let chart = p.chart();
    let x = fundamental_field(h, chart.index)?.eval(chart.coords.as_slice());
    let g = fubini_study_metric(chart.coords.as_slice());
    Ok(x.dot(&(g * &x)))
}

/// Geodesic distance between rays, `arccos |⟨u|v⟩|` (numerically stable form).
pub fn fs_distance(u: &StateVector, v: &StateVector) -> f64 {
    let overlap = u.inner(v);
    let perp = (v.amplitudes() - u.amplitudes() * overlap).norm();
    perp.atan2(overlap.norm())
}

/// The totally geodesic 2-sphere of superpositions of eigenstates `e_j`, `e_i`
/// (`i > j`) of a Hamiltonian.
///
/// Parametrization: `cos(θ/2) e_j + sin(θ/2) e^{-iφ} e_i`, colatitude measured
/// from the lower level `[e_j]`. With this sign of `φ` the Schrödinger flow
/// advances `φ` at rate `+ω`, `ω = λ_i - λ_j`, and `(θ, φ)` is positively
/// oriented for `dσ = ¼ sinθ dθ∧dφ`.
#[derive(Debug, Clone)]
pub struct GeodesicSphere {
    pub i: usize,
    pub j: usize,
    e_i: DVector<Complex64>,
    e_j: DVector<Complex64>,
    omega: f64,
}

/// A positively oriented tangent frame of a sphere point in `CP^n` chart
/// coordinates, with the sphere's area density in that frame.
#[derive(Debug, Clone)]
pub struct SphereFrame {
    pub chart_index: usize,
    pub coords: DVector<f64>,
    pub u1: DVector<f64>,
    pub u2: DVector<f64>,
    /// `dσ(u1, u2)`.
    pub area: f64,
}

impl GeodesicSphere {
    pub fn new(h: &HermitianOperator, i: usize, j: usize) -> Result<Self> {
        if i <= j {
            return Err(Error::InvalidPair { i, j });
        }
        if i >= h.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: h.dim(),
            });
        }
        let ev = h.eigenvectors();
        Ok(Self {
            i,
            j,
            e_i: ev.column(i).into_owned(),
            e_j: ev.column(j).into_owned(),
            omega: h.eigenvalues()[i] - h.eigenvalues()[j],
        })
    }

    /// Angular velocity `λ_i - λ_j`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn radius(&self) -> f64 {
        0.5
    }

    pub fn area(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.radius().powi(2)
    }

    fn homogeneous_at(&self, theta: f64, phi: f64) -> DVector<Complex64> {
        &self.e_j * Complex64::new((theta / 2.0).cos(), 0.0)
            + &self.e_i * Complex64::from_polar((theta / 2.0).sin(), -phi)
    }

    pub fn point(&self, theta: f64, phi: f64) -> ProjectivePoint {
        ProjectivePoint::new(
            StateVector::normalized(self.homogeneous_at(theta, phi)).expect("unit combination"),
        )
    }

    /// Chart velocities `∂_θ` and `∂_φ` at `(θ, φ)` in chart `k`.
    pub fn coordinate_tangents(&self, theta: f64, phi: f64, k: usize) -> (DVector<f64>, DVector<f64>) {
        let z = self.homogeneous_at(theta, phi);
        let dtheta = &self.e_j * Complex64::new(-0.5 * (theta / 2.0).sin(), 0.0)
            + &self.e_i * Complex64::from_polar(0.5 * (theta / 2.0).cos(), -phi);
        let dphi = &self.e_i * (Complex64::from_polar((theta / 2.0).sin(), -phi) * Complex64::new(0.0, -1.0));
        (chart_pushforward(&z, &dtheta, k), chart_pushforward(&z, &dphi, k))
    }

    /// Induced metric in `(θ, φ)` pulled back from the chart metric.
    pub fn induced_metric(&self, theta: f64, phi: f64) -> DMatrix<f64> {
        let p = self.point(theta, phi);
        let chart = p.chart();
        let (dt, dp) = self.coordinate_tangents(theta, phi, chart.index);
        let g = fubini_study_metric(chart.coords.as_slice());
        let gt = &g * &dt;
        let gp = &g * &dp;
        DMatrix::from_row_slice(2, 2, &[dt.dot(&gt), dt.dot(&gp), dp.dot(&gt), dp.dot(&gp)])
    }

    /// Oriented frame valid at every point, poles included.
    ///
    /// Near `[e_j]` it uses `c = tan(θ/2) e^{iφ}` (point `e_j + c̄ e_i`), near
    /// `[e_i]` the inverse coordinate `1/c` (point `c̄ e_j + e_i`). Both are
    /// holomorphic in each other, hence equally oriented, and the area density
    /// is `1/(1 + |c|²)²` in each.
    pub fn frame(&self, theta: f64, phi: f64) -> SphereFrame {
        let (z, dre, c) = if theta <= std::f64::consts::FRAC_PI_2 {
            let c = Complex64::from_polar((theta / 2.0).tan(), phi);
            (&self.e_j + &self.e_i * c.conj(), self.e_i.clone(), c)
        } else {
            let c = Complex64::from_polar(1.0 / (theta / 2.0).tan(), -phi);
            (&self.e_j * c.conj() + &self.e_i, self.e_j.clone(), c)
        };
        let dim_ = &dre * Complex64::new(0.0, -1.0);
        let p = ProjectivePoint::new(StateVector::normalized(z.clone()).expect("nonzero"));
        let chart = p.chart();
        let k = chart.index;
        SphereFrame {
            chart_index: k,
            u1: chart_pushforward(&z, &dre, k),
            u2: chart_pushforward(&z, &dim_, k),
            coords: chart.coords,
            area: 1.0 / (1.0 + c.norm_sqr()).powi(2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn chart_roundtrip() {
        let p = ProjectivePoint::from_amplitudes(&[c(0.2, 0.1), c(-0.7, 0.3), c(0.1, -0.5)]).unwrap();
        assert_eq!(p.chart_index(), 1);
        let back = p.chart().to_point().unwrap();
        assert_eq!(back, p);
        assert!((back.chart().coords - p.chart().coords).amax() < 1e-12);
        let e0 = ProjectivePoint::from_amplitudes(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(e0.chart_in(1).is_err());
    }

    #[test]
    fn metric_at_origin_is_identity() {
        assert_eq!(fubini_study_metric(&[0.0, 0.0]), DMatrix::identity(2, 2));
        let g = fubini_study_metric(&[1.0, 0.0]);
        assert_abs_diff_eq!(g[(0, 0)], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(g[(1, 1)], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn fundamental_field_examples() {
        let id = HermitianOperator::identity(3).unwrap();
        let x = fundamental_field(&id, 0).unwrap().eval(&[0.3, 0.1, -0.2, 0.5]);
        assert!(x.amax() < 1e-15);

        let h = HermitianOperator::diagonal(&[0.0, 1.0]).unwrap();
        let f = fundamental_field(&h, 0).unwrap();
        let v = f.eval(&[1.0, 0.0]);
        // ζ(t) = e^{-it} ζ: velocity tangent to |ζ| = 1
        assert_abs_diff_eq!(v[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], -1.0, epsilon = 1e-15);
        let g = fubini_study_metric(&[1.0, 0.0]);
        assert_abs_diff_eq!(v.dot(&(g * &v)).sqrt(), 0.5, epsilon = 1e-15);
        assert!(f.eval(&[0.0, 0.0]).amax() < 1e-15);
    }

    #[test]
    fn dispersion_via_metric_examples() {
        let h = HermitianOperator::diagonal(&[0.0, 1.0]).unwrap();
        let plus = ProjectivePoint::from_amplitudes(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(dispersion_via_metric(&h, &plus).unwrap(), 0.25, epsilon = 1e-15);
        let e1 = ProjectivePoint::from_amplitudes(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(dispersion_via_metric(&h, &e1).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn distance_between_orthogonal_states() {
        let e0 = StateVector::basis(2, 0).unwrap();
        let e1 = StateVector::basis(2, 1).unwrap();
        assert_abs_diff_eq!(fs_distance(&e0, &e1), PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fs_distance(&e0, &e0.with_phase(0.4)), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn geodesic_sphere_poles_and_metric() {
        let h = HermitianOperator::diagonal(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(GeodesicSphere::new(&h, 1, 1), Err(Error::InvalidPair { .. })));
        let s = GeodesicSphere::new(&h, 2, 0).unwrap();
        assert_abs_diff_eq!(s.omega(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.area(), PI, epsilon = 1e-15);
        let north = s.point(0.0, 0.7);
        assert!(north.representative().same_ray(&StateVector::basis(3, 0).unwrap(), 1e-14));
        let south = s.point(PI, 0.7);
        assert!(south.representative().same_ray(&StateVector::basis(3, 2).unwrap(), 1e-14));
        let th = 1.2;
        let g = s.induced_metric(th, 0.4);
        assert_abs_diff_eq!(g[(0, 0)], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(g[(0, 1)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g[(1, 1)], 0.25 * th.sin().powi(2), epsilon = 1e-12);
    }
}
