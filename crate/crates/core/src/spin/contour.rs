use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{poly, SpinWaveFunction};
use crate::error::{Error, Result};

/// Default trapezoid nodes on a circle.
pub const DEFAULT_NODES: usize = 256;
/// Default Gauss–Legendre nodes per polygon panel.
pub const DEFAULT_EDGE_NODES: usize = 32;
/// Minimum allowed distance between a contour and a zero of `χ`.
pub const EXCLUSION_TOL: f64 = 1e-6;
/// Allowed distance of a circulation from the nearest integer.
pub const INTEGRALITY_TOL: f64 = 1e-8;

const MAX_PANEL_DEPTH: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourShape {
    Circle { center: Complex64, radius: f64 },
    /// Vertices in traversal order; the loop closes back to the first vertex.
    Polygon { vertices: Vec<Complex64> },
}

/// Closed loop in the `ζ` plane with an orientation and a quadrature size.
///
/// For a circle `nodes` is the total node count. For a polygon it is the
/// Gauss–Legendre order per panel; edges are split into panels near zeros of `χ`.
/// A polygon is traversed in vertex order when `ccw` is set and backwards otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub shape: ContourShape,
    pub ccw: bool,
    pub nodes: usize,
}

impl Contour {
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::circle_with_nodes(center, radius, DEFAULT_NODES)
    }

    pub fn circle_with_nodes(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::InvalidContour(format!(
                "circle needs finite center and positive radius, got radius {radius}"
            )));
        }
        if nodes < 3 {
            return Err(Error::InvalidContour(format!("{nodes} nodes is too few")));
        }
        Ok(Self {
            shape: ContourShape::Circle { center, radius },
            ccw: true,
            nodes,
        })
    }

    pub fn polygon(vertices: Vec<Complex64>) -> Result<Self> {
        Self::polygon_with_nodes(vertices, DEFAULT_EDGE_NODES)
    }

    pub fn polygon_with_nodes(vertices: Vec<Complex64>, nodes: usize) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidContour(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if nodes == 0 {
            return Err(Error::InvalidContour("zero nodes per edge".into()));
        }
        for (k, v) in vertices.iter().enumerate() {
            let next = vertices[(k + 1) % vertices.len()];
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidContour(format!("vertex {k} is not finite")));
            }
            if (next - v).norm() == 0.0 {
                return Err(Error::InvalidContour(format!("edge {k} has zero length")));
            }
        }
        Ok(Self {
            shape: ContourShape::Polygon { vertices },
            ccw: true,
            nodes,
        })
    }

    pub fn reversed(mut self) -> Self {
        self.ccw = !self.ccw;
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    /// `γ(τ)` for `τ ∈ [0, 1]`, with `γ(0) = γ(1)`.
    pub fn point(&self, tau: f64) -> Complex64 {
        let tau = if self.ccw { tau } else { 1.0 - tau };
        match &self.shape {
            ContourShape::Circle { center, radius } => {
                center + Complex64::from_polar(*radius, 2.0 * PI * tau)
            }
            ContourShape::Polygon { vertices } => {
                let n = vertices.len();
                let x = tau.rem_euclid(1.0) * n as f64;
                let k = (x.floor() as usize).min(n - 1);
                let frac = x - k as f64;
                vertices[k] + (vertices[(k + 1) % n] - vertices[k]) * frac
            }
        }
    }

    /// Euclidean distance from `z` to the curve.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        match &self.shape {
            ContourShape::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            ContourShape::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|k| segment_distance(vertices[k], vertices[(k + 1) % n], z))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Winding number of the contour around `z` (exact for circles and polygons).
    pub fn winding_number(&self, z: Complex64) -> i32 {
        let w = match &self.shape {
            ContourShape::Circle { center, radius } => i32::from((z - center).norm() < *radius),
            ContourShape::Polygon { vertices } => {
                let n = vertices.len();
                let total: f64 = (0..n)
                    .map(|k| ((vertices[(k + 1) % n] - z) / (vertices[k] - z)).arg())
                    .sum();
                (total / (2.0 * PI)).round() as i32
            }
        };
        if self.ccw {
            w
        } else {
            -w
        }
    }
}

fn segment_distance(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let d = b - a;
    let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (a + d * t - z).norm()
}

/// Bisects `[a, b]` until every panel is no longer than twice its distance to the nearest zero.
fn split_panel(a: Complex64, b: Complex64, roots: &[Complex64], depth: u32, out: &mut Vec<(Complex64, Complex64)>) {
    let clearance = roots
        .iter()
        .map(|z| segment_distance(a, b, *z))
        .fold(f64::INFINITY, f64::min);
    if depth >= MAX_PANEL_DEPTH || 2.0 * clearance >= (b - a).norm() {
        out.push((a, b));
        return;
    }
    let mid = (a + b) / 2.0;
    split_panel(a, mid, roots, depth + 1, out);
    split_panel(mid, b, roots, depth + 1, out);
}

fn log_derivative(chi: &SpinWaveFunction, z: Complex64) -> Complex64 {
    let (p, dp) = poly::eval_with_derivative(chi.coeffs(), z);
    dp / p
}

fn ensure_clear(chi: &SpinWaveFunction, contour: &Contour) -> Result<()> {
    for root in chi.roots() {
        let distance = contour.distance_to(*root);
        if distance <= EXCLUSION_TOL {
            return Err(Error::ContourTooClose {
                root: format!("{root}"),
                distance,
            });
        }
    }
    Ok(())
}

/// `(1/2π) ∮_γ v^χ = (1/2π) Im ∮_γ χ'/χ dζ`.
pub fn circulation(chi: &SpinWaveFunction, contour: &Contour) -> Result<f64> {
    ensure_clear(chi, contour)?;
    if chi.effective_degree() == 0 {
        return Ok(0.0);
    }
    let value = match &contour.shape {
        ContourShape::Circle { center, radius } => {
            let n = contour.nodes;
            let terms = (0..n).map(|m| {
                let e = Complex64::from_polar(*radius, 2.0 * PI * m as f64 / n as f64);
                (log_derivative(chi, center + e) * e).re
            });
            poly::compensated_sum(terms) / n as f64
        }
        ContourShape::Polygon { vertices } => {
            let nodes = NonZeroUsize::new(contour.nodes)
                .ok_or_else(|| Error::InvalidContour("zero nodes per edge".into()))?;
            let rule = GaussLegendre::new(nodes);
            let n = vertices.len();
            let mut panels = Vec::new();
            for k in 0..n {
                split_panel(vertices[k], vertices[(k + 1) % n], chi.roots(), 0, &mut panels);
            }
            let mut terms = Vec::with_capacity(panels.len() * contour.nodes);
            for (a, b) in panels {
                let half = (b - a) / 2.0;
                let mid = (a + b) / 2.0;
                for &(x, w) in rule.iter() {
                    terms.push((log_derivative(chi, mid + half * x) * half * w).im);
                }
            }
            poly::compensated_sum(terms) / (2.0 * PI)
        }
    };
    Ok(if contour.ccw { value } else { -value })
}

/// Circulation around a circle enclosing every finite zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalCirculation {
    pub value: f64,
    pub radius: f64,
    pub two_s: u32,
    /// `2s` minus the rounded circulation: vorticity carried at `∞`.
    pub deficit_at_infinity: u32,
}

pub fn total_spin_circulation(chi: &SpinWaveFunction) -> Result<TotalCirculation> {
    let max_root = chi.roots().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radius = 2.0 * max_root + 1.0;
    let contour = Contour::circle(Complex64::new(0.0, 0.0), radius)?;
    let value = circulation(chi, &contour)?;
    let enclosed = value.round().max(0.0) as u32;
    let deficit = chi.two_s().saturating_sub(enclosed);
    if deficit > 0 {
        log::warn!(
            "degree {enclosed} < 2s = {}: {deficit} units of vorticity sit at infinity",
            chi.two_s()
        );
    }
    Ok(TotalCirculation {
        value,
        radius,
        two_s: chi.two_s(),
        deficit_at_infinity: deficit,
    })
}

/// Integrality of a single circulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationCheck {
    pub value: f64,
    pub nearest: i64,
    pub deviation: f64,
    pub passed: bool,
}

pub fn bohr_sommerfeld_check(
    chi: &SpinWaveFunction,
    contours: &[Contour],
) -> Result<Vec<QuantizationCheck>> {
    contours
        .iter()
        .map(|contour| {
            let value = circulation(chi, contour)?;
            let nearest = value.round();
            let deviation = (value - nearest).abs();
            Ok(QuantizationCheck {
                value,
                nearest: nearest as i64,
                deviation,
                passed: deviation <= INTEGRALITY_TOL,
            })
        })
        .collect()
}
