//! Report schema written as `report.json`.

use qfluid::io::{Check, CriticalPointRecord};
use qfluid::spin::{Contour, TotalCirculation, VorticityDivisor};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Names of CSV files written next to the report.
    pub files: Vec<String>,
    pub details: Details,
}

impl Report {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Details {
    Verify {
        dim: usize,
        samples: usize,
    },
    Pressure {
        grid: usize,
        spheres: Vec<SphereSummary>,
        critical_points: Vec<CriticalPointRecord>,
    },
    CriticalPoints {
        eigenvalues: Vec<f64>,
        critical_points: Vec<CriticalPointRecord>,
    },
    Vorticity {
        grid: usize,
        spheres: Vec<SphereSummary>,
    },
    Trajectory {
        chart_index: usize,
        t: f64,
        steps: usize,
        initial_gradient_norm: f64,
        max_deviation: f64,
        max_evolution_error: f64,
        exited: bool,
    },
    Zeno {
        t: f64,
        n: usize,
        dispersion: f64,
        single_shot_deficit: f64,
        split_deficit: f64,
        predicted_single_shot: f64,
        predicted_split: f64,
        quadratic_regime: bool,
    },
    SpinCirculation {
        two_s: u32,
        circulations: Vec<CirculationRecord>,
        total: Option<TotalCirculation>,
    },
    SpinDivisor {
        divisor: VorticityDivisor,
        deficit_at_infinity: u32,
        total: TotalCirculation,
    },
}

/// Error summary for one geodesic sphere `S_ij`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereSummary {
    pub i: usize,
    pub j: usize,
    pub omega: f64,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_transport_residual: Option<f64>,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculationRecord {
    pub contour: Contour,
    pub value: f64,
    pub nearest: i64,
    /// `Σ μ_k · winding(γ, a_k)` over the divisor.
    pub enclosed: i64,
}

/// One row of a `theta,phi,numeric,analytic,abs_err` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub theta: f64,
    pub phi: f64,
    pub numeric: f64,
    pub analytic: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub deviation: f64,
    pub evolution_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoRow {
    pub n: usize,
    pub survival: f64,
    pub deficit: f64,
    pub predicted: f64,
}
