//! JSON schemas for Hamiltonians, spin wavefunctions and contours, plus the
//! record types shared by reports.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluid::{CriticalKind, CriticalPoint};
use crate::linalg::{HermitianOperator, StateVector};
use crate::spin::{Contour, SpinWaveFunction, DEFAULT_EDGE_NODES, DEFAULT_NODES};

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::InvalidInput(format!(
            "{what}: line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn check_finite(value: f64, name: impl FnOnce() -> String) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{} is not finite", name())))
    }
}

/// `{"dim": n+1, "re": [[…]], "im": [[…]], "state": {"re": […], "im": […]}}`.
///
/// `im` defaults to zero; `state` is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermitianInput {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateInput {
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl HermitianInput {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text, "hermitian matrix")
    }

    pub fn from_operator(h: &HermitianOperator) -> Self {
        let m = h.matrix();
        let n = m.nrows();
        Self {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect(),
            im: Some((0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect()),
            state: None,
        }
    }

    fn check_shape(&self, rows: &[Vec<f64>], name: &str) -> Result<()> {
        if rows.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "`{name}` has {} rows, expected dim = {}",
                rows.len(),
                self.dim
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::InvalidInput(format!(
                    "`{name}[{i}]` has {} entries, expected {}",
                    row.len(),
                    self.dim
                )));
            }
            for (j, v) in row.iter().enumerate() {
                check_finite(*v, || format!("`{name}[{i}][{j}]`"))?;
            }
        }
        Ok(())
    }

    /// Validated matrix; the error names the first offending entry.
    pub fn matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.dim < 2 {
            return Err(Error::InvalidInput(format!("dim = {} but at least 2 is required", self.dim)));
        }
        self.check_shape(&self.re, "re")?;
        if let Some(im) = &self.im {
            self.check_shape(im, "im")?;
        }
        let n = self.dim;
        let m = DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(
                self.re[i][j],
                self.im.as_ref().map_or(0.0, |im| im[i][j]),
            )
        });
        let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
        for i in 0..n {
            for j in i..n {
                let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
                if dev > crate::linalg::HERMITICITY_TOL * scale {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i}, {j}) = {} is not the conjugate of entry ({j}, {i}) = {} (deviation {dev:.3e})",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn operator(&self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.matrix()?)
    }

    /// The optional state, normalized.
    pub fn state(&self) -> Result<Option<StateVector>> {
        let Some(s) = &self.state else {
            return Ok(None);
        };
        if s.re.len() != self.dim || s.im.as_ref().is_some_and(|im| im.len() != self.dim) {
            return Err(Error::InvalidInput(format!(
                "`state` must have {} components",
                self.dim
            )));
        }
        let amps = DVector::from_fn(self.dim, |i, _| {
            Complex64::new(s.re[i], s.im.as_ref().map_or(0.0, |im| im[i]))
        });
        for (i, a) in amps.iter().enumerate() {
            check_finite(a.re + a.im, || format!("`state[{i}]`"))?;
        }
        StateVector::normalized(amps).map(Some)
    }
}

/// Coefficient form `{"two_s", "coeffs_re", "coeffs_im"}` or factored form
/// `{"roots": [[re, im, mult], …], "two_s"}` where `two_s` defaults to the degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WaveFunctionInput {
    Coefficients {
        two_s: u32,
        coeffs_re: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coeffs_im: Option<Vec<f64>>,
    },
    Roots {
        roots: Vec<[f64; 3]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        two_s: Option<u32>,
    },
}

impl WaveFunctionInput {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text, "wavefunction")
    }

    pub fn from_wavefunction(chi: &SpinWaveFunction) -> Self {
        WaveFunctionInput::Coefficients {
            two_s: chi.two_s(),
            coeffs_re: chi.coeffs().iter().map(|c| c.re).collect(),
            coeffs_im: Some(chi.coeffs().iter().map(|c| c.im).collect()),
        }
    }

    pub fn wavefunction(&self) -> Result<SpinWaveFunction> {
        match self {
            WaveFunctionInput::Coefficients {
                two_s,
                coeffs_re,
                coeffs_im,
            } => {
                if let Some(im) = coeffs_im {
                    if im.len() != coeffs_re.len() {
                        return Err(Error::InvalidInput(format!(
                            "`coeffs_im` has {} entries but `coeffs_re` has {}",
                            im.len(),
                            coeffs_re.len()
                        )));
                    }
                }
                for (k, v) in coeffs_re.iter().enumerate() {
                    check_finite(*v, || format!("`coeffs_re[{k}]`"))?;
                }
                let coeffs = coeffs_re
                    .iter()
                    .enumerate()
                    .map(|(k, re)| Complex64::new(*re, coeffs_im.as_ref().map_or(0.0, |im| im[k])))
                    .collect();
                SpinWaveFunction::new(*two_s, coeffs)
            }
            WaveFunctionInput::Roots { roots, two_s } => {
                let mut factored = Vec::with_capacity(roots.len());
                for (k, &[re, im, mult]) in roots.iter().enumerate() {
                    check_finite(re + im, || format!("`roots[{k}]`"))?;
                    if !(mult >= 1.0 && mult.fract() == 0.0) {
                        return Err(Error::InvalidInput(format!(
                            "`roots[{k}]` multiplicity {mult} is not a positive integer"
                        )));
                    }
                    factored.push((Complex64::new(re, im), mult as u32));
                }
                let degree = factored.iter().map(|&(_, m)| m).sum();
                SpinWaveFunction::from_roots(two_s.unwrap_or(degree), &factored)
            }
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleInput {
    pub center: [f64; 2],
    pub radius: f64,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_true")]
    pub ccw: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonInput {
    pub vertices: Vec<[f64; 2]>,
    #[serde(default = "default_edge_nodes")]
    pub nodes: usize,
    #[serde(default = "default_true")]
    pub ccw: bool,
}

fn default_nodes() -> usize {
    DEFAULT_NODES
}

fn default_edge_nodes() -> usize {
    DEFAULT_EDGE_NODES
}

/// `{"circle": {"center": [re, im], "radius": r, "nodes": 256}}` or
/// `{"polygon": {"vertices": [[re, im], …], "nodes": 32}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourInput {
    Circle(CircleInput),
    Polygon(PolygonInput),
}

/// A single contour or a list of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContourSet {
    One(ContourInput),
    Many(Vec<ContourInput>),
}

impl ContourInput {
    pub fn contour(&self) -> Result<Contour> {
        let contour = match self {
            ContourInput::Circle(c) => Contour::circle_with_nodes(
                Complex64::new(c.center[0], c.center[1]),
                c.radius,
                c.nodes,
            )?,
            ContourInput::Polygon(p) => Contour::polygon_with_nodes(
                p.vertices.iter().map(|v| Complex64::new(v[0], v[1])).collect(),
                p.nodes,
            )?,
        };
        let ccw = match self {
            ContourInput::Circle(c) => c.ccw,
            ContourInput::Polygon(p) => p.ccw,
        };
        Ok(if ccw { contour } else { contour.reversed() })
    }
}

impl ContourSet {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text, "contour")
    }

    pub fn contours(&self) -> Result<Vec<Contour>> {
        match self {
            ContourSet::One(c) => Ok(vec![c.contour()?]),
            ContourSet::Many(cs) => cs.iter().map(ContourInput::contour).collect(),
        }
    }
}

/// One residual compared against its threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `true` when the residual must stay below the threshold, `false` when it must exceed it.
    pub below: bool,
    pub passed: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            below: true,
            passed: value < threshold,
        }
    }

    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            below: false,
            passed: value > threshold,
        }
    }
}

/// Serializable view of a critical point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointRecord {
    pub kind: CriticalKind,
    pub indices: Vec<usize>,
    pub pressure: f64,
    pub gradient_norm: f64,
    pub phase_orbit: bool,
    pub state_re: Vec<f64>,
    pub state_im: Vec<f64>,
}

impl From<&CriticalPoint> for CriticalPointRecord {
    fn from(c: &CriticalPoint) -> Self {
        let amps = c.representative.representative().amplitudes();
        Self {
            kind: c.kind,
            indices: c.indices.clone(),
            pressure: c.pressure,
            gradient_norm: c.gradient_norm,
            phase_orbit: c.phase_orbit,
            state_re: amps.iter().map(|a| a.re).collect(),
            state_im: amps.iter().map(|a| a.im).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_roundtrip() {
        let text = r#"{"dim": 2, "re": [[0, 1], [1, 0]], "im": [[0, -0.5], [0.5, 0]]}"#;
        let input = HermitianInput::parse(text).unwrap();
        let h = input.operator().unwrap();
        assert_eq!(HermitianInput::from_operator(&h).operator().unwrap().matrix(), h.matrix());
    }

    #[test]
    fn hermitian_errors_name_the_entry() {
        let bad = r#"{"dim": 2, "re": [[0, 1], [2, 0]]}"#;
        let err = HermitianInput::parse(bad).unwrap().matrix().unwrap_err().to_string();
        assert!(err.contains("(0, 1)"), "{err}");
        let short = r#"{"dim": 2, "re": [[0, 1], [1]]}"#;
        let err = HermitianInput::parse(short).unwrap().matrix().unwrap_err().to_string();
        assert!(err.contains("re[1]"), "{err}");
        let malformed = "{\"dim\": 2,\n \"re\": [[0, 1], [1, 0]],\n \"im\": oops}";
        let err = HermitianInput::parse(malformed).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn wavefunction_forms() {
        let coeffs = WaveFunctionInput::parse(r#"{"two_s": 3, "coeffs_re": [-1, 0, 0, 1], "coeffs_im": [0, 0, 0, 0]}"#)
            .unwrap()
            .wavefunction()
            .unwrap();
        assert_eq!(coeffs.two_s(), 3);
        let roots = WaveFunctionInput::parse(r#"{"roots": [[1, 0, 2], [-1, 0, 1]]}"#)
            .unwrap()
            .wavefunction()
            .unwrap();
        assert_eq!(roots.two_s(), 3);
        assert_eq!(roots.coeffs()[0], Complex64::new(1.0, 0.0));
        assert!(WaveFunctionInput::parse(r#"{"roots": [[1, 0, 1.5]]}"#)
            .unwrap()
            .wavefunction()
            .is_err());
    }

    #[test]
    fn contour_forms() {
        let one = ContourSet::parse(r#"{"circle": {"center": [0, 0], "radius": 2, "nodes": 256}}"#).unwrap();
        assert_eq!(one.contours().unwrap().len(), 1);
        let many = ContourSet::parse(
            r#"[{"circle": {"center": [1, 0], "radius": 0.5}}, {"polygon": {"vertices": [[0,0],[1,0],[0,1]]}}]"#,
        )
        .unwrap();
        let cs = many.contours().unwrap();
        assert_eq!(cs[0].nodes, DEFAULT_NODES);
        assert_eq!(cs[1].nodes, DEFAULT_EDGE_NODES);
    }
}
