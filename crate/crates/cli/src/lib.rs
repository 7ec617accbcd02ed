//! Command-line front end for the `qfluid` library.
//!
//! Every subcommand reads one JSON input, runs its residual checks and
//! returns a [`Report`]. With `--output DIR` the report is written to
//! `DIR/report.json` together with any CSV grids.

pub mod report;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use num_complex::Complex64;
use qfluid::fluid::{zeno_decay, zeno_quadratic_regime, SchrodingerFluid};
use qfluid::io::{Check, ContourSet, CriticalPointRecord, HermitianInput, WaveFunctionInput};
use qfluid::linalg::{dispersion_squared, HermitianOperator, StateVector};
use qfluid::projective::{dispersion_via_metric, fs_distance, GeodesicSphere, ProjectivePoint};
use qfluid::spin::{
    circulation, total_spin_circulation, vorticity_divisor, SpinWaveFunction, VorticityDivisor, INTEGRALITY_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use report::{CirculationRecord, Details, GridRow, Report, SphereSummary, TrajectoryRow, ZenoRow};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

const TOL_ORTHOGONALITY: f64 = 1e-6;
const TOL_DIVERGENCE: f64 = 1e-6;
const TOL_DISPERSION: f64 = 1e-8;
const TOL_PRESSURE: f64 = 1e-10;
const TOL_CRITICAL_GRADIENT: f64 = 1e-8;
const TOL_VORTICITY_REL: f64 = 1e-4;
const TOL_TRANSPORT: f64 = 1e-8;
const TOL_EVOLUTION: f64 = 1e-8;
const TOL_GEODESIC: f64 = 1e-6;
const TOL_ZENO_REL: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "qfluid", version, about = "Schrödinger fluid and spin vortex checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON input file.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for `report.json` and CSV grids.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SphereArgs {
    /// Resolution of the `(θ, φ)` grid.
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    /// Restrict to the sphere `S_ij` (`i > j`).
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub pair: Option<Vec<usize>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Killing, Euler, orthogonality, divergence and dispersion residuals at random points.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Number of random sample points.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1e-5)]
        tol_euler: f64,
        #[arg(long, default_value_t = 1e-5)]
        tol_killing: f64,
    },
    /// Pressure landscape on geodesic spheres plus the critical points.
    Pressure {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sphere: SphereArgs,
    },
    /// Enumerate and certify the critical points of the pressure.
    CriticalPoints {
        #[command(flatten)]
        common: Common,
    },
    /// Vorticity profile and transport residual on geodesic spheres.
    Vorticity {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sphere: SphereArgs,
    },
    /// Compare the Schrödinger flow with the geodesic through the same point.
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Survival probability under repeated measurement.
    Zeno {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.1)]
        t: f64,
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
    },
    /// Circulation of the Madelung velocity around contours.
    SpinCirculation {
        #[command(flatten)]
        common: Common,
        /// Contour JSON; without it the circulation around all zeros is reported.
        #[arg(long)]
        contour: Option<PathBuf>,
    },
    /// Zeros of a spin wavefunction with multiplicities.
    SpinDivisor {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qfluid::Error> for CliError {
    fn from(e: qfluid::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A report together with the CSV files that belong to it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub csv: Vec<(String, String)>,
    /// Primary results for stdout.
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }

    /// Writes `report.json` and the CSV files into `dir`.
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let io = |e: std::io::Error| CliError::Input(format!("cannot write to {}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        let json = serde_json::to_string_pretty(&self.report).expect("report serializes");
        fs::write(dir.join("report.json"), json + "\n").map_err(io)?;
        for (name, body) in &self.csv {
            fs::write(dir.join(name), body).map_err(io)?;
        }
        Ok(())
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_hamiltonian(path: &Path) -> CliResult<(HermitianOperator, Option<StateVector>)> {
    let input = HermitianInput::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let h = input.operator().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let state = input.state().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((h, state))
}

fn load_wavefunction(path: &Path) -> CliResult<SpinWaveFunction> {
    WaveFunctionInput::parse(&read(path)?)
        .and_then(|w| w.wavefunction())
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn csv_text<T: Serialize>(rows: &[T]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("row serializes");
    }
    String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn require_grid(grid: usize) -> CliResult<()> {
    if grid < 2 {
        return Err(CliError::Input(format!("--grid must be at least 2, got {grid}")));
    }
    Ok(())
}

fn pairs(h: &HermitianOperator, pair: &Option<Vec<usize>>) -> CliResult<Vec<(usize, usize)>> {
    match pair.as_deref() {
        Some(&[i, j]) => {
            if i >= h.dim() || j >= h.dim() || i <= j {
                return Err(CliError::Input(format!(
                    "--pair {i} {j}: need {} > i > j >= 0",
                    h.dim()
                )));
            }
            Ok(vec![(i, j)])
        }
        Some(other) => Err(CliError::Input(format!("--pair takes two indices, got {other:?}"))),
        None => Ok((1..h.dim()).flat_map(|i| (0..i).map(move |j| (i, j))).collect()),
    }
}

fn nondegenerate(h: &HermitianOperator) -> CliResult<()> {
    h.check_nondegenerate().map_err(|e| {
        CliError::Input(format!(
            "critical point enumeration assumes a nondegenerate spectrum ({e})"
        ))
    })
}

/// Equal superposition of the two lowest eigenstates.
fn default_state(h: &HermitianOperator) -> CliResult<StateVector> {
    let ev = h.eigenvectors();
    let v = (ev.column(0) + ev.column(1)) * Complex64::new(FRAC_1_SQRT_2, 0.0);
    Ok(StateVector::normalized(v)?)
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> CliResult<ProjectivePoint> {
    let v = DVector::from_fn(dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    Ok(ProjectivePoint::new(StateVector::normalized(v)?))
}

fn max_abs(m: &nalgebra::DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn finish(command: &str, common: &Common, checks: Vec<Check>, details: Details) -> Report {
    Report {
        command: command.to_string(),
        input: common.input.display().to_string(),
        seed: common.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
        files: Vec::new(),
        details,
    }
}

fn outcome(mut report: Report, csv: Vec<(String, String)>, lines: Vec<String>) -> Outcome {
    report.files = csv.iter().map(|(name, _)| name.clone()).collect();
    Outcome { report, csv, lines }
}

pub fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Verify {
            common,
            samples,
            tol_euler,
            tol_killing,
        } => verify(common, *samples, *tol_euler, *tol_killing),
        Command::Pressure { common, sphere } => pressure(common, sphere),
        Command::CriticalPoints { common } => critical_points(common),
        Command::Vorticity { common, sphere } => vorticity(common, sphere),
        Command::Trajectory { common, t, steps } => trajectory(common, *t, *steps),
        Command::Zeno { common, t, n } => zeno(common, *t, *n),
        Command::SpinCirculation { common, contour } => spin_circulation(common, contour.as_deref()),
        Command::SpinDivisor { common } => spin_divisor(common),
    }
}

pub fn common(command: &Command) -> &Common {
    match command {
        Command::Verify { common, .. }
        | Command::Pressure { common, .. }
        | Command::CriticalPoints { common }
        | Command::Vorticity { common, .. }
        | Command::Trajectory { common, .. }
        | Command::Zeno { common, .. }
        | Command::SpinCirculation { common, .. }
        | Command::SpinDivisor { common } => common,
    }
}

fn verify(common: &Common, samples: usize, tol_euler: f64, tol_killing: f64) -> CliResult<Outcome> {
    if samples == 0 {
        return Err(CliError::Input("--samples must be positive".into()));
    }
    let (h, _) = load_hamiltonian(&common.input)?;
    let fluid = SchrodingerFluid::new(h.clone());
    let charts = (0..h.dim()).map(|k| fluid.chart(k)).collect::<qfluid::Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let (mut killing, mut euler, mut orth, mut div, mut disp) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..samples {
        let p = random_point(&mut rng, h.dim())?;
        let chart = p.chart();
        let x = chart.coords.as_slice();
        let (m, field, pressure) = &charts[chart.index];
        killing = killing.max(max_abs(&m.lie_derivative_metric(field, x)?));
        euler = euler.max(m.euler_residual(field, pressure, x)?.norm());
        let grad = m.gradient(pressure, x)?;
        orth = orth.max(m.inner(x, &grad, &field.eval(x))?.abs());
        div = div.max(m.divergence(field, x)?.abs());
        disp = disp.max((dispersion_via_metric(&h, &p)? - dispersion_squared(&h, p.representative())?).abs());
    }
    let checks = vec![
        Check::below("killing", killing, tol_killing),
        Check::below("euler", euler, tol_euler),
        Check::below("orthogonality", orth, TOL_ORTHOGONALITY),
        Check::below("divergence", div, TOL_DIVERGENCE),
        Check::below("dispersion", disp, TOL_DISPERSION),
    ];
    let lines = checks.iter().map(|c| format!("{} {:.3e}", c.name, c.value)).collect();
    let report = finish("verify", common, checks, Details::Verify { dim: h.dim(), samples });
    Ok(outcome(report, Vec::new(), lines))
}

fn critical_records(fluid: &SchrodingerFluid) -> CliResult<(Vec<CriticalPointRecord>, Vec<Check>)> {
    nondegenerate(fluid.hamiltonian())?;
    let points = fluid.critical_points()?;
    let lambda = fluid.hamiltonian().eigenvalues();
    let mut gradient = 0.0_f64;
    let mut pressure = 0.0_f64;
    for p in &points {
        gradient = gradient.max(p.gradient_norm);
        let expected = match p.indices[..] {
            [i, j] => (lambda[i] - lambda[j]).powi(2) / 8.0,
            _ => 0.0,
        };
        pressure = pressure.max((p.pressure - expected).abs());
    }
    let checks = vec![
        Check::below("critical_gradient", gradient, TOL_CRITICAL_GRADIENT),
        Check::below("critical_pressure", pressure, TOL_PRESSURE),
    ];
    Ok((points.iter().map(CriticalPointRecord::from).collect(), checks))
}

fn pressure(common: &Common, args: &SphereArgs) -> CliResult<Outcome> {
    require_grid(args.grid)?;
    let (h, _) = load_hamiltonian(&common.input)?;
    let pairs = pairs(&h, &args.pair)?;
    let fluid = SchrodingerFluid::new(h.clone());
    let (records, mut checks) = critical_records(&fluid)?;
    let lambda = h.eigenvalues();
    let mut csv = Vec::new();
    let mut spheres = Vec::new();
    let mut worst = 0.0_f64;
    for (i, j) in pairs {
        let sphere = GeodesicSphere::new(&h, i, j)?;
        let gap2 = (lambda[i] - lambda[j]).powi(2);
        let mut rows = Vec::with_capacity(args.grid * args.grid);
        for a in 0..args.grid {
            let theta = PI * a as f64 / (args.grid - 1) as f64;
            for b in 0..args.grid {
                let phi = 2.0 * PI * b as f64 / args.grid as f64;
                let numeric = fluid.pressure_via_metric(&sphere.point(theta, phi))?;
                let analytic = gap2 * theta.sin().powi(2) / 8.0;
                rows.push(GridRow {
                    theta,
                    phi,
                    numeric,
                    analytic,
                    abs_err: (numeric - analytic).abs(),
                });
            }
        }
        let max_abs_err = rows.iter().fold(0.0_f64, |m, r| m.max(r.abs_err));
        worst = worst.max(max_abs_err);
        let file = format!("pressure_{i}_{j}.csv");
        spheres.push(SphereSummary {
            i,
            j,
            omega: sphere.omega(),
            max_abs_err,
            max_rel_err: if gap2 > 0.0 { max_abs_err / (gap2 / 8.0) } else { max_abs_err },
            max_transport_residual: None,
            file: file.clone(),
        });
        csv.push((file, csv_text(&rows)));
    }
    checks.push(Check::below("pressure_landscape", worst, TOL_PRESSURE));
    let lines = records
        .iter()
        .map(|r| format!("{:?} {:?} p = {:.12}", r.kind, r.indices, r.pressure))
        .collect();
    let report = finish(
        "pressure",
        common,
        checks,
        Details::Pressure {
            grid: args.grid,
            spheres,
            critical_points: records,
        },
    );
    Ok(outcome(report, csv, lines))
}

fn critical_points(common: &Common) -> CliResult<Outcome> {
    let (h, _) = load_hamiltonian(&common.input)?;
    let fluid = SchrodingerFluid::new(h.clone());
    let (records, checks) = critical_records(&fluid)?;
    let lines = records
        .iter()
        .map(|r| format!("{:?} {:?} p = {:.12} |grad p| = {:.3e}", r.kind, r.indices, r.pressure, r.gradient_norm))
        .collect();
    let report = finish(
        "critical-points",
        common,
        checks,
        Details::CriticalPoints {
            eigenvalues: h.eigenvalues().to_vec(),
            critical_points: records,
        },
    );
    Ok(outcome(report, Vec::new(), lines))
}

fn vorticity(common: &Common, args: &SphereArgs) -> CliResult<Outcome> {
    require_grid(args.grid)?;
    let (h, _) = load_hamiltonian(&common.input)?;
    let pairs = pairs(&h, &args.pair)?;
    let fluid = SchrodingerFluid::new(h);
    let mut csv = Vec::new();
    let mut spheres = Vec::new();
    let (mut rel, mut transport) = (0.0_f64, 0.0_f64);
    for (i, j) in pairs {
        let profile = fluid.vorticity_on_sphere(i, j, args.grid, args.grid)?;
        let mut max_transport = 0.0_f64;
        for s in &profile.samples {
            max_transport = max_transport.max(fluid.vorticity_transport_residual(i, j, s.theta, s.phi)?);
        }
        rel = rel.max(profile.max_rel_err);
        transport = transport.max(max_transport);
        let rows: Vec<GridRow> = profile
            .samples
            .iter()
            .map(|s| GridRow {
                theta: s.theta,
                phi: s.phi,
                numeric: s.numeric,
                analytic: s.analytic,
                abs_err: s.abs_err,
            })
            .collect();
        let file = format!("vorticity_{i}_{j}.csv");
        spheres.push(SphereSummary {
            i,
            j,
            omega: profile.omega,
            max_abs_err: profile.max_abs_err,
            max_rel_err: profile.max_rel_err,
            max_transport_residual: Some(max_transport),
            file: file.clone(),
        });
        csv.push((file, csv_text(&rows)));
    }
    let checks = vec![
        Check::below("vorticity_rel_err", rel, TOL_VORTICITY_REL),
        Check::below("vorticity_transport", transport, TOL_TRANSPORT),
    ];
    let lines = spheres
        .iter()
        .map(|s| format!("S_{}{}: omega = {:.6}, max rel err = {:.3e}", s.i, s.j, s.omega, s.max_rel_err))
        .collect();
    let report = finish("vorticity", common, checks, Details::Vorticity { grid: args.grid, spheres });
    Ok(outcome(report, csv, lines))
}

fn trajectory(common: &Common, t: f64, steps: usize) -> CliResult<Outcome> {
    if !(t.is_finite() && t > 0.0) || steps == 0 {
        return Err(CliError::Input(format!("need --t > 0 and --steps > 0, got {t} and {steps}")));
    }
    let (h, state) = load_hamiltonian(&common.input)?;
    let state = match state {
        Some(s) => s,
        None => default_state(&h)?,
    };
    let fluid = SchrodingerFluid::new(h);
    let p0 = ProjectivePoint::new(state);
    let initial_gradient_norm = fluid.pressure_gradient(&p0)?.norm();
    let report = fluid.trajectory(&p0, t, steps)?;
    let start = &report.flow[0];
    let rows: Vec<TrajectoryRow> = report
        .times
        .iter()
        .zip(report.flow.iter().zip(&report.geodesic))
        .map(|(&time, (a, b))| {
            let exact = qfluid::linalg::evolve(fluid.hamiltonian(), start, time)?;
            Ok(TrajectoryRow {
                t: time,
                deviation: fs_distance(a, b),
                evolution_error: fs_distance(a, &exact),
            })
        })
        .collect::<qfluid::Result<_>>()?;
    let mut checks = vec![
        Check::below("evolution_error", report.max_evolution_error, TOL_EVOLUTION),
        Check::below("chart_exit", f64::from(u8::from(report.exited)), 0.5),
    ];
    if initial_gradient_norm < TOL_CRITICAL_GRADIENT {
        checks.push(Check::below("geodesic_deviation", report.max_deviation, TOL_GEODESIC));
    }
    let lines = vec![
        format!("|grad p| at start = {initial_gradient_norm:.3e}"),
        format!("max flow/geodesic distance = {:.3e}", report.max_deviation),
    ];
    let details = Details::Trajectory {
        chart_index: report.chart_index,
        t,
        steps,
        initial_gradient_norm,
        max_deviation: report.max_deviation,
        max_evolution_error: report.max_evolution_error,
        exited: report.exited,
    };
    let report = finish("trajectory", common, checks, details);
    Ok(outcome(report, vec![("trajectory.csv".into(), csv_text(&rows))], lines))
}

fn zeno(common: &Common, t: f64, n: usize) -> CliResult<Outcome> {
    if !t.is_finite() || t < 0.0 || n == 0 {
        return Err(CliError::Input(format!("need --t >= 0 and --N >= 1, got {t} and {n}")));
    }
    let (h, state) = load_hamiltonian(&common.input)?;
    let v = match state {
        Some(s) => s,
        None => default_state(&h)?,
    };
    let dispersion = dispersion_squared(&h, &v)?;
    let rows: Vec<ZenoRow> = (1..=n)
        .map(|k| {
            let survival = zeno_decay(&h, &v, t, k)?;
            Ok(ZenoRow {
                n: k,
                survival,
                deficit: 1.0 - survival,
                predicted: dispersion * t * t / k as f64,
            })
        })
        .collect::<qfluid::Result<_>>()?;
    let (first, last) = (rows[0], rows[n - 1]);
    let quadratic_regime = zeno_quadratic_regime(&h, &v, t)?;
    let mut checks = Vec::new();
    if quadratic_regime && dispersion > 0.0 && t > 0.0 {
        let rel = |row: ZenoRow| (row.deficit - row.predicted).abs() / row.predicted;
        checks.push(Check::below("zeno_single_shot", rel(first), TOL_ZENO_REL));
        checks.push(Check::below("zeno_split", rel(last), TOL_ZENO_REL));
    }
    let lines = vec![
        format!("deficit N=1: {:.6e} (predicted {:.6e})", first.deficit, first.predicted),
        format!("deficit N={n}: {:.6e} (predicted {:.6e})", last.deficit, last.predicted),
    ];
    let details = Details::Zeno {
        t,
        n,
        dispersion,
        single_shot_deficit: first.deficit,
        split_deficit: last.deficit,
        predicted_single_shot: first.predicted,
        predicted_split: last.predicted,
        quadratic_regime,
    };
    let report = finish("zeno", common, checks, details);
    Ok(outcome(report, vec![("zeno.csv".into(), csv_text(&rows))], lines))
}

fn enclosed(divisor: &VorticityDivisor, contour: &qfluid::spin::Contour) -> i64 {
    divisor
        .entries
        .iter()
        .map(|e| i64::from(e.multiplicity) * i64::from(contour.winding_number(e.root)))
        .sum()
}

fn spin_circulation(common: &Common, contour_path: Option<&Path>) -> CliResult<Outcome> {
    let chi = load_wavefunction(&common.input)?;
    let divisor = vorticity_divisor(&chi)?;
    let mut checks = Vec::new();
    let mut circulations = Vec::new();
    let mut lines = Vec::new();
    let mut total = None;
    match contour_path {
        Some(path) => {
            let contours = ContourSet::parse(&read(path)?)
                .and_then(|set| set.contours())
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            for (k, contour) in contours.into_iter().enumerate() {
                let value = circulation(&chi, &contour)?;
                let expected = enclosed(&divisor, &contour);
                checks.push(Check::below(
                    format!("integrality[{k}]"),
                    (value - value.round()).abs(),
                    INTEGRALITY_TOL,
                ));
                checks.push(Check::below(
                    format!("enclosed_multiplicity[{k}]"),
                    (value - expected as f64).abs(),
                    INTEGRALITY_TOL,
                ));
                lines.push(format!("{value:.9}"));
                circulations.push(CirculationRecord {
                    contour,
                    value,
                    nearest: value.round() as i64,
                    enclosed: expected,
                });
            }
        }
        None => {
            let t = total_spin_circulation(&chi)?;
            checks.push(Check::below("integrality", (t.value - t.value.round()).abs(), INTEGRALITY_TOL));
            checks.push(Check::below(
                "divisor_degree",
                (t.value - f64::from(divisor.degree())).abs(),
                INTEGRALITY_TOL,
            ));
            lines.push(format!("{:.9}", t.value));
            total = Some(t);
        }
    }
    let details = Details::SpinCirculation {
        two_s: chi.two_s(),
        circulations,
        total,
    };
    let report = finish("spin-circulation", common, checks, details);
    Ok(outcome(report, Vec::new(), lines))
}

fn spin_divisor(common: &Common) -> CliResult<Outcome> {
    let chi = load_wavefunction(&common.input)?;
    let divisor = vorticity_divisor(&chi)?;
    let total = total_spin_circulation(&chi)?;
    let checks = vec![Check::below(
        "divisor_degree",
        (total.value - f64::from(divisor.degree())).abs(),
        INTEGRALITY_TOL,
    )];
    let mut lines: Vec<String> = divisor
        .entries
        .iter()
        .map(|e| format!("{:.12} {:.12} {}", e.root.re, e.root.im, e.multiplicity))
        .collect();
    if divisor.deficit_at_infinity() > 0 {
        lines.push(format!("infinity {}", divisor.deficit_at_infinity()));
    }
    let details = Details::SpinDivisor {
        deficit_at_infinity: divisor.deficit_at_infinity(),
        divisor,
        total,
    };
    let report = finish("spin-divisor", common, checks, details);
    Ok(outcome(report, Vec::new(), lines))
}
