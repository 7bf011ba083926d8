//! Experiment drivers: single runs, convergence studies, the CFL table, the
//! Burgers shock demo with its Roe reference, and CSV output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::method_a::MethodA;
use crate::method_b::MethodB;
use crate::scheme::Flux;
use crate::stability::{cfl_max, Method};
use crate::state::{Mesh, State};

/// Smooth advection profile `0.8 + exp(-(x - 1/2)^2 / 0.05^2)` on `[0, 1]`.
pub fn gaussian_pulse(x: f64) -> f64 {
    0.8 + (-(x - 0.5).powi(2) / 0.05f64.powi(2)).exp()
}

/// Same Gaussian with a different background level.
pub fn offset_gaussian(offset: f64) -> impl Fn(f64) -> f64 + Copy {
    move |x| offset + (-(x - 0.5).powi(2) / 0.05f64.powi(2)).exp()
}

pub const CONVERGENCE_TIME: f64 = 0.1;
pub const CONVERGENCE_CFL_A: f64 = 1e-4;
pub const CONVERGENCE_CFL_B: f64 = 0.5;
pub const DEFAULT_GRIDS: [usize; 5] = [20, 40, 80, 160, 320];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub degree: usize,
    pub method: Method,
    pub flux: Flux,
    pub cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub limiter: bool,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            degree: 2,
            method: Method::B,
            flux: Flux::Advection { c: 1.0 },
            cells: 50,
            cfl: CONVERGENCE_CFL_B,
            t_end: CONVERGENCE_TIME,
            limiter: false,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.degree < 2 {
            return Err(Error::Config(format!(
                "degree must be >= 2, got {}",
                self.degree
            )));
        }
        if self.cells < 3 {
            return Err(Error::Config(format!(
                "need at least 3 cells, got {}",
                self.cells
            )));
        }
        if !(self.cfl > 0.0) {
            return Err(Error::Config(format!(
                "CFL number must be positive, got {}",
                self.cfl
            )));
        }
        if !(self.t_end >= 0.0) {
            return Err(Error::Config(format!(
                "final time must be >= 0, got {}",
                self.t_end
            )));
        }
        Ok(())
    }

    pub fn mesh(&self) -> Result<Mesh> {
        Mesh::new(0.0, 1.0, self.cells)
    }
}

/// Either time discretization behind one interface.
#[derive(Debug, Clone)]
pub enum Solver {
    A(MethodA),
    B(MethodB),
}

impl Solver {
    pub fn new(degree: usize, method: Method, flux: Flux, limiter: bool) -> Result<Self> {
        let basis = BasisSet::new(degree)?;
        Ok(match method {
            Method::A => Solver::A(MethodA::new(basis, flux)?),
            Method::B => Solver::B(MethodB::new(basis, flux)?.with_limiter(limiter)),
        })
    }

    pub fn basis(&self) -> &BasisSet {
        match self {
            Solver::A(a) => a.basis(),
            Solver::B(b) => b.basis(),
        }
    }

    pub fn step(&self, state: &State, mesh: &Mesh, dt: f64) -> Result<State> {
        match self {
            Solver::A(a) => a.step(state, mesh, dt),
            Solver::B(b) => b.step(state, mesh, dt),
        }
    }

    pub fn time_step(&self, state: &State, mesh: &Mesh, cfl: f64) -> f64 {
        match self {
            Solver::A(a) => a.time_step(state, mesh, cfl),
            Solver::B(b) => b.time_step(state, mesh, cfl),
        }
    }

    pub fn run(&self, state: State, mesh: &Mesh, cfl: f64, t_end: f64) -> Result<State> {
        match self {
            Solver::A(a) => a.run(state, mesh, cfl, t_end),
            Solver::B(b) => b.run(state, mesh, cfl, t_end),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub mesh: Mesh,
    pub initial: State,
    pub state: State,
    pub csv: String,
}

/// Projects `q0`, advances to `t_end`, renders the CSV and writes it if an
/// output path is configured.
pub fn run_with(config: &RunConfig, q0: impl Fn(f64) -> f64) -> Result<RunOutput> {
    config.validate()?;
    let mesh = config.mesh()?;
    let solver = Solver::new(config.degree, config.method, config.flux, config.limiter)?;
    let initial = State::project(q0, &mesh, solver.basis());
    let state = solver.run(initial.clone(), &mesh, config.cfl, config.t_end)?;
    let mut meta = BTreeMap::new();
    meta.insert("N".to_string(), config.degree.to_string());
    meta.insert("method".to_string(), config.method.name().to_string());
    meta.insert("flux".to_string(), config.flux.name().to_string());
    meta.insert("cells".to_string(), config.cells.to_string());
    meta.insert("cfl".to_string(), config.cfl.to_string());
    meta.insert("t".to_string(), format!("{:.16e}", state.t));
    meta.insert(
        "mass".to_string(),
        format!("{:.16e}", state.total_mass(&mesh)),
    );
    meta.insert(
        "initial_mass".to_string(),
        format!("{:.16e}", initial.total_mass(&mesh)),
    );
    let csv = state_csv(&state, &mesh, solver.basis(), &meta);
    if let Some(path) = &config.out {
        std::fs::write(path, &csv)?;
    }
    Ok(RunOutput {
        mesh,
        initial,
        state,
        csv,
    })
}

/// [`run_with`] on the Gaussian pulse.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    run_with(config, gaussian_pulse)
}

/// `x,q` rows alternating cell centre (reconstruction) and right interface
/// (point value), preceded by a `# key=value,...` line.
pub fn state_csv(
    state: &State,
    mesh: &Mesh,
    basis: &BasisSet,
    meta: &BTreeMap<String, String>,
) -> String {
    let recon = state.reconstruction(mesh, basis);
    let mut out = String::new();
    let header: Vec<String> = meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(out, "# {}", header.join(",")).unwrap();
    writeln!(out, "x,q").unwrap();
    for i in 0..mesh.cells {
        writeln!(
            out,
            "{:.16e},{:.16e}",
            mesh.center(i),
            recon.cell(i).eval(0.0)
        )
        .unwrap();
        writeln!(out, "{:.16e},{:.16e}", mesh.interface(i), state.pt[i]).unwrap();
    }
    out
}

/// Parsed `x,q` file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub meta: BTreeMap<String, String>,
    pub rows: Vec<(f64, f64)>,
}

impl CsvTable {
    /// Interface point values of a file written by [`state_csv`].
    pub fn point_values(&self) -> Vec<f64> {
        self.rows.iter().skip(1).step_by(2).map(|r| r.1).collect()
    }
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut table = CsvTable::default();
    let mut seen_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            for kv in meta.trim().split(',').filter(|s| !s.is_empty()) {
                let (k, v) = kv.split_once('=').ok_or_else(|| {
                    Error::Parse(format!("line {}: bad metadata `{kv}`", lineno + 1))
                })?;
                table
                    .meta
                    .insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if !seen_header {
            if line != "x,q" {
                return Err(Error::Parse(format!(
                    "line {}: expected header `x,q`",
                    lineno + 1
                )));
            }
            seen_header = true;
            continue;
        }
        let (x, q) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected two columns", lineno + 1)))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
        };
        table.rows.push((parse(x)?, parse(q)?));
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub cells: usize,
    pub dx: f64,
    pub error: f64,
    /// `log2(e_coarse / e_fine)`, absent on the first row.
    pub eoc: Option<f64>,
}

/// Advects the Gaussian pulse with `c = 1` on `[0, 1]` to `t = 0.1` and
/// measures the L1 error of the point values on each grid.
///
/// Method A runs with the closed-form linear volume term; at `cfl = 1e-4`
/// that is the only affordable path on fine grids.
pub fn convergence_study(
    degree: usize,
    method: Method,
    grids: &[usize],
    cfl: f64,
) -> Result<Vec<ConvergenceRow>> {
    if grids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("grids must be strictly ascending".into()));
    }
    let flux = Flux::Advection { c: 1.0 };
    let mut solver = Solver::new(degree, method, flux, false)?;
    if let Solver::A(a) = &mut solver {
        a.fast_linear = true;
    }
    let exact = |x: f64| gaussian_pulse((x - CONVERGENCE_TIME).rem_euclid(1.0));
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(grids.len());
    for &cells in grids {
        let mesh = Mesh::new(0.0, 1.0, cells)?;
        let init = State::project(gaussian_pulse, &mesh, solver.basis());
        let out = solver.run(init, &mesh, cfl, CONVERGENCE_TIME)?;
        let error = out.l1_error_points(&mesh, exact);
        let eoc = rows
            .last()
            .map(|prev| (prev.error / error).ln() / (cells as f64 / prev.cells as f64).ln());
        rows.push(ConvergenceRow {
            cells,
            dx: mesh.dx(),
            error,
            eoc,
        });
    }
    Ok(rows)
}

pub fn convergence_csv(degree: usize, method: Method, rows: &[ConvergenceRow]) -> String {
    let mut out = format!("# N={degree},method={}\nM,dx,l1_error,eoc\n", method.name());
    for r in rows {
        let eoc = r.eoc.map(|e| format!("{e:.4}")).unwrap_or_default();
        writeln!(out, "{},{:.16e},{:.16e},{}", r.cells, r.dx, r.error, eoc).unwrap();
    }
    out
}

/// Godunov-consistent Roe flux for Burgers with a sonic-point fix.
pub fn roe_flux(ql: f64, qr: f64) -> f64 {
    let f = |q: f64| 0.5 * q * q;
    if ql < 0.0 && 0.0 < qr {
        return 0.0;
    }
    let a = if ql != qr {
        (f(ql) - f(qr)) / (ql - qr)
    } else {
        ql
    };
    if a > 0.0 {
        f(ql)
    } else {
        f(qr)
    }
}

pub const ROE_CFL: f64 = 0.9;

/// First-order finite-volume solution of Burgers' equation on `[0, 1]`
/// (periodic), returned as cell averages.
pub fn roe_burgers_reference(
    q0: impl Fn(f64) -> f64,
    cells: usize,
    t_end: f64,
) -> Result<Vec<f64>> {
    if cells < 1 {
        return Err(Error::Config(
            "Roe reference needs at least one cell".into(),
        ));
    }
    let dx = 1.0 / cells as f64;
    let rule = crate::quadrature::gauss_legendre(4, crate::quadrature::Interval::UnitCell)?;
    let mut q: Vec<f64> = (0..cells)
        .map(|i| {
            let xc = (i as f64 + 0.5) * dx;
            rule.integrate(|xi| q0(xc + dx * xi))
        })
        .collect();
    let mut t = 0.0;
    let mut flux = vec![0.0; cells];
    while t < t_end {
        let speed = q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut dt = if speed > 0.0 {
            ROE_CFL * dx / speed
        } else {
            t_end - t
        };
        if t + dt > t_end {
            dt = t_end - t;
        }
        // flux[i] at the right interface of cell i
        for i in 0..cells {
            flux[i] = roe_flux(q[i], q[(i + 1) % cells]);
        }
        for i in 0..cells {
            let left = flux[(i + cells - 1) % cells];
            q[i] -= dt / dx * (flux[i] - left);
        }
        t += dt;
    }
    Ok(q)
}

pub const BURGERS_DEGREE: usize = 6;
pub const BURGERS_CFL: f64 = 0.5;
/// Well past the breaking time `~0.058` of the Gaussian pulse.
pub const BURGERS_T_END: f64 = 0.15;
pub const BURGERS_REFERENCE_CELLS: usize = 4000;

#[derive(Debug, Clone)]
pub struct BurgersRun {
    pub mesh: Mesh,
    pub state: State,
    pub csv: String,
}

#[derive(Debug, Clone)]
pub struct BurgersDemo {
    pub runs: Vec<BurgersRun>,
    pub reference: Vec<f64>,
    pub reference_csv: String,
    /// Maximum of the initial data.
    pub initial_max: f64,
}

/// Largest value of `q0` over 10^5 equispaced samples of `[0, 1]`.
pub fn data_maximum(q0: impl Fn(f64) -> f64) -> f64 {
    const SAMPLES: usize = 100_000;
    (0..=SAMPLES)
        .map(|j| q0(j as f64 / SAMPLES as f64))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Degree-6 Method B with limiter and sonic fix on each grid, plus the
/// 4000-cell Roe reference.
pub fn burgers_demo(
    grids: &[usize],
    q0: impl Fn(f64) -> f64 + Copy,
    t_end: f64,
) -> Result<BurgersDemo> {
    let basis = BasisSet::new(BURGERS_DEGREE)?;
    let solver = MethodB::new(basis.clone(), Flux::Burgers)?.with_limiter(true);
    let mut runs = Vec::new();
    let initial_max = data_maximum(q0);
    for &cells in grids {
        let mesh = Mesh::new(0.0, 1.0, cells)?;
        let init = State::project(q0, &mesh, &basis);
        let state = solver.run(init, &mesh, BURGERS_CFL, t_end)?;
        let mut meta = BTreeMap::new();
        meta.insert("N".to_string(), BURGERS_DEGREE.to_string());
        meta.insert("method".to_string(), "b".to_string());
        meta.insert("flux".to_string(), "burgers".to_string());
        meta.insert("cells".to_string(), cells.to_string());
        meta.insert("cfl".to_string(), BURGERS_CFL.to_string());
        meta.insert("t".to_string(), format!("{:.16e}", state.t));
        let csv = state_csv(&state, &mesh, &basis, &meta);
        runs.push(BurgersRun { mesh, state, csv });
    }
    let reference = roe_burgers_reference(q0, BURGERS_REFERENCE_CELLS, t_end)?;
    let mut reference_csv =
        format!("# reference=roe,cells={BURGERS_REFERENCE_CELLS},t={t_end:.16e}\nx,q\n");
    let dx = 1.0 / BURGERS_REFERENCE_CELLS as f64;
    for (i, q) in reference.iter().enumerate() {
        writeln!(reference_csv, "{:.16e},{:.16e}", (i as f64 + 0.5) * dx, q).unwrap();
    }
    Ok(BurgersDemo {
        runs,
        reference,
        reference_csv,
        initial_max,
    })
}

/// Position of the steepest downward jump between consecutive samples
/// `(x_j, q_j)` of a periodic profile, taken as the midpoint of the pair.
pub fn shock_location(samples: &[(f64, f64)], length: f64) -> f64 {
    let n = samples.len();
    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 0..n {
        let (x0, q0) = samples[j];
        let (mut x1, q1) = samples[(j + 1) % n];
        if x1 < x0 {
            x1 += length;
        }
        let drop = (q0 - q1) / (x1 - x0);
        if drop > best.0 {
            best = (drop, (0.5 * (x0 + x1)).rem_euclid(length));
        }
    }
    best.1
}

/// Periodic distance on a domain of the given length.
pub fn periodic_distance(a: f64, b: f64, length: f64) -> f64 {
    let d = (a - b).rem_euclid(length);
    d.min(length - d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflEntry {
    pub degree: usize,
    pub method: Method,
    pub cfl: f64,
}

pub fn cfl_table() -> Result<Vec<CflEntry>> {
    let mut out = Vec::new();
    for method in [Method::A, Method::B] {
        for degree in 2..=6 {
            out.push(CflEntry {
                degree,
                method,
                cfl: cfl_max(degree, method)?,
            });
        }
    }
    Ok(out)
}

pub fn cfl_csv(entries: &[CflEntry]) -> String {
    let mut out = String::from("N,method,cfl_max\n");
    for e in entries {
        writeln!(out, "{},{},{:.3}", e.degree, e.method.name(), e.cfl).unwrap();
    }
    out
}
