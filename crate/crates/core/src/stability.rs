//! Von Neumann analysis for linear advection with `c > 0`.
//!
//! The per-cell dof vector is `(q_{j+1/2}, q_j^(0), ..., q_j^(N-2))`. A
//! Fourier mode `u_j = u_hat e^{i j theta}` is advanced by the amplification
//! matrix `G(theta, nu)`; a CFL number is called stable when the spectral
//! radius of `G` stays below `1 + 1e-9` on a uniform grid of 720 wavenumbers.
//!
//! Method A is assembled from the closed-form semi-discrete operator and the
//! RK3 stability polynomial. Method B is linear but has no convenient closed
//! form, so its real stencil matrices are read off the solver by stepping unit
//! dof vectors on a small periodic mesh.

use nalgebra::{Complex, DMatrix};

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::method_a::FdStencil;
use crate::method_b::MethodB;
use crate::scheme::Flux;
use crate::state::{Mesh, State};

pub type CMatrix = DMatrix<Complex<f64>>;

pub const THETA_SAMPLES: usize = 720;
pub const STABILITY_TOL: f64 = 1e-9;
const PROBE_CELLS: usize = 8;
const SCAN_STEP: f64 = 0.01;
const SCAN_MAX: f64 = 1.5;
const BISECTION_WIDTH: f64 = 1e-3;
const SMALLEST_CFL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Upwind finite differences with SSP-RK3.
    A,
    /// Characteristic evolution operators.
    B,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::A => "a",
            Method::B => "b",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Method::A),
            "b" => Ok(Method::B),
            _ => Err(Error::Config(format!(
                "unknown method `{s}` (expected a or b)"
            ))),
        }
    }
}

/// `G(theta) = sum_j S_j e^{i j theta}` for a fixed degree, method and CFL
/// number.
#[derive(Debug, Clone)]
pub struct AmplificationOperator {
    pub degree: usize,
    pub method: Method,
    pub cfl: f64,
    repr: Repr,
}

#[derive(Debug, Clone)]
enum Repr {
    /// Semi-discrete operator `L(theta) = L0 + L1 e^{-i theta}` (dx = c = 1).
    SemiDiscrete { l0: DMatrix<f64>, l1: DMatrix<f64> },
    /// Real stencil matrices with their cell offsets.
    Stencil(Vec<(isize, DMatrix<f64>)>),
}

impl AmplificationOperator {
    pub fn new(degree: usize, method: Method, cfl: f64) -> Result<Self> {
        let repr = match method {
            Method::A => semi_discrete(degree)?,
            Method::B => probe_method_b(degree, cfl)?,
        };
        Ok(Self {
            degree,
            method,
            cfl,
            repr,
        })
    }

    pub fn matrix(&self, theta: f64) -> CMatrix {
        match &self.repr {
            Repr::SemiDiscrete { l0, l1 } => {
                let phase = Complex::from_polar(1.0, -theta);
                let z: CMatrix =
                    (l0.map(Complex::from) + l1.map(|v| phase * v)) * Complex::from(self.cfl);
                let n = self.degree;
                let id = CMatrix::identity(n, n);
                let z2 = &z * &z;
                let z3 = &z2 * &z;
                id + &z + z2 * Complex::from(0.5) + z3 * Complex::from(1.0 / 6.0)
            }
            Repr::Stencil(parts) => {
                let n = self.degree;
                let mut g = CMatrix::zeros(n, n);
                for (offset, s) in parts {
                    let phase = Complex::from_polar(1.0, theta * *offset as f64);
                    g += s.map(|v| phase * v);
                }
                g
            }
        }
    }

    pub fn spectral_radius(&self, theta: f64) -> f64 {
        spectral_radius(&self.matrix(theta))
    }

    /// Largest spectral radius over the wavenumber grid.
    pub fn max_spectral_radius(&self) -> f64 {
        (0..THETA_SAMPLES)
            .map(|j| {
                self.spectral_radius(2.0 * std::f64::consts::PI * j as f64 / THETA_SAMPLES as f64)
            })
            .fold(0.0, f64::max)
    }
}

pub fn eigenvalues(m: &CMatrix) -> Vec<Complex<f64>> {
    let (_, t) = m.clone().schur().unpack();
    t.diagonal().iter().copied().collect()
}

pub fn spectral_radius(m: &CMatrix) -> f64 {
    eigenvalues(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `G` for Method A / SSP-RK3.
pub fn assemble_a(theta: f64, cfl: f64, degree: usize) -> Result<CMatrix> {
    Ok(AmplificationOperator::new(degree, Method::A, cfl)?.matrix(theta))
}

/// `G` for Method B.
pub fn assemble_b(theta: f64, cfl: f64, degree: usize) -> Result<CMatrix> {
    Ok(AmplificationOperator::new(degree, Method::B, cfl)?.matrix(theta))
}

fn semi_discrete(degree: usize) -> Result<Repr> {
    let basis = BasisSet::new(degree)?;
    let fd = FdStencil::new(&basis);
    let n = degree;
    let mut l0 = DMatrix::zeros(n, n);
    let mut l1 = DMatrix::zeros(n, n);
    // point value: -D with D over (q_{j+1/2}, q_{j-1/2}, moments of cell j)
    let w = &fd.left_biased;
    l0[(0, 0)] = -w[0];
    l1[(0, 0)] = -w[1];
    for k in 0..n - 1 {
        l0[(0, 1 + k)] = -w[2 + k];
    }
    // moments: -(k+1)(q_{j+1/2} - (-1)^k q_{j-1/2}) + 2(k+1) q^(k-1)
    for k in 0..n - 1 {
        let kp1 = (k + 1) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        l0[(1 + k, 0)] = -kp1;
        l1[(1 + k, 0)] = kp1 * sign;
        if k > 0 {
            l0[(1 + k, k)] = 2.0 * kp1;
        }
    }
    Ok(Repr::SemiDiscrete { l0, l1 })
}

fn set_dof(state: &mut State, cell: usize, dof: usize, v: f64) {
    if dof == 0 {
        state.pt[cell] = v;
    } else {
        state.moments_mut(cell)[dof - 1] = v;
    }
}

fn get_dof(state: &State, cell: usize, dof: usize) -> f64 {
    if dof == 0 {
        state.pt[cell]
    } else {
        state.moments(cell)[dof - 1]
    }
}

/// Response of cell 0 to unit perturbations of every dof of every cell.
fn probe_method_b(degree: usize, cfl: f64) -> Result<Repr> {
    if !(cfl > 0.0 && cfl <= 1.0 + 1e-12) {
        return Err(Error::CflViolation {
            reach: cfl,
            dx: 1.0,
        });
    }
    let mesh = Mesh::new(0.0, PROBE_CELLS as f64, PROBE_CELLS)?;
    let stepper = MethodB::new(BasisSet::new(degree)?, Flux::Advection { c: 1.0 })?;
    let n = degree;
    let mut parts = Vec::new();
    for cell in 0..PROBE_CELLS {
        let mut s = DMatrix::zeros(n, n);
        for dof in 0..n {
            let mut st = State::zeros(degree, PROBE_CELLS);
            set_dof(&mut st, cell, dof, 1.0);
            let out = stepper.step(&st, &mesh, cfl)?;
            for row in 0..n {
                s[(row, dof)] = get_dof(&out, 0, row);
            }
        }
        if s.iter().any(|v| *v != 0.0) {
            let offset = if cell <= PROBE_CELLS / 2 {
                cell as isize
            } else {
                cell as isize - PROBE_CELLS as isize
            };
            parts.push((offset, s));
        }
    }
    Ok(Repr::Stencil(parts))
}

/// Whether `cfl` passes the sampled spectral-radius test. CFL numbers that
/// the stepper rejects outright count as unstable.
pub fn is_stable(degree: usize, method: Method, cfl: f64) -> Result<bool> {
    match AmplificationOperator::new(degree, method, cfl) {
        Ok(op) => Ok(op.max_spectral_radius() <= 1.0 + STABILITY_TOL),
        Err(Error::CflViolation { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Largest CFL number below which the method is stable.
///
/// Scans upward in steps of 0.01 up to 1.5 to find the first unstable value,
/// then bisects the bracketing interval to a width of 1e-3.
pub fn cfl_max(degree: usize, method: Method) -> Result<f64> {
    if !is_stable(degree, method, SMALLEST_CFL)? {
        return Err(Error::UnstableAtZero {
            degree,
            method: method.name(),
            cfl: SMALLEST_CFL,
        });
    }
    let mut lo = SMALLEST_CFL;
    let mut hi = None;
    let steps = (SCAN_MAX / SCAN_STEP).round() as usize;
    for k in 1..=steps {
        let nu = k as f64 * SCAN_STEP;
        if is_stable(degree, method, nu)? {
            lo = nu;
        } else {
            hi = Some(nu);
            break;
        }
    }
    let Some(mut hi) = hi else { return Ok(lo) };
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if is_stable(degree, method, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
