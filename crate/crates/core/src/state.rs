//! Periodic mesh, degree-of-freedom storage and the global reconstruction.

use crate::basis::{BasisSet, Polynomial};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, Interval};

const PROJECTION_NODES: usize = 12;

/// Equidistant periodic mesh on `[x_left, x_right]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub x_left: f64,
    pub x_right: f64,
    pub cells: usize,
}

impl Mesh {
    pub fn new(x_left: f64, x_right: f64, cells: usize) -> Result<Self> {
        if cells < 3 {
            return Err(Error::Config(format!(
                "mesh needs at least 3 cells, got {cells}"
            )));
        }
        if !(x_right > x_left) {
            return Err(Error::Config(format!("empty domain [{x_left}, {x_right}]")));
        }
        Ok(Self {
            x_left,
            x_right,
            cells,
        })
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx()
    }

    /// `x_{i+1/2}`, the right interface of cell `i`.
    pub fn interface(&self, i: usize) -> f64 {
        self.x_left + (i + 1) as f64 * self.dx()
    }

    /// Periodic index wrap.
    #[inline]
    pub fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.cells as isize) as usize
    }

    /// Cell containing `x` (after periodic wrap) and the local coordinate `xi`.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let s = (x - self.x_left) / self.dx();
        let m = self.cells as f64;
        let s = s.rem_euclid(m);
        let i = (s.floor() as usize).min(self.cells - 1);
        (i, s - i as f64 - 0.5)
    }
}

/// Point values at interfaces plus `N - 1` moments per cell.
///
/// `pt[i]` is the value at `x_{i+1/2}`; each interface is stored once and
/// shared by its two neighbours.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub degree: usize,
    pub pt: Vec<f64>,
    /// Row-major `cells x (N - 1)`.
    pub mom: Vec<f64>,
    pub t: f64,
}

impl State {
    pub fn zeros(degree: usize, cells: usize) -> Self {
        Self {
            degree,
            pt: vec![0.0; cells],
            mom: vec![0.0; cells * (degree - 1)],
            t: 0.0,
        }
    }

    pub fn cells(&self) -> usize {
        self.pt.len()
    }

    pub fn nmoments(&self) -> usize {
        self.degree - 1
    }

    pub fn moments(&self, i: usize) -> &[f64] {
        let nm = self.nmoments();
        &self.mom[i * nm..(i + 1) * nm]
    }

    pub fn moments_mut(&mut self, i: usize) -> &mut [f64] {
        let nm = self.nmoments();
        &mut self.mom[i * nm..(i + 1) * nm]
    }

    /// Left interface value of cell `i` (periodic).
    #[inline]
    pub fn left_pt(&self, i: usize) -> f64 {
        if i == 0 {
            self.pt[self.pt.len() - 1]
        } else {
            self.pt[i - 1]
        }
    }

    /// Cell dofs in the order `(q_{i+1/2}, q_{i-1/2}, q_i^(0), ..., q_i^(N-2))`.
    pub fn cell_dofs(&self, i: usize) -> Vec<f64> {
        let mut d = Vec::with_capacity(self.degree + 1);
        self.fill_cell_dofs(i, &mut d);
        d
    }

    pub fn fill_cell_dofs(&self, i: usize, out: &mut Vec<f64>) {
        out.clear();
        out.push(self.pt[i]);
        out.push(self.left_pt(i));
        out.extend_from_slice(self.moments(i));
    }

    pub fn is_finite(&self) -> bool {
        self.pt.iter().chain(&self.mom).all(|v| v.is_finite())
    }

    /// `self += s * other` on all dofs (time is left alone).
    pub fn axpy(&mut self, s: f64, other: &State) {
        for (a, b) in self.pt.iter_mut().zip(&other.pt) {
            *a += s * b;
        }
        for (a, b) in self.mom.iter_mut().zip(&other.mom) {
            *a += s * b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.pt
            .iter_mut()
            .chain(self.mom.iter_mut())
            .for_each(|v| *v *= s);
    }

    pub fn max_abs_pt(&self) -> f64 {
        self.pt.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `dx * sum_i q_i^(0)`.
    pub fn total_mass(&self, mesh: &Mesh) -> f64 {
        let nm = self.nmoments();
        mesh.dx() * self.mom.iter().step_by(nm).sum::<f64>()
    }

    /// `dx * sum_i |q_{i+1/2} - exact(x_{i+1/2})|`.
    pub fn l1_error_points(&self, mesh: &Mesh, exact: impl Fn(f64) -> f64) -> f64 {
        mesh.dx()
            * self
                .pt
                .iter()
                .enumerate()
                .map(|(i, v)| (v - exact(mesh.interface(i))).abs())
                .sum::<f64>()
    }

    /// Samples `q0` at interfaces and takes its moments on every cell with a
    /// 12-point Gauss-Legendre rule.
    pub fn project(q0: impl Fn(f64) -> f64, mesh: &Mesh, basis: &BasisSet) -> Self {
        let rule = gauss_legendre(PROJECTION_NODES, Interval::UnitCell)
            .expect("12-point Gauss-Legendre rule");
        let mut state = State::zeros(basis.degree(), mesh.cells);
        let dx = mesh.dx();
        for i in 0..mesh.cells {
            state.pt[i] = q0(mesh.interface(i));
            let xc = mesh.center(i);
            let samples: Vec<f64> = rule.nodes.iter().map(|&xi| q0(xc + dx * xi)).collect();
            for (k, m) in state.moments_mut(i).iter_mut().enumerate() {
                let integral: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .zip(&samples)
                    .map(|((&xi, &w), &q)| w * q * xi.powi(k as i32))
                    .sum();
                *m = crate::basis::moment_normalization(k) * integral;
            }
        }
        state
    }

    /// Per-cell reconstruction polynomials of the current data.
    pub fn reconstruction(&self, mesh: &Mesh, basis: &BasisSet) -> Reconstruction {
        let mut dofs = Vec::with_capacity(basis.ndofs());
        let cells = (0..self.cells())
            .map(|i| {
                self.fill_cell_dofs(i, &mut dofs);
                basis.reconstruct(&dofs)
            })
            .collect();
        Reconstruction { mesh: *mesh, cells }
    }

    /// Global reconstruction at `x` (periodic).
    pub fn eval_global(&self, mesh: &Mesh, basis: &BasisSet, x: f64) -> f64 {
        let (i, xi) = mesh.locate(x);
        basis.reconstruct(&self.cell_dofs(i)).eval(xi)
    }
}

/// Frozen piecewise-polynomial, globally continuous reconstruction.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    mesh: Mesh,
    cells: Vec<Polynomial>,
}

impl Reconstruction {
    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn cell(&self, i: usize) -> &Polynomial {
        &self.cells[i]
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let (i, xi) = self.mesh.locate(x);
        self.cells[i].eval(xi)
    }

    /// Value at local coordinate `xi` of cell `i`, where `xi` may leave the
    /// cell; the evaluation then moves to the neighbour that contains it.
    #[inline]
    pub fn eval_local(&self, i: usize, xi: f64) -> f64 {
        let shift = (xi + 0.5).floor();
        if shift == 0.0 || (shift == 1.0 && xi == 0.5) {
            return self.cells[i].eval(xi);
        }
        let j = self.mesh.wrap(i as isize + shift as isize);
        self.cells[j].eval(xi - shift)
    }
}
