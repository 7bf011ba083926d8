//! Semi-discrete evolution of the cell moments, shared by both time
//! discretizations.
//!
//! For the moment `k` of cell `i`
//!
//! ```text
//! d/dt q_i^(k) = -(k + 1) [f(q_{i+1/2}) - (-1)^k f(q_{i-1/2})] / dx
//!                + k (k + 1) 2^k / dx * int_{-1/2}^{1/2} f(recon_i(xi)) xi^(k-1) dxi
//! ```
//!
//! The volume integral is evaluated with a Gauss-Lobatto rule on the
//! reconstruction. For a linear flux it collapses to `2 (k + 1) c q_i^(k-1) / dx`.

use crate::basis::{moment_normalization, BasisSet};
use crate::error::Result;
use crate::quadrature::{gauss_lobatto, space_nodes, Interval, QuadratureRule};
use crate::state::{Mesh, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Flux {
    /// `f(q) = c q`
    Advection { c: f64 },
    /// `f(q) = q^2 / 2`
    Burgers,
}

impl Flux {
    #[inline]
    pub fn f(&self, q: f64) -> f64 {
        match *self {
            Flux::Advection { c } => c * q,
            Flux::Burgers => 0.5 * q * q,
        }
    }

    #[inline]
    pub fn f_prime(&self, q: f64) -> f64 {
        match *self {
            Flux::Advection { c } => c,
            Flux::Burgers => q,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Flux::Advection { .. })
    }

    /// Polynomial degree of `f` in `q`.
    pub fn degree(&self) -> usize {
        match self {
            Flux::Advection { .. } => 1,
            Flux::Burgers => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Flux::Advection { .. } => "advection",
            Flux::Burgers => "burgers",
        }
    }
}

/// Moment right-hand side with precomputed quadrature tables.
#[derive(Debug, Clone)]
pub struct MomentOperator {
    basis: BasisSet,
    flux: Flux,
    rule: QuadratureRule,
    /// `shape_at_nodes[m][r] = B_r(xi_m)`
    shape_at_nodes: Vec<Vec<f64>>,
    /// `volume_weights[k][m] = k (k + 1) 2^k w_m xi_m^(k-1)`, zero row for `k = 0`.
    volume_weights: Vec<Vec<f64>>,
}

impl MomentOperator {
    /// Uses the smallest Lobatto rule that is exact for polynomial data and
    /// this flux (`N + 1` nodes for a linear flux).
    pub fn new(basis: BasisSet, flux: Flux) -> Result<Self> {
        let rule = gauss_lobatto(
            space_nodes(basis.degree(), flux.degree()),
            Interval::UnitCell,
        )?;
        Ok(Self::with_rule(basis, flux, rule))
    }

    pub fn with_rule(basis: BasisSet, flux: Flux, rule: QuadratureRule) -> Self {
        let shape_at_nodes = basis.tabulate(&rule.nodes);
        let volume_weights = (0..basis.nmoments())
            .map(|k| {
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&xi, &w)| {
                        if k == 0 {
                            0.0
                        } else {
                            k as f64 * moment_normalization(k) * w * xi.powi(k as i32 - 1)
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            basis,
            flux,
            rule,
            shape_at_nodes,
            volume_weights,
        }
    }

    pub fn basis(&self) -> &BasisSet {
        &self.basis
    }

    pub fn flux(&self) -> Flux {
        self.flux
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn shape_at_nodes(&self) -> &[Vec<f64>] {
        &self.shape_at_nodes
    }

    /// Reconstruction values at the space nodes for the given cell dofs.
    pub fn recon_at_nodes(&self, dofs: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            self.shape_at_nodes
                .iter()
                .map(|row| row.iter().zip(dofs).map(|(b, a)| b * a).sum::<f64>()),
        );
    }

    /// `k (k + 1) 2^k sum_m w_m g_m xi_m^(k-1)` for samples `g_m` of the flux
    /// at the space nodes. Divide by `dx` to obtain the volume term.
    #[inline]
    pub fn volume_sum(&self, k: usize, flux_samples: &[f64]) -> f64 {
        self.volume_weights[k]
            .iter()
            .zip(flux_samples)
            .map(|(w, g)| w * g)
            .sum()
    }

    /// `-(k + 1) [g_right - (-1)^k g_left]`, the interface part times `dx`.
    #[inline]
    pub fn boundary_sum(k: usize, g_right: f64, g_left: f64) -> f64 {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        -((k + 1) as f64) * (g_right - sign * g_left)
    }

    /// Time derivative of `q_i^(k)` with the quadrature volume term.
    pub fn moment_rhs(&self, state: &State, mesh: &Mesh, i: usize, k: usize) -> f64 {
        assert!(k < self.basis.nmoments(), "moment index {k} out of range");
        let dofs = state.cell_dofs(i);
        let boundary =
            Self::boundary_sum(k, self.flux.f(state.pt[i]), self.flux.f(state.left_pt(i)));
        let volume = if k == 0 {
            0.0
        } else {
            let mut recon = Vec::new();
            self.recon_at_nodes(&dofs, &mut recon);
            let samples: Vec<f64> = recon.iter().map(|&q| self.flux.f(q)).collect();
            self.volume_sum(k, &samples)
        };
        (boundary + volume) / mesh.dx()
    }

    /// Time derivative of `q_i^(k)` using the closed form for linear flux.
    ///
    /// Panics for a nonlinear flux.
    pub fn moment_rhs_linear_fast(&self, state: &State, mesh: &Mesh, i: usize, k: usize) -> f64 {
        let Flux::Advection { c } = self.flux else {
            panic!("closed-form volume term requires a linear flux");
        };
        let boundary = Self::boundary_sum(k, c * state.pt[i], c * state.left_pt(i));
        let volume = if k == 0 {
            0.0
        } else {
            2.0 * (k + 1) as f64 * c * state.moments(i)[k - 1]
        };
        (boundary + volume) / mesh.dx()
    }

    /// Moment part of the full semi-discrete right-hand side, written into
    /// `out.mom`.
    pub fn fill_moment_rhs(&self, state: &State, mesh: &Mesh, out: &mut State, fast_linear: bool) {
        let inv_dx = 1.0 / mesh.dx();
        let nm = self.basis.nmoments();
        let mut dofs = Vec::with_capacity(self.basis.ndofs());
        let mut recon = Vec::with_capacity(self.rule.len());
        let mut samples = Vec::with_capacity(self.rule.len());
        let fast = fast_linear && self.flux.is_linear();
        for i in 0..state.cells() {
            let g_right = self.flux.f(state.pt[i]);
            let g_left = self.flux.f(state.left_pt(i));
            if !fast && nm > 1 {
                state.fill_cell_dofs(i, &mut dofs);
                self.recon_at_nodes(&dofs, &mut recon);
                samples.clear();
                samples.extend(recon.iter().map(|&q| self.flux.f(q)));
            }
            let moments = state.moments(i);
            for k in 0..nm {
                let boundary = Self::boundary_sum(k, g_right, g_left);
                let volume = match (k, fast) {
                    (0, _) => 0.0,
                    (_, true) => {
                        let Flux::Advection { c } = self.flux else {
                            unreachable!()
                        };
                        2.0 * (k + 1) as f64 * c * moments[k - 1]
                    }
                    (_, false) => self.volume_sum(k, &samples),
                };
                out.mom[i * nm + k] = (boundary + volume) * inv_dx;
            }
        }
    }
}
