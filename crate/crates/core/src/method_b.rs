//! Fully discrete update with characteristic evolution operators.
//!
//! One step freezes the reconstruction at `t^n`, traces the solution along
//! characteristics to every space node of every cell at every Gauss-Lobatto
//! time node of `[t^n, t^n + dt]`, keeps the interface traces at the final
//! time as the new point values, and integrates the moment equations in time
//! with the Lobatto rule:
//!
//! ```text
//! q^(k),n+1 = q^(k),n + dt / dx * sum_l w_l [ -(k + 1) (f(q_{i+1/2}^l) - (-1)^k f(q_{i-1/2}^l))
//!                                              + k (k + 1) 2^k sum_m w_m f(q_{i,m}^l) xi_m^(k-1) ]
//! ```
//!
//! Every trace starts from the `t^n` reconstruction, never from intermediate
//! time levels.

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::limiter::Limiter;
use crate::method_a::{advance, clip, stable_dt};
use crate::quadrature::{gauss_lobatto, time_nodes, Interval, QuadratureRule};
use crate::scheme::{Flux, MomentOperator};
use crate::state::{Mesh, Reconstruction, State};

const REACH_TOL: f64 = 1e-12;

fn check_reach(shift: f64) -> Result<()> {
    if shift.abs() > 1.0 + REACH_TOL {
        Err(Error::CflViolation {
            reach: shift.abs(),
            dx: 1.0,
        })
    } else {
        Ok(())
    }
}

fn reach_error(e: Error, dx: f64) -> Error {
    match e {
        Error::CflViolation { reach, .. } => Error::CflViolation {
            reach: reach * dx,
            dx,
        },
        e => e,
    }
}

/// Exact trace for `q_t + c q_x = 0`: `recon(x - c tau)`.
pub fn trace_advection(recon: &Reconstruction, x: f64, tau: f64, c: f64) -> Result<f64> {
    let mesh = recon.mesh();
    let (i, xi) = mesh.locate(x);
    trace_advection_local(recon, i, xi, tau / mesh.dx(), c).map_err(|e| reach_error(e, mesh.dx()))
}

/// `tau_rel = tau / dx`
fn trace_advection_local(
    recon: &Reconstruction,
    i: usize,
    xi: f64,
    tau_rel: f64,
    c: f64,
) -> Result<f64> {
    let shift = c * tau_rel;
    check_reach(shift)?;
    Ok(recon.eval_local(i, xi - shift))
}

/// Fixpoint iteration for Burgers' equation:
/// `q^0 = recon(x)`, `q^s = recon(x - q^(s-1) tau)`, `s = 1..s_max`.
pub fn trace_burgers(recon: &Reconstruction, x: f64, tau: f64, s_max: usize) -> Result<f64> {
    let mesh = recon.mesh();
    let (i, xi) = mesh.locate(x);
    trace_burgers_local(recon, i, xi, tau / mesh.dx(), s_max).map_err(|e| reach_error(e, mesh.dx()))
}

fn trace_burgers_local(
    recon: &Reconstruction,
    i: usize,
    xi: f64,
    tau_rel: f64,
    s_max: usize,
) -> Result<f64> {
    let mut q = recon.eval_local(i, xi);
    if tau_rel == 0.0 {
        return Ok(q);
    }
    for _ in 0..s_max {
        let shift = q * tau_rel;
        check_reach(shift)?;
        q = recon.eval_local(i, xi - shift);
    }
    Ok(q)
}

/// Simplified entropy fix at transonic points.
///
/// If the traced value and `recon(x)` lie strictly on opposite sides of zero
/// and the reconstruction increases between `x` and the foot point
/// `x - q tau` (an expanding fan that the fixpoint iteration cannot resolve),
/// the sonic state 0 is returned; otherwise `q_candidate` is kept.
pub fn sonic_fix(q_candidate: f64, recon: &Reconstruction, x: f64, tau: f64) -> f64 {
    let mesh = recon.mesh();
    let (i, xi) = mesh.locate(x);
    sonic_fix_local(q_candidate, recon, i, xi, tau / mesh.dx())
}

fn sonic_fix_local(q: f64, recon: &Reconstruction, i: usize, xi: f64, tau_rel: f64) -> f64 {
    let here = recon.eval_local(i, xi);
    if q * here >= 0.0 {
        return q;
    }
    let shift = q * tau_rel;
    let foot = recon.eval_local(i, xi - shift);
    // (recon(foot) - recon(x)) * (foot - x) > 0 with foot - x = -shift
    if (foot - here) * (-shift) > 0.0 {
        0.0
    } else {
        q
    }
}

/// Traced values `q_{i,m}^l` for every cell `i`, space node `m` and time
/// node `l`. Endpoint nodes are shared with the neighbouring cell.
#[derive(Debug, Clone)]
pub struct TraceTable {
    cells: usize,
    n_space: usize,
    n_time: usize,
    /// `interface[i * n_time + l]` at `x_{i+1/2}`.
    interface: Vec<f64>,
    /// `interior[(i * (n_space - 2) + m - 1) * n_time + l]`.
    interior: Vec<f64>,
}

impl TraceTable {
    pub fn n_space(&self) -> usize {
        self.n_space
    }

    pub fn n_time(&self) -> usize {
        self.n_time
    }

    /// Trace at `x_{i+1/2}`, time node `l`.
    pub fn interface(&self, i: usize, l: usize) -> f64 {
        self.interface[i * self.n_time + l]
    }

    pub fn get(&self, i: usize, m: usize, l: usize) -> f64 {
        if m == 0 {
            let left = if i == 0 { self.cells - 1 } else { i - 1 };
            self.interface(left, l)
        } else if m + 1 == self.n_space {
            self.interface(i, l)
        } else {
            self.interior[(i * (self.n_space - 2) + m - 1) * self.n_time + l]
        }
    }
}

/// Method B stepper.
#[derive(Debug, Clone)]
pub struct MethodB {
    moments: MomentOperator,
    time_rule: QuadratureRule,
    /// Fixpoint iterations of the Burgers trace.
    pub s_max: usize,
    pub sonic_fix: bool,
    pub limiter: Option<Limiter>,
}

impl MethodB {
    /// Default node counts, `s_max = N`, sonic fix on, no limiter.
    pub fn new(basis: BasisSet, flux: Flux) -> Result<Self> {
        let time_rule = gauss_lobatto(time_nodes(basis.degree()), Interval::UnitTime)?;
        let s_max = basis.degree();
        Ok(Self {
            moments: MomentOperator::new(basis, flux)?,
            time_rule,
            s_max,
            sonic_fix: true,
            limiter: None,
        })
    }

    /// Explicit node counts for the space and time Lobatto rules.
    pub fn with_nodes(basis: BasisSet, flux: Flux, n_space: usize, n_time: usize) -> Result<Self> {
        let rule = gauss_lobatto(n_space, Interval::UnitCell)?;
        let time_rule = gauss_lobatto(n_time, Interval::UnitTime)?;
        let s_max = basis.degree();
        Ok(Self {
            moments: MomentOperator::with_rule(basis, flux, rule),
            time_rule,
            s_max,
            sonic_fix: true,
            limiter: None,
        })
    }

    pub fn with_limiter(mut self, on: bool) -> Self {
        self.limiter = on.then(|| Limiter::new(self.moments.basis()));
        self
    }

    pub fn basis(&self) -> &BasisSet {
        self.moments.basis()
    }

    pub fn flux(&self) -> Flux {
        self.moments.flux()
    }

    pub fn space_rule(&self) -> &QuadratureRule {
        self.moments.rule()
    }

    pub fn time_rule(&self) -> &QuadratureRule {
        &self.time_rule
    }

    fn trace_local(&self, recon: &Reconstruction, i: usize, xi: f64, tau_rel: f64) -> Result<f64> {
        match self.flux() {
            Flux::Advection { c } => trace_advection_local(recon, i, xi, tau_rel, c),
            Flux::Burgers => {
                let q = trace_burgers_local(recon, i, xi, tau_rel, self.s_max)?;
                Ok(if self.sonic_fix && tau_rel > 0.0 {
                    sonic_fix_local(q, recon, i, xi, tau_rel)
                } else {
                    q
                })
            }
        }
    }

    /// Applies the limiter (if any) to every cell of `state`.
    pub fn limit(&self, state: &mut State) {
        let Some(limiter) = &self.limiter else { return };
        let mut dofs = Vec::with_capacity(self.basis().ndofs());
        for i in 0..state.cells() {
            state.fill_cell_dofs(i, &mut dofs);
            if limiter.limit_cell(&mut dofs) {
                state.moments_mut(i).copy_from_slice(&dofs[2..]);
            }
        }
    }

    /// Traces the frozen reconstruction to all space-time nodes.
    pub fn trace_table(&self, recon: &Reconstruction, dt: f64) -> Result<TraceTable> {
        let mesh = recon.mesh();
        let cells = mesh.cells;
        let n_space = self.space_rule().len();
        let n_time = self.time_rule.len();
        let taus: Vec<f64> = self
            .time_rule
            .nodes
            .iter()
            .map(|t| t * dt / mesh.dx())
            .collect();
        let mut interface = Vec::with_capacity(cells * n_time);
        for i in 0..cells {
            for &tau in &taus {
                interface.push(self.trace_local(recon, i, 0.5, tau)?);
            }
        }
        let inner = &self.space_rule().nodes[1..n_space - 1];
        let mut interior = Vec::with_capacity(cells * inner.len() * n_time);
        for i in 0..cells {
            for &xi in inner {
                for &tau in &taus {
                    interior.push(self.trace_local(recon, i, xi, tau)?);
                }
            }
        }
        Ok(TraceTable {
            cells,
            n_space,
            n_time,
            interface,
            interior,
        })
    }

    /// One step of size `dt`.
    pub fn step(&self, state: &State, mesh: &Mesh, dt: f64) -> Result<State> {
        let mut start = state.clone();
        self.limit(&mut start);
        let recon = start.reconstruction(mesh, self.basis());
        let table = self
            .trace_table(&recon, dt)
            .map_err(|e| reach_error(e, mesh.dx()))?;

        let flux = self.flux();
        let nm = self.basis().nmoments();
        let n_space = table.n_space();
        let n_time = table.n_time();
        let mut next = start.clone();
        for i in 0..mesh.cells {
            next.pt[i] = table.interface(i, n_time - 1);
        }
        let scale = dt / mesh.dx();
        let mut samples = vec![0.0; n_space];
        let mut incr = vec![0.0; nm];
        for i in 0..mesh.cells {
            incr.iter_mut().for_each(|v| *v = 0.0);
            let left = mesh.wrap(i as isize - 1);
            for (l, &w) in self.time_rule.weights.iter().enumerate() {
                let g_right = flux.f(table.interface(i, l));
                let g_left = flux.f(table.interface(left, l));
                if nm > 1 {
                    for (m, s) in samples.iter_mut().enumerate() {
                        *s = flux.f(table.get(i, m, l));
                    }
                }
                for (k, acc) in incr.iter_mut().enumerate() {
                    let mut v = MomentOperator::boundary_sum(k, g_right, g_left);
                    if k > 0 {
                        v += self.moments.volume_sum(k, &samples);
                    }
                    *acc += w * v;
                }
            }
            for (m, d) in next.moments_mut(i).iter_mut().zip(&incr) {
                *m += scale * d;
            }
        }
        next.t = state.t + dt;
        Ok(next)
    }

    pub fn time_step(&self, state: &State, mesh: &Mesh, cfl: f64) -> f64 {
        stable_dt(self.flux(), state, mesh, cfl)
    }

    /// Advances to `t_end` with `dt = cfl dx / max|f'(q_{i+1/2})|`, recomputed
    /// every step, the last step clipped.
    pub fn run(&self, state: State, mesh: &Mesh, cfl: f64, t_end: f64) -> Result<State> {
        advance(state, t_end, |s| {
            let dt = self.time_step(s, mesh, cfl);
            let dt_clipped = clip(s.t, dt, t_end);
            let out = self.step(s, mesh, dt_clipped).map(|mut n| {
                if dt_clipped != dt {
                    n.t = t_end;
                }
                n
            });
            (dt, out)
        })
    }
}
