//! Semi-discrete point-value update by upwinded finite differences, integrated
//! in time with SSP-RK3.
//!
//! The interface derivative is taken from the reconstruction of the upwind
//! cell: `D` differentiates cell `i` at its right end, `D*` differentiates
//! cell `i + 1` at its left end, and
//!
//! ```text
//! d/dt q_{i+1/2} = -( max(0, f'(q)) D + min(0, f'(q)) D* ),   q = q_{i+1/2}
//! ```

use crate::basis::{BasisSet, Dof};
use crate::error::{Error, Result};
use crate::scheme::{Flux, MomentOperator};
use crate::state::{Mesh, State};

/// Finite-difference weights obtained by differentiating the shape functions
/// at the cell endpoints, in units of `1 / dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdStencil {
    /// `B_r'(+1/2)` in cell dof order; applied to cell `i`.
    pub left_biased: Vec<f64>,
    /// `B_r'(-1/2)` in cell dof order; applied to cell `i + 1`.
    pub right_biased: Vec<f64>,
}

impl FdStencil {
    pub fn new(basis: &BasisSet) -> Self {
        let at = |xi: f64| basis.shapes().iter().map(|b| b.deriv().eval(xi)).collect();
        Self {
            left_biased: at(0.5),
            right_biased: at(-0.5),
        }
    }

    fn nmoments(&self) -> usize {
        self.left_biased.len() - 2
    }

    /// `dx * D` as weights over
    /// `(q_{i-1/2}, q_i^(0..N-2), q_{i+1/2}, q_{i+1}^(0..N-2), q_{i+3/2})`.
    pub fn coeffs_d(&self) -> Vec<f64> {
        let nm = self.nmoments();
        let d = &self.left_biased;
        let mut out = Vec::with_capacity(2 * nm + 3);
        out.push(d[Dof::MinusHalf.index()]);
        out.extend_from_slice(&d[2..]);
        out.push(d[Dof::PlusHalf.index()]);
        out.extend(std::iter::repeat_n(0.0, nm + 1));
        out
    }

    /// `dx * D*` over the same dof list as [`FdStencil::coeffs_d`].
    pub fn coeffs_dstar(&self) -> Vec<f64> {
        let nm = self.nmoments();
        let d = &self.right_biased;
        let mut out = Vec::with_capacity(2 * nm + 3);
        out.extend(std::iter::repeat_n(0.0, nm + 1));
        out.push(d[Dof::MinusHalf.index()]);
        out.extend_from_slice(&d[2..]);
        out.push(d[Dof::PlusHalf.index()]);
        out
    }

    /// `dx * D` at interface `i`.
    #[inline]
    pub fn apply_left(&self, state: &State, i: usize) -> f64 {
        let w = &self.left_biased;
        let mut acc = w[0] * state.pt[i] + w[1] * state.left_pt(i);
        for (a, m) in w[2..].iter().zip(state.moments(i)) {
            acc += a * m;
        }
        acc
    }

    /// `dx * D*` at interface `i`.
    #[inline]
    pub fn apply_right(&self, state: &State, i: usize) -> f64 {
        let j = if i + 1 == state.cells() { 0 } else { i + 1 };
        let w = &self.right_biased;
        let mut acc = w[0] * state.pt[j] + w[1] * state.pt[i];
        for (a, m) in w[2..].iter().zip(state.moments(j)) {
            acc += a * m;
        }
        acc
    }
}

/// Vector space operations needed by the Runge-Kutta stages.
pub trait RkVector: Clone {
    fn axpy(&mut self, s: f64, other: &Self);
    fn scale(&mut self, s: f64);
    fn is_finite(&self) -> bool;
}

impl RkVector for State {
    fn axpy(&mut self, s: f64, other: &Self) {
        State::axpy(self, s, other)
    }
    fn scale(&mut self, s: f64) {
        State::scale(self, s)
    }
    fn is_finite(&self) -> bool {
        State::is_finite(self)
    }
}

impl RkVector for f64 {
    fn axpy(&mut self, s: f64, other: &Self) {
        *self += s * other
    }
    fn scale(&mut self, s: f64) {
        *self *= s
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Shu-Osher SSP-RK3:
///
/// ```text
/// u1 = u + dt L(u)
/// u2 = 3/4 u + 1/4 (u1 + dt L(u1))
/// u' = 1/3 u + 2/3 (u2 + dt L(u2))
/// ```
pub fn ssp_rk3_step<V: RkVector>(u: &V, dt: f64, mut rhs: impl FnMut(&V) -> V) -> Result<V> {
    let mut u1 = u.clone();
    u1.axpy(dt, &rhs(u));
    if !u1.is_finite() {
        return Err(Error::NonFinite { stage: 1 });
    }

    let l1 = rhs(&u1);
    let mut u2 = u1;
    u2.axpy(dt, &l1);
    u2.scale(0.25);
    u2.axpy(0.75, u);
    if !u2.is_finite() {
        return Err(Error::NonFinite { stage: 2 });
    }

    let l2 = rhs(&u2);
    let mut out = u2;
    out.axpy(dt, &l2);
    out.scale(2.0 / 3.0);
    out.axpy(1.0 / 3.0, u);
    if !out.is_finite() {
        return Err(Error::NonFinite { stage: 3 });
    }
    Ok(out)
}

/// Method A spatial operator.
#[derive(Debug, Clone)]
pub struct MethodA {
    moments: MomentOperator,
    stencil: FdStencil,
    /// Use the closed-form volume term when the flux is linear.
    pub fast_linear: bool,
}

impl MethodA {
    pub fn new(basis: BasisSet, flux: Flux) -> Result<Self> {
        let stencil = FdStencil::new(&basis);
        Ok(Self {
            moments: MomentOperator::new(basis, flux)?,
            stencil,
            fast_linear: false,
        })
    }

    pub fn basis(&self) -> &BasisSet {
        self.moments.basis()
    }

    pub fn flux(&self) -> Flux {
        self.moments.flux()
    }

    pub fn stencil(&self) -> &FdStencil {
        &self.stencil
    }

    pub fn moment_operator(&self) -> &MomentOperator {
        &self.moments
    }

    /// Upwinded time derivative of the point value at interface `i`.
    pub fn point_rhs(&self, state: &State, mesh: &Mesh, i: usize) -> f64 {
        let a = self.flux().f_prime(state.pt[i]);
        let mut acc = 0.0;
        if a > 0.0 {
            acc += a * self.stencil.apply_left(state, i);
        }
        if a < 0.0 {
            acc += a * self.stencil.apply_right(state, i);
        }
        -acc / mesh.dx()
    }

    /// Full semi-discrete right-hand side.
    pub fn rhs(&self, state: &State, mesh: &Mesh) -> State {
        let mut out = State::zeros(state.degree, state.cells());
        out.t = state.t;
        self.moments
            .fill_moment_rhs(state, mesh, &mut out, self.fast_linear);
        for i in 0..state.cells() {
            out.pt[i] = self.point_rhs(state, mesh, i);
        }
        out
    }

    pub fn step(&self, state: &State, mesh: &Mesh, dt: f64) -> Result<State> {
        let mut next = ssp_rk3_step(state, dt, |u| self.rhs(u, mesh))?;
        next.t = state.t + dt;
        Ok(next)
    }

    /// `cfl * dx / max_i |f'(q_{i+1/2})|`, or `cfl * dx` if every speed vanishes.
    pub fn time_step(&self, state: &State, mesh: &Mesh, cfl: f64) -> f64 {
        stable_dt(self.flux(), state, mesh, cfl)
    }

    /// Advances to `t_end`, clipping the last step.
    pub fn run(&self, state: State, mesh: &Mesh, cfl: f64, t_end: f64) -> Result<State> {
        advance(state, t_end, |s| {
            let dt = self.time_step(s, mesh, cfl);
            (dt, self.step_clipped(s, mesh, dt, t_end))
        })
    }

    fn step_clipped(&self, s: &State, mesh: &Mesh, dt: f64, t_end: f64) -> Result<State> {
        let dt = clip(s.t, dt, t_end);
        self.step(s, mesh, dt).map(|mut n| {
            if n.t > t_end - 1e-14 * t_end.abs().max(1.0) {
                n.t = t_end;
            }
            n
        })
    }
}

pub(crate) fn stable_dt(flux: Flux, state: &State, mesh: &Mesh, cfl: f64) -> f64 {
    let speed = state
        .pt
        .iter()
        .fold(0.0f64, |m, &q| m.max(flux.f_prime(q).abs()));
    if speed > 0.0 {
        cfl * mesh.dx() / speed
    } else {
        cfl * mesh.dx()
    }
}

pub(crate) fn clip(t: f64, dt: f64, t_end: f64) -> f64 {
    if t + dt >= t_end || t_end - (t + dt) < 1e-12 * dt {
        t_end - t
    } else {
        dt
    }
}

/// Repeats `step` until `t_end` is reached. `step` returns the nominal step
/// size and the advanced state.
pub(crate) fn advance(
    mut state: State,
    t_end: f64,
    mut step: impl FnMut(&State) -> (f64, Result<State>),
) -> Result<State> {
    if t_end < 0.0 || !t_end.is_finite() {
        return Err(Error::Config(format!("invalid final time {t_end}")));
    }
    let mut steps = 0usize;
    while state.t < t_end {
        let (dt, next) = step(&state);
        if !(dt > 0.0) {
            return Err(Error::Config(format!("non-positive time step {dt}")));
        }
        state = match next {
            Ok(s) => s,
            Err(Error::NonFinite { .. }) => return Err(Error::Unstable { steps }),
            Err(e) => return Err(e),
        };
        if !state.is_finite() {
            return Err(Error::Unstable { steps });
        }
        steps += 1;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_two_stencil() {
        let st = FdStencil::new(&BasisSet::new(2).unwrap());
        let d = st.coeffs_d();
        let want = [2.0, -6.0, 4.0, 0.0, 0.0];
        for (a, b) in d.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let ds = st.coeffs_dstar();
        let want = [0.0, 0.0, -4.0, 6.0, -2.0];
        for (a, b) in ds.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn stencil_exact_on_linear_and_constant() {
        let basis = BasisSet::new(2).unwrap();
        let st = FdStencil::new(&basis);
        // q = xi + 1/2 in cell 0: dofs (+1/2, -1/2, avg) = (1, 0, 1/2)
        let d: f64 = st
            .left_biased
            .iter()
            .zip([1.0, 0.0, 0.5])
            .map(|(a, b)| a * b)
            .sum();
        assert!((d - 1.0).abs() < 1e-13);
        let st3 = FdStencil::new(&BasisSet::new(3).unwrap());
        let d: f64 = st3
            .left_biased
            .iter()
            .zip([1.0, 1.0, 1.0, 0.0])
            .map(|(a, b)| a * b)
            .sum();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn upwind_direction() {
        let mesh = Mesh::new(0.0, 1.0, 6).unwrap();
        let basis = BasisSet::new(3).unwrap();
        let q0 = |x: f64| (2.0 * std::f64::consts::PI * x).sin() + 0.3;
        let st = State::project(q0, &mesh, &basis);
        let pos = MethodA::new(basis.clone(), Flux::Advection { c: 2.0 }).unwrap();
        let neg = MethodA::new(basis.clone(), Flux::Advection { c: -2.0 }).unwrap();
        for i in 0..6 {
            let d = pos.stencil().apply_left(&st, i) / mesh.dx();
            let ds = pos.stencil().apply_right(&st, i) / mesh.dx();
            assert!((pos.point_rhs(&st, &mesh, i) + 2.0 * d).abs() < 1e-12);
            assert!((neg.point_rhs(&st, &mesh, i) - 2.0 * ds).abs() < 1e-12);
        }
    }

    #[test]
    fn sonic_interface_has_zero_rhs() {
        let mesh = Mesh::new(-1.0, 1.0, 8).unwrap();
        let basis = BasisSet::new(4).unwrap();
        let st = State::project(|x| (3.0 * x).sin(), &mesh, &basis);
        let a = MethodA::new(basis, Flux::Burgers).unwrap();
        // interface 3 sits at x = 0
        assert!(st.pt[3].abs() < 1e-15);
        assert_eq!(a.point_rhs(&st, &mesh, 3), 0.0);
    }

    #[test]
    fn rk3_growth_factor() {
        for z in [-0.5, 0.3, -2.0, 1.0] {
            let lambda = 3.0;
            let dt = z / lambda;
            let u = ssp_rk3_step(&1.0, dt, |u| lambda * u).unwrap();
            let want = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
            assert!((u - want).abs() < 1e-14);
        }
        assert_eq!(ssp_rk3_step(&2.5, 0.1, |_| 0.0).unwrap(), 2.5);
    }

    #[test]
    fn rk3_reports_stage() {
        let err = ssp_rk3_step(&1.0, 1.0, |u| if *u > 1.5 { f64::NAN } else { 1.0 }).unwrap_err();
        assert!(matches!(err, Error::NonFinite { stage: 2 }));
    }

    #[test]
    fn constant_state_stays_constant() {
        let mesh = Mesh::new(0.0, 1.0, 5).unwrap();
        for flux in [Flux::Advection { c: 1.0 }, Flux::Burgers] {
            let basis = BasisSet::new(4).unwrap();
            let st = State::project(|_| 0.8, &mesh, &basis);
            let a = MethodA::new(basis, flux).unwrap();
            let out = a.run(st.clone(), &mesh, 0.1, 0.37).unwrap();
            assert_eq!(out.t, 0.37);
            for (x, y) in out
                .pt
                .iter()
                .chain(&out.mom)
                .zip(st.pt.iter().chain(&st.mom))
            {
                assert!((x - y).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn zero_speed_fallback() {
        let mesh = Mesh::new(0.0, 1.0, 4).unwrap();
        let basis = BasisSet::new(2).unwrap();
        let a = MethodA::new(basis, Flux::Burgers).unwrap();
        let st = State::zeros(2, 4);
        assert_eq!(a.time_step(&st, &mesh, 0.5), 0.5 * 0.25);
    }
}
