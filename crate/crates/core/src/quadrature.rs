//! Gauss-Lobatto and Gauss-Legendre rules on the reference cell and the unit
//! time interval.

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interval {
    /// `[-1/2, 1/2]`, the cell in `xi`-coordinates.
    UnitCell,
    /// `[0, 1]`, a time step in units of `dt`.
    UnitTime,
}

impl Interval {
    fn map(self, x: f64) -> f64 {
        match self {
            Interval::UnitCell => 0.5 * x,
            Interval::UnitTime => 0.5 * x + 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre polynomials `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let next = ((2 * k - 1) as f64 * x * p - (k - 1) as f64 * p_prev) / k as f64;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// `n`-point Gauss-Lobatto rule (`n >= 2`), endpoints included.
///
/// Interior nodes are the roots of `P'_{n-1}`, found by Newton iteration on
/// `x P_{n-1} - P_{n-2}` from the Chebyshev-Gauss-Lobatto points. Weights are
/// `2 / (n (n - 1) P_{n-1}(x)^2)` on `[-1, 1]`.
pub fn gauss_lobatto(n: usize, interval: Interval) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::Config(format!(
            "Gauss-Lobatto needs at least 2 nodes, got {n}"
        )));
    }
    let deg = n - 1;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 0..n {
        let mut x = -(std::f64::consts::PI * j as f64 / deg as f64).cos();
        if j != 0 && j != deg {
            let mut converged = false;
            for _ in 0..NEWTON_MAX_ITER {
                let (p, p_prev) = legendre_pair(deg, x);
                let dx = (x * p - p_prev) / (n as f64 * p);
                x -= dx;
                if dx.abs() < NEWTON_TOL {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::QuadratureNotConverged { nodes: n });
            }
        }
        let (p, _) = legendre_pair(deg, x);
        nodes.push(x);
        weights.push(2.0 / (n as f64 * deg as f64 * p * p));
    }
    // enforce exact symmetry
    for j in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - j] - nodes[j]);
        let w = 0.5 * (weights[j] + weights[n - 1 - j]);
        nodes[j] = -x;
        nodes[n - 1 - j] = x;
        weights[j] = w;
        weights[n - 1 - j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes: nodes.into_iter().map(|x| interval.map(x)).collect(),
        weights: weights.into_iter().map(|w| 0.5 * w).collect(),
    })
}

/// `n`-point Gauss-Legendre rule on the given interval.
pub fn gauss_legendre(n: usize, interval: Interval) -> Result<QuadratureRule> {
    if n < 1 {
        return Err(Error::Config("Gauss-Legendre needs at least 1 node".into()));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev) = legendre_pair(n, x);
            dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureNotConverged { nodes: n });
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(QuadratureRule {
        nodes: nodes.into_iter().map(|x| interval.map(x)).collect(),
        weights: weights.into_iter().map(|w| 0.5 * w).collect(),
    })
}

/// Space rule size for a flux that is a polynomial of degree `flux_degree` in
/// `q`: the smallest Lobatto rule that integrates `f(recon) xi^{k-1}` exactly
/// for every moment, and never fewer than `N + 1` nodes.
pub fn space_nodes(degree: usize, flux_degree: usize) -> usize {
    let needed = ((flux_degree + 1) * degree).div_ceil(2);
    needed.max(degree + 1)
}

/// Time rule size: `max(3, ceil((N + 3) / 2))` Lobatto nodes, exact to degree >= N.
pub fn time_nodes(degree: usize) -> usize {
    (degree + 3).div_ceil(2).max(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_cell(d: usize) -> f64 {
        if d % 2 == 1 {
            0.0
        } else {
            0.5f64.powi(d as i32) / (d + 1) as f64
        }
    }

    #[test]
    fn trapezoid_and_simpson() {
        let r = gauss_lobatto(2, Interval::UnitCell).unwrap();
        assert_eq!(r.nodes, vec![-0.5, 0.5]);
        assert_eq!(r.weights, vec![0.5, 0.5]);
        let r = gauss_lobatto(3, Interval::UnitCell).unwrap();
        assert_eq!(r.nodes, vec![-0.5, 0.0, 0.5]);
        for (w, want) in r.weights.iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
            assert!((w - want).abs() < 1e-15);
        }
        assert!((r.integrate(|x| x * x) - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn four_point_inner_nodes() {
        let r = gauss_lobatto(4, Interval::UnitCell).unwrap();
        let inner = 1.0 / (2.0 * 5f64.sqrt());
        assert!((r.nodes[1] + inner).abs() < 1e-15);
        assert!((r.nodes[2] - inner).abs() < 1e-15);
    }

    #[test]
    fn lobatto_exactness_sweep() {
        for n in 2..=8 {
            let r = gauss_lobatto(n, Interval::UnitCell).unwrap();
            let t = gauss_lobatto(n, Interval::UnitTime).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!((t.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert_eq!((t.nodes[0], t.nodes[n - 1]), (0.0, 1.0));
            for d in 0..=2 * n - 3 {
                let got = r.integrate(|x| x.powi(d as i32));
                assert!((got - exact_cell(d)).abs() < 1e-12, "n={n} d={d}");
                let got = t.integrate(|x| x.powi(d as i32));
                assert!((got - 1.0 / (d + 1) as f64).abs() < 1e-12, "n={n} d={d}");
            }
            for j in 0..n {
                assert_eq!(r.nodes[j], -r.nodes[n - 1 - j]);
                assert_eq!(r.weights[j], r.weights[n - 1 - j]);
            }
        }
    }

    #[test]
    fn odd_power_vanishes() {
        for n in 2..=7 {
            let r = gauss_lobatto(n + 1, Interval::UnitCell).unwrap();
            assert!(r.integrate(|x| x.powi(2 * n as i32 - 1)).abs() < 1e-16);
        }
    }

    #[test]
    fn legendre_exactness() {
        for n in [1, 5, 12, 50] {
            let r = gauss_legendre(n, Interval::UnitCell).unwrap();
            for d in 0..2 * n {
                let got = r.integrate(|x| x.powi(d as i32));
                assert!((got - exact_cell(d)).abs() < 1e-14, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn rule_sizes() {
        assert_eq!(space_nodes(3, 1), 4);
        assert_eq!(time_nodes(3), 3);
        assert_eq!(
            (2..=6).map(time_nodes).collect::<Vec<_>>(),
            vec![3, 3, 4, 4, 5]
        );
        assert_eq!(
            (2..=6).map(|n| space_nodes(n, 2)).collect::<Vec<_>>(),
            vec![3, 5, 6, 8, 9]
        );
    }

    #[test]
    fn too_few_nodes() {
        assert!(gauss_lobatto(1, Interval::UnitCell).is_err());
    }
}
