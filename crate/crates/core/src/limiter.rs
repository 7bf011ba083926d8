//! Detection of spurious oscillations inside a cell.
//!
//! The reconstruction is sampled at ten equispaced interior points. If any
//! sample leaves the range spanned by the cell average and the two endpoint
//! values, the fallback replaces the reconstruction. The default fallback drops
//! all moments above the average, leaving the parabola through both point
//! values with the correct mean.

use std::fmt;
use std::sync::Arc;

use crate::basis::{monomial_moment, BasisSet};

pub const TEST_POINTS: usize = 10;

/// Bounds of a cell: min and max of the average and both point values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellBounds {
    pub lo: f64,
    pub hi: f64,
}

impl CellBounds {
    /// `dofs` in cell dof order.
    pub fn of(dofs: &[f64]) -> Self {
        let (a, b, c) = (dofs[0], dofs[1], dofs[2]);
        Self {
            lo: a.min(b).min(c),
            hi: a.max(b).max(c),
        }
    }

    fn contains(&self, v: f64) -> bool {
        let eps = 1e-12 * self.hi.abs().max(1.0);
        v >= self.lo - eps && v <= self.hi + eps
    }
}

/// Replacement reconstruction for a flagged cell. Must not touch the average or
/// the point values.
pub trait Fallback: Send + Sync {
    fn apply(&self, dofs: &mut [f64]);
}

/// Degree-2 reconstruction with the cell's average and endpoint values.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParabolaFallback;

impl ParabolaFallback {
    /// Monomial coefficients of the parabola with `p(1/2) = right`,
    /// `p(-1/2) = left` and mean `avg`.
    pub fn parabola(right: f64, left: f64, avg: f64) -> [f64; 3] {
        let c = 3.0 * (right + left) - 6.0 * avg;
        [avg - c / 12.0, right - left, c]
    }
}

impl Fallback for ParabolaFallback {
    fn apply(&self, dofs: &mut [f64]) {
        let p = Self::parabola(dofs[0], dofs[1], dofs[2]);
        for (k, m) in dofs.iter_mut().enumerate().skip(3) {
            let k = k - 2;
            *m = p
                .iter()
                .enumerate()
                .map(|(j, c)| c * monomial_moment(k, j))
                .sum();
        }
    }
}

#[derive(Clone)]
pub struct Limiter {
    /// `shape_at_points[j][r] = B_r(-1/2 + (j + 1) / 11)`
    shape_at_points: Vec<Vec<f64>>,
    fallback: Arc<dyn Fallback>,
}

impl fmt::Debug for Limiter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Limiter")
            .field("test_points", &self.shape_at_points.len())
            .finish_non_exhaustive()
    }
}

impl Limiter {
    pub fn new(basis: &BasisSet) -> Self {
        Self::with_fallback(basis, Arc::new(ParabolaFallback))
    }

    pub fn with_fallback(basis: &BasisSet, fallback: Arc<dyn Fallback>) -> Self {
        let points: Vec<f64> = (1..=TEST_POINTS)
            .map(|j| -0.5 + j as f64 / (TEST_POINTS + 1) as f64)
            .collect();
        Self {
            shape_at_points: basis.tabulate(&points),
            fallback,
        }
    }

    /// True if the reconstruction of `dofs` leaves its cell bounds at one of
    /// the test points.
    pub fn detects(&self, dofs: &[f64]) -> bool {
        if dofs.len() <= 3 {
            // the parabola is never replaced here
            return false;
        }
        let bounds = CellBounds::of(dofs);
        self.shape_at_points.iter().any(|row| {
            let v: f64 = row.iter().zip(dofs).map(|(b, a)| b * a).sum();
            !bounds.contains(v)
        })
    }

    /// Limits `dofs` in place; returns whether the fallback fired.
    pub fn limit_cell(&self, dofs: &mut [f64]) -> bool {
        let flagged = self.detects(dofs);
        if flagged {
            self.fallback.apply(dofs);
        }
        flagged
    }
}
