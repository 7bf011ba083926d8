//! Dual shape functions of the hybrid element.
//!
//! Everything here lives in the dimensionless cell coordinate
//! `xi = (x - x_i) / dx` on `[-1/2, 1/2]`. The degrees of freedom of a cell are
//! the two endpoint values and `N - 1` moments
//!
//! ```text
//! sigma_k(v) = (k + 1) 2^k * int_{-1/2}^{1/2} v(xi) xi^k dxi,   k = 0..N-2
//! ```
//!
//! which is the monomial moment `A_k int v(x) x^k dx` with
//! `A_k = (k + 1) 2^k / dx^(k + 1)` after substituting `x = dx * xi`. The
//! normalization makes every even moment of the constant 1 equal to one and
//! removes `dx` from the element entirely, so a single [`BasisSet`] serves
//! every mesh.
//!
//! The shape functions `B_r` are obtained by inverting the duality matrix
//! `S[r][j] = sigma_r(xi^j)`, i.e. column `s` of `S^{-1}` holds the monomial
//! coefficients of `B_s`. For the monomial moments `S` is rational and is
//! inverted exactly, so every coefficient is the correctly rounded value.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial in `xi`, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * xi + c)
    }

    /// Formal derivative in `xi`. Divide by `dx` for `d/dx`.
    pub fn deriv(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::constant(0.0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| j as f64 * c)
            .collect();
        Polynomial { coeffs }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial { coeffs }
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self + s * other`
    pub fn add_scaled(&mut self, s: f64, other: &Polynomial) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }
}

/// `int_{-1/2}^{1/2} xi^p dxi`
#[inline]
pub fn monomial_integral(p: usize) -> f64 {
    if p % 2 == 1 {
        0.0
    } else {
        0.5f64.powi(p as i32) / (p + 1) as f64
    }
}

/// Normalization `(k + 1) 2^k` of the k-th moment in `xi`-coordinates.
#[inline]
pub fn moment_normalization(k: usize) -> f64 {
    (k + 1) as f64 * 2f64.powi(k as i32)
}

/// `sigma_k(xi^j)` for the monomial moment family.
pub fn monomial_moment(k: usize, j: usize) -> f64 {
    moment_normalization(k) * monomial_integral(j + k)
}

/// Label of a cell degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dof {
    /// Value at the right endpoint `xi = +1/2`.
    PlusHalf,
    /// Value at the left endpoint `xi = -1/2`.
    MinusHalf,
    Moment(usize),
}

impl Dof {
    /// Position in the cell dof vector `(a_{+1/2}, a_{-1/2}, a_0, ..., a_{N-2})`.
    pub fn index(self) -> usize {
        match self {
            Dof::PlusHalf => 0,
            Dof::MinusHalf => 1,
            Dof::Moment(k) => 2 + k,
        }
    }
}

/// Shape functions `{B_{+1/2}, B_{-1/2}, B_0, ..., B_{N-2}}` of degree `N`.
#[derive(Debug, Clone)]
pub struct BasisSet {
    degree: usize,
    shape: Vec<Polynomial>,
}

impl BasisSet {
    /// Monomial moments with the `(k + 1) 2^k` normalization.
    pub fn new(degree: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Config(format!(
                "basis degree must be >= 2, got {degree}"
            )));
        }
        let n = degree + 1;
        let half = |p: usize| BigRational::new(BigInt::one(), BigInt::from(2u32).pow(p as u32));
        let mut s = vec![vec![BigRational::zero(); n]; n];
        for j in 0..n {
            s[0][j] = half(j);
            s[1][j] = if j % 2 == 0 { half(j) } else { -half(j) };
            for k in 0..degree - 1 {
                if (j + k) % 2 == 0 {
                    // (k + 1) 2^k * 2^-(j+k) / (j + k + 1)
                    s[2 + k][j] =
                        half(j) * BigRational::new(BigInt::from(k + 1), BigInt::from(j + k + 1));
                }
            }
        }
        let inv = invert_exact(s).ok_or(Error::SingularBasis { degree })?;
        let shape = (0..n)
            .map(|col| {
                Polynomial::new(
                    (0..n)
                        .map(|row| inv[row][col].to_f64().unwrap_or(f64::NAN))
                        .collect(),
                )
            })
            .collect();
        Ok(Self { degree, shape })
    }

    /// Builds the dual basis for an arbitrary moment family.
    ///
    /// `moment(k, j)` must return `sigma_k(xi^j)` for `k = 0..N-2`,
    /// `j = 0..N`.
    pub fn with_moments(degree: usize, moment: impl Fn(usize, usize) -> f64) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Config(format!(
                "basis degree must be >= 2, got {degree}"
            )));
        }
        let n = degree + 1;
        let mut s = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            s[(0, j)] = 0.5f64.powi(j as i32);
            s[(1, j)] = (-0.5f64).powi(j as i32);
            for k in 0..degree - 1 {
                s[(2 + k, j)] = moment(k, j);
            }
        }
        let lu = s.clone().lu();
        let mut inv = lu.try_inverse().ok_or(Error::SingularBasis { degree })?;
        // one sweep of iterative refinement: inv += inv (I - S inv)
        let residual = DMatrix::<f64>::identity(n, n) - &s * &inv;
        inv += &inv * residual;

        let shape = (0..n)
            .map(|col| Polynomial::new(inv.column(col).iter().copied().collect()))
            .collect();
        Ok(Self { degree, shape })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of cell dofs, `N + 1`.
    pub fn ndofs(&self) -> usize {
        self.degree + 1
    }

    /// Number of moments, `N - 1`.
    pub fn nmoments(&self) -> usize {
        self.degree - 1
    }

    pub fn shape(&self, dof: Dof) -> &Polynomial {
        &self.shape[dof.index()]
    }

    pub fn shapes(&self) -> &[Polynomial] {
        &self.shape
    }

    /// `sigma_k(v)` from the coefficients of `v`, exact up to rounding.
    pub fn moment_functional(&self, k: usize, v: &Polynomial) -> f64 {
        assert!(
            k + 2 <= self.degree,
            "moment index {k} out of range for degree {}",
            self.degree
        );
        v.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * monomial_moment(k, j))
            .sum()
    }

    /// All degrees of freedom of `v`, in cell dof order.
    pub fn functionals(&self, v: &Polynomial) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.ndofs());
        out.push(v.eval(0.5));
        out.push(v.eval(-0.5));
        out.extend((0..self.nmoments()).map(|k| self.moment_functional(k, v)));
        out
    }

    /// `sum_r a_r B_r`
    pub fn reconstruct(&self, dofs: &[f64]) -> Polynomial {
        assert_eq!(dofs.len(), self.ndofs(), "expected {} dofs", self.ndofs());
        let mut coeffs = vec![0.0; self.ndofs()];
        for (a, b) in dofs.iter().zip(&self.shape) {
            for (c, bc) in coeffs.iter_mut().zip(&b.coeffs) {
                *c += a * bc;
            }
        }
        Polynomial { coeffs }
    }

    /// `table[m][r] = B_r(nodes[m])`, so that `recon(nodes[m]) = table[m] . dofs`.
    pub fn tabulate(&self, nodes: &[f64]) -> Vec<Vec<f64>> {
        nodes
            .iter()
            .map(|&xi| self.shape.iter().map(|b| b.eval(xi)).collect())
            .collect()
    }
}

/// Gauss-Jordan elimination over the rationals.
fn invert_exact(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let da = &factor * &a[col][j];
                let di = &factor * &inv[col][j];
                a[r][j] -= da;
                inv[r][j] -= di;
            }
        }
    }
    Some(inv)
}
