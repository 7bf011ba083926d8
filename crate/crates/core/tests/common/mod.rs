//! Independent oracles and golden data shared by the integration tests.
#![allow(dead_code)]

use activeflux::basis::monomial_integral;
use activeflux::{BasisSet, Flux, Mesh, State};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

/// Product of polynomials given as ascending coefficient lists.
pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn product(scale: f64, factors: &[&[f64]]) -> Vec<f64> {
    let mut acc = vec![scale];
    for f in factors {
        acc = poly_mul(&acc, f);
    }
    acc
}

pub fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// Closed-form shape functions in dof order `(B_{1/2}, B_{-1/2}, B_0, ...)`,
/// expanded from their factored form.
pub fn golden_shapes(degree: usize) -> Vec<Vec<f64>> {
    const P: &[f64] = &[1.0, 2.0]; // 1 + 2 xi
    const M: &[f64] = &[-1.0, 2.0]; // -1 + 2 xi
    const X: &[f64] = &[0.0, 1.0];
    let bubble0_n2 = product(-1.5, &[M, P]);
    let b1_n3 = product(-7.5, &[X, M, P]);
    let b0_n4 = product(15.0 / 16.0, &[M, P, &[-3.0, 0.0, 28.0]]);
    let b2_n4 = product(-35.0 / 16.0, &[M, P, &[-1.0, 0.0, 20.0]]);
    let b1_n5 = product(105.0 / 16.0, &[X, M, P, &[-5.0, 0.0, 36.0]]);
    let b3_n5 = product(-315.0 / 32.0, &[X, M, P, &[-3.0, 0.0, 28.0]]);
    match degree {
        2 => vec![
            product(0.25, &[P, &[-1.0, 6.0]]),
            product(0.25, &[M, &[1.0, 6.0]]),
            bubble0_n2,
        ],
        3 => vec![
            product(0.25, &[P, &[-1.0, -4.0, 20.0]]),
            product(-0.25, &[M, &[-1.0, 4.0, 20.0]]),
            bubble0_n2,
            b1_n3,
        ],
        4 => vec![
            product(1.0 / 16.0, &[P, &[3.0, -30.0, -60.0, 280.0]]),
            product(1.0 / 16.0, &[M, &[-3.0, -30.0, 60.0, 280.0]]),
            b0_n4,
            b1_n3,
            b2_n4,
        ],
        5 => vec![
            product(1.0 / 16.0, &[P, &[3.0, 24.0, -168.0, -224.0, 1008.0]]),
            product(-1.0 / 16.0, &[M, &[3.0, -24.0, -168.0, 224.0, 1008.0]]),
            b0_n4,
            b1_n5,
            b2_n4,
            b3_n5,
        ],
        6 => vec![
            product(
                1.0 / 32.0,
                &[P, &[-5.0, 70.0, 280.0, -1680.0, -1680.0, 7392.0]],
            ),
            product(
                1.0 / 32.0,
                &[M, &[5.0, 70.0, -280.0, -1680.0, 1680.0, 7392.0]],
            ),
            product(-105.0 / 128.0, &[M, P, &[5.0, 0.0, -120.0, 0.0, 528.0]]),
            b1_n5,
            product(105.0 / 64.0, &[M, P, &[5.0, 0.0, -232.0, 0.0, 1232.0]]),
            b3_n5,
            product(-693.0 / 128.0, &[M, P, &[1.0, 0.0, -56.0, 0.0, 336.0]]),
        ],
        _ => panic!("no closed-form shape functions for degree {degree}"),
    }
}

/// Known `dx * D` and `dx * D*` over
/// `(q_{i-1/2}, q_i^(0..), q_{i+1/2}, q_{i+1}^(0..), q_{i+3/2})`.
pub fn golden_fd(degree: usize) -> (Vec<f64>, Vec<f64>) {
    let (d, ds): (Vec<f64>, Vec<f64>) = match degree {
        2 => (
            vec![2.0, -6.0, 4.0, 0.0, 0.0],
            vec![0.0, 0.0, -4.0, 6.0, -2.0],
        ),
        3 => (
            vec![-3.0, -6.0, -15.0, 9.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, -9.0, 6.0, -15.0, 3.0],
        ),
        4 => (
            vec![4.0, 15.0, -15.0, -35.0, 16.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, -16.0, -15.0, -15.0, 35.0, -4.0],
        ),
        5 => (
            vec![
                -5.0, 15.0, 52.5, -35.0, -78.75, 25.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            ],
            vec![
                0.0, 0.0, 0.0, 0.0, 0.0, -25.0, -15.0, 52.5, 35.0, -78.75, 5.0,
            ],
        ),
        6 => (
            vec![
                6.0, -26.25, 52.5, 157.5, -78.75, -173.25, 36.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            ],
            vec![
                0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -36.0, 26.25, 52.5, -157.5, -78.75, 173.25, -6.0,
            ],
        ),
        _ => panic!("no known stencil for degree {degree}"),
    };
    (d, ds)
}

/// Gauss-Legendre rule on `[-1/2, 1/2]` by the Golub-Welsch eigenvalue method.
pub fn golub_welsch(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            // weights on [-1,1] sum to 2; halve for the unit cell
            (0.5 * eig.eigenvalues[i], v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// Moment time derivative of cell `i` with an `n`-point Golub-Welsch rule,
/// built directly from the weak form of `q_t + f(q)_x = 0`.
pub fn reference_moment_rhs(
    state: &State,
    mesh: &Mesh,
    basis: &BasisSet,
    flux: Flux,
    i: usize,
    k: usize,
    n: usize,
) -> f64 {
    let (nodes, weights) = golub_welsch(n);
    let recon = basis.reconstruct(&state.cell_dofs(i));
    let scale = ((k + 1) as f64) * 2f64.powi(k as i32);
    let right = flux.f(state.pt[i]) * 0.5f64.powi(k as i32);
    let left = flux.f(state.left_pt(i)) * (-0.5f64).powi(k as i32);
    let mut volume = 0.0;
    if k > 0 {
        for (x, w) in nodes.iter().zip(&weights) {
            volume += w * flux.f(recon.eval(*x)) * k as f64 * x.powi(k as i32 - 1);
        }
    }
    scale * (volume - (right - left)) / mesh.dx()
}

/// Smooth random state: random point values and moments of bounded size.
pub fn random_state(rng: &mut impl Rng, degree: usize, cells: usize, amplitude: f64) -> State {
    let mut s = State::zeros(degree, cells);
    for v in s.pt.iter_mut().chain(s.mom.iter_mut()) {
        *v = amplitude * rng.gen_range(-1.0..1.0);
    }
    s
}

/// Random trigonometric profile with a few low modes, each of size at most
/// `amplitude / 2`. Its slope is bounded by `7 pi amplitude`.
pub fn random_smooth_profile(rng: &mut impl Rng, amplitude: f64) -> impl Fn(f64) -> f64 + Copy {
    let a: [f64; 4] = std::array::from_fn(|_| amplitude * rng.gen_range(-0.5..0.5));
    let base = rng.gen_range(0.5..1.5);
    move |x: f64| {
        let tau = std::f64::consts::TAU;
        base + a[0] * (tau * x).sin()
            + a[1] * (tau * x).cos()
            + a[2] * (2.0 * tau * x).sin()
            + a[3] * (3.0 * tau * x).cos()
    }
}

/// Exact solution of Burgers' equation before breaking: `q = q0(x - q t)`
/// solved for the foot point by bisection on a bracket of width `max q0 * t`.
pub fn burgers_exact(q0: impl Fn(f64) -> f64, x: f64, t: f64, qmin: f64, qmax: f64) -> f64 {
    // g(y) = y + q0(y) t - x is increasing while t < breaking time
    let g = |y: f64| y + q0(y) * t - x;
    let (mut lo, mut hi) = (x - qmax * t - 1e-12, x - qmin * t + 1e-12);
    assert!(g(lo) <= 0.0 && g(hi) >= 0.0, "foot point not bracketed");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    q0(0.5 * (lo + hi))
}

/// `int_{-1/2}^{1/2} p(xi) xi^k` from monomial coefficients.
pub fn exact_moment_integral(coeffs: &[f64], k: usize) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c * monomial_integral(j + k))
        .sum()
}
