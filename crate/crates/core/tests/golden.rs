mod common;

use activeflux::basis::{monomial_moment, Dof};
use activeflux::quadrature::{gauss_legendre, gauss_lobatto, Interval};
use activeflux::{BasisSet, FdStencil};
use common::{exact_moment_integral, golden_fd, golden_shapes, golub_welsch, poly_eval};

#[test]
fn shape_functions_match_closed_forms() {
    for degree in 2..=6 {
        let basis = BasisSet::new(degree).unwrap();
        for (r, want) in golden_shapes(degree).iter().enumerate() {
            let got = &basis.shapes()[r].coeffs;
            assert_eq!(got.len(), degree + 1);
            for j in 0..=degree {
                let w = want.get(j).copied().unwrap_or(0.0);
                assert!(
                    (got[j] - w).abs() <= 1e-12,
                    "N={degree} r={r} xi^{j}: {} vs {w}",
                    got[j]
                );
            }
        }
    }
}

#[test]
fn golden_shapes_are_dual_to_the_moments() {
    // checks the hand-expanded data itself, independently of the library
    for degree in 2..=6 {
        let shapes = golden_shapes(degree);
        for (s, b) in shapes.iter().enumerate() {
            let mut sigma = vec![poly_eval(b, 0.5), poly_eval(b, -0.5)];
            for k in 0..degree - 1 {
                let norm = ((k + 1) as f64) * 2f64.powi(k as i32);
                sigma.push(norm * exact_moment_integral(b, k));
            }
            for (r, v) in sigma.iter().enumerate() {
                let want = if r == s { 1.0 } else { 0.0 };
                assert!(
                    (v - want).abs() < 1e-11,
                    "N={degree} sigma_{r}(B_{s}) = {v}"
                );
            }
        }
    }
}

#[test]
fn moment_of_xi_uses_weight_four() {
    let basis = BasisSet::new(3).unwrap();
    let xi = activeflux::Polynomial::new(vec![0.0, 1.0]);
    assert!((basis.moment_functional(1, &xi) - 1.0 / 3.0).abs() < 1e-15);
    assert!((monomial_moment(2, 0) - 1.0).abs() < 1e-15);
    assert!((monomial_moment(4, 0) - 1.0).abs() < 1e-15);
}

#[test]
fn fd_stencils_match_known_rationals() {
    for degree in 2..=6 {
        let st = FdStencil::new(&BasisSet::new(degree).unwrap());
        let (d, ds) = golden_fd(degree);
        for (got, want) in st
            .coeffs_d()
            .iter()
            .zip(&d)
            .chain(st.coeffs_dstar().iter().zip(&ds))
        {
            // every weight is a multiple of 1/4
            assert_eq!((got * 4.0).round() / 4.0, *want, "N={degree}");
            assert!((got - want).abs() < 1e-10, "N={degree}: {got} vs {want}");
        }
    }
}

#[test]
fn fd_weights_annihilate_constants_and_differentiate_linear_data() {
    for degree in 2..=6 {
        let basis = BasisSet::new(degree).unwrap();
        let st = FdStencil::new(&basis);
        let apply = |w: &[f64], v: &[f64]| -> f64 { w.iter().zip(v).map(|(a, b)| a * b).sum() };
        let one = basis.functionals(&activeflux::Polynomial::constant(1.0));
        let lin = basis.functionals(&activeflux::Polynomial::new(vec![0.0, 1.0]));
        assert!(apply(&st.left_biased, &one).abs() < 1e-10);
        assert!(apply(&st.right_biased, &one).abs() < 1e-10);
        assert!((apply(&st.left_biased, &lin) - 1.0).abs() < 1e-10);
        assert!((apply(&st.right_biased, &lin) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn endpoint_shape_relations() {
    // B_{-1/2}(xi) = B_{1/2}(-xi)
    for degree in 2..=6 {
        let b = BasisSet::new(degree).unwrap();
        for j in 0..=10 {
            let xi = -0.5 + j as f64 / 10.0;
            let l = b.shape(Dof::MinusHalf).eval(xi);
            let r = b.shape(Dof::PlusHalf).eval(-xi);
            assert!((l - r).abs() < 1e-11);
        }
    }
}

#[test]
fn gauss_legendre_agrees_with_golub_welsch() {
    for n in 1..=20 {
        let rule = gauss_legendre(n, Interval::UnitCell).unwrap();
        let (x, w) = golub_welsch(n);
        for i in 0..n {
            assert!((rule.nodes[i] - x[i]).abs() < 1e-13, "n={n}");
            assert!((rule.weights[i] - w[i]).abs() < 1e-13, "n={n}");
        }
    }
}

#[test]
fn lobatto_integrates_against_reference_rule() {
    let (x, w) = golub_welsch(50);
    let f = |t: f64| (3.0 * t).cos() * (1.0 + t).ln();
    let reference: f64 = x.iter().zip(&w).map(|(x, w)| w * f(*x)).sum();
    let lob = gauss_lobatto(14, Interval::UnitCell).unwrap();
    assert!((lob.integrate(f) - reference).abs() < 1e-13);
    let time = gauss_lobatto(5, Interval::UnitTime).unwrap();
    assert_eq!(time.nodes[0], 0.0);
    assert_eq!(*time.nodes.last().unwrap(), 1.0);
    assert!((time.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
}
