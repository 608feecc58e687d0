mod common;

use approx::assert_relative_eq;
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solitonlab::curvfun::{
    convexity_classify, euler_residuals, lemma23_gaps, matrix_first_derivative, matrix_second_form, Convexity,
    Tolerances,
};
use solitonlab::linalg::sym_eigen;
use solitonlab::Matrix;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn permutation_symmetry(a in 0.2f64..3.0, b in 0.2f64..3.0, c in 0.2f64..3.0) {
        for spec in builtins(3) {
            let f = cf(spec, 3);
            let l = eig(&[a, b, c]);
            let v = f.eval(&l).unwrap();
            for perm in [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]] {
                let w = f.eval(&l.permuted(&perm)).unwrap();
                prop_assert!((w - v).abs() <= 1e-14 * v.abs().max(1.0), "{spec}: {v} vs {w}");
            }
        }
        let f = cf("anisotropy", 2);
        let v = f.eval(&eig(&[a, b])).unwrap();
        prop_assert!((f.eval(&eig(&[b, a])).unwrap() - v).abs() <= 1e-14);
    }

    #[test]
    fn homogeneity(a in 0.2f64..3.0, b in 0.2f64..3.0) {
        let mut specs = builtins(2);
        specs.push("anisotropy");
        for spec in specs {
            let f = cf(spec, 2);
            let l = eig(&[a, b]);
            let v = f.eval(&l).unwrap();
            for t in [0.5, 2.0, 10.0] {
                let w = f.eval(&l.scaled(t)).unwrap();
                let expect = t.powf(f.degree()) * v;
                let scale = t.powf(f.degree()) * v.abs().max(a.max(b).powf(f.degree()));
                prop_assert!((w - expect).abs() <= 1e-12 * scale, "{spec}, t = {t}");
            }
        }
    }
}

#[test]
fn gradient_and_hessian_match_finite_differences() {
    let mut r = rng(11);
    for n in [2, 3] {
        let mut specs = builtins(n);
        if n == 2 {
            specs.push("anisotropy");
        }
        for spec in specs {
            let f = cf(spec, n);
            for _ in 0..50 {
                let l = positive_lambda(&mut r, n);
                let g = f.grad_slice(&l).unwrap();
                let h = f.hess_slice(&l).unwrap();
                let gscale = g.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f.eval_slice(&l).unwrap().abs());
                let hscale = h.max_abs().max(gscale);
                for i in 0..n {
                    let shift = |d: f64| {
                        let mut p = l.clone();
                        p[i] += d;
                        p
                    };
                    let s = 1e-5;
                    let fd = (f.eval_slice(&shift(s)).unwrap() - f.eval_slice(&shift(-s)).unwrap()) / (2.0 * s);
                    assert!((fd - g[i]).abs() < 1e-6 * gscale, "{spec} grad[{i}]: {fd} vs {}", g[i]);
                    let s = 1e-4;
                    let gp = f.grad_slice(&shift(s)).unwrap();
                    let gm = f.grad_slice(&shift(-s)).unwrap();
                    for j in 0..n {
                        let fd = (gp[j] - gm[j]) / (2.0 * s);
                        assert!((fd - h.get(j, i)).abs() < 1e-6 * hscale, "{spec} hess[{j}][{i}]");
                    }
                }
                assert!(h.is_symmetric(1e-14 * hscale));
            }
        }
    }
}

#[test]
fn norm_hessian_at_three_four() {
    let f = cf("norm", 2);
    let h = f.hess_slice(&[3.0, 4.0]).unwrap();
    let s = 1e-5;
    for i in 0..2 {
        let mut p = [3.0, 4.0];
        let mut q = [3.0, 4.0];
        p[i] += s;
        q[i] -= s;
        let gp = f.grad_slice(&p).unwrap();
        let gm = f.grad_slice(&q).unwrap();
        for j in 0..2 {
            assert_relative_eq!((gp[j] - gm[j]) / (2.0 * s), h.get(j, i), max_relative = 1e-6, epsilon = 1e-9);
        }
    }
}

#[test]
fn eigen_solver_matches_nalgebra() {
    let mut r = rng(3);
    for n in [2, 3] {
        for _ in 0..200 {
            let a = random_direction(&mut r, n).scale(3.0);
            let ours = sym_eigen(&a).unwrap();
            let theirs = oracle_eigenvalues(&a);
            for (x, y) in ours.values.iter().zip(&theirs) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
            let back = ours.assemble(&ours.values);
            assert!(back.sub(&a).max_abs() < 1e-12);
        }
    }
}

#[test]
fn first_derivative_matches_directional_difference() {
    let mut r = rng(5);
    for n in [2, 3] {
        for spec in builtins(n) {
            let f = cf(spec, n);
            for _ in 0..20 {
                let l = positive_lambda(&mut r, n);
                let a = random_symmetric(&mut r, &l);
                let b = random_direction(&mut r, n);
                let d = matrix_first_derivative(&f, &a).unwrap();
                let fd = fd_first(&f, &a, &b, 1e-6);
                let exact = d.inner(&b);
                assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0), "{spec}: {fd} vs {exact}");
                assert!(d.is_symmetric(1e-12));
            }
        }
    }
    let f = cf("K", 2);
    let a = Matrix::from_rows(&[&[2.0, 0.5], &[0.5, 3.0]]).unwrap();
    let b = Matrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    let det = |s: f64| a.add(&b.scale(s)).determinant();
    let fd = (det(1e-4) - det(-1e-4)) / 2e-4;
    let exact = matrix_first_derivative(&f, &a).unwrap().inner(&b);
    assert!((fd - exact).abs() < 1e-8 * exact.abs());
}

#[test]
fn first_derivative_is_basis_invariant() {
    let mut r = rng(6);
    for n in [2, 3] {
        for spec in builtins(n) {
            let f = cf(spec, n);
            for _ in 0..20 {
                let l = positive_lambda(&mut r, n);
                let a = random_symmetric(&mut r, &l);
                let q = rotation(&mut r, n);
                let lhs = matrix_first_derivative(&f, &a.congruence(&q)).unwrap();
                let rhs = matrix_first_derivative(&f, &a).unwrap().congruence(&q);
                assert!(lhs.sub(&rhs).max_abs() < 1e-10, "{spec}");
            }
        }
    }
}

#[test]
fn second_form_matches_finite_differences() {
    let mut r = rng(7);
    for n in [2, 3] {
        for spec in builtins(n) {
            let f = cf(spec, n);
            let mut done = 0;
            while done < 20 {
                let l = positive_lambda(&mut r, n);
                let mut sorted = l.clone();
                sorted.sort_by(f64::total_cmp);
                if sorted.windows(2).any(|w| w[1] - w[0] < 1e-3) {
                    continue;
                }
                let a = random_symmetric(&mut r, &l);
                let b = random_direction(&mut r, n);
                let exact = matrix_second_form(&f, &a, &b).unwrap();
                let fd = fd_second(&f, &a, &b, 1e-3);
                let scale = exact.abs().max(f.eval_slice(&l).unwrap().abs() * 1e-3);
                assert!((fd - exact).abs() < 1e-5 * scale, "{spec}: {fd} vs {exact}");
                let t = 1.7;
                let scaled = matrix_second_form(&f, &a, &b.scale(t)).unwrap();
                assert!((scaled - t * t * exact).abs() < 1e-12 * exact.abs().max(1.0));
                done += 1;
            }
        }
    }
}

#[test]
fn euler_relations_hold_for_every_family() {
    let mut r = rng(8);
    let tol = Tolerances::default();
    for n in [2, 3] {
        let mut specs = builtins(n);
        if n == 2 {
            specs.push("anisotropy");
        }
        for spec in specs {
            let f = cf(spec, n);
            for _ in 0..100 {
                let l: Vec<f64> = if spec == "H" {
                    (0..n).map(|_| r.gen_range(-3.0..3.0)).collect()
                } else {
                    positive_lambda(&mut r, n)
                };
                let a = random_symmetric(&mut r, &l);
                let res = euler_residuals(&f, &a, &tol).unwrap();
                let bound = 1e-10 * res.value.abs().max(1.0);
                assert!(res.first <= bound && res.second <= bound, "{spec}: {res:?}");
            }
        }
    }
}

#[test]
fn convexity_classes() {
    let mut r = rng(9);
    let tol = Tolerances::default();
    let samples: Vec<_> = (0..100).map(|_| eig(&positive_lambda(&mut r, 2))).collect();
    assert_eq!(convexity_classify(&cf("geomean", 2), &samples, &tol).unwrap().verdict, Convexity::Concave);
    assert_eq!(convexity_classify(&cf("norm", 2), &samples, &tol).unwrap().verdict, Convexity::Convex);
    let h = convexity_classify(&cf("H", 2), &samples, &tol).unwrap();
    assert!(h.convex && h.concave);
    let near: Vec<_> = (0..20).map(|k| eig(&[1.0 + 0.01 * k as f64, 2.0])).collect();
    assert_eq!(convexity_classify(&cf("K", 2), &near, &tol).unwrap().verdict, Convexity::Neither);
    assert!(convexity_classify(&cf("H", 2), &[], &tol).is_err());
}

#[test]
fn pairing_gaps_have_the_predicted_sign() {
    let mut r = rng(10);
    let tol = Tolerances::default();
    let probe: Vec<_> = (0..100).map(|_| eig(&positive_lambda(&mut r, 2))).collect();
    let class = |s: &str| convexity_classify(&cf(s, 2), &probe, &tol).unwrap();
    let pairs = [("norm", "geomean"), ("H", "geomean"), ("norm", "H")];
    for (convex, concave) in pairs {
        assert!(class(convex).convex && class(concave).concave);
        let (f, g) = (cf(convex, 2), cf(concave, 2));
        for _ in 0..1000 {
            let l = eig(&[r.gen_range(1e-3..5.0), r.gen_range(1e-3..5.0)]);
            assert!(lemma23_gaps(&f, &g, &l).unwrap().nonnegative(1e-12), "{convex}/{concave} at {l:?}");
            assert!(lemma23_gaps(&g, &f, &l).unwrap().nonpositive(1e-12), "{concave}/{convex} at {l:?}");
        }
    }
    let g = lemma23_gaps(&cf("norm", 2), &cf("geomean", 2), &eig(&[1.0, 2.0])).unwrap();
    let expect = 5f64.sqrt() * 3.0 / 2f64.sqrt() - 2.0 * 2f64.sqrt() * 3.0 / 5f64.sqrt();
    assert!((g.second - expect).abs() < 1e-14);
    assert!((g.second - 0.948683298).abs() < 1e-9);
}

#[test]
fn negative_degree_families_are_negative() {
    let mut r = rng(12);
    for spec in ["pow(H,-1)", "pow(sigma2,-2)", "pow(geomean,-0.5)"] {
        let f = cf(spec, 2);
        assert!(f.degree() < 0.0);
        for _ in 0..1000 {
            let l = positive_lambda(&mut r, 2);
            assert!(f.eval_slice(&l).unwrap() < 0.0);
            assert!(f.grad_slice(&l).unwrap().iter().all(|&g| g > 0.0));
        }
    }
}
