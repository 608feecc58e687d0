//! Randomized identity checks. Every row reports the worst normalized residual
//! of one identity over its samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use solitonlab::curvfun::{eval_matrix, euler_residuals, lemma23_gaps, matrix_first_derivative, matrix_second_form, Tolerances};
use solitonlab::hypersurface::{codazzi_residual, lemma31_residual, DiscreteHypersurface};
use solitonlab::linalg::sym_eigen;
use solitonlab::soliton::{
    binding_root, geodesic_sphere_samples, pinching_quadratics, residual_field, solve_sphere_radius, sphere_tau,
    threshold_2iii,
};
use solitonlab::spaceform::SpaceFormParams;
use solitonlab::{CurvatureFn, Eigenvalues, Matrix};

use super::{parse_f, Context};
use crate::config::{ExperimentConfig, IdentitySuiteConfig};
use crate::output::{ensure_dir, write_config, write_csv};
use crate::{usage, Status};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    fn new(name: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_residual,
            tolerance,
            pass: max_residual < tolerance,
        }
    }
}

/// Built-in families exercised in dimension `n`.
pub fn families(n: usize) -> Vec<&'static str> {
    let mut v = vec!["H", "K", "norm", "geomean", "pow(H,-1)", "pow(K,0.5)", "pow(norm,3)"];
    if n >= 2 {
        v.extend(["sigma2", "pow(sigma2,-2)"]);
    }
    match n {
        2 => v.push("anisotropy"),
        3 => v.push("sigma3"),
        _ => {}
    }
    v
}

/// Random symmetric matrix with eigenvalues `lambda` in a random orthonormal basis.
pub fn random_symmetric(rng: &mut ChaCha8Rng, lambda: &[f64]) -> anyhow::Result<Matrix> {
    Ok(Matrix::from_diag(lambda).congruence(&random_rotation(rng, lambda.len())?))
}

/// Eigenvector matrix of a random symmetric matrix.
pub fn random_rotation(rng: &mut ChaCha8Rng, n: usize) -> anyhow::Result<Matrix> {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let v = rng.gen_range(-1.0..1.0);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    Ok(sym_eigen(&m)?.vectors)
}

/// Random symmetric direction of unit Frobenius norm.
pub fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let v = rng.gen_range(-1.0..1.0);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    let norm = m.frobenius_norm();
    m.scale(1.0 / norm)
}

/// Positive eigenvalues with pairwise gaps above `gap`.
pub fn spread_lambda(rng: &mut ChaCha8Rng, n: usize, gap: f64) -> Vec<f64> {
    loop {
        let l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
        let ok = (0..n).all(|i| (i + 1..n).all(|j| (l[i] - l[j]).abs() > gap));
        if ok {
            return l;
        }
    }
}

/// Five-point second difference of `s ↦ F(A + sB)` at `s = 0`.
pub fn fd_second_form(f: &CurvatureFn, a: &Matrix, b: &Matrix, h: f64) -> anyhow::Result<f64> {
    let at = |s: f64| eval_matrix(f, &a.add(&b.scale(s)));
    Ok((-at(2.0 * h)? + 16.0 * at(h)? - 30.0 * at(0.0)? + 16.0 * at(-h)? - at(-2.0 * h)?) / (12.0 * h * h))
}

fn euler_rows(rng: &mut ChaCha8Rng, samples: usize, rows: &mut Vec<CheckRow>) -> anyhow::Result<()> {
    let tol = Tolerances::default();
    for n in [2, 3] {
        for spec in families(n) {
            let f = parse_f(spec, n)?;
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let l: Vec<f64> = if spec == "H" {
                    (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect()
                } else {
                    (0..n).map(|_| rng.gen_range(0.2..3.0)).collect()
                };
                let a = random_symmetric(rng, &l)?;
                let r = euler_residuals(&f, &a, &tol)?;
                worst = worst.max(r.first.max(r.second) / r.value.abs().max(1.0));
            }
            rows.push(CheckRow::new(format!("euler/{spec}/n{n}"), worst, 1e-10));
        }
    }
    Ok(())
}

fn second_form_rows(rng: &mut ChaCha8Rng, samples: usize, rows: &mut Vec<CheckRow>) -> anyhow::Result<()> {
    for n in [2, 3] {
        for spec in families(n) {
            let f = parse_f(spec, n)?;
            let mut worst = 0.0f64;
            for _ in 0..samples.div_ceil(2) {
                let l = spread_lambda(rng, n, 1e-3);
                let a = random_symmetric(rng, &l)?;
                let b = random_direction(rng, n);
                let exact = matrix_second_form(&f, &a, &b)?;
                let fd = fd_second_form(&f, &a, &b, 1e-3)?;
                let scale = exact.abs().max(1e-3 * f.eval_slice(&l)?.abs());
                worst = worst.max((fd - exact).abs() / scale);
            }
            rows.push(CheckRow::new(format!("second-form/{spec}/n{n}"), worst, 1e-5));
        }
    }
    let k = parse_f("K", 2)?;
    let a = Matrix::from_diag(&[1.0, 2.0]);
    let b = Matrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]])?;
    rows.push(CheckRow::new("second-form/K-anchor", (matrix_second_form(&k, &a, &b)? + 2.0).abs(), 1e-12));
    Ok(())
}

fn basis_rows(rng: &mut ChaCha8Rng, samples: usize, rows: &mut Vec<CheckRow>) -> anyhow::Result<()> {
    for n in [2, 3] {
        for spec in families(n) {
            let f = parse_f(spec, n)?;
            let mut worst = 0.0f64;
            for _ in 0..samples.div_ceil(5) {
                let l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
                let a = random_symmetric(rng, &l)?;
                let q = random_rotation(rng, n)?;
                let rotated = matrix_first_derivative(&f, &a.congruence(&q))?;
                let d = matrix_first_derivative(&f, &a)?;
                worst = worst.max(rotated.sub(&d.congruence(&q)).max_abs() / d.max_abs().max(1.0));
            }
            rows.push(CheckRow::new(format!("basis-invariance/{spec}/n{n}"), worst, 1e-10));
        }
    }
    Ok(())
}

fn pairing_rows(rng: &mut ChaCha8Rng, samples: usize, rows: &mut Vec<CheckRow>) -> anyhow::Result<()> {
    let violation = |gap: f64, scale: f64| gap.max(0.0) / if scale > 0.0 { scale } else { 1.0 };
    for (convex, concave) in [("norm", "geomean"), ("H", "geomean"), ("norm", "H")] {
        let (f, g) = (parse_f(convex, 2)?, parse_f(concave, 2)?);
        let (mut forward, mut swapped) = (0.0f64, 0.0f64);
        for _ in 0..10 * samples {
            let l = Eigenvalues::from_slice(&[rng.gen_range(1e-3..5.0), rng.gen_range(1e-3..5.0)])?;
            let p = lemma23_gaps(&f, &g, &l)?;
            forward = forward
                .max(violation(-p.first, p.first_scale))
                .max(violation(-p.second, p.second_scale));
            let q = lemma23_gaps(&g, &f, &l)?;
            swapped = swapped
                .max(violation(q.first, q.first_scale))
                .max(violation(q.second, q.second_scale));
        }
        rows.push(CheckRow::new(format!("pairing-gaps/{convex}-{concave}"), forward, 1e-12));
        rows.push(CheckRow::new(format!("pairing-gaps/{concave}-{convex}"), swapped, 1e-12));
    }
    Ok(())
}

fn surface_rows(rows: &mut Vec<CheckRow>) -> anyhow::Result<()> {
    let sphere = DiscreteHypersurface::ellipsoid(&[1.0, 1.0, 1.0], 128)?;
    rows.push(CheckRow::new("codazzi/sphere-M128", codazzi_residual(&sphere)?, 1e-8));
    rows.push(CheckRow::new("support-hessian/sphere-M128", lemma31_residual(&sphere, 0.0)?, 1e-8));
    type Build = fn(usize) -> solitonlab::Result<DiscreteHypersurface>;
    let cases: [(&str, Build); 2] = [
        ("spheroid", |m| DiscreteHypersurface::ellipsoid(&[1.0, 1.0, 1.3], m)),
        ("spheroid-revolution", |m| DiscreteHypersurface::spheroid(1.3, 1.0, m)),
    ];
    for (name, build) in cases {
        let (coarse, fine) = (build(128)?, build(256)?);
        // A fourth-order scheme must reduce the residual at least eightfold.
        let c = codazzi_residual(&coarse)?;
        rows.push(CheckRow::new(format!("codazzi/{name}-M256"), codazzi_residual(&fine)?, c / 8.0));
        let l = lemma31_residual(&coarse, 0.0)?;
        rows.push(CheckRow::new(format!("support-hessian/{name}-M256"), lemma31_residual(&fine, 0.0)?, l / 8.0));
    }
    Ok(())
}

fn soliton_rows(rng: &mut ChaCha8Rng, samples: usize, rows: &mut Vec<CheckRow>) -> anyhow::Result<()> {
    for n in [1, 2, 3] {
        for spec in families(n).into_iter().filter(|s| *s != "anisotropy") {
            let f = parse_f(spec, n)?;
            for c in [0.0, -1.0] {
                let space = SpaceFormParams::new(c)?;
                let mut worst = 0.0f64;
                for _ in 0..samples.div_ceil(20) {
                    let r = rng.gen_range(0.3..3.0);
                    let tau = sphere_tau(&f, r, &space)?;
                    let shape = geodesic_sphere_samples(n, r, &space, 64)?;
                    let value = f.eval_slice(&shape.points[0].principal)?;
                    for res in residual_field(&shape, &f, tau)? {
                        worst = worst.max(res.abs() / value.abs().max(1.0));
                    }
                }
                rows.push(CheckRow::new(format!("sphere-soliton/{spec}/n{n}/c{c}"), worst, 1e-10));
            }
        }
    }
    for (spec, n) in [("H", 2), ("K", 2), ("sigma2", 3), ("norm", 1), ("pow(H,-1)", 2)] {
        let f = parse_f(spec, n)?;
        for c in [0.0, -1.0] {
            if c == 0.0 && f.degree() == -1.0 {
                continue;
            }
            let space = SpaceFormParams::new(c)?;
            let mut worst = 0.0f64;
            for _ in 0..samples.div_ceil(5) {
                let r = rng.gen_range(0.1..10.0);
                let back = solve_sphere_radius(&f, sphere_tau(&f, r, &space)?, &space)?;
                worst = worst.max((back - r).abs() / r.max(1.0));
            }
            rows.push(CheckRow::new(format!("radius-round-trip/{spec}/n{n}/c{c}"), worst, 1e-10));
        }
    }
    let tau = sphere_tau(&parse_f("H", 2)?, 1.0, &SpaceFormParams::new(-1.0)?)?;
    let exact = 2.0 * 1f64.cosh() / 1f64.sinh().powi(2);
    rows.push(CheckRow::new("sphere-tau/H-hyperbolic-anchor", (tau - exact).abs(), 1e-14));
    Ok(())
}

fn threshold_rows(rows: &mut Vec<CheckRow>) -> anyhow::Result<()> {
    let (mut upper, mut lower) = (0.0f64, 0.0f64);
    for k in 1..=50 {
        let m = 1.0 + 99.0 * k as f64 / 50.0;
        let t = threshold_2iii(m).unwrap_or(f64::NAN);
        let root = binding_root(m).unwrap_or(f64::NAN);
        upper = upper.max((t - root).abs()).max(pinching_quadratics(m, t).1.abs() / (m - 1.0));
        let m = -7.0 - 93.0 * k as f64 / 50.0;
        let t = threshold_2iii(m).unwrap_or(f64::NAN);
        let root = binding_root(m).unwrap_or(f64::NAN);
        lower = lower.max((t - root).abs()).max(pinching_quadratics(m, t).0.abs() / (1.0 - m));
    }
    rows.push(CheckRow::new("threshold-root/m>1", upper, 1e-12));
    rows.push(CheckRow::new("threshold-root/m<-7", lower, 1e-12));
    Ok(())
}

/// Runs every check with the generator seeded by `seed`.
pub fn suite(seed: u64, samples: usize) -> anyhow::Result<Vec<CheckRow>> {
    if samples == 0 {
        return usage("identity-suite needs at least one sample (--samples 0 given)");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    euler_rows(&mut rng, samples, &mut rows)?;
    second_form_rows(&mut rng, samples, &mut rows)?;
    basis_rows(&mut rng, samples, &mut rows)?;
    pairing_rows(&mut rng, samples, &mut rows)?;
    soliton_rows(&mut rng, samples, &mut rows)?;
    threshold_rows(&mut rows)?;
    surface_rows(&mut rows)?;
    Ok(rows)
}

pub fn run(ctx: &Context, config: &ExperimentConfig, cfg: &IdentitySuiteConfig) -> anyhow::Result<Status> {
    let rows = suite(config.seed(), cfg.samples)?;
    let dir = ctx.out_dir();
    ensure_dir(dir)?;
    let path = dir.join("identity_suite.csv");
    write_csv(&path, &rows)?;
    write_config(dir, "identity_suite", config)?;
    let failed: Vec<&CheckRow> = rows.iter().filter(|r| !r.pass).collect();
    for r in &failed {
        eprintln!("FAIL {}: {:.3e} (tolerance {:.3e})", r.name, r.max_residual, r.tolerance);
    }
    println!(
        "{} of {} checks passed (seed {}); wrote {}",
        rows.len() - failed.len(),
        rows.len(),
        config.seed(),
        path.display()
    );
    Ok(Status::from_pass(failed.is_empty()))
}
