//! Acceptance checks. Prints one line per criterion and exits nonzero if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solitonlab::curvfun::{eval_matrix, lemma23_gaps, matrix_first_derivative, matrix_second_form};
use solitonlab::flow::{run, FlowConfig, Outcome, RescaleMode, StopReason};
use solitonlab::hypersurface::{codazzi_residual, lemma31_residual, DiscreteHypersurface};
use solitonlab::soliton::{
    admissibility, geodesic_sphere_samples, residual_field, solve_sphere_radius, sphere_tau, threshold_2iii,
};
use solitonlab::spaceform::SpaceFormParams;
use solitonlab::{CurvatureFn, Eigenvalues, Matrix};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn families(n: usize) -> Vec<&'static str> {
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

fn cf(spec: &str, n: usize) -> CurvatureFn {
    CurvatureFn::parse(spec, n).unwrap()
}

/// Orthonormal matrix by Gram–Schmidt on random columns.
fn rotation(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for c in &cols {
            let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    Matrix::from_fn(n, |i, j| cols[j][i])
}

fn symmetric(rng: &mut ChaCha8Rng, lambda: &[f64]) -> Matrix {
    Matrix::from_diag(lambda).congruence(&rotation(rng, lambda.len()))
}

fn direction(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
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

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = (0.0f64, String::new());
    for n in [2, 3] {
        for spec in families(n) {
            let f = cf(spec, n);
            let m = f.degree();
            for _ in 0..100 {
                let l: Vec<f64> = if spec == "H" {
                    (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect()
                } else {
                    (0..n).map(|_| rng.gen_range(0.2..3.0)).collect()
                };
                let a = symmetric(&mut rng, &l);
                let value = eval_matrix(&f, &a).map_err(|e| e.to_string())?;
                let first_pairing = matrix_first_derivative(&f, &a).map_err(|e| e.to_string())?.inner(&a);
                let second = matrix_second_form(&f, &a, &a).map_err(|e| e.to_string())?;
                let scale = value.abs().max(1.0);
                let r1 = (first_pairing - m * value).abs() / scale;
                let r2 = (second - (m - 1.0) * first_pairing).abs() / scale;
                if r1.max(r2) > worst.0 {
                    worst = (r1.max(r2), format!("{spec}, n = {n}"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let msg = format!("max normalized residual {:.2e} ({}), {secs:.2} s", worst.0, worst.1);
    if worst.0 < 1e-10 && secs < 5.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = (0.0f64, String::new());
    let mut pairs = 0;
    for n in [2, 3] {
        for spec in families(n) {
            let f = cf(spec, n);
            let mut done = 0;
            while done < 50 {
                let l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
                if (0..n).any(|i| (i + 1..n).any(|j| (l[i] - l[j]).abs() <= 1e-3)) {
                    continue;
                }
                let a = symmetric(&mut rng, &l);
                let b = direction(&mut rng, n);
                let exact = matrix_second_form(&f, &a, &b).map_err(|e| e.to_string())?;
                let h = 1e-3;
                let at = |s: f64| eval_matrix(&f, &a.add(&b.scale(s))).unwrap();
                let fd = (-at(2.0 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2.0 * h)) / (12.0 * h * h);
                let scale = exact.abs().max(1e-3 * at(0.0).abs());
                let err = (fd - exact).abs() / scale;
                if err > worst.0 {
                    worst = (err, format!("{spec}, n = {n}"));
                }
                done += 1;
                pairs += 1;
            }
        }
    }
    // det(A + sB) = 2 − s² for A = diag(1,2), B = offdiag(1).
    let a = Matrix::from_diag(&[1.0, 2.0]);
    let b = Matrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    let anchor = matrix_second_form(&cf("K", 2), &a, &b).map_err(|e| e.to_string())?;
    let det = |s: f64| 2.0 - s * s;
    let oracle = (det(1e-2) - 2.0 * det(0.0) + det(-1e-2)) / 1e-4;
    let msg = format!(
        "max relative error {:.2e} over {pairs} pairs ({}); K anchor {anchor} vs {oracle}",
        worst.0, worst.1
    );
    if worst.0 < 1e-5 && (anchor + 2.0).abs() < 1e-12 && (anchor - oracle).abs() < 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Gaps for F = √(λ₁²+λ₂²) and G = 2√(λ₁λ₂) from their analytic gradients.
fn norm_geomean_gaps(l: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    let f = (l[0] * l[0] + l[1] * l[1]).sqrt();
    let g = 2.0 * (l[0] * l[1]).sqrt();
    let df = [l[0] / f, l[1] / f];
    let dg = [(l[1] / l[0]).sqrt(), (l[0] / l[1]).sqrt()];
    let sq = [l[0] * l[0], l[1] * l[1]];
    let a = g * (df[0] * sq[0] + df[1] * sq[1]);
    let b = f * (dg[0] * sq[0] + dg[1] * sq[1]);
    let c = f * (dg[0] + dg[1]);
    let d = g * (df[0] + df[1]);
    ([a - b, c - d], [a.abs().max(b.abs()), c.abs().max(d.abs())])
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (f, g) = (cf("norm", 2), cf("geomean", 2));
    let mut violation = 0.0f64;
    let mut mismatch = 0.0f64;
    for _ in 0..1000 {
        let l = [rng.gen_range(1e-3..5.0), rng.gen_range(1e-3..5.0)];
        let ev = Eigenvalues::from_slice(&l).unwrap();
        let fwd = lemma23_gaps(&f, &g, &ev).map_err(|e| e.to_string())?;
        let rev = lemma23_gaps(&g, &f, &ev).map_err(|e| e.to_string())?;
        let (oracle, scale) = norm_geomean_gaps(l);
        // Degree one: the gaps carry a factor m = 1.
        mismatch = mismatch
            .max((fwd.first - oracle[0]).abs() / scale[0].max(1e-300))
            .max((fwd.second - oracle[1]).abs() / scale[1].max(1e-300))
            .max((rev.first + oracle[0]).abs() / scale[0].max(1e-300))
            .max((rev.second + oracle[1]).abs() / scale[1].max(1e-300));
        for (gap, s) in [(fwd.first, scale[0]), (fwd.second, scale[1])] {
            violation = violation.max(-gap / s);
        }
        for (gap, s) in [(rev.first, scale[0]), (rev.second, scale[1])] {
            violation = violation.max(gap / s);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let msg = format!(
        "worst signed violation {violation:.2e} (tolerance 1e-12), oracle mismatch {mismatch:.2e}, {secs:.2} s"
    );
    if violation <= 1e-12 && mismatch < 1e-10 && secs < 2.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4() -> Verdict {
    let e = |s: solitonlab::Result<f64>| s.map_err(|e| e.to_string());
    let coarse = DiscreteHypersurface::ellipsoid(&[1.0, 1.0, 1.3], 128).unwrap();
    let fine = DiscreteHypersurface::ellipsoid(&[1.0, 1.0, 1.3], 256).unwrap();
    let (c0, c1) = (e(codazzi_residual(&coarse))?, e(codazzi_residual(&fine))?);
    let (l0, l1) = (e(lemma31_residual(&coarse, 0.0))?, e(lemma31_residual(&fine, 0.0))?);
    let sphere = DiscreteHypersurface::ellipsoid(&[1.0, 1.0, 1.0], 128).unwrap();
    let (cs, ls) = (e(codazzi_residual(&sphere))?, e(lemma31_residual(&sphere, 0.0))?);
    let msg = format!(
        "Codazzi {c0:.2e} -> {c1:.2e} (x{:.1}), support Hessian {l0:.2e} -> {l1:.2e} (x{:.1}); sphere M=128: {cs:.1e}, {ls:.1e}",
        c0 / c1,
        l0 / l1
    );
    if c0 / c1 >= 8.0 && l0 / l1 >= 8.0 && cs < 1e-8 && ls < 1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_5() -> Verdict {
    let mut worst_res = 0.0f64;
    let mut worst_tau = 0.0f64;
    let mut cases = 0;
    for n in [1, 2, 3] {
        for spec in families(n).into_iter().filter(|s| *s != "anisotropy") {
            let f = cf(spec, n);
            let f1 = f.eval_slice(&vec![1.0; n]).unwrap();
            let m = f.degree();
            for c in [0.0, -1.0] {
                let space = SpaceFormParams::new(c).unwrap();
                for r in [0.5, 1.0, 2.0] {
                    let tau = sphere_tau(&f, r, &space).map_err(|e| e.to_string())?;
                    let oracle = if c == 0.0 {
                        f1 / r.powf(m + 1.0)
                    } else {
                        f1 * r.cosh().powf(m) / r.sinh().powf(m + 1.0)
                    };
                    worst_tau = worst_tau.max((tau - oracle).abs() / oracle.abs());
                    let shape = geodesic_sphere_samples(n, r, &space, 128).map_err(|e| e.to_string())?;
                    let res = residual_field(&shape, &f, tau).map_err(|e| e.to_string())?;
                    worst_res = res.iter().fold(worst_res, |w, v| w.max(v.abs()));
                    cases += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut round_trip = 0.0f64;
    for (spec, n) in [("H", 2), ("K", 2), ("sigma2", 3), ("norm", 1)] {
        let f = cf(spec, n);
        for c in [0.0, -1.0] {
            let space = SpaceFormParams::new(c).unwrap();
            for _ in 0..20 {
                let r = rng.gen_range(0.1..10.0);
                let tau = sphere_tau(&f, r, &space).unwrap();
                let back = solve_sphere_radius(&f, tau, &space).map_err(|e| e.to_string())?;
                round_trip = round_trip.max((back - r).abs() / r.max(1.0));
            }
        }
    }
    let mut sqrt_n = 0.0f64;
    for n in [1, 2, 3] {
        let r = solve_sphere_radius(&cf("H", n), 1.0, &SpaceFormParams::euclidean()).unwrap();
        sqrt_n = sqrt_n.max((r - (n as f64).sqrt()).abs());
    }
    let msg = format!(
        "{cases} spheres: max |F+tZ| {worst_res:.2e}, closed-form mismatch {worst_tau:.1e}; round trip {round_trip:.1e}; R = sqrt(n) error {sqrt_n:.1e}"
    );
    if worst_res < 1e-10 && worst_tau < 1e-12 && round_trip < 1e-10 && sqrt_n < 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_6() -> Verdict {
    let mut worst = 0.0f64;
    for k in 1..=50 {
        // (m−1)r² − (m−1)r − 2 = 0, larger root.
        let m = 1.0 + 99.0 * k as f64 / 50.0;
        let (a, b, c) = (m - 1.0, -(m - 1.0), -2.0);
        let root = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
        worst = worst.max((threshold_2iii(m).unwrap() - root).abs());
        // 2r² + (m−1)r − (m−1) = 0, smaller root; the product of the roots is
        // (1−m)/2, which gives it without cancellation.
        let m = -7.0 - 93.0 * k as f64 / 50.0;
        let (a, b, c) = (2.0, m - 1.0, -(m - 1.0));
        let big = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
        let root = c / (a * big);
        worst = worst.max((threshold_2iii(m).unwrap() - root).abs());
    }
    let at = admissibility(2, -7.0, solitonlab::curvfun::Convexity::Neither, 100.0).unwrap();
    let boundary_ok = at.admissible && at.threshold_2iii.is_none();
    let beyond = threshold_2iii(-7.0f64 - 1e-9).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let a3 = (threshold_2iii(3.0f64).unwrap() - phi).abs();
    let a2 = (threshold_2iii(2.0f64).unwrap() - 2.0).abs();
    let msg = format!(
        "max root mismatch {worst:.1e} over 100 degrees; m=-7 unconditional: {boundary_ok}, m=-7-1e-9 -> {beyond:.6}; anchors {a3:.1e}, {a2:.1e}"
    );
    if worst < 1e-12 && boundary_ok && (beyond - 2.0).abs() < 1e-4 && a3 < 1e-12 && a2 < 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let mut cfg = FlowConfig::new(cf("H", 1));
    cfg.rescale = RescaleMode::FixedScale;
    cfg.t_max = 50.0;
    cfg.r_tol = 0.01;
    cfg.record_every = 200;
    let ellipse = run(&cfg, &DiscreteHypersurface::ellipse(2.0, 1.0, 256).unwrap()).map_err(|e| e.to_string())?;
    let t_ellipse = start.elapsed().as_secs_f64();
    let (first, last) = (&ellipse.rows[0], ellipse.last());
    let ellipse_ok = ellipse.outcome == Outcome::Stopped(StopReason::Rounded)
        && last.r_max - 1.0 < 0.02
        && last.rel_residual < 0.1 * first.rel_residual
        && ellipse.unscaled_fraction > 0.01;

    let start = Instant::now();
    let mut cfg = FlowConfig::new(cf("H", 2));
    cfg.rescale = RescaleMode::FixedScale;
    cfg.t_max = 10.0;
    cfg.min_scale_fraction = 0.02;
    cfg.record_every = 100;
    let spheroid =
        run(&cfg, &DiscreteHypersurface::spheroid(1.3, 1.0, 128).unwrap()).map_err(|e| e.to_string())?;
    let t_spheroid = start.elapsed().as_secs_f64();
    let monotone = spheroid.rows.windows(2).all(|w| w[1].ahh_max <= w[0].ahh_max + 1e-9);
    let a_end = spheroid.last().ahh_max;
    let spheroid_ok = !spheroid.is_aborted() && monotone && (a_end - 0.5).abs() < 0.005;
    let msg = format!(
        "ellipse: r_max-1 = {:.4}, residual {:.3} -> {:.4} ({t_ellipse:.1} s); spheroid: aHH {:.4} -> {a_end:.5}, monotone {monotone} ({t_spheroid:.1} s)",
        last.r_max - 1.0,
        first.rel_residual,
        last.rel_residual,
        spheroid.rows[0].ahh_max
    );
    if ellipse_ok && spheroid_ok && t_ellipse < 120.0 && t_spheroid < 120.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_8() -> Verdict {
    let mut cfg = FlowConfig::new(cf("H", 1));
    cfg.t_max = 0.25;
    cfg.record_every = 20;
    let trace = run(&cfg, &DiscreteHypersurface::circle(1.0, 256).unwrap()).map_err(|e| e.to_string())?;
    let worst = trace
        .rows
        .iter()
        .map(|r| {
            let exact = (1.0 - 2.0 * r.t).sqrt();
            (r.measure / (2.0 * PI) - exact).abs() / exact
        })
        .fold(0.0, f64::max);
    let msg = format!("max relative radius error {worst:.2e} over {} rows up to t = 0.25", trace.rows.len());
    if worst < 1e-3 && trace.outcome == Outcome::Stopped(StopReason::TimeLimit) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn run_cli(args: &[&str], out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_solitonlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&status.stderr)))
    }
}

fn criterion_9() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = Vec::new();
    for (args, file) in [
        (&["identity-suite", "--seed", "7"][..], "identity_suite.csv"),
        (&["sweep-pinching", "--m-min", "-60", "--m-max", "-0.5", "--count", "40"][..], "sweep_pinching.csv"),
        (&["sweep-pinching", "--m-min", "1.1", "--m-max", "100", "--count", "200"][..], "sweep_pinching.csv"),
    ] {
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        run_cli(args, &a)?;
        run_cli(args, &b)?;
        let (x, y) = (std::fs::read(a.join(file)).unwrap(), std::fs::read(b.join(file)).unwrap());
        if x != y {
            return Err(format!("{} differs between runs", args.join(" ")));
        }
        compared.push(format!("{file} ({} bytes)", x.len()));
    }
    Ok(format!("byte-identical: {}", compared.join(", ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Euler relations", criterion_1),
        ("second-derivative formula", criterion_2),
        ("pairing-gap signs", criterion_3),
        ("Codazzi and support Hessian residuals", criterion_4),
        ("sphere solitons", criterion_5),
        ("pinching thresholds", criterion_6),
        ("flow rounding", criterion_7),
        ("circle radius ODE", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("criterion {} PASS {name}: {msg}", k + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {} FAIL {name}: {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
