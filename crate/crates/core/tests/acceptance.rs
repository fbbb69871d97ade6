//! Acceptance gate. Every criterion runs at its pinned tolerance and prints a
//! single PASS/FAIL line; the test fails if any criterion fails.
//!
//! Run with `cargo test -p pencil-lab --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use common::{e1, e2, random_spec, rng};
use num_complex::Complex64;
use pencil_lab::excon::{DEFAULT_PSD_TOL, Interval};
use pencil_lab::linalg::JACOBI_TOL;
use pencil_lab::monodromy::{continue_branches, ABERTH_TOL};
use pencil_lab::trace_exp::lie_error;
use pencil_lab::*;
use rand::Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let ok = out.ok && in_time;
    println!(
        "[{}] C{id:02} {name}: {} ({:.3}s / budget {:.0}s)",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs_f64(),
    );
    ok
}

fn c1_det_identity() -> Outcome {
    let mut r = rng(101);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let spec = random_spec(&mut r, 8);
        let sign = if i % 2 == 0 { Sign::Plus } else { Sign::Minus };
        let pair = build_arrowhead(&spec, sign);
        worst = worst.max(verify_det_identity(&spec, &pair, 100, 1000 + i));
    }
    Outcome {
        ok: worst <= 1e-8,
        detail: format!("max relative error {worst:.3e} <= 1e-8"),
    }
}

fn c2_interlacing() -> Outcome {
    let mut r = rng(202);
    let mut failures = 0;
    let mut below_floor = 0;
    let mut errors = 0;
    let mut worst_res: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..100 {
        let spec = random_spec(&mut r, 8);
        for _ in 0..20 {
            let t: f64 = r.random_range(-20.0..=20.0);
            let rs = match roots_real(&spec, t, 1e-10) {
                Ok(rs) => rs,
                Err(_) => {
                    errors += 1;
                    continue;
                }
            };
            let bound = 1e-10 * (1.0 + t.abs());
            let trace = t + spec.sum_mu();
            let scale = 1.0 + t.abs() + spec.mu().iter().map(|m| m.abs()).sum::<f64>();
            let sum_err = (rs.sum() - trace).abs() / scale;
            worst_res = worst_res.max(rs.residual / (1.0 + t.abs()));
            worst_sum = worst_sum.max(sum_err);
            if !interlacing_check(&spec, &rs) || rs.residual > bound || sum_err > 1e-9 {
                failures += 1;
                // Half an ulp of the root mapped through R' is the best any
                // double can do.
                let floor = rs
                    .roots
                    .iter()
                    .map(|&x| {
                        let d = spec.eval_r_prime(Complex64::new(x, 0.0)).unwrap().re;
                        0.5 * (x.next_up() - x) * d
                    })
                    .fold(0.0, f64::max);
                if floor > bound {
                    below_floor += 1;
                }
            }
        }
    }
    Outcome {
        ok: failures == 0 && errors == 0,
        detail: format!(
            "2000 root sets, {failures} failures ({below_floor} where the nearest double cannot reach the bound), \
             {errors} errors, max residual/(1+|t|) {worst_res:.2e}, max trace gap {worst_sum:.2e}"
        ),
    }
}

fn c3_oracles() -> Outcome {
    let mut r = rng(303);
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    for _ in 0..20 {
        let spec = random_spec(&mut r, 8);
        let t: f64 = r.random_range(-10.0..=10.0);
        let secular = match roots_real(&spec, t, secular::DEFAULT_TOL) {
            Ok(rs) => rs.roots,
            Err(e) => {
                errors.push(e.to_string());
                continue;
            }
        };
        let pair = build_arrowhead(&spec, Sign::Plus);
        let mut jacobi = dense_eigs_oracle(&pair.pencil_matrix(t).as_matrix().rows(), JACOBI_TOL).unwrap();
        jacobi.reverse();
        let mut aberth: Vec<Complex64> = aberth_roots(&spec.pencil_poly(Complex64::new(t, 0.0)), ABERTH_TOL).unwrap();
        aberth.sort_by(|a, b| b.re.total_cmp(&a.re));
        for k in 0..secular.len() {
            let a = Complex64::new(secular[k], 0.0);
            let b = Complex64::new(jacobi[k], 0.0);
            let c = aberth[k];
            worst = worst.max((a - b).norm()).max((a - c).norm()).max((b - c).norm());
        }
    }
    Outcome {
        ok: errors.is_empty() && worst <= 1e-8,
        detail: format!("max pairwise gap {worst:.3e} <= 1e-8, {} errors", errors.len()),
    }
}

fn c4_trace_identity() -> Outcome {
    let mut r = rng(404);
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    for _ in 0..50 {
        let spec = random_spec(&mut r, 6);
        let t: f64 = r.random_range(-5.0..=5.0);
        let xi: f64 = r.random_range(-3.0..=3.0);
        match verify_trace_identity(&spec, t, xi) {
            Ok(e) => worst = worst.max(e),
            Err(_) => errors += 1,
        }
    }
    Outcome {
        ok: errors == 0 && worst <= 1e-8,
        detail: format!("max relative error {worst:.3e} <= 1e-8"),
    }
}

fn c5_lie_product() -> Outcome {
    let u = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let v = SymMatrix::diag(&[1.0, -1.0]);
    let err = |m| lie_error(&u, &v, 1.0, m).unwrap();
    let mut ok = true;
    let mut ratios = Vec::new();
    for m in [64u64, 128, 256, 512] {
        let ratio = err(2 * m) / err(m);
        ratios.push(format!("{ratio:.4}"));
        ok &= ratio <= 0.6;
    }
    let e1024 = err(1024);
    ok &= e1024 <= 5e-3;
    Outcome {
        ok,
        detail: format!("err(2m)/err(m) = [{}] <= 0.6, err(1024) = {e1024:.3e} <= 5e-3", ratios.join(", ")),
    }
}

fn c6_exponential_convexity() -> Outcome {
    let mut r = rng(606);
    let mut worst = f64::INFINITY;
    let mut fails = 0;
    for s in 0..20 {
        let spec = random_spec(&mut r, 5);
        for (j, xi) in [-2.0, -0.5, 0.5, 2.0].into_iter().enumerate() {
            let rep = certify_excon(
                |t| g_txi(&spec, t, xi),
                Interval::REAL_LINE,
                8,
                50,
                (s * 10 + j) as u64,
                DEFAULT_PSD_TOL,
            );
            match rep {
                Ok(rep) => {
                    worst = worst.min(rep.relative_min_eig().unwrap());
                    if !rep.passed() {
                        fails += 1;
                    }
                }
                Err(_) => fails += 1,
            }
        }
    }
    let control = certify_excon(Ok, Interval::REAL_LINE, 8, 50, 42, DEFAULT_PSD_TOL).unwrap();
    Outcome {
        ok: fails == 0 && !control.passed(),
        detail: format!(
            "80 certifications, {fails} failures, worst relative min eigenvalue {worst:.3e} >= -1e-8; control f(t)=t {}",
            if control.passed() { "passed (wrong)" } else { "fails" }
        ),
    }
}

fn c7_gaussian() -> Outcome {
    let mut worst: f64 = 0.0;
    for gamma in [0.25, 0.5] {
        let measure = gaussian_measure(gamma, 12.0, 2001).unwrap();
        for spec in [e1(), e2()] {
            for t in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                let f = f_compose(&spec, &measure, t).unwrap();
                let closed: f64 = roots_real(&spec, t, secular::DEFAULT_TOL)
                    .unwrap()
                    .roots
                    .iter()
                    .map(|nu| (gamma * nu * nu).exp())
                    .sum();
                worst = worst.max((f - closed).abs());
            }
        }
    }
    Outcome {
        ok: worst <= 1e-6,
        detail: format!("max |F - sum exp(gamma nu^2)| = {worst:.3e} <= 1e-6"),
    }
}

fn c8_critical() -> Outcome {
    let d1 = critical_data(&e1()).unwrap();
    let e1_err = (d1.zeros_upper[0] - Complex64::new(0.0, 1.0))
        .norm()
        .max((d1.values_upper[0] - Complex64::new(0.0, 2.0)).norm())
        .max((d1.h - 2.0).abs());
    let h2 = 3f64.powf(0.25) * (3.0 + 3f64.sqrt()) / (2.0 * 2f64.sqrt());
    let e2_err = (critical_data(&e2()).unwrap().h - h2).abs();
    let mut r = rng(808);
    let mut worst_sym: f64 = 0.0;
    let mut errors = 0;
    for _ in 0..50 {
        match critical_data(&random_spec(&mut r, 8)) {
            Ok(cd) => worst_sym = worst_sym.max(cd.symmetry_error),
            Err(_) => errors += 1,
        }
    }
    Outcome {
        ok: e1_err <= 1e-9 && e2_err <= 1e-5 && worst_sym <= 1e-8 && errors == 0,
        detail: format!(
            "E1 gap {e1_err:.2e} <= 1e-9, E2 h gap {e2_err:.2e} <= 1e-5, conjugate mismatch {worst_sym:.2e} <= 1e-8 ({errors} errors)"
        ),
    }
}

fn c9_monodromy() -> Outcome {
    let c = Complex64::new;
    let e1_loop = PathSpec::circle_through_real_axis(c(0.0, 1.9), 2.0, Orientation::CounterClockwise, 128).unwrap();
    let r1 = loop_monodromy(&e1(), &e1_loop).unwrap();
    let ok1 = r1.permutation == Permutation(vec![1, 0]) && r1.closure_error <= 1e-8;

    let e2_loop = PathSpec::polyline(
        vec![c(0.0, 0.0), c(2.0, 0.0), c(2.0, 2.5), c(-2.0, 2.5), c(-2.0, 0.0), c(0.0, 0.0)],
        200,
    )
    .unwrap();
    let r2 = loop_monodromy(&e2(), &e2_loop).unwrap();
    let ok2 = r2.shift_expected() && r2.is_cyclic_shift() && r2.closure_error <= 1e-8;

    // n + 1 traversals by repeated continuation.
    let start: Vec<Complex64> = roots_real(&e2(), 0.0, secular::DEFAULT_TOL)
        .unwrap()
        .roots
        .iter()
        .map(|&x| c(x, 0.0))
        .collect();
    let mut pos = start.clone();
    for _ in 0..3 {
        let traces = continue_branches(&e2(), &e2_loop, &pos).unwrap();
        pos = traces.iter().map(|tr| *tr.last().unwrap()).collect();
    }
    let repeat_gap = pos.iter().zip(&start).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let ok3 = repeat_gap <= 1e-8 && r2.permutation.pow(3).is_identity();

    let far = PathSpec::circle(c(5.0, 0.0), 1.0, Orientation::CounterClockwise, std::f64::consts::PI, 64).unwrap();
    let r4 = loop_monodromy(&e1(), &far).unwrap();
    let ok4 = r4.permutation.is_identity() && r4.closure_error <= 1e-8;

    Outcome {
        ok: ok1 && ok2 && ok3 && ok4,
        detail: format!(
            "E1 {:?} closure {:.1e}; E2 {:?} closure {:.1e}; 3 turns gap {repeat_gap:.1e}; contractible {:?}",
            r1.permutation.0, r1.closure_error, r2.permutation.0, r2.closure_error, r4.permutation.0
        ),
    }
}

fn c10_closure_properties() -> Outcome {
    let spec = e1();
    let points = [-1.3, -0.4, 0.0, 0.7, 1.1, 2.0];
    let f1 = |t: f64| (0.5 * t).exp();
    let f2 = |t: f64| g_txi(&spec, t, 1.0).unwrap();
    let g1 = psd_verdict(gram_matrix(f1, Interval::REAL_LINE, &points).unwrap(), DEFAULT_PSD_TOL).unwrap();
    let g2 = psd_verdict(gram_matrix(f2, Interval::REAL_LINE, &points).unwrap(), DEFAULT_PSD_TOL).unwrap();
    let scaled = psd_verdict(gram_matrix(|t| 2.5 * f1(t), Interval::REAL_LINE, &points).unwrap(), DEFAULT_PSD_TOL).unwrap();
    let sum = psd_verdict(gram_matrix(|t| f1(t) + f2(t), Interval::REAL_LINE, &points).unwrap(), DEFAULT_PSD_TOL).unwrap();
    let product = psd_verdict(gram_matrix(|t| f1(t) * f2(t), Interval::REAL_LINE, &points).unwrap(), DEFAULT_PSD_TOL).unwrap();
    let all = [&g1, &g2, &scaled, &sum, &product];
    Outcome {
        ok: all.iter().all(|r| r.passed()),
        detail: format!(
            "relative min eigenvalues [{}]",
            all.iter()
                .map(|r| format!("{:.2e}", r.relative_min_eig().unwrap()))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let results = [
        run(1, "determinant identity", s(5), c1_det_identity),
        run(2, "interlacing", s(5), c2_interlacing),
        run(3, "oracle equivalence", s(10), c3_oracles),
        run(4, "trace identity", s(10), c4_trace_identity),
        run(5, "Lie product formula", s(1), c5_lie_product),
        run(6, "exponential convexity of g(t, xi)", s(30), c6_exponential_convexity),
        run(7, "Gaussian composition", s(2), c7_gaussian),
        run(8, "critical data", s(5), c8_critical),
        run(9, "monodromy", s(10), c9_monodromy),
        run(10, "closure properties", s(1), c10_closure_properties),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
