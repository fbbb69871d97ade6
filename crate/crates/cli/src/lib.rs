//! Command-line front end for `pencil-lab`: reads a spec file, runs one
//! command and writes a JSON or CSV report.
//!
//! Exit codes: `0` when every asserted invariant held, `1` when a verdict or
//! invariant failed (or a numerical routine broke down), `2` for input
//! errors.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod input;
pub mod report;

use std::time::Instant;

use pencil_lab::excon::Interval;
use pencil_lab::monodromy::CRITICAL_MARGIN;
use pencil_lab::{
    build_arrowhead, certify_excon, critical_data, f_compose, g_txi, gaussian_measure, interlacing_check,
    loop_monodromy, root_curve_par, roots_real, sum_exp_roots, verify_det_identity, verify_trace_identity,
    Complex64, Orientation, PathSpec, PencilSpec, RootSet, Sign,
};
use serde_json::{json, Value};

pub use args::{Command, Format, OrientationArg, RunConfig, SignArg, TOrGrid};
pub use input::{parse_complex, parse_grid, parse_spec_json, read_spec_file, InputError};
pub use report::{format_f64, to_json_string, Cell, Report, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Error returned by [`run`], already classified by exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    /// One-line diagnostic for standard error.
    pub fn diagnostic(&self) -> String {
        format!("error: {}: {}", self.kind, self.message.replace('\n', " "))
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        let code = match &e {
            InputError::Spec(inner) => library_exit_code(inner),
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl From<pencil_lab::Error> for Failure {
    fn from(e: pencil_lab::Error) -> Self {
        InputError::Spec(e).into()
    }
}

/// Numerical breakdowns are reported as failed runs; everything else the
/// library rejects traces back to the inputs.
fn library_exit_code(e: &pencil_lab::Error) -> i32 {
    use pencil_lab::Error::*;
    match e {
        ToleranceNotMet { .. }
        | NoConvergence { .. }
        | StepCollapse { .. }
        | AmbiguousMatching { .. }
        | SymmetryBroken { .. } => EXIT_FAILED,
        _ => EXIT_INPUT,
    }
}

/// Rendered output of a successful run.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

/// Runs one configuration on a dedicated rayon pool of `config.threads`
/// workers.
pub fn run(config: &RunConfig) -> Result<Output, Failure> {
    let start = Instant::now();
    let path = config
        .spec
        .as_ref()
        .ok_or_else(|| InputError::Argument("--spec <FILE> is required".into()))?;
    if config.threads == 0 {
        return Err(InputError::Argument("--threads must be at least 1".into()).into());
    }
    let spec = read_spec_file(path)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| InputError::Argument(format!("cannot start thread pool: {e}")))?;
    let report = pool.install(|| execute(&spec, config))?;
    let elapsed = (!config.no_timing).then(|| start.elapsed().as_secs_f64());
    let text = match config.format {
        Format::Json => {
            let mut s = to_json_string(&report.to_json(spec_json(&spec), elapsed));
            s.push('\n');
            s
        }
        Format::Csv => report.table.to_csv(),
    };
    Ok(Output {
        text,
        passed: report.passed,
    })
}

fn spec_json(spec: &PencilSpec) -> Value {
    json!({ "mu": spec.mu(), "alpha": spec.alpha() })
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn t_values(at: &TOrGrid) -> Result<Vec<f64>, InputError> {
    match (&at.t, &at.grid) {
        (Some(t), None) => Ok(vec![*t]),
        (None, Some(g)) => parse_grid(g),
        _ => Err(InputError::Argument("give exactly one of --t or --grid".into())),
    }
}

fn t_param(report: &mut Report, at: &TOrGrid, ts: &[f64]) {
    match &at.grid {
        Some(g) => report.param("grid", g.as_str()),
        None => report.param("t", ts[0]),
    };
}

fn execute(spec: &PencilSpec, config: &RunConfig) -> Result<Report, Failure> {
    let mut report = Report::new(config.command.name());
    match &config.command {
        Command::Roots { at, tol } => roots(spec, at, *tol, &mut report)?,
        Command::Interlace { at, tol } => interlace(spec, at, *tol, &mut report)?,
        Command::Detrep { samples, sign, tol } => {
            let sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            if *samples == 0 {
                return Err(InputError::Argument("--samples must be at least 1".into()).into());
            }
            let pair = build_arrowhead(spec, sign);
            let err = verify_det_identity(spec, &pair, *samples, config.seed);
            report
                .param("samples", *samples)
                .param("sign", if sign == Sign::Plus { "plus" } else { "minus" })
                .param("seed", config.seed)
                .tol("relative_error", *tol);
            report
                .out("matrix_a", pair.matrix_a().as_matrix().rows())
                .out("matrix_b", pair.matrix_b().as_matrix().rows())
                .out("max_relative_error", err);
            report.passed = err <= *tol;
            report.table = Table::new(["samples", "max_relative_error", "passed"]);
            report.table.push(vec![(*samples).into(), err.into(), report.passed.into()]);
        }
        Command::Trace { t, xi, tol } => {
            let lhs = sum_exp_roots(spec, *t, *xi)?;
            let err = verify_trace_identity(spec, *t, *xi)?;
            report.param("t", *t).param("xi", *xi).tol("relative_error", *tol);
            report
                .out("sum_exp_roots", lhs)
                .out("sign", if Sign::for_xi(*xi) == Sign::Plus { "plus" } else { "minus" })
                .out("relative_error", err);
            report.passed = err <= *tol;
            report.table = Table::new(["t", "xi", "sum_exp_roots", "relative_error", "passed"]);
            report
                .table
                .push(vec![(*t).into(), (*xi).into(), lhs.into(), err.into(), report.passed.into()]);
        }
        Command::Excon { xi, points, trials, tol } => {
            let xi = *xi;
            let worst = certify_excon(
                |t| g_txi(spec, t, xi),
                Interval::REAL_LINE,
                *points,
                *trials,
                config.seed,
                *tol,
            )?;
            report
                .param("xi", xi)
                .param("points", *points)
                .param("trials", *trials)
                .param("seed", config.seed)
                .tol("psd_relative", *tol);
            let rel = worst.relative_min_eig().unwrap_or(f64::NAN);
            report
                .out("worst_points", worst.points.clone())
                .out("min_eig", worst.min_eig.unwrap_or(f64::NAN))
                .out("diagonal_scale", worst.scale())
                .out("relative_min_eig", rel)
                .out("verdict", if worst.passed() { "pass" } else { "fail" });
            report.passed = worst.passed();
            report.table = Table::new(["xi", "min_eig", "relative_min_eig", "verdict"]);
            report.table.push(vec![
                xi.into(),
                worst.min_eig.unwrap_or(f64::NAN).into(),
                rel.into(),
                (if worst.passed() { "pass" } else { "fail" }).into(),
            ]);
        }
        Command::Critical => {
            let cd = critical_data(spec)?;
            report.tol("conjugate_symmetry", 1e-8);
            report
                .out("zeros_upper", cd.zeros_upper.iter().map(|&z| complex_json(z)).collect::<Vec<_>>())
                .out("values_upper", cd.values_upper.iter().map(|&z| complex_json(z)).collect::<Vec<_>>())
                .out("h", cd.h)
                .out("symmetry_error", cd.symmetry_error);
            report.passed = cd.symmetry_error <= 1e-8;
            report.table = Table::new(["k", "zeta_re", "zeta_im", "value_re", "value_im"]);
            for (k, (z, v)) in cd.zeros_upper.iter().zip(&cd.values_upper).enumerate() {
                report.table.push(vec![k.into(), z.re.into(), z.im.into(), v.re.into(), v.im.into()]);
            }
        }
        Command::Monodromy {
            center,
            radius,
            base_angle,
            orientation,
            vertex,
            steps,
            tol,
        } => monodromy(spec, center, *radius, *base_angle, *orientation, vertex, *steps, *tol, &mut report)?,
        Command::Gaussian {
            gamma,
            at,
            half_width,
            count,
            tol,
        } => {
            let ts = t_values(at)?;
            let measure = gaussian_measure(*gamma, *half_width, *count)?;
            report
                .param("gamma", *gamma)
                .param("half_width", *half_width)
                .param("count", *count);
            t_param(&mut report, at, &ts);
            report.tol("absolute_error", *tol);
            report.table = Table::new(["t", "quadrature", "closed_form", "abs_error"]);
            let mut rows = Vec::new();
            let mut worst: f64 = 0.0;
            for &t in &ts {
                let quad = f_compose(spec, &measure, t)?;
                let closed: f64 = roots_real(spec, t, pencil_lab::secular::DEFAULT_TOL)?
                    .roots
                    .iter()
                    .map(|nu| (gamma * nu * nu).exp())
                    .sum();
                let err = (quad - closed).abs();
                worst = worst.max(err);
                rows.push(json!({ "t": t, "quadrature": quad, "closed_form": closed, "abs_error": err }));
                report.table.push(vec![t.into(), quad.into(), closed.into(), err.into()]);
            }
            report.out("values", rows).out("max_abs_error", worst);
            report.passed = worst <= *tol;
        }
    }
    Ok(report)
}

fn root_sets(spec: &PencilSpec, ts: &[f64], tol: f64) -> Result<Vec<RootSet>, Failure> {
    if ts.len() == 1 {
        Ok(vec![roots_real(spec, ts[0], tol)?])
    } else {
        Ok(root_curve_par(spec, ts, tol)?)
    }
}

fn root_header(n: usize) -> Vec<String> {
    std::iter::once("t".to_string())
        .chain((0..=n).map(|k| format!("nu_{k}")))
        .chain(std::iter::once("residual".to_string()))
        .collect()
}

fn roots(spec: &PencilSpec, at: &TOrGrid, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let ts = t_values(at)?;
    t_param(report, at, &ts);
    report.tol("residual", tol);
    let sets = root_sets(spec, &ts, tol)?;
    report.table = Table::new(root_header(spec.n()));
    for rs in &sets {
        let mut row: Vec<Cell> = vec![rs.t.into()];
        row.extend(rs.roots.iter().map(|&x| Cell::from(x)));
        row.push(rs.residual.into());
        report.table.push(row);
    }
    // Each branch increases strictly with t.
    let monotone = sets
        .windows(2)
        .all(|w| w[0].roots.iter().zip(&w[1].roots).all(|(a, b)| b > a));
    let interlaced = sets.iter().all(|rs| interlacing_check(spec, rs));
    if let [rs] = sets.as_slice() {
        report.out("roots", rs.roots.clone()).out("residual", rs.residual);
    } else {
        let curve: Vec<Value> = sets
            .iter()
            .map(|rs| json!({ "t": rs.t, "roots": rs.roots, "residual": rs.residual }))
            .collect();
        report.out("curve", curve).out("monotone", monotone);
    }
    report.out("interlaced", interlaced);
    report.passed = monotone && interlaced;
    Ok(())
}

fn interlace(spec: &PencilSpec, at: &TOrGrid, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let ts = t_values(at)?;
    t_param(report, at, &ts);
    report.tol("residual", tol).tol("trace_relative", 1e-9);
    let sets = root_sets(spec, &ts, tol)?;
    report.table = Table::new(["t", "interlaced", "trace_gap", "residual"]);
    let mut checks = Vec::new();
    let mut passed = true;
    for rs in &sets {
        let ok = interlacing_check(spec, rs);
        let scale = 1.0 + rs.t.abs() + spec.mu().iter().map(|m| m.abs()).sum::<f64>();
        let gap = (rs.sum() - rs.t - spec.sum_mu()).abs() / scale;
        passed &= ok && gap <= 1e-9;
        checks.push(json!({
            "t": rs.t,
            "roots": rs.roots,
            "interlaced": ok,
            "trace_gap": gap,
            "residual": rs.residual,
        }));
        report.table.push(vec![rs.t.into(), ok.into(), gap.into(), rs.residual.into()]);
    }
    report.out("poles", spec.mu().to_vec()).out("checks", checks);
    report.passed = passed;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn monodromy(
    spec: &PencilSpec,
    center: &Option<String>,
    radius: Option<f64>,
    base_angle: Option<f64>,
    orientation: OrientationArg,
    vertex: &[String],
    steps: usize,
    tol: f64,
    report: &mut Report,
) -> Result<(), Failure> {
    let orientation = match orientation {
        OrientationArg::Ccw => Orientation::CounterClockwise,
        OrientationArg::Cw => Orientation::Clockwise,
    };
    let path = match (center, vertex.is_empty()) {
        (Some(c), true) => {
            let c = parse_complex(c)?;
            let r = radius.ok_or_else(|| InputError::Argument("--center needs --radius".into()))?;
            report
                .param("center", complex_json(c))
                .param("radius", r)
                .param("orientation", if orientation == Orientation::CounterClockwise { "ccw" } else { "cw" });
            match base_angle {
                Some(a) => {
                    report.param("base_angle", a);
                    PathSpec::circle(c, r, orientation, a, steps)?
                }
                None => PathSpec::circle_through_real_axis(c, r, orientation, steps)?,
            }
        }
        (None, false) => {
            let vs = vertex.iter().map(|v| parse_complex(v)).collect::<Result<Vec<_>, _>>()?;
            report.param("vertices", vs.iter().map(|&z| complex_json(z)).collect::<Vec<_>>());
            PathSpec::polyline(vs, steps)?
        }
        _ => {
            return Err(InputError::Argument(
                "describe the loop with --center/--radius or with repeated --vertex".into(),
            )
            .into())
        }
    };
    report.param("steps", steps);
    report.tol("closure", tol).tol("critical_margin", CRITICAL_MARGIN);
    let res = loop_monodromy(spec, &path)?;
    let cond = &res.conditions;
    report
        .out("permutation", res.permutation.0.clone())
        .out("closure_error", res.closure_error)
        .out("path_min_critical_distance", res.path_min_crit_dist)
        .out("h", cond.h)
        .out("windings", cond.windings.clone())
        .out("encloses_all_upper_ccw", cond.encloses_all_upper_ccw())
        .out("above_lower_strip", cond.above_lower_strip)
        .out("shift_expected", res.shift_expected())
        .out("is_cyclic_shift", res.is_cyclic_shift())
        .out("warnings", res.warnings.clone());
    report.passed = res.closure_error <= tol && (!res.shift_expected() || res.is_cyclic_shift());
    report.table = Table::new(["branch", "image"]);
    for (k, &j) in res.permutation.0.iter().enumerate() {
        report.table.push(vec![k.into(), j.into()]);
    }
    Ok(())
}

/// Parses `argv` and runs it, returning the text for stdout, the text for
/// stderr and the exit code.
pub fn run_args<I, T>(argv: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (e.to_string(), String::new(), EXIT_OK),
                _ => {
                    let rendered = e.to_string();
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    let first = first.strip_prefix("error: ").unwrap_or(first);
                    (String::new(), format!("error: InvalidArgument: {first}\n"), EXIT_INPUT)
                }
            };
        }
    };
    match run(&config) {
        Ok(out) => {
            let code = out.exit_code();
            (out.text, String::new(), code)
        }
        Err(f) => (String::new(), format!("{}\n", f.diagnostic()), f.code),
    }
}
