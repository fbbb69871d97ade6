//! Sampled certification of exponential convexity.
//!
//! A continuous `f` on `(a, b)` is exponentially convex when every Gram matrix
//! `[f(t_r + t_s)]` with all sums inside `(a, b)` is positive semidefinite.
//! The checks here draw point sets and report the worst Gram matrix found:
//! a pass means no counterexample was found, not a proof.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigh, Matrix, SymMatrix, JACOBI_TOL};
use crate::pencil::PencilSpec;
use crate::secular;

/// Default PSD tolerance, relative to `max(1, largest diagonal entry)`.
pub const DEFAULT_PSD_TOL: f64 = 1e-8;
/// Largest accepted Gram matrix.
pub const MAX_GRAM_POINTS: usize = 64;
/// Largest point set drawn by [`certify_excon`].
pub const MAX_CERTIFY_POINTS: usize = 16;

/// Open interval `(a, b)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        a: f64::NEG_INFINITY,
        b: f64::INFINITY,
    };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_nan() || b.is_nan() || !(a < b) {
            return Err(Error::InvalidArgument(format!("empty interval ({a}, {b})")));
        }
        Ok(Interval { a, b })
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }

    /// Range the sampled points are drawn from, so that pairwise sums stay
    /// inside the interval.
    fn sampling_range(&self) -> (f64, f64) {
        match (self.a.is_finite(), self.b.is_finite()) {
            (true, true) => (self.a / 2.0, self.b / 2.0),
            (false, false) => (-5.0, 5.0),
            (true, false) => (self.a / 2.0, self.a / 2.0 + 10.0),
            (false, true) => (self.b / 2.0 - 10.0, self.b / 2.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Gram matrix `[f(t_r + t_s)]` and, once [`psd_verdict`] has run, its
/// smallest eigenvalue and verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub points: Vec<f64>,
    pub gram: SymMatrix,
    pub min_eig: Option<f64>,
    pub tol: f64,
    pub verdict: Option<Verdict>,
}

impl GramReport {
    /// `max(1, largest diagonal entry)`, the scale the tolerance refers to.
    pub fn scale(&self) -> f64 {
        (0..self.gram.size())
            .map(|i| self.gram[(i, i)])
            .fold(1.0, f64::max)
    }

    /// Smallest eigenvalue divided by [`GramReport::scale`].
    pub fn relative_min_eig(&self) -> Option<f64> {
        self.min_eig.map(|m| m / self.scale())
    }

    pub fn passed(&self) -> bool {
        self.verdict == Some(Verdict::Pass)
    }
}

/// Builds the Gram matrix of `f` on `points`.
pub fn gram_matrix<F>(mut f: F, domain: Interval, points: &[f64]) -> Result<GramReport>
where
    F: FnMut(f64) -> f64,
{
    let n = points.len();
    if n == 0 || n > MAX_GRAM_POINTS {
        return Err(Error::InvalidArgument(format!(
            "Gram matrix needs 1..={MAX_GRAM_POINTS} points, got {n}"
        )));
    }
    let mut g = Matrix::zeros(n);
    for r in 0..n {
        for s in r..n {
            let x = points[r] + points[s];
            if !domain.contains(x) {
                return Err(Error::DomainViolation {
                    value: x,
                    a: domain.a,
                    b: domain.b,
                });
            }
            let v = f(x);
            g[(r, s)] = v;
            g[(s, r)] = v;
        }
    }
    Ok(GramReport {
        points: points.to_vec(),
        gram: SymMatrix::new(g)?,
        min_eig: None,
        tol: 0.0,
        verdict: None,
    })
}

/// [`gram_matrix`] for a fallible function.
pub fn try_gram_matrix<F>(f: F, domain: Interval, points: &[f64]) -> Result<GramReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut first_err = None;
    let report = gram_matrix(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::NAN
            }
        },
        domain,
        points,
    );
    match first_err {
        Some(e) => Err(e),
        None => report,
    }
}

/// Fills `min_eig` and `verdict`: pass iff
/// `min_eig >= -tol * max(1, largest diagonal entry)`.
pub fn psd_verdict(mut report: GramReport, tol: f64) -> Result<GramReport> {
    let min_eig = if report.gram.as_matrix().rows().iter().flatten().all(|v| v.is_finite()) {
        jacobi_eigh(&report.gram, JACOBI_TOL)?.values[0]
    } else {
        f64::NAN
    };
    let pass = min_eig >= -tol * report.scale();
    report.min_eig = Some(min_eig);
    report.tol = tol;
    report.verdict = Some(if pass { Verdict::Pass } else { Verdict::Fail });
    Ok(report)
}

/// Orders reports by relative smallest eigenvalue; NaN sorts first.
fn worse(a: &GramReport, b: &GramReport) -> bool {
    let ra = a.relative_min_eig().unwrap_or(f64::NAN);
    let rb = b.relative_min_eig().unwrap_or(f64::NAN);
    match (ra.is_nan(), rb.is_nan()) {
        (true, _) => true,
        (false, true) => false,
        _ => ra < rb,
    }
}

/// Draws `trials` point sets of size `n_points` inside `domain` and returns
/// the report with the smallest relative eigenvalue.
///
/// Point sets are drawn sequentially from a PCG-64 stream seeded with
/// `seed`; the Gram matrices are then evaluated on the current rayon pool
/// and reduced in draw order, so the result does not depend on the thread
/// count.
pub fn certify_excon<F>(
    f: F,
    domain: Interval,
    n_points: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<GramReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if n_points == 0 || n_points > MAX_CERTIFY_POINTS {
        return Err(Error::InvalidArgument(format!(
            "point count must be in 1..={MAX_CERTIFY_POINTS}, got {n_points}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let (lo, hi) = domain.sampling_range();
    let mut rng = Pcg64::seed_from_u64(seed);
    let sets: Vec<Vec<f64>> = (0..trials)
        .map(|_| {
            (0..n_points)
                .map(|_| loop {
                    let x = rng.random_range(lo..hi);
                    if x > lo {
                        break x;
                    }
                })
                .collect()
        })
        .collect();

    let reports: Vec<GramReport> = sets
        .par_iter()
        .map(|pts| psd_verdict(try_gram_matrix(&f, domain, pts)?, tol))
        .collect::<Result<_>>()?;
    Ok(reports
        .into_iter()
        .reduce(|best, r| if worse(&r, &best) { r } else { best })
        .expect("trials >= 1"))
}

/// `g(t, xi) = sum_k exp(xi * nu_k(t))`.
pub fn g_txi(spec: &PencilSpec, t: f64, xi: f64) -> Result<f64> {
    crate::trace_exp::sum_exp_roots(spec, t, xi)
}

/// Discrete non-negative measure `sum_j w_j delta(xi_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureMeasure {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureMeasure {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::SizeMismatch {
                left: nodes.len(),
                right: weights.len(),
            });
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { what: "measure nodes" });
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument("measure weights must be finite and >= 0".into()));
        }
        Ok(QuadratureMeasure { nodes, weights })
    }

    pub fn point_mass(xi: f64) -> Result<Self> {
        QuadratureMeasure::new(vec![xi], vec![1.0])
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `sum_j w_j exp(xi_j x)`, the Laplace transform of the measure.
    pub fn laplace(&self, x: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(xi, w)| w * (xi * x).exp())
            .sum()
    }
}

/// Trapezoidal discretisation of the density
/// `exp(-xi^2 / (4 gamma)) / (2 sqrt(pi gamma))` on `[-half_width, half_width]`.
/// Its Laplace transform is `exp(gamma x^2)`.
pub fn gaussian_measure(gamma: f64, half_width: f64, count: usize) -> Result<QuadratureMeasure> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "half width must be positive, got {half_width}"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidArgument("count must be at least 2".into()));
    }
    let h = 2.0 * half_width / (count - 1) as f64;
    let norm = 1.0 / (2.0 * (std::f64::consts::PI * gamma).sqrt());
    let mut nodes = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for j in 0..count {
        // Symmetric node placement: node j mirrors node count-1-j exactly.
        let xi = if 2 * j + 1 == count {
            0.0
        } else if 2 * j < count {
            -half_width + j as f64 * h
        } else {
            half_width - (count - 1 - j) as f64 * h
        };
        let end = if j == 0 || j == count - 1 { 0.5 } else { 1.0 };
        nodes.push(xi);
        weights.push(end * h * norm * (-xi * xi / (4.0 * gamma)).exp());
    }
    QuadratureMeasure::new(nodes, weights)
}

/// `F(t) = sum_j w_j g(t, xi_j)`, the discretised composition
/// `sum_k f(nu_k(t))` for `f` the Laplace transform of the measure.
pub fn f_compose(spec: &PencilSpec, measure: &QuadratureMeasure, t: f64) -> Result<f64> {
    let roots = secular::roots_real(spec, t, secular::DEFAULT_TOL)?;
    Ok(measure
        .nodes()
        .iter()
        .zip(measure.weights())
        .map(|(&xi, &w)| w * roots.roots.iter().map(|nu| (xi * nu).exp()).sum::<f64>())
        .sum())
}
