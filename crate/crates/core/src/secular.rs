//! Real roots of the secular equation `R(z) = t`.
//!
//! For real `t` the `n + 1` roots are real, simple and interlace the poles:
//! `nu_0 > mu_1 > nu_1 > ... > mu_n > nu_n`. Each root therefore lives in a
//! known bracket on which `R` increases from `-inf` to `+inf`, and is found by
//! a safeguarded Newton iteration that falls back to bisection whenever the
//! Newton step leaves the bracket.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pencil::PencilSpec;

/// Default residual tolerance for [`roots_real`].
pub const DEFAULT_TOL: f64 = 1e-12;
/// Iteration budget per root.
pub const MAX_ITERATIONS: usize = 200;
/// Roots closer than this to a pole have their residual measured in the
/// pole-multiplied form of the equation.
pub const NEAR_POLE: f64 = 1e-10;

/// The `n + 1` real roots of `R(z) = t`, strictly decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub t: f64,
    pub roots: Vec<f64>,
    /// Largest per-root residual, see [`root_residual`].
    pub residual: f64,
}

impl RootSet {
    pub fn sum(&self) -> f64 {
        self.roots.iter().sum()
    }
}

/// Bracket `(lo, hi)` for root `k` (`0..=n`). `R - t` is negative just above
/// `lo` and positive just below `hi`.
pub fn bracket_k(spec: &PencilSpec, t: f64, k: usize) -> Result<(f64, f64)> {
    let n = spec.n();
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "root index {k} out of range 0..={n}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "t" });
    }
    let mu = spec.mu();
    let start = t.abs().max(1.0);
    if k == 0 {
        let mut width = start;
        let mut upper = mu[0] + width;
        while spec.r_real_raw(upper) <= t {
            width *= 2.0;
            upper = mu[0] + width;
        }
        Ok((mu[0], upper))
    } else if k == n {
        let mut width = start;
        let mut lower = mu[n - 1] - width;
        while spec.r_real_raw(lower) >= t {
            width *= 2.0;
            lower = mu[n - 1] - width;
        }
        Ok((lower, mu[n - 1]))
    } else {
        Ok((mu[k], mu[k - 1]))
    }
}

/// Residual of a candidate root `x` of `R(x) = t`.
///
/// Away from the poles this is `|R(x) - t|`. Within [`NEAR_POLE`] of a pole
/// `mu_j` the equation is multiplied through by `(x - mu_j)`, which removes
/// the singular term: `|(x - mu_j)(x - t - sum_{i != j} alpha_i/(x - mu_i)) - alpha_j|`.
pub fn root_residual(spec: &PencilSpec, x: f64, t: f64) -> f64 {
    let (j, dist) = spec
        .mu()
        .iter()
        .enumerate()
        .map(|(j, &m)| (j, (x - m).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("n >= 1");
    if dist >= NEAR_POLE {
        return (spec.r_real_raw(x) - t).abs();
    }
    let mut rest = x - t;
    for (i, (&m, &a)) in spec.mu().iter().zip(spec.alpha()).enumerate() {
        if i != j {
            rest -= a / (x - m);
        }
    }
    ((x - spec.mu()[j]) * rest - spec.alpha()[j]).abs()
}

/// Magnitude of the terms summed when evaluating `R(x) - t`.
fn evaluation_scale(spec: &PencilSpec, x: f64, t: f64) -> f64 {
    spec.mu()
        .iter()
        .zip(spec.alpha())
        .fold(x.abs() + t.abs(), |acc, (&m, &a)| acc + a / (x - m).abs())
}

/// Smallest residual that a double-precision root can be expected to reach
/// at `x`: a few ulps of `x` mapped through `R'`, plus evaluation rounding.
/// Steep branches between nearly coincident poles can sit above any fixed
/// tolerance.
fn representable_floor(spec: &PencilSpec, x: f64, t: f64) -> f64 {
    let near = spec.mu().iter().any(|&m| (x - m).abs() < NEAR_POLE);
    if near {
        return 0.0;
    }
    let (_, dr) = spec.r_and_prime_real(x);
    let ulp = x.next_up() - x;
    2.0 * ulp * dr.abs() + 4.0 * f64::EPSILON * evaluation_scale(spec, x, t)
}

fn solve_in_bracket(spec: &PencilSpec, t: f64, k: usize, lo: f64, hi: f64) -> Result<f64> {
    let eps = f64::EPSILON;
    let mut a = lo;
    let mut b = hi;
    let mut x = 0.5 * (a + b);
    let mut converged = false;
    // Width two iterations back; Newton steps that fail to halve it are
    // replaced by bisection so the bracket always shrinks geometrically.
    let mut widths = [b - a; 2];

    for it in 0..MAX_ITERATIONS {
        let (r, dr) = spec.r_and_prime_real(x);
        let f = r - t;
        if f == 0.0 || f.abs() <= 2.0 * eps * evaluation_scale(spec, x, t) {
            converged = true;
            break;
        }
        if f < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let stalled = b - a > 0.5 * widths[it % 2];
        widths[it % 2] = b - a;
        let newton = x - f / dr;
        let next = if !stalled && newton > a && newton < b && newton.is_finite() {
            newton
        } else {
            0.5 * (a + b)
        };
        if next == x
            || (next - x).abs() <= 2.0 * eps * x.abs()
            || next <= a
            || next >= b
        {
            converged = true;
            break;
        }
        x = next;
    }
    if !converged {
        return Err(Error::ToleranceNotMet {
            index: k,
            iterations: MAX_ITERATIONS,
        });
    }

    // The iterate is within a few ulps of the root; walk to the float with
    // the smallest residual.
    let mut best = x;
    let mut best_res = root_residual(spec, x, t);
    for step in [f64::next_down, f64::next_up] {
        let mut cand = step(best);
        for _ in 0..64 {
            if !(cand > lo && cand < hi) {
                break;
            }
            let res = root_residual(spec, cand, t);
            if res >= best_res {
                break;
            }
            best = cand;
            best_res = res;
            cand = step(cand);
        }
    }
    Ok(best)
}

/// All `n + 1` real roots of `R(z) = t`, in decreasing order.
///
/// Fails with [`Error::ToleranceNotMet`] if a root does not settle within the
/// iteration budget, or if its residual exceeds both `tol * (1 + |t|)` and
/// the floor reachable by the nearest double to the root. The returned
/// `residual` is the raw maximum and may exceed `tol * (1 + |t|)` on such
/// steep branches.
pub fn roots_real(spec: &PencilSpec, t: f64, tol: f64) -> Result<RootSet> {
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "t" });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let n = spec.n();
    let bound = tol * (1.0 + t.abs());
    let mut roots = Vec::with_capacity(n + 1);
    let mut residual: f64 = 0.0;
    for k in 0..=n {
        let (lo, hi) = bracket_k(spec, t, k)?;
        let x = solve_in_bracket(spec, t, k, lo, hi)?;
        let res = root_residual(spec, x, t);
        if !(res <= bound.max(representable_floor(spec, x, t))) {
            return Err(Error::ToleranceNotMet {
                index: k,
                iterations: MAX_ITERATIONS,
            });
        }
        residual = residual.max(res);
        roots.push(x);
    }
    Ok(RootSet { t, roots, residual })
}

/// True iff `nu_0 > mu_1 > nu_1 > ... > mu_n > nu_n` holds strictly.
pub fn interlacing_check(spec: &PencilSpec, rs: &RootSet) -> bool {
    let mu = spec.mu();
    if rs.roots.len() != mu.len() + 1 {
        return false;
    }
    mu.iter()
        .enumerate()
        .all(|(k, &m)| rs.roots[k] > m && m > rs.roots[k + 1])
}

/// Root sets along an ascending grid of real `t`.
pub fn root_curve(spec: &PencilSpec, t_grid: &[f64], tol: f64) -> Result<Vec<RootSet>> {
    check_grid(t_grid)?;
    t_grid.iter().map(|&t| roots_real(spec, t, tol)).collect()
}

/// [`root_curve`] evaluated on the current rayon pool; output order matches
/// the grid.
pub fn root_curve_par(spec: &PencilSpec, t_grid: &[f64], tol: f64) -> Result<Vec<RootSet>> {
    check_grid(t_grid)?;
    t_grid
        .par_iter()
        .map(|&t| roots_real(spec, t, tol))
        .collect()
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite { what: "t grid" });
    }
    if t_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("t grid must be ascending".into()));
    }
    Ok(())
}
