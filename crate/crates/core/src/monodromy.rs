//! Critical values of `R`, complex roots of the pencil, and analytic
//! continuation of the root branches `nu_k(t)` along paths in the `t`-plane.
//!
//! The critical points of `R` are the roots of `P'Q - Q'P`, a degree `2n`
//! polynomial that is positive on the real axis; they split into `n`
//! conjugate pairs. Their images `t_k = R(zeta_k)` are the branch points of
//! `nu(t)`. Continuing the real branches once around a loop that encloses
//! every upper critical value relabels them by the cyclic shift
//! `k -> k - 1 (mod n + 1)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pencil::PencilSpec;
use crate::poly::PolyComplex;
use crate::secular;

/// Default stopping tolerance for [`aberth_roots`].
pub const ABERTH_TOL: f64 = 1e-14;
/// Iteration budget for [`aberth_roots`].
pub const ABERTH_MAX_ITER: usize = 200;
/// Roots of `P'Q - Q'P` with `|Im| <= this` are treated as real (an error).
pub const REAL_AXIS_TOL: f64 = 1e-10;
/// Minimum distance between a continuation path and any critical value.
pub const CRITICAL_MARGIN: f64 = 1e-6;
/// Step halvings allowed before [`Error::StepCollapse`].
pub const MAX_HALVINGS: u32 = 12;
/// Minimum subdivision count of a path.
pub const MIN_STEPS: usize = 16;
/// Required ratio between the second-nearest and nearest start root when
/// matching loop endpoints.
pub const MATCH_RATIO: f64 = 3.0;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// All roots of `p` by the Aberth–Ehrlich simultaneous iteration.
///
/// Initial guesses are equally spaced on the circle of radius
/// `1 + max_i |c_i| / |c_lead|` (rotated off the real axis so that real
/// polynomials do not trap the iterates on it). A root stops moving once its
/// correction is below `tol * (1 + |z|)` or its residual is at roundoff
/// level; each root then gets one Newton polish step.
pub fn aberth_roots(p: &PolyComplex, tol: f64) -> Result<Vec<Complex64>> {
    let d = p.degree();
    let lead = p.leading();
    if d == 0 || lead.norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "root finding needs a polynomial of degree >= 1".into(),
        ));
    }
    if p.coeffs().iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite { what: "polynomial coefficients" });
    }
    let dp = p.derivative();
    let radius = 1.0
        + p.coeffs()[..d]
            .iter()
            .map(|z| z.norm() / lead.norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / d as f64 + 0.4))
        .collect();
    let mut done = vec![false; d];
    let eps = f64::EPSILON;

    let mut converged = false;
    for _ in 0..ABERTH_MAX_ITER {
        for k in 0..d {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let pv = p.eval(zk);
            if pv.norm() <= 4.0 * eps * p.eval_abs_bound(zk.norm()) {
                done[k] = true;
                continue;
            }
            let ratio = pv / dp.eval(zk);
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| (zk - z[j]).inv())
                .sum();
            let mut w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !(w.re.is_finite() && w.im.is_finite()) {
                w = Complex64::from_polar(1e-8 * (1.0 + zk.norm()), k as f64);
            }
            z[k] = zk - w;
            if w.norm() <= tol * (1.0 + z[k].norm()) {
                done[k] = true;
            }
        }
        if done.iter().all(|&x| x) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Aberth iteration",
            iterations: ABERTH_MAX_ITER,
        });
    }

    for zk in z.iter_mut() {
        let pv = p.eval(*zk);
        let dv = dp.eval(*zk);
        let cand = *zk - pv / dv;
        if cand.re.is_finite() && cand.im.is_finite() && p.eval(cand).norm() <= pv.norm() {
            *zk = cand;
        }
    }
    Ok(z)
}

/// Critical points of `R` in the upper half-plane and their critical values.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalData {
    /// `zeta_k` with `Im > 0`, ordered by decreasing real part.
    pub zeros_upper: Vec<Complex64>,
    /// `t_k = R(zeta_k)`, matching `zeros_upper`.
    pub values_upper: Vec<Complex64>,
    /// `h = min_k Im t_k`.
    pub h: f64,
    /// Largest distance between an upper critical point's conjugate and the
    /// nearest lower one.
    pub symmetry_error: f64,
}

impl CriticalData {
    /// Every critical value, upper ones followed by their conjugates.
    pub fn all_values(&self) -> Vec<Complex64> {
        self.values_upper
            .iter()
            .copied()
            .chain(self.values_upper.iter().map(|v| v.conj()))
            .collect()
    }
}

/// Newton refinement of a zero of `R'` using `R''`.
fn polish_critical(spec: &PencilSpec, mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let d1 = spec.r_prime_unchecked(z);
        let d2 = spec.r_second_unchecked(z);
        let step = d1 / d2;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        let cand = z - step;
        if spec.r_prime_unchecked(cand).norm() > d1.norm() {
            break;
        }
        z = cand;
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

pub fn critical_data(spec: &PencilSpec) -> Result<CriticalData> {
    let n = spec.n();
    let p = spec.poly_p();
    let q = spec.poly_q();
    let numerator = p
        .derivative()
        .mul(&q)
        .add_scaled(&q.derivative().mul(&p), -1.0);
    let roots = aberth_roots(&numerator.to_complex(), ABERTH_TOL)?;
    let roots: Vec<Complex64> = roots.into_iter().map(|z| polish_critical(spec, z)).collect();

    let mut upper: Vec<Complex64> = roots.iter().copied().filter(|z| z.im > REAL_AXIS_TOL).collect();
    let lower: Vec<Complex64> = roots.iter().copied().filter(|z| z.im < -REAL_AXIS_TOL).collect();
    if upper.len() != n || lower.len() != n {
        return Err(Error::SymmetryBroken {
            upper: upper.len(),
            lower: lower.len(),
            expected: n,
        });
    }
    upper.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
    let symmetry_error = upper
        .iter()
        .map(|z| {
            lower
                .iter()
                .map(|w| (z.conj() - w).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);

    let values_upper: Vec<Complex64> = upper.iter().map(|&z| spec.eval_r(z)).collect::<Result<_>>()?;
    let h = values_upper.iter().map(|v| v.im).fold(f64::INFINITY, f64::min);
    Ok(CriticalData {
        zeros_upper: upper,
        values_upper,
        h,
        symmetry_error,
    })
}

/// Strip half-width `h`: no critical value lies in `|Im t| < h`.
pub fn strip_height(spec: &PencilSpec) -> Result<f64> {
    Ok(critical_data(spec)?.h)
}

/// All `n + 1` roots of `P(z) - tQ(z)` for complex `t`.
pub fn roots_at_complex_t(spec: &PencilSpec, t: Complex64) -> Result<Vec<Complex64>> {
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::NonFinite { what: "t" });
    }
    aberth_roots(&spec.pencil_poly(t), ABERTH_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::CounterClockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }

    fn reversed(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathKind {
    /// `center + radius * exp(i (base_angle + orientation * 2 pi s))`.
    Circle {
        center: Complex64,
        radius: f64,
        orientation: Orientation,
        base_angle: f64,
    },
    /// Straight segments through the vertices, each segment taking an equal
    /// share of the parameter range.
    Polyline { vertices: Vec<Complex64> },
}

/// A path `t(s)`, `s in [0, 1]`, subdivided into `steps` nominal steps.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    kind: PathKind,
    steps: usize,
}

impl PathSpec {
    pub fn circle(
        center: Complex64,
        radius: f64,
        orientation: Orientation,
        base_angle: f64,
        steps: usize,
    ) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("circle radius {radius} must be positive")));
        }
        if !(center.re.is_finite() && center.im.is_finite() && base_angle.is_finite()) {
            return Err(Error::NonFinite { what: "circle parameters" });
        }
        PathSpec::with_steps(
            PathKind::Circle {
                center,
                radius,
                orientation,
                base_angle,
            },
            steps,
        )
    }

    /// Circle whose base point is where it crosses the real axis with the
    /// larger real part.
    pub fn circle_through_real_axis(
        center: Complex64,
        radius: f64,
        orientation: Orientation,
        steps: usize,
    ) -> Result<Self> {
        if !(center.im.abs() <= radius) {
            return Err(Error::LoopConditionViolated(format!(
                "circle around {center} with radius {radius} does not meet the real axis"
            )));
        }
        let base_angle = (-center.im / radius).asin();
        PathSpec::circle(center, radius, orientation, base_angle, steps)
    }

    pub fn polyline(vertices: Vec<Complex64>, steps: usize) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument("a polyline needs at least two vertices".into()));
        }
        if vertices.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { what: "polyline vertices" });
        }
        PathSpec::with_steps(PathKind::Polyline { vertices }, steps)
    }

    fn with_steps(kind: PathKind, steps: usize) -> Result<Self> {
        if steps < MIN_STEPS {
            return Err(Error::InvalidArgument(format!(
                "paths need at least {MIN_STEPS} steps, got {steps}"
            )));
        }
        Ok(PathSpec { kind, steps })
    }

    pub fn kind(&self) -> &PathKind {
        &self.kind
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn point(&self, s: f64) -> Complex64 {
        match &self.kind {
            PathKind::Circle {
                center,
                radius,
                orientation,
                base_angle,
            } => {
                let s = s.clamp(0.0, 1.0);
                if s == 1.0 {
                    // Close the loop exactly on the base point.
                    return center + Complex64::from_polar(*radius, *base_angle);
                }
                center + Complex64::from_polar(*radius, base_angle + orientation.sign() * TAU * s)
            }
            PathKind::Polyline { vertices } => {
                let segs = vertices.len() - 1;
                let x = s.clamp(0.0, 1.0) * segs as f64;
                let i = (x.floor() as usize).min(segs - 1);
                let u = x - i as f64;
                if u == 0.0 {
                    vertices[i]
                } else if u == 1.0 {
                    vertices[i + 1]
                } else {
                    vertices[i] + (vertices[i + 1] - vertices[i]) * u
                }
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn is_closed(&self) -> bool {
        match &self.kind {
            PathKind::Circle { .. } => true,
            PathKind::Polyline { vertices } => {
                (vertices[0] - vertices[vertices.len() - 1]).norm() <= 1e-12
            }
        }
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Self {
        let kind = match &self.kind {
            PathKind::Circle {
                center,
                radius,
                orientation,
                base_angle,
            } => PathKind::Circle {
                center: *center,
                radius: *radius,
                orientation: orientation.reversed(),
                base_angle: *base_angle,
            },
            PathKind::Polyline { vertices } => PathKind::Polyline {
                vertices: vertices.iter().rev().copied().collect(),
            },
        };
        PathSpec {
            kind,
            steps: self.steps,
        }
    }

    /// Exact distance from the path to `w`.
    pub fn distance_to(&self, w: Complex64) -> f64 {
        match &self.kind {
            PathKind::Circle { center, radius, .. } => ((w - center).norm() - radius).abs(),
            PathKind::Polyline { vertices } => vertices
                .windows(2)
                .map(|seg| segment_distance(seg[0], seg[1], w))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Smallest imaginary part along the path.
    pub fn min_imag(&self) -> f64 {
        match &self.kind {
            PathKind::Circle { center, radius, .. } => center.im - radius,
            PathKind::Polyline { vertices } => {
                vertices.iter().map(|v| v.im).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Winding number of a closed path around `w` (positive for
    /// counterclockwise). `w` must not lie on the path.
    pub fn winding_number(&self, w: Complex64) -> i64 {
        match &self.kind {
            PathKind::Circle {
                center,
                radius,
                orientation,
                ..
            } => {
                if (w - center).norm() < *radius {
                    orientation.sign() as i64
                } else {
                    0
                }
            }
            PathKind::Polyline { vertices } => {
                let total: f64 = vertices
                    .windows(2)
                    .map(|seg| ((seg[1] - w) / (seg[0] - w)).arg())
                    .sum();
                (total / TAU).round() as i64
            }
        }
    }
}

fn segment_distance(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let u = (((w - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (a + ab * u - w).norm()
}

/// Newton iteration for `R(z) = t` from `z`; `None` when it does not settle.
fn newton_root(spec: &PencilSpec, mut z: Complex64, t: Complex64) -> Option<Complex64> {
    for _ in 0..40 {
        if spec.mu().iter().any(|&m| (z - m).norm() <= crate::pencil::POLE_HIT_TOL) {
            return None;
        }
        let f = spec.eval_r_unchecked(z) - t;
        let step = f / spec.r_prime_unchecked(z);
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        z -= step;
        if step.norm() <= 1e-14 * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    None
}

fn min_pairwise_distance(z: &[Complex64]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            d = d.min((z[i] - z[j]).norm());
        }
    }
    d
}

/// Distance from the path to the nearest critical value.
pub fn path_critical_distance(crit: &CriticalData, path: &PathSpec) -> (f64, Complex64) {
    crit.all_values()
        .into_iter()
        .map(|v| (path.distance_to(v), v))
        .fold((f64::INFINITY, c(0.0, 0.0)), |best, x| if x.0 < best.0 { x } else { best })
}

/// Continues each start root along `path` with an Euler predictor and a
/// Newton corrector on `R(z) = t(s)`.
///
/// A step is accepted only when every branch's Newton correction, and its
/// total displacement, stay below a third of the smallest distance between
/// current branch positions; otherwise the step is halved, at most
/// [`MAX_HALVINGS`] times in a row. Returns one trace per branch, starting
/// with the start root and ending at `t(1)`.
pub fn continue_branches(
    spec: &PencilSpec,
    path: &PathSpec,
    start: &[Complex64],
) -> Result<Vec<Vec<Complex64>>> {
    let crit = critical_data(spec)?;
    continue_with_critical(spec, &crit, path, start)
}

fn continue_with_critical(
    spec: &PencilSpec,
    crit: &CriticalData,
    path: &PathSpec,
    start: &[Complex64],
) -> Result<Vec<Vec<Complex64>>> {
    let (dist, value) = path_critical_distance(crit, path);
    if dist < CRITICAL_MARGIN {
        return Err(Error::PathTooCloseToCritical { distance: dist, value });
    }
    if start.is_empty() {
        return Err(Error::InvalidArgument("no start roots given".into()));
    }
    let t_start = path.start();
    let mut current: Vec<Complex64> = start
        .iter()
        .map(|&z| newton_root(spec, z, t_start).unwrap_or(z))
        .collect();
    let mut traces: Vec<Vec<Complex64>> = current.iter().map(|&z| vec![z]).collect();

    let nominal = 1.0 / path.steps() as f64;
    let mut ds = nominal;
    let mut s = 0.0;
    let mut halvings = 0;
    while s < 1.0 {
        let s_next = if s + ds >= 1.0 - 1e-15 { 1.0 } else { s + ds };
        let t0 = path.point(s);
        let t1 = path.point(s_next);
        let limit = if current.len() > 1 {
            min_pairwise_distance(&current) / 3.0
        } else {
            f64::INFINITY
        };

        let mut next = Vec::with_capacity(current.len());
        let mut ok = true;
        for &z in &current {
            let predicted = z + (t1 - t0) / spec.r_prime_unchecked(z);
            match newton_root(spec, predicted, t1) {
                Some(w) if (w - predicted).norm() < limit && (w - z).norm() < limit => next.push(w),
                _ => {
                    ok = false;
                    break;
                }
            }
        }

        if ok {
            for (trace, &w) in traces.iter_mut().zip(&next) {
                trace.push(w);
            }
            current = next;
            s = s_next;
            halvings = 0;
            ds = (ds * 2.0).min(nominal);
        } else {
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(Error::StepCollapse { s });
            }
            ds /= 2.0;
        }
    }
    Ok(traces)
}

/// A permutation of branch indices: `map[k]` is the start index reached by
/// continuing branch `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation((0..len).collect())
    }

    /// `k -> k - 1 (mod len)`.
    pub fn cyclic_shift_down(len: usize) -> Self {
        Permutation((0..len).map(|k| (k + len - 1) % len).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &j)| k == j)
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&j| other.0[j]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (k, &j) in self.0.iter().enumerate() {
            inv[j] = k;
        }
        Permutation(inv)
    }

    pub fn pow(&self, e: u32) -> Permutation {
        (0..e).fold(Permutation::identity(self.len()), |acc, _| acc.then(self))
    }
}

/// How a loop relates to the critical values.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopConditions {
    /// Strip height of the pencil.
    pub h: f64,
    /// The loop stays in `Im t > -h` (with margin).
    pub above_lower_strip: bool,
    /// Winding number of the loop around each upper critical value.
    pub windings: Vec<i64>,
    /// The base point is real.
    pub real_base_point: bool,
}

impl LoopConditions {
    /// Every upper critical value is enclosed once counterclockwise.
    pub fn encloses_all_upper_ccw(&self) -> bool {
        self.windings.iter().all(|&w| w == 1)
    }

    /// All conditions under which the cyclic shift is expected.
    pub fn all_hold(&self) -> bool {
        self.above_lower_strip && self.encloses_all_upper_ccw() && self.real_base_point
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyResult {
    pub permutation: Permutation,
    /// Largest distance between a continued endpoint and its matched start.
    pub closure_error: f64,
    /// Closest approach of the loop to any critical value.
    pub path_min_crit_dist: f64,
    pub conditions: LoopConditions,
    pub warnings: Vec<String>,
}

impl MonodromyResult {
    /// True when the loop conditions hold, i.e. the permutation is expected
    /// to be the cyclic shift `k -> k - 1`.
    pub fn shift_expected(&self) -> bool {
        self.conditions.all_hold()
    }

    pub fn is_cyclic_shift(&self) -> bool {
        self.permutation == Permutation::cyclic_shift_down(self.permutation.len())
    }
}

fn loop_conditions(crit: &CriticalData, lp: &PathSpec) -> LoopConditions {
    LoopConditions {
        h: crit.h,
        above_lower_strip: lp.min_imag() > -crit.h + CRITICAL_MARGIN,
        windings: crit.values_upper.iter().map(|&v| lp.winding_number(v)).collect(),
        real_base_point: lp.start().im.abs() <= 1e-12,
    }
}

/// Evaluates the loop conditions and fails with
/// [`Error::LoopConditionViolated`] unless all of them hold.
pub fn check_loop_conditions(spec: &PencilSpec, lp: &PathSpec) -> Result<LoopConditions> {
    let crit = critical_data(spec)?;
    let cond = loop_conditions(&crit, lp);
    if !lp.is_closed() {
        return Err(Error::LoopConditionViolated("path is not closed".into()));
    }
    if !cond.real_base_point {
        return Err(Error::LoopConditionViolated("base point is not real".into()));
    }
    if !cond.above_lower_strip {
        return Err(Error::LoopConditionViolated(format!(
            "loop dips to Im t = {} below -h = {}",
            lp.min_imag(),
            -crit.h
        )));
    }
    if !cond.encloses_all_upper_ccw() {
        return Err(Error::LoopConditionViolated(format!(
            "winding numbers around the upper critical values are {:?}, expected all 1",
            cond.windings
        )));
    }
    Ok(cond)
}

/// Continues the real roots at the base point once around `lp` and returns
/// the induced relabeling of branches.
///
/// Branch `k` is the `k`-th largest real root at the real base point. Any
/// closed loop with a real base point is accepted; whether it meets the
/// conditions for the cyclic shift is reported in
/// [`MonodromyResult::conditions`]. Loops enclosing only some critical values
/// carry a warning, their permutation is informational.
pub fn loop_monodromy(spec: &PencilSpec, lp: &PathSpec) -> Result<MonodromyResult> {
    if !lp.is_closed() {
        return Err(Error::LoopConditionViolated("path is not closed".into()));
    }
    let base = lp.start();
    if base.im.abs() > 1e-12 {
        return Err(Error::LoopConditionViolated(format!(
            "base point {base} is not on the real axis"
        )));
    }
    let crit = critical_data(spec)?;
    let conditions = loop_conditions(&crit, lp);
    let start_set = secular::roots_real(spec, base.re, secular::DEFAULT_TOL)?;
    let start: Vec<Complex64> = start_set.roots.iter().map(|&x| c(x, 0.0)).collect();
    let traces = continue_with_critical(spec, &crit, lp, &start)?;

    let mut map = Vec::with_capacity(start.len());
    let mut closure_error: f64 = 0.0;
    for (k, trace) in traces.iter().enumerate() {
        let end = *trace.last().expect("non-empty trace");
        let mut dists: Vec<(f64, usize)> = start
            .iter()
            .enumerate()
            .map(|(j, &s)| ((end - s).norm(), j))
            .collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(second) = dists.get(1) {
            let ratio = second.0 / dists[0].0;
            if !(ratio >= MATCH_RATIO) {
                return Err(Error::AmbiguousMatching { branch: k, ratio });
            }
        }
        closure_error = closure_error.max(dists[0].0);
        map.push(dists[0].1);
    }
    let permutation = Permutation(map);
    if !permutation.is_bijection() {
        return Err(Error::AmbiguousMatching {
            branch: 0,
            ratio: 0.0,
        });
    }

    let mut warnings = Vec::new();
    let enclosed = conditions.windings.iter().filter(|&&w| w != 0).count();
    if enclosed > 0 && enclosed < conditions.windings.len() {
        warnings.push(format!(
            "loop encloses {enclosed} of {} upper critical values; permutation is not asserted",
            conditions.windings.len()
        ));
        let v = &crit.values_upper;
        let coincident = (0..v.len()).any(|i| (i + 1..v.len()).any(|j| (v[i] - v[j]).norm() < 1e-9));
        if coincident {
            warnings.push("some critical values coincide".into());
        }
    }

    Ok(MonodromyResult {
        permutation,
        closure_error,
        path_min_crit_dist: path_critical_distance(&crit, lp).0,
        conditions,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> PencilSpec {
        PencilSpec::new(vec![0.0], vec![1.0]).unwrap()
    }

    fn e2() -> PencilSpec {
        PencilSpec::new(vec![1.0, -1.0], vec![1.0, 1.0]).unwrap()
    }

    fn sorted(mut z: Vec<Complex64>) -> Vec<Complex64> {
        z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        z
    }

    #[test]
    fn aberth_examples() {
        let r = sorted(aberth_roots(&PolyComplex::from_real(&[1.0, 0.0, 1.0]), ABERTH_TOL).unwrap());
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-14);

        let r = aberth_roots(&PolyComplex::from_real(&[3.0, 0.0, 0.0, 0.0, 1.0]), ABERTH_TOL).unwrap();
        let q = 3f64.powf(0.25);
        for k in 0..4 {
            let want = Complex64::from_polar(q, std::f64::consts::PI * (2 * k + 1) as f64 / 4.0);
            assert!(r.iter().any(|z| (z - want).norm() < 1e-13), "missing {want}");
        }

        let r = sorted(aberth_roots(&PolyComplex::from_real(&[0.0, -3.0, 0.0, 1.0]), ABERTH_TOL).unwrap());
        let s3 = 3f64.sqrt();
        for (z, want) in r.iter().zip([-s3, 0.0, s3]) {
            assert!((z - c(want, 0.0)).norm() < 1e-14);
        }

        assert!(aberth_roots(&PolyComplex::from_real(&[2.0]), ABERTH_TOL).is_err());
    }

    #[test]
    fn critical_e1() {
        let cd = critical_data(&e1()).unwrap();
        assert!((cd.zeros_upper[0] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((cd.values_upper[0] - c(0.0, 2.0)).norm() < 1e-12);
        assert!((cd.h - 2.0).abs() < 1e-12);
    }

    #[test]
    fn critical_e2() {
        let cd = critical_data(&e2()).unwrap();
        let q = 3f64.powf(0.25);
        let s = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let h = q * (3.0 + s3) / (2.0 * s);
        let re = q * (3.0 - s3) / (2.0 * s);
        assert!((cd.h - h).abs() < 1e-12);
        assert!((cd.values_upper[0] - c(re, h)).norm() < 1e-12);
        assert!((cd.values_upper[1] - c(-re, h)).norm() < 1e-12);
        assert!(cd.symmetry_error < 1e-12);
    }

    #[test]
    fn strip_height_scaling() {
        let s = PencilSpec::new(vec![0.0], vec![1e-4]).unwrap();
        assert!((strip_height(&s).unwrap() - 0.02).abs() < 1e-12);
    }

    #[test]
    fn complex_t_roots() {
        let r = sorted(roots_at_complex_t(&e1(), c(0.0, 0.0)).unwrap());
        assert!((r[0] + 1.0).norm() < 1e-14 && (r[1] - 1.0).norm() < 1e-14);

        let r = roots_at_complex_t(&e1(), c(0.0, 2.0)).unwrap();
        for z in &r {
            assert!((z - c(0.0, 1.0)).norm() < 1e-7, "{z}");
        }

        let r = roots_at_complex_t(&e2(), c(0.0, 1.0)).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|z| z.im > 0.0));
    }

    #[test]
    fn path_geometry() {
        let p = PathSpec::circle_through_real_axis(c(0.0, 1.9), 2.0, Orientation::CounterClockwise, 64).unwrap();
        assert!(p.start().im.abs() < 1e-15);
        assert!(p.start().re > 0.0);
        assert_eq!(p.point(1.0), p.start());
        assert_eq!(p.winding_number(c(0.0, 2.0)), 1);
        assert_eq!(p.reversed().winding_number(c(0.0, 2.0)), -1);
        assert!((p.distance_to(c(0.0, 2.0)) - 1.9).abs() < 1e-12);

        let sq = PathSpec::polyline(
            vec![c(0.0, 0.0), c(2.0, 0.0), c(2.0, 2.0), c(0.0, 2.0), c(0.0, 0.0)],
            16,
        )
        .unwrap();
        assert!(sq.is_closed());
        assert_eq!(sq.winding_number(c(1.0, 1.0)), 1);
        assert_eq!(sq.winding_number(c(3.0, 1.0)), 0);
        assert_eq!(sq.reversed().winding_number(c(1.0, 1.0)), -1);
        assert_eq!(sq.point(0.25), c(2.0, 0.0));
        assert_eq!(sq.point(0.125), c(1.0, 0.0));
        assert!((sq.distance_to(c(1.0, 1.5)) - 0.5).abs() < 1e-15);

        assert!(PathSpec::circle(c(0.0, 0.0), 0.0, Orientation::Clockwise, 0.0, 32).is_err());
        assert!(PathSpec::polyline(vec![c(0.0, 0.0)], 32).is_err());
        assert!(PathSpec::polyline(vec![c(0.0, 0.0), c(1.0, 0.0)], 8).is_err());
    }

    #[test]
    fn continuation_along_real_axis() {
        let path = PathSpec::polyline(vec![c(0.0, 0.0), c(1.0, 0.0)], 16).unwrap();
        let traces = continue_branches(&e1(), &path, &[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let s5 = 5f64.sqrt();
        assert!((traces[0].last().unwrap() - c((1.0 + s5) / 2.0, 0.0)).norm() < 1e-12);
        assert!((traces[1].last().unwrap() - c((1.0 - s5) / 2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn path_too_close_to_critical() {
        let path = PathSpec::polyline(vec![c(-1.0, 2.0), c(1.0, 2.0)], 16).unwrap();
        let err = continue_branches(&e1(), &path, &[c(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::PathTooCloseToCritical { .. }));
    }

    #[test]
    fn small_circle_swaps_sheets() {
        let lp = PathSpec::circle(c(0.0, 2.0), 0.5, Orientation::CounterClockwise, -std::f64::consts::FRAC_PI_2, 64)
            .unwrap();
        let start = roots_at_complex_t(&e1(), lp.start()).unwrap();
        let traces = continue_branches(&e1(), &lp, &start).unwrap();
        assert!((traces[0].last().unwrap() - start[1]).norm() < 1e-10);
        assert!((traces[1].last().unwrap() - start[0]).norm() < 1e-10);
    }

    #[test]
    fn loop_monodromy_e1() {
        let lp = PathSpec::circle_through_real_axis(c(0.0, 1.9), 2.0, Orientation::CounterClockwise, 128).unwrap();
        let res = loop_monodromy(&e1(), &lp).unwrap();
        assert_eq!(res.permutation, Permutation(vec![1, 0]));
        assert!(res.closure_error <= 1e-8);
        assert!(res.shift_expected() && res.is_cyclic_shift());

        let far = PathSpec::circle(c(5.0, 0.0), 1.0, Orientation::CounterClockwise, std::f64::consts::PI, 64).unwrap();
        assert!((far.start() - c(4.0, 0.0)).norm() < 1e-15);
        let res = loop_monodromy(&e1(), &far).unwrap();
        assert!(res.permutation.is_identity());
        assert!(res.closure_error <= 1e-8);
        assert!(!res.shift_expected());
    }

    #[test]
    fn loop_monodromy_e2_three_cycle() {
        let lp = PathSpec::polyline(
            vec![c(0.0, 0.0), c(2.0, 0.0), c(2.0, 2.5), c(-2.0, 2.5), c(-2.0, 0.0), c(0.0, 0.0)],
            200,
        )
        .unwrap();
        let res = loop_monodromy(&e2(), &lp).unwrap();
        assert_eq!(res.permutation, Permutation(vec![2, 0, 1]));
        assert!(res.is_cyclic_shift());
        assert!(res.closure_error <= 1e-8);
        assert!(check_loop_conditions(&e2(), &lp).is_ok());

        let back = loop_monodromy(&e2(), &lp.reversed()).unwrap();
        assert_eq!(back.permutation, res.permutation.inverse());
        assert!(res.permutation.pow(3).is_identity());
    }

    #[test]
    fn open_or_complex_base_rejected() {
        let open = PathSpec::polyline(vec![c(0.0, 0.0), c(1.0, 1.0)], 16).unwrap();
        assert!(matches!(loop_monodromy(&e1(), &open), Err(Error::LoopConditionViolated(_))));
        let lifted = PathSpec::circle(c(0.0, 2.0), 1.0, Orientation::CounterClockwise, 0.0, 32).unwrap();
        assert!(matches!(loop_monodromy(&e1(), &lifted), Err(Error::LoopConditionViolated(_))));
        let far = PathSpec::circle(c(5.0, 0.0), 1.0, Orientation::CounterClockwise, std::f64::consts::PI, 64).unwrap();
        assert!(matches!(check_loop_conditions(&e1(), &far), Err(Error::LoopConditionViolated(_))));
    }

    #[test]
    fn permutation_algebra() {
        let s = Permutation::cyclic_shift_down(4);
        assert_eq!(s, Permutation(vec![3, 0, 1, 2]));
        assert!(s.pow(4).is_identity());
        assert!(!s.pow(2).is_identity());
        assert!(s.then(&s.inverse()).is_identity());
        assert!(!Permutation(vec![0, 0]).is_bijection());
    }
}
