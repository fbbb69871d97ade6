//! Matrix exponentials of symmetric matrices and the trace function
//! `phi(t) = trace exp(U + tV)`.

use crate::arrowhead::{build_arrowhead, Sign};
use crate::error::{Error, Result};
use crate::excon::{gram_matrix, psd_verdict, GramReport, Interval, DEFAULT_PSD_TOL};
use crate::linalg::{jacobi_eigh, Matrix, SymMatrix, JACOBI_TOL};
use crate::pencil::PencilSpec;
use crate::secular;


/// `exp(M)` through the Jacobi eigendecomposition `M = V diag(l) V^T`.
pub fn expm_sym(m: &SymMatrix) -> Result<SymMatrix> {
    let eig = jacobi_eigh(m, JACOBI_TOL)?;
    let n = m.size();
    let exps: Vec<f64> = eig.values.iter().map(|l| l.exp()).collect();
    let v = &eig.vectors;
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let s: f64 = (0..n).map(|k| v[(i, k)] * exps[k] * v[(j, k)]).sum();
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    SymMatrix::new(out)
}

fn check_sizes(u: &SymMatrix, v: &SymMatrix) -> Result<()> {
    if u.size() != v.size() {
        return Err(Error::SizeMismatch {
            left: u.size(),
            right: v.size(),
        });
    }
    Ok(())
}

/// `trace exp(U + tV)`.
pub fn bmv_phi(u: &SymMatrix, v: &SymMatrix, t: f64) -> Result<f64> {
    check_sizes(u, v)?;
    Ok(expm_sym(&u.add(&v.scale(t))?)?.trace())
}

/// `sum_k exp(xi * nu_k(t))` over the real roots of `R(z) = t`.
pub fn sum_exp_roots(spec: &PencilSpec, t: f64, xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::NonFinite { what: "xi" });
    }
    let rs = secular::roots_real(spec, t, secular::DEFAULT_TOL)?;
    Ok(rs.roots.iter().map(|nu| (xi * nu).exp()).sum())
}

/// Relative gap between `sum_k exp(xi nu_k(t))` and `trace exp(xi A + t xi B)`,
/// with the arm sign chosen so that `xi A` has non-negative off-diagonal
/// entries.
pub fn verify_trace_identity(spec: &PencilSpec, t: f64, xi: f64) -> Result<f64> {
    let lhs = sum_exp_roots(spec, t, xi)?;
    let pair = build_arrowhead(spec, Sign::for_xi(xi));
    let rhs = bmv_phi(&pair.matrix_a().scale(xi), &pair.matrix_b().scale(xi), t)?;
    Ok((lhs - rhs).abs() / (1.0 + lhs.abs()))
}

/// `(exp(U/m) exp(tV/m))^m`, the `m`-step Lie product approximation of
/// `exp(U + tV)`.
pub fn lie_product_approx(u: &SymMatrix, v: &SymMatrix, t: f64, m: u64) -> Result<Matrix> {
    check_sizes(u, v)?;
    if m == 0 {
        return Err(Error::InvalidArgument("Lie product needs m >= 1".into()));
    }
    let inv = 1.0 / m as f64;
    let step = expm_sym(&u.scale(inv))?
        .as_matrix()
        .matmul(expm_sym(&v.scale(t * inv))?.as_matrix())?;
    Ok(step.pow(m))
}

/// Max-norm distance between the `m`-step Lie approximation and `exp(U + tV)`.
pub fn lie_error(u: &SymMatrix, v: &SymMatrix, t: f64, m: u64) -> Result<f64> {
    let exact = expm_sym(&u.add(&v.scale(t))?)?;
    lie_product_approx(u, v, t, m)?.max_abs_diff(exact.as_matrix())
}

/// `exp(-rho) exp(U + rho I + tV)`; equals `exp(U + tV)` for every `rho`.
pub fn expm_shifted(u: &SymMatrix, v: &SymMatrix, t: f64, rho: f64) -> Result<SymMatrix> {
    check_sizes(u, v)?;
    let shifted = u.add(&SymMatrix::identity(u.size()).scale(rho))?;
    Ok(expm_sym(&shifted.add(&v.scale(t))?)?.scale((-rho).exp()))
}

/// Smallest shift `rho >= 0` making every entry of `U + rho I` non-negative.
pub fn nonnegative_shift(u: &SymMatrix) -> f64 {
    (0..u.size()).map(|i| -u[(i, i)]).fold(0.0, f64::max)
}

/// Gram reports for one entry of `exp(U + tV)`.
#[derive(Debug, Clone)]
pub struct EntryReport {
    pub row: usize,
    pub col: usize,
    /// Gram matrix of `t -> exp(U + tV)[row][col]`.
    pub exact: GramReport,
    /// Gram matrix of the same entry of the `m`-step Lie approximation.
    pub lie: GramReport,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.exact.passed() && self.lie.passed()
    }
}

/// Samples every entry of `exp(U + tV)` as a function of `t` on the sums of
/// `t_points` and checks its Gram matrix for positive semidefiniteness.
///
/// Requires the off-diagonal entries of `U` to be non-negative and `V` to be
/// diagonal; under these conditions each entry is exponentially convex in
/// `t`, and so is each entry of every Lie approximation `(exp(U/m)exp(tV/m))^m`.
pub fn toy_entrywise_check(
    u: &SymMatrix,
    v: &SymMatrix,
    t_points: &[f64],
    m: u64,
) -> Result<Vec<EntryReport>> {
    check_sizes(u, v)?;
    let n = u.size();
    for i in 0..n {
        for j in 0..n {
            if i != j && u[(i, j)] < -1e-12 {
                return Err(Error::HypothesisViolated(format!(
                    "U[{i}][{j}] = {} is negative",
                    u[(i, j)]
                )));
            }
        }
    }
    if !v.is_diagonal() {
        return Err(Error::HypothesisViolated("V is not diagonal".into()));
    }

    let k = t_points.len();
    let mut exact = Vec::with_capacity(k * k);
    let mut lie = Vec::with_capacity(k * k);
    let mut sums = Vec::with_capacity(k * k);
    for r in 0..k {
        for s in r..k {
            let t = t_points[r] + t_points[s];
            sums.push(t);
            exact.push(expm_sym(&u.add(&v.scale(t))?)?.into_matrix());
            lie.push(lie_product_approx(u, v, t, m)?);
        }
    }
    let lookup = |mats: &[Matrix], t: f64, i: usize, j: usize| {
        let idx = sums.iter().position(|&x| x == t).expect("sampled sum");
        mats[idx][(i, j)]
    };

    let mut reports = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let ge = gram_matrix(|t| lookup(&exact, t, i, j), Interval::REAL_LINE, t_points)?;
            let gl = gram_matrix(|t| lookup(&lie, t, i, j), Interval::REAL_LINE, t_points)?;
            reports.push(EntryReport {
                row: i,
                col: j,
                exact: psd_verdict(ge, DEFAULT_PSD_TOL)?,
                lie: psd_verdict(gl, DEFAULT_PSD_TOL)?,
            });
        }
    }
    Ok(reports)
}
