//! The rational function `R(z) = z - sum_k alpha_k / (z - mu_k)` and the
//! polynomials `Q`, `P = R Q` and the pencil `P - t Q` built from it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{PolyComplex, PolyReal};

/// Largest supported number of poles.
pub const MAX_POLES: usize = 64;
/// Two poles closer than this are rejected as duplicates.
pub const DUPLICATE_POLE_TOL: f64 = 1e-12;
/// Evaluation points closer than this to a pole raise [`Error::PoleHit`].
pub const POLE_HIT_TOL: f64 = 1e-14;

/// Poles `mu_1 > mu_2 > ... > mu_n` and positive residues `alpha_k`.
///
/// Inputs may arrive in any order; construction sorts the poles into
/// strictly decreasing order and permutes the weights alongside, so index `k`
/// everywhere downstream refers to the `k`-th largest pole.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilSpec {
    mu: Vec<f64>,
    alpha: Vec<f64>,
}

impl PencilSpec {
    pub fn new(mu: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        if mu.is_empty() && alpha.is_empty() {
            return Err(Error::EmptySpec);
        }
        if mu.len() != alpha.len() {
            return Err(Error::LengthMismatch {
                mu: mu.len(),
                alpha: alpha.len(),
            });
        }
        if mu.len() > MAX_POLES {
            return Err(Error::TooManyPoles {
                n: mu.len(),
                max: MAX_POLES,
            });
        }
        if mu.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite { what: "mu" });
        }
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite { what: "alpha" });
        }
        if let Some((index, &value)) = alpha.iter().enumerate().find(|(_, a)| **a <= 0.0) {
            return Err(Error::NonpositiveWeight { index, value });
        }

        let mut pairs: Vec<(f64, f64)> = mu.into_iter().zip(alpha).collect();
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        for w in pairs.windows(2) {
            if (w[0].0 - w[1].0).abs() <= DUPLICATE_POLE_TOL {
                return Err(Error::DuplicatePole {
                    a: w[0].0,
                    b: w[1].0,
                    tol: DUPLICATE_POLE_TOL,
                });
            }
        }
        let (mu, alpha) = pairs.into_iter().unzip();
        Ok(PencilSpec { mu, alpha })
    }

    /// Number of poles `n`; the pencil has degree `n + 1`.
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Poles in strictly decreasing order.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Weights matching [`PencilSpec::mu`].
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn sum_mu(&self) -> f64 {
        self.mu.iter().sum()
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        match self
            .mu
            .iter()
            .find(|&&m| (z - m).norm() <= POLE_HIT_TOL)
        {
            Some(&pole) => Err(Error::PoleHit { pole }),
            None => Ok(()),
        }
    }

    /// `R(z)` for complex `z`.
    pub fn eval_r(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        Ok(self.eval_r_unchecked(z))
    }

    /// `R(x)` for real `x`.
    pub fn eval_r_real(&self, x: f64) -> Result<f64> {
        self.check_pole(Complex64::new(x, 0.0))?;
        Ok(self.r_real_raw(x))
    }

    pub(crate) fn eval_r_unchecked(&self, z: Complex64) -> Complex64 {
        self.mu
            .iter()
            .zip(&self.alpha)
            .fold(z, |acc, (&m, &a)| acc - a / (z - m))
    }

    /// `R'(z) = 1 + sum alpha_k / (z - mu_k)^2`.
    pub fn eval_r_prime(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        Ok(self.r_prime_unchecked(z))
    }

    pub(crate) fn r_prime_unchecked(&self, z: Complex64) -> Complex64 {
        self.mu.iter().zip(&self.alpha).fold(
            Complex64::new(1.0, 0.0),
            |acc, (&m, &a)| {
                let d = z - m;
                acc + a / (d * d)
            },
        )
    }

    /// `R''(z) = -2 sum alpha_k / (z - mu_k)^3`.
    pub(crate) fn r_second_unchecked(&self, z: Complex64) -> Complex64 {
        self.mu
            .iter()
            .zip(&self.alpha)
            .fold(Complex64::new(0.0, 0.0), |acc, (&m, &a)| {
                let d = z - m;
                acc - 2.0 * a / (d * d * d)
            })
    }

    /// Real `R(x)` and `R'(x)` without the pole check.
    pub(crate) fn r_and_prime_real(&self, x: f64) -> (f64, f64) {
        let mut r = x;
        let mut dr = 1.0;
        for (&m, &a) in self.mu.iter().zip(&self.alpha) {
            let inv = 1.0 / (x - m);
            r -= a * inv;
            dr += a * inv * inv;
        }
        (r, dr)
    }

    pub(crate) fn r_real_raw(&self, x: f64) -> f64 {
        self.r_and_prime_real(x).0
    }

    /// `Q(z) = prod (z - mu_k)`, monic of degree `n`.
    pub fn poly_q(&self) -> PolyReal {
        PolyReal::from_roots(&self.mu)
    }

    /// `Q_k(z) = Q(z) / (z - mu_k)` for `k` in `0..n` (zero-based).
    pub fn poly_qk(&self, k: usize) -> PolyReal {
        let others: Vec<f64> = self
            .mu
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &m)| m)
            .collect();
        PolyReal::from_roots(&others)
    }

    /// `P(z) = z Q(z) - sum alpha_k Q_k(z)`, monic of degree `n + 1`.
    pub fn poly_p(&self) -> PolyReal {
        let mut p = self.poly_q().mul_linear(0.0);
        for (k, &a) in self.alpha.iter().enumerate() {
            p = p.add_scaled(&self.poly_qk(k), -a);
        }
        p
    }

    /// Coefficients of `P - t Q`; always of degree `n + 1` with leading
    /// coefficient one.
    pub fn pencil_poly(&self, t: Complex64) -> PolyComplex {
        let p = self.poly_p();
        let q = self.poly_q();
        let coeffs = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, &c)| Complex64::new(c, 0.0) - t * q.coeffs().get(i).copied().unwrap_or(0.0))
            .collect();
        PolyComplex::new(coeffs)
    }
}
