//! Dense univariate polynomials with coefficients stored in ascending degree
//! order (`coeffs[i]` multiplies `z^i`).

use num_complex::Complex64;

/// Polynomial with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyReal {
    coeffs: Vec<f64>,
}

impl PolyReal {
    /// Builds a polynomial, trimming trailing zero coefficients. The zero
    /// polynomial keeps a single `0.0` coefficient.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        PolyReal { coeffs }
    }

    pub fn one() -> Self {
        PolyReal { coeffs: vec![1.0] }
    }

    /// Monic polynomial with the given roots, expanded by successive
    /// multiplication with linear factors.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut p = PolyReal::one();
        for &r in roots {
            p = p.mul_linear(r);
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().expect("non-empty")
    }

    /// Multiplies by `(z - root)`.
    pub fn mul_linear(&self, root: f64) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= root * c;
        }
        PolyReal::new(out)
    }

    pub fn mul(&self, other: &PolyReal) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyReal::new(out)
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, other: &PolyReal, scale: f64) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let out = (0..len)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(0.0)
                    + scale * other.coeffs.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        PolyReal::new(out)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return PolyReal::new(vec![0.0]);
        }
        PolyReal::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn to_complex(&self) -> PolyComplex {
        PolyComplex::new(self.coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }
}

/// Polynomial with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyComplex {
    coeffs: Vec<Complex64>,
}

impl PolyComplex {
    /// Builds a polynomial, trimming trailing zero coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm_sqr() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        PolyComplex { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        PolyComplex::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("non-empty")
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return PolyComplex::new(vec![Complex64::new(0.0, 0.0)]);
        }
        PolyComplex::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Evaluates `sum |c_i| r^i`, the magnitude bound used for roundoff-aware
    /// stopping tests.
    pub fn eval_abs_bound(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }
}
