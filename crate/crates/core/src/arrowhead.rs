//! The arrowhead matrix pencil `A + tB` whose characteristic polynomial is
//! `P(z) - tQ(z)`.
//!
//! `A` has diagonal `[0, mu_1, ..., mu_n]`, first row and column
//! `a_{0,p} = sign * sqrt(alpha_p)`, and zeros elsewhere. `B` is the rank-one
//! matrix with a single `1` in position `(0, 0)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use crate::error::Result;
use crate::linalg::{Matrix, SymMatrix};
use crate::pencil::PencilSpec;
use crate::secular::{self, RootSet};

/// Global sign applied to the arm of `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// The sign making every off-diagonal entry of `xi * A` non-negative.
    pub fn for_xi(xi: f64) -> Sign {
        if xi < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrowheadPair {
    spec: PencilSpec,
    diag: Vec<f64>,
    arm: Vec<f64>,
    sign: Sign,
}

impl ArrowheadPair {
    pub fn new(spec: &PencilSpec, sign: Sign) -> Self {
        let diag = std::iter::once(0.0).chain(spec.mu().iter().copied()).collect();
        let arm = spec
            .alpha()
            .iter()
            .map(|a| sign.value() * a.sqrt())
            .collect();
        ArrowheadPair {
            spec: spec.clone(),
            diag,
            arm,
            sign,
        }
    }

    /// Matrix dimension `n + 1`.
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn arm(&self) -> &[f64] {
        &self.arm
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn spec(&self) -> &PencilSpec {
        &self.spec
    }

    /// Dense `A + tB`.
    pub fn pencil_matrix(&self, t: f64) -> SymMatrix {
        let n1 = self.size();
        let mut m = Matrix::diag(&self.diag);
        for (p, &a) in self.arm.iter().enumerate() {
            m[(0, p + 1)] = a;
            m[(p + 1, 0)] = a;
        }
        m[(0, 0)] += t;
        debug_assert_eq!(m.size(), n1);
        SymMatrix::new(m).expect("arrowhead is symmetric by construction")
    }

    pub fn matrix_a(&self) -> SymMatrix {
        self.pencil_matrix(0.0)
    }

    pub fn matrix_b(&self) -> SymMatrix {
        let mut d = vec![0.0; self.size()];
        d[0] = 1.0;
        SymMatrix::diag(&d)
    }
}

pub fn build_arrowhead(spec: &PencilSpec, sign: Sign) -> ArrowheadPair {
    ArrowheadPair::new(spec, sign)
}

/// `det(zI - A - tB)` through its cofactor expansion along the first row:
/// `(z - t) prod_p (z - mu_p) - sum_k arm_k^2 prod_{p != k} (z - mu_p)`.
pub fn char_poly_eval(pair: &ArrowheadPair, z: Complex64, t: Complex64) -> Complex64 {
    let diffs: Vec<Complex64> = pair.diag[1..].iter().map(|&m| z - m).collect();
    let full: Complex64 = diffs.iter().product();
    let mut acc = (z - t) * full;
    for (k, &a) in pair.arm.iter().enumerate() {
        let partial: Complex64 = diffs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, d)| *d)
            .product();
        acc -= a * a * partial;
    }
    acc
}

/// Compares [`char_poly_eval`] with the coefficient form of `P - tQ` at
/// `samples` random points `(z, t)` drawn from `[-5, 5] + i[-5, 5]`; returns
/// the largest `|difference| / (1 + |value|)`.
pub fn verify_det_identity(spec: &PencilSpec, pair: &ArrowheadPair, samples: usize, seed: u64) -> f64 {
    let mut rng = Pcg64::seed_from_u64(seed);
    let draw = |rng: &mut Pcg64| {
        Complex64::new(rng.random_range(-5.0..=5.0), rng.random_range(-5.0..=5.0))
    };
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let z = draw(&mut rng);
        let t = draw(&mut rng);
        let value = spec.pencil_poly(t).eval(z);
        let det = char_poly_eval(pair, z, t);
        worst = worst.max((det - value).norm() / (1.0 + value.norm()));
    }
    worst
}

/// Eigenvalues of `A + tB`, obtained from the secular equation of the
/// originating pencil.
pub fn eigs_arrowhead(pair: &ArrowheadPair, t: f64) -> Result<RootSet> {
    secular::roots_real(&pair.spec, t, secular::DEFAULT_TOL)
}
