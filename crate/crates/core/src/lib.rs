//! Numerical toolkit for the hyperbolic pencil `P(z) - tQ(z)` attached to
//! `R(z) = z - sum_k alpha_k / (z - mu_k)`, with distinct real poles `mu_k`
//! and positive weights `alpha_k`.
//!
//! * [`pencil`]: the specification and the polynomials `Q`, `P`, `P - tQ`.
//! * [`secular`]: the `n + 1` real roots of `R(z) = t` via interlacing brackets.
//! * [`arrowhead`]: the arrowhead pencil `A + tB` with `det(zI - A - tB) = P - tQ`.
//! * [`trace_exp`]: symmetric matrix exponentials, `trace exp(U + tV)`, the
//!   Lie product formula.
//! * [`excon`]: sampled Gram-matrix checks of exponential convexity.
//! * [`monodromy`]: critical values and continuation of root branches.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arrowhead;
pub mod error;
pub mod excon;
pub mod linalg;
pub mod monodromy;
pub mod pencil;
pub mod poly;
pub mod secular;
pub mod trace_exp;

pub use num_complex::Complex64;

pub use arrowhead::{build_arrowhead, char_poly_eval, eigs_arrowhead, verify_det_identity, ArrowheadPair, Sign};
pub use error::{Error, Result};
pub use excon::{
    certify_excon, f_compose, g_txi, gaussian_measure, gram_matrix, psd_verdict, GramReport, Interval,
    QuadratureMeasure, Verdict,
};
pub use linalg::{dense_eigs_oracle, jacobi_eigh, Matrix, SymMatrix};
pub use monodromy::{
    aberth_roots, check_loop_conditions, continue_branches, critical_data, loop_monodromy,
    roots_at_complex_t, strip_height, CriticalData, MonodromyResult, Orientation, PathKind, PathSpec,
    Permutation,
};
pub use pencil::PencilSpec;
pub use poly::{PolyComplex, PolyReal};
pub use secular::{bracket_k, interlacing_check, root_curve, root_curve_par, roots_real, RootSet};
pub use trace_exp::{bmv_phi, expm_sym, lie_product_approx, sum_exp_roots, toy_entrywise_check, verify_trace_identity};
