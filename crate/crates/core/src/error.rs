use thiserror::Error;

/// Errors raised by the pencil library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pencil specification has no poles")]
    EmptySpec,
    #[error("mu has {mu} entries but alpha has {alpha}")]
    LengthMismatch { mu: usize, alpha: usize },
    #[error("pencil order {n} exceeds the supported maximum {max}")]
    TooManyPoles { n: usize, max: usize },
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },
    #[error("poles {a} and {b} coincide within {tol:e}")]
    DuplicatePole { a: f64, b: f64, tol: f64 },
    #[error("weight alpha[{index}] = {value} is not positive")]
    NonpositiveWeight { index: usize, value: f64 },
    #[error("evaluation point coincides with pole {pole}")]
    PoleHit { pole: f64 },
    #[error("root {index} not resolved to tolerance within {iterations} iterations")]
    ToleranceNotMet { index: usize, iterations: usize },
    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {gap:e}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("argument sum {value} leaves the domain ({a}, {b})")]
    DomainViolation { value: f64, a: f64, b: f64 },
    #[error("found {upper} upper and {lower} lower critical points, expected {expected} each")]
    SymmetryBroken { upper: usize, lower: usize, expected: usize },
    #[error("path passes within {distance:e} of critical value {value}")]
    PathTooCloseToCritical { distance: f64, value: num_complex::Complex64 },
    #[error("step size collapsed near path parameter {s}")]
    StepCollapse { s: f64 },
    #[error("loop condition violated: {0}")]
    LoopConditionViolated(String),
    #[error("branch {branch} cannot be matched unambiguously (ratio {ratio:.3})")]
    AmbiguousMatching { branch: usize, ratio: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable variant name, used in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySpec => "EmptySpec",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::TooManyPoles { .. } => "TooManyPoles",
            Error::NonFinite { .. } => "NonFinite",
            Error::DuplicatePole { .. } => "DuplicatePole",
            Error::NonpositiveWeight { .. } => "NonpositiveWeight",
            Error::PoleHit { .. } => "PoleHit",
            Error::ToleranceNotMet { .. } => "ToleranceNotMet",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::DomainViolation { .. } => "DomainViolation",
            Error::SymmetryBroken { .. } => "SymmetryBroken",
            Error::PathTooCloseToCritical { .. } => "PathTooCloseToCritical",
            Error::StepCollapse { .. } => "StepCollapse",
            Error::LoopConditionViolated(_) => "LoopConditionViolated",
            Error::AmbiguousMatching { .. } => "AmbiguousMatching",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
