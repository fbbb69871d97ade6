//! Parsers for the untrusted inputs: spec files, t-grids and complex pairs.

use pencil_lab::{Complex64, PencilSpec};
use serde::Deserialize;
use thiserror::Error;

/// Largest number of points a `lo:hi:count` grid may request.
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("spec file is not valid JSON: {0}")]
    Json(String),
    #[error("bad grid '{text}': {reason}")]
    Grid { text: String, reason: String },
    #[error("bad complex number '{text}': {reason}")]
    Complex { text: String, reason: String },
    #[error("{0}")]
    Argument(String),
    #[error("{0}")]
    Spec(#[from] pencil_lab::Error),
}

impl InputError {
    /// Short machine-readable name used in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Io { .. } => "Io",
            InputError::Json(_) => "InvalidJson",
            InputError::Grid { .. } => "InvalidGrid",
            InputError::Complex { .. } => "InvalidComplex",
            InputError::Argument(_) => "InvalidArgument",
            InputError::Spec(e) => e.kind(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    mu: Vec<f64>,
    alpha: Vec<f64>,
}

/// Parses `{"mu": [...], "alpha": [...]}` and validates it.
pub fn parse_spec_json(text: &str) -> Result<PencilSpec, InputError> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    Ok(PencilSpec::new(file.mu, file.alpha)?)
}

pub fn read_spec_file(path: &std::path::Path) -> Result<PencilSpec, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_spec_json(&text)
}

fn finite(text: &str, what: &str) -> Result<f64, String> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("{what} '{}' is not a number", text.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what} must be finite"))
    }
}

/// Parses `lo:hi:count` into `count` equally spaced ascending points from
/// `lo` to `hi`. A single point requires `lo == hi`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, InputError> {
    let err = |reason: String| InputError::Grid {
        text: text.to_string(),
        reason,
    };
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(err("expected lo:hi:count".into()));
    }
    let lo = finite(parts[0], "lo").map_err(err)?;
    let hi = finite(parts[1], "hi").map_err(err)?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| err(format!("count '{}' is not a positive integer", parts[2].trim())))?;
    if count == 0 || count > MAX_GRID_POINTS {
        return Err(err(format!("count must be in 1..={MAX_GRID_POINTS}")));
    }
    if count == 1 {
        return if lo == hi {
            Ok(vec![lo])
        } else {
            Err(err("a single-point grid needs lo == hi".into()))
        };
    }
    if !(lo < hi) {
        return Err(err("lo must be below hi".into()));
    }
    let step = (hi - lo) / (count - 1) as f64;
    if !step.is_finite() {
        return Err(err("grid spacing overflows".into()));
    }
    let mut grid: Vec<f64> = (0..count).map(|i| lo + i as f64 * step).collect();
    grid[count - 1] = hi;
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(err("grid points are not strictly increasing at double precision".into()));
    }
    Ok(grid)
}

/// Parses `re,im`.
pub fn parse_complex(text: &str) -> Result<Complex64, InputError> {
    let err = |reason: String| InputError::Complex {
        text: text.to_string(),
        reason,
    };
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| err("expected re,im".into()))?;
    let re = finite(re, "real part").map_err(err)?;
    let im = finite(im, "imaginary part").map_err(err)?;
    Ok(Complex64::new(re, im))
}
