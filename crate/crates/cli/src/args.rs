use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Ccw,
    Cw,
}

/// Numerical experiments on the pencil P(z) - tQ(z).
#[derive(Debug, Clone, Parser)]
#[command(name = "pencil-lab", version)]
pub struct RunConfig {
    /// JSON file of the form {"mu":[...],"alpha":[...]}.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,

    /// Seed for the PCG-64 generator used by randomized commands.
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,

    /// Worker threads for grid and trial parallelism.
    #[arg(long, env = "PENCIL_LAB_THREADS", default_value_t = 1, global = true)]
    pub threads: usize,

    /// Leave the elapsed time out of the report.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct TOrGrid {
    /// Single real parameter value.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid", value_parser = finite)]
    pub t: Option<f64>,

    /// Ascending grid `lo:hi:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Real roots of R(z) = t.
    Roots {
        #[command(flatten)]
        at: TOrGrid,
        #[arg(long, default_value_t = 1e-12, value_parser = positive)]
        tol: f64,
    },
    /// Checks that the roots interlace the poles.
    Interlace {
        #[command(flatten)]
        at: TOrGrid,
        #[arg(long, default_value_t = 1e-12, value_parser = positive)]
        tol: f64,
    },
    /// Checks det(zI - A - tB) = P(z) - tQ(z) at random points.
    Detrep {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
    },
    /// Compares sum exp(xi nu_k) with trace exp(xi A + t xi B).
    Trace {
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        t: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        xi: f64,
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
    },
    /// Sampled Gram-matrix test of t -> sum exp(xi nu_k(t)).
    Excon {
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        xi: f64,
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
    },
    /// Critical points, critical values and the strip height h.
    Critical,
    /// Continues the roots around a closed loop in the t-plane.
    Monodromy {
        /// Circle center `re,im`.
        #[arg(long, allow_hyphen_values = true, requires = "radius")]
        center: Option<String>,
        #[arg(long, value_parser = positive)]
        radius: Option<f64>,
        /// Start angle on the circle; defaults to the point where the circle
        /// meets the real axis from below.
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        base_angle: Option<f64>,
        #[arg(long, value_enum, default_value = "ccw")]
        orientation: OrientationArg,
        /// Polyline vertex `re,im`; repeat for each vertex.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "center")]
        vertex: Vec<String>,
        #[arg(long, default_value_t = 128)]
        steps: usize,
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
    },
    /// Compares sum exp(gamma nu_k^2) with its Gaussian-measure quadrature.
    Gaussian {
        #[arg(long, value_parser = positive)]
        gamma: f64,
        #[command(flatten)]
        at: TOrGrid,
        #[arg(long, default_value_t = 12.0, value_parser = positive)]
        half_width: f64,
        #[arg(long, default_value_t = 2001)]
        count: usize,
        #[arg(long, default_value_t = 1e-6, value_parser = positive)]
        tol: f64,
    },
}

fn finite(text: &str) -> Result<f64, String> {
    let v: f64 = text.trim().parse().map_err(|_| format!("'{text}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{text}' is not finite"))
    }
}

fn positive(text: &str) -> Result<f64, String> {
    let v = finite(text)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("'{text}' must be positive"))
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Roots { .. } => "roots",
            Command::Interlace { .. } => "interlace",
            Command::Detrep { .. } => "detrep",
            Command::Trace { .. } => "trace",
            Command::Excon { .. } => "excon",
            Command::Critical => "critical",
            Command::Monodromy { .. } => "monodromy",
            Command::Gaussian { .. } => "gaussian",
        }
    }
}
