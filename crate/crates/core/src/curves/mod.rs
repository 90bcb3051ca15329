//! Sampled long curves in ℝⁿ, closed curves on Sⁿ, double points and their
//! resolution by bump functions.

mod budney;
mod decorate;
mod detect;
mod interp;
mod io;
mod long;
mod rotation;
mod sphere;

pub use budney::{
    base_immersion, budney_family, budney_sweep, fiber_grid, fibonacci_sphere, gauss_code, is_trefoil_code,
    standard_resolution, BudneyOutcome, Crossing, GaussCode,
};
pub use decorate::{
    auto_parameters, normal_fiber_vector, resolve, resolve_each, AutoParameters, BumpParams,
    DecoratedImmersion, Decoration, AUTO_HALVINGS, DEFAULT_DELTA, DEFAULT_EPS,
};
pub use detect::{double_points, Aabb, DetectOptions, DoublePoint, Traced, DEFAULT_SEP_CELLS, DEFAULT_TOL};
pub use interp::Hermite;
pub use io::{parse_curve_file, CurveFile};
pub use long::{LongCurve, DEFAULT_MARGIN, DEFAULT_SAMPLES};
pub use rotation::Rotation;
pub use sphere::{compactify, decompactify, one_jet, rotate, SphereCurve};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("malformed curve: {0}")]
    Malformed(String),
    #[error("ambient dimension {0} is below 3")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("curve leaves the unit ball at t = {t} (norm {norm})")]
    OutsideBall { t: f64, norm: f64 },
    #[error("curve is not regular at t = {0}")]
    NotRegular(f64),
    #[error("sample at t = {t} is off the sphere (norm {norm})")]
    NotOnSphere { t: f64, norm: f64 },
    #[error("unresolvable singularity cluster near ({t1}, {t2})")]
    SingularityCluster { t1: f64, t2: f64 },
    #[error("invalid decoration {index}: {msg}")]
    InvalidDecoration { index: usize, msg: String },
    #[error("expected {expected} decorations, found {found}")]
    DecorationCount { expected: usize, found: usize },
    #[error("bump {index} with eps = {eps} overlaps another decoration parameter or the support boundary")]
    EpsilonOverlap { index: usize, eps: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no valid parameters found after {halvings} halvings (last eps = {eps:e}, delta = {delta:e}, {remaining} double points left)")]
    NoValidParameters { halvings: u32, eps: f64, delta: f64, remaining: usize },
    #[error("seed direction lies in the double-point plane")]
    DegenerateSeed,
    #[error("sphere curve passes through the projection center at t = {0}")]
    PassesThroughCenter(f64),
    #[error("rotation does not fix the long-knot axis")]
    MovesAxis,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, CurveError>;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Unit-height bump `exp(1 − 1/(1 − u²))` for `|u| < 1`, zero otherwise.
pub fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}
