use std::f64::consts::PI;

use super::detect::{Aabb, Traced};
use super::{bump, norm, CurveError, Hermite, Result, Rotation};

pub const DEFAULT_SAMPLES: usize = 2048;
pub const DEFAULT_MARGIN: f64 = 0.125;
const BALL_SLACK: f64 = 1e-12;

/// A long curve `ℝ → ℝⁿ`, equal to the axis `(t, 0, …, 0)` for `|t| ≥ 1`,
/// stored as samples on a grid covering `[−1 − margin, 1 + margin]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LongCurve {
    curve: Hermite,
}

impl LongCurve {
    pub fn default_grid() -> Vec<f64> {
        Self::uniform_grid(DEFAULT_SAMPLES, DEFAULT_MARGIN)
    }

    pub fn uniform_grid(samples: usize, margin: f64) -> Vec<f64> {
        let (a, b) = (-1.0 - margin, 1.0 + margin);
        (0..samples).map(|i| a + (b - a) * i as f64 / (samples - 1) as f64).collect()
    }

    /// Builds a curve from samples, overwriting every sample with `|t| ≥ 1`
    /// by the axis point and checking the ball and regularity conditions.
    pub fn from_samples(n: usize, params: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(CurveError::DimensionTooSmall(n));
        }
        if params.first().is_none_or(|&t| t >= -1.0) || params.last().is_none_or(|&t| t <= 1.0) {
            return Err(CurveError::Malformed("grid must extend past ±1".into()));
        }
        for (i, &t) in params.iter().enumerate() {
            let x = &mut values[i * n..(i + 1) * n];
            if t.abs() >= 1.0 {
                x.fill(0.0);
                x[0] = t;
            } else {
                let r = norm(x);
                if r > 1.0 + BALL_SLACK {
                    return Err(CurveError::OutsideBall { t, norm: r });
                }
            }
        }
        let curve = Hermite::new(n, params, values, None)?;
        for i in 0..curve.len() {
            if norm(curve.tangent(i)) < 1e-9 {
                return Err(CurveError::NotRegular(curve.params()[i]));
            }
        }
        Ok(LongCurve { curve })
    }

    pub fn from_fn(n: usize, grid: &[f64], f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let values = grid.iter().flat_map(|&t| f(t)).collect();
        Self::from_samples(n, grid.to_vec(), values)
    }

    /// The axis itself.
    pub fn trivial(n: usize) -> Result<Self> {
        Self::from_fn(n, &Self::default_grid(), |t| {
            let mut x = vec![0.0; n];
            x[0] = t;
            x
        })
    }

    /// Planar long immersion with one transversal double point, at
    /// `t = ±0.4745…`, in the `(x₁, x₂)` plane.
    pub fn figure_eight(n: usize) -> Result<Self> {
        Self::from_fn(n, &Self::default_grid(), move |t| figure_eight_point(n, t))
    }

    pub fn dim(&self) -> usize {
        self.curve.dim()
    }

    pub fn len(&self) -> usize {
        self.curve.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curve.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        self.curve.params()
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        self.curve.sample(i)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, &[f64])> {
        (0..self.len()).map(move |i| (self.params()[i], self.sample(i)))
    }

    pub fn interpolant(&self) -> &Hermite {
        &self.curve
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        if t.abs() >= 1.0 {
            return self.axis_point(t);
        }
        self.curve.eval(t)
    }

    pub fn deriv(&self, t: f64) -> Vec<f64> {
        if t.abs() >= 1.0 {
            let mut e = vec![0.0; self.dim()];
            e[0] = 1.0;
            return e;
        }
        self.curve.deriv(t)
    }

    fn axis_point(&self, t: f64) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        x[0] = t;
        x
    }

    /// Largest distance between corresponding samples; the grids must agree.
    pub fn sample_distance(&self, other: &LongCurve) -> Option<f64> {
        if self.params() != other.params() || self.dim() != other.dim() {
            return None;
        }
        Some(
            (0..self.len())
                .map(|i| {
                    self.sample(i)
                        .iter()
                        .zip(other.sample(i))
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0, f64::max),
        )
    }

    /// Samples of the part over `[−1, 1]`, squeezed affinely in time and
    /// space into the interval `[alpha, beta]`.
    fn squeezed(&self, alpha: f64, beta: f64) -> impl Iterator<Item = (f64, Vec<f64>)> + '_ {
        let lambda = (beta - alpha) / 2.0;
        self.samples().filter(|(t, _)| t.abs() <= 1.0).map(move |(t, x)| {
            let mut y: Vec<f64> = x.iter().map(|v| lambda * v).collect();
            y[0] += alpha + lambda;
            (alpha + lambda * (t + 1.0), y)
        })
    }

    /// Connected sum: `self` squeezed into `[−1, 0]`, `other` into `[0, 1]`.
    pub fn concat(&self, other: &LongCurve) -> Result<LongCurve> {
        let n = self.dim();
        if other.dim() != n {
            return Err(CurveError::DimensionMismatch(n, other.dim()));
        }
        let mut params = Vec::new();
        let mut values = Vec::new();
        for (t, x) in self.samples().filter(|(t, _)| *t < -1.0) {
            params.push(t);
            values.extend_from_slice(x);
        }
        for (t, x) in self.squeezed(-1.0, 0.0) {
            params.push(t);
            values.extend(x);
        }
        for (t, x) in other.squeezed(0.0, 1.0) {
            if params.last().is_some_and(|&last| t <= last) {
                continue;
            }
            params.push(t);
            values.extend(x);
        }
        for (t, x) in other.samples().filter(|(t, _)| *t > 1.0) {
            params.push(t);
            values.extend_from_slice(x);
        }
        LongCurve::from_samples(n, params, values)
    }

    /// `t ↦ R f(−t)` with `R` flipping the first coordinate; again a long
    /// curve, traversed backwards.
    pub fn reversed(&self) -> LongCurve {
        let n = self.dim();
        let mut params = Vec::with_capacity(self.len());
        let mut values = Vec::with_capacity(self.len() * n);
        for i in (0..self.len()).rev() {
            params.push(-self.params()[i]);
            let x = self.sample(i);
            values.push(-x[0]);
            values.extend_from_slice(&x[1..]);
        }
        LongCurve::from_samples(n, params, values).expect("reflection preserves the invariants")
    }

    /// Applies a rotation of ℝⁿ that fixes the axis direction.
    pub fn rotated(&self, r: &Rotation) -> Result<LongCurve> {
        if r.dim() != self.dim() {
            return Err(CurveError::DimensionMismatch(self.dim(), r.dim()));
        }
        if !r.fixes_first_axis() {
            return Err(CurveError::MovesAxis);
        }
        let values = self.samples().flat_map(|(_, x)| r.apply(x)).collect();
        LongCurve::from_samples(self.dim(), self.params().to_vec(), values)
    }

    /// Same grid, samples shifted by `offsets` (flat, one vector per sample).
    pub(crate) fn displaced(&self, offsets: &[f64]) -> Result<LongCurve> {
        let values =
            self.samples().flat_map(|(_, x)| x.iter().copied()).zip(offsets).map(|(x, d)| x + d).collect();
        LongCurve::from_samples(self.dim(), self.params().to_vec(), values)
    }
}

pub(crate) fn figure_eight_point(n: usize, t: f64) -> Vec<f64> {
    let mut x = vec![0.0; n];
    let b = bump(t);
    x[0] = t - (2.0 / PI) * b * (PI * t).sin();
    x[1] = -0.3 * b * (PI * t).cos();
    x
}

impl Traced for LongCurve {
    fn dim(&self) -> usize {
        self.curve.dim()
    }

    fn num_cells(&self) -> usize {
        self.curve.num_cells()
    }

    fn cell_range(&self, i: usize) -> (f64, f64) {
        self.curve.cell_range(i)
    }

    fn cell_box(&self, i: usize) -> Aabb {
        let c = self.curve.cell_controls(i);
        Aabb::of_points(c.iter().map(Vec::as_slice), 0.0)
    }

    fn eval_with_deriv(&self, t: f64, value: &mut [f64], deriv: &mut [f64]) {
        self.curve.eval_with_deriv(t, value, deriv)
    }

    fn period(&self) -> Option<f64> {
        None
    }
}
