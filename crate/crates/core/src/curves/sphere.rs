//! Closed curves on Sⁿ ⊂ ℝ^{n+1} and the stereographic model of long curves.
//!
//! The projection center is `N = (1, 0, …, 0)`. A point `x ∈ ℝⁿ` goes to
//! `((|x|² − 1)/(|x|² + 1), 2x/(|x|² + 1))` and the long-curve parameter `t`
//! to `s = 1/2 + atan(t)/π`, so `t = ±∞` meets the marked point `s = 0`.

use std::f64::consts::PI;

use super::detect::{Aabb, Traced};
use super::{dot, norm, CurveError, Hermite, LongCurve, Result, Rotation};

const SPHERE_TOL: f64 = 1e-9;
const TAIL_SAMPLES: usize = 64;
/// Closest a decompactified sample may come to the projection center.
const CENTER_CLEARANCE: f64 = 1e-6;

/// Closed curve of period 1 on Sⁿ, marked point at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereCurve {
    n: usize,
    curve: Hermite,
}

impl SphereCurve {
    /// `values` holds points of ℝ^{n+1}; they are normalized after checking
    /// they lie on the sphere to within `1e−9`. Points already unit to
    /// rounding are kept as given.
    pub fn from_samples(n: usize, params: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(CurveError::DimensionTooSmall(n));
        }
        let d = n + 1;
        if params.first().is_some_and(|&t| t < 0.0) || params.last().is_some_and(|&t| t >= 1.0) {
            return Err(CurveError::Malformed("sphere curve parameters must lie in [0, 1)".into()));
        }
        for (i, &t) in params.iter().enumerate() {
            let x = values
                .get_mut(i * d..(i + 1) * d)
                .ok_or_else(|| CurveError::Malformed("too few coordinates".into()))?;
            let r = norm(x);
            if (r - 1.0).abs() > SPHERE_TOL {
                return Err(CurveError::NotOnSphere { t, norm: r });
            }
            if (r - 1.0).abs() > 1e-15 {
                x.iter_mut().for_each(|c| *c /= r);
            }
        }
        let curve = Hermite::new(d, params, values, Some(1.0))?;
        for i in 0..curve.len() {
            let x = curve.sample(i);
            let m = curve.tangent(i);
            let p = dot(x, m);
            let tangential: f64 = m.iter().zip(x).map(|(a, b)| (a - p * b).powi(2)).sum::<f64>().sqrt();
            if tangential < 1e-9 {
                return Err(CurveError::NotRegular(curve.params()[i]));
            }
        }
        Ok(SphereCurve { n, curve })
    }

    /// Sphere dimension `n` (points have `n + 1` coordinates).
    pub fn n(&self) -> usize {
        self.n
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

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let d = self.n + 1;
        let (mut v, mut dv) = (vec![0.0; d], vec![0.0; d]);
        Traced::eval_with_deriv(self, t, &mut v, &mut dv);
        v
    }

    pub fn deriv(&self, t: f64) -> Vec<f64> {
        let d = self.n + 1;
        let (mut v, mut dv) = (vec![0.0; d], vec![0.0; d]);
        Traced::eval_with_deriv(self, t, &mut v, &mut dv);
        dv
    }

    /// `(γ(0), γ′(0)/|γ′(0)|)`.
    pub fn ev(&self) -> (Vec<f64>, Vec<f64>) {
        let p = self.eval(0.0);
        let mut v = self.deriv(0.0);
        let r = norm(&v);
        v.iter_mut().for_each(|x| *x /= r);
        (p, v)
    }

    /// Geodesic through the marked point in the `(y₀, y₁)` plane.
    pub fn great_circle(n: usize, samples: usize) -> Result<Self> {
        let params: Vec<f64> = (0..samples).map(|i| i as f64 / samples as f64).collect();
        let values = params
            .iter()
            .flat_map(|&s| {
                let mut y = vec![0.0; n + 1];
                y[0] = (2.0 * PI * s).cos();
                y[1] = -(2.0 * PI * s).sin();
                y
            })
            .collect();
        Self::from_samples(n, params, values)
    }
}

impl Traced for SphereCurve {
    fn dim(&self) -> usize {
        self.n + 1
    }

    fn num_cells(&self) -> usize {
        self.curve.num_cells()
    }

    fn cell_range(&self, i: usize) -> (f64, f64) {
        self.curve.cell_range(i)
    }

    /// Box of the cubic arc, widened by a bound on how far normalization can
    /// move a point of the box.
    fn cell_box(&self, i: usize) -> Aabb {
        let c = self.curve.cell_controls(i);
        let b = Aabb::of_points(c.iter().map(Vec::as_slice), 0.0);
        let far: f64 = b.lo.iter().zip(&b.hi).map(|(l, h)| l.abs().max(h.abs()).powi(2)).sum::<f64>().sqrt();
        let near: f64 =
            b.lo.iter()
                .zip(&b.hi)
                .map(|(&l, &h)| if l <= 0.0 && h >= 0.0 { 0.0 } else { l.abs().min(h.abs()).powi(2) })
                .sum::<f64>()
                .sqrt();
        let pad = (far - 1.0).max(1.0 - near).max(0.0);
        Aabb::of_points(c.iter().map(Vec::as_slice), pad)
    }

    fn eval_with_deriv(&self, t: f64, value: &mut [f64], deriv: &mut [f64]) {
        self.curve.eval_with_deriv(t, value, deriv);
        let r = norm(value);
        value.iter_mut().for_each(|x| *x /= r);
        let p = dot(value, deriv);
        for (dv, v) in deriv.iter_mut().zip(value.iter()) {
            *dv = (*dv - p * v) / r;
        }
    }

    fn period(&self) -> Option<f64> {
        Some(1.0)
    }
}

fn to_sphere(x: &[f64]) -> Vec<f64> {
    let r2 = dot(x, x);
    let mut y = Vec::with_capacity(x.len() + 1);
    y.push((r2 - 1.0) / (r2 + 1.0));
    y.extend(x.iter().map(|v| 2.0 * v / (r2 + 1.0)));
    y
}

fn from_sphere(y: &[f64]) -> Vec<f64> {
    let denom = 1.0 - y[0];
    y[1..].iter().map(|v| v / denom).collect()
}

fn phi(t: f64) -> f64 {
    0.5 + t.atan() / PI
}

fn phi_inverse(s: f64) -> f64 {
    (PI * (s - 0.5)).tan()
}

/// Inverse stereographic image through the marked point. The central
/// samples are the images of the long curve's samples; the tails follow the
/// axis out to the center.
pub fn compactify(c: &LongCurve) -> SphereCurve {
    let n = c.dim();
    let mut params = vec![0.0];
    let mut values = vec![1.0];
    values.extend(std::iter::repeat_n(0.0, n));
    let axis = |t: f64| {
        let mut x = vec![0.0; n];
        x[0] = t;
        to_sphere(&x)
    };
    let s_first = phi(c.params()[0]);
    let s_last = phi(*c.params().last().expect("nonempty"));
    for k in 1..=TAIL_SAMPLES {
        let s = s_first * k as f64 / (TAIL_SAMPLES + 1) as f64;
        params.push(s);
        values.extend(axis(phi_inverse(s)));
    }
    for (t, x) in c.samples() {
        params.push(phi(t));
        values.extend(to_sphere(x));
    }
    for k in 1..=TAIL_SAMPLES {
        let s = s_last + (1.0 - s_last) * k as f64 / (TAIL_SAMPLES + 1) as f64;
        params.push(s);
        values.extend(axis(phi_inverse(s)));
    }
    SphereCurve::from_samples(n, params, values).expect("stereographic images lie on the sphere")
}

/// Stereographic projection back to a long curve sampled on `grid`.
pub fn decompactify(s: &SphereCurve, grid: &[f64]) -> Result<LongCurve> {
    let n = s.n();
    let mut values = Vec::with_capacity(grid.len() * n);
    for &t in grid {
        if t.abs() >= 1.0 {
            let mut x = vec![0.0; n];
            x[0] = t;
            values.extend(x);
            continue;
        }
        let y = s.eval(phi(t));
        let gap = ((1.0 - y[0]).powi(2) + y[1..].iter().map(|v| v * v).sum::<f64>()).sqrt();
        if gap < CENTER_CLEARANCE {
            return Err(CurveError::PassesThroughCenter(phi(t)));
        }
        values.extend(from_sphere(&y));
    }
    LongCurve::from_samples(n, grid.to_vec(), values)
}

pub fn rotate(r: &Rotation, s: &SphereCurve) -> Result<SphereCurve> {
    if r.dim() != s.n() + 1 {
        return Err(CurveError::DimensionMismatch(s.n() + 1, r.dim()));
    }
    let values = s.samples().flat_map(|(_, y)| r.apply(y)).collect();
    SphereCurve::from_samples(s.n(), s.params().to_vec(), values)
}

/// Sampled loop `(γ(tᵢ), γ′(tᵢ)/|γ′(tᵢ)|)` in the unit tangent bundle.
pub fn one_jet(s: &SphereCurve) -> Vec<(Vec<f64>, Vec<f64>)> {
    s.params()
        .iter()
        .map(|&t| {
            let p = s.eval(t);
            let mut v = s.deriv(t);
            let r = norm(&v);
            v.iter_mut().for_each(|x| *x /= r);
            (p, v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{double_points, DetectOptions, DEFAULT_MARGIN};

    #[test]
    fn axis_goes_to_great_circle() {
        let s = compactify(&LongCurve::trivial(3).unwrap());
        for (_, y) in s.samples() {
            assert!((norm(y) - 1.0).abs() < 1e-15);
            assert_eq!((y[2], y[3]), (0.0, 0.0));
        }
        assert_eq!(s.sample(0), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn round_trip() {
        let c = LongCurve::figure_eight(4).unwrap();
        let back = decompactify(&compactify(&c), c.params()).unwrap();
        assert!(back.sample_distance(&c).unwrap() < 1e-9);
    }

    #[test]
    fn center_is_rejected() {
        let g = SphereCurve::great_circle(3, 200).unwrap();
        // The great circle meets the center only at s = 0 and projects to the
        // axis; the flipped one meets it at s = 1/2, i.e. t = 0.
        let grid = LongCurve::uniform_grid(2049, DEFAULT_MARGIN);
        let flipped = rotate(&Rotation::givens(4, 0, 1, PI), &g).unwrap();
        assert!(matches!(decompactify(&flipped, &grid), Err(CurveError::PassesThroughCenter(_))));
        let axis = decompactify(&g, &grid).unwrap();
        let err = axis.samples().map(|(t, x)| (x[0] - t).abs().max(x[1].abs())).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn double_points_survive_compactification_and_rotation() {
        let c = LongCurve::figure_eight(3).unwrap();
        let s = compactify(&c);
        let opts = DetectOptions::default();
        assert_eq!(double_points(&s, opts).unwrap().len(), 1);
        let r = Rotation::givens(4, 0, 2, 0.9).then(&Rotation::givens(4, 1, 3, -0.4));
        let rs = rotate(&r, &s).unwrap();
        assert_eq!(double_points(&rs, opts).unwrap().len(), 1);
        assert_eq!(double_points(&compactify(&LongCurve::trivial(3).unwrap()), opts).unwrap().len(), 0);
    }

    #[test]
    fn rotation_keeps_unit_norm() {
        let s = compactify(&LongCurve::figure_eight(3).unwrap());
        let rs = rotate(&Rotation::givens(4, 0, 3, 1.3), &s).unwrap();
        for k in 0..500 {
            assert!((norm(&rs.eval(k as f64 / 500.0)) - 1.0).abs() < 1e-12);
        }
        assert_eq!(rotate(&Rotation::identity(4), &s).unwrap(), s);
    }

    #[test]
    fn jet_is_tangent_and_equivariant() {
        let s = compactify(&LongCurve::figure_eight(3).unwrap());
        let jet = one_jet(&s);
        for (p, v) in &jet {
            assert!((norm(v) - 1.0).abs() < 1e-10);
            assert!(dot(p, v).abs() < 1e-8);
        }
        let (p0, v0) = s.ev();
        assert_eq!((&p0, &v0), (&jet[0].0, &jet[0].1));
        let r = Rotation::givens(4, 1, 2, 0.6);
        let rotated = one_jet(&rotate(&r, &s).unwrap());
        for ((p, v), (q, w)) in jet.iter().zip(&rotated) {
            let (rp, rv) = (r.apply(p), r.apply(v));
            for k in 0..4 {
                assert!((rp[k] - q[k]).abs() < 1e-12 && (rv[k] - w[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn great_circle_jet() {
        let g = SphereCurve::great_circle(2, 256).unwrap();
        for (p, v) in one_jet(&g) {
            // The tangent of a great circle is the point rotated by 90°.
            assert!((v[0] - p[1]).abs() < 1e-4 && (v[1] + p[0]).abs() < 1e-4);
        }
    }
}
