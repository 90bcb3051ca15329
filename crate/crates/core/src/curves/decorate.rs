//! Double points decorated with normal vectors, and their resolution
//!
//! ```text
//! σ(γ)(t) = γ(t) + Σᵢ (−1)^{aᵢ} δ exp(1 − 1/(1 − uᵢ²)) vᵢ,   uᵢ = (t − tᵢ)/ε
//! ```
//!
//! where `tᵢ` is the parameter `t1` (a = 1) or `t2` (a = 2) of the i-th double
//! point and the bump vanishes for `|uᵢ| ≥ 1`.

use super::detect::{double_points, DetectOptions, DoublePoint};
use super::{bump, dot, norm, CurveError, LongCurve, Result, Rotation};

pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_DELTA: f64 = 0.01;
pub const AUTO_HALVINGS: u32 = 40;
const ORTHO_TOL: f64 = 1e-9;
/// How close `f(t1)` and `f(t2)` must be for a decoration read from a file.
const COINCIDENCE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct Decoration {
    pub point: DoublePoint,
    pub v: Vec<f64>,
    pub a: u8,
}

impl Decoration {
    /// The parameter whose strand is pushed.
    pub fn chosen(&self) -> f64 {
        if self.a == 1 {
            self.point.t1
        } else {
            self.point.t2
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedImmersion {
    curve: LongCurve,
    decorations: Vec<Decoration>,
}

/// Unit vector orthogonal to both frame vectors: Gram–Schmidt of `seed`.
pub fn normal_fiber_vector(plane: &[Vec<f64>; 2], seed: &[f64]) -> Result<Vec<f64>> {
    let mut v = seed.to_vec();
    for e in plane {
        let p = dot(&v, e);
        v.iter_mut().zip(e).for_each(|(x, y)| *x -= p * y);
    }
    // Second pass for orthogonality to machine precision.
    for e in plane {
        let p = dot(&v, e);
        v.iter_mut().zip(e).for_each(|(x, y)| *x -= p * y);
    }
    let r = norm(&v);
    if r < 1e-9 * norm(seed).max(1.0) {
        return Err(CurveError::DegenerateSeed);
    }
    v.iter_mut().for_each(|x| *x /= r);
    Ok(v)
}

impl DecoratedImmersion {
    pub fn new(curve: LongCurve, decorations: Vec<Decoration>) -> Result<Self> {
        let n = curve.dim();
        for (i, d) in decorations.iter().enumerate() {
            let bad = |msg: &str| CurveError::InvalidDecoration { index: i, msg: msg.to_string() };
            if d.v.len() != n {
                return Err(bad("vector has the wrong dimension"));
            }
            if d.a != 1 && d.a != 2 {
                return Err(bad("sign choice must be 1 or 2"));
            }
            if !d.point.transversal {
                return Err(bad("double point is not transversal"));
            }
            if (norm(&d.v) - 1.0).abs() > ORTHO_TOL {
                return Err(bad("vector is not a unit vector"));
            }
            if d.point.plane.iter().any(|e| dot(e, &d.v).abs() > ORTHO_TOL) {
                return Err(bad("vector is not orthogonal to the tangent plane"));
            }
            if !(d.point.t1 < d.point.t2) {
                return Err(bad("parameters must satisfy t1 < t2"));
            }
        }
        let mut params: Vec<f64> = decorations.iter().flat_map(|d| [d.point.t1, d.point.t2]).collect();
        params.sort_by(f64::total_cmp);
        if params.windows(2).any(|w| w[0] == w[1]) {
            return Err(CurveError::InvalidDecoration {
                index: 0,
                msg: "decorations share a parameter".into(),
            });
        }
        Ok(DecoratedImmersion { curve, decorations })
    }

    /// Detects the double points of `curve` and decorates them in order of
    /// `t1` with the projections of `seeds` onto the normal fibres.
    pub fn decorate(curve: LongCurve, seeds: &[Vec<f64>], signs: &[u8], opts: DetectOptions) -> Result<Self> {
        let points = double_points(&curve, opts)?;
        if points.len() != seeds.len() || points.len() != signs.len() {
            return Err(CurveError::DecorationCount {
                expected: points.len(),
                found: seeds.len().min(signs.len()),
            });
        }
        let decorations = points
            .into_iter()
            .zip(seeds)
            .zip(signs)
            .map(|((point, seed), &a)| {
                let v = normal_fiber_vector(&point.plane, seed)?;
                Ok(Decoration { point, v, a })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(curve, decorations)
    }

    /// Rebuilds decorations from stored `(t1, t2, v, a)`; the tangent plane
    /// is recomputed from the curve.
    pub fn from_parts(curve: LongCurve, parts: &[(f64, f64, Vec<f64>, u8)]) -> Result<Self> {
        let decorations = parts
            .iter()
            .enumerate()
            .map(|(i, (t1, t2, v, a))| {
                let gap = norm(
                    &curve.eval(*t1).iter().zip(curve.eval(*t2)).map(|(x, y)| x - y).collect::<Vec<_>>(),
                );
                if gap > COINCIDENCE_TOL {
                    return Err(CurveError::InvalidDecoration {
                        index: i,
                        msg: format!("f(t1) and f(t2) are {gap:e} apart"),
                    });
                }
                Ok(Decoration { point: point_at(&curve, *t1, *t2, gap), v: v.clone(), a: *a })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(curve, decorations)
    }

    pub fn curve(&self) -> &LongCurve {
        &self.curve
    }

    pub fn decorations(&self) -> &[Decoration] {
        &self.decorations
    }

    pub fn k(&self) -> usize {
        self.decorations.len()
    }

    pub fn with_signs(&self, signs: &[u8]) -> Result<Self> {
        if signs.len() != self.k() {
            return Err(CurveError::DecorationCount { expected: self.k(), found: signs.len() });
        }
        let mut d = self.decorations.clone();
        for (x, &a) in d.iter_mut().zip(signs) {
            x.a = a;
        }
        Self::new(self.curve.clone(), d)
    }

    /// Replaces every vector by its negative and flips every sign choice.
    pub fn antipodal(&self) -> Self {
        let mut d = self.decorations.clone();
        for x in &mut d {
            x.v.iter_mut().for_each(|c| *c = -*c);
            x.a = 3 - x.a;
        }
        DecoratedImmersion { curve: self.curve.clone(), decorations: d }
    }

    /// Concatenation carrying the decorations along the squeeze.
    pub fn concat(&self, other: &DecoratedImmersion) -> Result<Self> {
        let curve = self.curve.concat(&other.curve)?;
        let mut decorations = Vec::with_capacity(self.k() + other.k());
        for (src, alpha) in [(self, -1.0), (other, 0.0)] {
            for d in &src.decorations {
                let moved = |t: f64| alpha + 0.5 * (t + 1.0);
                let mut point = d.point.clone();
                point.t1 = moved(point.t1);
                point.t2 = moved(point.t2);
                decorations.push(Decoration { point, v: d.v.clone(), a: d.a });
            }
        }
        Self::new(curve, decorations)
    }

    pub fn rotated(&self, r: &Rotation) -> Result<Self> {
        let curve = self.curve.rotated(r)?;
        let decorations = self
            .decorations
            .iter()
            .map(|d| {
                let mut point = d.point.clone();
                point.plane = [r.apply(&point.plane[0]), r.apply(&point.plane[1])];
                Decoration { point, v: r.apply(&d.v), a: d.a }
            })
            .collect();
        Self::new(curve, decorations)
    }
}

fn point_at(curve: &LongCurve, t1: f64, t2: f64, distance: f64) -> DoublePoint {
    let a = curve.deriv(t1);
    let b = curve.deriv(t2);
    let na = norm(&a);
    let e1: Vec<f64> = a.iter().map(|x| x / na).collect();
    let p = dot(&b, &e1);
    let mut e2: Vec<f64> = b.iter().zip(&e1).map(|(x, e)| x - p * e).collect();
    let ne2 = norm(&e2);
    let transversal = ne2 / norm(&b) > 1e-6;
    if ne2 > 0.0 {
        e2.iter_mut().for_each(|x| *x /= ne2);
    }
    DoublePoint { t1, t2, plane: [e1, e2], transversal, distance }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpParams {
    pub eps: f64,
    pub delta: f64,
}

pub fn resolve(d: &DecoratedImmersion, eps: f64, delta: f64) -> Result<LongCurve> {
    resolve_each(d, &vec![BumpParams { eps, delta }; d.k()])
}

/// Resolution with one `(ε, δ)` per decoration.
pub fn resolve_each(d: &DecoratedImmersion, params: &[BumpParams]) -> Result<LongCurve> {
    if params.len() != d.k() {
        return Err(CurveError::DecorationCount { expected: d.k(), found: params.len() });
    }
    if d.k() == 0 {
        return Ok(d.curve.clone());
    }
    let all: Vec<f64> = d.decorations.iter().flat_map(|x| [x.point.t1, x.point.t2]).collect();
    for (i, (dec, p)) in d.decorations.iter().zip(params).enumerate() {
        if !(p.eps > 0.0 && p.delta > 0.0 && p.eps.is_finite() && p.delta.is_finite()) {
            return Err(CurveError::InvalidParameters(format!(
                "eps and delta must be positive, got ({}, {})",
                p.eps, p.delta
            )));
        }
        let t0 = dec.chosen();
        let crowded = all.iter().filter(|&&t| t != t0).any(|&t| (t - t0).abs() < p.eps);
        if crowded || t0.abs() > 1.0 - p.eps {
            return Err(CurveError::EpsilonOverlap { index: i, eps: p.eps });
        }
    }
    let n = d.curve.dim();
    let mut offsets = vec![0.0; d.curve.len() * n];
    for (dec, p) in d.decorations.iter().zip(params) {
        let t0 = dec.chosen();
        let sign = if dec.a == 1 { -1.0 } else { 1.0 };
        for (j, &t) in d.curve.params().iter().enumerate() {
            let b = bump((t - t0) / p.eps);
            if b == 0.0 {
                continue;
            }
            for k in 0..n {
                offsets[j * n + k] += sign * p.delta * b * dec.v[k];
            }
        }
    }
    d.curve.displaced(&offsets)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutoParameters {
    pub eps: f64,
    pub delta: f64,
    pub halvings: u32,
    pub curve: LongCurve,
}

/// Shrinks `(ε, δ)` geometrically from data-driven initial guesses until the
/// resolution is embedded.
pub fn auto_parameters(d: &DecoratedImmersion, opts: DetectOptions) -> Result<AutoParameters> {
    if d.k() == 0 {
        return Ok(AutoParameters {
            eps: DEFAULT_EPS,
            delta: DEFAULT_DELTA,
            halvings: 0,
            curve: d.curve.clone(),
        });
    }
    let mut marks: Vec<f64> =
        d.decorations.iter().flat_map(|x| [x.point.t1, x.point.t2]).chain([-1.0, 1.0]).collect();
    marks.sort_by(f64::total_cmp);
    let gap = marks.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let mut eps = 0.5 * gap;

    let mut clearance = f64::INFINITY;
    for dec in &d.decorations {
        let p = d.curve.eval(dec.point.t1);
        for (t, x) in d.curve.samples() {
            if (t - dec.point.t1).abs() < eps || (t - dec.point.t2).abs() < eps {
                continue;
            }
            let dist = norm(&p.iter().zip(x).map(|(a, b)| a - b).collect::<Vec<_>>());
            if dist > 0.0 {
                clearance = clearance.min(dist);
            }
        }
    }
    let mut delta: f64 = if clearance.is_finite() { 0.1 * clearance } else { DEFAULT_DELTA };

    let mut remaining = d.k();
    for halvings in 0..=AUTO_HALVINGS {
        if let Ok(curve) = resolve(d, eps, delta) {
            match double_points(&curve, opts) {
                Ok(points) if points.is_empty() => return Ok(AutoParameters { eps, delta, halvings, curve }),
                Ok(points) => remaining = points.len(),
                Err(_) => {}
            }
        }
        eps *= 0.5;
        delta *= 0.5;
    }
    Err(CurveError::NoValidParameters {
        halvings: AUTO_HALVINGS,
        eps: eps * 2.0,
        delta: delta * 2.0,
        remaining,
    })
}
