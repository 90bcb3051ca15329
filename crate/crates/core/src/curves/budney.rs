//! A long immersion with two interleaved double points whose standard
//! resolution is the trefoil, and the two-sphere family of its resolutions.
//!
//! The base is a planar trefoil diagram, cut open at an outer lobe and joined
//! to the axis, with one of its three crossings lifted off the plane so only
//! two genuine double points remain.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use super::detect::{Aabb, Traced};
use super::{
    auto_parameters, bump, double_points, CurveError, DecoratedImmersion, DetectOptions, DoublePoint,
    Hermite, LongCurve, Result,
};

const TREFOIL_CUT: f64 = 0.25;
const TURN_RADIUS: f64 = 0.3;
const SCALE: f64 = 0.17;
const LIFT: f64 = 0.04;

fn trefoil(s: f64) -> [f64; 2] {
    [s.sin() + 2.0 * (2.0 * s).sin(), s.cos() - 2.0 * (2.0 * s).cos()]
}

/// Planar waypoints from `(−1, 0)` to `(1, 0)`, already scaled into the disk.
fn waypoints() -> Vec<[f64; 2]> {
    let a = trefoil(PI - TREFOIL_CUT);
    let b = trefoil(-PI + TREFOIL_CUT);
    let r = TURN_RADIUS;
    let mut inner = Vec::new();
    for k in 0..40 {
        let th = -PI / 2.0 + PI * k as f64 / 40.0;
        inner.push([a[0] + r * th.cos(), a[1] - r + r * th.sin()]);
    }
    for k in 0..=400 {
        let s = (PI - TREFOIL_CUT) - (2.0 * PI - 2.0 * TREFOIL_CUT) * k as f64 / 400.0;
        inner.push(trefoil(s));
    }
    for k in 1..=39 {
        let th = PI / 2.0 + PI * k as f64 / 39.0;
        inner.push([b[0] + r * th.cos(), b[1] - r + r * th.sin()]);
    }
    let floor = a[1] - 2.0 * r;
    let scaled: Vec<[f64; 2]> = inner.iter().map(|p| [SCALE * p[0], SCALE * (p[1] - floor)]).collect();

    let step = 0.02;
    let (first, last) = (scaled[0][0], scaled[scaled.len() - 1][0]);
    let mut out = Vec::new();
    let mut x = -1.0;
    while x < first - step / 2.0 {
        out.push([x, 0.0]);
        x += step;
    }
    out.extend(scaled);
    let count = ((1.0 - last) / step).round().max(1.0) as usize;
    for k in 1..=count {
        out.push([last + (1.0 - last) * k as f64 / count as f64, 0.0]);
    }
    out
}

/// Chord-length spline through the waypoints, over `[−1, 1]`.
fn planar_spline() -> Hermite {
    let pts = waypoints();
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        let d = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
        cum.push(cum.last().unwrap() + d);
    }
    let total = *cum.last().unwrap();
    let mut params: Vec<f64> = cum.iter().map(|c| -1.0 + 2.0 * c / total).collect();
    *params.last_mut().unwrap() = 1.0;
    let values = pts.iter().flat_map(|p| p.iter().copied()).collect();
    Hermite::new(2, params, values, None).expect("waypoints are distinct")
}

fn lifted(n: usize, grid: &[f64], spline: &Hermite, lift: Option<(f64, f64)>) -> Result<LongCurve> {
    LongCurve::from_fn(n, grid, |t| {
        let mut x = vec![0.0; n];
        if t.abs() >= 1.0 {
            x[0] = t;
            return x;
        }
        let p = spline.eval(t);
        x[0] = p[0];
        x[1] = p[1];
        if let Some((center, width)) = lift {
            x[2] = LIFT * bump((t - center) / width);
        }
        x
    })
}

/// The base immersion in ℝⁿ on the default grid: a long trefoil diagram in
/// the `(x₁, x₂)` plane with its last crossing lifted in `x₃`. It has two
/// double points at `t₁ < t₂ < t₃ < t₄`, `γ(t₁) = γ(t₃)`, `γ(t₂) = γ(t₄)`.
pub fn base_immersion(n: usize) -> Result<LongCurve> {
    if n < 3 {
        return Err(CurveError::DimensionTooSmall(n));
    }
    let grid = LongCurve::default_grid();
    let spline = planar_spline();
    let flat = lifted(n, &grid, &spline, None)?;
    let mut crossings = double_points(&flat, DetectOptions::default())?;
    if crossings.len() != 3 {
        return Err(CurveError::Malformed(format!("planar diagram has {} crossings", crossings.len())));
    }
    crossings.sort_by(|p, q| p.t1.total_cmp(&q.t1));
    // Third crossing, second passage: pushed over so that the resolution
    // below it alternates.
    let center = crossings[2].t2;
    let gap = crossings
        .iter()
        .flat_map(|p| [p.t1, p.t2])
        .filter(|&t| t != center)
        .chain([-1.0, 1.0])
        .map(|t| (t - center).abs())
        .fold(f64::INFINITY, f64::min);
    lifted(n, &grid, &spline, Some((center, gap / 2.0)))
}

/// Decorates the base with `v1` at the first double point and `v2` at the
/// second, both with sign `a = 1`, and resolves with automatic parameters.
pub fn budney_family(v1: &[f64], v2: &[f64]) -> Result<LongCurve> {
    if v1.len() != v2.len() {
        return Err(CurveError::DimensionMismatch(v1.len(), v2.len()));
    }
    let base = base_immersion(v1.len())?;
    resolve_base(&base, v1, v2)
}

fn resolve_base(base: &LongCurve, v1: &[f64], v2: &[f64]) -> Result<LongCurve> {
    let opts = DetectOptions::default();
    let d = DecoratedImmersion::decorate(base.clone(), &[v1.to_vec(), v2.to_vec()], &[1, 1], opts)?;
    Ok(auto_parameters(&d, opts)?.curve)
}

/// `v1 = e₃`, `v2 = −e₃`.
pub fn standard_resolution(n: usize) -> Result<LongCurve> {
    if n < 3 {
        return Err(CurveError::DimensionTooSmall(n));
    }
    let mut v1 = vec![0.0; n];
    v1[2] = 1.0;
    let v2: Vec<f64> = v1.iter().map(|x| -x).collect();
    budney_family(&v1, &v2)
}

/// `count` well-spread unit vectors in ℝ^`dim`: the Fibonacci lattice for
/// `dim = 3`, a Kronecker sequence pushed through Box–Muller otherwise.
pub fn fibonacci_sphere(dim: usize, count: usize) -> Vec<Vec<f64>> {
    match dim {
        0 => vec![],
        1 => (0..count).map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 }]).collect(),
        2 => (0..count)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / count as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let th = golden * i as f64;
                    vec![r * th.cos(), r * th.sin(), z]
                })
                .collect()
        }
        _ => {
            let pairs = dim.div_ceil(2);
            let m = 2 * pairs;
            // Generalized golden ratio: the root of x^{m+1} = x + 1.
            let mut g = 1.5f64;
            for _ in 0..64 {
                g = (1.0 + g).powf(1.0 / (m as f64 + 1.0));
            }
            let alpha: Vec<f64> = (1..=m).map(|j| g.powi(-(j as i32)).fract()).collect();
            (1..=count)
                .map(|i| {
                    let u: Vec<f64> = alpha.iter().map(|a| (0.5 + a * i as f64).fract()).collect();
                    let mut v: Vec<f64> = (0..pairs)
                        .flat_map(|p| {
                            let r = (-2.0 * (1.0 - u[2 * p]).ln()).sqrt();
                            let th = 2.0 * PI * u[2 * p + 1];
                            [r * th.cos(), r * th.sin()]
                        })
                        .take(dim)
                        .collect();
                    let len = super::norm(&v);
                    v.iter_mut().for_each(|x| *x /= len);
                    v
                })
                .collect()
        }
    }
}

/// Points of S^{n−3} placed in the coordinates normal to the diagram plane.
pub fn fiber_grid(n: usize, count: usize) -> Vec<Vec<f64>> {
    fibonacci_sphere(n.saturating_sub(2), count)
        .into_iter()
        .map(|p| {
            let mut v = vec![0.0; n];
            v[2..].copy_from_slice(&p);
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudneyOutcome {
    pub n: usize,
    pub total: usize,
    pub embedded: usize,
    /// Grid indices `(i, j)` whose resolution failed, with the reason.
    pub failures: Vec<(usize, usize, String)>,
}

impl fmt::Display for BudneyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} embedded", self.embedded, self.total)
    }
}

/// Resolves the base at every pair of a `grid × grid` sample of
/// S^{n−3} × S^{n−3} and checks each output is embedded.
pub fn budney_sweep(n: usize, grid: usize) -> Result<BudneyOutcome> {
    let base = base_immersion(n)?;
    let fiber = fiber_grid(n, grid);
    let opts = DetectOptions::default();
    let results: Vec<(usize, usize, std::result::Result<(), String>)> = (0..grid * grid)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / grid, k % grid);
            let r = resolve_base(&base, &fiber[i], &fiber[j]).map_err(|e| e.to_string()).and_then(|c| {
                match double_points(&c, opts) {
                    Ok(p) if p.is_empty() => Ok(()),
                    Ok(p) => Err(format!("{} double points remain", p.len())),
                    Err(e) => Err(e.to_string()),
                }
            });
            (i, j, r)
        })
        .collect();
    let failures: Vec<_> = results.into_iter().filter_map(|(i, j, r)| r.err().map(|e| (i, j, e))).collect();
    Ok(BudneyOutcome { n, total: grid * grid, embedded: grid * grid - failures.len(), failures })
}

/// One passage through a crossing of a knot diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub label: usize,
    pub over: bool,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussCode(pub Vec<Crossing>);

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|c| {
                format!("{}{}{}", if c.over { 'O' } else { 'U' }, c.label, if c.sign > 0 { '+' } else { '-' })
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl GaussCode {
    /// Labels renumbered 1, 2, … in order of first appearance.
    fn relabeled(&self) -> GaussCode {
        let mut seen: Vec<usize> = Vec::new();
        GaussCode(
            self.0
                .iter()
                .map(|c| {
                    let pos = seen.iter().position(|&l| l == c.label).unwrap_or_else(|| {
                        seen.push(c.label);
                        seen.len() - 1
                    });
                    Crossing { label: pos + 1, ..*c }
                })
                .collect(),
        )
    }

    fn rotated(&self, k: usize) -> GaussCode {
        let mut v = self.0.clone();
        v.rotate_left(k);
        GaussCode(v)
    }

    fn mirrored(&self) -> GaussCode {
        GaussCode(self.0.iter().map(|c| Crossing { label: c.label, over: !c.over, sign: -c.sign }).collect())
    }
}

/// The (x₁, x₂) shadow of a long curve, as a planar curve.
struct Shadow(Hermite);

impl Traced for Shadow {
    fn dim(&self) -> usize {
        2
    }

    fn num_cells(&self) -> usize {
        self.0.num_cells()
    }

    fn cell_range(&self, i: usize) -> (f64, f64) {
        self.0.cell_range(i)
    }

    fn cell_box(&self, i: usize) -> Aabb {
        let c = self.0.cell_controls(i);
        Aabb::of_points(c.iter().map(Vec::as_slice), 0.0)
    }

    fn eval_with_deriv(&self, t: f64, value: &mut [f64], deriv: &mut [f64]) {
        self.0.eval_with_deriv(t, value, deriv)
    }

    fn period(&self) -> Option<f64> {
        None
    }
}

/// Gauss code of the projection to the first two coordinates, height read
/// from `x₃`. Every crossing of the shadow must be transversal and have
/// distinct heights.
pub fn gauss_code(c: &LongCurve) -> Result<GaussCode> {
    let values = c.samples().flat_map(|(_, x)| [x[0], x[1]]).collect();
    let shadow = Shadow(Hermite::new(2, c.params().to_vec(), values, None)?);
    let points = double_points(&shadow, DetectOptions::default())?;
    let mut passages = Vec::new();
    for (label, p) in points.iter().enumerate() {
        if !p.transversal {
            return Err(CurveError::Malformed(format!("tangential crossing at ({}, {})", p.t1, p.t2)));
        }
        let (h1, h2) = (c.eval(p.t1)[2], c.eval(p.t2)[2]);
        if (h1 - h2).abs() < 1e-9 {
            return Err(CurveError::Malformed(format!("crossing at ({}, {}) is a double point", p.t1, p.t2)));
        }
        let sign = crossing_sign(c, p, h1 > h2);
        passages.push((p.t1, Crossing { label, over: h1 > h2, sign }));
        passages.push((p.t2, Crossing { label, over: h2 > h1, sign }));
    }
    passages.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(GaussCode(passages.into_iter().map(|(_, c)| c).collect()).relabeled())
}

fn crossing_sign(c: &LongCurve, p: &DoublePoint, first_over: bool) -> i8 {
    let (d1, d2) = (c.deriv(p.t1), c.deriv(p.t2));
    let (over, under) = if first_over { (d1, d2) } else { (d2, d1) };
    if over[0] * under[1] - over[1] * under[0] > 0.0 {
        1
    } else {
        -1
    }
}

/// Whether the code is the trefoil's `O1+ U2+ O3+ U1+ O2+ U3+` up to cyclic
/// rotation and mirror image.
pub fn is_trefoil_code(code: &GaussCode) -> bool {
    let trefoil: Vec<Crossing> =
        (0..6).map(|i| Crossing { label: i % 3 + 1, over: i % 2 == 0, sign: 1 }).collect();
    let target = GaussCode(trefoil);
    if code.0.len() != 6 {
        return false;
    }
    (0..6).any(|k| {
        let r = code.rotated(k);
        r.relabeled() == target || r.mirrored().relabeled() == target
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_points_are_unit() {
        for dim in 1..=6 {
            let pts = fibonacci_sphere(dim, 37);
            assert_eq!(pts.len(), 37);
            for p in &pts {
                assert_eq!(p.len(), dim);
                assert!((super::super::norm(p) - 1.0).abs() < 1e-12);
            }
        }
        let g = fiber_grid(5, 10);
        assert!(g.iter().all(|v| v[0] == 0.0 && v[1] == 0.0));
    }

    #[test]
    fn planar_diagram_has_three_crossings() {
        let flat = lifted(3, &LongCurve::default_grid(), &planar_spline(), None).unwrap();
        let mut pts = double_points(&flat, DetectOptions::default()).unwrap();
        assert_eq!(pts.len(), 3);
        pts.sort_by(|p, q| p.t1.total_cmp(&q.t1));
        // Passage order 1 2 3 1 2 3.
        assert!(pts[0].t1 < pts[1].t1 && pts[1].t1 < pts[2].t1 && pts[2].t1 < pts[0].t2);
        assert!(pts[0].t2 < pts[1].t2 && pts[1].t2 < pts[2].t2);
        assert!(pts.iter().all(|p| p.transversal));
    }

    #[test]
    fn base_has_interleaved_double_points() {
        let base = base_immersion(3).unwrap();
        let pts = double_points(&base, DetectOptions::default()).unwrap();
        assert_eq!(pts.len(), 2);
        let (p, q) = if pts[0].t1 < pts[1].t1 { (&pts[0], &pts[1]) } else { (&pts[1], &pts[0]) };
        assert!(p.t1 < q.t1 && q.t1 < p.t2 && p.t2 < q.t2);
        assert!(pts.iter().all(|p| p.transversal));
        assert!(matches!(base_immersion(2), Err(CurveError::DimensionTooSmall(2))));
    }

    #[test]
    fn standard_resolution_is_trefoil() {
        let c = standard_resolution(3).unwrap();
        let code = gauss_code(&c).unwrap();
        assert!(is_trefoil_code(&code), "{code}");
    }

    #[test]
    fn same_side_resolution_is_not_trefoil() {
        let mut v = vec![0.0; 3];
        v[2] = 1.0;
        let c = budney_family(&v, &v).unwrap();
        let code = gauss_code(&c).unwrap();
        assert_eq!(code.0.len(), 6);
        assert!(!is_trefoil_code(&code), "{code}");
    }

    #[test]
    fn code_recognition() {
        let parse = |s: &str| {
            GaussCode(
                s.split(' ')
                    .map(|w| {
                        let b = w.as_bytes();
                        Crossing {
                            label: (b[1] - b'0') as usize,
                            over: b[0] == b'O',
                            sign: if b[2] == b'+' { 1 } else { -1 },
                        }
                    })
                    .collect(),
            )
        };
        assert!(is_trefoil_code(&parse("O1+ U2+ O3+ U1+ O2+ U3+")));
        assert!(is_trefoil_code(&parse("U2- O3- U1- O2- U3- O1-")));
        assert!(is_trefoil_code(&parse("U1+ O2+ U3+ O1+ U2+ O3+")));
        assert!(!is_trefoil_code(&parse("O1+ U2+ O3+ U1+ O2+ U3-")));
        assert!(!is_trefoil_code(&parse("O1+ U1+ O2+ U2+ O3+ U3+")));
        assert_eq!(parse("O1+ U2- O3+ U1+ O2- U3+").to_string(), "O1+ U2- O3+ U1+ O2- U3+");
    }
}
