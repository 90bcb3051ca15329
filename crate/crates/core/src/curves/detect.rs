//! Self-intersection search: bounding volumes over contiguous cell ranges
//! prune cell pairs, then damped Gauss–Newton on `|f(s) − f(t)|²` refines
//! each surviving candidate.

use rayon::prelude::*;

use super::{dot, norm, CurveError, Result};

/// Minimum number of cells between the two strands of a double point.
pub const DEFAULT_SEP_CELLS: usize = 4;
pub const DEFAULT_TOL: f64 = 1e-8;
/// `|sin|` of the angle between the two tangents below which a crossing is
/// reported as tangential.
const TRANSVERSAL_SIN: f64 = 1e-6;

/// What the detector needs from a curve.
pub trait Traced: Sync {
    fn dim(&self) -> usize;
    fn num_cells(&self) -> usize;
    fn cell_range(&self, i: usize) -> (f64, f64);
    /// Axis-aligned box containing the arc over cell `i`.
    fn cell_box(&self, i: usize) -> Aabb;
    fn eval_with_deriv(&self, t: f64, value: &mut [f64], deriv: &mut [f64]);
    fn period(&self) -> Option<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aabb {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Aabb {
    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a [f64]>, pad: f64) -> Aabb {
        let mut it = points.into_iter();
        let first = it.next().expect("at least one point");
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        for p in it {
            for (k, &x) in p.iter().enumerate() {
                lo[k] = lo[k].min(x);
                hi[k] = hi[k].max(x);
            }
        }
        for k in 0..lo.len() {
            lo[k] -= pad;
            hi[k] += pad;
        }
        Aabb { lo, hi }
    }

    fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }

    fn overlaps(&self, other: &Aabb, tol: f64) -> bool {
        (0..self.lo.len()).all(|k| self.lo[k] <= other.hi[k] + tol && other.lo[k] <= self.hi[k] + tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublePoint {
    pub t1: f64,
    pub t2: f64,
    /// Orthonormal frame of the span of the two tangents (Gram–Schmidt of
    /// `f'(t1)` then `f'(t2)`). For tangential points the second vector is
    /// whatever is left after projection and may be poorly defined.
    pub plane: [Vec<f64>; 2],
    pub transversal: bool,
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectOptions {
    pub tol: f64,
    pub sep_cells: usize,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions { tol: DEFAULT_TOL, sep_cells: DEFAULT_SEP_CELLS }
    }
}

struct Node {
    range: (usize, usize),
    bbox: Aabb,
    children: Option<(usize, usize)>,
}

struct Bvh {
    nodes: Vec<Node>,
}

impl Bvh {
    fn build(boxes: &[Aabb]) -> Bvh {
        let mut bvh = Bvh { nodes: Vec::new() };
        bvh.build_range(boxes, 0, boxes.len());
        bvh
    }

    fn build_range(&mut self, boxes: &[Aabb], a: usize, b: usize) -> usize {
        if b - a == 1 {
            self.nodes.push(Node { range: (a, b), bbox: boxes[a].clone(), children: None });
            return self.nodes.len() - 1;
        }
        let mid = (a + b) / 2;
        let l = self.build_range(boxes, a, mid);
        let r = self.build_range(boxes, mid, b);
        let bbox = self.nodes[l].bbox.union(&self.nodes[r].bbox);
        self.nodes.push(Node { range: (a, b), bbox, children: Some((l, r)) });
        self.nodes.len() - 1
    }
}

struct PairSearch<'a> {
    bvh: &'a Bvh,
    cells: usize,
    sep: usize,
    cyclic: bool,
    tol: f64,
    out: Vec<(usize, usize)>,
}

impl PairSearch<'_> {
    /// True when every cell pair between the two ranges is too close in
    /// index to count.
    fn all_too_close(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        let d_max = (b.1 - 1).saturating_sub(a.0).max((a.1 - 1).saturating_sub(b.0));
        if d_max < self.sep {
            return true;
        }
        if self.cyclic {
            let d_min = if a.1 <= b.0 {
                b.0 - (a.1 - 1)
            } else if b.1 <= a.0 {
                a.0 - (b.1 - 1)
            } else {
                0
            };
            if d_min > self.cells - self.sep {
                return true;
            }
        }
        false
    }

    fn visit(&mut self, x: usize, y: usize) {
        let (nx, ny) = (&self.bvh.nodes[x], &self.bvh.nodes[y]);
        if self.all_too_close(nx.range, ny.range) {
            return;
        }
        if x != y && !nx.bbox.overlaps(&ny.bbox, self.tol) {
            return;
        }
        match (nx.children, ny.children) {
            (None, None) => {
                if x != y {
                    self.out.push((nx.range.0, ny.range.0));
                }
            }
            _ if x == y => {
                let (l, r) = nx.children.expect("inner node");
                self.visit(l, l);
                self.visit(l, r);
                self.visit(r, r);
            }
            (Some((l, r)), _)
                if ny.children.is_none() || nx.range.1 - nx.range.0 >= ny.range.1 - ny.range.0 =>
            {
                self.visit(l, y);
                self.visit(r, y);
            }
            (_, Some((l, r))) => {
                self.visit(x, l);
                self.visit(x, r);
            }
            _ => unreachable!(),
        }
    }
}

/// Refines a candidate pair inside the window `[lo, hi]` of each parameter.
/// Returns the local minimizer of the squared distance, if it stays inside.
fn refine<C: Traced + ?Sized>(c: &C, s_win: (f64, f64), t_win: (f64, f64)) -> Option<(f64, f64, f64)> {
    let d = c.dim();
    let (mut fs, mut ds, mut ft, mut dt) = (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    let mut s = 0.5 * (s_win.0 + s_win.1);
    let mut t = 0.5 * (t_win.0 + t_win.1);
    let mut residual = vec![0.0; d];
    let cost_at =
        |s: f64, t: f64, fs: &mut [f64], ds: &mut [f64], ft: &mut [f64], dt: &mut [f64], r: &mut [f64]| {
            c.eval_with_deriv(s, fs, ds);
            c.eval_with_deriv(t, ft, dt);
            for k in 0..d {
                r[k] = fs[k] - ft[k];
            }
            dot(r, r)
        };
    let mut cost = cost_at(s, t, &mut fs, &mut ds, &mut ft, &mut dt, &mut residual);
    let mut lambda = 1e-3;
    let scale = (s_win.1 - s_win.0).max(t_win.1 - t_win.0);
    for _ in 0..100 {
        if cost < 1e-34 {
            break;
        }
        let a11 = dot(&ds, &ds);
        let a22 = dot(&dt, &dt);
        let a12 = -dot(&ds, &dt);
        let g1 = dot(&ds, &residual);
        let g2 = -dot(&dt, &residual);
        let mut improved = false;
        for _ in 0..30 {
            let m11 = a11 * (1.0 + lambda);
            let m22 = a22 * (1.0 + lambda);
            let det = m11 * m22 - a12 * a12;
            if det <= 0.0 || !det.is_finite() {
                lambda *= 4.0;
                continue;
            }
            let step_s = (-g1 * m22 + g2 * a12) / det;
            let step_t = (-g2 * m11 + g1 * a12) / det;
            let (ns, nt) = (s + step_s, t + step_t);
            let (mut fs2, mut ds2, mut ft2, mut dt2, mut r2) =
                (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
            let nc = cost_at(ns, nt, &mut fs2, &mut ds2, &mut ft2, &mut dt2, &mut r2);
            if nc <= cost {
                let small = step_s.abs().max(step_t.abs()) < 1e-17 * scale.max(1.0);
                s = ns;
                t = nt;
                cost = nc;
                ds = ds2;
                dt = dt2;
                residual = r2;
                lambda = (lambda / 3.0).max(1e-12);
                improved = !small;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
        if s < s_win.0 || s > s_win.1 || t < t_win.0 || t > t_win.1 {
            return None;
        }
    }
    if s < s_win.0 || s > s_win.1 || t < t_win.0 || t > t_win.1 {
        return None;
    }
    Some((s, t, cost.sqrt()))
}

/// All self-intersections of `c` within `opts.tol`, sorted by `t1`.
pub fn double_points<C: Traced + ?Sized>(c: &C, opts: DetectOptions) -> Result<Vec<DoublePoint>> {
    let cells = c.num_cells();
    let cyclic = c.period().is_some();
    if cells <= opts.sep_cells {
        return Ok(Vec::new());
    }
    let boxes: Vec<Aabb> = (0..cells).into_par_iter().map(|i| c.cell_box(i)).collect();
    let bvh = Bvh::build(&boxes);
    let mut search =
        PairSearch { bvh: &bvh, cells, sep: opts.sep_cells, cyclic, tol: opts.tol, out: Vec::new() };
    let root = bvh.nodes.len() - 1;
    search.visit(root, root);
    let mut pairs = search.out;
    for p in &mut pairs {
        if p.0 > p.1 {
            *p = (p.1, p.0);
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let window = |i: usize| {
        let (a, b) = c.cell_range(i);
        let h = b - a;
        (a - h, b + h)
    };
    let mut found: Vec<(f64, f64, f64)> = pairs
        .par_iter()
        .filter_map(|&(i, j)| refine(c, window(i), window(j)))
        .filter(|&(_, _, dist)| dist < opts.tol)
        .map(|(s, t, dist)| match c.period() {
            Some(p) => {
                let (s, t) = (s.rem_euclid(p), t.rem_euclid(p));
                if s <= t {
                    (s, t, dist)
                } else {
                    (t, s, dist)
                }
            }
            None => {
                if s <= t {
                    (s, t, dist)
                } else {
                    (t, s, dist)
                }
            }
        })
        .collect();
    found.sort_by(|a, b| a.partial_cmp(b).expect("finite parameters"));

    // Neighbouring cell pairs converge to the same point.
    let cell_of = |t: f64| -> usize {
        let mut lo = 0;
        let mut hi = cells;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if c.cell_range(mid).0 <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let cell_gap = |a: usize, b: usize| {
        let d = a.abs_diff(b);
        if cyclic {
            d.min(cells - d)
        } else {
            d
        }
    };
    let same = |x: &(f64, f64, f64), y: &(f64, f64, f64)| {
        let scale = 1e-7;
        (x.0 - y.0).abs() < scale && (x.1 - y.1).abs() < scale
    };
    let mut unique: Vec<(f64, f64, f64)> = Vec::new();
    for f in found {
        if let Some(u) = unique.iter_mut().find(|u| same(u, &f)) {
            if f.2 < u.2 {
                *u = f;
            }
        } else {
            unique.push(f);
        }
    }
    for (k, x) in unique.iter().enumerate() {
        for y in &unique[k + 1..] {
            if cell_gap(cell_of(x.0), cell_of(y.0)) < opts.sep_cells
                && cell_gap(cell_of(x.1), cell_of(y.1)) < opts.sep_cells
            {
                return Err(CurveError::SingularityCluster { t1: x.0, t2: x.1 });
            }
        }
    }

    let d = c.dim();
    let mut out: Vec<DoublePoint> = unique
        .into_iter()
        .map(|(t1, t2, distance)| {
            let (mut v, mut a, mut b) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
            c.eval_with_deriv(t1, &mut v, &mut a);
            c.eval_with_deriv(t2, &mut v, &mut b);
            let na = norm(&a);
            let e1: Vec<f64> = a.iter().map(|x| x / na).collect();
            let proj = dot(&b, &e1);
            let mut e2: Vec<f64> = b.iter().zip(&e1).map(|(x, e)| x - proj * e).collect();
            let ne2 = norm(&e2);
            let sin = ne2 / norm(&b);
            if ne2 > 0.0 {
                e2.iter_mut().for_each(|x| *x /= ne2);
            }
            DoublePoint { t1, t2, plane: [e1, e2], transversal: sin > TRANSVERSAL_SIN, distance }
        })
        .collect();
    out.sort_by(|a, b| a.t1.partial_cmp(&b.t1).expect("finite parameters"));
    Ok(out)
}
