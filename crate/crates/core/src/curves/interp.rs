//! Piecewise cubic Hermite interpolation on a strictly increasing grid.
//! Tangents are three-point estimates (exact on quadratics), so the
//! interpolant is C¹ and depends only on nearby samples.

use super::{CurveError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Hermite {
    dim: usize,
    params: Vec<f64>,
    values: Vec<f64>,
    tangents: Vec<f64>,
    period: Option<f64>,
}

fn axpy(out: &mut [f64], a: f64, x: &[f64]) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += a * v;
    }
}

impl Hermite {
    /// `values` holds `params.len()` points of `dim` coordinates each. A
    /// periodic curve closes from the last sample back to the first after
    /// `period`.
    pub fn new(dim: usize, params: Vec<f64>, values: Vec<f64>, period: Option<f64>) -> Result<Self> {
        let n = params.len();
        if n < 3 || values.len() != n * dim {
            return Err(CurveError::Malformed(format!(
                "need at least 3 samples of dimension {dim}, got {n} parameters and {} values",
                values.len()
            )));
        }
        if let Some(i) = params.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(CurveError::Malformed(format!(
                "parameters not strictly increasing at sample {}",
                i + 1
            )));
        }
        if let Some(p) = period {
            if !(params[n - 1] - params[0] < p) {
                return Err(CurveError::Malformed("samples exceed one period".into()));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CurveError::Malformed("non-finite coordinate".into()));
        }
        let mut h = Hermite { dim, params, values, tangents: Vec::new(), period };
        h.tangents = h.estimate_tangents();
        Ok(h)
    }

    fn estimate_tangents(&self) -> Vec<f64> {
        let n = self.params.len();
        let d = self.dim;
        let mut out = vec![0.0; n * d];
        for i in 0..n {
            let (prev, next) = match self.period {
                Some(p) => {
                    let im = (i + n - 1) % n;
                    let ip = (i + 1) % n;
                    let tm = if i == 0 { self.params[im] - p } else { self.params[im] };
                    let tp = if i == n - 1 { self.params[ip] + p } else { self.params[ip] };
                    ((im, tm), (ip, tp))
                }
                None if i == 0 => {
                    // One-sided: treat samples 1 and 2 as the stencil.
                    let (h1, h2) = (self.params[1] - self.params[0], self.params[2] - self.params[1]);
                    for k in 0..d {
                        let (f0, f1, f2) = (self.values[k], self.values[d + k], self.values[2 * d + k]);
                        out[k] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f0 + (h1 + h2) / (h1 * h2) * f1
                            - h1 / (h2 * (h1 + h2)) * f2;
                    }
                    continue;
                }
                None if i == n - 1 => {
                    let (h1, h2) =
                        (self.params[n - 2] - self.params[n - 3], self.params[n - 1] - self.params[n - 2]);
                    for k in 0..d {
                        let (f0, f1, f2) = (
                            self.values[(n - 3) * d + k],
                            self.values[(n - 2) * d + k],
                            self.values[(n - 1) * d + k],
                        );
                        out[(n - 1) * d + k] = h2 / (h1 * (h1 + h2)) * f0 - (h1 + h2) / (h1 * h2) * f1
                            + (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * f2;
                    }
                    continue;
                }
                None => ((i - 1, self.params[i - 1]), (i + 1, self.params[i + 1])),
            };
            let t = self.params[i];
            let (hm, hp) = (t - prev.1, next.1 - t);
            for k in 0..d {
                let fm = self.values[prev.0 * d + k];
                let f0 = self.values[i * d + k];
                let fp = self.values[next.0 * d + k];
                out[i * d + k] = (hm * hm * (fp - f0) + hp * hp * (f0 - fm)) / (hm * hp * (hm + hp));
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn tangent(&self, i: usize) -> &[f64] {
        &self.tangents[i * self.dim..(i + 1) * self.dim]
    }

    pub fn num_cells(&self) -> usize {
        match self.period {
            Some(_) => self.params.len(),
            None => self.params.len() - 1,
        }
    }

    /// Parameter interval of cell `i`; the closing cell of a periodic
    /// curve ends at `params[0] + period`.
    pub fn cell_range(&self, i: usize) -> (f64, f64) {
        let a = self.params[i];
        let b = if i + 1 < self.params.len() {
            self.params[i + 1]
        } else {
            self.params[0] + self.period.expect("closing cell only on periodic curves")
        };
        (a, b)
    }

    fn cell_end(&self, i: usize) -> usize {
        (i + 1) % self.params.len()
    }

    /// Cell containing `t` and `t` reduced into the curve's range.
    pub fn locate(&self, t: f64) -> (usize, f64) {
        let t = match self.period {
            Some(p) => {
                let t0 = self.params[0];
                t0 + (t - t0).rem_euclid(p)
            }
            None => t,
        };
        let k = self.params.partition_point(|&x| x <= t);
        let cell = k.saturating_sub(1).min(self.num_cells() - 1);
        (cell, t)
    }

    /// Value and first derivative at `t`. Non-periodic curves extrapolate
    /// the end cells.
    pub fn eval_with_deriv(&self, t: f64, value: &mut [f64], deriv: &mut [f64]) {
        let (i, t) = self.locate(t);
        let (a, b) = self.cell_range(i);
        let h = b - a;
        let s = (t - a) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let d00 = (6.0 * s2 - 6.0 * s) / h;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = (-6.0 * s2 + 6.0 * s) / h;
        let d11 = 3.0 * s2 - 2.0 * s;
        let j = self.cell_end(i);
        value.fill(0.0);
        deriv.fill(0.0);
        axpy(value, h00, self.sample(i));
        axpy(value, h10 * h, self.tangent(i));
        axpy(value, h01, self.sample(j));
        axpy(value, h11 * h, self.tangent(j));
        axpy(deriv, d00, self.sample(i));
        axpy(deriv, d10, self.tangent(i));
        axpy(deriv, d01, self.sample(j));
        axpy(deriv, d11, self.tangent(j));
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        let mut d = vec![0.0; self.dim];
        self.eval_with_deriv(t, &mut v, &mut d);
        v
    }

    pub fn deriv(&self, t: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        let mut d = vec![0.0; self.dim];
        self.eval_with_deriv(t, &mut v, &mut d);
        d
    }

    /// Bezier control points of cell `i`; their bounding box contains the
    /// cell's arc.
    pub fn cell_controls(&self, i: usize) -> [Vec<f64>; 4] {
        let (a, b) = self.cell_range(i);
        let h = b - a;
        let j = self.cell_end(i);
        let p0 = self.sample(i).to_vec();
        let p3 = self.sample(j).to_vec();
        let mut p1 = p0.clone();
        axpy(&mut p1, h / 3.0, self.tangent(i));
        let mut p2 = p3.clone();
        axpy(&mut p2, -h / 3.0, self.tangent(j));
        [p0, p1, p2, p3]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        // Deliberately non-uniform.
        (0..n)
            .map(|i| {
                let x = i as f64 / (n - 1) as f64;
                x + 0.1 * x * x
            })
            .collect()
    }

    #[test]
    fn interpolates_samples_exactly() {
        let t = grid(20);
        let vals: Vec<f64> = t.iter().flat_map(|&x| [x.sin(), x * x]).collect();
        let h = Hermite::new(2, t.clone(), vals, None).unwrap();
        for (i, &x) in t.iter().enumerate() {
            assert_eq!(h.eval(x), h.sample(i));
        }
    }

    #[test]
    fn reproduces_quadratics() {
        let t = grid(15);
        let vals: Vec<f64> = t.iter().flat_map(|&x| [3.0 * x * x - x + 2.0]).collect();
        let h = Hermite::new(1, t, vals, None).unwrap();
        for k in 0..100 {
            let x = k as f64 * 0.011;
            assert!((h.eval(x)[0] - (3.0 * x * x - x + 2.0)).abs() < 1e-12);
            assert!((h.deriv(x)[0] - (6.0 * x - 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn derivative_is_continuous_across_samples() {
        let t = grid(30);
        let vals: Vec<f64> = t.iter().flat_map(|&x| [(3.0 * x).cos()]).collect();
        let h = Hermite::new(1, t.clone(), vals, None).unwrap();
        for &x in &t[1..t.len() - 1] {
            let l = h.deriv(x - 1e-12)[0];
            let r = h.deriv(x + 1e-12)[0];
            assert!((l - r).abs() < 1e-8);
        }
    }

    #[test]
    fn periodic_wraps() {
        let n = 64;
        let t: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let vals: Vec<f64> = t
            .iter()
            .flat_map(|&s| {
                let a = std::f64::consts::TAU * s;
                [a.cos(), a.sin()]
            })
            .collect();
        let h = Hermite::new(2, t, vals, Some(1.0)).unwrap();
        assert_eq!(h.num_cells(), n);
        let a = h.eval(0.999);
        let b = h.eval(-0.001);
        assert!((a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15);
        let p = h.eval(0.3);
        let exact = std::f64::consts::TAU * 0.3;
        // Second-order tangents: error about h³|f′′′|/24.
        assert!((p[0] - exact.cos()).abs() < 1e-4, "{}", p[0] - exact.cos());
    }

    #[test]
    fn control_box_contains_arc() {
        let t = grid(10);
        let vals: Vec<f64> = t.iter().flat_map(|&x| [(5.0 * x).sin(), (7.0 * x).cos()]).collect();
        let h = Hermite::new(2, t, vals, None).unwrap();
        for i in 0..h.num_cells() {
            let c = h.cell_controls(i);
            let (a, b) = h.cell_range(i);
            for k in 0..=20 {
                let p = h.eval(a + (b - a) * k as f64 / 20.0);
                for d in 0..2 {
                    let lo = c.iter().map(|q| q[d]).fold(f64::INFINITY, f64::min);
                    let hi = c.iter().map(|q| q[d]).fold(f64::NEG_INFINITY, f64::max);
                    assert!(p[d] >= lo - 1e-12 && p[d] <= hi + 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Hermite::new(1, vec![0.0, 1.0, 1.0], vec![0.0; 3], None).is_err());
        assert!(Hermite::new(1, vec![0.0, 1.0], vec![0.0; 2], None).is_err());
        assert!(Hermite::new(1, vec![0.0, 0.5, 1.0], vec![0.0; 3], Some(1.0)).is_err());
    }
}
