/// Orthogonal matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    dim: usize,
    m: Vec<f64>,
}

impl Rotation {
    pub fn identity(dim: usize) -> Self {
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = 1.0;
        }
        Rotation { dim, m }
    }

    /// Rotation by `theta` in the `(i, j)` coordinate plane.
    pub fn givens(dim: usize, i: usize, j: usize, theta: f64) -> Self {
        assert!(i < dim && j < dim && i != j, "bad rotation plane");
        let mut r = Rotation::identity(dim);
        let (s, c) = theta.sin_cos();
        r.m[i * dim + i] = c;
        r.m[j * dim + j] = c;
        r.m[i * dim + j] = -s;
        r.m[j * dim + i] = s;
        r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.dim + j]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Rotation) -> Rotation {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] = (0..d).map(|k| other.m[i * d + k] * self.m[k * d + j]).sum();
            }
        }
        Rotation { dim: d, m }
    }

    pub fn transpose(&self) -> Rotation {
        let d = self.dim;
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                m[j * d + i] = self.m[i * d + j];
            }
        }
        Rotation { dim: d, m }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d).map(|i| (0..d).map(|j| self.m[i * d + j] * x[j]).sum()).collect()
    }

    /// Whether the first basis vector is left exactly in place.
    pub fn fixes_first_axis(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| self.m[i * d] == if i == 0 { 1.0 } else { 0.0 }) && (1..d).all(|j| self.m[j] == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn givens_is_orthogonal() {
        let r = Rotation::givens(4, 1, 3, 0.7).then(&Rotation::givens(4, 0, 2, -1.1));
        let p = r.then(&r.transpose());
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((p.entry(i, j) - e).abs() < 1e-15);
            }
        }
        assert!(Rotation::givens(4, 1, 3, 0.7).fixes_first_axis());
        assert!(!r.fixes_first_axis());
    }

    #[test]
    fn then_applies_left_first() {
        let a = Rotation::givens(3, 0, 1, 0.3);
        let b = Rotation::givens(3, 1, 2, 0.5);
        let x = [0.2, -0.4, 0.9];
        let lhs = a.then(&b).apply(&x);
        let rhs = b.apply(&a.apply(&x));
        for k in 0..3 {
            assert!((lhs[k] - rhs[k]).abs() < 1e-15);
        }
    }
}
