//! Degree shifts of the products, Gysin maps and desingularization maps.
//!
//! Raw degrees are ordinary homology degrees; regraded degrees are shifted
//! down by `2n − 1` so that the knot and immersion products have degree 0.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("shift formulas need n ≥ 3 and k ≥ 0, got n = {n}, k = {k}")]
    OutOfRange { n: i64, k: i64 },
}

pub type Result<T> = std::result::Result<T, DegreeError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Raw,
    Regraded,
}

/// Sign of the desingularization shift. `Plus` (+k(n−3)) is the default;
/// `Minus` is the opposite convention, kept only so the two can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftSign {
    #[default]
    Plus,
    Minus,
}

fn check(k: i64, n: i64) -> Result<()> {
    if n < 3 || k < 0 {
        Err(DegreeError::OutOfRange { n, k })
    } else {
        Ok(())
    }
}

/// `2n − 1`, the dimension of the unit tangent bundle of Sⁿ.
pub fn product_offset(n: i64) -> i64 {
    2 * n - 1
}

pub fn regrade(raw: i64, n: i64) -> i64 {
    raw - product_offset(n)
}

pub fn unregrade(regraded: i64, n: i64) -> i64 {
    regraded + product_offset(n)
}

pub fn product_degree(dx: i64, dy: i64, n: i64, convention: Convention) -> i64 {
    match convention {
        Convention::Raw => dx + dy - product_offset(n),
        Convention::Regraded => dx + dy,
    }
}

/// Fibre dimension of `(S^{n−3})^k`.
pub fn gysin_shift(k: i64, n: i64) -> Result<i64> {
    check(k, n)?;
    Ok(k * (n - 3))
}

pub fn desingularization_shift(k: i64, n: i64, sign: ShiftSign) -> Result<i64> {
    let s = gysin_shift(k, n)?;
    Ok(match sign {
        ShiftSign::Plus => s,
        ShiftSign::Minus => -s,
    })
}

/// Degree of `σ_k x` for `x` of raw degree `d` on the `k`-singular side.
pub fn desingularize(d: i64, k: i64, n: i64, sign: ShiftSign) -> Result<i64> {
    Ok(d + desingularization_shift(k, n, sign)?)
}

/// Compares the degree of `μ(σ_k x, σ_l y)` with that of `σ_{k+l}(μ(x, y))`.
pub fn check_compatibility_degrees(
    k: i64,
    l: i64,
    dx: i64,
    dy: i64,
    n: i64,
    sign: ShiftSign,
) -> Result<bool> {
    let lhs =
        product_degree(desingularize(dx, k, n, sign)?, desingularize(dy, l, n, sign)?, n, Convention::Raw);
    let rhs = desingularize(product_degree(dx, dy, n, Convention::Raw), k + l, n, sign)?;
    Ok(lhs == rhs)
}

/// A class on the singular side: raw degree and number of double points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularDegree {
    pub degree: i64,
    pub k: i64,
}

/// Product on the direct sum over k: degrees combine like the knot product
/// and the number of double points adds.
pub fn singular_product(x: SingularDegree, y: SingularDegree, n: i64) -> SingularDegree {
    SingularDegree { degree: product_degree(x.degree, y.degree, n, Convention::Raw), k: x.k + y.k }
}

/// A named degree-shifting map with its shift as a function of `(n, k)`.
#[derive(Debug, Clone, Copy)]
pub struct GradedMapSpec {
    pub name: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub shift: fn(i64, i64) -> i64,
}

impl fmt::Display for GradedMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.source, self.target)
    }
}

pub fn graded_maps() -> [GradedMapSpec; 5] {
    [
        GradedMapSpec { name: "mu_em", source: "Emb x Emb", target: "Emb", shift: |n, _| -product_offset(n) },
        GradedMapSpec {
            name: "mu_im",
            source: "Imm'_k x Imm'_l",
            target: "Imm'_{k+l}",
            shift: |n, _| -product_offset(n),
        },
        GradedMapSpec { name: "gysin", source: "Imm'_k", target: "Q_k", shift: |n, k| k * (n - 3) },
        GradedMapSpec { name: "sigma", source: "Imm'_k", target: "Emb", shift: |n, k| k * (n - 3) },
        GradedMapSpec {
            name: "regrade",
            source: "H_*",
            target: "H_{*+2n-1}",
            shift: |n, _| product_offset(n),
        },
    ]
}

/// One line per `(n, k)`: `n k mu gysin sigma`.
pub fn shift_table(ns: std::ops::RangeInclusive<i64>, ks: std::ops::RangeInclusive<i64>) -> Result<String> {
    let mut out = String::from("n k mu gysin sigma\n");
    for n in ns {
        for k in ks.clone() {
            out.push_str(&format!(
                "{n} {k} {} {} {}\n",
                -product_offset(n),
                gysin_shift(k, n)?,
                desingularization_shift(k, n, ShiftSign::Plus)?
            ));
        }
    }
    Ok(out)
}
