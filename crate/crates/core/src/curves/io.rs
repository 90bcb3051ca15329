//! Plain-text curve files.
//!
//! ```text
//! longcurve n=3 N=2048
//! -1.1250000000000000e0 -1.1250000000000000e0 0.0000000000000000e0 0.0000000000000000e0
//! ...
//! dp -4.7450000000000000e-1 4.7450000000000000e-1 0e0 0e0 1e0 a=1
//! ```
//!
//! Sample lines are `t x₁ … xₙ`; `dp` lines decorate a double point with
//! `t₁ t₂ v₁ … vₙ` and the sign. A `spherecurve n=<n> N=<count>` header
//! introduces samples `t y₀ … yₙ` on Sⁿ instead. Lines starting with `#` are
//! comments. Writing and re-reading a file reproduces it byte for byte.

use std::fmt::Write as _;

use super::{CurveError, DecoratedImmersion, LongCurve, Result, SphereCurve};

#[derive(Debug, Clone, PartialEq)]
pub enum CurveFile {
    Long(DecoratedImmersion),
    Sphere(SphereCurve),
}

impl CurveFile {
    pub fn to_text(&self) -> String {
        match self {
            CurveFile::Long(d) => {
                let c = d.curve();
                let mut out = format!("longcurve n={} N={}\n", c.dim(), c.len());
                for (t, x) in c.samples() {
                    push_row(&mut out, None, std::iter::once(t).chain(x.iter().copied()));
                }
                for dec in d.decorations() {
                    push_row(
                        &mut out,
                        Some("dp"),
                        [dec.point.t1, dec.point.t2].into_iter().chain(dec.v.iter().copied()),
                    );
                    out.pop();
                    let _ = writeln!(out, " a={}", dec.a);
                }
                out
            }
            CurveFile::Sphere(s) => {
                let mut out = format!("spherecurve n={} N={}\n", s.n(), s.len());
                for (t, y) in s.samples() {
                    push_row(&mut out, None, std::iter::once(t).chain(y.iter().copied()));
                }
                out
            }
        }
    }
}

fn push_row(out: &mut String, tag: Option<&str>, values: impl IntoIterator<Item = f64>) {
    let mut first = true;
    if let Some(tag) = tag {
        out.push_str(tag);
        first = false;
    }
    for v in values {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{v:.16e}");
    }
    out.push('\n');
}

fn parse_err(line: usize, msg: impl Into<String>) -> CurveError {
    CurveError::Parse { line, msg: msg.into() }
}

fn header_field(line: usize, word: Option<&str>, key: &str) -> Result<usize> {
    word.and_then(|w| w.strip_prefix(key))
        .and_then(|w| w.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected {key}=<count>")))
}

fn floats(line: usize, words: &[&str]) -> Result<Vec<f64>> {
    words.iter().map(|w| w.parse::<f64>().map_err(|_| parse_err(line, format!("bad number {w:?}")))).collect()
}

pub fn parse_curve_file(text: &str) -> Result<CurveFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut words = header.split_whitespace();
    let kind = words.next().unwrap_or_default();
    if kind != "longcurve" && kind != "spherecurve" {
        return Err(parse_err(hline, format!("unknown header {kind:?}")));
    }
    let n = header_field(hline, words.next(), "n")?;
    let count = header_field(hline, words.next(), "N")?;
    let width = if kind == "longcurve" { n } else { n + 1 };

    let mut params = Vec::with_capacity(count);
    let mut values = Vec::with_capacity(count * width);
    let mut parts = Vec::new();
    for (no, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0] == "dp" {
            if kind != "longcurve" {
                return Err(parse_err(no, "sphere curves carry no decorations"));
            }
            let a = words
                .last()
                .and_then(|w| w.strip_prefix("a="))
                .and_then(|a| a.parse::<u8>().ok())
                .ok_or_else(|| parse_err(no, "expected a=<1|2> at the end"))?;
            let nums = floats(no, &words[1..words.len() - 1])?;
            if nums.len() != n + 2 {
                return Err(parse_err(no, format!("expected {} numbers, found {}", n + 2, nums.len())));
            }
            parts.push((nums[0], nums[1], nums[2..].to_vec(), a));
            continue;
        }
        if !parts.is_empty() {
            return Err(parse_err(no, "sample after decorations"));
        }
        let nums = floats(no, &words)?;
        if nums.len() != width + 1 {
            return Err(parse_err(no, format!("expected {} numbers, found {}", width + 1, nums.len())));
        }
        if params.last().is_some_and(|&t| nums[0] <= t) {
            return Err(parse_err(no, "parameters must increase"));
        }
        params.push(nums[0]);
        values.extend_from_slice(&nums[1..]);
    }
    if params.len() != count {
        return Err(parse_err(hline, format!("header promises {count} samples, found {}", params.len())));
    }
    if kind == "longcurve" {
        let curve = LongCurve::from_samples(n, params, values)?;
        Ok(CurveFile::Long(DecoratedImmersion::from_parts(curve, &parts)?))
    } else {
        Ok(CurveFile::Sphere(SphereCurve::from_samples(n, params, values)?))
    }
}
