//! Line-oriented presentation format.
//!
//! ```text
//! # (Λ(b)⊗ℤ[a,v])/(a²,ab,2av)
//! gen a deg=-4 kind=poly comm=koszul
//! gen b deg=-1 kind=ext comm=koszul
//! gen v deg=6 kind=poly comm=koszul
//! rel 1 a^2
//! rel 1 a*b
//! rel 2 a*v
//! ```
//!
//! Lines starting with `#` are comments; the emitter writes the summary as
//! the first line. Exterior squares are implicit and never written.

use super::{
    AlgebraError, Commutation, GeneratorKind, GeneratorSpec, Monomial, Relation, Result, RingPresentation,
};

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl RingPresentation {
    /// Compact notation such as `Λ(a)⊗ℤ[u]` or `(Λ(b)⊗ℤ[a,v])/(a²,ab,2av)`.
    pub fn summary(&self) -> String {
        let names = |kind: GeneratorKind| {
            self.generators()
                .iter()
                .filter(|g| g.kind == kind)
                .map(|g| g.name.as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut factors = Vec::new();
        let ext = names(GeneratorKind::Exterior);
        if !ext.is_empty() {
            factors.push(format!("Λ({ext})"));
        }
        let poly = names(GeneratorKind::Polynomial);
        if !poly.is_empty() {
            factors.push(format!("ℤ[{poly}]"));
        }
        if factors.is_empty() {
            factors.push("ℤ".to_string());
        }
        let body = factors.join("⊗");
        if self.relations().is_empty() {
            return body;
        }
        let sep = if self.single_char_names() { "" } else { "·" };
        let rels =
            self.relations()
                .iter()
                .map(|r| {
                    let mono =
                        r.monomial()
                            .exponents()
                            .iter()
                            .zip(self.generators())
                            .filter(|(&e, _)| e > 0)
                            .map(|(&e, g)| {
                                if e == 1 {
                                    g.name.clone()
                                } else {
                                    format!("{}{}", g.name, superscript(e))
                                }
                            })
                            .collect::<Vec<_>>()
                            .join(sep);
                    if r.coefficient() == 1 {
                        mono
                    } else {
                        format!("{}{}", r.coefficient(), mono)
                    }
                })
                .collect::<Vec<_>>()
                .join(",");
        if factors.len() > 1 {
            format!("({body})/({rels})")
        } else {
            format!("{body}/({rels})")
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.summary());
        for g in self.generators() {
            let kind = match g.kind {
                GeneratorKind::Exterior => "ext",
                GeneratorKind::Polynomial => "poly",
            };
            let comm = match g.commutation {
                Commutation::Koszul => "koszul",
                Commutation::Central => "central",
            };
            out.push_str(&format!("gen {} deg={} kind={kind} comm={comm}\n", g.name, g.degree));
        }
        for r in self.relations() {
            let mono = r
                .monomial()
                .exponents()
                .iter()
                .zip(self.generators())
                .filter(|(&e, _)| e > 0)
                .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
                .collect::<Vec<_>>()
                .join("*");
            out.push_str(&format!("rel {} {mono}\n", r.coefficient()));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut generators = Vec::new();
        let mut raw_relations: Vec<(usize, u64, Vec<(String, u32)>)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| AlgebraError::Parse { line: line_no, msg };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("gen") => {
                    let name = words.next().ok_or_else(|| err("missing name".into()))?;
                    let mut degree = None;
                    let mut kind = None;
                    let mut comm = None;
                    for w in words {
                        let (key, value) =
                            w.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{w}`")))?;
                        match key {
                            "deg" => {
                                degree = Some(
                                    value.parse::<i64>().map_err(|_| err(format!("bad degree `{value}`")))?,
                                )
                            }
                            "kind" => {
                                kind = Some(match value {
                                    "ext" => GeneratorKind::Exterior,
                                    "poly" => GeneratorKind::Polynomial,
                                    _ => return Err(err(format!("bad kind `{value}`"))),
                                })
                            }
                            "comm" => {
                                comm = Some(match value {
                                    "koszul" => Commutation::Koszul,
                                    "central" => Commutation::Central,
                                    _ => return Err(err(format!("bad commutation `{value}`"))),
                                })
                            }
                            _ => return Err(err(format!("unknown key `{key}`"))),
                        }
                    }
                    generators.push(GeneratorSpec {
                        name: name.to_string(),
                        degree: degree.ok_or_else(|| err("missing deg".into()))?,
                        kind: kind.ok_or_else(|| err("missing kind".into()))?,
                        commutation: comm.ok_or_else(|| err("missing comm".into()))?,
                    });
                }
                Some("rel") => {
                    let c = words
                        .next()
                        .and_then(|w| w.parse::<u64>().ok())
                        .ok_or_else(|| err("missing or bad coefficient".into()))?;
                    let mono = words.next().ok_or_else(|| err("missing monomial".into()))?;
                    if words.next().is_some() {
                        return Err(err("trailing input".into()));
                    }
                    let factors = mono
                        .split('*')
                        .map(|f| match f.split_once('^') {
                            Some((n, e)) => e
                                .parse::<u32>()
                                .map(|e| (n.to_string(), e))
                                .map_err(|_| err(format!("bad exponent in `{f}`"))),
                            None => Ok((f.to_string(), 1)),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    raw_relations.push((line_no, c, factors));
                }
                Some(other) => return Err(err(format!("unknown directive `{other}`"))),
                None => unreachable!(),
            }
        }
        let relations = raw_relations
            .into_iter()
            .map(|(line, c, factors)| {
                let mut exps = vec![0u32; generators.len()];
                for (name, e) in factors {
                    let i =
                        generators.iter().position(|g: &GeneratorSpec| g.name == name).ok_or_else(|| {
                            AlgebraError::Parse { line, msg: format!("unknown generator `{name}`") }
                        })?;
                    exps[i] += e;
                }
                Ok(Relation::new(c, Monomial::from_exponents(exps)))
            })
            .collect::<Result<Vec<_>>>()?;
        RingPresentation::new(generators, relations)
    }
}
