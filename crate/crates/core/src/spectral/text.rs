//! Line format for bigraded tables.
//!
//! ```text
//! table p=-7..0 q=0..16 shift=0 floor=-7
//! gen a -3 0 base
//! gen u -7 2 fiber
//! entry 0 0 1 free
//! entry -3 0 a 2
//! perm a section
//! ```
//!
//! `floor=` is optional; `#` starts a comment line.

use super::{BigradedTable, Entry, Justification, Result, SpectralError, TableGenerator, Window};
use crate::algebra::Order;

impl BigradedTable {
    pub fn to_text(&self) -> String {
        let w = self.window;
        let mut out = format!("table p={}..{} q=0..{} shift={}", w.p_min, w.p_max, w.q_max, self.fiber_shift);
        if let Some(f) = self.base_floor {
            out.push_str(&format!(" floor={f}"));
        }
        out.push('\n');
        for g in &self.generators {
            out.push_str(&format!("gen {} {} {} {}\n", g.name, g.p, g.q, g.side));
        }
        for (&(p, q), cell) in &self.entries {
            for e in cell {
                out.push_str(&format!("entry {p} {q} {} {}\n", e.label, e.order));
            }
        }
        for g in &self.generators {
            if let Some(why) = self.permanence(&g.name) {
                out.push_str(&format!("perm {} {why}\n", g.name));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut table: Option<BigradedTable> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| SpectralError::Parse { line, msg };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let words: Vec<&str> = trimmed.split_whitespace().collect();
            let int = |w: &str| w.parse::<i64>().map_err(|_| err(format!("bad integer `{w}`")));
            if words[0] == "table" {
                if table.is_some() {
                    return Err(err("second table header".into()));
                }
                let mut p = None;
                let mut q = None;
                let mut shift = 0;
                let mut floor = None;
                for w in &words[1..] {
                    let (key, value) =
                        w.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{w}`")))?;
                    let range = || -> Result<(i64, i64)> {
                        let (a, b) = value
                            .split_once("..")
                            .ok_or_else(|| err(format!("expected a..b, got `{value}`")))?;
                        Ok((int(a)?, int(b)?))
                    };
                    match key {
                        "p" => p = Some(range()?),
                        "q" => {
                            let (lo, hi) = range()?;
                            if lo != 0 {
                                return Err(err("rows must start at 0".into()));
                            }
                            q = Some(hi);
                        }
                        "shift" => shift = int(value)?,
                        "floor" => floor = Some(int(value)?),
                        _ => return Err(err(format!("unknown key `{key}`"))),
                    }
                }
                let (p_min, p_max) = p.ok_or_else(|| err("missing p range".into()))?;
                let q_max = q.ok_or_else(|| err("missing q range".into()))?;
                let mut t = BigradedTable::new(Window::new(p_min, p_max, q_max), shift);
                if let Some(f) = floor {
                    t.set_base_floor(f);
                }
                table = Some(t);
                continue;
            }
            let t = table.as_mut().ok_or_else(|| err("table header must come first".into()))?;
            let with_line = |e: SpectralError| match e {
                SpectralError::Parse { .. } => e,
                other => SpectralError::Parse { line, msg: other.to_string() },
            };
            match (words[0], words.len()) {
                ("gen", 5) => t
                    .add_generator(TableGenerator {
                        name: words[1].to_string(),
                        p: int(words[2])?,
                        q: int(words[3])?,
                        side: words[4].parse().map_err(err)?,
                    })
                    .map_err(with_line)?,
                ("entry", 5) => {
                    let order = match words[4] {
                        "free" => Order::Free,
                        w => match w.parse::<u64>() {
                            Ok(c) if c >= 2 => Order::Torsion(c),
                            _ => return Err(err(format!("bad order `{w}`"))),
                        },
                    };
                    t.insert_entry(
                        int(words[1])?,
                        int(words[2])?,
                        Entry { label: words[3].to_string(), order },
                    )
                    .map_err(with_line)?;
                }
                ("perm", 3) => {
                    let why: Justification = words[2].parse().map_err(err)?;
                    t.set_permanent(words[1], why).map_err(with_line)?;
                }
                (w, _) => return Err(err(format!("malformed `{w}` line"))),
            }
        }
        table.ok_or(SpectralError::Parse { line: 0, msg: "missing table header".into() })
    }
}
