//! Bookkeeping for multiplicative Serre spectral sequences over a regraded
//! base. Differentials are never computed; the checker only certifies that
//! they vanish because their targets are empty or because a generator is a
//! permanent cycle for a structural reason.
//!
//! Conventions: `d_r : E^r_{p,q} → E^r_{p−r, q+r−1}`. Base classes live in
//! column `p` = their regraded degree (so the fundamental class is at
//! `p = 0` and the point class at the lowest column). Fibre classes of ring
//! degree `d` live in row `q = d + fiber_shift`.

mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraError, Monomial, Order, RingPresentation};
use crate::catalog::{self, CatalogError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("entry ({p},{q}) lies outside the window")]
    OutsideWindow { p: i64, q: i64 },
    #[error("duplicate entry `{label}` at ({p},{q})")]
    DuplicateEntry { p: i64, q: i64, label: String },
    #[error("duplicate table generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown table generator `{0}`")]
    UnknownGenerator(String),
    #[error("`{name}` sits in row {q}, but section arguments apply only to the bottom row {bottom}")]
    SectionOffBottomRow { name: String, q: i64, bottom: i64 },
    #[error("fibre has classes in degree {degree}, below row 0 after shift {shift}")]
    NegativeFiberDegree { degree: i64, shift: i64 },
    #[error("window too small for `{generator}`: differentials reach row {needed}, window stops at {q_max}")]
    WindowTooSmall { generator: String, needed: i64, q_max: i64 },
    #[error("window starts at column {p_min} but the base has classes down to {base_floor}")]
    WindowMissesBase { p_min: i64, base_floor: i64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

pub type Result<T> = std::result::Result<T, SpectralError>;

/// Columns `p_min..=p_max`, rows `0..=q_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub p_min: i64,
    pub p_max: i64,
    pub q_max: i64,
}

impl Window {
    pub fn new(p_min: i64, p_max: i64, q_max: i64) -> Self {
        Window { p_min, p_max, q_max }
    }

    /// `p ∈ [−3n, 0]`, `q ∈ [0, 4n]`.
    pub fn default_for(n: i64) -> Self {
        Window::new(-3 * n, 0, 4 * n)
    }

    pub fn contains(&self, p: i64, q: i64) -> bool {
        (self.p_min..=self.p_max).contains(&p) && (0..=self.q_max).contains(&q)
    }

    pub fn is_empty(&self) -> bool {
        self.p_min > self.p_max || self.q_max < 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Base,
    Fiber,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Base => "base",
            Side::Fiber => "fiber",
        })
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "base" => Ok(Side::Base),
            "fiber" => Ok(Side::Fiber),
            _ => Err(format!("bad side `{s}`")),
        }
    }
}

/// Why a generator is a permanent cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Justification {
    /// The fibration has a section, so base classes lift.
    Section,
    /// Every possible differential lands in an empty bidegree.
    Degree,
    /// Taken from outside the checker.
    Assumed,
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Justification::Section => "section",
            Justification::Degree => "degree",
            Justification::Assumed => "assumed",
        })
    }
}

impl FromStr for Justification {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "section" => Ok(Justification::Section),
            "degree" => Ok(Justification::Degree),
            "assumed" => Ok(Justification::Assumed),
            _ => Err(format!("bad justification `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub label: String,
    pub order: Order,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableGenerator {
    pub name: String,
    pub p: i64,
    pub q: i64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedTable {
    window: Window,
    fiber_shift: i64,
    base_floor: Option<i64>,
    entries: BTreeMap<(i64, i64), Vec<Entry>>,
    generators: Vec<TableGenerator>,
    permanence: BTreeMap<String, Justification>,
}

impl BigradedTable {
    pub fn new(window: Window, fiber_shift: i64) -> Self {
        BigradedTable {
            window,
            fiber_shift,
            base_floor: None,
            entries: BTreeMap::new(),
            generators: Vec::new(),
            permanence: BTreeMap::new(),
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn fiber_shift(&self) -> i64 {
        self.fiber_shift
    }

    /// Lowest base column with a class, when known.
    pub fn base_floor(&self) -> Option<i64> {
        self.base_floor
    }

    pub fn set_base_floor(&mut self, floor: i64) {
        self.base_floor = Some(floor);
    }

    pub fn insert_entry(&mut self, p: i64, q: i64, entry: Entry) -> Result<()> {
        if !self.window.contains(p, q) {
            return Err(SpectralError::OutsideWindow { p, q });
        }
        let cell = self.entries.entry((p, q)).or_default();
        if cell.iter().any(|e| e.label == entry.label) {
            return Err(SpectralError::DuplicateEntry { p, q, label: entry.label });
        }
        cell.push(entry);
        Ok(())
    }

    pub fn entry(&self, p: i64, q: i64) -> &[Entry] {
        self.entries.get(&(p, q)).map_or(&[], Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), &[Entry])> {
        self.entries.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn add_generator(&mut self, generator: TableGenerator) -> Result<()> {
        if self.generators.iter().any(|g| g.name == generator.name) {
            return Err(SpectralError::DuplicateGenerator(generator.name));
        }
        self.generators.push(generator);
        Ok(())
    }

    pub fn generators(&self) -> &[TableGenerator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&TableGenerator> {
        self.generators.iter().find(|g| g.name == name)
    }

    /// Tags a generator as a permanent cycle. Section arguments only lift
    /// classes of the bottom row (the row of the fibre unit).
    pub fn set_permanent(&mut self, name: &str, why: Justification) -> Result<()> {
        let g = self.generator(name).ok_or_else(|| SpectralError::UnknownGenerator(name.to_string()))?;
        if why == Justification::Section && g.q != self.fiber_shift {
            return Err(SpectralError::SectionOffBottomRow {
                name: name.to_string(),
                q: g.q,
                bottom: self.fiber_shift,
            });
        }
        self.permanence.insert(name.to_string(), why);
        Ok(())
    }

    pub fn permanence(&self, name: &str) -> Option<Justification> {
        self.permanence.get(name).copied()
    }

    /// Entries whose label is not a product of table generators with the
    /// right bidegree (for instance `Tor` terms).
    pub fn ungenerated_entries(&self) -> Vec<((i64, i64), String)> {
        let mut out = Vec::new();
        for (&(p, q), cell) in &self.entries {
            for e in cell {
                if self.label_bidegree(&e.label) != Some((p, q)) {
                    out.push(((p, q), e.label.clone()));
                }
            }
        }
        out
    }

    fn label_bidegree(&self, label: &str) -> Option<(i64, i64)> {
        let (mut p, mut q) = (0, self.fiber_shift);
        if label == "1" {
            return Some((p, q));
        }
        for factor in label.split('*') {
            let (name, e) = match factor.split_once('^') {
                Some((name, e)) => (name, e.parse::<i64>().ok()?),
                None => (factor, 1),
            };
            let g = self.generator(name)?;
            match g.side {
                Side::Base => p += e * g.p,
                Side::Fiber => q += e * (g.q - self.fiber_shift),
            }
        }
        Some((p, q))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `name^e` factors joined by `*`; exponent 1 is bare and the unit is `1`.
pub fn factor_label(names: &[&str], m: &Monomial) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .zip(names)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, n)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn join_labels(x: &str, y: &str) -> String {
    match (x, y) {
        ("1", _) => y.to_string(),
        (_, "1") => x.to_string(),
        _ => format!("{x}*{y}"),
    }
}

/// The E² page `ℍ_p(B) ⊗ H_q(F) ⊕ Tor(ℍ_{p−1}(B), H_q(F))` over the window,
/// with base generators in the bottom row and fibre generators in the
/// lowest base column (the image of the fibre inclusion).
pub fn e2_page(
    base: &RingPresentation,
    fiber: &RingPresentation,
    window: Window,
    fiber_shift: i64,
) -> Result<BigradedTable> {
    let fiber_low = fiber.lowest_degree();
    if fiber_low + fiber_shift < 0 {
        return Err(SpectralError::NegativeFiberDegree { degree: fiber_low, shift: fiber_shift });
    }
    let joint = base.tensor(fiber);
    let names: Vec<&str> = joint.generators().iter().map(|g| g.name.as_str()).collect();
    let (base_names, fiber_names) = names.split_at(base.arity());

    let mut table = BigradedTable::new(window, fiber_shift);
    let base_floor = base.lowest_degree();
    table.set_base_floor(base_floor);
    if window.is_empty() {
        return Ok(table);
    }

    let fiber_rows: Vec<Vec<(String, Order)>> = (0..=window.q_max)
        .map(|q| {
            fiber
                .basis_in_degree(q - fiber_shift)
                .into_iter()
                .map(|b| (factor_label(fiber_names, &b.monomial), b.order))
                .collect()
        })
        .collect();
    let base_column = |p: i64| -> Vec<(String, Order)> {
        base.basis_in_degree(p)
            .into_iter()
            .map(|b| (factor_label(base_names, &b.monomial), b.order))
            .collect()
    };

    for p in window.p_min..=window.p_max {
        let here = base_column(p);
        let below = base_column(p - 1);
        for (q, row) in fiber_rows.iter().enumerate() {
            let q = q as i64;
            for (bl, bo) in &here {
                for (fl, fo) in row {
                    let order = match (bo, fo) {
                        (Order::Free, o) | (o, Order::Free) => Some(*o),
                        (Order::Torsion(x), Order::Torsion(y)) => match gcd(*x, *y) {
                            1 => None,
                            g => Some(Order::Torsion(g)),
                        },
                    };
                    if let Some(order) = order {
                        table.insert_entry(p, q, Entry { label: join_labels(bl, fl), order })?;
                    }
                }
            }
            for (bl, bo) in &below {
                for (fl, fo) in row {
                    if let (Order::Torsion(x), Order::Torsion(y)) = (bo, fo) {
                        let g = gcd(*x, *y);
                        if g > 1 {
                            table.insert_entry(
                                p,
                                q,
                                Entry { label: format!("Tor({bl},{fl})"), order: Order::Torsion(g) },
                            )?;
                        }
                    }
                }
            }
        }
    }

    for (g, name) in base.generators().iter().zip(base_names) {
        let m = base.generator(&g.name)?;
        if !m.is_zero() {
            table.add_generator(TableGenerator {
                name: name.to_string(),
                p: g.degree,
                q: fiber_shift,
                side: Side::Base,
            })?;
        }
    }
    for (g, name) in fiber.generators().iter().zip(fiber_names) {
        let m = fiber.generator(&g.name)?;
        if !m.is_zero() {
            table.add_generator(TableGenerator {
                name: name.to_string(),
                p: base_floor,
                q: g.degree + fiber_shift,
                side: Side::Fiber,
            })?;
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateLine {
    pub name: String,
    pub p: i64,
    pub q: i64,
    pub reason: Justification,
}

impl fmt::Display for CertificateLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({},{}) {}", self.name, self.p, self.q, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialViolation {
    pub name: String,
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub target: (i64, i64),
    pub target_labels: Vec<String>,
}

impl fmt::Display for DifferentialViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({},{}) d{} -> ({},{}) [{}]",
            self.name,
            self.p,
            self.q,
            self.r,
            self.target.0,
            self.target.1,
            self.target_labels.join(" ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CollapseOutcome {
    Certificate(Vec<CertificateLine>),
    Violations(Vec<DifferentialViolation>),
}

impl CollapseOutcome {
    pub fn is_certificate(&self) -> bool {
        matches!(self, CollapseOutcome::Certificate(_))
    }
}

/// Certifies collapse at E² when every generator is either tagged
/// `section`/`assumed` or has only empty differential targets inside the
/// window. Generators pre-tagged `degree` are re-verified.
pub fn collapse_check(table: &BigradedTable) -> Result<CollapseOutcome> {
    let w = table.window;
    if let Some(floor) = table.base_floor {
        if floor < w.p_min {
            return Err(SpectralError::WindowMissesBase { p_min: w.p_min, base_floor: floor });
        }
    }
    let checked: Vec<&TableGenerator> = table
        .generators
        .iter()
        .filter(|g| {
            !matches!(table.permanence(&g.name), Some(Justification::Section | Justification::Assumed))
        })
        .collect();
    for g in &checked {
        let needed = g.q + (g.p - w.p_min) - 1;
        if !w.contains(g.p, g.q) || needed > w.q_max {
            return Err(SpectralError::WindowTooSmall {
                generator: g.name.clone(),
                needed: needed.max(g.q),
                q_max: w.q_max,
            });
        }
    }
    let violations: Vec<DifferentialViolation> = checked
        .par_iter()
        .flat_map_iter(|g| {
            (2..=g.p - w.p_min).filter_map(move |r| {
                let target = (g.p - r, g.q + r - 1);
                let cell = table.entry(target.0, target.1);
                (!cell.is_empty()).then(|| DifferentialViolation {
                    name: g.name.clone(),
                    p: g.p,
                    q: g.q,
                    r,
                    target,
                    target_labels: cell.iter().map(|e| e.label.clone()).collect(),
                })
            })
        })
        .collect();
    if !violations.is_empty() {
        return Ok(CollapseOutcome::Violations(violations));
    }
    Ok(CollapseOutcome::Certificate(
        table
            .generators
            .iter()
            .map(|g| CertificateLine {
                name: g.name.clone(),
                p: g.p,
                q: g.q,
                reason: table.permanence(&g.name).unwrap_or(Justification::Degree),
            })
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Match,
    Mismatch,
    /// Free ranks agree but torsion differs and the page has torsion, so
    /// an extension could account for the difference.
    Ambiguous,
    /// The window does not see every entry of this total degree.
    Uncovered,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Match => "match",
            Comparison::Mismatch => "mismatch",
            Comparison::Ambiguous => "ambiguous",
            Comparison::Uncovered => "uncovered",
        })
    }
}

/// Free rank and sorted torsion orders.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupShape {
    pub free: usize,
    pub torsion: Vec<u64>,
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.free)?;
        for t in &self.torsion {
            write!(f, "+Z/{t}")?;
        }
        Ok(())
    }
}

impl GroupShape {
    fn push(&mut self, order: Order) {
        match order {
            Order::Free => self.free += 1,
            Order::Torsion(t) => self.torsion.push(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: i64,
    pub page: GroupShape,
    pub claimed: GroupShape,
    pub status: Comparison,
}

/// Compares the (collapsed) page against a claimed ring, degree by degree
/// over `[lo, hi]`. Total degree of entry `(p,q)` is `p + q − fiber_shift`.
pub fn extension_report(
    table: &BigradedTable,
    claimed: &RingPresentation,
    lo: i64,
    hi: i64,
) -> Vec<DegreeComparison> {
    let w = table.window;
    if w.is_empty() {
        return Vec::new();
    }
    let shift = table.fiber_shift;
    let base_inside = table.base_floor.is_none_or(|f| f >= w.p_min) && w.p_max >= 0;
    (lo..=hi)
        .map(|d| {
            let mut page = GroupShape::default();
            for p in w.p_min..=w.p_max {
                let q = d - p + shift;
                for e in table.entry(p, q) {
                    page.push(e.order);
                }
            }
            page.torsion.sort_unstable();
            let mut shape = GroupShape::default();
            for b in claimed.basis_in_degree(d) {
                shape.push(b.order);
            }
            shape.torsion.sort_unstable();
            let covered = base_inside && d - w.p_min + shift <= w.q_max;
            let status = if !covered {
                Comparison::Uncovered
            } else if page == shape {
                Comparison::Match
            } else if page.free == shape.free && !page.torsion.is_empty() {
                Comparison::Ambiguous
            } else {
                Comparison::Mismatch
            };
            DegreeComparison { degree: d, page, claimed: shape, status }
        })
        .collect()
}

/// A fibration from the catalog with its E² inputs and the structural
/// permanence tags available for it.
#[derive(Debug, Clone)]
pub struct Fibration {
    pub base: RingPresentation,
    pub fiber: RingPresentation,
    pub fiber_shift: i64,
    pub permanent: Vec<(String, Justification)>,
    pub total: RingPresentation,
}

impl Fibration {
    /// `Imm′ → USⁿ` (even n, fibre ΩS^{n−1}, with a section) or
    /// `Imm′ → Sⁿ` (odd n, fibre LS^{n−1}).
    pub fn imm_prime(n: i64) -> Result<Self> {
        let total = catalog::imm_prime_ring(n)?;
        if n % 2 == 0 {
            let base = catalog::unit_tangent_ring(n)?;
            let permanent = section_tags(&base);
            Ok(Fibration { base, fiber: catalog::omega_sphere(n - 1)?, fiber_shift: 0, permanent, total })
        } else {
            Ok(Fibration {
                base: catalog::sphere_intersection_ring(n)?,
                fiber: catalog::loop_homology_sphere(n - 1)?,
                fiber_shift: n - 1,
                permanent: Vec::new(),
                total,
            })
        }
    }

    /// `ΩUSⁿ → LUSⁿ → USⁿ` for even n; `v` is taken as permanent.
    pub fn imm(n: i64) -> Result<Self> {
        let total = catalog::imm_ring(n)?;
        let base = catalog::unit_tangent_ring(n)?;
        let mut permanent = section_tags(&base);
        permanent.push(("v".to_string(), Justification::Assumed));
        Ok(Fibration { base, fiber: catalog::omega_unit_tangent(n)?, fiber_shift: 0, permanent, total })
    }

    pub fn table(&self, window: Window) -> Result<BigradedTable> {
        let mut table = e2_page(&self.base, &self.fiber, window, self.fiber_shift)?;
        for (name, why) in &self.permanent {
            table.set_permanent(name, *why)?;
        }
        Ok(table)
    }
}

fn section_tags(base: &RingPresentation) -> Vec<(String, Justification)> {
    base.generators().iter().map(|g| (g.name.clone(), Justification::Section)).collect()
}
