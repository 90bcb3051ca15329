//! Exact arithmetic in finitely presented graded rings over ℤ.
//!
//! A presentation is an ordered list of generators (exterior or polynomial,
//! each with a degree and a commutation flag) together with monomial-torsion
//! relations `c·m = 0`. With `c = 1` the monomial `m` and all its multiples
//! vanish; with `c ≥ 2` every multiple of `m` is `c`-torsion. This class is
//! closed under tensor products and covers every loop, unit-tangent and
//! immersion ring in the catalog.
//!
//! Elements are kept in normal form: monomials are exponent vectors in
//! generator order, coefficients are reduced modulo the torsion order of
//! their monomial, and zero terms are dropped.

mod morphism;
mod text;

pub use morphism::{MultiplicativityReport, RingMorphism, Violation};

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("exponent overflow on generator `{0}`")]
    ExponentOverflow(String),
    #[error("coefficient overflow")]
    CoefficientOverflow,
    #[error("relation coefficient must be at least 1")]
    ZeroCoefficient,
    #[error("relation has {found} exponents but the presentation has {expected} generators")]
    RelationArity { expected: usize, found: usize },
    #[error("relation monomial must not be the unit")]
    TrivialRelation,
    #[error("generator `{0}` has non-positive degree and no power of it vanishes; degree-wise enumeration is unbounded")]
    NonEnumerable(String),
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("image of `{generator}` has degree {found}, expected {expected}")]
    DegreeMismatch { generator: String, expected: i64, found: i64 },
    #[error("image of `{generator}` is not homogeneous")]
    InhomogeneousImage { generator: String },
    #[error("morphism sends relation `{0}` to a nonzero element")]
    RelationImageNonzero(String),
    #[error("morphism needs {expected} generator images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// Squares to zero.
    Exterior,
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Commutation {
    /// Transposition with another generator costs `(-1)^{|g||h|}`.
    Koszul,
    /// Commutes without sign with other central generators.
    Central,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i64,
    pub kind: GeneratorKind,
    pub commutation: Commutation,
}

impl GeneratorSpec {
    pub fn exterior(name: &str, degree: i64) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            degree,
            kind: GeneratorKind::Exterior,
            commutation: Commutation::Koszul,
        }
    }

    pub fn polynomial(name: &str, degree: i64) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            degree,
            kind: GeneratorKind::Polynomial,
            commutation: Commutation::Koszul,
        }
    }

    pub fn central(mut self) -> Self {
        self.commutation = Commutation::Central;
        self
    }
}

/// Exponent vector over the generators of a presentation.
///
/// Ordered so that iteration over a `BTreeMap<Monomial, _>` runs in
/// descending lexicographic order of exponents (higher powers of earlier
/// generators first, the unit last).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn unit(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    coefficient: u64,
    monomial: Monomial,
}

impl Relation {
    pub fn new(coefficient: u64, monomial: Monomial) -> Self {
        Relation { coefficient, monomial }
    }

    pub fn coefficient(&self) -> u64 {
        self.coefficient
    }

    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }
}

/// Additive order of a basis monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Free,
    Torsion(u64),
}

impl Order {
    /// `0` for free, otherwise the torsion order.
    pub fn as_u64(self) -> u64 {
        match self {
            Order::Free => 0,
            Order::Torsion(c) => c,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Free => f.write_str("free"),
            Order::Torsion(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub monomial: Monomial,
    pub order: Order,
}

/// One summand before normalization: `coefficient · g1^e1 · g2^e2 ⋯` with
/// factors in any order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTerm {
    pub coefficient: i64,
    pub factors: Vec<(String, u32)>,
}

impl RawTerm {
    pub fn new(coefficient: i64, factors: &[(&str, u32)]) -> Self {
        RawTerm { coefficient, factors: factors.iter().map(|(n, e)| (n.to_string(), *e)).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ExponentBound {
    Fixed(u32),
    /// Positive-degree polynomial generator; bounded only by the target degree.
    Open,
}

#[derive(Debug, Clone)]
pub struct RingPresentation {
    generators: Vec<GeneratorSpec>,
    relations: Vec<Relation>,
    bounds: Vec<ExponentBound>,
    id: u64,
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.relations == other.relations
    }
}

impl Eq for RingPresentation {}

impl RingPresentation {
    pub fn new(generators: Vec<GeneratorSpec>, relations: Vec<Relation>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        for r in &relations {
            if r.coefficient == 0 {
                return Err(AlgebraError::ZeroCoefficient);
            }
            if r.monomial.0.len() != generators.len() {
                return Err(AlgebraError::RelationArity {
                    expected: generators.len(),
                    found: r.monomial.0.len(),
                });
            }
            if r.monomial.is_unit() {
                return Err(AlgebraError::TrivialRelation);
            }
        }
        let bounds = generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let power_bound = relations
                    .iter()
                    .filter(|r| r.coefficient == 1)
                    .filter_map(|r| {
                        let e = &r.monomial.0;
                        let pure = e.iter().enumerate().all(|(j, &x)| j == i || x == 0);
                        (pure && e[i] > 0).then(|| e[i] - 1)
                    })
                    .min();
                match (g.kind, power_bound) {
                    (GeneratorKind::Exterior, b) => Ok(ExponentBound::Fixed(b.unwrap_or(1).min(1))),
                    (GeneratorKind::Polynomial, Some(b)) => Ok(ExponentBound::Fixed(b)),
                    (GeneratorKind::Polynomial, None) if g.degree > 0 => Ok(ExponentBound::Open),
                    (GeneratorKind::Polynomial, None) => Err(AlgebraError::NonEnumerable(g.name.clone())),
                }
            })
            .collect::<Result<Vec<_>>>()?;

        let mut hasher = DefaultHasher::new();
        generators.hash(&mut hasher);
        relations.hash(&mut hasher);
        Ok(RingPresentation { generators, relations, bounds, id: hasher.finish() })
    }

    /// The ring ℤ with no generators.
    pub fn unit_ring() -> Self {
        RingPresentation::new(Vec::new(), Vec::new()).expect("empty presentation is valid")
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn degree(&self, m: &Monomial) -> i64 {
        m.0.iter().zip(&self.generators).map(|(&e, g)| i64::from(e) * g.degree).sum()
    }

    /// `None` if the monomial is zero in the ring, otherwise its additive order.
    pub fn order_of(&self, m: &Monomial) -> Option<Order> {
        for (e, g) in m.0.iter().zip(&self.generators) {
            if g.kind == GeneratorKind::Exterior && *e > 1 {
                return None;
            }
        }
        let mut torsion = 0u64;
        for r in &self.relations {
            if r.monomial.divides(m) {
                torsion = gcd(torsion, r.coefficient);
                if torsion == 1 {
                    return None;
                }
            }
        }
        Some(if torsion == 0 { Order::Free } else { Order::Torsion(torsion) })
    }

    fn transposition_sign(&self, g: usize, h: usize) -> i64 {
        let (a, b) = (&self.generators[g], &self.generators[h]);
        if a.commutation == Commutation::Central && b.commutation == Commutation::Central {
            return 1;
        }
        if (a.degree * b.degree).rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }

    /// Sorts a word of `(generator, exponent)` blocks into generator order and
    /// returns the Koszul sign of the permutation and the exponent vector.
    fn sort_word(&self, mut word: Vec<(usize, u32)>) -> Result<(i64, Monomial)> {
        let mut sign = 1i64;
        for i in 1..word.len() {
            let mut j = i;
            while j > 0 && word[j - 1].0 > word[j].0 {
                let (g, e) = word[j - 1];
                let (h, f) = word[j];
                if (u64::from(e) * u64::from(f)) % 2 == 1 {
                    sign *= self.transposition_sign(g, h);
                }
                word.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut exps = vec![0u32; self.arity()];
        for (g, e) in word {
            exps[g] = exps[g]
                .checked_add(e)
                .ok_or_else(|| AlgebraError::ExponentOverflow(self.generators[g].name.clone()))?;
        }
        Ok((sign, Monomial(exps)))
    }

    fn collect_terms<I>(&self, words: I) -> Result<RingElement>
    where
        I: IntoIterator<Item = (i64, Vec<(usize, u32)>)>,
    {
        let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (coefficient, word) in words {
            if coefficient == 0 {
                continue;
            }
            let (sign, m) = self.sort_word(word)?;
            let Some(order) = self.order_of(&m) else {
                continue;
            };
            let mut c = coefficient * sign;
            if let Order::Torsion(t) = order {
                c = c.rem_euclid(t as i64);
            }
            let slot = acc.entry(m).or_insert(0);
            *slot = slot.checked_add(c).ok_or(AlgebraError::CoefficientOverflow)?;
        }
        let terms = acc
            .into_iter()
            .filter_map(|(m, c)| {
                let c = match self.order_of(&m) {
                    Some(Order::Torsion(t)) => c.rem_euclid(t as i64),
                    _ => c,
                };
                (c != 0).then_some((m, c))
            })
            .collect();
        Ok(RingElement { ring: self.id, terms })
    }

    pub fn normalize(&self, raw: &[RawTerm]) -> Result<RingElement> {
        let words = raw
            .iter()
            .map(|t| {
                let word = t
                    .factors
                    .iter()
                    .map(|(name, e)| Ok((self.generator_index(name)?, *e)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((t.coefficient, word))
            })
            .collect::<Result<Vec<_>>>()?;
        self.collect_terms(words)
    }

    pub fn zero(&self) -> RingElement {
        RingElement { ring: self.id, terms: BTreeMap::new() }
    }

    pub fn one(&self) -> RingElement {
        self.monomial_element(&Monomial::unit(self.arity()), 1)
    }

    pub fn generator(&self, name: &str) -> Result<RingElement> {
        self.normalize(&[RawTerm::new(1, &[(name, 1)])])
    }

    /// `coefficient · m`, normalized.
    pub fn monomial_element(&self, m: &Monomial, coefficient: i64) -> RingElement {
        let word = m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
        self.collect_terms([(coefficient, word)])
            .expect("a monomial already in generator order cannot overflow")
    }

    fn check_member(&self, x: &RingElement) -> Result<()> {
        if x.ring == self.id {
            Ok(())
        } else {
            Err(AlgebraError::PresentationMismatch)
        }
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check_member(x)?;
        self.check_member(y)?;
        let words = x.terms.iter().chain(&y.terms).map(|(m, &c)| (c, blocks(m))).collect::<Vec<_>>();
        self.collect_terms(words)
    }

    pub fn scale(&self, x: &RingElement, k: i64) -> Result<RingElement> {
        self.check_member(x)?;
        self.collect_terms(x.terms.iter().map(|(m, &c)| (c * k, blocks(m))))
    }

    pub fn multiply(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check_member(x)?;
        self.check_member(y)?;
        let mut words = Vec::with_capacity(x.terms.len() * y.terms.len());
        for (mx, &cx) in &x.terms {
            for (my, &cy) in &y.terms {
                let c = cx.checked_mul(cy).ok_or(AlgebraError::CoefficientOverflow)?;
                let mut w = blocks(mx);
                w.extend(blocks(my));
                words.push((c, w));
            }
        }
        self.collect_terms(words)
    }

    /// Upper bound on the exponent of every generator among monomials of total degree `d`.
    fn exponent_caps(&self, d: i64) -> Vec<u32> {
        let negative_mass: i64 = self
            .generators
            .iter()
            .zip(&self.bounds)
            .filter(|(g, _)| g.degree < 0)
            .map(|(g, b)| match b {
                ExponentBound::Fixed(k) => i64::from(*k) * -g.degree,
                ExponentBound::Open => unreachable!("open bounds have positive degree"),
            })
            .sum();
        self.generators
            .iter()
            .zip(&self.bounds)
            .map(|(g, b)| {
                let open =
                    if g.degree > 0 { ((d + negative_mass).max(0) / g.degree) as u32 } else { u32::MAX };
                match b {
                    ExponentBound::Fixed(k) => (*k).min(open),
                    ExponentBound::Open => open,
                }
            })
            .collect()
    }

    /// Every nonzero normal-form monomial of total degree `d` with its additive order.
    pub fn basis_in_degree(&self, d: i64) -> Vec<BasisElement> {
        let caps = self.exponent_caps(d);
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.arity()];
        self.enumerate(0, d, &caps, &mut exps, &mut out);
        out.sort_by(|a, b| a.monomial.cmp(&b.monomial));
        out
    }

    fn enumerate(
        &self,
        i: usize,
        remaining: i64,
        caps: &[u32],
        exps: &mut Vec<u32>,
        out: &mut Vec<BasisElement>,
    ) {
        if i == self.arity() {
            if remaining == 0 {
                let m = Monomial(exps.clone());
                if let Some(order) = self.order_of(&m) {
                    out.push(BasisElement { monomial: m, order });
                }
            }
            return;
        }
        let deg = self.generators[i].degree;
        for e in 0..=caps[i] {
            exps[i] = e;
            self.enumerate(i + 1, remaining - i64::from(e) * deg, caps, exps, out);
        }
        exps[i] = 0;
    }

    /// Bounds on the total degree of nonzero monomials, from the exponent
    /// bounds alone; relations can make them loose. Positive-degree
    /// polynomial generators make the top unbounded.
    pub fn degree_floor(&self) -> i64 {
        self.generators
            .iter()
            .zip(&self.bounds)
            .filter(|(g, _)| g.degree < 0)
            .map(|(g, b)| match b {
                ExponentBound::Fixed(k) => i64::from(*k) * g.degree,
                ExponentBound::Open => 0,
            })
            .sum()
    }

    pub fn degree_ceiling(&self) -> Option<i64> {
        self.generators
            .iter()
            .zip(&self.bounds)
            .filter(|(g, _)| g.degree > 0)
            .map(|(g, b)| match b {
                ExponentBound::Fixed(k) => Some(i64::from(*k) * g.degree),
                ExponentBound::Open => None,
            })
            .sum()
    }

    /// Lowest degree that actually carries a basis element.
    pub fn lowest_degree(&self) -> i64 {
        (self.degree_floor()..=0).find(|&d| !self.basis_in_degree(d).is_empty()).unwrap_or(0)
    }

    /// Tensor product. Colliding generator names of `other` get a numeric
    /// suffix (`a` becomes `a_2`, then `a_3`, ...).
    pub fn tensor(&self, other: &RingPresentation) -> RingPresentation {
        let mut used: HashSet<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let mut generators = self.generators.clone();
        for g in &other.generators {
            let mut name = g.name.clone();
            let mut k = 2;
            while used.contains(&name) {
                name = format!("{}_{k}", g.name);
                k += 1;
            }
            used.insert(name.clone());
            generators.push(GeneratorSpec { name, ..g.clone() });
        }
        let (na, nb) = (self.arity(), other.arity());
        let mut relations: Vec<Relation> = self
            .relations
            .iter()
            .map(|r| {
                let mut e = r.monomial.0.clone();
                e.resize(na + nb, 0);
                Relation::new(r.coefficient, Monomial(e))
            })
            .collect();
        relations.extend(other.relations.iter().map(|r| {
            let mut e = vec![0; na];
            e.extend_from_slice(&r.monomial.0);
            Relation::new(r.coefficient, Monomial(e))
        }));
        RingPresentation::new(generators, relations).expect("tensor product of valid presentations is valid")
    }

    fn single_char_names(&self) -> bool {
        self.generators.iter().all(|g| g.name.chars().count() == 1)
    }

    /// ASCII rendering: `au`, `u^2`, `a_2*b` (juxtaposed when every name is one character).
    pub fn display_monomial(&self, m: &Monomial) -> String {
        if m.is_unit() {
            return "1".to_string();
        }
        let sep = if self.single_char_names() { "" } else { "*" };
        m.0.iter()
            .zip(&self.generators)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn display(&self, x: &RingElement) -> String {
        if x.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, &c)) in x.terms.iter().enumerate() {
            let mono = self.display_monomial(m);
            let (neg, abs) = (c < 0, c.unsigned_abs());
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if abs == 1 {
                out.push_str(&mono);
            } else if m.is_unit() {
                out.push_str(&abs.to_string());
            } else {
                out.push_str(&format!("{abs} {mono}"));
            }
        }
        out
    }

    /// Parses `1`, `a`, `a*u^2`, `3*a*v` into a normalized element.
    pub fn parse_monomial(&self, s: &str) -> Result<RingElement> {
        let bad = |msg: &str| AlgebraError::Parse { line: 1, msg: msg.to_string() };
        let mut coefficient = 1i64;
        let mut factors = Vec::new();
        for piece in s.trim().split('*') {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(bad("empty factor"));
            }
            if let Ok(c) = piece.parse::<i64>() {
                coefficient = coefficient.checked_mul(c).ok_or(AlgebraError::CoefficientOverflow)?;
                continue;
            }
            let (name, exp) = match piece.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                None => (piece, 1),
            };
            factors.push((name.to_string(), exp));
        }
        self.normalize(&[RawTerm { coefficient, factors }])
    }
}

fn blocks(m: &Monomial) -> Vec<(usize, u32)> {
    m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect()
}

/// Integer combination of normal-form monomials of one presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: u64,
    terms: BTreeMap<Monomial, i64>,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Degree if every term has the same degree (zero is homogeneous of any degree).
    pub fn homogeneous_degree(&self, p: &RingPresentation) -> Option<Option<i64>> {
        let mut degs = self.terms.keys().map(|m| p.degree(m));
        let Some(first) = degs.next() else {
            return Some(None);
        };
        degs.all(|d| d == first).then_some(Some(first))
    }
}

#[cfg(test)]
mod tests;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
