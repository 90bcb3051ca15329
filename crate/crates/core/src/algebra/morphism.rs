use std::sync::OnceLock;

use rayon::prelude::*;

use super::{AlgebraError, GeneratorKind, Monomial, Result, RingElement, RingPresentation};

/// Ring map given on generators and extended multiplicatively.
#[derive(Debug)]
pub struct RingMorphism {
    source: RingPresentation,
    target: RingPresentation,
    images: Vec<RingElement>,
    unit_image: RingElement,
    checked: OnceLock<Result<()>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub left: String,
    pub right: String,
    pub image_of_product: String,
    pub product_of_images: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiplicativityReport {
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl MultiplicativityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl RingMorphism {
    pub fn new(source: RingPresentation, target: RingPresentation, images: Vec<RingElement>) -> Result<Self> {
        let unit_image = target.one();
        Self::with_unit_image(source, target, images, unit_image)
    }

    fn with_unit_image(
        source: RingPresentation,
        target: RingPresentation,
        images: Vec<RingElement>,
        unit_image: RingElement,
    ) -> Result<Self> {
        if images.len() != source.arity() {
            return Err(AlgebraError::ImageCount { expected: source.arity(), found: images.len() });
        }
        for (g, image) in source.generators().iter().zip(&images) {
            target.check_member(image)?;
            match image.homogeneous_degree(&target) {
                None => return Err(AlgebraError::InhomogeneousImage { generator: g.name.clone() }),
                Some(Some(d)) if d != g.degree => {
                    return Err(AlgebraError::DegreeMismatch {
                        generator: g.name.clone(),
                        expected: g.degree,
                        found: d,
                    })
                }
                _ => {}
            }
        }
        Ok(RingMorphism { source, target, images, unit_image, checked: OnceLock::new() })
    }

    /// Images given as `(source generator, target element)` strings, e.g. `("c", "a")`.
    pub fn from_assignments(
        source: RingPresentation,
        target: RingPresentation,
        assignments: &[(&str, &str)],
    ) -> Result<Self> {
        let mut images = vec![None; source.arity()];
        for (g, image) in assignments {
            let i = source.generator_index(g)?;
            images[i] = Some(target.parse_monomial(image)?);
        }
        let images = images
            .into_iter()
            .zip(source.generators())
            .map(|(im, g)| im.ok_or_else(|| AlgebraError::UnknownGenerator(g.name.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, images)
    }

    pub fn identity(p: &RingPresentation) -> Self {
        let images = p.generators().iter().map(|g| p.generator(&g.name).expect("own generator")).collect();
        Self::new(p.clone(), p.clone(), images).expect("identity is degree preserving")
    }

    /// Sends everything, including the unit, to zero.
    pub fn zero(source: &RingPresentation, target: &RingPresentation) -> Self {
        let images = vec![target.zero(); source.arity()];
        Self::with_unit_image(source.clone(), target.clone(), images, target.zero())
            .expect("zero images are homogeneous")
    }

    pub fn source(&self) -> &RingPresentation {
        &self.source
    }

    pub fn target(&self) -> &RingPresentation {
        &self.target
    }

    pub fn image_of_generator(&self, i: usize) -> &RingElement {
        &self.images[i]
    }

    fn image_of_monomial(&self, m: &Monomial) -> Result<RingElement> {
        let mut acc = self.target.one();
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                acc = self.target.multiply(&acc, &self.images[i])?;
                if acc.is_zero() {
                    return Ok(acc);
                }
            }
        }
        Ok(acc)
    }

    /// Verifies that every relation (and every exterior square) maps to zero.
    pub fn check_relations(&self) -> Result<()> {
        self.checked
            .get_or_init(|| {
                for (g, image) in self.source.generators().iter().zip(&self.images) {
                    if g.kind == GeneratorKind::Exterior && !self.target.multiply(image, image)?.is_zero() {
                        return Err(AlgebraError::RelationImageNonzero(format!("{}^2", g.name)));
                    }
                }
                for r in self.source.relations() {
                    let image = self.image_of_monomial(r.monomial())?;
                    let scaled = self.target.scale(&image, r.coefficient() as i64)?;
                    if !scaled.is_zero() {
                        let mono = self.source.display_monomial(r.monomial());
                        let label =
                            if r.coefficient() == 1 { mono } else { format!("{}{}", r.coefficient(), mono) };
                        return Err(AlgebraError::RelationImageNonzero(label));
                    }
                }
                Ok(())
            })
            .clone()
    }

    pub fn apply(&self, x: &RingElement) -> Result<RingElement> {
        self.source.check_member(x)?;
        self.check_relations()?;
        let mut acc = self.target.zero();
        for (m, c) in x.terms() {
            let image = self.image_of_monomial(m)?;
            let image = self.target.multiply(&self.unit_image, &image)?;
            acc = self.target.add(&acc, &self.target.scale(&image, c)?)?;
        }
        Ok(acc)
    }

    /// Checks `f(1) = 1` and `f(xy) = f(x)f(y)` for every pair of basis
    /// monomials whose degrees and product degree lie in `[lo, hi]`.
    pub fn check_multiplicative(&self, lo: i64, hi: i64) -> Result<MultiplicativityReport> {
        self.check_relations()?;
        let mut report = MultiplicativityReport::default();
        let one = self.source.one();
        let f_one = self.apply(&one)?;
        if f_one != self.target.one() {
            report.violations.push(Violation {
                left: "1".into(),
                right: "1".into(),
                image_of_product: self.target.display(&f_one),
                product_of_images: "1".into(),
            });
        }
        let basis: Vec<(i64, RingElement, String)> = (lo..=hi)
            .flat_map(|d| self.source.basis_in_degree(d).into_iter().map(move |b| (d, b)))
            .map(|(d, b)| {
                (d, self.source.monomial_element(&b.monomial, 1), self.source.display_monomial(&b.monomial))
            })
            .collect();
        let images = basis.iter().map(|(_, x, _)| self.apply(x)).collect::<Result<Vec<_>>>()?;

        let rows = (0..basis.len())
            .into_par_iter()
            .map(|i| {
                let mut checked = 0usize;
                let mut found = Vec::new();
                for j in 0..basis.len() {
                    let (dx, x, nx) = &basis[i];
                    let (dy, y, ny) = &basis[j];
                    if !(lo..=hi).contains(&(dx + dy)) {
                        continue;
                    }
                    checked += 1;
                    let lhs = self.apply(&self.source.multiply(x, y)?)?;
                    let rhs = self.target.multiply(&images[i], &images[j])?;
                    if lhs != rhs {
                        found.push(Violation {
                            left: nx.clone(),
                            right: ny.clone(),
                            image_of_product: self.target.display(&lhs),
                            product_of_images: self.target.display(&rhs),
                        });
                    }
                }
                Ok((checked, found))
            })
            .collect::<Result<Vec<_>>>()?;
        for (checked, found) in rows {
            report.pairs_checked += checked;
            report.violations.extend(found);
        }
        Ok(report)
    }
}
