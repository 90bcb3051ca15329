//! Regraded homology rings of spheres, loop spaces, unit tangent bundles and
//! immersion spaces, indexed by the ambient dimension `n`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{
    AlgebraError, Commutation, GeneratorSpec, Monomial, Relation, RingMorphism, RingPresentation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("n = {found} is below the minimum {min}")]
    DimensionTooSmall { min: i64, found: i64 },
    #[error("{space} is only available for {required} n, got n = {n}")]
    Parity { space: &'static str, required: &'static str, n: i64 },
    #[error("unknown catalog space `{0}`")]
    UnknownSpace(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub type Result<T> = std::result::Result<T, CatalogError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    LoopSphere,
    UnitTangent,
    OmegaUnitTangent,
    OmegaSphere,
    Imm,
    ImmPrime,
    Sphere,
    EmbWindow,
}

impl Space {
    pub const ALL: [Space; 8] = [
        Space::LoopSphere,
        Space::UnitTangent,
        Space::OmegaUnitTangent,
        Space::OmegaSphere,
        Space::Imm,
        Space::ImmPrime,
        Space::Sphere,
        Space::EmbWindow,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Space::LoopSphere => "loop_sphere",
            Space::UnitTangent => "unit_tangent",
            Space::OmegaUnitTangent => "omega_unit_tangent",
            Space::OmegaSphere => "omega_sphere",
            Space::Imm => "imm",
            Space::ImmPrime => "imm_prime",
            Space::Sphere => "sphere",
            Space::EmbWindow => "emb_window",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Space {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self> {
        Space::ALL
            .into_iter()
            .find(|sp| sp.key() == s)
            .ok_or_else(|| CatalogError::UnknownSpace(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CatalogKey {
    pub space: Space,
    pub n: i64,
}

impl CatalogKey {
    pub fn new(space: Space, n: i64) -> Result<Self> {
        require_at_least(n, 3)?;
        Ok(CatalogKey { space, n })
    }

    /// `omega_sphere` is keyed by the ambient `n` and built as ΩS^{n−1}.
    pub fn build(&self) -> Result<RingPresentation> {
        let n = self.n;
        match self.space {
            Space::LoopSphere => loop_homology_sphere(n),
            Space::UnitTangent => unit_tangent_ring(n),
            Space::OmegaUnitTangent => omega_unit_tangent(n),
            Space::OmegaSphere => omega_sphere(n - 1),
            Space::Imm => imm_ring(n),
            Space::ImmPrime => imm_prime_ring(n),
            Space::Sphere => sphere_intersection_ring(n),
            Space::EmbWindow => emb_window(n),
        }
    }

    /// Whether the key is defined for this `n` (some spaces are even-only).
    pub fn is_supported(&self) -> bool {
        match self.space {
            Space::OmegaUnitTangent => self.n % 2 == 0,
            Space::EmbWindow => self.n >= 4,
            _ => true,
        }
    }
}

fn require_at_least(n: i64, min: i64) -> Result<()> {
    if n < min {
        Err(CatalogError::DimensionTooSmall { min, found: n })
    } else {
        Ok(())
    }
}

fn rel(c: u64, exps: &[u32]) -> Relation {
    Relation::new(c, Monomial::from_exponents(exps.to_vec()))
}

pub fn loop_homology_sphere(n: i64) -> Result<RingPresentation> {
    require_at_least(n, 2)?;
    let ring = if n % 2 == 1 {
        RingPresentation::new(
            vec![GeneratorSpec::exterior("a", -n), GeneratorSpec::polynomial("u", n - 1)],
            vec![],
        )?
    } else {
        RingPresentation::new(
            vec![
                GeneratorSpec::polynomial("a", -n),
                GeneratorSpec::exterior("b", -1),
                GeneratorSpec::polynomial("v", 2 * n - 2),
            ],
            vec![rel(1, &[2, 0, 0]), rel(1, &[1, 1, 0]), rel(2, &[1, 0, 1])],
        )?
    };
    Ok(ring)
}

pub fn unit_tangent_ring(n: i64) -> Result<RingPresentation> {
    require_at_least(n, 3)?;
    let ring = if n % 2 == 0 {
        RingPresentation::new(
            vec![GeneratorSpec::exterior("a", -n + 1), GeneratorSpec::exterior("b", -2 * n + 1)],
            vec![rel(2, &[1, 0]), rel(1, &[1, 1])],
        )?
    } else {
        RingPresentation::new(
            vec![GeneratorSpec::exterior("a", -n + 1), GeneratorSpec::exterior("b", -n)],
            vec![],
        )?
    };
    Ok(ring)
}

pub fn omega_unit_tangent(n: i64) -> Result<RingPresentation> {
    omega_unit_tangent_with(n, Commutation::Central)
}

/// Same ring with a chosen commutation rule for its generators; both
/// generators have even degree, so ranks and torsion do not depend on it.
pub fn omega_unit_tangent_with(n: i64, commutation: Commutation) -> Result<RingPresentation> {
    require_at_least(n, 3)?;
    if n % 2 != 0 {
        return Err(CatalogError::Parity { space: "omega_unit_tangent", required: "even", n });
    }
    let mut u = GeneratorSpec::polynomial("u", n - 2);
    let mut v = GeneratorSpec::polynomial("v", 2 * n - 2);
    u.commutation = commutation;
    v.commutation = commutation;
    Ok(RingPresentation::new(vec![u, v], vec![rel(2, &[1, 0])])?)
}

/// ℤ[u] with `u` in degree `m − 1`.
pub fn omega_sphere(m: i64) -> Result<RingPresentation> {
    require_at_least(m, 2)?;
    Ok(RingPresentation::new(vec![GeneratorSpec::polynomial("u", m - 1).central()], vec![])?)
}

pub fn sphere_intersection_ring(n: i64) -> Result<RingPresentation> {
    require_at_least(n, 1)?;
    Ok(RingPresentation::new(vec![GeneratorSpec::exterior("c", -n)], vec![])?)
}

pub fn imm_prime_ring(n: i64) -> Result<RingPresentation> {
    require_at_least(n, 3)?;
    if n % 2 == 0 {
        Ok(unit_tangent_ring(n)?.tensor(&omega_sphere(n - 1)?))
    } else {
        Ok(sphere_intersection_ring(n)?.tensor(&loop_homology_sphere(n - 1)?))
    }
}

pub fn imm_ring(n: i64) -> Result<RingPresentation> {
    imm_ring_with(n, Commutation::Central)
}

/// The even case depends on the commutation rule chosen for the fibre
/// factor; the odd case ignores it.
pub fn imm_ring_with(n: i64, commutation: Commutation) -> Result<RingPresentation> {
    require_at_least(n, 3)?;
    if n % 2 == 0 {
        Ok(unit_tangent_ring(n)?.tensor(&omega_unit_tangent_with(n, commutation)?))
    } else {
        Ok(loop_homology_sphere(n)?.tensor(&loop_homology_sphere(n - 1)?))
    }
}

/// Low-degree window of the regraded knot-space homology: ℍ(USⁿ) tensored
/// with the first long-knot class `k` in degree 2n − 6.
pub fn emb_window(n: i64) -> Result<RingPresentation> {
    require_at_least(n, 4)?;
    let k = RingPresentation::new(vec![GeneratorSpec::exterior("k", 2 * n - 6)], vec![])?;
    Ok(unit_tangent_ring(n)?.tensor(&k))
}

/// ℍ(Imm′) → ℍ(Imm). Even n: identity on ℍ(USⁿ) and the fibre inclusion
/// `u ↦ u`. Odd n: constant loops `c ↦ a` on the first factor and the
/// identity on ℍ(LS^{n−1}).
pub fn inclusion_morphism(n: i64) -> Result<RingMorphism> {
    require_at_least(n, 3)?;
    let source = imm_prime_ring(n)?;
    let target = imm_ring(n)?;
    let assignments: &[(&str, &str)] = if n % 2 == 0 {
        &[("a", "a"), ("b", "b"), ("u", "u")]
    } else {
        &[("c", "a"), ("a", "a_2"), ("b", "b"), ("v", "v")]
    };
    Ok(RingMorphism::from_assignments(source, target, assignments)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GeneratorKind, Order};

    fn basis(r: &RingPresentation, d: i64) -> Vec<(String, Order)> {
        r.basis_in_degree(d).into_iter().map(|b| (r.display_monomial(&b.monomial), b.order)).collect()
    }

    fn gens(r: &RingPresentation) -> Vec<(String, i64, GeneratorKind)> {
        r.generators().iter().map(|g| (g.name.clone(), g.degree, g.kind)).collect()
    }

    #[test]
    fn loop_sphere_odd_generators() {
        let r = loop_homology_sphere(3).unwrap();
        assert_eq!(
            gens(&r),
            vec![("a".into(), -3, GeneratorKind::Exterior), ("u".into(), 2, GeneratorKind::Polynomial)]
        );
        assert_eq!(r.summary(), "Λ(a)⊗ℤ[u]");
    }

    #[test]
    fn loop_sphere_even_relations() {
        let r = loop_homology_sphere(4).unwrap();
        assert_eq!(r.summary(), "(Λ(b)⊗ℤ[a,v])/(a²,ab,2av)");
        let rels: Vec<_> =
            r.relations().iter().map(|x| (r.display_monomial(x.monomial()), x.coefficient())).collect();
        assert_eq!(rels, vec![("a^2".into(), 1), ("ab".into(), 1), ("av".into(), 2)]);
    }

    #[test]
    fn degree_zero_rank_is_one() {
        for n in 3..=8 {
            for space in Space::ALL {
                let key = CatalogKey::new(space, n).unwrap();
                if !key.is_supported() {
                    assert!(key.build().is_err());
                    continue;
                }
                let r = key.build().unwrap();
                let d0 = basis(&r, 0);
                assert!(d0.contains(&("1".into(), Order::Free)), "{space} n={n}");
                // Odd-n tensor products also carry classes such as u ⊗ a in degree 0.
                let product = matches!(space, Space::Imm | Space::ImmPrime | Space::EmbWindow);
                if !product || n % 2 == 0 {
                    assert_eq!(d0.len(), 1, "{space} n={n}");
                }
            }
        }
    }

    #[test]
    fn unit_tangent_even_torsion() {
        let r = unit_tangent_ring(4).unwrap();
        assert_eq!(basis(&r, -3), vec![("a".into(), Order::Torsion(2))]);
        let ab = r.multiply(&r.generator("a").unwrap(), &r.generator("b").unwrap()).unwrap();
        assert!(ab.is_zero());
    }

    #[test]
    fn unit_tangent_odd_total_rank() {
        let r = unit_tangent_ring(5).unwrap();
        let total: usize = (-9..=0).map(|d| r.basis_in_degree(d).len()).sum();
        assert_eq!(total, 4);
        assert_eq!(basis(&r, -9), vec![("ab".into(), Order::Free)]);
    }

    #[test]
    fn omega_unit_tangent_examples() {
        let r = omega_unit_tangent(4).unwrap();
        assert_eq!(basis(&r, 4), vec![("u^2".into(), Order::Torsion(2))]);
        assert_eq!(basis(&r, 0), vec![("1".into(), Order::Free)]);
        assert!(matches!(omega_unit_tangent(5), Err(CatalogError::Parity { .. })));
    }

    #[test]
    fn omega_sphere_examples() {
        let r = omega_sphere(4).unwrap();
        assert_eq!(r.generators()[0].degree, 3);
        assert_eq!(basis(&r, 6), vec![("u^2".into(), Order::Free)]);
        for m in 3..8 {
            assert!(omega_sphere(m).unwrap().basis_in_degree(1).is_empty());
        }
        assert!(omega_sphere(1).is_err());
    }

    #[test]
    fn imm_prime_presentations() {
        let even = imm_prime_ring(4).unwrap();
        assert_eq!(even.summary(), "(Λ(a,b)⊗ℤ[u])/(2a,ab)");
        let odd = imm_prime_ring(5).unwrap();
        assert_eq!(odd, sphere_intersection_ring(5).unwrap().tensor(&loop_homology_sphere(4).unwrap()));
    }

    #[test]
    fn imm_presentations() {
        let odd = imm_ring(5).unwrap();
        assert_eq!(odd, loop_homology_sphere(5).unwrap().tensor(&loop_homology_sphere(4).unwrap()));
        let even = imm_ring(4).unwrap();
        let degrees: Vec<_> = even.generators().iter().map(|g| (g.name.as_str(), g.degree)).collect();
        assert_eq!(degrees, [("a", -3), ("b", -7), ("u", 2), ("v", 6)]);
        assert_eq!(even.relations().len(), 3);
    }

    #[test]
    fn imm_commutation_flag_does_not_change_ranks() {
        let a = imm_ring_with(6, Commutation::Central).unwrap();
        let b = imm_ring_with(6, Commutation::Koszul).unwrap();
        for d in -30..=30 {
            let orders =
                |r: &RingPresentation| r.basis_in_degree(d).into_iter().map(|x| x.order).collect::<Vec<_>>();
            assert_eq!(orders(&a), orders(&b), "degree {d}");
        }
    }

    #[test]
    fn sphere_ring() {
        let r = sphere_intersection_ring(3).unwrap();
        assert_eq!(r.summary(), "Λ(c)");
        let c = r.generator("c").unwrap();
        assert!(r.multiply(&c, &c).unwrap().is_zero());
        assert_eq!(r.basis_in_degree(-3).len(), 1);
    }

    #[test]
    fn inclusion_even_images() {
        let f = inclusion_morphism(4).unwrap();
        let t = f.target();
        let shown: Vec<_> = (0..3).map(|i| t.display(f.image_of_generator(i))).collect();
        assert_eq!(shown, ["a", "b", "u"]);
    }

    #[test]
    fn inclusion_odd_unit_and_multiplicativity() {
        let f = inclusion_morphism(5).unwrap();
        let one = f.apply(&f.source().one()).unwrap();
        assert_eq!(one, f.target().one());
        let report = f.check_multiplicative(-20, 20).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
        assert!(report.pairs_checked > 0);
    }

    #[test]
    fn catalog_validates_for_all_n() {
        for n in 3..=12 {
            for space in Space::ALL {
                let key = CatalogKey::new(space, n).unwrap();
                if key.is_supported() {
                    key.build().unwrap();
                }
            }
        }
        assert!(CatalogKey::new(Space::Imm, 2).is_err());
    }

    #[test]
    fn space_keys_round_trip() {
        for space in Space::ALL {
            assert_eq!(space.key().parse::<Space>().unwrap(), space);
        }
        assert!("klein".parse::<Space>().is_err());
    }
}
