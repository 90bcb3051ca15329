use super::*;

fn even_loop_ring() -> RingPresentation {
    // (Λ(b)⊗ℤ[a,v])/(a²,ab,2av) at n = 4
    RingPresentation::new(
        vec![
            GeneratorSpec::polynomial("a", -4),
            GeneratorSpec::exterior("b", -1),
            GeneratorSpec::polynomial("v", 6),
        ],
        vec![
            Relation::new(1, Monomial::from_exponents(vec![2, 0, 0])),
            Relation::new(1, Monomial::from_exponents(vec![1, 1, 0])),
            Relation::new(2, Monomial::from_exponents(vec![1, 0, 1])),
        ],
    )
    .unwrap()
}

fn odd_loop_ring() -> RingPresentation {
    RingPresentation::new(vec![GeneratorSpec::exterior("a", -3), GeneratorSpec::polynomial("u", 2)], vec![])
        .unwrap()
}

#[test]
fn a_squared_vanishes() {
    let r = even_loop_ring();
    let x = r.normalize(&[RawTerm::new(1, &[("a", 1), ("a", 1)])]).unwrap();
    assert!(x.is_zero());
}

#[test]
fn two_av_vanishes() {
    let r = even_loop_ring();
    let x = r.normalize(&[RawTerm::new(2, &[("a", 1), ("v", 1)])]).unwrap();
    assert!(x.is_zero());
    let y = r.normalize(&[RawTerm::new(3, &[("v", 1), ("a", 1)])]).unwrap();
    assert_eq!(r.display(&y), "av");
}

#[test]
fn unit_factor_is_trivial() {
    let r = odd_loop_ring();
    let u = r.generator("u").unwrap();
    assert_eq!(r.multiply(&r.one(), &u).unwrap(), u);
    assert_eq!(r.display(&u), "u");
}

#[test]
fn a_times_u_has_degree_minus_one() {
    let r = odd_loop_ring();
    let au = r.multiply(&r.generator("a").unwrap(), &r.generator("u").unwrap()).unwrap();
    assert_eq!(r.display(&au), "au");
    let (m, c) = au.terms().next().unwrap();
    assert_eq!((r.degree(m), c), (-1, 1));
}

#[test]
fn exterior_square_is_zero() {
    let r = even_loop_ring();
    let b = r.generator("b").unwrap();
    assert!(r.multiply(&b, &b).unwrap().is_zero());
}

#[test]
fn square_of_a_plus_v() {
    // (a+v)² = a² + av + va + v²; a and v have even degree so va = av,
    // a² = 0 and 2av = 0 leave v².
    let r = even_loop_ring();
    let s = r.add(&r.generator("a").unwrap(), &r.generator("v").unwrap()).unwrap();
    let sq = r.multiply(&s, &s).unwrap();
    assert_eq!(r.display(&sq), "v^2");
}

#[test]
fn koszul_sign_on_odd_generators() {
    let r =
        RingPresentation::new(vec![GeneratorSpec::exterior("x", 1), GeneratorSpec::exterior("y", 3)], vec![])
            .unwrap();
    let yx = r.normalize(&[RawTerm::new(1, &[("y", 1), ("x", 1)])]).unwrap();
    assert_eq!(r.display(&yx), "-xy");
    let central = RingPresentation::new(
        vec![GeneratorSpec::exterior("x", 1).central(), GeneratorSpec::exterior("y", 3).central()],
        vec![],
    )
    .unwrap();
    let yx = central.normalize(&[RawTerm::new(1, &[("y", 1), ("x", 1)])]).unwrap();
    assert_eq!(central.display(&yx), "xy");
}

#[test]
fn torsion_coefficients_reduce() {
    let r = even_loop_ring();
    let x = r.normalize(&[RawTerm::new(-1, &[("a", 1), ("v", 2)])]).unwrap();
    assert_eq!(r.display(&x), "av^2");
}

#[test]
fn coprime_torsion_kills() {
    let r = RingPresentation::new(
        vec![GeneratorSpec::polynomial("x", 2), GeneratorSpec::polynomial("y", 2)],
        vec![
            Relation::new(4, Monomial::from_exponents(vec![1, 0])),
            Relation::new(6, Monomial::from_exponents(vec![0, 1])),
        ],
    )
    .unwrap();
    assert_eq!(r.order_of(&Monomial::from_exponents(vec![1, 0])), Some(Order::Torsion(4)));
    assert_eq!(r.order_of(&Monomial::from_exponents(vec![1, 1])), Some(Order::Torsion(2)));
    let r = RingPresentation::new(
        vec![GeneratorSpec::polynomial("x", 2), GeneratorSpec::polynomial("y", 2)],
        vec![
            Relation::new(2, Monomial::from_exponents(vec![1, 0])),
            Relation::new(3, Monomial::from_exponents(vec![0, 1])),
        ],
    )
    .unwrap();
    assert_eq!(r.order_of(&Monomial::from_exponents(vec![1, 1])), None);
    assert!(r.basis_in_degree(4).iter().all(|b| b.monomial != Monomial::from_exponents(vec![1, 1])));
}

#[test]
fn unknown_generator_is_rejected() {
    let r = odd_loop_ring();
    assert_eq!(r.normalize(&[RawTerm::new(1, &[("z", 1)])]), Err(AlgebraError::UnknownGenerator("z".into())));
}

#[test]
fn exponent_overflow_is_reported() {
    let r = odd_loop_ring();
    let err = r.normalize(&[RawTerm::new(1, &[("u", u32::MAX), ("u", 2)])]).unwrap_err();
    assert_eq!(err, AlgebraError::ExponentOverflow("u".into()));
}

#[test]
fn mismatched_presentations_are_rejected() {
    let a = odd_loop_ring();
    let b = even_loop_ring();
    assert_eq!(a.multiply(&a.one(), &b.one()), Err(AlgebraError::PresentationMismatch));
}

#[test]
fn non_nilpotent_negative_generator_is_rejected() {
    let err = RingPresentation::new(vec![GeneratorSpec::polynomial("w", -2)], vec![]).unwrap_err();
    assert_eq!(err, AlgebraError::NonEnumerable("w".into()));
}

#[test]
fn basis_examples() {
    let r = odd_loop_ring();
    let names = |d| {
        r.basis_in_degree(d)
            .into_iter()
            .map(|b| format!("{} {}", r.display_monomial(&b.monomial), b.order))
            .collect::<Vec<_>>()
    };
    assert_eq!(names(0), vec!["1 free"]);
    assert_eq!(names(-1), vec!["au free"]);
    assert_eq!(names(1), vec!["au^2 free"]);
    assert_eq!(names(-5), Vec::<String>::new());

    let omega = RingPresentation::new(
        vec![GeneratorSpec::polynomial("u", 2).central(), GeneratorSpec::polynomial("v", 6).central()],
        vec![Relation::new(2, Monomial::from_exponents(vec![1, 0]))],
    )
    .unwrap();
    let d6: Vec<_> = omega
        .basis_in_degree(6)
        .into_iter()
        .map(|b| (omega.display_monomial(&b.monomial), b.order))
        .collect();
    assert_eq!(d6, vec![("u^3".to_string(), Order::Torsion(2)), ("v".to_string(), Order::Free)]);
}

#[test]
fn tensor_of_exterior_and_polynomial() {
    let ext = RingPresentation::new(vec![GeneratorSpec::exterior("a", -3)], vec![]).unwrap();
    let poly = RingPresentation::new(vec![GeneratorSpec::polynomial("u", 2)], vec![]).unwrap();
    let t = ext.tensor(&poly);
    assert_eq!(t.arity(), 2);
    assert_eq!(t.summary(), "Λ(a)⊗ℤ[u]");
    assert_eq!(t, odd_loop_ring());
    assert_eq!(t.tensor(&RingPresentation::unit_ring()), t);
}

#[test]
fn tensor_renames_collisions() {
    let r = odd_loop_ring();
    let t = r.tensor(&r);
    let names: Vec<_> = t.generators().iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["a", "u", "a_2", "u_2"]);
    let x = t.parse_monomial("u_2*a").unwrap();
    assert_eq!(t.display(&x), "a*u_2");
}

#[test]
fn tensor_ranks_multiply() {
    let a = odd_loop_ring();
    let b = RingPresentation::new(
        vec![GeneratorSpec::exterior("c", -5), GeneratorSpec::polynomial("w", 4)],
        vec![],
    )
    .unwrap();
    let t = a.tensor(&b);
    for d in -20..=20 {
        let expected: usize =
            (-60..=60).map(|i| a.basis_in_degree(i).len() * b.basis_in_degree(d - i).len()).sum();
        assert_eq!(t.basis_in_degree(d).len(), expected, "degree {d}");
    }
}

#[test]
fn text_round_trip() {
    let r = even_loop_ring();
    let text = r.to_text();
    assert_eq!(
        text,
        "# (Λ(b)⊗ℤ[a,v])/(a²,ab,2av)\n\
         gen a deg=-4 kind=poly comm=koszul\n\
         gen b deg=-1 kind=ext comm=koszul\n\
         gen v deg=6 kind=poly comm=koszul\n\
         rel 1 a^2\n\
         rel 1 a*b\n\
         rel 2 a*v\n"
    );
    let parsed = RingPresentation::from_text(&text).unwrap();
    assert_eq!(parsed, r);
    assert_eq!(parsed.to_text(), text);
}

#[test]
fn text_errors_carry_line_numbers() {
    let err = RingPresentation::from_text("gen a deg=1 kind=ext comm=koszul\nrel 1 b\n").unwrap_err();
    assert!(matches!(err, AlgebraError::Parse { line: 2, .. }));
    let err = RingPresentation::from_text("gen a deg=x kind=ext comm=koszul\n").unwrap_err();
    assert!(matches!(err, AlgebraError::Parse { line: 1, .. }));
}

#[test]
fn identity_and_zero_morphisms() {
    let r = even_loop_ring();
    let id = RingMorphism::identity(&r);
    assert!(id.check_multiplicative(-20, 20).unwrap().is_clean());
    let zero = RingMorphism::zero(&r, &r);
    let report = zero.check_multiplicative(-20, 20).unwrap();
    let first = &report.violations[0];
    assert_eq!((first.left.as_str(), first.right.as_str()), ("1", "1"));
}

#[test]
fn ill_defined_morphism_names_relation() {
    let r = even_loop_ring();
    let free = RingPresentation::new(
        vec![
            GeneratorSpec::polynomial("a", -4),
            GeneratorSpec::exterior("b", -1),
            GeneratorSpec::polynomial("v", 6),
        ],
        vec![Relation::new(1, Monomial::from_exponents(vec![2, 0, 0]))],
    )
    .unwrap();
    // r → free forgets ab = 0 and 2av = 0.
    let f = RingMorphism::from_assignments(r.clone(), free, &[("a", "a"), ("b", "b"), ("v", "v")]).unwrap();
    assert_eq!(f.apply(&r.one()), Err(AlgebraError::RelationImageNonzero("ab".into())));
}

#[test]
fn degree_mismatch_is_rejected() {
    let r = odd_loop_ring();
    let err = RingMorphism::from_assignments(r.clone(), r, &[("a", "a"), ("u", "a*u")]).unwrap_err();
    assert!(matches!(err, AlgebraError::DegreeMismatch { .. }));
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn word() -> impl Strategy<Value = Vec<(usize, u32)>> {
        prop::collection::vec((0usize..3, 0u32..4), 0..6)
    }

    fn raw(r: &RingPresentation, c: i64, w: &[(usize, u32)]) -> RawTerm {
        RawTerm {
            coefficient: c,
            factors: w.iter().map(|&(g, e)| (r.generators()[g].name.clone(), e)).collect(),
        }
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(c in -5i64..5, w in word()) {
            let r = even_loop_ring();
            let x = r.normalize(&[raw(&r, c, &w)]).unwrap();
            let again: Vec<RawTerm> = x.terms().map(|(m, c)| RawTerm {
                coefficient: c,
                factors: m.exponents().iter().zip(r.generators())
                    .map(|(&e, g)| (g.name.clone(), e)).collect(),
            }).collect();
            prop_assert_eq!(r.normalize(&again).unwrap(), x);
        }

        #[test]
        fn koszul_commutativity(w1 in word(), w2 in word()) {
            let r = RingPresentation::new(
                vec![
                    GeneratorSpec::exterior("x", -3),
                    GeneratorSpec::polynomial("y", 2),
                    GeneratorSpec::exterior("z", 5),
                ],
                vec![],
            ).unwrap();
            let x = r.normalize(&[raw(&r, 1, &w1)]).unwrap();
            let y = r.normalize(&[raw(&r, 1, &w2)]).unwrap();
            let dx = x.homogeneous_degree(&r).unwrap().unwrap_or(0);
            let dy = y.homogeneous_degree(&r).unwrap().unwrap_or(0);
            let xy = r.multiply(&x, &y).unwrap();
            let yx = r.multiply(&y, &x).unwrap();
            let sign = if (dx * dy).rem_euclid(2) == 1 { -1 } else { 1 };
            prop_assert_eq!(xy, r.scale(&yx, sign).unwrap());
        }

        #[test]
        fn product_degree_is_additive(w1 in word(), w2 in word()) {
            let r = even_loop_ring();
            let x = r.normalize(&[raw(&r, 1, &w1)]).unwrap();
            let y = r.normalize(&[raw(&r, 1, &w2)]).unwrap();
            let xy = r.multiply(&x, &y).unwrap();
            if let (Some(Some(dx)), Some(Some(dy))) =
                (x.homogeneous_degree(&r), y.homogeneous_degree(&r))
            {
                for (m, _) in xy.terms() {
                    prop_assert_eq!(r.degree(m), dx + dy);
                }
            }
        }
    }

    #[test]
    fn associative_and_unital_on_window() {
        let r = even_loop_ring();
        let basis: Vec<RingElement> = (-12..=12)
            .flat_map(|d| r.basis_in_degree(d))
            .map(|b| r.monomial_element(&b.monomial, 1))
            .collect();
        let one = r.one();
        for x in &basis {
            assert_eq!(&r.multiply(&one, x).unwrap(), x);
            assert_eq!(&r.multiply(x, &one).unwrap(), x);
            for y in &basis {
                let xy = r.multiply(x, y).unwrap();
                for z in &basis {
                    let left = r.multiply(&xy, z).unwrap();
                    let right = r.multiply(x, &r.multiply(y, z).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}
