use std::sync::Arc;

use fibrelab::catcolim::{
    certify_cofinal_quotient, colimit_cat, comparison_q, object_diagram, verify_cat_cocone, CatColimError,
    CatColimitResult, DEFAULT_BOUND,
};
use fibrelab::fincat::search::{enumerate_functors, find_isomorphism};
use fibrelab::fincat::{product, product_projections, CategoryBuilder, FinCategory, FinFunctor, MorId, ObjId};
use fibrelab::finset::colimit_set;
use fibrelab::fixtures;
use fibrelab::grothendieck::{groth_co, CatDiagram, Variance};
use fibrelab::random::{random_cat_diagram, rng};
use fibrelab::Status;
use proptest::prelude::*;

/// Natural families `L_d: Phi d -> C`, by brute force.
fn cocones(phi: &CatDiagram, c: &Arc<FinCategory>) -> Vec<Vec<FinFunctor>> {
    let shape = phi.shape();
    let mut out: Vec<Vec<FinFunctor>> = vec![Vec::new()];
    for d in shape.objects() {
        let legs = enumerate_functors(phi.fibre(d), c, usize::MAX);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                legs.iter().map(move |l| {
                    let mut p = prefix.clone();
                    p.push(l.clone());
                    p
                })
            })
            .collect();
    }
    out.retain(|family| {
        shape.morphisms().all(|u| {
            let t = phi.transition(u);
            family[shape.cod(u).0].after(t).unwrap() == family[shape.dom(u).0]
        })
    });
    out
}

/// Universality against a test category: restriction along the cocone is a
/// bijection from functors `K -> C` to cocones into `C`.
fn universal_against(result: &CatColimitResult, c: &Arc<FinCategory>) -> bool {
    let phi = &result.diagram;
    let expected = cocones(phi, c);
    let mut restricted: Vec<Vec<FinFunctor>> = enumerate_functors(&result.colimit, c, usize::MAX)
        .iter()
        .map(|m| result.cocone.iter().map(|k| m.after(k).unwrap()).collect())
        .collect();
    let n = restricted.len();
    restricted.sort_by_key(|f| format!("{f:?}"));
    restricted.dedup();
    n == restricted.len() && n == expected.len() && expected.iter().all(|e| restricted.contains(e))
}

#[test]
fn single_index_gives_the_fibre() {
    let one = Arc::new(fixtures::one());
    for fibre in [fixtures::push3(), fixtures::z3(), fixtures::pair()] {
        let fibre = Arc::new(fibre);
        let phi = CatDiagram::constant(&one, &fibre, Variance::Covariant);
        let r = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
        assert!(r.cocone[0].is_bijective());
        let groth = groth_co(&phi).unwrap();
        assert!(comparison_q(&groth, &r).unwrap().is_bijective());
    }
}

#[test]
fn span_gluing_is_push3() {
    let phi = fixtures::span_gluing();
    let r = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    assert_eq!(r.colimit.object_count(), 3);
    assert_eq!(r.colimit.morphism_count(), 6);
    assert!(find_isomorphism(&r.colimit, &Arc::new(fixtures::push3())).is_some());
    let names: Vec<&str> = r.colimit.morphisms().map(|m| r.colimit.mor_name(m)).collect();
    assert!(names.contains(&"l.a;r.a"), "{names:?}");
    for c in [fixtures::two(), fixtures::push3(), fixtures::pair()] {
        assert!(universal_against(&r, &Arc::new(c)));
    }
}

#[test]
fn loop_coequalizer_exceeds_every_bound() {
    let phi = fixtures::loop_coequalizer();
    for bound in [10, 100, 1000] {
        match colimit_cat(&phi, bound) {
            Err(CatColimError::BoundExceeded { bound: b, trace }) => {
                assert_eq!(b, bound);
                let last = trace.last().unwrap();
                assert!(last.1 > bound);
                assert!(trace.windows(2).all(|w| w[0].1 <= w[1].1));
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn collapsing_a_generator_identifies_it_with_an_identity() {
    // ONE <- TWO -> Z2 with a sent to the generator r
    let shape = Arc::new(fixtures::span());
    let (one, two, z2) = (
        Arc::new(fixtures::one()),
        Arc::new(fixtures::two()),
        Arc::new(fixtures::z2()),
    );
    let to_z2 = FinFunctor::new(two.clone(), z2.clone(), vec![ObjId(0); 2], vec![MorId(0), MorId(0), MorId(1)]).unwrap();
    let transitions = shape
        .morphisms()
        .map(|u| match shape.mor_name(u) {
            "f" => FinFunctor::constant(&two, &one, ObjId(0)),
            "g" => to_z2.clone(),
            "idl" => FinFunctor::identity(&one),
            "ids" => FinFunctor::identity(&two),
            _ => FinFunctor::identity(&z2),
        })
        .collect();
    let phi = CatDiagram::new(shape, vec![one.clone(), two, z2.clone()], transitions, Variance::Covariant).unwrap();
    let r = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    assert_eq!((r.colimit.object_count(), r.colimit.morphism_count()), (1, 1));
    assert!(universal_against(&r, &z2));
}

#[test]
fn coproducts_and_free_products() {
    let d2 = Arc::new(fixtures::discrete(2));
    let two = Arc::new(fixtures::two());
    let r = colimit_cat(&CatDiagram::constant(&d2, &two, Variance::Covariant), DEFAULT_BOUND).unwrap();
    assert_eq!((r.colimit.object_count(), r.colimit.morphism_count()), (4, 6));
    // Z2 * Z2, the infinite dihedral group, as a pushout over ONE
    let shape = Arc::new(fixtures::span());
    let (one, z2) = (Arc::new(fixtures::one()), Arc::new(fixtures::z2()));
    let transitions = shape
        .morphisms()
        .map(|u| match shape.mor_name(u) {
            "f" | "g" => FinFunctor::constant(&one, &z2, ObjId(0)),
            "ids" => FinFunctor::identity(&one),
            _ => FinFunctor::identity(&z2),
        })
        .collect();
    let phi = CatDiagram::new(shape, vec![z2.clone(), one, z2], transitions, Variance::Covariant).unwrap();
    assert!(matches!(colimit_cat(&phi, 200), Err(CatColimError::BoundExceeded { .. })));
}

#[test]
fn constant_diagram_over_a_connected_shape_gives_the_fibre() {
    let d = Arc::new(fixtures::span());
    let e = Arc::new(fixtures::two());
    let phi = CatDiagram::constant(&d, &e, Variance::Covariant);
    let r = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    assert!(find_isomorphism(&r.colimit, &e).is_some());
    let groth = groth_co(&phi).unwrap();
    let q = comparison_q(&groth, &r).unwrap();
    // Q agrees with the second product projection under the iso D x E = total
    let de = Arc::new(product(&d, &e));
    let (_, second) = product_projections(&d, &e, &de);
    for o in groth.total.objects() {
        let (a, x) = groth.object_pairs[o.0];
        let p = ObjId(a.0 * e.object_count() + x.0);
        assert_eq!(q.obj(o), r.cocone[a.0].obj(second.obj(p)));
    }
    assert!(certify_cofinal_quotient(&q).is_pass());
}

#[test]
fn own_output_is_a_colimit_cocone() {
    let phi = fixtures::span_gluing();
    let r = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let report = verify_cat_cocone(&phi, &r.colimit, &r.cocone, DEFAULT_BOUND);
    assert!(report.is_pass(), "{}", report.to_json());
}

#[test]
fn swapped_legs_are_not_natural() {
    let phi = fixtures::span_gluing();
    let r = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let mut legs = r.cocone.clone();
    legs.swap(0, 2);
    let report = verify_cat_cocone(&phi, &r.colimit, &legs, DEFAULT_BOUND);
    assert_eq!(report.status, Status::Fail);
    assert_eq!(report.witness["error"], "NaturalityFailure");
}

#[test]
fn extra_object_is_not_universal() {
    let phi = fixtures::span_gluing();
    let r = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let k = &r.colimit;
    let mut b = CategoryBuilder::new();
    for o in k.objects() {
        b.object(k.obj_name(o));
    }
    let extra = b.object("stray");
    for m in k.morphisms() {
        b.morphism(k.mor_name(m), k.dom(m), k.cod(m));
    }
    for o in k.objects() {
        b.set_identity(o, k.identity(o));
    }
    b.identity("id.stray", extra);
    let n = k.morphism_count();
    let bigger = Arc::new(
        b.build(|g, f| if g.0 == n || f.0 == n { Some(MorId(n)) } else { k.compose(g, f) })
            .unwrap(),
    );
    let legs: Vec<FinFunctor> = r
        .cocone
        .iter()
        .map(|l| FinFunctor::new(l.source().clone(), bigger.clone(), l.object_map().to_vec(), l.morphism_map().to_vec()).unwrap())
        .collect();
    let report = verify_cat_cocone(&phi, &bigger, &legs, DEFAULT_BOUND);
    assert_eq!(report.witness["error"], "NotUniversal");
    assert_eq!(report.witness["unhit_object"], "stray");
}

#[test]
fn loop_coequalizer_cocone_check_reports_the_bound() {
    let phi = fixtures::loop_coequalizer();
    let k = Arc::new(fixtures::one());
    let legs: Vec<FinFunctor> = phi.fibres().iter().map(|f| FinFunctor::constant(f, &k, ObjId(0))).collect();
    let r = verify_cat_cocone(&phi, &k, &legs, 50);
    assert_eq!(r.status, Status::ResourceExceeded);
    assert!(r.witness["trace"].is_array());
}

#[test]
fn comparison_on_span_gluing_is_a_cofinal_quotient() {
    let phi = fixtures::span_gluing();
    let r = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let groth = groth_co(&phi).unwrap();
    let q = comparison_q(&groth, &r).unwrap();
    // the composite across the gluing point is generated, not hit
    let hit: std::collections::HashSet<MorId> = groth.total.morphisms().map(|m| q.mor(m)).collect();
    assert_eq!(hit.len(), r.colimit.morphism_count() - 1);
    let objects: std::collections::HashSet<ObjId> = groth.total.objects().map(|o| q.obj(o)).collect();
    assert_eq!(objects.len(), 3);
    assert!(certify_cofinal_quotient(&q).is_pass());
}

#[test]
fn truncated_comparison_is_not_final() {
    let phi = fixtures::span_gluing();
    let r = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let groth = groth_co(&phi).unwrap();
    let q = comparison_q(&groth, &r).unwrap();
    let s = phi.shape().object("s").unwrap();
    let truncated = q.after(groth.injection(s)).unwrap();
    let report = certify_cofinal_quotient(&truncated);
    assert!(!report.is_pass());
    let parts = report.witness["parts"].as_array().unwrap();
    assert_eq!(parts[0]["witness"]["reason"], "empty comma category");
}

fn object_count_matches_set_colimit(phi: &CatDiagram, r: &CatColimitResult) -> bool {
    let objects = colimit_set(&object_diagram(phi));
    let names: Vec<&str> = r.colimit.objects().map(|o| r.colimit.obj_name(o)).collect();
    objects.apex.elements().iter().map(String::as_str).collect::<Vec<_>>() == names
}

#[test]
fn random_diagrams_have_universal_colimits() {
    let mut g = rng(17);
    let mut terminated = 0;
    for _ in 0..40 {
        let phi = random_cat_diagram(&mut g, Variance::Covariant);
        let Ok(r) = colimit_cat(&phi, 500) else { continue };
        terminated += 1;
        assert!(object_count_matches_set_colimit(&phi, &r));
        assert!(universal_against(&r, &Arc::new(fixtures::two())));
        assert!(universal_against(&r, &Arc::new(fixtures::z2())));
    }
    assert!(terminated >= 20);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn terminating_colimits_verify(seed in any::<u64>()) {
        let phi = random_cat_diagram(&mut rng(seed), Variance::Covariant);
        if let Ok(r) = colimit_cat(&phi, 500) {
            prop_assert!(object_count_matches_set_colimit(&phi, &r));
            let report = verify_cat_cocone(&phi, &r.colimit, &r.cocone, 500);
            prop_assert!(report.is_pass(), "{}", report.to_json());
            let groth = groth_co(&phi).unwrap();
            let q = comparison_q(&groth, &r).unwrap();
            prop_assert!(certify_cofinal_quotient(&q).is_pass());
            // every morphism is a composite of cocone images
            for (m, w) in r.words.iter().enumerate() {
                let k = &r.colimit;
                let composite = w.iter().fold(k.identity(k.dom(MorId(m))), |acc, &(d, f)| k.comp(r.cocone[d.0].mor(f), acc));
                prop_assert_eq!(composite, MorId(m));
            }
        }
    }
}
