use std::collections::HashMap;
use std::sync::Arc;

use fibrelab::fincat::search::{enumerate_functors, find_isomorphism};
use fibrelab::fincat::{comma, product, CategoryBuilder, FinCategory, FinFunctor, NatTransformation, ObjId};
use fibrelab::fixtures;
use fibrelab::grothendieck::{
    factorization_defect, groth_co, groth_contra, guitart_check, guitart_check_on, guitart_hat, lax_cocone_extend,
    CatDiagram, GrothError, GrothendieckResult, LaxCocone, Variance,
};
use fibrelab::random::{random_cat_diagram, random_set_diagram, rng};

fn inversion_on_z3() -> CatDiagram {
    fixtures::inversion_action()
}

#[test]
fn constant_diagram_gives_a_product() {
    let d = Arc::new(fixtures::two());
    let e = Arc::new(fixtures::span());
    let g = groth_co(&CatDiagram::constant(&d, &e, Variance::Covariant)).unwrap();
    let p = Arc::new(product(&d, &e));
    assert_eq!(g.total.object_count(), 6);
    assert_eq!(g.total.morphism_count(), 15);
    assert!(find_isomorphism(&g.total, &p).is_some());
    let g = groth_contra(&CatDiagram::constant(&d, &e, Variance::Contravariant)).unwrap();
    assert!(find_isomorphism(&g.total, &p).is_some());
}

#[test]
fn over_the_point_the_total_is_the_fibre() {
    let one = Arc::new(fixtures::one());
    let e = Arc::new(fixtures::push3());
    let g = groth_co(&CatDiagram::constant(&one, &e, Variance::Covariant)).unwrap();
    assert!(find_isomorphism(&g.total, &e).is_some());
    assert!(g.injection(ObjId(0)).is_bijective());
}

#[test]
fn semidirect_product() {
    let phi = inversion_on_z3();
    let g = groth_co(&phi).unwrap();
    let t = &g.total;
    assert_eq!((t.object_count(), t.morphism_count()), (1, 6));
    // oracle: (v, g)(u, f) = (v + u, g + (-1)^v f) on Z2 x Z3
    let z2 = phi.shape();
    let z3 = phi.fibre(ObjId(0));
    let index = |c: &FinCategory, m| c.morphisms().position(|x| x == m).unwrap();
    let code2 = |m| index(z2, m);
    let code3 = |m| match z3.mor_name(m) {
        "e" => 0,
        "r" => 1,
        _ => 2,
    };
    let code = |m: fibrelab::MorId| {
        let (u, f) = g.morphism_pairs[m.0];
        (code2(u), code3(f))
    };
    let mut commutes = true;
    for p in t.morphisms() {
        for q in t.morphisms() {
            let (v, gg) = code(p);
            let (u, f) = code(q);
            let f2 = if v == 1 { (3 - f) % 3 } else { f };
            assert_eq!(code(t.comp(p, q)), ((v + u) % 2, (gg + f2) % 3));
            commutes &= t.comp(p, q) == t.comp(q, p);
        }
    }
    assert!(!commutes);
    let d3 = Arc::new(fixtures::d3());
    assert!(find_isomorphism(&g.total, &d3).is_some());
}

fn discrete_named(names: &[String]) -> FinCategory {
    let mut b = CategoryBuilder::new();
    for n in names {
        let o = b.object(n.clone());
        b.identity(format!("1{n}"), o);
    }
    b.build(|g, f| if g == f { Some(g) } else { None }).unwrap()
}

#[test]
fn hom_functor_gives_the_slice() {
    let c = Arc::new(fixtures::push3());
    let a = c.object("2").unwrap();
    let fibres: Vec<Arc<FinCategory>> = c
        .objects()
        .map(|o| {
            let names: Vec<String> = c.hom(o, a).iter().map(|&m| c.mor_name(m).to_string()).collect();
            Arc::new(discrete_named(&names))
        })
        .collect();
    let transitions = c
        .morphisms()
        .map(|u| {
            let (x, y) = (c.dom(u), c.cod(u));
            let (fy, fx) = (&fibres[y.0], &fibres[x.0]);
            let objects: Vec<ObjId> = fy
                .objects()
                .map(|h| {
                    let h = c.morphism(fy.obj_name(h)).unwrap();
                    fx.object(c.mor_name(c.comp(h, u))).unwrap()
                })
                .collect();
            let morphisms = fy.morphisms().map(|m| fx.identity(objects[fy.dom(m).0])).collect();
            FinFunctor::new(fy.clone(), fx.clone(), objects, morphisms).unwrap()
        })
        .collect();
    let phi = CatDiagram::new(c.clone(), fibres, transitions, Variance::Contravariant).unwrap();
    let g = groth_contra(&phi).unwrap();
    let one = Arc::new(fixtures::one());
    let slice = comma(&FinFunctor::identity(&c), &FinFunctor::constant(&one, &c, a)).unwrap();
    assert!(find_isomorphism(&g.total, &slice.category).is_some());
}

fn check_split_laws(g: &GrothendieckResult) {
    let b = g.diagram.shape();
    let t = &g.total;
    for u in b.morphisms() {
        for &v in b.outgoing(b.cod(u)) {
            let vu = b.comp(v, u);
            match g.diagram.variance() {
                Variance::Covariant => {
                    for x in g.diagram.fibre(b.dom(u)).objects() {
                        let ux = g.diagram.transition(u).obj(x);
                        assert_eq!(g.lift(vu, x), t.comp(g.lift(v, ux), g.lift(u, x)));
                    }
                }
                Variance::Contravariant => {
                    for y in g.diagram.fibre(b.cod(v)).objects() {
                        let vy = g.diagram.transition(v).obj(y);
                        assert_eq!(g.lift(vu, y), t.comp(g.lift(v, y), g.lift(u, vy)));
                    }
                }
            }
        }
        for o in b.objects() {
            for x in g.diagram.fibre(o).objects() {
                assert!(t.is_identity(g.lift(b.identity(o), x)));
            }
        }
    }
    assert_eq!(factorization_defect(g), None);
    for m in t.morphisms() {
        assert_eq!(g.projection.mor(m), g.morphism_pairs[m.0].0);
    }
}

// The dual construction is the opposite of the direct one, token for token.
fn check_duality(phi: &CatDiagram) {
    let co = groth_co(phi).unwrap();
    let contra = groth_contra(&phi.dual()).unwrap();
    let op = Arc::new(co.total.opposite());
    let objects = (0..op.object_count()).map(ObjId).collect();
    let morphisms = co
        .total
        .morphisms()
        .map(|m| {
            let (u, f) = co.morphism_pairs[m.0];
            contra.morphism(co.total.cod(m), co.total.dom(m), u, f).unwrap()
        })
        .collect();
    let k = FinFunctor::new(op, contra.total.clone(), objects, morphisms).unwrap();
    assert!(k.is_bijective());
    assert_eq!(phi.dual().dual(), *phi);
}

#[test]
fn split_laws_and_duality_on_fixtures() {
    let phi = inversion_on_z3();
    check_split_laws(&groth_co(&phi).unwrap());
    check_split_laws(&groth_contra(&phi.dual()).unwrap());
    check_duality(&phi);
}

#[test]
fn non_functorial_diagrams_are_rejected() {
    let z2 = Arc::new(fixtures::z2());
    let z3 = Arc::new(fixtures::z3());
    let r = z2.morphism("r").unwrap();
    let e = z2.identity(ObjId(0));
    // a rotation of Z3 does not square to the identity
    let rot = enumerate_functors(&z3, &z3, 10)
        .into_iter()
        .find(|f| !f.is_bijective() || (f != &FinFunctor::identity(&z3) && f.after(f).unwrap() != FinFunctor::identity(&z3)))
        .unwrap();
    let mut transitions = vec![FinFunctor::identity(&z3); 2];
    transitions[r.0] = rot;
    let res = CatDiagram::new(z2.clone(), vec![z3.clone()], transitions, Variance::Covariant);
    assert!(matches!(res, Err(GrothError::NonFunctorialDiagram { .. })));
    // the identity must go to the identity functor
    let d2 = Arc::new(fixtures::discrete(2));
    let swap = FinFunctor::new(d2.clone(), d2.clone(), vec![ObjId(1), ObjId(0)], vec![fibrelab::MorId(1), fibrelab::MorId(0)])
        .unwrap();
    let mut transitions = vec![swap.clone(); 2];
    let res = CatDiagram::new(z2.clone(), vec![d2.clone()], transitions.clone(), Variance::Covariant);
    assert!(matches!(res, Err(GrothError::NonFunctorialDiagram { .. })));
    transitions[e.0] = FinFunctor::identity(&d2);
    assert!(CatDiagram::new(z2, vec![d2], transitions, Variance::Covariant).is_ok());
}

#[test]
fn guitart_round_trip_on_the_semidirect_product() {
    let phi = inversion_on_z3();
    let g = groth_co(&phi).unwrap();
    let mut r = rng(7);
    for _ in 0..10 {
        let t = random_set_diagram(&mut r, &g.total, 3);
        let hat = guitart_hat(&g, &t).unwrap();
        let (_, back) = guitart_check(&hat).unwrap();
        assert_eq!(back.sets(), t.sets());
        assert_eq!(guitart_check_on(&g, &hat).unwrap(), t.reshape(&g.total).unwrap());
        let again = guitart_hat(&g, &back.reshape(&g.total).unwrap()).unwrap();
        assert_eq!(again, hat);
    }
}

#[test]
fn lax_cocones() {
    // canonical cocone extends to the identity
    let phi = inversion_on_z3();
    let g = groth_co(&phi).unwrap();
    let canonical = LaxCocone::canonical(&g);
    let t = lax_cocone_extend(&g, &canonical).unwrap();
    assert_eq!(t, FinFunctor::identity(&g.total));

    // a cocone into D3: rotations, and the reflection "021" as phi^r
    let d3 = Arc::new(fixtures::d3());
    let z3 = phi.fibre(ObjId(0)).clone();
    let rot: HashMap<&str, &str> = [("e", "012"), ("r", "120"), ("r2", "201")].into_iter().collect();
    let sigma = FinFunctor::new(
        z3.clone(),
        d3.clone(),
        vec![ObjId(0)],
        z3.morphisms().map(|m| d3.morphism(rot[z3.mor_name(m)]).unwrap()).collect(),
    )
    .unwrap();
    let z2 = phi.shape().clone();
    let phis = z2
        .morphisms()
        .map(|u| {
            let to = sigma.after(phi.transition(u)).unwrap();
            let c = if z2.is_identity(u) { d3.morphism("012").unwrap() } else { d3.morphism("021").unwrap() };
            NatTransformation::new(sigma.clone(), to, vec![c]).unwrap()
        })
        .collect();
    let cocone = LaxCocone {
        diagram: phi.clone(),
        vertex: d3.clone(),
        legs: vec![sigma.clone()],
        phi: phis,
    };
    let t = lax_cocone_extend(&g, &cocone).unwrap();
    assert!(t.is_bijective());
    for a in z2.objects() {
        assert_eq!(t.after(g.injection(a)).unwrap(), sigma);
    }

    // product case: partial functors into TWO x TWO
    let two = Arc::new(fixtures::two());
    let g = groth_co(&CatDiagram::constant(&two, &two, Variance::Covariant)).unwrap();
    let p = Arc::new(product(&two, &two));
    let canonical = LaxCocone::canonical(&g);
    let iso = find_isomorphism(&g.total, &p).unwrap();
    let legs: Vec<FinFunctor> = canonical.legs.iter().map(|j| iso.after(j).unwrap()).collect();
    let phis = canonical
        .phi
        .iter()
        .map(|n| {
            NatTransformation::new(
                iso.after(n.from_functor()).unwrap(),
                iso.after(n.to_functor()).unwrap(),
                n.components().iter().map(|&c| iso.mor(c)).collect(),
            )
            .unwrap()
        })
        .collect();
    let cocone = LaxCocone {
        diagram: g.diagram.clone(),
        vertex: p.clone(),
        legs,
        phi: phis,
    };
    assert_eq!(lax_cocone_extend(&g, &cocone).unwrap(), iso);

    // breaking phi at the identity is caught
    let mut broken = LaxCocone::canonical(&g);
    let b = g.diagram.shape();
    let u = b.morphism("a").unwrap();
    let id0 = b.identity(ObjId(0));
    broken.phi[id0.0] = broken.phi[u.0].clone();
    assert!(lax_cocone_extend(&g, &broken).is_err());
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn random_diagrams_satisfy_split_laws_and_duality(seed in any::<u64>()) {
            let mut r = rng(seed);
            let phi = random_cat_diagram(&mut r, Variance::Covariant);
            let g = groth_co(&phi).unwrap();
            let expected: usize = phi.fibres().iter().map(|f| f.object_count()).sum();
            prop_assert_eq!(g.total.object_count(), expected);
            check_split_laws(&g);
            check_duality(&phi);
            let psi = random_cat_diagram(&mut r, Variance::Contravariant);
            check_split_laws(&groth_contra(&psi).unwrap());
        }

        #[test]
        fn guitart_round_trips(seed in any::<u64>()) {
            let mut r = rng(seed);
            let phi = random_cat_diagram(&mut r, Variance::Covariant);
            let g = groth_co(&phi).unwrap();
            let t = random_set_diagram(&mut r, &g.total, 3);
            let hat = guitart_hat(&g, &t).unwrap();
            prop_assert_eq!(guitart_check_on(&g, &hat).unwrap(), t.clone());
            let back = guitart_hat(&g, &t).unwrap();
            prop_assert_eq!(back, hat);
            prop_assert_eq!(lax_cocone_extend(&g, &LaxCocone::canonical(&g)).unwrap(), FinFunctor::identity(&g.total));
        }
    }
}
