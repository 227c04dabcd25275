use std::sync::Arc;

use fibrelab::catcolim::{colimit_cat, DEFAULT_BOUND};
use fibrelab::diagcat::{
    certify_diag_colimit, certify_diag_limit, certify_reflection, colimit_in_diag, diag_colimit_mediator, diag_compose,
    dualize, embed_function, embed_morphism, embed_set, family_morphism, limit_in_diag, reflect, reflection_factor,
    strict_bijection, strict_object, strict_transpose, strictify, verify_2cell, BackwardFamily, DiagError,
    DiagMorphism, Variant,
};
use fibrelab::fincat::search::{enumerate_functors, enumerate_transformations};
use fibrelab::fincat::{nat_whisker_left, nat_whisker_right, FinCategory, FinFunctor, MorId, NatTransformation, ObjId};
use fibrelab::finset::{
    colimit_set, enumerate_set_transformations, restrict, FinFunction, FinSet, SetDiagram, SetTransformation,
};
use fibrelab::fixtures;
use fibrelab::grothendieck::{groth_co, guitart_check, guitart_hat, DiagFamily};
use fibrelab::kan::lan;
use fibrelab::random::{random_cat_diagram, random_set_diagram, random_shape, rng};
use fibrelab::Status;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn arc(c: FinCategory) -> Arc<FinCategory> {
    Arc::new(c)
}

fn set(names: &[&str]) -> FinSet {
    FinSet::new(names.iter().copied()).unwrap()
}

/// A set diagram on TWO: `x0 -a-> x1`.
fn two_diagram(x0: &[&str], x1: &[&str], a: &[usize]) -> SetDiagram {
    let two = arc(fixtures::two());
    let ids = |n: usize| (0..n).collect::<Vec<_>>();
    SetDiagram::new(two, vec![set(x0), set(x1)], vec![ids(x0.len()), ids(x1.len()), a.to_vec()]).unwrap()
}

fn transformation(x: &SetDiagram, y: &SetDiagram, tables: &[&[usize]]) -> SetTransformation {
    let comps = x
        .shape()
        .objects()
        .map(|o| FinFunction::new(x.set(o).clone(), y.set(o).clone(), tables[o.0].to_vec()).unwrap())
        .collect();
    SetTransformation::new(x.clone(), y.clone(), comps).unwrap()
}

/// A random forward morphism out of `x`, if any exists.
fn random_forward(r: &mut ChaCha8Rng, x: &SetDiagram, y: &SetDiagram) -> Option<DiagMorphism<SetDiagram>> {
    let functors = enumerate_functors(x.shape(), y.shape(), 200);
    let f = functors.choose(r)?.clone();
    let cells = enumerate_set_transformations(x, &restrict(y, &f).unwrap());
    let phi = cells.choose(r)?.clone();
    Some(DiagMorphism::new(Variant::Forward, x.clone(), y.clone(), f, phi).unwrap())
}

fn random_backward(r: &mut ChaCha8Rng, x: &SetDiagram, y: &SetDiagram) -> Option<DiagMorphism<SetDiagram>> {
    let functors = enumerate_functors(y.shape(), x.shape(), 200);
    let f = functors.choose(r)?.clone();
    let cells = enumerate_set_transformations(&restrict(x, &f).unwrap(), y);
    let phi = cells.choose(r)?.clone();
    Some(DiagMorphism::new(Variant::Backward, x.clone(), y.clone(), f, phi).unwrap())
}

#[test]
fn identities_are_neutral() {
    let x = two_diagram(&["p"], &["q", "r"], &[1]);
    let y = two_diagram(&["s", "t"], &["u"], &[0, 0]);
    let f = FinFunctor::identity(x.shape());
    let phi = transformation(&x, &y, &[&[1], &[0, 0]]);
    let m = DiagMorphism::new(Variant::Forward, x.clone(), y.clone(), f.clone(), phi).unwrap();
    assert_eq!(diag_compose(&m, &DiagMorphism::identity(Variant::Forward, &x)).unwrap(), m);
    assert_eq!(diag_compose(&DiagMorphism::identity(Variant::Forward, &y), &m).unwrap(), m);

    let back = DiagMorphism::new(Variant::Backward, y.clone(), x.clone(), f, transformation(&y, &x, &[&[0, 0], &[1]]))
        .unwrap();
    assert_eq!(diag_compose(&back, &DiagMorphism::identity(Variant::Backward, &y)).unwrap(), back);
    assert_eq!(diag_compose(&DiagMorphism::identity(Variant::Backward, &x), &back).unwrap(), back);
}

#[test]
fn forward_composite_is_tabulated_pointwise() {
    // ONE -> TWO at 1, then TWO -> ONE
    let one = arc(fixtures::one());
    let two = arc(fixtures::two());
    let x = SetDiagram::constant(&one, &set(&["x", "y"]));
    let y = two_diagram(&["p", "q"], &["r", "s", "t"], &[0, 2]);
    let z = SetDiagram::constant(&one, &set(&["z0", "z1"]));
    let f = FinFunctor::constant(&one, &two, ObjId(1));
    let g = FinFunctor::constant(&two, &one, ObjId(0));
    let m1 = DiagMorphism::new(
        Variant::Forward,
        x.clone(),
        y.clone(),
        f.clone(),
        transformation(&x, &restrict(&y, &f).unwrap(), &[&[2, 0]]),
    )
    .unwrap();
    // psi must be natural on TWO: psi_1 . a = psi_0
    let zg = restrict(&z, &g).unwrap();
    let m2 = DiagMorphism::new(Variant::Forward, y, z, g, transformation(&m1.target, &zg, &[&[0, 1], &[0, 0, 1]]))
        .unwrap();
    let c = diag_compose(&m2, &m1).unwrap();
    assert_eq!(c.functor.object_map(), &[ObjId(0)]);
    // (psi F . phi)_* = psi_1 . phi_*
    assert_eq!(c.phi.component(ObjId(0)).mapping(), &[1, 0]);
}

#[test]
fn composition_rejects_mismatches() {
    let x = two_diagram(&["p"], &["q"], &[0]);
    let y = two_diagram(&["p", "q"], &["r"], &[0, 0]);
    let fwd = DiagMorphism::identity(Variant::Forward, &x);
    let bwd = DiagMorphism::identity(Variant::Backward, &x);
    assert_eq!(diag_compose(&fwd, &bwd), Err(DiagError::VariantMismatch));
    let other = DiagMorphism::identity(Variant::Forward, &y);
    assert!(matches!(diag_compose(&other, &fwd), Err(DiagError::EndpointMismatch(_))));
}

#[test]
fn two_cell_mutation() {
    // F, F': ONE -> TWO at 0 and 1, alpha = a
    let one = arc(fixtures::one());
    let two = arc(fixtures::two());
    let x = SetDiagram::constant(&one, &set(&["x"]));
    let y = two_diagram(&["p", "q"], &["r", "s"], &[0, 1]);
    let f0 = FinFunctor::constant(&one, &two, ObjId(0));
    let f1 = FinFunctor::constant(&one, &two, ObjId(1));
    let alpha = NatTransformation::new(f0.clone(), f1.clone(), vec![MorId(2)]).unwrap();
    let m = DiagMorphism::new(
        Variant::Forward,
        x.clone(),
        y.clone(),
        f0.clone(),
        transformation(&x, &restrict(&y, &f0).unwrap(), &[&[0]]),
    )
    .unwrap();
    let good = DiagMorphism::new(
        Variant::Forward,
        x.clone(),
        y.clone(),
        f1.clone(),
        transformation(&x, &restrict(&y, &f1).unwrap(), &[&[0]]),
    )
    .unwrap();
    let bad = DiagMorphism::new(
        Variant::Forward,
        x.clone(),
        y.clone(),
        f1.clone(),
        transformation(&x, &restrict(&y, &f1).unwrap(), &[&[1]]),
    )
    .unwrap();
    assert!(verify_2cell(&NatTransformation::identity(&f0), &m, &m).is_pass());
    assert!(verify_2cell(&alpha, &m, &good).is_pass());
    let r = verify_2cell(&alpha, &m, &bad);
    assert_eq!(r.status, Status::Fail);
    assert_eq!(r.witness["object"], "*");
    // wrong endpoints
    assert_eq!(verify_2cell(&alpha, &good, &m).status, Status::InvalidInput);
}

/// Morphisms and 2-cells between functors into a finite ambient category.
fn functor_morphisms(
    variant: Variant,
    x: &FinFunctor,
    y: &FinFunctor,
) -> Vec<DiagMorphism<FinFunctor>> {
    let mut out = Vec::new();
    let (from, to) = match variant {
        Variant::Forward => (x.source(), y.source()),
        Variant::Backward => (y.source(), x.source()),
    };
    for f in enumerate_functors(from, to, 100) {
        let (s, t) = match variant {
            Variant::Forward => (x.clone(), y.after(&f).unwrap()),
            Variant::Backward => (x.after(&f).unwrap(), y.clone()),
        };
        for phi in enumerate_transformations(&s, &t) {
            out.push(DiagMorphism::new(variant, x.clone(), y.clone(), f.clone(), phi).unwrap());
        }
    }
    out
}

/// Every 2-cell `alpha: F => F'` between any two morphisms `X -> Y`, paired
/// with the morphisms it relates.
fn two_cells(
    variant: Variant,
    x: &FinFunctor,
    y: &FinFunctor,
) -> Vec<(NatTransformation, DiagMorphism<FinFunctor>, DiagMorphism<FinFunctor>)> {
    let ms = functor_morphisms(variant, x, y);
    let mut out = Vec::new();
    for m in &ms {
        for m2 in &ms {
            for alpha in enumerate_transformations(&m.functor, &m2.functor) {
                if verify_2cell(&alpha, m, m2).is_pass() {
                    out.push((alpha, m.clone(), m2.clone()));
                }
            }
        }
    }
    out
}

#[test]
fn two_cell_equation_matches_brute_force() {
    let c = arc(fixtures::chain(3));
    let two = arc(fixtures::two());
    let one = arc(fixtures::one());
    let x = FinFunctor::constant(&one, &c, ObjId(0));
    let y = enumerate_functors(&two, &c, 100)
        .into_iter()
        .find(|f| f.obj(ObjId(0)) == ObjId(1) && f.obj(ObjId(1)) == ObjId(2))
        .unwrap();
    for variant in [Variant::Forward, Variant::Backward] {
        let (s, t) = match variant {
            Variant::Forward => (&x, &y),
            Variant::Backward => (&y, &x),
        };
        let ms = functor_morphisms(variant, s, t);
        for m in &ms {
            for m2 in &ms {
                for alpha in enumerate_transformations(&m.functor, &m2.functor) {
                    // recompute the equation componentwise
                    let holds = m.functor.source().objects().all(|i| match variant {
                        Variant::Forward => {
                            c.comp(t.mor(alpha.component(i)), m.phi.component(i)) == m2.phi.component(i)
                        }
                        Variant::Backward => {
                            c.comp(m2.phi.component(i), s.mor(alpha.component(i))) == m.phi.component(i)
                        }
                    });
                    assert_eq!(verify_2cell(&alpha, m, m2).is_pass(), holds);
                }
            }
        }
    }
}

#[test]
fn whiskered_two_cells() {
    let c = arc(fixtures::chain(3));
    let one = arc(fixtures::one());
    let two = arc(fixtures::two());
    let w = FinFunctor::constant(&one, &c, ObjId(0));
    let x = FinFunctor::constant(&one, &c, ObjId(0));
    let y = enumerate_functors(&two, &c, 100)
        .into_iter()
        .find(|f| f.obj(ObjId(0)) == ObjId(1) && f.obj(ObjId(1)) == ObjId(2))
        .unwrap();
    let z = FinFunctor::constant(&one, &c, ObjId(2));
    let cells = two_cells(Variant::Forward, &x, &y);
    assert!(cells.iter().any(|(a, _, _)| !a.is_identity()));
    let after = functor_morphisms(Variant::Forward, &y, &z);
    let before = functor_morphisms(Variant::Forward, &w, &x);
    for (alpha, m, m2) in &cells {
        for g in &after {
            // G alpha: g m => g m2
            let ga = nat_whisker_left(&g.functor, alpha).unwrap();
            let r = verify_2cell(&ga, &diag_compose(g, m).unwrap(), &diag_compose(g, m2).unwrap());
            assert!(r.is_pass(), "{r:?}");
        }
        for h in &before {
            // alpha H: m h => m2 h
            let ah = nat_whisker_right(alpha, &h.functor).unwrap();
            let r = verify_2cell(&ah, &diag_compose(m, h).unwrap(), &diag_compose(m2, h).unwrap());
            assert!(r.is_pass(), "{r:?}");
        }
    }
}

#[test]
fn reflection_of_a_point_is_a_bijection() {
    let x = embed_set(&set(&["x"]));
    let r = reflect(&x);
    assert!(r.unit.phi.component(ObjId(0)).is_bijective());
    assert!(r.unit.functor.is_bijective());
}

#[test]
fn reflection_of_a_pair_is_the_coequalizer() {
    let pair = arc(fixtures::pair());
    // f: a->c, b->d; g: a->d, b->d; so c ~ d and e stays apart
    let x = SetDiagram::new(
        pair,
        vec![set(&["a", "b"]), set(&["c", "d", "e"])],
        vec![vec![0, 1], vec![0, 1, 2], vec![0, 1], vec![1, 1]],
    )
    .unwrap();
    let r = reflect(&x);
    assert_eq!(r.cocone.apex.len(), 2);
    let leg1 = r.unit.phi.component(ObjId(1));
    assert_eq!(leg1.apply(0), leg1.apply(1));
    assert_ne!(leg1.apply(0), leg1.apply(2));
    let leg0 = r.unit.phi.component(ObjId(0));
    assert_eq!(leg0.apply(0), leg1.apply(0));
    assert_eq!(leg0.apply(1), leg1.apply(1));
    for n in 0..=3 {
        let y = FinSet::range(n);
        let report = certify_reflection(&x, &y);
        assert!(report.is_pass(), "{report:?}");
        // morphisms into E(y) are functions on the two classes
        assert_eq!(report.stats["morphisms"], serde_json::json!(n * n));
    }
}

#[test]
fn reflection_factor_recovers_the_morphism() {
    let mut r = rng(11);
    for _ in 0..20 {
        let shape = random_shape(&mut r);
        let x = random_set_diagram(&mut r, &shape, 3);
        let y = embed_set(&FinSet::range(r.gen_range(1..=3)));
        let refl = reflect(&x);
        if let Some(m) = random_forward(&mut r, &x, &y) {
            let h = reflection_factor(&refl, &m).unwrap();
            assert_eq!(diag_compose(&embed_function(Variant::Forward, &h), &refl.unit).unwrap(), m);
        }
    }
}

#[test]
fn reflection_is_certified_on_random_diagrams() {
    let mut r = rng(5);
    for _ in 0..15 {
        let shape = random_shape(&mut r);
        let x = random_set_diagram(&mut r, &shape, 2);
        let report = certify_reflection(&x, &FinSet::range(2));
        assert!(report.is_pass(), "{report:?}");
    }
}

#[test]
fn strict_over_one_is_the_shape() {
    let one = arc(fixtures::one());
    for shape in [fixtures::two(), fixtures::span(), fixtures::z2(), fixtures::push3()] {
        let shape = arc(shape);
        let x = FinFunctor::constant(&shape, &one, ObjId(0));
        let s = strict_object(&x);
        assert!(s.right.is_bijective());
        assert_eq!(s.category.morphism_count(), shape.morphism_count());
        let m = DiagMorphism::identity(Variant::Forward, &x);
        let st = strictify(&m).unwrap();
        assert!(st.functor.is_bijective());
    }
}

/// `|X | X|` counted directly: objects `(a, i, u: a -> X i)` and morphisms
/// `(g, h)` with `X h . u = u' . g`.
fn comma_sizes(x: &FinFunctor) -> (usize, usize) {
    let c = x.target();
    let i_cat = x.source();
    let mut objects = Vec::new();
    for a in c.objects() {
        for i in i_cat.objects() {
            for &u in c.hom(a, x.obj(i)) {
                objects.push((a, i, u));
            }
        }
    }
    let mut morphisms = 0;
    for &(a, i, u) in &objects {
        for &(b, j, v) in &objects {
            for &g in c.hom(a, b) {
                for &h in i_cat.hom(i, j) {
                    if c.comp(x.mor(h), u) == c.comp(v, g) {
                        morphisms += 1;
                    }
                }
            }
        }
    }
    (objects.len(), morphisms)
}

#[test]
fn strict_sizes_match_direct_enumeration() {
    let two = arc(fixtures::two());
    let one = arc(fixtures::one());
    let at0 = FinFunctor::constant(&one, &two, ObjId(0));
    let at1 = FinFunctor::constant(&one, &two, ObjId(1));
    let s0 = strict_object(&at0);
    assert_eq!((s0.category.object_count(), s0.category.morphism_count()), (1, 1));
    let s1 = strict_object(&at1);
    assert_eq!((s1.category.object_count(), s1.category.morphism_count()), (2, 3));
    let mut r = rng(3);
    for _ in 0..20 {
        let shape = random_shape(&mut r);
        let ambient = random_shape(&mut r);
        let fs = enumerate_functors(&shape, &ambient, 50);
        if let Some(x) = fs.choose(&mut r) {
            let s = strict_object(x);
            assert_eq!((s.category.object_count(), s.category.morphism_count()), comma_sizes(x));
        }
    }
}

fn small_diagrams(ambient: &Arc<FinCategory>) -> Vec<FinFunctor> {
    let shapes = [fixtures::one(), fixtures::two(), fixtures::discrete(2), fixtures::span()];
    let mut out = Vec::new();
    for s in shapes {
        let s = arc(s);
        let fs = enumerate_functors(&s, ambient, 100);
        out.extend(fs.into_iter().step_by(3).take(3));
    }
    out
}

#[test]
fn strict_bijection_round_trips() {
    for ambient in [fixtures::two(), fixtures::chain(3), fixtures::z2(), fixtures::span()] {
        let ambient = arc(ambient);
        let ds = small_diagrams(&ambient);
        for x in &ds {
            for y in &ds {
                let r = strict_bijection(x, y, 10_000);
                assert!(r.is_pass(), "{r:?}");
            }
        }
    }
}

#[test]
fn strict_is_functorial() {
    let ambient = arc(fixtures::chain(3));
    let ds = small_diagrams(&ambient);
    let mut r = rng(8);
    for _ in 0..30 {
        let x = ds.choose(&mut r).unwrap();
        let y = ds.choose(&mut r).unwrap();
        let z = ds.choose(&mut r).unwrap();
        let m1s = functor_morphisms(Variant::Forward, x, y);
        let m2s = functor_morphisms(Variant::Forward, y, z);
        let (Some(m1), Some(m2)) = (m1s.choose(&mut r), m2s.choose(&mut r)) else { continue };
        let s1 = strictify(m1).unwrap();
        let s2 = strictify(m2).unwrap();
        let s21 = strictify(&diag_compose(m2, m1).unwrap()).unwrap();
        assert_eq!(s21.functor, s2.functor.after(&s1.functor).unwrap());
        // the transpose is the strictified morphism after the unit i |-> (id, i)
        let g = strict_transpose(m1, &s1.target).unwrap();
        let unit = strict_transpose(&DiagMorphism::identity(Variant::Forward, x), &s1.source).unwrap();
        assert_eq!(g, s1.functor.after(&unit).unwrap());
    }
    let id = DiagMorphism::identity(Variant::Forward, &ds[1]);
    let s = strictify(&id).unwrap();
    assert_eq!(s.functor, FinFunctor::identity(&s.source.category));
}

#[test]
fn dualize_is_an_involution() {
    let ambient = arc(fixtures::chain(3));
    let ds = small_diagrams(&ambient);
    let mut r = rng(4);
    for variant in [Variant::Forward, Variant::Backward] {
        for _ in 0..20 {
            let x = ds.choose(&mut r).unwrap();
            let y = ds.choose(&mut r).unwrap();
            for m in functor_morphisms(variant, x, y).iter().take(5) {
                let d = dualize(m);
                assert_eq!(d.variant, variant.flip());
                assert_eq!(&dualize(&d), m);
            }
        }
    }
}

#[test]
fn dualize_reverses_composition() {
    let ambient = arc(fixtures::chain(3));
    let ds = small_diagrams(&ambient);
    let mut r = rng(6);
    let mut checked = 0;
    for _ in 0..60 {
        let x = ds.choose(&mut r).unwrap();
        let y = ds.choose(&mut r).unwrap();
        let z = ds.choose(&mut r).unwrap();
        let m1s = functor_morphisms(Variant::Backward, x, y);
        let m2s = functor_morphisms(Variant::Backward, y, z);
        let (Some(m1), Some(m2)) = (m1s.choose(&mut r), m2s.choose(&mut r)) else { continue };
        let composite = diag_compose(m2, m1).unwrap();
        assert_eq!(dualize(&composite), diag_compose(&dualize(m1), &dualize(m2)).unwrap());
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn embeddings_correspond_under_duality() {
    for c in [fixtures::chain(3), fixtures::z3(), fixtures::span()] {
        let c = arc(c);
        let cop = arc(c.opposite());
        for f in c.morphisms() {
            let lower = embed_morphism(Variant::Backward, &c, f);
            assert_eq!(dualize(&lower), embed_morphism(Variant::Forward, &cop, f));
            let upper = embed_morphism(Variant::Forward, &c, f);
            assert_eq!(dualize(&upper), embed_morphism(Variant::Backward, &cop, f));
        }
    }
}

#[test]
fn dual_of_a_backward_two_shaped_morphism() {
    // X, Y: TWO -> chain(3), X = (0 < 1), Y = (1 < 2), F = id, phi_i: X i -> Y i
    let c = arc(fixtures::chain(3));
    let two = arc(fixtures::two());
    let pick = |a: usize, b: usize| {
        enumerate_functors(&two, &c, 100)
            .into_iter()
            .find(|f| f.obj(ObjId(0)) == ObjId(a) && f.obj(ObjId(1)) == ObjId(b))
            .unwrap()
    };
    let (x, y) = (pick(0, 1), pick(1, 2));
    let phi = enumerate_transformations(&x, &y).pop().unwrap();
    let m = DiagMorphism::new(Variant::Backward, x.clone(), y.clone(), FinFunctor::identity(&two), phi.clone())
        .unwrap();
    let d = dualize(&m);
    assert_eq!(d.variant, Variant::Forward);
    assert_eq!(d.source.object_map(), y.object_map());
    assert_eq!(d.target.object_map(), x.object_map());
    assert_eq!(d.phi.components(), phi.components());
    let cop = d.source.target();
    // the component at 0 reads 1 -> 0 in the opposite chain
    let k = d.phi.component(ObjId(0));
    assert_eq!((cop.dom(k), cop.cod(k)), (ObjId(1), ObjId(0)));
    assert_eq!(cop.mor_name(k), "0<1");
}

/// `TWO <- ONE -> TWO` carrying `p -> {q1, q2}`, `{s}` and `{t} -> {w}`,
/// with `s |-> q2` and `s |-> t`.
fn span_family() -> DiagFamily {
    let phi = fixtures::span_gluing();
    let shape = phi.shape().clone();
    let xl = two_diagram(&["p"], &["q1", "q2"], &[0]);
    let xs = SetDiagram::constant(phi.fibre(ObjId(1)), &set(&["s"]));
    let xr = two_diagram(&["t"], &["w"], &[0]);
    let diagrams = vec![xl.clone(), xs.clone(), xr.clone()];
    let cells = shape
        .morphisms()
        .map(|u| {
            let (a, b) = (shape.dom(u), shape.cod(u));
            let target = restrict(&diagrams[b.0], phi.transition(u)).unwrap();
            match shape.mor_name(u) {
                "f" => transformation(&xs, &target, &[&[1]]),
                "g" => transformation(&xs, &target, &[&[0]]),
                _ => SetTransformation::identity(&diagrams[a.0]),
            }
        })
        .collect();
    DiagFamily::new(shape, diagrams, phi.transitions().to_vec(), cells).unwrap()
}

#[test]
fn colimit_of_a_single_diagram() {
    let one = arc(fixtures::one());
    let mut r = rng(2);
    for _ in 0..10 {
        let shape = random_shape(&mut r);
        let x = random_set_diagram(&mut r, &shape, 3);
        let t = DiagFamily::new(
            one.clone(),
            vec![x.clone()],
            vec![FinFunctor::identity(&shape)],
            vec![SetTransformation::identity(&x)],
        )
        .unwrap();
        let c = colimit_in_diag(&t, DEFAULT_BOUND).unwrap();
        let inj = &c.injections[0];
        assert!(inj.functor.is_bijective());
        assert!(inj.phi.components().iter().all(FinFunction::is_bijective));
    }
}

#[test]
fn span_family_glues_to_push3() {
    let t = span_family();
    let c = colimit_in_diag(&t, DEFAULT_BOUND).unwrap();
    let k = c.k();
    assert_eq!((k.object_count(), k.morphism_count()), (3, 6));
    let sizes: Vec<usize> = k.objects().map(|o| c.x.set(o).len()).collect();
    assert_eq!(sizes, vec![1, 2, 2]);
    // the middle object is l.1 = r.0; b: middle -> end is a bijection
    let middle = c.shapes.leg(ObjId(0)).obj(ObjId(1));
    let b = k.hom(middle, c.shapes.leg(ObjId(2)).obj(ObjId(1)))[0];
    assert!(c.x.function(b).is_bijective());
    // q2 and t meet in the middle
    let inj_l = c.injections[0].phi.component(ObjId(1));
    let inj_r = c.injections[2].phi.component(ObjId(0));
    assert_eq!(inj_l.apply(1), inj_r.apply(0));
    assert_ne!(inj_l.apply(0), inj_r.apply(0));
}

#[test]
fn span_family_agrees_with_lan_along_q() {
    let t = span_family();
    let c = colimit_in_diag(&t, DEFAULT_BOUND).unwrap();
    let (groth, tt) = guitart_check(&t).unwrap();
    let q = fibrelab::catcolim::comparison_q(&groth, &c.shapes).unwrap();
    let l = lan(&q, &tt).unwrap().extension;
    for o in c.k().objects() {
        assert_eq!(l.set(o).len(), c.x.set(o).len());
    }
}

#[test]
fn span_family_is_certified_a_colimit() {
    let t = span_family();
    let c = colimit_in_diag(&t, DEFAULT_BOUND).unwrap();
    let one = arc(fixtures::one());
    for y in [
        SetDiagram::constant(&one, &FinSet::range(2)),
        two_diagram(&["u", "v"], &["w"], &[0, 0]),
        two_diagram(&["u"], &["v", "w"], &[1]),
    ] {
        let r = certify_diag_colimit(&t, &c, &y, 10_000);
        assert!(r.is_pass(), "{r:?}");
    }
}

#[test]
fn mediator_factors_cocones() {
    let t = span_family();
    let c = colimit_in_diag(&t, DEFAULT_BOUND).unwrap();
    let y = two_diagram(&["u", "v"], &["w", "z"], &[0, 1]);
    let mut r = rng(9);
    let mut found = 0;
    for h in enumerate_functors(c.k(), y.shape(), 100) {
        for beta in enumerate_set_transformations(&c.x, &restrict(&y, &h).unwrap()) {
            let m = DiagMorphism::new(Variant::Forward, c.x.clone(), y.clone(), h.clone(), beta).unwrap();
            let cocone: Vec<_> = c.injections.iter().map(|i| diag_compose(&m, i).unwrap()).collect();
            // cocone condition along every index morphism
            for u in t.shape().morphisms() {
                let tu = family_morphism(&t, u);
                assert_eq!(diag_compose(&cocone[t.shape().cod(u).0], &tu).unwrap(), cocone[t.shape().dom(u).0]);
            }
            if r.gen_bool(0.5) {
                assert_eq!(diag_colimit_mediator(&c, &cocone).unwrap(), m);
                found += 1;
            }
        }
    }
    assert!(found > 0);
}

#[test]
fn shapes_of_the_colimit_are_the_cat_colimit() {
    let t = span_family();
    let c = colimit_in_diag(&t, DEFAULT_BOUND).unwrap();
    let direct = colimit_cat(&t.cat_diagram(), DEFAULT_BOUND).unwrap();
    assert_eq!(c.k(), &direct.colimit);
    assert_eq!(c.shapes.cocone, direct.cocone);
}

#[test]
fn families_through_the_slice_recover_the_diagram() {
    let phi = fixtures::span_gluing();
    let k = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let mut r = rng(12);
    for _ in 0..10 {
        let x = random_set_diagram(&mut r, &k.colimit, 3);
        let diagrams: Vec<SetDiagram> = phi.shape().objects().map(|d| restrict(&x, k.leg(d)).unwrap()).collect();
        let cells = phi
            .shape()
            .morphisms()
            .map(|u| {
                let src = diagrams[phi.shape().dom(u).0].clone();
                let tgt = restrict(&diagrams[phi.shape().cod(u).0], phi.transition(u)).unwrap();
                SetTransformation::new(src.clone(), tgt, src.sets().iter().map(FinFunction::identity).collect())
                    .unwrap()
            })
            .collect();
        let t = DiagFamily::new(phi.shape().clone(), diagrams, phi.transitions().to_vec(), cells).unwrap();
        let c = colimit_in_diag(&t, DEFAULT_BOUND).unwrap();
        for ext in &c.extensions {
            assert!(ext.unit_or_counit.iter().all(FinFunction::is_bijective));
        }
        for inj in &c.injections {
            assert!(inj.phi.components().iter().all(FinFunction::is_bijective));
        }
        for o in c.k().objects() {
            assert_eq!(c.x.set(o).len(), x.set(o).len());
        }
        // the identity family into (K, x) is a cocone; its mediator is invertible
        let cocone: Vec<_> = phi
            .shape()
            .objects()
            .map(|d| {
                let leg = c.shapes.leg(d).clone();
                let src = t.diagram(d).clone();
                DiagMorphism::new(Variant::Forward, src.clone(), x.clone(), leg, SetTransformation::identity(&src))
                    .unwrap()
            })
            .collect();
        let m = diag_colimit_mediator(&c, &cocone).unwrap();
        assert!(m.functor.is_bijective());
        assert!(m.phi.components().iter().all(FinFunction::is_bijective));
    }
}

fn random_family(r: &mut ChaCha8Rng) -> Option<DiagFamily> {
    let phi = random_cat_diagram(r, fibrelab::grothendieck::Variance::Covariant);
    let groth = groth_co(&phi).ok()?;
    let t = random_set_diagram(r, &groth.total, 2);
    guitart_hat(&groth, &t).ok()
}

#[test]
fn random_families_are_certified_colimits() {
    let mut r = rng(21);
    let one = arc(fixtures::one());
    let mut certified = 0;
    for _ in 0..40 {
        let Some(t) = random_family(&mut r) else { continue };
        let Ok(c) = colimit_in_diag(&t, 2_000) else { continue };
        if c.k().morphism_count() > 8 || c.x.total_size() > 8 {
            continue;
        }
        let y = SetDiagram::constant(&one, &FinSet::range(2));
        let rep = certify_diag_colimit(&t, &c, &y, 10_000);
        assert!(rep.is_pass(), "{rep:?}");
        // X agrees with Lan_Q of the checked diagram
        let (groth, tt) = guitart_check(&t).unwrap();
        let q = fibrelab::catcolim::comparison_q(&groth, &c.shapes).unwrap();
        let l = lan(&q, &tt).unwrap().extension;
        for o in c.k().objects() {
            assert_eq!(l.set(o).len(), c.x.set(o).len());
        }
        certified += 1;
    }
    assert!(certified >= 10, "only {certified} instances");
}

/// The dual gluing over `l -> s <- r`: `X_l(1) -> {s}` and `X_r(0) -> {s}`.
fn backward_span_family() -> BackwardFamily {
    let phi = fixtures::span_gluing();
    let shape = arc(phi.shape().opposite());
    let xl = two_diagram(&["p"], &["q1", "q2"], &[1]);
    let xs = SetDiagram::constant(phi.fibre(ObjId(1)), &set(&["s1", "s2"]));
    let xr = two_diagram(&["t1", "t2"], &["w"], &[0, 0]);
    let diagrams = vec![xl.clone(), xs.clone(), xr.clone()];
    let cells = shape
        .morphisms()
        .map(|u| {
            let (a, _) = (shape.dom(u), shape.cod(u));
            let source = restrict(&diagrams[a.0], phi.transition(u)).unwrap();
            match shape.mor_name(u) {
                "f" => transformation(&source, &xs, &[&[0, 1]]),
                "g" => transformation(&source, &xs, &[&[1, 1]]),
                _ => SetTransformation::identity(&diagrams[a.0]),
            }
        })
        .collect();
    BackwardFamily::new(shape, diagrams, phi.transitions().to_vec(), cells).unwrap()
}

#[test]
fn backward_family_limit_is_certified() {
    let t = backward_span_family();
    let l = limit_in_diag(&t, DEFAULT_BOUND).unwrap();
    assert_eq!((l.k().object_count(), l.k().morphism_count()), (3, 6));
    let one = arc(fixtures::one());
    for y in [
        SetDiagram::constant(&one, &FinSet::range(1)),
        SetDiagram::constant(&one, &FinSet::range(2)),
        two_diagram(&["u"], &["v", "w"], &[0]),
    ] {
        let r = certify_diag_limit(&t, &l, &y, 10_000);
        assert!(r.is_pass(), "{r:?}");
    }
    // projections compose with the family
    for u in t.shape().morphisms() {
        let (a, b) = (t.shape().dom(u), t.shape().cod(u));
        assert_eq!(diag_compose(&t.morphism(u), &l.projections[a.0]).unwrap(), l.projections[b.0]);
    }
}

#[test]
fn backward_family_rejects_bad_cells() {
    let t = backward_span_family();
    let shape = t.shape().clone();
    let mut cells: Vec<SetTransformation> = shape.morphisms().map(|u| t.phi(u).clone()).collect();
    // a non-identity at an identity morphism
    let ids = shape.identity(ObjId(1));
    let xs = t.diagram(ObjId(1)).clone();
    cells[ids.0] = transformation(&xs, &xs, &[&[1, 0]]);
    let phi = fixtures::span_gluing();
    let bad = BackwardFamily::new(shape, t.diagrams().to_vec(), phi.transitions().to_vec(), cells);
    assert!(bad.is_err());
}

#[test]
fn random_backward_limits_are_certified() {
    let mut r = rng(31);
    let one = arc(fixtures::one());
    let mut certified = 0;
    for _ in 0..30 {
        let phi = random_cat_diagram(&mut r, fibrelab::grothendieck::Variance::Contravariant);
        // shapes as a covariant diagram on D^op
        let cov = fibrelab::grothendieck::CatDiagram::new(
            arc(phi.shape().opposite()),
            phi.fibres().to_vec(),
            phi.transitions().to_vec(),
            fibrelab::grothendieck::Variance::Covariant,
        )
        .unwrap();
        let Ok(k) = colimit_cat(&cov, 2_000) else { continue };
        if k.colimit.morphism_count() > 8 {
            continue;
        }
        let x = random_set_diagram(&mut r, &k.colimit, 2);
        let d = phi.shape();
        let diagrams: Vec<SetDiagram> = d.objects().map(|o| restrict(&x, k.leg(o)).unwrap()).collect();
        let cells = d
            .morphisms()
            .map(|u| {
                let src = restrict(&diagrams[d.dom(u).0], phi.transition(u)).unwrap();
                let tgt = diagrams[d.cod(u).0].clone();
                SetTransformation::new(src.clone(), tgt, src.sets().iter().map(FinFunction::identity).collect())
                    .unwrap()
            })
            .collect();
        let t = BackwardFamily::new(d.clone(), diagrams, phi.transitions().to_vec(), cells).unwrap();
        let l = limit_in_diag(&t, 2_000).unwrap();
        if l.x.total_size() > 10 {
            continue;
        }
        let y = SetDiagram::constant(&one, &FinSet::range(1));
        let rep = certify_diag_limit(&t, &l, &y, 10_000);
        assert!(rep.is_pass(), "{rep:?}");
        // a family restricted from x has limit x
        for o in l.k().objects() {
            assert_eq!(l.x.set(o).len(), x.set(o).len());
        }
        certified += 1;
    }
    assert!(certified >= 8, "only {certified} instances");
}

#[test]
fn glued_diagram_has_two_components() {
    let t = span_family();
    let c = colimit_in_diag(&t, DEFAULT_BOUND).unwrap();
    let whole = colimit_set(&c.x);
    // two components: {p, q1} and {q2, s, t, w}
    assert_eq!(whole.apex.len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shapes: Vec<_> = (0..4).map(|_| random_shape(&mut r)).collect();
        let ds: Vec<SetDiagram> = shapes.iter().map(|s| random_set_diagram(&mut r, s, 2)).collect();
        let fwd = (
            random_forward(&mut r, &ds[0], &ds[1]),
            random_forward(&mut r, &ds[1], &ds[2]),
            random_forward(&mut r, &ds[2], &ds[3]),
        );
        if let (Some(a), Some(b), Some(c)) = fwd {
            let left = diag_compose(&c, &diag_compose(&b, &a).unwrap()).unwrap();
            let right = diag_compose(&diag_compose(&c, &b).unwrap(), &a).unwrap();
            prop_assert_eq!(left, right);
        }
        let bwd = (
            random_backward(&mut r, &ds[0], &ds[1]),
            random_backward(&mut r, &ds[1], &ds[2]),
            random_backward(&mut r, &ds[2], &ds[3]),
        );
        if let (Some(a), Some(b), Some(c)) = bwd {
            let left = diag_compose(&c, &diag_compose(&b, &a).unwrap()).unwrap();
            let right = diag_compose(&diag_compose(&c, &b).unwrap(), &a).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn strict_bijection_on_random_endpoints(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ambient = random_shape(&mut r);
        let s1 = random_shape(&mut r);
        let s2 = random_shape(&mut r);
        let xs = enumerate_functors(&s1, &ambient, 20);
        let ys = enumerate_functors(&s2, &ambient, 20);
        if let (Some(x), Some(y)) = (xs.choose(&mut r), ys.choose(&mut r)) {
            let rep = strict_bijection(x, y, 10_000);
            prop_assert!(rep.is_pass(), "{:?}", rep);
        }
    }
}
