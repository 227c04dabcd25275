use std::collections::VecDeque;
use std::sync::Arc;

use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

use fibrelab::catcolim::{colimit_cat, DEFAULT_BOUND};
use fibrelab::diagcat::BackwardFamily;
use fibrelab::fincat::{product, FinCategory, FinFunctor, ObjId};
use fibrelab::finset::{restrict, FinFunction, FinSet, SetDiagram, SetTransformation};
use fibrelab::fixtures;
use fibrelab::formulas::{
    check_cdf, check_cdf_concordance, check_fubini, check_general_cdf, check_general_limit_recomposition,
    check_limit_recomposition, check_tfcf, check_tfcf_reflection, check_twisted_limit, restriction_family,
};
use fibrelab::grothendieck::{groth_co, groth_contra, guitart_hat, CatDiagram, Variance};
use fibrelab::random::{random_cat_diagram, random_set_diagram, rng};
use fibrelab::{Status, VerificationReport};

fn arc(c: FinCategory) -> Arc<FinCategory> {
    Arc::new(c)
}

/// Connected components of the element graph.
fn components(x: &SetDiagram) -> usize {
    let shape = x.shape();
    let nodes: Vec<(ObjId, usize)> = shape
        .objects()
        .flat_map(|o| (0..x.set(o).len()).map(move |e| (o, e)))
        .collect();
    let pos = |n: (ObjId, usize)| nodes.iter().position(|&m| m == n).unwrap();
    let mut adj = vec![Vec::new(); nodes.len()];
    for m in shape.morphisms() {
        for e in 0..x.set(shape.dom(m)).len() {
            let (a, b) = (pos((shape.dom(m), e)), pos((shape.cod(m), x.apply(m, e))));
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; nodes.len()];
    let mut count = 0;
    for s in 0..nodes.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(n) = queue.pop_front() {
            for &m in &adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
    }
    count
}

/// Compatible families, by enumerating the whole product.
fn compatible(x: &SetDiagram) -> usize {
    let shape = x.shape();
    let sizes: Vec<usize> = shape.objects().map(|o| x.set(o).len()).collect();
    if sizes.iter().any(|&s| s == 0) {
        return 0;
    }
    let mut t = vec![0; sizes.len()];
    let mut count = 0;
    loop {
        if shape.morphisms().all(|m| x.apply(m, t[shape.dom(m).0]) == t[shape.cod(m).0]) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == t.len() {
                return count;
            }
            t[k] += 1;
            if t[k] < sizes[k] {
                break;
            }
            t[k] = 0;
            k += 1;
        }
    }
}

fn stat(r: &VerificationReport, key: &str) -> usize {
    r.stats[key].as_u64().unwrap() as usize
}

fn assert_sizes(r: &VerificationReport, expected: usize) {
    assert!(r.is_pass(), "{r:?}");
    assert_eq!(stat(r, "lhs"), expected);
    assert_eq!(stat(r, "rhs"), expected);
}

fn set(names: &[&str]) -> FinSet {
    FinSet::new(names.iter().copied()).unwrap()
}

fn push3_diagram(k: &Arc<FinCategory>) -> SetDiagram {
    // 0 -> 1 -> 2 with sizes 2, 1, 3
    let sets = vec![set(&["a", "b"]), set(&["c"]), set(&["d", "e", "f"])];
    let maps = k
        .morphisms()
        .map(|m| match (k.dom(m).0, k.cod(m).0) {
            (0, 0) => vec![0, 1],
            (1, 1) => vec![0],
            (2, 2) => vec![0, 1, 2],
            (0, 1) => vec![0, 0],
            (1, 2) => vec![1],
            (0, 2) => vec![1, 1],
            _ => unreachable!(),
        })
        .collect();
    SetDiagram::new(k.clone(), sets, maps).unwrap()
}

#[test]
fn cdf_on_the_span_gluing() {
    let phi = fixtures::span_gluing();
    let k = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let x = push3_diagram(&k.colimit);
    let r = check_cdf(&phi, &x, DEFAULT_BOUND, None);
    // PUSH3 has a terminal object, so the colimit is X(2)
    assert_sizes(&r, 3);
    assert_eq!(components(&x), 3);
    assert_eq!(r.witness["comparison"].as_array().unwrap().len(), 3);
}

#[test]
fn cdf_over_a_single_category_is_trivial() {
    let c = arc(fixtures::push3());
    let shape = arc(fixtures::one());
    let phi = CatDiagram::new(shape, vec![c.clone()], vec![FinFunctor::identity(&c)], Variance::Covariant).unwrap();
    let x = push3_diagram(&c);
    let r = check_cdf(&phi, &x, DEFAULT_BOUND, Some((&c, &[FinFunctor::identity(&c)])));
    assert_sizes(&r, 3);
}

#[test]
fn cdf_rejects_a_cocone_that_is_not_a_colimit() {
    let phi = fixtures::span_gluing();
    let one = arc(fixtures::one());
    let legs: Vec<FinFunctor> = phi
        .fibres()
        .iter()
        .map(|f| FinFunctor::constant(f, &one, ObjId(0)))
        .collect();
    let x = SetDiagram::constant(&one, &FinSet::range(2));
    let r = check_cdf(&phi, &x, DEFAULT_BOUND, Some((&one, &legs)));
    assert_eq!(r.status, Status::Fail);
    assert_eq!(r.witness["cocone"], "verify_cat_cocone");
}

#[test]
fn cdf_on_the_loop_exceeds_the_bound() {
    let phi = fixtures::loop_coequalizer();
    let one = arc(fixtures::one());
    let x = SetDiagram::constant(&one, &FinSet::range(1));
    let r = check_cdf(&phi, &x, 50, None);
    assert_eq!(r.status, Status::ResourceExceeded);
    assert_eq!(r.witness["error"], "BoundExceeded");
}

#[test]
fn cdf_on_random_instances() {
    let mut r = rng(41);
    let mut checked = 0;
    for _ in 0..60 {
        let phi = random_cat_diagram(&mut r, Variance::Covariant);
        let Ok(k) = colimit_cat(&phi, 2_000) else { continue };
        let x = random_set_diagram(&mut r, &k.colimit, 3);
        let rep = check_cdf(&phi, &x, 2_000, None);
        assert_sizes(&rep, components(&x));
        let rep = check_limit_recomposition(&phi, &x, 2_000);
        assert_sizes(&rep, compatible(&x));
        checked += 1;
        if checked == 20 {
            break;
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn limit_recomposition_on_the_span_gluing() {
    let phi = fixtures::span_gluing();
    let k = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let x = push3_diagram(&k.colimit);
    // a family is determined by its value at 0
    let r = check_limit_recomposition(&phi, &x, DEFAULT_BOUND);
    assert_sizes(&r, 2);
}

#[test]
fn concordance_on_random_instances() {
    let mut r = rng(43);
    let mut checked = 0;
    for _ in 0..60 {
        let phi = random_cat_diagram(&mut r, Variance::Covariant);
        let Ok(k) = colimit_cat(&phi, 2_000) else { continue };
        let x = random_set_diagram(&mut r, &k.colimit, 3);
        let rep = check_cdf_concordance(&phi, &x, 2_000);
        assert!(rep.is_pass(), "{rep:?}");
        assert_eq!(stat(&rep, "lhs"), components(&x));
        assert_eq!(stat(&rep, "parts"), 3);
        checked += 1;
        if checked == 20 {
            break;
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn concordance_on_the_span_gluing() {
    let phi = fixtures::span_gluing();
    let k = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let rep = check_cdf_concordance(&phi, &push3_diagram(&k.colimit), DEFAULT_BOUND);
    assert!(rep.is_pass(), "{rep:?}");
}

/// Orbits of a group action on one set, by Burnside's lemma.
fn burnside(x: &SetDiagram) -> usize {
    let g = x.shape();
    let fixed: usize = g
        .morphisms()
        .map(|m| (0..x.set(ObjId(0)).len()).filter(|&e| x.apply(m, e) == e).count())
        .sum();
    assert_eq!(fixed % g.morphism_count(), 0);
    fixed / g.morphism_count()
}

#[test]
fn tfcf_on_the_semidirect_product_counts_orbits() {
    let phi = fixtures::inversion_action();
    let groth = groth_co(&phi).unwrap();
    assert_eq!(groth.total.morphism_count(), 6);
    let mut r = rng(5);
    for _ in 0..20 {
        let t = random_set_diagram(&mut r, &groth.total, 6);
        let rep = check_tfcf(&groth, &t);
        assert_sizes(&rep, burnside(&t));
        let rep = check_tfcf_reflection(&groth, &t, DEFAULT_BOUND);
        assert_sizes(&rep, burnside(&t));
    }
}

#[test]
fn tfcf_on_random_instances() {
    let mut r = rng(47);
    let mut checked = 0;
    for _ in 0..60 {
        let phi = random_cat_diagram(&mut r, Variance::Covariant);
        let Ok(groth) = groth_co(&phi) else { continue };
        let t = random_set_diagram(&mut r, &groth.total, 3);
        let rep = check_tfcf(&groth, &t);
        assert_sizes(&rep, components(&t));
        let rep = check_tfcf_reflection(&groth, &t, 2_000);
        assert_sizes(&rep, components(&t));
        checked += 1;
        if checked == 20 {
            break;
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn tfcf_rejects_a_contravariant_total() {
    let phi = fixtures::span_gluing().dual();
    let groth = groth_contra(&phi).unwrap();
    let t = SetDiagram::constant(&groth.total, &FinSet::range(1));
    assert_eq!(check_tfcf(&groth, &t).status, Status::InvalidInput);
}

/// `T` on `D x E` moved onto the total category of the constant diagram.
fn product_to_total(d: &Arc<FinCategory>, e: &Arc<FinCategory>) -> (fibrelab::grothendieck::GrothendieckResult, FinFunctor) {
    let phi = CatDiagram::constant(d, e, Variance::Covariant);
    let groth = groth_co(&phi).unwrap();
    let de = arc(product(d, e));
    let (ne, me) = (e.object_count(), e.morphism_count());
    let objects = de.objects().map(|o| groth.object(ObjId(o.0 / ne), ObjId(o.0 % ne))).collect::<Vec<_>>();
    let morphisms = de
        .morphisms()
        .map(|m| {
            let (u, f) = (fibrelab::MorId(m.0 / me), fibrelab::MorId(m.0 % me));
            let src = objects[de.dom(m).0];
            let tgt = objects[de.cod(m).0];
            groth.morphism(src, tgt, u, f).unwrap()
        })
        .collect();
    let f = FinFunctor::new(de, groth.total.clone(), objects, morphisms).unwrap();
    (groth, f)
}

#[test]
fn constant_diagram_reduces_to_fubini() {
    let d = arc(fixtures::span());
    let e = arc(fixtures::two());
    let (groth, f) = product_to_total(&d, &e);
    assert!(f.is_bijective());
    let mut r = rng(7);
    for _ in 0..10 {
        let t = random_set_diagram(&mut r, &groth.total, 3);
        let tfcf = check_tfcf(&groth, &t);
        let fub = check_fubini(&d, &e, &restrict(&t, &f).unwrap());
        assert!(tfcf.is_pass() && fub.is_pass(), "{tfcf:?} {fub:?}");
        assert_eq!(stat(&fub, "joint"), stat(&tfcf, "lhs"));
        assert_eq!(stat(&fub, "rows_first"), stat(&tfcf, "rhs"));
    }
}

#[test]
fn fubini_on_pair_squared() {
    let p = arc(fixtures::pair());
    let pp = arc(product(&p, &p));
    let mut r = rng(9);
    for _ in 0..20 {
        let t = random_set_diagram(&mut r, &pp, 3);
        let rep = check_fubini(&p, &p, &t);
        assert!(rep.is_pass(), "{rep:?}");
        let n = components(&t);
        assert_eq!(
            (stat(&rep, "joint"), stat(&rep, "rows_first"), stat(&rep, "columns_first")),
            (n, n, n)
        );
    }
}

#[test]
fn fubini_rejects_a_diagram_on_another_category() {
    let p = arc(fixtures::pair());
    let t = SetDiagram::constant(&p, &FinSet::range(1));
    assert_eq!(check_fubini(&p, &p, &t).status, Status::InvalidInput);
}

#[test]
fn twisted_limit_on_the_dual_span() {
    let phi = fixtures::span_gluing().dual();
    assert_eq!(phi.variance(), Variance::Contravariant);
    let groth = groth_contra(&phi).unwrap();
    let mut r = rng(11);
    for _ in 0..10 {
        let t = random_set_diagram(&mut r, &groth.total, 2);
        let rep = check_twisted_limit(&groth, &t);
        assert_sizes(&rep, compatible(&t));
    }
}

#[test]
fn twisted_limit_on_random_instances() {
    let mut r = rng(53);
    let mut checked = 0;
    for _ in 0..60 {
        let phi = random_cat_diagram(&mut r, Variance::Contravariant);
        let Ok(groth) = groth_contra(&phi) else { continue };
        let t = random_set_diagram(&mut r, &groth.total, 2);
        let rep = check_twisted_limit(&groth, &t);
        assert_sizes(&rep, compatible(&t));
        checked += 1;
        if checked == 20 {
            break;
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn general_cdf_on_random_families() {
    let mut r = rng(59);
    let mut checked = 0;
    for _ in 0..60 {
        let phi = random_cat_diagram(&mut r, Variance::Covariant);
        let Ok(groth) = groth_co(&phi) else { continue };
        let t = random_set_diagram(&mut r, &groth.total, 3);
        let Ok(family) = guitart_hat(&groth, &t) else { continue };
        let rep = check_general_cdf(&family, 2_000);
        if rep.status == Status::ResourceExceeded {
            continue;
        }
        // by the twisted formula both sides are colim T
        assert_sizes(&rep, components(&t));
        checked += 1;
        if checked == 20 {
            break;
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn general_cdf_on_restriction_families() {
    let phi = fixtures::span_gluing();
    let k = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let x = push3_diagram(&k.colimit);
    let family = restriction_family(&phi, &k.cocone, &x).unwrap();
    let rep = check_general_cdf(&family, DEFAULT_BOUND);
    assert_sizes(&rep, 3);
    assert_eq!(stat(&rep, "k_objects"), 3);
}

fn random_backward(r: &mut ChaCha8Rng) -> Option<(BackwardFamily, SetDiagram)> {
    let phi = random_cat_diagram(r, Variance::Contravariant);
    let cov = CatDiagram::new(
        arc(phi.shape().opposite()),
        phi.fibres().to_vec(),
        phi.transitions().to_vec(),
        Variance::Covariant,
    )
    .unwrap();
    let k = colimit_cat(&cov, 2_000).ok()?;
    let x = random_set_diagram(r, &k.colimit, 2);
    let d = phi.shape();
    let diagrams: Vec<SetDiagram> = d.objects().map(|o| restrict(&x, k.leg(o)).unwrap()).collect();
    let cells = d
        .morphisms()
        .map(|u| {
            let src = restrict(&diagrams[d.dom(u).0], phi.transition(u)).unwrap();
            let tgt = diagrams[d.cod(u).0].clone();
            SetTransformation::new(src.clone(), tgt, src.sets().iter().map(FinFunction::identity).collect()).unwrap()
        })
        .collect();
    Some((BackwardFamily::new(d.clone(), diagrams, phi.transitions().to_vec(), cells).unwrap(), x))
}

#[test]
fn general_limit_recomposition_on_random_families() {
    let mut r = rng(61);
    let mut checked = 0;
    for _ in 0..60 {
        let Some((family, x)) = random_backward(&mut r) else { continue };
        let rep = check_general_limit_recomposition(&family, 2_000);
        assert_sizes(&rep, compatible(&x));
        checked += 1;
        if checked == 20 {
            break;
        }
    }
    assert_eq!(checked, 20);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn comparison_is_a_bijection_whenever_the_colimit_exists(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = random_cat_diagram(&mut r, Variance::Covariant);
        if let Ok(k) = colimit_cat(&phi, 2_000) {
            let x = random_set_diagram(&mut r, &k.colimit, 3);
            let rep = check_cdf(&phi, &x, 2_000, Some((&k.colimit, &k.cocone)));
            prop_assert!(rep.is_pass());
            let table = rep.witness["comparison"].as_array().unwrap();
            prop_assert_eq!(table.len(), components(&x));
        }
    }

    #[test]
    fn fubini_orders_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = fibrelab::random::random_shape(&mut r);
        let e = fibrelab::random::random_shape(&mut r);
        let de = arc(product(&d, &e));
        let t = random_set_diagram(&mut r, &de, 2);
        let rep = check_fubini(&d, &e, &t);
        prop_assert!(rep.is_pass());
        prop_assert_eq!(stat(&rep, "rows_first"), stat(&rep, "columns_first"));
    }
}
