use std::sync::Arc;

use proptest::prelude::*;

use fibrelab::catcolim::{colimit_cat, DEFAULT_BOUND};
use fibrelab::fibrations::{canonical_cleavage, Direction};
use fibrelab::fixtures;
use fibrelab::formulas::restriction_family;
use fibrelab::grothendieck::{groth_co, Variance};
use fibrelab::random::{random_cat_diagram, random_functor, random_set_diagram, random_shape, rng};
use fibrelab_cli::schema::{
    CatDiagramJson, CategoryJson, CleavageJson, Family, FamilyJson, FunctorJson, SetDiagramJson,
};

fn reparse<T: serde::Serialize + serde::de::DeserializeOwned>(t: &T) -> T {
    serde_json::from_str(&serde_json::to_string(t).unwrap()).unwrap()
}

#[test]
fn fixture_categories_round_trip() {
    for c in [fixtures::one(), fixtures::span(), fixtures::push3(), fixtures::d3(), fixtures::chain(4)] {
        let doc = reparse(&CategoryJson::from_category(&c));
        assert_eq!(*doc.to_category().unwrap(), c);
    }
}

#[test]
fn format_tag_is_checked() {
    let mut doc = CategoryJson::from_category(&fixtures::two());
    doc.format = "other/2".into();
    assert!(doc.to_category().is_err());
    let bare = r#"{"objects": ["a"], "morphisms": [{"id": "1", "dom": "a", "cod": "a"}], "identities": {"a": "1"}}"#;
    let doc: CategoryJson = serde_json::from_str(bare).unwrap();
    assert_eq!(doc.to_category().unwrap().object_count(), 1);
}

#[test]
fn identity_maps_may_be_omitted() {
    let text = r#"{
        "shape": {"objects": ["0", "1"], "morphisms": [{"id": "i0", "dom": "0", "cod": "0"},
            {"id": "i1", "dom": "1", "cod": "1"}, {"id": "a", "dom": "0", "cod": "1"}],
            "identities": {"0": "i0", "1": "i1"}},
        "sets": {"0": ["x", "y"], "1": ["z"]},
        "maps": {"a": {"x": "z", "y": "z"}}
    }"#;
    let doc: SetDiagramJson = serde_json::from_str(text).unwrap();
    let x = doc.to_diagram().unwrap();
    assert_eq!(x.total_size(), 3);
}

#[test]
fn non_functorial_diagram_is_rejected() {
    let text = r#"{
        "shape": {"objects": ["0"], "morphisms": [{"id": "i", "dom": "0", "cod": "0"}],
            "identities": {"0": "i"}},
        "sets": {"0": ["x", "y"]},
        "maps": {"i": {"x": "y", "y": "x"}}
    }"#;
    let doc: SetDiagramJson = serde_json::from_str(text).unwrap();
    assert!(doc.to_diagram().is_err());
}

#[test]
fn cat_diagrams_round_trip() {
    for phi in [fixtures::span_gluing(), fixtures::inversion_action(), fixtures::loop_coequalizer()] {
        let doc = reparse(&CatDiagramJson::from_diagram(&phi));
        let back = doc.to_diagram().unwrap();
        assert_eq!(CatDiagramJson::from_diagram(&back), doc);
        assert_eq!(back.variance(), phi.variance());
        assert_eq!(back.fibres().len(), phi.fibres().len());
    }
    let mut r = rng(3);
    for _ in 0..10 {
        let phi = random_cat_diagram(&mut r, Variance::Contravariant);
        let doc = reparse(&CatDiagramJson::from_diagram(&phi));
        assert_eq!(CatDiagramJson::from_diagram(&doc.to_diagram().unwrap()), doc);
    }
}

#[test]
fn families_round_trip() {
    let phi = fixtures::span_gluing();
    let k = colimit_cat(&phi, DEFAULT_BOUND).unwrap();
    let legs: Vec<_> = phi.shape().objects().map(|d| k.leg(d).clone()).collect();
    let mut r = rng(4);
    for _ in 0..10 {
        let x = random_set_diagram(&mut r, &k.colimit, 3);
        let family = restriction_family(&phi, &legs, &x).unwrap();
        let doc = reparse(&FamilyJson::from_forward(&family));
        match doc.to_family().unwrap() {
            Family::Forward(back) => assert_eq!(FamilyJson::from_forward(&back), doc),
            Family::Backward(_) => panic!("variant changed"),
        }
    }
}

#[test]
fn cleavages_round_trip() {
    let groth = groth_co(&fixtures::span_gluing()).unwrap();
    let c = canonical_cleavage(&groth.projection, Direction::Cofibration).unwrap();
    let doc = reparse(&CleavageJson::from_cleavage(&c));
    let back = doc.to_cleavage().unwrap();
    assert_eq!(back.lifting, c.lifting);
    assert_eq!(CleavageJson::from_cleavage(&back), doc);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_documents_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = random_shape(&mut r);
        let doc = reparse(&CategoryJson::from_category(&shape));
        prop_assert_eq!(&*doc.to_category().unwrap(), &*shape);

        let x = random_set_diagram(&mut r, &shape, 3);
        let doc = reparse(&SetDiagramJson::from_diagram(&x));
        prop_assert_eq!(SetDiagramJson::from_diagram(&doc.to_diagram().unwrap()), doc);

        let target = Arc::new(fixtures::chain(3));
        if let Some(f) = random_functor(&mut r, &shape, &target, 200) {
            let doc = reparse(&FunctorJson::from_functor(&f));
            let back = doc.to_functor().unwrap();
            prop_assert_eq!(back.object_map(), f.object_map());
            prop_assert_eq!(back.morphism_map(), f.morphism_map());
        }
    }
}
