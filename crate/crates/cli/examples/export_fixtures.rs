//! Writes the fixture corpus: `cargo run -p fibrelab-cli --example export_fixtures -- fixtures`

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use fibrelab::catcolim::{colimit_cat, DEFAULT_BOUND};
use fibrelab::fibrations::{bifibration_check, canonical_cleavage, lift_limit, Direction};
use fibrelab::fincat::search::enumerate_functors;
use fibrelab::fincat::{FinCategory, FinFunctor, ObjId};
use fibrelab::finset::{FinSet, SetDiagram};
use fibrelab::fixtures;
use fibrelab::formulas::restriction_family;
use fibrelab::grothendieck::groth_co;
use fibrelab::random::{random_bifibred_diagram, rng};
use fibrelab_cli::schema::{CatDiagramJson, CategoryJson, FamilyJson, FunctorJson, SetDiagramJson};

fn write<T: Serialize>(dir: &Path, name: &str, value: &T) {
    let text = serde_json::to_string_pretty(value).unwrap() + "\n";
    fs::write(dir.join(name), text).unwrap();
}

fn case(dir: &Path, name: &str, theorem: &str, argv: &[&str], expect: &str) {
    write(
        dir,
        &format!("{name}.case.json"),
        &json!({"name": name, "theorem": theorem, "argv": argv, "expect": expect}),
    );
}

fn set(names: &[&str]) -> FinSet {
    FinSet::new(names.iter().copied()).unwrap()
}

/// `0 -> 1 -> 2` with sizes 2, 1, 3.
fn chain_sets(k: &Arc<FinCategory>) -> SetDiagram {
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

/// `l <- s -> r` with sizes 2, 3, 2.
fn span_sets(s: &Arc<FinCategory>) -> SetDiagram {
    let sets = vec![set(&["l0", "l1"]), set(&["s0", "s1", "s2"]), set(&["r0", "r1"])];
    let maps = s
        .morphisms()
        .map(|m| match s.mor_name(m) {
            "idl" | "idr" => vec![0, 1],
            "ids" => vec![0, 1, 2],
            "f" => vec![0, 0, 1],
            _ => vec![0, 1, 1],
        })
        .collect();
    SetDiagram::new(s.clone(), sets, maps).unwrap()
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    fs::create_dir_all(&dir).unwrap();

    let categories = [
        ("one", fixtures::one()),
        ("two", fixtures::two()),
        ("span-shape", fixtures::span()),
        ("pair", fixtures::pair()),
        ("push3", fixtures::push3()),
        ("z2", fixtures::z2()),
        ("z3", fixtures::z3()),
        ("d3", fixtures::d3()),
        ("chain3", fixtures::chain(3)),
    ];
    for (name, c) in &categories {
        write(&dir, &format!("{name}.json"), &CategoryJson::from_category(c));
    }

    let span = fixtures::span_gluing();
    write(&dir, "span.json", &CatDiagramJson::from_diagram(&span));
    write(&dir, "loop-coeq.json", &CatDiagramJson::from_diagram(&fixtures::loop_coequalizer()));
    write(&dir, "inversion.json", &CatDiagramJson::from_diagram(&fixtures::inversion_action()));

    let k = colimit_cat(&span, DEFAULT_BOUND).unwrap();
    let push3 = Arc::new(fixtures::push3());
    write(&dir, "chain-sets.json", &SetDiagramJson::from_diagram(&chain_sets(&push3)));
    let span_shape = span.shape().clone();
    write(&dir, "span-sets.json", &SetDiagramJson::from_diagram(&span_sets(&span_shape)));

    let one = Arc::new(fixtures::one());
    let to_one = FinFunctor::constant(&span_shape, &one, ObjId(0));
    write(&dir, "span-to-one.json", &FunctorJson::from_functor(&to_one));

    let legs: Vec<FinFunctor> = span.shape().objects().map(|d| k.leg(d).clone()).collect();
    let family = restriction_family(&span, &legs, &chain_sets(&k.colimit)).unwrap();
    write(&dir, "span-family.json", &FamilyJson::from_forward(&family));

    let groth = groth_co(&span).unwrap();
    write(&dir, "span-projection.json", &FunctorJson::from_functor(&groth.projection));

    // a bifibration together with a diagram in its total category whose limit lifts
    let mut r = rng(7);
    let (p, f) = loop {
        let phi = random_bifibred_diagram(&mut r);
        let g = groth_co(&phi).unwrap();
        let p = g.projection.clone();
        let (Ok(cl), Ok(co)) = (
            canonical_cleavage(&p, Direction::Fibration),
            canonical_cleavage(&p, Direction::Cofibration),
        ) else {
            continue;
        };
        let Ok(w) = bifibration_check(&co, &cl) else { continue };
        if g.total.object_count() < 3 {
            continue;
        }
        let shape = Arc::new(fixtures::span());
        let found = enumerate_functors(&shape, &g.total, 200)
            .into_iter()
            .filter(|f| f.object_map().iter().collect::<std::collections::HashSet<_>>().len() == 3)
            .find(|f| lift_limit(&w, f).map(|l| l.report.is_pass()).unwrap_or(false));
        if let Some(f) = found {
            break (p, f);
        }
    };
    write(&dir, "bifibred-projection.json", &FunctorJson::from_functor(&p));
    write(&dir, "bifibred-span.json", &FunctorJson::from_functor(&f));

    // pairs of diagrams in CHAIN3 for strictification
    let chain3 = Arc::new(fixtures::chain(3));
    let two = Arc::new(fixtures::two());
    let xs = enumerate_functors(&two, &chain3, 100);
    write(&dir, "strict-x.json", &FunctorJson::from_functor(&xs[1]));
    write(&dir, "strict-y.json", &FunctorJson::from_functor(&xs[xs.len() - 1]));
    let ys = enumerate_functors(&Arc::new(fixtures::span()), &chain3, 100);
    write(&dir, "strict-span.json", &FunctorJson::from_functor(&ys[ys.len() / 2]));

    fs::write(dir.join("broken-category.json"), "{\"objects\": [\"a\"], \"morphisms\": []}\n").unwrap();

    let c = |name, theorem, argv: &[&str], expect| case(&dir, name, theorem, argv, expect);
    c("validate-span", "validation", &["validate", "span.json"], "pass");
    c("validate-broken", "validation", &["validate", "broken-category.json"], "invalid_input");
    c("opposite-d3", "opposite", &["opposite", "d3.json"], "pass");
    c("product-two-pair", "product", &["product", "two.json", "pair.json"], "pass");
    c("colimit-span-sets", "colimits of sets", &["colimit-set", "span-sets.json"], "pass");
    c("limit-span-sets", "colimits of sets", &["limit-set", "span-sets.json"], "pass");
    c("lan-to-point", "Kan extensions", &["kan", "--along", "span-to-one.json", "--x", "span-sets.json"], "pass");
    c("ran-to-point", "Kan extensions", &["kan", "--dual", "--along", "span-to-one.json", "--x", "span-sets.json"], "pass");
    c("colimit-cat-span", "colimits of categories", &["colimit-cat", "--phi", "span.json"], "pass");
    c("colimit-cat-inversion", "colimits of categories", &["colimit-cat", "--phi", "inversion.json"], "pass");
    c("colimit-cat-loop", "colimits of categories", &["colimit-cat", "--phi", "loop-coeq.json", "--bound", "100"], "resource_exceeded");
    c("grothendieck-span", "Grothendieck construction", &["grothendieck", "--phi", "span.json"], "pass");
    c("grothendieck-inversion-dual", "Grothendieck construction", &["grothendieck", "--dual", "--phi", "inversion.json"], "pass");
    c("guitart-span", "Guitart correspondence", &["guitart", "--phi", "span.json", "--seed", "1", "--cases", "5"], "pass");
    c("guitart-inversion", "Guitart correspondence", &["guitart", "--phi", "inversion.json", "--seed", "2", "--cases", "5"], "pass");
    c("cofibration-span", "fibrations", &["check-cofibration", "span-projection.json"], "pass");
    c("bifibration", "fibrations", &["bifibration", "bifibred-projection.json"], "pass");
    c("lift-limit", "lifting limits", &["lift-limit", "--p", "bifibred-projection.json", "--diagram", "bifibred-span.json"], "pass");
    c("free-cofibration", "free cofibration", &["free-cofibration", "span-to-one.json"], "pass");
    c("free-cofibration-span", "free cofibration", &["free-cofibration", "span-projection.json"], "pass");
    c("strictify-two", "strictification", &["strictify", "--x", "strict-x.json", "--y", "strict-y.json"], "pass");
    c("strictify-span", "strictification", &["strictify", "--x", "strict-span.json", "--y", "strict-x.json"], "pass");
    c("comparison-q-span", "cofinal comparison", &["comparison-q", "--phi", "span.json", "--x", "chain-sets.json"], "pass");
    c("comparison-q-inversion", "cofinal comparison", &["comparison-q", "--phi", "inversion.json", "--seed", "3"], "pass");
    c("cdf-span", "colimit decomposition", &["check-cdf", "--phi", "span.json", "--x", "chain-sets.json"], "pass");
    c("cdf-inversion", "colimit decomposition", &["check-cdf", "--phi", "inversion.json", "--seed", "4"], "pass");
    c("cdf-loop", "colimit decomposition", &["check-cdf", "--phi", "loop-coeq.json", "--bound", "100"], "resource_exceeded");
    c("limit-recomposition-span", "colimit decomposition", &["check-cdf", "--dual", "--phi", "span.json", "--x", "chain-sets.json"], "pass");
    c("tfcf-span", "twisted Fubini", &["check-tfcf", "--phi", "span.json", "--seed", "5"], "pass");
    c("tfcf-inversion", "twisted Fubini", &["check-tfcf", "--phi", "inversion.json", "--seed", "6"], "pass");
    c("twisted-limit-span", "twisted Fubini", &["check-tfcf", "--dual", "--phi", "span.json", "--seed", "7"], "pass");
    c("fubini-two-pair", "Fubini", &["check-fubini", "--d", "two.json", "--e", "pair.json", "--seed", "8"], "pass");
    c("fubini-dual", "Fubini", &["check-fubini", "--dual", "--d", "two.json", "--e", "pair.json"], "invalid_input");
    c("general-cdf-span", "general colimit decomposition", &["check-general-cdf", "--family", "span-family.json"], "pass");
}
