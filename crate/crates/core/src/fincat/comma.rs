use std::collections::HashMap;
use std::sync::Arc;

use super::category::{CategoryBuilder, FinCategory, MorId, ObjId};
use super::functor::{same_category, FinFunctor, FunctorError};
use super::nat::NatTransformation;
use super::tokens::disambiguate;

/// The comma category `F | G` with its two projections.
#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub category: Arc<FinCategory>,
    pub left: FinFunctor,
    pub right: FinFunctor,
    /// `(a, b, u: F a -> G b)` per object
    pub triples: Vec<(ObjId, ObjId, MorId)>,
    /// `(alpha, beta)` per morphism
    pub pairs: Vec<(MorId, MorId)>,
}

impl CommaCategory {
    pub fn find_object(&self, a: ObjId, b: ObjId, u: MorId) -> Option<ObjId> {
        self.triples
            .iter()
            .position(|&t| t == (a, b, u))
            .map(ObjId)
    }

    /// The transformation `F . left => G . right` with component `u` at
    /// `(a, b, u)`.
    pub fn canonical_transformation(&self, f: &FinFunctor, g: &FinFunctor) -> NatTransformation {
        let from = f.after(&self.left).expect("left projection lands in dom F");
        let to = g.after(&self.right).expect("right projection lands in dom G");
        NatTransformation::new(from, to, self.triples.iter().map(|t| t.2).collect())
            .expect("comma squares commute")
    }
}

/// Objects are triples `(a, b, u: F a -> G b)` enumerated a-major, then b,
/// then u; morphisms `(alpha, beta)` with `G beta . u = u' . F alpha`.
pub fn comma(f: &FinFunctor, g: &FinFunctor) -> Result<CommaCategory, FunctorError> {
    if !same_category(f.target(), g.target()) {
        return Err(FunctorError::ShapeMismatch("comma of functors with different targets".into()));
    }
    let (a_cat, b_cat, c) = (f.source().clone(), g.source().clone(), f.target().clone());
    let mut triples = Vec::new();
    let mut index: HashMap<(ObjId, ObjId, MorId), ObjId> = HashMap::new();
    let mut b = CategoryBuilder::new();
    for a in a_cat.objects() {
        for y in b_cat.objects() {
            for &u in c.hom(f.obj(a), g.obj(y)) {
                let o = b.object(format!(
                    "({},{},{})",
                    a_cat.obj_name(a),
                    b_cat.obj_name(y),
                    c.mor_name(u)
                ));
                index.insert((a, y, u), o);
                triples.push((a, y, u));
            }
        }
    }
    let mut pairs = Vec::new();
    let mut ends = Vec::new();
    let mut mindex: HashMap<(ObjId, ObjId, MorId, MorId), MorId> = HashMap::new();
    for (si, &(a, y, u)) in triples.iter().enumerate() {
        for &alpha in a_cat.outgoing(a) {
            for &beta in b_cat.outgoing(y) {
                let lhs = c.comp(g.mor(beta), u);
                let (a2, y2) = (a_cat.cod(alpha), b_cat.cod(beta));
                for &u2 in c.hom(f.obj(a2), g.obj(y2)) {
                    if c.comp(u2, f.mor(alpha)) == lhs {
                        let t = index[&(a2, y2, u2)];
                        pairs.push((alpha, beta));
                        ends.push((ObjId(si), t));
                        mindex.insert((ObjId(si), t, alpha, beta), MorId(pairs.len() - 1));
                    }
                }
            }
        }
    }
    let base: Vec<String> = pairs
        .iter()
        .map(|&(al, be)| format!("({},{})", a_cat.mor_name(al), b_cat.mor_name(be)))
        .collect();
    let names: Vec<String> = (0..b.object_count()).map(|i| {
        let (a, y, u) = triples[i];
        format!("({},{},{})", a_cat.obj_name(a), b_cat.obj_name(y), c.mor_name(u))
    }).collect();
    let srcs: Vec<String> = ends.iter().map(|e| names[e.0 .0].clone()).collect();
    let tgts: Vec<String> = ends.iter().map(|e| names[e.1 .0].clone()).collect();
    for (i, name) in disambiguate(base, &srcs, &tgts).into_iter().enumerate() {
        b.morphism(name, ends[i].0, ends[i].1);
    }
    for (i, &(a, y, _)) in triples.iter().enumerate() {
        let id = mindex[&(ObjId(i), ObjId(i), a_cat.identity(a), b_cat.identity(y))];
        b.set_identity(ObjId(i), id);
    }
    let category = b
        .build(|p, q| {
            let (s, _) = ends[q.0];
            let (_, t) = ends[p.0];
            let (al, be) = (a_cat.comp(pairs[p.0].0, pairs[q.0].0), b_cat.comp(pairs[p.0].1, pairs[q.0].1));
            mindex.get(&(s, t, al, be)).copied()
        })
        .expect("comma category is valid");
    let category = Arc::new(category);
    let left = FinFunctor::from_parts_unchecked(
        category.clone(),
        a_cat.clone(),
        triples.iter().map(|t| t.0).collect(),
        pairs.iter().map(|p| p.0).collect(),
    );
    let right = FinFunctor::from_parts_unchecked(
        category.clone(),
        b_cat.clone(),
        triples.iter().map(|t| t.1).collect(),
        pairs.iter().map(|p| p.1).collect(),
    );
    Ok(CommaCategory {
        category,
        left,
        right,
        triples,
        pairs,
    })
}
