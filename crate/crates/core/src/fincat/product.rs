use std::sync::Arc;

use super::category::{CategoryBuilder, FinCategory, MorId, ObjId};
use super::functor::FinFunctor;
use super::tokens::pair_token;

/// `C x D`. Object `(c, d)` has id `c * |ob D| + d`; morphism `(f, g)` has id
/// `f * |mor D| + g`.
pub fn product(c: &FinCategory, d: &FinCategory) -> FinCategory {
    let (nd, md) = (d.object_count(), d.morphism_count());
    let mut b = CategoryBuilder::new();
    for x in c.objects() {
        for y in d.objects() {
            b.object(pair_token(c.obj_name(x), d.obj_name(y)));
        }
    }
    for f in c.morphisms() {
        for g in d.morphisms() {
            b.morphism(
                pair_token(c.mor_name(f), d.mor_name(g)),
                ObjId(c.dom(f).0 * nd + d.dom(g).0),
                ObjId(c.cod(f).0 * nd + d.cod(g).0),
            );
        }
    }
    for x in c.objects() {
        for y in d.objects() {
            b.set_identity(
                ObjId(x.0 * nd + y.0),
                MorId(c.identity(x).0 * md + d.identity(y).0),
            );
        }
    }
    b.build(|p, q| {
        let (f2, g2) = (MorId(p.0 / md), MorId(p.0 % md));
        let (f1, g1) = (MorId(q.0 / md), MorId(q.0 % md));
        Some(MorId(c.comp(f2, f1).0 * md + d.comp(g2, g1).0))
    })
    .expect("product of valid categories is valid")
}

/// The two projections out of `prod = product(c, d)`.
pub fn product_projections(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    prod: &Arc<FinCategory>,
) -> (FinFunctor, FinFunctor) {
    let (nd, md) = (d.object_count(), d.morphism_count());
    let p1 = FinFunctor::from_parts_unchecked(
        prod.clone(),
        c.clone(),
        prod.objects().map(|o| ObjId(o.0 / nd)).collect(),
        prod.morphisms().map(|m| MorId(m.0 / md)).collect(),
    );
    let p2 = FinFunctor::from_parts_unchecked(
        prod.clone(),
        d.clone(),
        prod.objects().map(|o| ObjId(o.0 % nd)).collect(),
        prod.morphisms().map(|m| MorId(m.0 % md)).collect(),
    );
    (p1, p2)
}
