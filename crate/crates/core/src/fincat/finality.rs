use std::sync::Arc;

use serde_json::json;

use super::comma::comma;
use super::functor::FinFunctor;
use crate::fixtures;
use crate::report::VerificationReport;
use crate::unionfind::UnionFind;

/// Passes iff every comma category `k | Q` is non-empty and connected.
pub fn is_final(q: &FinFunctor) -> VerificationReport {
    let one = Arc::new(fixtures::one());
    let k_cat = q.target().clone();
    let mut largest = 0;
    for k in k_cat.objects() {
        let ck = FinFunctor::constant(&one, &k_cat, k);
        let cm = comma(&ck, q).expect("same target");
        let cat = &cm.category;
        largest = largest.max(cat.object_count());
        if cat.object_count() == 0 {
            return VerificationReport::fail(
                "is_final",
                json!({ "object": k_cat.obj_name(k), "components": [] , "reason": "empty comma category" }),
            );
        }
        let mut uf = UnionFind::new(cat.object_count());
        for m in cat.morphisms() {
            uf.union(cat.dom(m).0, cat.cod(m).0);
        }
        let (of, n) = uf.classes();
        if n > 1 {
            let mut comps = vec![Vec::new(); n];
            for o in cat.objects() {
                comps[of[o.0]].push(cat.obj_name(o).to_string());
            }
            return VerificationReport::fail(
                "is_final",
                json!({ "object": k_cat.obj_name(k), "components": comps, "reason": "disconnected comma category" }),
            );
        }
    }
    VerificationReport::pass("is_final")
        .with_stat("objects_checked", k_cat.object_count())
        .with_stat("largest_comma", largest)
}
