//! Colimits of covariant `Cat`-valued diagrams by bounded coset enumeration,
//! cocone verification and the comparison functor from the total category.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::fincat::{is_final, same_category, CategoryBuilder, FinCategory, FinFunctor, MorId, ObjId};
use crate::finset::{colimit_set, FinSet, SetDiagram};
use crate::grothendieck::{CatDiagram, GrothendieckResult, Variance};
use crate::report::VerificationReport;
use crate::unionfind::UnionFind;

pub const DEFAULT_BOUND: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CatColimError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("more than {bound} morphism classes")]
    BoundExceeded {
        bound: usize,
        /// `(states processed, live classes)` samples
        trace: Vec<(usize, usize)>,
    },
}

impl CatColimError {
    pub fn report(&self, check: &str) -> VerificationReport {
        match self {
            CatColimError::BoundExceeded { bound, trace } => VerificationReport::resource_exceeded(
                check,
                json!({"error": "BoundExceeded", "bound": bound, "trace": trace}),
            ),
            CatColimError::ShapeMismatch(s) => {
                VerificationReport::invalid_input(check, json!({"error": "ShapeMismatch", "reason": s}))
            }
        }
    }
}

/// A colimit `K` with its cocone `K_d: Phi d -> K`.
#[derive(Clone, Debug)]
pub struct CatColimitResult {
    pub diagram: CatDiagram,
    pub colimit: Arc<FinCategory>,
    pub cocone: Vec<FinFunctor>,
    /// Generator words of each morphism, as `(d, f)` pairs in application order.
    pub words: Vec<Vec<(ObjId, MorId)>>,
    pub stats: ColimitStats,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColimitStats {
    pub object_classes: usize,
    pub generator_classes: usize,
    pub relations: usize,
    pub states_defined: usize,
    pub coincidences: usize,
    pub morphism_classes: usize,
}

impl CatColimitResult {
    pub fn leg(&self, d: ObjId) -> &FinFunctor {
        &self.cocone[d.0]
    }
}

/// `d -> Ob(Phi d)` as a set diagram.
pub fn object_diagram(phi: &CatDiagram) -> SetDiagram {
    let shape = phi.shape();
    let sets = phi
        .fibres()
        .iter()
        .map(|f| FinSet::new(f.objects().map(|o| f.obj_name(o).to_string())).expect("object tokens are unique"))
        .collect();
    let maps = shape
        .morphisms()
        .map(|u| phi.transition(u).object_map().iter().map(|o| o.0).collect())
        .collect();
    SetDiagram::new(shape.clone(), sets, maps).expect("transitions are functors")
}

struct Generator {
    name: String,
    dom: usize,
    cod: usize,
}

/// Right action of generators on morphism classes, with coincidences
/// resolved through a union-find on states.
struct Enumeration {
    gens: Vec<Generator>,
    relations: Vec<(Vec<usize>, Vec<usize>)>,
    parent: Vec<usize>,
    cod: Vec<usize>,
    action: Vec<Vec<Option<usize>>>,
    alive: Vec<bool>,
    live: usize,
    coincidences: usize,
}

impl Enumeration {
    fn find(&mut self, mut s: usize) -> usize {
        while self.parent[s] != s {
            self.parent[s] = self.parent[self.parent[s]];
            s = self.parent[s];
        }
        s
    }

    fn new_state(&mut self, cod: usize) -> usize {
        let s = self.parent.len();
        self.parent.push(s);
        self.cod.push(cod);
        self.action.push(vec![None; self.gens.len()]);
        self.alive.push(true);
        self.live += 1;
        s
    }

    fn act(&mut self, s: usize, g: usize) -> Option<usize> {
        let t = self.action[s][g]?;
        Some(self.find(t))
    }

    fn merge(&mut self, a: usize, b: usize) {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, kill) = (a.min(b), a.max(b));
            self.parent[kill] = keep;
            self.alive[kill] = false;
            self.live -= 1;
            self.coincidences += 1;
            for g in 0..self.gens.len() {
                if let Some(t) = self.action[kill][g] {
                    match self.action[keep][g] {
                        Some(t2) => queue.push((t, t2)),
                        None => self.action[keep][g] = Some(t),
                    }
                }
            }
        }
    }

    /// Follows `word` from `s` as far as it is defined.
    fn trace(&mut self, s: usize, word: &[usize]) -> (usize, usize) {
        let mut cur = s;
        for (i, &g) in word.iter().enumerate() {
            match self.act(cur, g) {
                Some(t) => cur = t,
                None => return (cur, i),
            }
        }
        (cur, word.len())
    }

    /// Applies every relation at every live state until nothing changes.
    fn scan(&mut self) {
        loop {
            let mut changed = false;
            for r in 0..self.relations.len() {
                let (lhs, rhs) = self.relations[r].clone();
                let first = lhs.first().or(rhs.first()).copied().expect("sides differ");
                let at = self.gens[first].dom;
                for s in 0..self.parent.len() {
                    if !self.alive[s] || self.cod[s] != at {
                        continue;
                    }
                    let (l, li) = self.trace(s, &lhs);
                    let (r, ri) = self.trace(s, &rhs);
                    if li == lhs.len() && ri == rhs.len() {
                        if l != r {
                            self.merge(l, r);
                            changed = true;
                        }
                    } else if li == lhs.len() && ri + 1 == rhs.len() {
                        self.action[r][rhs[ri]] = Some(l);
                        changed = true;
                    } else if ri == rhs.len() && li + 1 == lhs.len() {
                        self.action[l][lhs[li]] = Some(r);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }
}

/// Colimit in `Cat` of a covariant diagram.
///
/// Objects are the set colimit of the object diagram. Morphisms are
/// enumerated as classes of composable words in the fibre morphisms, with
/// `f ~ (Phi u) f`, in-fibre composites and identities as relations. Fails
/// with `BoundExceeded` once more than `bound` classes are alive.
pub fn colimit_cat(phi: &CatDiagram, bound: usize) -> Result<CatColimitResult, CatColimError> {
    if phi.variance() != Variance::Covariant {
        return Err(CatColimError::ShapeMismatch("colimit_cat needs a covariant diagram".into()));
    }
    let shape = phi.shape();
    let objects = colimit_set(&object_diagram(phi));
    let obj_class = |d: ObjId, x: ObjId| objects.leg(d).apply(x.0);

    let mut offset = Vec::new();
    let mut total = 0;
    for d in shape.objects() {
        offset.push(total);
        total += phi.fibre(d).morphism_count();
    }
    let mut guf = UnionFind::new(total);
    for u in shape.morphisms() {
        let (d, e) = (shape.dom(u), shape.cod(u));
        let t = phi.transition(u);
        for f in phi.fibre(d).morphisms() {
            guf.union(offset[d.0] + f.0, offset[e.0] + t.mor(f).0);
        }
    }
    let (gclass, ng) = guf.classes();
    let mut is_id = vec![false; ng];
    let mut best: Vec<Option<String>> = vec![None; ng];
    let mut ends = vec![(0, 0); ng];
    for d in shape.objects() {
        let fib = phi.fibre(d);
        for f in fib.morphisms() {
            let c = gclass[offset[d.0] + f.0];
            is_id[c] |= fib.is_identity(f);
            ends[c] = (obj_class(d, fib.dom(f)), obj_class(d, fib.cod(f)));
            let token = format!("{}.{}", shape.obj_name(d), fib.mor_name(f));
            if best[c].as_ref().map_or(true, |b| token < *b) {
                best[c] = Some(token);
            }
        }
    }
    let mut order: Vec<usize> = (0..ng).filter(|&c| !is_id[c]).collect();
    order.sort_by(|&a, &b| best[a].cmp(&best[b]));
    let mut gen_of = vec![None; ng];
    for (i, &c) in order.iter().enumerate() {
        gen_of[c] = Some(i);
    }
    let gens: Vec<Generator> = order
        .iter()
        .map(|&c| Generator {
            name: best[c].clone().unwrap(),
            dom: ends[c].0,
            cod: ends[c].1,
        })
        .collect();
    let word_of = |d: ObjId, f: MorId| -> Vec<usize> { gen_of[gclass[offset[d.0] + f.0]].into_iter().collect() };

    let mut relations = BTreeSet::new();
    for d in shape.objects() {
        let fib = phi.fibre(d);
        for f in fib.morphisms() {
            for &g in fib.outgoing(fib.cod(f)) {
                let mut lhs = word_of(d, f);
                lhs.extend(word_of(d, g));
                let rhs = word_of(d, fib.comp(g, f));
                if lhs != rhs {
                    relations.insert((lhs, rhs));
                }
            }
        }
    }
    let n_obj = objects.apex.len();
    let mut en = Enumeration {
        gens,
        relations: relations.into_iter().collect(),
        parent: Vec::new(),
        cod: Vec::new(),
        action: Vec::new(),
        alive: Vec::new(),
        live: 0,
        coincidences: 0,
    };
    for o in 0..n_obj {
        en.new_state(o);
    }
    let mut dom: Vec<usize> = (0..n_obj).collect();
    let mut trace = Vec::new();
    let mut processed: usize = 0;
    let mut next = 0;
    en.scan();
    while next < en.parent.len() {
        if en.alive[next] {
            for g in 0..en.gens.len() {
                if en.gens[g].dom == en.cod[next] && en.action[next][g].is_none() {
                    let t = en.new_state(en.gens[g].cod);
                    dom.push(dom[next]);
                    en.action[next][g] = Some(t);
                }
            }
            en.scan();
            processed += 1;
            if processed.is_power_of_two() {
                trace.push((processed, en.live));
            }
            if en.live > bound {
                trace.push((processed, en.live));
                return Err(CatColimError::BoundExceeded { bound, trace });
            }
        }
        next += 1;
    }

    // shortlex-least words, identities first
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut words: Vec<Vec<usize>> = Vec::new();
    for o in 0..n_obj {
        let s = en.find(o);
        index.insert(s, states.len());
        states.push(s);
        words.push(Vec::new());
    }
    let mut head = 0;
    while head < states.len() {
        let s = states[head];
        for g in 0..en.gens.len() {
            if en.gens[g].dom != en.cod[s] {
                continue;
            }
            let t = en.act(s, g).expect("enumeration is complete");
            if !index.contains_key(&t) {
                index.insert(t, states.len());
                states.push(t);
                let mut w = words[head].clone();
                w.push(g);
                words.push(w);
            }
        }
        head += 1;
    }

    let mut builder = CategoryBuilder::new();
    for o in 0..n_obj {
        builder.object(objects.apex.name(o));
    }
    let id_names: Vec<String> = (0..n_obj)
        .map(|o| {
            (0..ng)
                .filter(|&c| is_id[c] && ends[c].0 == o)
                .filter_map(|c| best[c].clone())
                .min()
                .unwrap_or_else(|| format!("id.{}", objects.apex.name(o)))
        })
        .collect();
    for (i, &s) in states.iter().enumerate() {
        let d = dom[s];
        let name = if i < n_obj {
            id_names[i].clone()
        } else {
            words[i].iter().map(|&g| en.gens[g].name.as_str()).collect::<Vec<_>>().join(";")
        };
        let m = builder.morphism(name, ObjId(d), ObjId(en.cod[s]));
        if i < n_obj {
            builder.set_identity(ObjId(d), m);
        }
    }
    let mut table = HashMap::new();
    for (i, &s) in states.iter().enumerate() {
        for (j, w) in words.iter().enumerate() {
            if dom[states[j]] != en.cod[s] {
                continue;
            }
            let (t, k) = en.trace(s, w);
            debug_assert_eq!(k, w.len());
            table.insert((j, i), index[&t]);
        }
    }
    let k = builder
        .build(|g, f| table.get(&(g.0, f.0)).map(|&h| MorId(h)))
        .map_err(|e| CatColimError::ShapeMismatch(format!("enumeration produced an invalid category: {e}")))?;
    let k = Arc::new(k);

    let mut cocone = Vec::with_capacity(shape.object_count());
    for d in shape.objects() {
        let fib = phi.fibre(d);
        let on_objects = fib.objects().map(|x| ObjId(obj_class(d, x))).collect();
        let on_morphisms = fib
            .morphisms()
            .map(|f| {
                let start = en.find(obj_class(d, fib.dom(f)));
                let (t, _) = en.trace(start, &word_of(d, f));
                MorId(index[&t])
            })
            .collect();
        let leg = FinFunctor::new(fib.clone(), k.clone(), on_objects, on_morphisms)
            .map_err(|e| CatColimError::ShapeMismatch(format!("cocone leg is not a functor: {e}")))?;
        cocone.push(leg);
    }

    // generator words back to fibre morphisms through least members
    let mut member: Vec<Option<(ObjId, MorId)>> = vec![None; ng];
    for d in shape.objects() {
        for f in phi.fibre(d).morphisms() {
            let c = gclass[offset[d.0] + f.0];
            let token = format!("{}.{}", shape.obj_name(d), phi.fibre(d).mor_name(f));
            if best[c].as_deref() == Some(token.as_str()) && member[c].is_none() {
                member[c] = Some((d, f));
            }
        }
    }
    let words = words
        .iter()
        .map(|w| w.iter().map(|&g| member[order[g]].unwrap()).collect())
        .collect();
    let stats = ColimitStats {
        object_classes: n_obj,
        generator_classes: en.gens.len(),
        relations: en.relations.len(),
        states_defined: en.parent.len(),
        coincidences: en.coincidences,
        morphism_classes: k.morphism_count(),
    };
    Ok(CatColimitResult {
        diagram: phi.clone(),
        colimit: k,
        cocone,
        words,
        stats,
    })
}

/// The functor `colim Phi -> K` induced by a cocone, read off generator words.
pub fn mediator(result: &CatColimitResult, k: &Arc<FinCategory>, cocone: &[FinFunctor]) -> Result<FinFunctor, String> {
    let c = &result.colimit;
    let mut on_objects = vec![None; c.object_count()];
    for (d, leg) in result.cocone.iter().enumerate() {
        for x in leg.source().objects() {
            on_objects[leg.obj(x).0] = Some(cocone[d].obj(x));
        }
    }
    let on_objects: Vec<ObjId> = on_objects.into_iter().map(|o| o.expect("objects are images")).collect();
    let on_morphisms = c
        .morphisms()
        .map(|m| {
            result.words[m.0]
                .iter()
                .fold(k.identity(on_objects[c.dom(m).0]), |acc, &(d, f)| k.comp(cocone[d.0].mor(f), acc))
        })
        .collect();
    FinFunctor::new(c.clone(), k.clone(), on_objects, on_morphisms).map_err(|e| e.to_string())
}

/// Certifies a candidate cocone: naturality, then bijectivity of the
/// mediating functor out of the constructed colimit.
pub fn verify_cat_cocone(
    phi: &CatDiagram,
    k: &Arc<FinCategory>,
    cocone: &[FinFunctor],
    bound: usize,
) -> VerificationReport {
    const CHECK: &str = "verify_cat_cocone";
    let shape = phi.shape();
    if cocone.len() != shape.object_count() {
        return VerificationReport::invalid_input(CHECK, json!({"reason": "one leg per index object"}));
    }
    for d in shape.objects() {
        let leg = &cocone[d.0];
        if !same_category(leg.source(), phi.fibre(d)) || !same_category(leg.target(), k) {
            return VerificationReport::invalid_input(
                CHECK,
                json!({"reason": "leg has the wrong endpoints", "index": shape.obj_name(d)}),
            );
        }
    }
    for u in shape.morphisms() {
        let (d, e) = (shape.dom(u), shape.cod(u));
        let t = phi.transition(u);
        let fib = phi.fibre(d);
        let bad_obj = fib.objects().find(|&x| cocone[e.0].obj(t.obj(x)) != cocone[d.0].obj(x));
        let bad_mor = fib.morphisms().find(|&f| cocone[e.0].mor(t.mor(f)) != cocone[d.0].mor(f));
        if bad_obj.is_some() || bad_mor.is_some() {
            let at = bad_mor
                .map(|f| fib.mor_name(f).to_string())
                .or_else(|| bad_obj.map(|x| fib.obj_name(x).to_string()));
            return VerificationReport::fail(
                CHECK,
                json!({"error": "NaturalityFailure", "morphism": shape.mor_name(u), "at": at}),
            );
        }
    }
    let result = match colimit_cat(phi, bound) {
        Ok(r) => r,
        Err(e) => return e.report(CHECK),
    };
    let m = match mediator(&result, k, cocone) {
        Ok(m) => m,
        Err(e) => return VerificationReport::fail(CHECK, json!({"error": "NotUniversal", "reason": e})),
    };
    if let Some(w) = bijectivity_defect(&m) {
        let mut w = w;
        w["error"] = json!("NotUniversal");
        return VerificationReport::fail(CHECK, w);
    }
    VerificationReport::pass(CHECK)
        .with_stat("objects", k.object_count())
        .with_stat("morphisms", k.morphism_count())
}

fn bijectivity_defect(f: &FinFunctor) -> Option<Value> {
    let (s, t) = (f.source(), f.target());
    let mut hit = vec![None; t.object_count()];
    for o in s.objects() {
        if let Some(p) = hit[f.obj(o).0].replace(o) {
            return Some(json!({"collision": [s.obj_name(p), s.obj_name(o)]}));
        }
    }
    if let Some(o) = t.objects().find(|o| hit[o.0].is_none()) {
        return Some(json!({"unhit_object": t.obj_name(o)}));
    }
    let mut hit = vec![None; t.morphism_count()];
    for m in s.morphisms() {
        if let Some(p) = hit[f.mor(m).0].replace(m) {
            return Some(json!({"collision": [s.mor_name(p), s.mor_name(m)]}));
        }
    }
    t.morphisms()
        .find(|m| hit[m.0].is_none())
        .map(|m| json!({"unhit_morphism": t.mor_name(m)}))
}

/// `Q(u, f) = K_e f` on the covariant total category.
pub fn comparison_q(groth: &GrothendieckResult, result: &CatColimitResult) -> Result<FinFunctor, CatColimError> {
    if groth.diagram != result.diagram {
        return Err(CatColimError::ShapeMismatch("total category of a different diagram".into()));
    }
    let b = groth.diagram.shape();
    let e = &groth.total;
    let on_objects = e
        .objects()
        .map(|o| {
            let (a, x) = groth.object_pairs[o.0];
            result.cocone[a.0].obj(x)
        })
        .collect();
    let on_morphisms = e
        .morphisms()
        .map(|m| {
            let (u, f) = groth.morphism_pairs[m.0];
            result.cocone[b.cod(u).0].mor(f)
        })
        .collect();
    FinFunctor::new(e.clone(), result.colimit.clone(), on_objects, on_morphisms)
        .map_err(|e| CatColimError::ShapeMismatch(format!("comparison is not a functor: {e}")))
}

/// Passes iff `q` is final, surjective on objects, and every morphism of the
/// target is a composite of morphisms in the image.
pub fn certify_cofinal_quotient(q: &FinFunctor) -> VerificationReport {
    let t = q.target();
    let mut objects = vec![false; t.object_count()];
    for o in q.source().objects() {
        objects[q.obj(o).0] = true;
    }
    let mut generated = vec![false; t.morphism_count()];
    for o in t.objects() {
        generated[t.identity(o).0] = true;
    }
    let image: Vec<MorId> = q.source().morphisms().map(|m| q.mor(m)).collect();
    for &f in &image {
        generated[f.0] = true;
    }
    let mut frontier = image.clone();
    while let Some(f) = frontier.pop() {
        for &g in &image {
            if t.dom(g) == t.cod(f) {
                let gf = t.comp(g, f);
                if !generated[gf.0] {
                    generated[gf.0] = true;
                    frontier.push(gf);
                }
            }
        }
    }
    let part = |name: &str, missing: Option<String>| match missing {
        None => VerificationReport::pass(name),
        Some(x) => VerificationReport::fail(name, json!({"missing": x})),
    };
    let parts = vec![
        is_final(q),
        part(
            "surjective_on_objects",
            t.objects().find(|o| !objects[o.0]).map(|o| t.obj_name(o).to_string()),
        ),
        part(
            "generates_morphisms",
            t.morphisms().find(|m| !generated[m.0]).map(|m| t.mor_name(m).to_string()),
        ),
    ];
    VerificationReport::all("certify_cofinal_quotient", parts)
}
