//! Seeded generators of small instances for property tests and corpus runs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
pub use rand_chacha::ChaCha8Rng;

use crate::fincat::search::enumerate_functors;
use crate::fincat::{FinCategory, FinFunctor, MorId, ObjId};
use crate::finset::{FinSet, SetDiagram};
use crate::fixtures;
use crate::grothendieck::{CatDiagram, Variance};
use crate::unionfind::UnionFind;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A poset on `0..n`, each pair `i < j` related with probability `p`.
pub fn random_poset(rng: &mut ChaCha8Rng, n: usize, p: f64) -> FinCategory {
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                rel.push((i, j));
            }
        }
    }
    fixtures::poset(n, &rel)
}

/// One of the named fixtures or a random poset with at most four objects.
pub fn random_shape(rng: &mut ChaCha8Rng) -> Arc<FinCategory> {
    let c = match rng.gen_range(0..12) {
        0 => fixtures::one(),
        1 => fixtures::two(),
        2 => fixtures::span(),
        3 => fixtures::pair(),
        4 => fixtures::push3(),
        5 => fixtures::z2(),
        6 => fixtures::z3(),
        7 => fixtures::discrete(2),
        8 => fixtures::chain(3),
        _ => {
            let n = rng.gen_range(1..=4);
            random_poset(rng, n, 0.5)
        }
    };
    Arc::new(c)
}

/// A uniformly chosen functor among the first `limit` enumerated ones.
pub fn random_functor(
    rng: &mut ChaCha8Rng,
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    limit: usize,
) -> Option<FinFunctor> {
    enumerate_functors(c, d, limit).choose(rng).cloned()
}

/// A quotient of a sum of representables (plus possibly a point), cut down
/// until every set has at most `max` elements.
pub fn random_set_diagram(rng: &mut ChaCha8Rng, shape: &Arc<FinCategory>, max: usize) -> SetDiagram {
    let n = shape.object_count();
    // elements as (object, summand, payload); maps computed on the fly
    let mut elems: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut nodes: Vec<(ObjId, Option<usize>)> = Vec::new();
    let summands = rng.gen_range(1..=2);
    let mut reps = Vec::new();
    for _ in 0..summands {
        reps.push(ObjId(rng.gen_range(0..n)));
    }
    let point = rng.gen_bool(0.3);
    // node = (object, morphism index from the representing object) or a point
    let mut start = Vec::new();
    for &c in &reps {
        start.push(nodes.len());
        for o in shape.objects() {
            for &m in shape.hom(c, o) {
                elems[o.0].push(nodes.len());
                nodes.push((o, Some(m.0)));
            }
        }
    }
    let point_start = nodes.len();
    if point {
        for o in shape.objects() {
            elems[o.0].push(nodes.len());
            nodes.push((o, None));
        }
    }
    let summand_of = |node: usize| start.iter().rposition(|&s| s <= node && node < point_start);
    let image = |node: usize, m: usize| -> usize {
        let (_, payload) = nodes[node];
        let b = shape.cod(MorId(m));
        match (payload, summand_of(node)) {
            (Some(f), Some(k)) => {
                let gf = shape.comp(MorId(m), MorId(f));
                (start[k]..)
                    .find(|&t| nodes[t] == (b, Some(gf.0)))
                    .expect("composite is in the summand")
            }
            _ => point_start + b.0,
        }
    };
    let mut uf = UnionFind::new(nodes.len());
    let close = |uf: &mut UnionFind| loop {
        let mut changed = false;
        for m in shape.morphisms() {
            let a = shape.dom(m);
            let members = &elems[a.0];
            for w in 0..members.len() {
                for v in w + 1..members.len() {
                    let (x, y) = (members[w], members[v]);
                    if uf.find(x) == uf.find(y) && uf.union(image(x, m.0), image(y, m.0)) {
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    };
    let class_count = |uf: &mut UnionFind, o: usize| {
        let mut roots: Vec<usize> = elems[o].iter().map(|&x| uf.find(x)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots
    };
    let extra = rng.gen_range(0..=2);
    for _ in 0..extra {
        let o = rng.gen_range(0..n);
        if elems[o].len() >= 2 {
            let x = *elems[o].choose(rng).unwrap();
            let y = *elems[o].choose(rng).unwrap();
            uf.union(x, y);
            close(&mut uf);
        }
    }
    loop {
        let big: Vec<usize> = (0..n).filter(|&o| class_count(&mut uf, o).len() > max).collect();
        let Some(&o) = big.choose(rng) else { break };
        let roots = class_count(&mut uf, o);
        let x = *roots.choose(rng).unwrap();
        let y = loop {
            let y = *roots.choose(rng).unwrap();
            if y != x {
                break y;
            }
        };
        uf.union(x, y);
        close(&mut uf);
    }
    let mut local = vec![usize::MAX; nodes.len()];
    let mut sets = Vec::with_capacity(n);
    for o in 0..n {
        let roots = class_count(&mut uf, o);
        for (i, &r) in roots.iter().enumerate() {
            local[r] = i;
        }
        sets.push(FinSet::new((0..roots.len()).map(|i| format!("e{i}"))).unwrap());
    }
    let maps = shape
        .morphisms()
        .map(|m| {
            let a = shape.dom(m);
            let roots = class_count(&mut uf, a.0);
            roots.iter().map(|&r| local[uf.find(image(r, m.0))]).collect()
        })
        .collect();
    SetDiagram::new(shape.clone(), sets, maps).expect("quotients of functors are functors")
}

/// Non-identity morphisms that are not composites of two non-identities.
pub fn generators(c: &FinCategory) -> Vec<MorId> {
    let mut composite = vec![false; c.morphism_count()];
    for f in c.morphisms() {
        if c.is_identity(f) {
            continue;
        }
        for &g in c.outgoing(c.cod(f)) {
            if !c.is_identity(g) {
                composite[c.comp(g, f).0] = true;
            }
        }
    }
    c.morphisms()
        .filter(|&m| !c.is_identity(m) && !composite[m.0])
        .collect()
}

fn small_fibre(rng: &mut ChaCha8Rng) -> Arc<FinCategory> {
    let c = match rng.gen_range(0..8) {
        0 => fixtures::one(),
        1 | 2 => fixtures::two(),
        3 => fixtures::discrete(2),
        4 => fixtures::chain(3),
        5 => fixtures::z2(),
        _ => {
            let n = rng.gen_range(1..=3);
            random_poset(rng, n, 0.5)
        }
    };
    Arc::new(c)
}

fn small_base(rng: &mut ChaCha8Rng) -> Arc<FinCategory> {
    let c = match rng.gen_range(0..7) {
        0 => fixtures::one(),
        1 => fixtures::two(),
        2 => fixtures::span(),
        3 => fixtures::push3(),
        4 => fixtures::pair(),
        5 => fixtures::z2(),
        _ => fixtures::discrete(2),
    };
    Arc::new(c)
}

fn order_of(c: &FinCategory, u: MorId) -> Option<usize> {
    if c.dom(u) != c.cod(u) {
        return None;
    }
    let mut p = u;
    for n in 1..=c.morphism_count() {
        if c.is_identity(p) {
            return Some(n);
        }
        p = c.comp(u, p);
    }
    None
}

fn power(f: &FinFunctor, n: usize) -> FinFunctor {
    let mut p = FinFunctor::identity(f.source());
    for _ in 0..n {
        p = f.after(&p).unwrap();
    }
    p
}

/// A strict diagram over a small base with small fibres, built from random
/// functors on generators and retried until functorial. Falls back to a
/// constant diagram.
pub fn random_cat_diagram(rng: &mut ChaCha8Rng, variance: Variance) -> CatDiagram {
    let base = small_base(rng);
    for _ in 0..20 {
        let fibres: Vec<Arc<FinCategory>> = base.objects().map(|_| small_fibre(rng)).collect();
        if let Some(d) = try_cat_diagram(rng, &base, &fibres, variance) {
            return d;
        }
    }
    let fibre = small_fibre(rng);
    CatDiagram::constant(&base, &fibre, variance)
}

/// Random functors on the generators of `base`, extended by composition.
pub fn try_cat_diagram(
    rng: &mut ChaCha8Rng,
    base: &Arc<FinCategory>,
    fibres: &[Arc<FinCategory>],
    variance: Variance,
) -> Option<CatDiagram> {
    let ends = |u: MorId| match variance {
        Variance::Covariant => (base.dom(u), base.cod(u)),
        Variance::Contravariant => (base.cod(u), base.dom(u)),
    };
    let mut assigned: Vec<Option<FinFunctor>> = vec![None; base.morphism_count()];
    for o in base.objects() {
        assigned[base.identity(o).0] = Some(FinFunctor::identity(&fibres[o.0]));
    }
    for u in generators(base) {
        let (a, b) = ends(u);
        let mut candidates = enumerate_functors(&fibres[a.0], &fibres[b.0], 500);
        if let Some(n) = order_of(base, u) {
            candidates.retain(|f| power(f, n) == FinFunctor::identity(&fibres[a.0]));
        }
        assigned[u.0] = Some(candidates.choose(rng)?.clone());
    }
    loop {
        let mut progress = false;
        let mut missing = false;
        for m in base.morphisms() {
            if assigned[m.0].is_some() {
                continue;
            }
            missing = true;
            let split = base.morphisms().find_map(|f| {
                if base.is_identity(f) || assigned[f.0].is_none() {
                    return None;
                }
                base.outgoing(base.cod(f))
                    .iter()
                    .find(|&&g| !base.is_identity(g) && assigned[g.0].is_some() && base.comp(g, f) == m)
                    .map(|&g| (g, f))
            });
            if let Some((g, f)) = split {
                let (fg, ff) = (assigned[g.0].as_ref().unwrap(), assigned[f.0].as_ref().unwrap());
                let composite = match variance {
                    Variance::Covariant => fg.after(ff),
                    Variance::Contravariant => ff.after(fg),
                }
                .ok()?;
                assigned[m.0] = Some(composite);
                progress = true;
            }
        }
        if !missing {
            break;
        }
        if !progress {
            return None;
        }
    }
    let transitions = assigned.into_iter().map(Option::unwrap).collect();
    CatDiagram::new(base.clone(), fibres.to_vec(), transitions, variance).ok()
}

/// A covariant diagram of chains over a chain whose transitions all keep the
/// bottom element. Between chains such functors preserve joins, so each has a
/// right adjoint and the projection of the total category is a bifibration.
pub fn random_bifibred_diagram(rng: &mut ChaCha8Rng) -> CatDiagram {
    for _ in 0..200 {
        let base = Arc::new(fixtures::chain(rng.gen_range(1..=3)));
        let fibres: Vec<Arc<FinCategory>> = base
            .objects()
            .map(|_| Arc::new(fixtures::chain(rng.gen_range(1..=3))))
            .collect();
        if let Some(d) = try_cat_diagram(rng, &base, &fibres, Variance::Covariant) {
            if d.transitions().iter().all(|t| t.obj(ObjId(0)) == ObjId(0)) {
                return d;
            }
        }
    }
    let base = Arc::new(fixtures::chain(2));
    CatDiagram::constant(&base, &Arc::new(fixtures::chain(2)), Variance::Covariant)
}
