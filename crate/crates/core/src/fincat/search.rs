//! Brute-force searches: isomorphisms, functors, transformations, cones.

use std::sync::Arc;

use super::category::{FinCategory, MorId, ObjId};
use super::functor::FinFunctor;
use super::nat::NatTransformation;

struct MorphismSearch<'a> {
    c: &'a FinCategory,
    d: &'a FinCategory,
    obj: &'a [ObjId],
    img: Vec<Option<MorId>>,
    order: Vec<MorId>,
    injective: bool,
    used: Vec<bool>,
    accept: &'a dyn Fn(MorId, MorId) -> bool,
}

impl MorphismSearch<'_> {
    fn consistent(&self, m: MorId) -> bool {
        let (c, d) = (self.c, self.d);
        let im = self.img[m.0].unwrap();
        for &g in c.outgoing(c.cod(m)) {
            if let Some(ig) = self.img[g.0] {
                if let Some(ih) = self.img[c.comp(g, m).0] {
                    if d.comp(ig, im) != ih {
                        return false;
                    }
                }
            }
        }
        for &f in c.incoming(c.dom(m)) {
            if let Some(i_f) = self.img[f.0] {
                if let Some(ih) = self.img[c.comp(m, f).0] {
                    if d.comp(im, i_f) != ih {
                        return false;
                    }
                }
            }
        }
        for &f in c.outgoing(c.dom(m)) {
            let Some(i_f) = self.img[f.0] else { continue };
            for &g in c.outgoing(c.cod(f)) {
                if c.cod(g) != c.cod(m) {
                    continue;
                }
                if let Some(ig) = self.img[g.0] {
                    if c.comp(g, f) == m && d.comp(ig, i_f) != im {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize, visit: &mut dyn FnMut(&[Option<MorId>]) -> bool) -> bool {
        if k == self.order.len() {
            return visit(&self.img);
        }
        let m = self.order[k];
        let (a, b) = (self.obj[self.c.dom(m).0], self.obj[self.c.cod(m).0]);
        for &cand in self.d.hom(a, b) {
            if self.injective && self.used[cand.0] {
                continue;
            }
            if !(self.accept)(m, cand) {
                continue;
            }
            self.img[m.0] = Some(cand);
            if self.consistent(m) {
                if self.injective {
                    self.used[cand.0] = true;
                }
                let go_on = self.run(k + 1, visit);
                if self.injective {
                    self.used[cand.0] = false;
                }
                if !go_on {
                    self.img[m.0] = None;
                    return false;
                }
            }
            self.img[m.0] = None;
        }
        true
    }
}

fn search_morphisms(
    c: &FinCategory,
    d: &FinCategory,
    obj: &[ObjId],
    injective: bool,
    accept: &dyn Fn(MorId, MorId) -> bool,
    visit: &mut dyn FnMut(&[Option<MorId>]) -> bool,
) -> bool {
    let mut img = vec![None; c.morphism_count()];
    let mut used = vec![false; d.morphism_count()];
    for o in c.objects() {
        let id = d.identity(obj[o.0]);
        if !accept(c.identity(o), id) {
            return true;
        }
        img[c.identity(o).0] = Some(id);
        used[id.0] = true;
    }
    let order = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    let mut s = MorphismSearch {
        c,
        d,
        obj,
        img,
        order,
        injective,
        used,
        accept,
    };
    s.run(0, visit)
}

fn search_objects(
    c: &FinCategory,
    d: &FinCategory,
    injective: bool,
    accept: &dyn Fn(ObjId, ObjId) -> bool,
    visit: &mut dyn FnMut(&[ObjId]) -> bool,
) {
    fn go(
        k: usize,
        c: &FinCategory,
        d: &FinCategory,
        injective: bool,
        accept: &dyn Fn(ObjId, ObjId) -> bool,
        cur: &mut Vec<ObjId>,
        visit: &mut dyn FnMut(&[ObjId]) -> bool,
    ) -> bool {
        if k == c.object_count() {
            return visit(cur);
        }
        let o = ObjId(k);
        for cand in d.objects() {
            if injective && cur.contains(&cand) {
                continue;
            }
            if !accept(o, cand) {
                continue;
            }
            if injective {
                let ok = (0..k).all(|p| {
                    let (p, q) = (ObjId(p), cur[p]);
                    c.hom(o, p).len() == d.hom(cand, q).len() && c.hom(p, o).len() == d.hom(q, cand).len()
                }) && c.hom(o, o).len() == d.hom(cand, cand).len();
                if !ok {
                    continue;
                }
            } else {
                let ok = (0..k).all(|p| {
                    (c.hom(o, ObjId(p)).is_empty() || !d.hom(cand, cur[p]).is_empty())
                        && (c.hom(ObjId(p), o).is_empty() || !d.hom(cur[p], cand).is_empty())
                });
                if !ok {
                    continue;
                }
            }
            cur.push(cand);
            let go_on = go(k + 1, c, d, injective, accept, cur, visit);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    go(0, c, d, injective, accept, &mut Vec::new(), visit);
}

/// First isomorphism `c -> d` accepted by the two filters.
pub fn find_isomorphism_with(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    accept_obj: &dyn Fn(ObjId, ObjId) -> bool,
    accept_mor: &dyn Fn(MorId, MorId) -> bool,
) -> Option<FinFunctor> {
    if c.object_count() != d.object_count() || c.morphism_count() != d.morphism_count() {
        return None;
    }
    let mut found = None;
    search_objects(c, d, true, accept_obj, &mut |obj| {
        search_morphisms(c, d, obj, true, accept_mor, &mut |img| {
            found = Some((obj.to_vec(), img.iter().map(|m| m.unwrap()).collect::<Vec<_>>()));
            false
        });
        found.is_none()
    });
    found.map(|(o, m)| FinFunctor::new(c.clone(), d.clone(), o, m).expect("search yields functors"))
}

pub fn find_isomorphism(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Option<FinFunctor> {
    find_isomorphism_with(c, d, &|_, _| true, &|_, _| true)
}

/// Isomorphism `c -> d` with `pd . F = pc`.
pub fn find_isomorphism_over(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    pc: &FinFunctor,
    pd: &FinFunctor,
) -> Option<FinFunctor> {
    find_isomorphism_with(
        c,
        d,
        &|o, img| pd.obj(img) == pc.obj(o),
        &|m, img| pd.mor(img) == pc.mor(m),
    )
}

/// Every functor `c -> d`, stopping after `limit` of them.
pub fn enumerate_functors(c: &Arc<FinCategory>, d: &Arc<FinCategory>, limit: usize) -> Vec<FinFunctor> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    search_objects(c, d, false, &|_, _| true, &mut |obj| {
        search_morphisms(c, d, obj, false, &|_, _| true, &mut |img| {
            out.push(FinFunctor::from_parts_unchecked(
                c.clone(),
                d.clone(),
                obj.to_vec(),
                img.iter().map(|m| m.unwrap()).collect(),
            ));
            out.len() < limit
        });
        out.len() < limit
    });
    out
}

/// Every natural transformation `f => g`.
pub fn enumerate_transformations(f: &FinFunctor, g: &FinFunctor) -> Vec<NatTransformation> {
    let s = f.source().clone();
    let t = f.target().clone();
    let mut out = Vec::new();
    let mut cur: Vec<MorId> = Vec::new();
    fn go(
        k: usize,
        s: &FinCategory,
        t: &FinCategory,
        f: &FinFunctor,
        g: &FinFunctor,
        cur: &mut Vec<MorId>,
        out: &mut Vec<Vec<MorId>>,
    ) {
        if k == s.object_count() {
            out.push(cur.clone());
            return;
        }
        let o = ObjId(k);
        for &c in t.hom(f.obj(o), g.obj(o)) {
            cur.push(c);
            let ok = s.morphisms().all(|m| {
                let (a, b) = (s.dom(m), s.cod(m));
                if a.0 > k || b.0 > k || (a != o && b != o) {
                    return true;
                }
                t.comp(g.mor(m), cur[a.0]) == t.comp(cur[b.0], f.mor(m))
            });
            if ok {
                go(k + 1, s, t, f, g, cur, out);
            }
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    go(0, &s, &t, f, g, &mut cur, &mut raw);
    for comps in raw {
        out.push(NatTransformation::new(f.clone(), g.clone(), comps).expect("search yields natural families"));
    }
    out
}

/// A cone over a diagram in a finite category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

/// Every cone over `diagram: D -> C`, apexes in declared order.
pub fn all_cones(diagram: &FinFunctor) -> Vec<Cone> {
    let d = diagram.source().clone();
    let c = diagram.target().clone();
    let mut out = Vec::new();
    for apex in c.objects() {
        let mut cur = Vec::new();
        fn go(
            k: usize,
            apex: ObjId,
            d: &FinCategory,
            c: &FinCategory,
            x: &FinFunctor,
            cur: &mut Vec<MorId>,
            out: &mut Vec<Cone>,
        ) {
            if k == d.object_count() {
                out.push(Cone {
                    apex,
                    legs: cur.clone(),
                });
                return;
            }
            let o = ObjId(k);
            for &leg in c.hom(apex, x.obj(o)) {
                cur.push(leg);
                let ok = d.morphisms().all(|m| {
                    let (a, b) = (d.dom(m), d.cod(m));
                    if a.0 > k || b.0 > k || (a != o && b != o) {
                        return true;
                    }
                    c.comp(x.mor(m), cur[a.0]) == cur[b.0]
                });
                if ok {
                    go(k + 1, apex, d, c, x, cur, out);
                }
                cur.pop();
            }
        }
        go(0, apex, &d, &c, diagram, &mut cur, &mut out);
    }
    out
}

/// Number of morphisms `other.apex -> cone.apex` through which `other`
/// factors.
pub fn factorizations(c: &FinCategory, cone: &Cone, other: &Cone) -> usize {
    c.hom(other.apex, cone.apex)
        .iter()
        .filter(|&&m| {
            cone.legs
                .iter()
                .zip(&other.legs)
                .all(|(&l, &o)| c.comp(l, m) == o)
        })
        .count()
}

/// First cone (in `cones`) that `cone` fails to be terminal against, with the
/// number of factorizations found.
pub fn terminality_defect<'a>(c: &FinCategory, cone: &Cone, cones: &'a [Cone]) -> Option<(&'a Cone, usize)> {
    cones.iter().find_map(|o| {
        let n = factorizations(c, cone, o);
        (n != 1).then_some((o, n))
    })
}

/// Outcome of an exhaustive limit search.
#[derive(Clone, Debug)]
pub struct LimitSearch {
    pub cones: Vec<Cone>,
    /// terminal cone with the lexicographically least apex token
    pub limit: Option<Cone>,
}

pub fn find_limit(diagram: &FinFunctor) -> LimitSearch {
    let c = diagram.target().clone();
    let cones = all_cones(diagram);
    let mut best: Option<Cone> = None;
    for cone in &cones {
        if terminality_defect(&c, cone, &cones).is_none() {
            let better = match &best {
                None => true,
                Some(b) => c.obj_name(cone.apex) < c.obj_name(b.apex),
            };
            if better {
                best = Some(cone.clone());
            }
        }
    }
    LimitSearch { cones, limit: best }
}
