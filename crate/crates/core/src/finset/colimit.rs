use std::collections::HashMap;

use serde_json::json;
use thiserror::Error;

use super::diagram::SetDiagram;
use super::set::{FinFunction, FinSet};
use crate::fincat::ObjId;
use crate::report::VerificationReport;
use crate::unionfind::UnionFind;

pub const DEFAULT_TUPLE_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("not a cocone: leg condition fails at {morphism} on {element}")]
    NotACocone { morphism: String, element: String },
    #[error("not a cone: leg condition fails at {morphism} on {element}")]
    NotACone { morphism: String, element: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("mediating map is not unique: {element} is unconstrained")]
    NonUnique { element: String },
    #[error("no mediating map: {element} would need images {first} and {second}")]
    NoMediator {
        element: String,
        first: String,
        second: String,
    },
    #[error("limit needs {size} tuples, above the cap of {cap}")]
    ResourceExceeded { size: u128, cap: u128 },
}

/// A cocone under a set-valued diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCocone {
    pub diagram: SetDiagram,
    pub apex: FinSet,
    pub legs: Vec<FinFunction>,
}

/// A cone over a set-valued diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCone {
    pub diagram: SetDiagram,
    pub apex: FinSet,
    pub legs: Vec<FinFunction>,
}

fn check_legs(diagram: &SetDiagram, apex: &FinSet, legs: &[FinFunction]) -> Result<(), ConeError> {
    let shape = diagram.shape();
    if legs.len() != shape.object_count() {
        return Err(ConeError::ShapeMismatch("one leg per object".into()));
    }
    let _ = apex;
    Ok(())
}

impl SetCocone {
    pub fn new(diagram: SetDiagram, apex: FinSet, legs: Vec<FinFunction>) -> Result<SetCocone, ConeError> {
        check_legs(&diagram, &apex, &legs)?;
        let shape = diagram.shape().clone();
        for o in shape.objects() {
            if legs[o.0].source() != diagram.set(o) || legs[o.0].target() != &apex {
                return Err(ConeError::ShapeMismatch(format!("leg at {}", shape.obj_name(o))));
            }
        }
        for m in shape.morphisms() {
            let (a, b) = (shape.dom(m), shape.cod(m));
            for x in 0..diagram.set(a).len() {
                if legs[b.0].apply(diagram.apply(m, x)) != legs[a.0].apply(x) {
                    return Err(ConeError::NotACocone {
                        morphism: shape.mor_name(m).to_string(),
                        element: diagram.set(a).name(x).to_string(),
                    });
                }
            }
        }
        Ok(SetCocone { diagram, apex, legs })
    }

    /// Members of each apex element, as `(object, element)` pairs.
    pub fn classes(&self) -> Vec<Vec<(ObjId, usize)>> {
        let mut out = vec![Vec::new(); self.apex.len()];
        for o in self.diagram.shape().objects() {
            for x in 0..self.diagram.set(o).len() {
                out[self.legs[o.0].apply(x)].push((o, x));
            }
        }
        out
    }

    pub fn leg(&self, o: ObjId) -> &FinFunction {
        &self.legs[o.0]
    }
}

impl SetCone {
    pub fn new(diagram: SetDiagram, apex: FinSet, legs: Vec<FinFunction>) -> Result<SetCone, ConeError> {
        check_legs(&diagram, &apex, &legs)?;
        let shape = diagram.shape().clone();
        for o in shape.objects() {
            if legs[o.0].target() != diagram.set(o) || legs[o.0].source() != &apex {
                return Err(ConeError::ShapeMismatch(format!("leg at {}", shape.obj_name(o))));
            }
        }
        for m in shape.morphisms() {
            let (a, b) = (shape.dom(m), shape.cod(m));
            for t in 0..apex.len() {
                if diagram.apply(m, legs[a.0].apply(t)) != legs[b.0].apply(t) {
                    return Err(ConeError::NotACone {
                        morphism: shape.mor_name(m).to_string(),
                        element: apex.name(t).to_string(),
                    });
                }
            }
        }
        Ok(SetCone { diagram, apex, legs })
    }

    pub fn leg(&self, o: ObjId) -> &FinFunction {
        &self.legs[o.0]
    }

    /// The tuple of components of apex element `t`.
    pub fn tuple(&self, t: usize) -> Vec<usize> {
        self.legs.iter().map(|l| l.apply(t)).collect()
    }
}

pub(crate) fn unique_names(names: Vec<String>) -> FinSet {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let names: Vec<String> = names
        .into_iter()
        .map(|n| {
            let k = seen.entry(n.clone()).or_default();
            *k += 1;
            if *k == 1 {
                n
            } else {
                format!("{n}#{k}")
            }
        })
        .collect();
    FinSet::new(names).expect("names made unique")
}

/// Disjoint union modulo `x ~ X(f)(x)`. Apex elements are ordered by first
/// member and named `object.element` after their least member token.
pub fn colimit_set(x: &SetDiagram) -> SetCocone {
    let shape = x.shape();
    let mut offset = Vec::with_capacity(shape.object_count() + 1);
    let mut total = 0;
    for o in shape.objects() {
        offset.push(total);
        total += x.set(o).len();
    }
    let mut uf = UnionFind::new(total);
    for m in shape.morphisms() {
        let (a, b) = (shape.dom(m), shape.cod(m));
        for e in 0..x.set(a).len() {
            uf.union(offset[a.0] + e, offset[b.0] + x.apply(m, e));
        }
    }
    let (class_of, n) = uf.classes();
    let mut best: Vec<Option<String>> = vec![None; n];
    for o in shape.objects() {
        for e in 0..x.set(o).len() {
            let token = format!("{}.{}", shape.obj_name(o), x.set(o).name(e));
            let c = class_of[offset[o.0] + e];
            if best[c].as_ref().map_or(true, |b| token < *b) {
                best[c] = Some(token);
            }
        }
    }
    let apex = unique_names(best.into_iter().map(|b| b.unwrap()).collect());
    let legs = shape
        .objects()
        .map(|o| {
            let mapping = (0..x.set(o).len()).map(|e| class_of[offset[o.0] + e]).collect();
            FinFunction::new(x.set(o).clone(), apex.clone(), mapping).unwrap()
        })
        .collect();
    SetCocone {
        diagram: x.clone(),
        apex,
        legs,
    }
}

pub fn limit_set(x: &SetDiagram) -> Result<SetCone, ConeError> {
    limit_set_capped(x, DEFAULT_TUPLE_CAP)
}

/// Compatible families, enumerated in lexicographic order over the declared
/// object order. Fails if the full product exceeds `cap` tuples.
pub fn limit_set_capped(x: &SetDiagram, cap: u128) -> Result<SetCone, ConeError> {
    let shape = x.shape().clone();
    let size = shape
        .objects()
        .fold(1u128, |acc, o| acc.saturating_mul(x.set(o).len() as u128));
    if size > cap {
        return Err(ConeError::ResourceExceeded { size, cap });
    }
    let n = shape.object_count();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(k: usize, x: &SetDiagram, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let shape = x.shape();
        if k == shape.object_count() {
            out.push(cur.clone());
            return;
        }
        let o = ObjId(k);
        for e in 0..x.set(o).len() {
            cur.push(e);
            let ok = shape
                .outgoing(o)
                .iter()
                .filter(|&&m| shape.cod(m).0 <= k)
                .all(|&m| x.apply(m, e) == cur[shape.cod(m).0])
                && shape
                    .incoming(o)
                    .iter()
                    .filter(|&&m| shape.dom(m).0 < k)
                    .all(|&m| x.apply(m, cur[shape.dom(m).0]) == e);
            if ok {
                go(k + 1, x, cur, out);
            }
            cur.pop();
        }
    }
    go(0, x, &mut cur, &mut tuples);
    let names = tuples
        .iter()
        .map(|t| {
            if n == 1 {
                x.set(ObjId(0)).name(t[0]).to_string()
            } else {
                let parts: Vec<&str> = t.iter().enumerate().map(|(i, &e)| x.set(ObjId(i)).name(e)).collect();
                format!("({})", parts.join(","))
            }
        })
        .collect();
    let apex = unique_names(names);
    let legs = shape
        .objects()
        .map(|o| FinFunction::new(apex.clone(), x.set(o).clone(), tuples.iter().map(|t| t[o.0]).collect()).unwrap())
        .collect();
    Ok(SetCone {
        diagram: x.clone(),
        apex,
        legs,
    })
}

/// The unique `h: colimit.apex -> other.apex` with `h . leg_i = other.leg_i`.
pub fn mediate(colimit: &SetCocone, other: &SetCocone) -> Result<FinFunction, ConeError> {
    if colimit.diagram != other.diagram {
        return Err(ConeError::ShapeMismatch("cocones over different diagrams".into()));
    }
    let c1 = SetCocone::new(colimit.diagram.clone(), colimit.apex.clone(), colimit.legs.clone())?;
    let c2 = SetCocone::new(other.diagram.clone(), other.apex.clone(), other.legs.clone())?;
    let shape = c1.diagram.shape().clone();
    let mut h: Vec<Option<usize>> = vec![None; c1.apex.len()];
    for o in shape.objects() {
        for e in 0..c1.diagram.set(o).len() {
            let c = c1.legs[o.0].apply(e);
            let v = c2.legs[o.0].apply(e);
            match h[c] {
                Some(w) if w != v => {
                    return Err(ConeError::NoMediator {
                        element: c1.apex.name(c).to_string(),
                        first: c2.apex.name(w).to_string(),
                        second: c2.apex.name(v).to_string(),
                    })
                }
                _ => h[c] = Some(v),
            }
        }
    }
    let mut mapping = Vec::with_capacity(h.len());
    for (c, v) in h.into_iter().enumerate() {
        match v {
            Some(v) => mapping.push(v),
            None => {
                return Err(ConeError::NonUnique {
                    element: c1.apex.name(c).to_string(),
                })
            }
        }
    }
    Ok(FinFunction::new(c1.apex.clone(), c2.apex.clone(), mapping).unwrap())
}

/// The unique `h: other.apex -> limit.apex` with `leg_i . h = other.leg_i`.
pub fn mediate_cone(limit: &SetCone, other: &SetCone) -> Result<FinFunction, ConeError> {
    if limit.diagram != other.diagram {
        return Err(ConeError::ShapeMismatch("cones over different diagrams".into()));
    }
    let l = SetCone::new(limit.diagram.clone(), limit.apex.clone(), limit.legs.clone())?;
    let o = SetCone::new(other.diagram.clone(), other.apex.clone(), other.legs.clone())?;
    let mut index: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for t in 0..l.apex.len() {
        index.entry(l.tuple(t)).or_default().push(t);
    }
    let mut mapping = Vec::with_capacity(o.apex.len());
    for t in 0..o.apex.len() {
        let tuple = o.tuple(t);
        match index.get(&tuple).map(Vec::as_slice) {
            Some([one]) => mapping.push(*one),
            Some(_) => {
                return Err(ConeError::NonUnique {
                    element: o.apex.name(t).to_string(),
                })
            }
            None => {
                return Err(ConeError::NoMediator {
                    element: o.apex.name(t).to_string(),
                    first: "-".into(),
                    second: "-".into(),
                })
            }
        }
    }
    Ok(FinFunction::new(o.apex.clone(), l.apex.clone(), mapping).unwrap())
}

/// Passes iff `h` is injective and surjective.
pub fn is_bijection(h: &FinFunction) -> VerificationReport {
    if let Some((x, y)) = h.collision() {
        return VerificationReport::fail(
            "is_bijection",
            json!({ "collision": [h.source().name(x), h.source().name(y)], "image": h.target().name(h.apply(x)) }),
        );
    }
    if let Some(t) = h.unhit() {
        return VerificationReport::fail("is_bijection", json!({ "unhit": h.target().name(t) }));
    }
    VerificationReport::pass("is_bijection").with_stat("size", h.source().len())
}
