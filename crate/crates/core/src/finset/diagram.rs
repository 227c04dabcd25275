use std::sync::Arc;

use super::set::{FinFunction, FinSet, SetError};
use crate::fincat::{same_category, FinCategory, FinFunctor, MorId, ObjId};

/// A functor from a finite category into finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetDiagram {
    shape: Arc<FinCategory>,
    sets: Vec<FinSet>,
    maps: Vec<Vec<usize>>,
}

impl SetDiagram {
    pub fn new(shape: Arc<FinCategory>, sets: Vec<FinSet>, maps: Vec<Vec<usize>>) -> Result<SetDiagram, SetError> {
        if sets.len() != shape.object_count() || maps.len() != shape.morphism_count() {
            return Err(SetError::ShapeMismatch("one set per object and one function per morphism".into()));
        }
        for m in shape.morphisms() {
            let (a, b) = (shape.dom(m), shape.cod(m));
            let f = &maps[m.0];
            if f.len() != sets[a.0].len() || f.iter().any(|&y| y >= sets[b.0].len()) {
                return Err(SetError::NotTotal(format!("function for {}", shape.mor_name(m))));
            }
        }
        for o in shape.objects() {
            let id = shape.identity(o);
            if maps[id.0].iter().enumerate().any(|(i, &y)| i != y) {
                return Err(SetError::IdentityViolation {
                    morphism: shape.mor_name(id).to_string(),
                });
            }
        }
        for f in shape.morphisms() {
            for &g in shape.outgoing(shape.cod(f)) {
                let gf = shape.comp(g, f);
                let ok = (0..sets[shape.dom(f).0].len()).all(|x| maps[g.0][maps[f.0][x]] == maps[gf.0][x]);
                if !ok {
                    return Err(SetError::CompositionViolation {
                        g: shape.mor_name(g).to_string(),
                        f: shape.mor_name(f).to_string(),
                        gf: shape.mor_name(gf).to_string(),
                    });
                }
            }
        }
        Ok(SetDiagram { shape, sets, maps })
    }

    /// Builds a diagram from functions given on some morphisms; identities
    /// may be omitted.
    pub fn from_functions(
        shape: Arc<FinCategory>,
        sets: Vec<FinSet>,
        functions: Vec<(MorId, Vec<usize>)>,
    ) -> Result<SetDiagram, SetError> {
        let mut maps: Vec<Option<Vec<usize>>> = vec![None; shape.morphism_count()];
        for o in shape.objects() {
            maps[shape.identity(o).0] = Some((0..sets[o.0].len()).collect());
        }
        for (m, f) in functions {
            maps[m.0] = Some(f);
        }
        let mut out = Vec::with_capacity(maps.len());
        for (i, m) in maps.into_iter().enumerate() {
            out.push(m.ok_or_else(|| SetError::NotTotal(format!("no function for {}", shape.mor_name(MorId(i)))))?);
        }
        SetDiagram::new(shape, sets, out)
    }

    /// The diagram constant at `set`.
    pub fn constant(shape: &Arc<FinCategory>, set: &FinSet) -> SetDiagram {
        SetDiagram {
            shape: shape.clone(),
            sets: vec![set.clone(); shape.object_count()],
            maps: vec![(0..set.len()).collect(); shape.morphism_count()],
        }
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn set(&self, o: ObjId) -> &FinSet {
        &self.sets[o.0]
    }

    pub fn sets(&self) -> &[FinSet] {
        &self.sets
    }

    pub fn map(&self, m: MorId) -> &[usize] {
        &self.maps[m.0]
    }

    pub fn apply(&self, m: MorId, x: usize) -> usize {
        self.maps[m.0][x]
    }

    pub fn function(&self, m: MorId) -> FinFunction {
        FinFunction::new(
            self.sets[self.shape.dom(m).0].clone(),
            self.sets[self.shape.cod(m).0].clone(),
            self.maps[m.0].clone(),
        )
        .expect("diagram functions are total")
    }

    /// Total number of elements over all objects.
    pub fn total_size(&self) -> usize {
        self.sets.iter().map(FinSet::len).sum()
    }

    /// Same data over an equal shape held elsewhere.
    pub fn reshape(&self, shape: &Arc<FinCategory>) -> Result<SetDiagram, SetError> {
        if !same_category(shape, &self.shape) {
            return Err(SetError::ShapeMismatch("reshape to a different category".into()));
        }
        Ok(SetDiagram {
            shape: shape.clone(),
            sets: self.sets.clone(),
            maps: self.maps.clone(),
        })
    }
}

/// `X . F`
pub fn restrict(x: &SetDiagram, f: &FinFunctor) -> Result<SetDiagram, SetError> {
    if !same_category(f.target(), x.shape()) {
        return Err(SetError::ShapeMismatch("functor does not land in the diagram's shape".into()));
    }
    let j = f.source();
    Ok(SetDiagram {
        shape: j.clone(),
        sets: j.objects().map(|o| x.set(f.obj(o)).clone()).collect(),
        maps: j.morphisms().map(|m| x.map(f.mor(m)).to_vec()).collect(),
    })
}

/// A natural transformation between set-valued diagrams on one shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetTransformation {
    source: SetDiagram,
    target: SetDiagram,
    components: Vec<FinFunction>,
}

impl SetTransformation {
    pub fn new(source: SetDiagram, target: SetDiagram, components: Vec<FinFunction>) -> Result<Self, SetError> {
        if !same_category(source.shape(), target.shape()) {
            return Err(SetError::ShapeMismatch("diagrams on different shapes".into()));
        }
        let shape = source.shape().clone();
        if components.len() != shape.object_count() {
            return Err(SetError::ShapeMismatch("one component per object".into()));
        }
        for o in shape.objects() {
            if components[o.0].source() != source.set(o) || components[o.0].target() != target.set(o) {
                return Err(SetError::ShapeMismatch(format!("component at {}", shape.obj_name(o))));
            }
        }
        for m in shape.morphisms() {
            let (a, b) = (shape.dom(m), shape.cod(m));
            for x in 0..source.set(a).len() {
                if target.apply(m, components[a.0].apply(x)) != components[b.0].apply(source.apply(m, x)) {
                    return Err(SetError::NotNatural {
                        morphism: shape.mor_name(m).to_string(),
                    });
                }
            }
        }
        Ok(SetTransformation {
            source,
            target,
            components,
        })
    }

    pub fn identity(x: &SetDiagram) -> SetTransformation {
        SetTransformation {
            source: x.clone(),
            target: x.clone(),
            components: x.sets().iter().map(FinFunction::identity).collect(),
        }
    }

    pub fn source(&self) -> &SetDiagram {
        &self.source
    }

    pub fn target(&self) -> &SetDiagram {
        &self.target
    }

    pub fn component(&self, o: ObjId) -> &FinFunction {
        &self.components[o.0]
    }

    pub fn components(&self) -> &[FinFunction] {
        &self.components
    }

    /// `self . other`
    pub fn after(&self, other: &SetTransformation) -> Result<SetTransformation, SetError> {
        if other.target != self.source {
            return Err(SetError::ShapeMismatch("transformations are not composable".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(g, f)| g.after(f))
            .collect::<Result<_, _>>()?;
        Ok(SetTransformation {
            source: other.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    /// `self F`, a transformation between the restricted diagrams.
    pub fn whisker(&self, f: &FinFunctor) -> Result<SetTransformation, SetError> {
        let source = restrict(&self.source, f)?;
        let target = restrict(&self.target, f)?;
        let components = f.source().objects().map(|o| self.components[f.obj(o).0].clone()).collect();
        Ok(SetTransformation {
            source,
            target,
            components,
        })
    }
}

/// Every natural transformation `x => y` (exhaustive, desk scale only).
pub fn enumerate_set_transformations(x: &SetDiagram, y: &SetDiagram) -> Vec<SetTransformation> {
    let shape = x.shape().clone();
    // one slot per (object, element)
    let slots: Vec<(ObjId, usize)> = shape
        .objects()
        .flat_map(|o| (0..x.set(o).len()).map(move |e| (o, e)))
        .collect();
    let mut assign: Vec<Vec<usize>> = shape.objects().map(|o| vec![usize::MAX; x.set(o).len()]).collect();
    let mut out = Vec::new();
    fn go(
        k: usize,
        slots: &[(ObjId, usize)],
        shape: &FinCategory,
        x: &SetDiagram,
        y: &SetDiagram,
        assign: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if k == slots.len() {
            out.push(assign.clone());
            return;
        }
        let (o, e) = slots[k];
        for v in 0..y.set(o).len() {
            assign[o.0][e] = v;
            let ok = shape.outgoing(o).iter().all(|&m| {
                let b = shape.cod(m);
                let xe = x.apply(m, e);
                let w = assign[b.0][xe];
                w == usize::MAX || w == y.apply(m, v)
            }) && shape.incoming(o).iter().all(|&m| {
                let a = shape.dom(m);
                (0..x.set(a).len()).all(|e2| {
                    if x.apply(m, e2) != e {
                        return true;
                    }
                    let w = assign[a.0][e2];
                    w == usize::MAX || y.apply(m, w) == v
                })
            });
            if ok {
                go(k + 1, slots, shape, x, y, assign, out);
            }
        }
        assign[o.0][e] = usize::MAX;
    }
    let mut raw = Vec::new();
    go(0, &slots, &shape, x, y, &mut assign, &mut raw);
    for comps in raw {
        let components = shape
            .objects()
            .map(|o| FinFunction::new(x.set(o).clone(), y.set(o).clone(), comps[o.0].clone()).unwrap())
            .collect();
        out.push(SetTransformation::new(x.clone(), y.clone(), components).expect("search yields natural families"));
    }
    out
}
