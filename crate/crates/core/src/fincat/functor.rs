use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use super::category::{FinCategory, MorId, ObjId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("functor data incomplete: {0}")]
    Incomplete(String),
    #[error("dangling token `{0}`")]
    DanglingToken(String),
    #[error("morphism {morphism} is sent to {image} with the wrong endpoints")]
    WrongEndpoints { morphism: String, image: String },
    #[error("identity of {object} is not preserved")]
    IdentityNotPreserved { object: String },
    #[error("composite {g} . {f} is not preserved")]
    CompositionNotPreserved { g: String, f: String },
}

/// A functor between finite categories, given on objects and morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    objects: Vec<ObjId>,
    morphisms: Vec<MorId>,
}

pub(crate) fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FinFunctor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Result<FinFunctor, FunctorError> {
        if objects.len() != source.object_count() || morphisms.len() != source.morphism_count() {
            return Err(FunctorError::Incomplete(format!(
                "expected {} object and {} morphism images",
                source.object_count(),
                source.morphism_count()
            )));
        }
        if objects.iter().any(|o| o.0 >= target.object_count())
            || morphisms.iter().any(|m| m.0 >= target.morphism_count())
        {
            return Err(FunctorError::Incomplete("image out of range".into()));
        }
        let f = FinFunctor {
            source,
            target,
            objects,
            morphisms,
        };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<(), FunctorError> {
        let (s, t) = (&*self.source, &*self.target);
        for m in s.morphisms() {
            let im = self.morphisms[m.0];
            if t.dom(im) != self.objects[s.dom(m).0] || t.cod(im) != self.objects[s.cod(m).0] {
                return Err(FunctorError::WrongEndpoints {
                    morphism: s.mor_name(m).to_string(),
                    image: t.mor_name(im).to_string(),
                });
            }
        }
        for o in s.objects() {
            if self.morphisms[s.identity(o).0] != t.identity(self.objects[o.0]) {
                return Err(FunctorError::IdentityNotPreserved {
                    object: s.obj_name(o).to_string(),
                });
            }
        }
        for f in s.morphisms() {
            for &g in s.outgoing(s.cod(f)) {
                let gf = s.comp(g, f);
                if t.comp(self.morphisms[g.0], self.morphisms[f.0]) != self.morphisms[gf.0] {
                    return Err(FunctorError::CompositionNotPreserved {
                        g: s.mor_name(g).to_string(),
                        f: s.mor_name(f).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Builds a functor from token maps. Identities may be omitted.
    pub fn from_names(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: &HashMap<String, String>,
        morphisms: &HashMap<String, String>,
    ) -> Result<FinFunctor, FunctorError> {
        let mut obj_map = Vec::with_capacity(source.object_count());
        for o in source.objects() {
            let name = source.obj_name(o);
            let img = objects
                .get(name)
                .ok_or_else(|| FunctorError::Incomplete(format!("object {name} has no image")))?;
            obj_map.push(
                target
                    .object(img)
                    .ok_or_else(|| FunctorError::DanglingToken(img.clone()))?,
            );
        }
        for k in objects.keys() {
            if source.object(k).is_none() {
                return Err(FunctorError::DanglingToken(k.clone()));
            }
        }
        let mut mor_map = Vec::with_capacity(source.morphism_count());
        for m in source.morphisms() {
            let name = source.mor_name(m);
            match morphisms.get(name) {
                Some(img) => mor_map.push(
                    target
                        .morphism(img)
                        .ok_or_else(|| FunctorError::DanglingToken(img.clone()))?,
                ),
                None if source.is_identity(m) => mor_map.push(target.identity(obj_map[source.dom(m).0])),
                None => return Err(FunctorError::Incomplete(format!("morphism {name} has no image"))),
            }
        }
        for k in morphisms.keys() {
            if source.morphism(k).is_none() {
                return Err(FunctorError::DanglingToken(k.clone()));
            }
        }
        FinFunctor::new(source, target, obj_map, mor_map)
    }

    pub fn identity(c: &Arc<FinCategory>) -> FinFunctor {
        FinFunctor {
            source: c.clone(),
            target: c.clone(),
            objects: c.objects().collect(),
            morphisms: c.morphisms().collect(),
        }
    }

    /// The functor sending everything to `obj` and its identity.
    pub fn constant(source: &Arc<FinCategory>, target: &Arc<FinCategory>, obj: ObjId) -> FinFunctor {
        FinFunctor {
            source: source.clone(),
            target: target.clone(),
            objects: vec![obj; source.object_count()],
            morphisms: vec![target.identity(obj); source.morphism_count()],
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn obj(&self, o: ObjId) -> ObjId {
        self.objects[o.0]
    }

    pub fn mor(&self, m: MorId) -> MorId {
        self.morphisms[m.0]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn morphism_map(&self) -> &[MorId] {
        &self.morphisms
    }

    /// `self . f`
    pub fn after(&self, f: &FinFunctor) -> Result<FinFunctor, FunctorError> {
        compose_functor(self, f)
    }

    pub fn opposite(&self) -> FinFunctor {
        FinFunctor {
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
        }
    }

    /// Same maps, reinterpreted against equal categories held elsewhere.
    pub fn retarget(&self, source: &Arc<FinCategory>, target: &Arc<FinCategory>) -> Result<FinFunctor, FunctorError> {
        if !same_category(source, &self.source) || !same_category(target, &self.target) {
            return Err(FunctorError::ShapeMismatch("retarget to a different category".into()));
        }
        Ok(FinFunctor {
            source: source.clone(),
            target: target.clone(),
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
        })
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = vec![false; self.target.object_count()];
        self.objects.iter().all(|o| !std::mem::replace(&mut seen[o.0], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.source.object_count() == self.target.object_count()
            && self.source.morphism_count() == self.target.morphism_count()
            && self.is_injective_on_objects()
            && {
                let mut seen = vec![false; self.target.morphism_count()];
                self.morphisms.iter().all(|m| !std::mem::replace(&mut seen[m.0], true))
            }
    }

    pub(crate) fn from_parts_unchecked(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> FinFunctor {
        FinFunctor {
            source,
            target,
            objects,
            morphisms,
        }
    }
}

/// `G . F`
pub fn compose_functor(g: &FinFunctor, f: &FinFunctor) -> Result<FinFunctor, FunctorError> {
    if !same_category(&g.source, &f.target) {
        return Err(FunctorError::ShapeMismatch(
            "source of the outer functor differs from target of the inner one".into(),
        ));
    }
    Ok(FinFunctor {
        source: f.source.clone(),
        target: g.target.clone(),
        objects: f.objects.iter().map(|&o| g.obj(o)).collect(),
        morphisms: f.morphisms.iter().map(|&m| g.mor(m)).collect(),
    })
}
