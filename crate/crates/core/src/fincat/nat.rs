use thiserror::Error;

use super::category::{MorId, ObjId};
use super::functor::{compose_functor, same_category, FinFunctor, FunctorError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NatError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("component at {object} has the wrong endpoints")]
    WrongComponent { object: String },
    #[error("naturality square fails at {morphism}")]
    NotNatural { morphism: String },
}

impl From<FunctorError> for NatError {
    fn from(e: FunctorError) -> Self {
        NatError::ShapeMismatch(e.to_string())
    }
}

/// A natural transformation between parallel functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransformation {
    from: FinFunctor,
    to: FinFunctor,
    components: Vec<MorId>,
}

impl NatTransformation {
    pub fn new(from: FinFunctor, to: FinFunctor, components: Vec<MorId>) -> Result<Self, NatError> {
        if !same_category(from.source(), to.source()) || !same_category(from.target(), to.target()) {
            return Err(NatError::ShapeMismatch("functors are not parallel".into()));
        }
        if components.len() != from.source().object_count() {
            return Err(NatError::ShapeMismatch("one component per object expected".into()));
        }
        let t = from.target().clone();
        let s = from.source().clone();
        for o in s.objects() {
            let c = components[o.0];
            if c.0 >= t.morphism_count() || t.dom(c) != from.obj(o) || t.cod(c) != to.obj(o) {
                return Err(NatError::WrongComponent {
                    object: s.obj_name(o).to_string(),
                });
            }
        }
        for m in s.morphisms() {
            let (a, b) = (s.dom(m), s.cod(m));
            if t.comp(to.mor(m), components[a.0]) != t.comp(components[b.0], from.mor(m)) {
                return Err(NatError::NotNatural {
                    morphism: s.mor_name(m).to_string(),
                });
            }
        }
        Ok(NatTransformation { from, to, components })
    }

    pub fn identity(f: &FinFunctor) -> NatTransformation {
        let t = f.target();
        let components = f.source().objects().map(|o| t.identity(f.obj(o))).collect();
        NatTransformation {
            from: f.clone(),
            to: f.clone(),
            components,
        }
    }

    pub fn from_functor(&self) -> &FinFunctor {
        &self.from
    }

    pub fn to_functor(&self) -> &FinFunctor {
        &self.to
    }

    pub fn component(&self, o: ObjId) -> MorId {
        self.components[o.0]
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.from == self.to && self.components.iter().all(|&c| self.from.target().is_identity(c))
    }
}

/// `beta . alpha` (vertical composite).
pub fn nat_vertical(beta: &NatTransformation, alpha: &NatTransformation) -> Result<NatTransformation, NatError> {
    if alpha.to != beta.from {
        return Err(NatError::ShapeMismatch("codomain of alpha is not the domain of beta".into()));
    }
    let t = alpha.from.target();
    let components = alpha
        .from
        .source()
        .objects()
        .map(|o| t.comp(beta.component(o), alpha.component(o)))
        .collect();
    Ok(NatTransformation {
        from: alpha.from.clone(),
        to: beta.to.clone(),
        components,
    })
}

/// `H alpha`
pub fn nat_whisker_left(h: &FinFunctor, alpha: &NatTransformation) -> Result<NatTransformation, NatError> {
    let from = compose_functor(h, &alpha.from)?;
    let to = compose_functor(h, &alpha.to)?;
    let components = alpha.components.iter().map(|&c| h.mor(c)).collect();
    Ok(NatTransformation { from, to, components })
}

/// `alpha H`
pub fn nat_whisker_right(alpha: &NatTransformation, h: &FinFunctor) -> Result<NatTransformation, NatError> {
    let from = compose_functor(&alpha.from, h)?;
    let to = compose_functor(&alpha.to, h)?;
    let components = h.source().objects().map(|o| alpha.component(h.obj(o))).collect();
    Ok(NatTransformation { from, to, components })
}

/// Horizontal composite `beta * alpha : G F => G' F'`.
pub fn nat_horizontal(beta: &NatTransformation, alpha: &NatTransformation) -> Result<NatTransformation, NatError> {
    let left = nat_whisker_right(beta, &alpha.from)?;
    let right = nat_whisker_left(&beta.to, alpha)?;
    nat_vertical(&right, &left)
}
