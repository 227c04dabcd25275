//! Morphisms of the diagram categories `Diag°(X)` and `Diag_∘(X)`, the
//! embedding of `X` with its colimit reflection, strictification, duality,
//! and (co)limits of families of set-valued diagrams.
//!
//! Diagram categories are never materialised. A diagram is its own object:
//! a [`SetDiagram`] when the ambient is `FinSet`, a [`FinFunctor`] into a
//! finite ambient category otherwise.

use std::collections::{HashMap, HashSet};
use std::fmt::Debug;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::catcolim::{colimit_cat, mediator, CatColimError, CatColimitResult};
use crate::fincat::search::{enumerate_functors, enumerate_transformations};
use crate::fincat::{
    comma, nat_vertical, nat_whisker_left, nat_whisker_right, same_category, CommaCategory, FinCategory, FinFunctor,
    MorId, NatTransformation, ObjId,
};
use crate::finset::{
    colimit_set, limit_set, mediate, restrict, FinFunction, FinSet, SetCocone, SetCone, SetDiagram, SetTransformation,
};
use crate::fixtures;
use crate::grothendieck::{CatDiagram, DiagFamily, Variance};
use crate::kan::{joint_lan_factor, lan, ran_tables, JointKanData, KanError, KanResult};
use crate::report::VerificationReport;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagError {
    #[error("morphisms of different variants")]
    VariantMismatch,
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Colimit(#[from] CatColimError),
    #[error(transparent)]
    Kan(#[from] KanError),
}

fn mismatch(e: impl ToString) -> DiagError {
    DiagError::ShapeMismatch(e.to_string())
}

/// A diagram in some ambient category, with the natural transformations
/// between diagrams of one shape as cells.
pub trait Diagram: Clone + PartialEq + Debug {
    type Cell: Clone + PartialEq + Debug;

    fn shape(&self) -> &Arc<FinCategory>;
    /// `self . f`
    fn precompose(&self, f: &FinFunctor) -> Result<Self, DiagError>;
    fn identity_cell(&self) -> Self::Cell;
    fn cell_source(c: &Self::Cell) -> &Self;
    fn cell_target(c: &Self::Cell) -> &Self;
    /// `beta . alpha`
    fn vertical(beta: &Self::Cell, alpha: &Self::Cell) -> Result<Self::Cell, DiagError>;
    /// `c F`
    fn whisker(c: &Self::Cell, f: &FinFunctor) -> Result<Self::Cell, DiagError>;
    /// `self alpha: self F => self F'`
    fn apply(&self, alpha: &NatTransformation) -> Result<Self::Cell, DiagError>;
    /// The first object at which two parallel cells differ.
    fn cell_difference(a: &Self::Cell, b: &Self::Cell) -> Option<ObjId>;
}

impl Diagram for SetDiagram {
    type Cell = SetTransformation;

    fn shape(&self) -> &Arc<FinCategory> {
        SetDiagram::shape(self)
    }

    fn precompose(&self, f: &FinFunctor) -> Result<Self, DiagError> {
        restrict(self, f).map_err(mismatch)
    }

    fn identity_cell(&self) -> SetTransformation {
        SetTransformation::identity(self)
    }

    fn cell_source(c: &SetTransformation) -> &SetDiagram {
        c.source()
    }

    fn cell_target(c: &SetTransformation) -> &SetDiagram {
        c.target()
    }

    fn vertical(beta: &SetTransformation, alpha: &SetTransformation) -> Result<SetTransformation, DiagError> {
        beta.after(alpha).map_err(mismatch)
    }

    fn whisker(c: &SetTransformation, f: &FinFunctor) -> Result<SetTransformation, DiagError> {
        c.whisker(f).map_err(mismatch)
    }

    fn apply(&self, alpha: &NatTransformation) -> Result<SetTransformation, DiagError> {
        if !same_category(alpha.from_functor().target(), SetDiagram::shape(self)) {
            return Err(mismatch("transformation lands outside the diagram's shape"));
        }
        let source = restrict(self, alpha.from_functor()).map_err(mismatch)?;
        let target = restrict(self, alpha.to_functor()).map_err(mismatch)?;
        let components = alpha.components().iter().map(|&m| self.function(m)).collect();
        SetTransformation::new(source, target, components).map_err(mismatch)
    }

    fn cell_difference(a: &SetTransformation, b: &SetTransformation) -> Option<ObjId> {
        SetDiagram::shape(a.source())
            .objects()
            .find(|&o| a.component(o) != b.component(o))
    }
}

impl Diagram for FinFunctor {
    type Cell = NatTransformation;

    fn shape(&self) -> &Arc<FinCategory> {
        self.source()
    }

    fn precompose(&self, f: &FinFunctor) -> Result<Self, DiagError> {
        self.after(f).map_err(mismatch)
    }

    fn identity_cell(&self) -> NatTransformation {
        NatTransformation::identity(self)
    }

    fn cell_source(c: &NatTransformation) -> &FinFunctor {
        c.from_functor()
    }

    fn cell_target(c: &NatTransformation) -> &FinFunctor {
        c.to_functor()
    }

    fn vertical(beta: &NatTransformation, alpha: &NatTransformation) -> Result<NatTransformation, DiagError> {
        nat_vertical(beta, alpha).map_err(mismatch)
    }

    fn whisker(c: &NatTransformation, f: &FinFunctor) -> Result<NatTransformation, DiagError> {
        nat_whisker_right(c, f).map_err(mismatch)
    }

    fn apply(&self, alpha: &NatTransformation) -> Result<NatTransformation, DiagError> {
        nat_whisker_left(self, alpha).map_err(mismatch)
    }

    fn cell_difference(a: &NatTransformation, b: &NatTransformation) -> Option<ObjId> {
        a.from_functor()
            .source()
            .objects()
            .find(|&o| a.component(o) != b.component(o))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `Diag°`: `F: I -> J` with `phi: X => Y F`
    Forward,
    /// `Diag_∘`: `F: J -> I` with `phi: X F => Y`
    Backward,
}

impl Variant {
    pub fn flip(self) -> Variant {
        match self {
            Variant::Forward => Variant::Backward,
            Variant::Backward => Variant::Forward,
        }
    }
}

/// A morphism `(F, phi): X -> Y` of `Diag°` or `Diag_∘`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagMorphism<D: Diagram> {
    pub variant: Variant,
    pub source: D,
    pub target: D,
    pub functor: FinFunctor,
    pub phi: D::Cell,
}

impl<D: Diagram> DiagMorphism<D> {
    pub fn new(variant: Variant, source: D, target: D, functor: FinFunctor, phi: D::Cell) -> Result<Self, DiagError> {
        let (from, to) = match variant {
            Variant::Forward => (source.shape(), target.shape()),
            Variant::Backward => (target.shape(), source.shape()),
        };
        if !same_category(functor.source(), from) || !same_category(functor.target(), to) {
            return Err(DiagError::EndpointMismatch("functor part has the wrong endpoints".into()));
        }
        let (expected_source, expected_target) = match variant {
            Variant::Forward => (source.clone(), target.precompose(&functor)?),
            Variant::Backward => (source.precompose(&functor)?, target.clone()),
        };
        if D::cell_source(&phi) != &expected_source || D::cell_target(&phi) != &expected_target {
            return Err(DiagError::EndpointMismatch("transformation part has the wrong endpoints".into()));
        }
        Ok(DiagMorphism {
            variant,
            source,
            target,
            functor,
            phi,
        })
    }

    /// `(Id, 1)`
    pub fn identity(variant: Variant, x: &D) -> Self {
        DiagMorphism {
            variant,
            source: x.clone(),
            target: x.clone(),
            functor: FinFunctor::identity(x.shape()),
            phi: x.identity_cell(),
        }
    }
}

/// `m2 . m1`: `(GF, psi F . phi)` forward, `(FG, psi . phi G)` backward.
pub fn diag_compose<D: Diagram>(m2: &DiagMorphism<D>, m1: &DiagMorphism<D>) -> Result<DiagMorphism<D>, DiagError> {
    if m1.variant != m2.variant {
        return Err(DiagError::VariantMismatch);
    }
    if m1.target != m2.source {
        return Err(DiagError::EndpointMismatch("target of the first is not the source of the second".into()));
    }
    let (functor, phi) = match m1.variant {
        Variant::Forward => {
            let functor = m2.functor.after(&m1.functor).map_err(mismatch)?;
            let phi = D::vertical(&D::whisker(&m2.phi, &m1.functor)?, &m1.phi)?;
            (functor, phi)
        }
        Variant::Backward => {
            let functor = m1.functor.after(&m2.functor).map_err(mismatch)?;
            let phi = D::vertical(&m2.phi, &D::whisker(&m1.phi, &m2.functor)?)?;
            (functor, phi)
        }
    };
    DiagMorphism::new(m1.variant, m1.source.clone(), m2.target.clone(), functor, phi)
}

/// Checks that `alpha: F => F'` is a 2-cell `m => m'`: `Y alpha . phi = phi'`
/// forward, `phi' . X alpha = phi` backward.
pub fn verify_2cell<D: Diagram>(alpha: &NatTransformation, m: &DiagMorphism<D>, m2: &DiagMorphism<D>) -> VerificationReport {
    const CHECK: &str = "verify_2cell";
    if m.variant != m2.variant || m.source != m2.source || m.target != m2.target {
        return VerificationReport::invalid_input(CHECK, json!({"reason": "morphisms are not parallel"}));
    }
    if alpha.from_functor() != &m.functor || alpha.to_functor() != &m2.functor {
        return VerificationReport::invalid_input(CHECK, json!({"reason": "2-cell has the wrong endpoints"}));
    }
    let (lhs, rhs) = match m.variant {
        Variant::Forward => (
            m.target.apply(alpha).and_then(|ya| D::vertical(&ya, &m.phi)),
            Ok(m2.phi.clone()),
        ),
        Variant::Backward => (
            m.source.apply(alpha).and_then(|xa| D::vertical(&m2.phi, &xa)),
            Ok(m.phi.clone()),
        ),
    };
    let (lhs, rhs) = match (lhs, rhs) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => {
            return VerificationReport::invalid_input(CHECK, json!({"reason": e.to_string()}));
        }
    };
    match D::cell_difference(&lhs, &rhs) {
        None => VerificationReport::pass(CHECK),
        Some(o) => {
            let shape = D::cell_source(&lhs).shape();
            VerificationReport::fail(CHECK, json!({"object": shape.obj_name(o)}))
        }
    }
}

fn one() -> Arc<FinCategory> {
    Arc::new(fixtures::one())
}

/// `E(x)`: the set `x` as a diagram of shape ONE.
pub fn embed_set(x: &FinSet) -> SetDiagram {
    SetDiagram::constant(&one(), x)
}

/// `E(f) = (Id, f)` in the given variant.
pub fn embed_function(variant: Variant, f: &FinFunction) -> DiagMorphism<SetDiagram> {
    let (s, t) = (embed_set(f.source()), embed_set(f.target()));
    let phi = SetTransformation::new(s.clone(), t.clone(), vec![f.clone()]).expect("ONE has only the identity");
    DiagMorphism::new(variant, s, t, FinFunctor::identity(&one()), phi).expect("endpoints agree")
}

/// The object `x` of `c` as a functor `ONE -> c`.
pub fn embed_object(c: &Arc<FinCategory>, x: ObjId) -> FinFunctor {
    FinFunctor::constant(&one(), c, x)
}

/// `(Id, f)` between the embedded endpoints of `f`.
pub fn embed_morphism(variant: Variant, c: &Arc<FinCategory>, f: MorId) -> DiagMorphism<FinFunctor> {
    let (s, t) = (embed_object(c, c.dom(f)), embed_object(c, c.cod(f)));
    let phi = NatTransformation::new(s.clone(), t.clone(), vec![f]).expect("ONE has only the identity");
    DiagMorphism::new(variant, s, t, FinFunctor::identity(&one()), phi).expect("endpoints agree")
}

/// The unit `(!, legs): (I, X) -> E(colim X)` of the reflection.
#[derive(Clone, Debug)]
pub struct Reflection {
    pub cocone: SetCocone,
    pub unit: DiagMorphism<SetDiagram>,
}

pub fn reflect(x: &SetDiagram) -> Reflection {
    let cocone = colimit_set(x);
    let target = embed_set(&cocone.apex);
    let bang = FinFunctor::constant(x.shape(), &one(), ObjId(0));
    let phi = SetTransformation::new(x.clone(), restrict(&target, &bang).unwrap(), cocone.legs.clone())
        .expect("colimit legs form a cocone");
    let unit = DiagMorphism::new(Variant::Forward, x.clone(), target, bang, phi).expect("endpoints agree");
    Reflection { cocone, unit }
}

/// The function `h` with `E(h) . unit = m`, for forward `m: (I, X) -> E(y)`.
pub fn reflection_factor(r: &Reflection, m: &DiagMorphism<SetDiagram>) -> Result<FinFunction, DiagError> {
    if m.variant != Variant::Forward || m.source != r.unit.source || m.target.shape().object_count() != 1 {
        return Err(DiagError::EndpointMismatch("expected a forward morphism into an embedded set".into()));
    }
    let y = m.target.set(ObjId(0)).clone();
    let other = SetCocone::new(m.source.clone(), y, m.phi.components().to_vec()).map_err(mismatch)?;
    mediate(&r.cocone, &other).map_err(mismatch)
}

fn all_functions(s: &FinSet, t: &FinSet) -> Vec<FinFunction> {
    let mut out = Vec::new();
    if t.is_empty() && !s.is_empty() {
        return out;
    }
    let mut table = vec![0; s.len()];
    loop {
        out.push(FinFunction::new(s.clone(), t.clone(), table.clone()).unwrap());
        let mut k = 0;
        loop {
            if k == table.len() {
                return out;
            }
            table[k] += 1;
            if table[k] < t.len() {
                break;
            }
            table[k] = 0;
            k += 1;
        }
    }
}

/// Every forward morphism `(I, X) -> E(y)` factors through the unit by
/// exactly one function, counted over all functions `colim X -> y`.
pub fn certify_reflection(x: &SetDiagram, y: &FinSet) -> VerificationReport {
    const CHECK: &str = "certify_reflection";
    let r = reflect(x);
    let ey = embed_set(y);
    let bang = FinFunctor::constant(x.shape(), &one(), ObjId(0));
    let constant = restrict(&ey, &bang).unwrap();
    let candidates = all_functions(&r.cocone.apex, y);
    let mut morphisms = 0;
    for phi in crate::finset::enumerate_set_transformations(x, &constant) {
        morphisms += 1;
        let m = DiagMorphism::new(Variant::Forward, x.clone(), ey.clone(), bang.clone(), phi).unwrap();
        let hits = candidates
            .iter()
            .filter(|h| diag_compose(&embed_function(Variant::Forward, h), &r.unit).as_ref() == Ok(&m))
            .count();
        if hits != 1 {
            return VerificationReport::fail(
                CHECK,
                json!({"factorizations": hits, "legs": m.phi.components().iter().map(|f| f.mapping().to_vec()).collect::<Vec<_>>()}),
            );
        }
    }
    VerificationReport::pass(CHECK)
        .with_stat("morphisms", morphisms)
        .with_stat("functions", candidates.len())
}

/// Reverses the variant and dualises every part: a morphism of `Diag_∘(X)`
/// becomes one of `Diag°(X^op)` in the opposite direction, and back.
pub fn dualize(m: &DiagMorphism<FinFunctor>) -> DiagMorphism<FinFunctor> {
    let source = m.target.opposite();
    let target = m.source.opposite();
    let functor = m.functor.opposite();
    let (from, to) = match m.variant {
        // phi: X F => Y becomes Y^op => X^op F^op
        Variant::Backward => (source.clone(), target.after(&functor).unwrap()),
        // phi: X => Y F becomes Y^op F^op => X^op
        Variant::Forward => (source.after(&functor).unwrap(), target.clone()),
    };
    let phi = NatTransformation::new(from, to, m.phi.components().to_vec()).expect("dual of a natural transformation");
    DiagMorphism::new(m.variant.flip(), source, target, functor, phi).expect("dual endpoints agree")
}

/// `Strict(X) = X | X` over the ambient, with the domain functor as `left`.
pub fn strict_object(x: &FinFunctor) -> CommaCategory {
    comma(&FinFunctor::identity(x.target()), x).expect("same ambient")
}

#[derive(Clone, Debug)]
pub struct Strictification {
    pub source: CommaCategory,
    pub target: CommaCategory,
    /// `(u: a -> X i, i) |-> (phi_i . u, F i)`
    pub functor: FinFunctor,
}

fn comma_morphism(c: &CommaCategory) -> HashMap<(ObjId, ObjId, MorId, MorId), MorId> {
    let k = &c.category;
    k.morphisms()
        .map(|m| {
            let (g, h) = c.pairs[m.0];
            ((k.dom(m), k.cod(m), g, h), m)
        })
        .collect()
}

/// `Strict(F, phi)` for a forward morphism over a finite ambient.
pub fn strictify(m: &DiagMorphism<FinFunctor>) -> Result<Strictification, DiagError> {
    if m.variant != Variant::Forward {
        return Err(DiagError::VariantMismatch);
    }
    let ambient = m.source.target();
    if !same_category(ambient, m.target.target()) {
        return Err(DiagError::EndpointMismatch("diagrams in different ambient categories".into()));
    }
    let source = strict_object(&m.source);
    let target = strict_object(&m.target);
    let on_objects: Vec<ObjId> = source
        .triples
        .iter()
        .map(|&(a, i, u)| {
            let fi = m.functor.obj(i);
            target
                .find_object(a, fi, ambient.comp(m.phi.component(i), u))
                .expect("image is a comma object")
        })
        .collect();
    let lookup = comma_morphism(&target);
    let sc = &source.category;
    let on_morphisms = sc
        .morphisms()
        .map(|f| {
            let (g, h) = source.pairs[f.0];
            lookup[&(on_objects[sc.dom(f).0], on_objects[sc.cod(f).0], g, m.functor.mor(h))]
        })
        .collect();
    let functor = FinFunctor::new(sc.clone(), target.category.clone(), on_objects, on_morphisms).map_err(mismatch)?;
    Ok(Strictification {
        source,
        target,
        functor,
    })
}

/// The functor `I -> Strict(Y)` over the ambient corresponding to a forward
/// morphism `(F, phi): X -> Y`: `i |-> (phi_i: X i -> Y F i, F i)`.
pub fn strict_transpose(m: &DiagMorphism<FinFunctor>, strict_y: &CommaCategory) -> Result<FinFunctor, DiagError> {
    if m.variant != Variant::Forward {
        return Err(DiagError::VariantMismatch);
    }
    let i_cat = m.source.source();
    let on_objects: Vec<ObjId> = i_cat
        .objects()
        .map(|i| {
            strict_y
                .find_object(m.source.obj(i), m.functor.obj(i), m.phi.component(i))
                .ok_or_else(|| DiagError::EndpointMismatch("Strict(Y) is not built on the target".into()))
        })
        .collect::<Result<_, _>>()?;
    let lookup = comma_morphism(strict_y);
    let on_morphisms = i_cat
        .morphisms()
        .map(|h| {
            let (a, b) = (on_objects[i_cat.dom(h).0], on_objects[i_cat.cod(h).0]);
            lookup
                .get(&(a, b, m.source.mor(h), m.functor.mor(h)))
                .copied()
                .ok_or_else(|| DiagError::EndpointMismatch("no comma morphism over the image".into()))
        })
        .collect::<Result<_, _>>()?;
    FinFunctor::new(i_cat.clone(), strict_y.category.clone(), on_objects, on_morphisms).map_err(mismatch)
}

/// The forward morphism `X -> Y` read off a functor `G: I -> Strict(Y)` with
/// `dom . G = X`: `F = cod . G` and `phi_i` the arrow of `G i`.
pub fn strict_untranspose(
    x: &FinFunctor,
    y: &FinFunctor,
    strict_y: &CommaCategory,
    g: &FinFunctor,
) -> Result<DiagMorphism<FinFunctor>, DiagError> {
    if strict_y.left.after(g).map_err(mismatch)? != *x {
        return Err(DiagError::EndpointMismatch("functor does not lie over the source diagram".into()));
    }
    let functor = strict_y.right.after(g).map_err(mismatch)?.retarget(x.source(), y.source()).map_err(mismatch)?;
    let components = x.source().objects().map(|i| strict_y.triples[g.obj(i).0].2).collect();
    let phi = NatTransformation::new(x.clone(), y.after(&functor).map_err(mismatch)?, components).map_err(mismatch)?;
    DiagMorphism::new(Variant::Forward, x.clone(), y.clone(), functor, phi)
}

/// Enumerates `(Cat/X)(X, dom_Y)` and `Diag°(X)(X, Y)`, checks that the two
/// transpositions are mutually inverse on every element and that the sets
/// have the same size.
pub fn strict_bijection(x: &FinFunctor, y: &FinFunctor, limit: usize) -> VerificationReport {
    const CHECK: &str = "strict_bijection";
    if !same_category(x.target(), y.target()) {
        return VerificationReport::invalid_input(CHECK, json!({"reason": "diagrams in different ambient categories"}));
    }
    let strict_y = strict_object(y);
    let mut diag_side = Vec::new();
    for f in enumerate_functors(x.source(), y.source(), limit) {
        let yf = y.after(&f).unwrap();
        for phi in enumerate_transformations(x, &yf) {
            diag_side.push(DiagMorphism::new(Variant::Forward, x.clone(), y.clone(), f.clone(), phi).unwrap());
        }
    }
    let slice_side: Vec<FinFunctor> = enumerate_functors(x.source(), &strict_y.category, limit)
        .into_iter()
        .filter(|g| strict_y.left.after(g).map(|d| d == *x).unwrap_or(false))
        .collect();
    for (k, m) in diag_side.iter().enumerate() {
        let back = strict_transpose(m, &strict_y).and_then(|g| strict_untranspose(x, y, &strict_y, &g));
        if back.as_ref() != Ok(m) {
            return VerificationReport::fail(CHECK, json!({"direction": "diag", "index": k}));
        }
    }
    for (k, g) in slice_side.iter().enumerate() {
        let back = strict_untranspose(x, y, &strict_y, g).and_then(|m| strict_transpose(&m, &strict_y));
        if back.as_ref() != Ok(g) {
            return VerificationReport::fail(CHECK, json!({"direction": "slice", "index": k}));
        }
    }
    if diag_side.len() != slice_side.len() {
        return VerificationReport::fail(CHECK, json!({"diag": diag_side.len(), "slice": slice_side.len()}));
    }
    VerificationReport::pass(CHECK).with_stat("morphisms", diag_side.len())
}

/// The forward morphism `(Phi u, phi^u): X_d -> X_e` of a family.
pub fn family_morphism(t: &DiagFamily, u: MorId) -> DiagMorphism<SetDiagram> {
    let shape = t.shape();
    DiagMorphism::new(
        Variant::Forward,
        t.diagram(shape.dom(u)).clone(),
        t.diagram(shape.cod(u)).clone(),
        t.transition(u).clone(),
        t.phi(u).clone(),
    )
    .expect("validated family")
}

/// The colimit `(K, X)` of a family in `Diag°(FinSet)`.
#[derive(Clone, Debug)]
pub struct DiagColimit {
    pub shapes: CatColimitResult,
    /// `Lan_{K_d} X_d` with unit `kappa_d`
    pub extensions: Vec<KanResult>,
    /// `L_u: L_d => L_e`
    pub transitions: Vec<SetTransformation>,
    /// one colimit per object of `K`
    pub pointwise: Vec<SetCocone>,
    pub x: SetDiagram,
    /// `lambda_d: L_d => X`
    pub lambda: Vec<SetTransformation>,
    /// `(K_d, lambda_d K_d . kappa_d)`
    pub injections: Vec<DiagMorphism<SetDiagram>>,
    pub joint: JointKanData,
}

impl DiagColimit {
    pub fn k(&self) -> &Arc<FinCategory> {
        &self.shapes.colimit
    }
}

fn unit_transformation(f: &FinFunctor, x: &SetDiagram, r: &KanResult) -> SetTransformation {
    SetTransformation::new(x.clone(), restrict(&r.extension, f).unwrap(), r.unit_or_counit.clone())
        .expect("Kan unit is natural")
}

/// `colim^D` of a `K`-indexed family of functors, computed pointwise.
fn pointwise_colimit(
    k: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    diagrams: &[SetDiagram],
    transitions: &[SetTransformation],
) -> (Vec<SetCocone>, SetDiagram, Vec<SetTransformation>) {
    let cocones: Vec<SetCocone> = k
        .objects()
        .map(|o| {
            let sets = d.objects().map(|e| diagrams[e.0].set(o).clone()).collect();
            let maps = d.morphisms().map(|u| transitions[u.0].component(o).mapping().to_vec()).collect();
            colimit_set(&SetDiagram::new(d.clone(), sets, maps).expect("transitions are natural"))
        })
        .collect();
    let sets: Vec<FinSet> = cocones.iter().map(|c| c.apex.clone()).collect();
    let maps = k
        .morphisms()
        .map(|m| {
            let (a, b) = (k.dom(m), k.cod(m));
            let mut table = vec![usize::MAX; sets[a.0].len()];
            for e in d.objects() {
                for z in 0..diagrams[e.0].set(a).len() {
                    table[cocones[a.0].legs[e.0].apply(z)] = cocones[b.0].legs[e.0].apply(diagrams[e.0].apply(m, z));
                }
            }
            table
        })
        .collect();
    let x = SetDiagram::new(k.clone(), sets, maps).expect("pointwise colimit is a functor");
    let lambda = d
        .objects()
        .map(|e| {
            let comps = k.objects().map(|o| cocones[o.0].legs[e.0].clone()).collect();
            SetTransformation::new(diagrams[e.0].clone(), x.clone(), comps).expect("colimit legs are natural")
        })
        .collect();
    (cocones, x, lambda)
}

/// `K = colim Phi`, `L_d = Lan_{K_d} X_d`, `X = colim_d L_d` pointwise, with
/// injections `(K_d, lambda_d K_d . kappa_d)`.
pub fn colimit_in_diag(t: &DiagFamily, bound: usize) -> Result<DiagColimit, DiagError> {
    let d = t.shape().clone();
    let shapes = colimit_cat(&t.cat_diagram(), bound)?;
    let k = shapes.colimit.clone();
    let extensions: Vec<KanResult> = d
        .objects()
        .map(|o| lan(shapes.leg(o), t.diagram(o)))
        .collect::<Result<_, _>>()?;
    let units: Vec<SetTransformation> = d
        .objects()
        .map(|o| unit_transformation(shapes.leg(o), t.diagram(o), &extensions[o.0]))
        .collect();
    let transitions = d
        .morphisms()
        .map(|u| {
            let (a, b) = (d.dom(u), d.cod(u));
            let ka = shapes.leg(a);
            let data = JointKanData::single(ka, t.diagram(a), &extensions[a.0])?;
            // kappa_e Phi u . phi^u
            let via = units[b.0].whisker(t.transition(u)).map_err(mismatch)?;
            let mu = via.after(t.phi(u)).map_err(mismatch)?;
            let mu = SetTransformation::new(
                mu.source().clone(),
                restrict(&extensions[b.0].extension, ka).map_err(mismatch)?,
                mu.components().to_vec(),
            )
            .map_err(mismatch)?;
            Ok(joint_lan_factor(&data, &extensions[b.0].extension, &[mu])?.beta)
        })
        .collect::<Result<Vec<_>, DiagError>>()?;
    let ls: Vec<SetDiagram> = extensions.iter().map(|e| e.extension.clone()).collect();
    let (pointwise, x, lambda) = pointwise_colimit(&k, &d, &ls, &transitions);
    let mut injections = Vec::with_capacity(d.object_count());
    let mut inj_cells = Vec::with_capacity(d.object_count());
    for o in d.objects() {
        let leg = shapes.leg(o).clone();
        let cell = lambda[o.0].whisker(&leg).map_err(mismatch)?.after(&units[o.0]).map_err(mismatch)?;
        inj_cells.push(cell.clone());
        injections.push(DiagMorphism::new(Variant::Forward, t.diagram(o).clone(), x.clone(), leg, cell)?);
    }
    let joint = JointKanData {
        d_shape: d.clone(),
        transitions: t.transitions().to_vec(),
        family: t.diagrams().to_vec(),
        phi: t.phis().to_vec(),
        k: k.clone(),
        legs: shapes.cocone.clone(),
        x: x.clone(),
        injections: inj_cells,
    };
    Ok(DiagColimit {
        shapes,
        extensions,
        transitions,
        pointwise,
        x,
        lambda,
        injections,
        joint,
    })
}

/// The mediating morphism `(H, beta): (K, X) -> (J, Y)` of a cocone
/// `(G_d, psi_d)` under the family.
pub fn diag_colimit_mediator(
    c: &DiagColimit,
    cocone: &[DiagMorphism<SetDiagram>],
) -> Result<DiagMorphism<SetDiagram>, DiagError> {
    let Some(first) = cocone.first() else {
        return Err(DiagError::ShapeMismatch("empty cocone".into()));
    };
    let y = first.target.clone();
    let j = y.shape().clone();
    let legs: Vec<FinFunctor> = cocone.iter().map(|m| m.functor.clone()).collect();
    let h = mediator(&c.shapes, &j, &legs).map_err(DiagError::ShapeMismatch)?;
    let yh = restrict(&y, &h).map_err(mismatch)?;
    let mu = cocone
        .iter()
        .enumerate()
        .map(|(o, m)| {
            let expected = restrict(&yh, c.shapes.leg(ObjId(o))).map_err(mismatch)?;
            SetTransformation::new(m.source.clone(), expected, m.phi.components().to_vec()).map_err(mismatch)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let beta = joint_lan_factor(&c.joint, &yh, &mu)?.beta;
    DiagMorphism::new(Variant::Forward, c.x.clone(), y, h, beta)
}

type MorphismKey = (Vec<ObjId>, Vec<MorId>, Vec<Vec<usize>>);

fn set_key(m: &DiagMorphism<SetDiagram>) -> MorphismKey {
    (
        m.functor.object_map().to_vec(),
        m.functor.morphism_map().to_vec(),
        m.phi.components().iter().map(|f| f.mapping().to_vec()).collect(),
    )
}

/// All compatible choices of one element per index, by backtracking.
fn compatible_families<T: Clone>(
    n: usize,
    candidates: &[Vec<T>],
    compatible: &dyn Fn(&[Option<T>], usize) -> bool,
) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut chosen: Vec<Option<T>> = vec![None; n];
    fn go<T: Clone>(
        k: usize,
        candidates: &[Vec<T>],
        compatible: &dyn Fn(&[Option<T>], usize) -> bool,
        chosen: &mut Vec<Option<T>>,
        out: &mut Vec<Vec<T>>,
    ) {
        if k == chosen.len() {
            out.push(chosen.iter().map(|c| c.clone().unwrap()).collect());
            return;
        }
        for c in &candidates[k] {
            chosen[k] = Some(c.clone());
            if compatible(chosen, k) {
                go(k + 1, candidates, compatible, chosen, out);
            }
        }
        chosen[k] = None;
    }
    go(0, candidates, compatible, &mut chosen, &mut out);
    out
}

/// Exhaustive check of the colimit property against one target `(J, Y)`:
/// composing with the injections is a bijection from morphisms
/// `(K, X) -> (J, Y)` onto cocones, the latter enumerated independently.
pub fn certify_diag_colimit(t: &DiagFamily, c: &DiagColimit, y: &SetDiagram, limit: usize) -> VerificationReport {
    const CHECK: &str = "certify_diag_colimit";
    let d = t.shape();
    let j = y.shape();
    let functors: Vec<Vec<FinFunctor>> = d
        .objects()
        .map(|o| enumerate_functors(t.diagram(o).shape(), j, limit))
        .collect();
    let shape_compatible = |chosen: &[Option<FinFunctor>], k: usize| {
        d.morphisms().all(|u| {
            let (a, b) = (d.dom(u), d.cod(u));
            if a.0 > k || b.0 > k {
                return true;
            }
            let (ga, gb) = (chosen[a.0].as_ref().unwrap(), chosen[b.0].as_ref().unwrap());
            gb.after(t.transition(u)).map(|x| x == *ga).unwrap_or(false)
        })
    };
    let mut cocones: HashSet<Vec<MorphismKey>> = HashSet::new();
    for legs in compatible_families(d.object_count(), &functors, &shape_compatible) {
        let cells: Vec<Vec<SetTransformation>> = d
            .objects()
            .map(|o| crate::finset::enumerate_set_transformations(t.diagram(o), &restrict(y, &legs[o.0]).unwrap()))
            .collect();
        let cell_compatible = |chosen: &[Option<SetTransformation>], k: usize| {
            d.morphisms().all(|u| {
                let (a, b) = (d.dom(u), d.cod(u));
                if a.0 > k || b.0 > k {
                    return true;
                }
                let (pa, pb) = (chosen[a.0].as_ref().unwrap(), chosen[b.0].as_ref().unwrap());
                let xa = t.diagram(a);
                xa.shape().objects().all(|i| {
                    (0..xa.set(i).len()).all(|e| {
                        let via = pb.component(t.transition(u).obj(i)).apply(t.phi(u).component(i).apply(e));
                        via == pa.component(i).apply(e)
                    })
                })
            })
        };
        for psi in compatible_families(d.object_count(), &cells, &cell_compatible) {
            let key = d
                .objects()
                .map(|o| {
                    (
                        legs[o.0].object_map().to_vec(),
                        legs[o.0].morphism_map().to_vec(),
                        psi[o.0].components().iter().map(|f| f.mapping().to_vec()).collect(),
                    )
                })
                .collect();
            cocones.insert(key);
        }
    }
    let mut hit: HashSet<Vec<MorphismKey>> = HashSet::new();
    let mut morphisms = 0usize;
    for h in enumerate_functors(c.k(), j, limit) {
        let yh = restrict(y, &h).unwrap();
        for beta in crate::finset::enumerate_set_transformations(&c.x, &yh) {
            morphisms += 1;
            let m = DiagMorphism::new(Variant::Forward, c.x.clone(), y.clone(), h.clone(), beta).unwrap();
            let key: Vec<MorphismKey> = c
                .injections
                .iter()
                .map(|inj| set_key(&diag_compose(&m, inj).expect("composable")))
                .collect();
            if !cocones.contains(&key) {
                return VerificationReport::fail(CHECK, json!({"error": "NotACocone", "morphism": morphisms - 1}));
            }
            if !hit.insert(key) {
                return VerificationReport::fail(CHECK, json!({"error": "NotUnique", "morphism": morphisms - 1}));
            }
        }
    }
    if hit.len() != cocones.len() {
        return VerificationReport::fail(
            CHECK,
            json!({"error": "NoMediator", "cocones": cocones.len(), "factored": hit.len()}),
        );
    }
    VerificationReport::pass(CHECK)
        .with_stat("cocones", cocones.len())
        .with_stat("morphisms", morphisms)
}

/// A `D`-indexed family of set diagrams with `Phi u: Phi e -> Phi d` and
/// `phi^u: X_d . Phi u => X_e`, i.e. a functor `D -> Diag_∘(FinSet)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackwardFamily {
    shape: Arc<FinCategory>,
    diagrams: Vec<SetDiagram>,
    transitions: Vec<FinFunctor>,
    phi: Vec<SetTransformation>,
}

impl BackwardFamily {
    pub fn new(
        shape: Arc<FinCategory>,
        diagrams: Vec<SetDiagram>,
        transitions: Vec<FinFunctor>,
        phi: Vec<SetTransformation>,
    ) -> Result<BackwardFamily, DiagError> {
        if diagrams.len() != shape.object_count()
            || transitions.len() != shape.morphism_count()
            || phi.len() != shape.morphism_count()
        {
            return Err(mismatch("one diagram per object and one morphism per arrow"));
        }
        let fibres: Vec<Arc<FinCategory>> = diagrams.iter().map(|x| x.shape().clone()).collect();
        CatDiagram::new(shape.clone(), fibres.clone(), transitions.clone(), Variance::Contravariant)
            .map_err(mismatch)?;
        for u in shape.morphisms() {
            let (a, b) = (shape.dom(u), shape.cod(u));
            let expected = restrict(&diagrams[a.0], &transitions[u.0]).map_err(mismatch)?;
            if phi[u.0].source() != &expected || phi[u.0].target() != &diagrams[b.0] {
                return Err(DiagError::EndpointMismatch(format!(
                    "transformation for {} has the wrong endpoints",
                    shape.mor_name(u)
                )));
            }
        }
        for a in shape.objects() {
            if !phi[shape.identity(a).0].components().iter().all(FinFunction::is_identity) {
                return Err(mismatch(format!(
                    "transformation at the identity of {} is not an identity",
                    shape.obj_name(a)
                )));
            }
        }
        // phi^{vu}_x = phi^v_x . phi^u_{(Phi v) x}
        for u in shape.morphisms() {
            for &v in shape.outgoing(shape.cod(u)) {
                let vu = shape.comp(v, u);
                for x in fibres[shape.cod(v).0].objects() {
                    let composite = phi[v.0]
                        .component(x)
                        .after(phi[u.0].component(transitions[v.0].obj(x)))
                        .expect("endpoints checked");
                    if &composite != phi[vu.0].component(x) {
                        return Err(mismatch(format!(
                            "transformation for {} is not the composite along {} and {}",
                            shape.mor_name(vu),
                            shape.mor_name(v),
                            shape.mor_name(u)
                        )));
                    }
                }
            }
        }
        Ok(BackwardFamily {
            shape,
            diagrams,
            transitions,
            phi,
        })
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn diagram(&self, d: ObjId) -> &SetDiagram {
        &self.diagrams[d.0]
    }

    pub fn diagrams(&self) -> &[SetDiagram] {
        &self.diagrams
    }

    pub fn transition(&self, u: MorId) -> &FinFunctor {
        &self.transitions[u.0]
    }

    pub fn phi(&self, u: MorId) -> &SetTransformation {
        &self.phi[u.0]
    }

    /// The shapes as a covariant diagram on `D^op`.
    pub fn cat_diagram(&self) -> CatDiagram {
        CatDiagram::new(
            Arc::new(self.shape.opposite()),
            self.diagrams.iter().map(|x| x.shape().clone()).collect(),
            self.transitions.clone(),
            Variance::Covariant,
        )
        .expect("validated at construction")
    }

    /// The backward morphism `(Phi u, phi^u): X_d -> X_e`.
    pub fn morphism(&self, u: MorId) -> DiagMorphism<SetDiagram> {
        DiagMorphism::new(
            Variant::Backward,
            self.diagrams[self.shape.dom(u).0].clone(),
            self.diagrams[self.shape.cod(u).0].clone(),
            self.transitions[u.0].clone(),
            self.phi[u.0].clone(),
        )
        .expect("validated family")
    }
}

/// The limit `(K, X)` of a backward family in `Diag_∘(FinSet)`.
#[derive(Clone, Debug)]
pub struct DiagLimit {
    pub shapes: CatColimitResult,
    /// `Ran_{K_d} X_d` with counit `epsilon_d`
    pub extensions: Vec<KanResult>,
    /// `R_u: R_d => R_e`
    pub transitions: Vec<SetTransformation>,
    pub pointwise: Vec<SetCone>,
    pub x: SetDiagram,
    /// `pi_d: X => R_d`
    pub pi: Vec<SetTransformation>,
    /// `(K_d, epsilon_d . pi_d K_d)`
    pub projections: Vec<DiagMorphism<SetDiagram>>,
}

impl DiagLimit {
    pub fn k(&self) -> &Arc<FinCategory> {
        &self.shapes.colimit
    }
}

/// `K = colim Phi` over `D^op`, `R_d = Ran_{K_d} X_d`, `X = lim_d R_d`
/// pointwise, with projections `(K_d, epsilon_d . pi_d K_d)`.
pub fn limit_in_diag(t: &BackwardFamily, bound: usize) -> Result<DiagLimit, DiagError> {
    let d = t.shape().clone();
    let shapes = colimit_cat(&t.cat_diagram(), bound)?;
    let k = shapes.colimit.clone();
    let tables = d
        .objects()
        .map(|o| ran_tables(shapes.leg(o), t.diagram(o)))
        .collect::<Result<Vec<_>, _>>()?;
    let index: Vec<Vec<HashMap<Vec<usize>, usize>>> = tables
        .iter()
        .map(|tb| {
            tb.cones
                .iter()
                .map(|c| (0..c.apex.len()).map(|s| (c.tuple(s), s)).collect())
                .collect()
        })
        .collect();
    let ext: Vec<SetDiagram> = tables.iter().map(|tb| tb.result.extension.clone()).collect();
    // R_u reads entry (j, w) of the target from entry (Phi u j, w) of the source
    let transitions = d
        .morphisms()
        .map(|u| {
            let (a, b) = (d.dom(u), d.cod(u));
            let fu = t.transition(u);
            let comps = k
                .objects()
                .map(|o| {
                    let (ca, cb) = (&tables[a.0].commas[o.0], &tables[b.0].commas[o.0]);
                    let reads: Vec<(usize, ObjId)> = cb
                        .triples
                        .iter()
                        .map(|&(star, jj, w)| {
                            let p = ca.find_object(star, fu.obj(jj), w).expect("legs commute");
                            (p.0, jj)
                        })
                        .collect();
                    let cone = &tables[a.0].cones[o.0];
                    let table = (0..cone.apex.len())
                        .map(|s| {
                            let tuple = cone.tuple(s);
                            let image: Vec<usize> = reads
                                .iter()
                                .map(|&(p, jj)| t.phi(u).component(jj).apply(tuple[p]))
                                .collect();
                            index[b.0][o.0][&image]
                        })
                        .collect();
                    FinFunction::new(ext[a.0].set(o).clone(), ext[b.0].set(o).clone(), table).unwrap()
                })
                .collect();
            SetTransformation::new(ext[a.0].clone(), ext[b.0].clone(), comps).map_err(mismatch)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pointwise: Vec<SetCone> = k
        .objects()
        .map(|o| {
            let sets = d.objects().map(|e| ext[e.0].set(o).clone()).collect();
            let maps = d.morphisms().map(|u| transitions[u.0].component(o).mapping().to_vec()).collect();
            limit_set(&SetDiagram::new(d.clone(), sets, maps).expect("transitions are natural"))
        })
        .collect::<Result<_, _>>()
        .map_err(mismatch)?;
    let tuple_index: Vec<HashMap<Vec<usize>, usize>> = pointwise
        .iter()
        .map(|c| (0..c.apex.len()).map(|s| (c.tuple(s), s)).collect())
        .collect();
    let maps = k
        .morphisms()
        .map(|m| {
            let (a, b) = (k.dom(m), k.cod(m));
            (0..pointwise[a.0].apex.len())
                .map(|s| {
                    let tuple = pointwise[a.0].tuple(s);
                    let image: Vec<usize> = d.objects().map(|e| ext[e.0].apply(m, tuple[e.0])).collect();
                    tuple_index[b.0][&image]
                })
                .collect()
        })
        .collect();
    let x = SetDiagram::new(k.clone(), pointwise.iter().map(|c| c.apex.clone()).collect(), maps)
        .expect("pointwise limit is a functor");
    let pi: Vec<SetTransformation> = d
        .objects()
        .map(|e| {
            let comps = k.objects().map(|o| pointwise[o.0].legs[e.0].clone()).collect();
            SetTransformation::new(x.clone(), ext[e.0].clone(), comps).expect("limit legs are natural")
        })
        .collect();
    let mut projections = Vec::with_capacity(d.object_count());
    for o in d.objects() {
        let leg = shapes.leg(o).clone();
        let counit = SetTransformation::new(
            restrict(&ext[o.0], &leg).map_err(mismatch)?,
            t.diagram(o).clone(),
            tables[o.0].result.unit_or_counit.clone(),
        )
        .map_err(mismatch)?;
        let cell = counit.after(&pi[o.0].whisker(&leg).map_err(mismatch)?).map_err(mismatch)?;
        projections.push(DiagMorphism::new(Variant::Backward, x.clone(), t.diagram(o).clone(), leg, cell)?);
    }
    Ok(DiagLimit {
        shapes,
        extensions: tables.into_iter().map(|tb| tb.result).collect(),
        transitions,
        pointwise,
        x,
        pi,
        projections,
    })
}

/// Exhaustive check of the limit property against one source `(J, Y)`:
/// composing with the projections is a bijection from morphisms
/// `(J, Y) -> (K, X)` onto cones, the latter enumerated independently.
pub fn certify_diag_limit(t: &BackwardFamily, l: &DiagLimit, y: &SetDiagram, limit: usize) -> VerificationReport {
    const CHECK: &str = "certify_diag_limit";
    let d = t.shape();
    let j = y.shape();
    let functors: Vec<Vec<FinFunctor>> = d
        .objects()
        .map(|o| enumerate_functors(t.diagram(o).shape(), j, limit))
        .collect();
    // a cone leg is (G_d: Phi d -> J, psi_d: Y G_d => X_d); along u it must
    // satisfy G_d Phi u = G_e and phi^u . psi_d Phi u = psi_e
    let shape_compatible = |chosen: &[Option<FinFunctor>], k: usize| {
        d.morphisms().all(|u| {
            let (a, b) = (d.dom(u), d.cod(u));
            if a.0 > k || b.0 > k {
                return true;
            }
            let (ga, gb) = (chosen[a.0].as_ref().unwrap(), chosen[b.0].as_ref().unwrap());
            ga.after(t.transition(u)).map(|x| x == *gb).unwrap_or(false)
        })
    };
    let mut cones: HashSet<Vec<MorphismKey>> = HashSet::new();
    for legs in compatible_families(d.object_count(), &functors, &shape_compatible) {
        let cells: Vec<Vec<SetTransformation>> = d
            .objects()
            .map(|o| crate::finset::enumerate_set_transformations(&restrict(y, &legs[o.0]).unwrap(), t.diagram(o)))
            .collect();
        let cell_compatible = |chosen: &[Option<SetTransformation>], k: usize| {
            d.morphisms().all(|u| {
                let (a, b) = (d.dom(u), d.cod(u));
                if a.0 > k || b.0 > k {
                    return true;
                }
                let (pa, pb) = (chosen[a.0].as_ref().unwrap(), chosen[b.0].as_ref().unwrap());
                let xb = t.diagram(b);
                xb.shape().objects().all(|jj| {
                    let src = pb.source().set(jj).len();
                    (0..src).all(|e| {
                        let via = t.phi(u).component(jj).apply(pa.component(t.transition(u).obj(jj)).apply(e));
                        via == pb.component(jj).apply(e)
                    })
                })
            })
        };
        for psi in compatible_families(d.object_count(), &cells, &cell_compatible) {
            let key = d
                .objects()
                .map(|o| {
                    (
                        legs[o.0].object_map().to_vec(),
                        legs[o.0].morphism_map().to_vec(),
                        psi[o.0].components().iter().map(|f| f.mapping().to_vec()).collect(),
                    )
                })
                .collect();
            cones.insert(key);
        }
    }
    let mut hit: HashSet<Vec<MorphismKey>> = HashSet::new();
    let mut morphisms = 0usize;
    for h in enumerate_functors(l.k(), j, limit) {
        let yh = restrict(y, &h).unwrap();
        for beta in crate::finset::enumerate_set_transformations(&yh, &l.x) {
            morphisms += 1;
            let m = DiagMorphism::new(Variant::Backward, y.clone(), l.x.clone(), h.clone(), beta).unwrap();
            let key: Vec<MorphismKey> = l
                .projections
                .iter()
                .map(|p| set_key(&diag_compose(p, &m).expect("composable")))
                .collect();
            if !cones.contains(&key) {
                return VerificationReport::fail(CHECK, json!({"error": "NotACone", "morphism": morphisms - 1}));
            }
            if !hit.insert(key) {
                return VerificationReport::fail(CHECK, json!({"error": "NotUnique", "morphism": morphisms - 1}));
            }
        }
    }
    if hit.len() != cones.len() {
        return VerificationReport::fail(
            CHECK,
            json!({"error": "NoMediator", "cones": cones.len(), "factored": hit.len()}),
        );
    }
    VerificationReport::pass(CHECK)
        .with_stat("cones", cones.len())
        .with_stat("morphisms", morphisms)
}

/// Tables of a morphism, for reports.
pub fn describe<D: Diagram>(m: &DiagMorphism<D>) -> Value {
    let f = &m.functor;
    json!({
        "variant": match m.variant { Variant::Forward => "forward", Variant::Backward => "backward" },
        "functor": {
            "objects": f.source().objects().map(|o| [f.source().obj_name(o), f.target().obj_name(f.obj(o))]).collect::<Vec<_>>(),
            "morphisms": f.source().morphisms().map(|g| [f.source().mor_name(g), f.target().mor_name(f.mor(g))]).collect::<Vec<_>>(),
        },
    })
}
