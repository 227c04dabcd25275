//! Both Grothendieck constructions of strict `Cat`-valued diagrams, the
//! Guitart hat/check correspondence and lax cocone extension.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::fincat::tokens::{disambiguate, pair_token};
use crate::fincat::{
    compose_functor, same_category, CategoryBuilder, FinCategory, FinFunctor, MorId, NatTransformation, ObjId,
};
use crate::fibrations::{verify_split, CleavageData, Direction};
use crate::finset::{restrict, FinFunction, SetDiagram, SetTransformation};
use crate::report::VerificationReport;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GrothError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("diagram is not functorial: {reason}")]
    NonFunctorialDiagram { reason: String, witness: Value },
    #[error("family is not functorial: {reason}")]
    NonFunctorialFamily { reason: String, witness: Value },
    #[error("not a lax cocone at ({u}, {v})")]
    NotALaxCocone { u: String, v: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    pub fn flip(self) -> Variance {
        match self {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        }
    }
}

/// A strict functor from `shape` (or its opposite) into finite categories.
///
/// Covariant: `transitions[u]: fibres[dom u] -> fibres[cod u]`.
/// Contravariant: `transitions[u]: fibres[cod u] -> fibres[dom u]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatDiagram {
    shape: Arc<FinCategory>,
    fibres: Vec<Arc<FinCategory>>,
    transitions: Vec<FinFunctor>,
    variance: Variance,
}

fn nonfunctorial(reason: String, witness: Value) -> GrothError {
    GrothError::NonFunctorialDiagram { reason, witness }
}

impl CatDiagram {
    pub fn new(
        shape: Arc<FinCategory>,
        fibres: Vec<Arc<FinCategory>>,
        transitions: Vec<FinFunctor>,
        variance: Variance,
    ) -> Result<CatDiagram, GrothError> {
        if fibres.len() != shape.object_count() || transitions.len() != shape.morphism_count() {
            return Err(GrothError::ShapeMismatch("one fibre per object and one functor per morphism".into()));
        }
        for u in shape.morphisms() {
            let (a, b) = match variance {
                Variance::Covariant => (shape.dom(u), shape.cod(u)),
                Variance::Contravariant => (shape.cod(u), shape.dom(u)),
            };
            let t = &transitions[u.0];
            if !same_category(t.source(), &fibres[a.0]) || !same_category(t.target(), &fibres[b.0]) {
                return Err(nonfunctorial(
                    format!("transition for {} has the wrong endpoints", shape.mor_name(u)),
                    json!({"morphism": shape.mor_name(u)}),
                ));
            }
        }
        let transitions: Vec<FinFunctor> = shape
            .morphisms()
            .map(|u| {
                let (a, b) = match variance {
                    Variance::Covariant => (shape.dom(u), shape.cod(u)),
                    Variance::Contravariant => (shape.cod(u), shape.dom(u)),
                };
                transitions[u.0].retarget(&fibres[a.0], &fibres[b.0]).unwrap()
            })
            .collect();
        for o in shape.objects() {
            if transitions[shape.identity(o).0] != FinFunctor::identity(&fibres[o.0]) {
                return Err(nonfunctorial(
                    format!("identity of {} is not sent to an identity functor", shape.obj_name(o)),
                    json!({"object": shape.obj_name(o)}),
                ));
            }
        }
        for u in shape.morphisms() {
            for &v in shape.outgoing(shape.cod(u)) {
                let vu = shape.comp(v, u);
                let expected = match variance {
                    Variance::Covariant => compose_functor(&transitions[v.0], &transitions[u.0]),
                    Variance::Contravariant => compose_functor(&transitions[u.0], &transitions[v.0]),
                }
                .expect("endpoints checked");
                if expected != transitions[vu.0] {
                    return Err(nonfunctorial(
                        format!(
                            "transition of {} differs from the composite of {} and {}",
                            shape.mor_name(vu),
                            shape.mor_name(v),
                            shape.mor_name(u)
                        ),
                        json!({"u": shape.mor_name(u), "v": shape.mor_name(v)}),
                    ));
                }
            }
        }
        Ok(CatDiagram {
            shape,
            fibres,
            transitions,
            variance,
        })
    }

    /// The diagram constant at `fibre`.
    pub fn constant(shape: &Arc<FinCategory>, fibre: &Arc<FinCategory>, variance: Variance) -> CatDiagram {
        CatDiagram {
            shape: shape.clone(),
            fibres: vec![fibre.clone(); shape.object_count()],
            transitions: vec![FinFunctor::identity(fibre); shape.morphism_count()],
            variance,
        }
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn fibre(&self, a: ObjId) -> &Arc<FinCategory> {
        &self.fibres[a.0]
    }

    pub fn fibres(&self) -> &[Arc<FinCategory>] {
        &self.fibres
    }

    pub fn transition(&self, u: MorId) -> &FinFunctor {
        &self.transitions[u.0]
    }

    pub fn transitions(&self) -> &[FinFunctor] {
        &self.transitions
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    /// Opposite base and fibres with the same functor data; the variance
    /// flips. Applying it twice gives back an equal diagram.
    pub fn dual(&self) -> CatDiagram {
        let fibres: Vec<Arc<FinCategory>> = self.fibres.iter().map(|f| Arc::new(f.opposite())).collect();
        let shape = Arc::new(self.shape.opposite());
        let variance = self.variance.flip();
        let transitions = shape
            .morphisms()
            .map(|u| {
                let (a, b) = match variance {
                    Variance::Covariant => (shape.dom(u), shape.cod(u)),
                    Variance::Contravariant => (shape.cod(u), shape.dom(u)),
                };
                let t = &self.transitions[u.0];
                FinFunctor::new(
                    fibres[a.0].clone(),
                    fibres[b.0].clone(),
                    t.object_map().to_vec(),
                    t.morphism_map().to_vec(),
                )
                .expect("opposite of a functor")
            })
            .collect();
        CatDiagram {
            shape,
            fibres,
            transitions,
            variance,
        }
    }
}

/// A total category with its projection, (co)cleavage and fibre injections.
#[derive(Clone, Debug)]
pub struct GrothendieckResult {
    pub diagram: CatDiagram,
    pub total: Arc<FinCategory>,
    pub projection: FinFunctor,
    /// `(u, x) -> delta^u_x` (covariant, `x` in the fibre over `dom u`) or
    /// `(u, y) -> theta^u_y` (contravariant, `y` over `cod u`).
    pub lifts: HashMap<(MorId, ObjId), MorId>,
    pub injections: Vec<FinFunctor>,
    /// `(a, x)` per total object
    pub object_pairs: Vec<(ObjId, ObjId)>,
    /// `(u, f)` per total morphism
    pub morphism_pairs: Vec<(MorId, MorId)>,
    object_index: HashMap<(ObjId, ObjId), ObjId>,
    morphism_index: HashMap<(ObjId, ObjId, MorId, MorId), MorId>,
}

impl GrothendieckResult {
    pub fn object(&self, a: ObjId, x: ObjId) -> ObjId {
        self.object_index[&(a, x)]
    }

    /// The total morphism `(u, f)` between the given total objects.
    pub fn morphism(&self, src: ObjId, tgt: ObjId, u: MorId, f: MorId) -> Option<MorId> {
        self.morphism_index.get(&(src, tgt, u, f)).copied()
    }

    pub fn lift(&self, u: MorId, x: ObjId) -> MorId {
        self.lifts[&(u, x)]
    }

    pub fn injection(&self, a: ObjId) -> &FinFunctor {
        &self.injections[a.0]
    }
}

fn build_total(phi: &CatDiagram) -> GrothendieckResult {
    let b = phi.shape.clone();
    let mut builder = CategoryBuilder::new();
    let mut object_pairs = Vec::new();
    let mut object_index = HashMap::new();
    let mut names = Vec::new();
    for a in b.objects() {
        for x in phi.fibres[a.0].objects() {
            let name = pair_token(b.obj_name(a), phi.fibres[a.0].obj_name(x));
            let o = builder.object(name.clone());
            names.push(name);
            object_pairs.push((a, x));
            object_index.insert((a, x), o);
        }
    }
    let mut morphism_pairs = Vec::new();
    let mut ends = Vec::new();
    for (src, &(a, x)) in object_pairs.iter().enumerate() {
        for &u in b.outgoing(a) {
            let bb = b.cod(u);
            let fb = &phi.fibres[bb.0];
            let t = &phi.transitions[u.0];
            match phi.variance {
                // f: (Phi u) x -> y in Phi b
                Variance::Covariant => {
                    for &f in fb.outgoing(t.obj(x)) {
                        morphism_pairs.push((u, f));
                        ends.push((ObjId(src), object_index[&(bb, fb.cod(f))]));
                    }
                }
                // f: x -> (Phi u) y in Phi a
                Variance::Contravariant => {
                    let fa = &phi.fibres[a.0];
                    for y in fb.objects() {
                        for &f in fa.hom(x, t.obj(y)) {
                            morphism_pairs.push((u, f));
                            ends.push((ObjId(src), object_index[&(bb, y)]));
                        }
                    }
                }
            }
        }
    }
    let base: Vec<String> = morphism_pairs
        .iter()
        .map(|&(u, f)| {
            let fibre = match phi.variance {
                Variance::Covariant => &phi.fibres[b.cod(u).0],
                Variance::Contravariant => &phi.fibres[b.dom(u).0],
            };
            pair_token(b.mor_name(u), fibre.mor_name(f))
        })
        .collect();
    let srcs: Vec<String> = ends.iter().map(|e| names[e.0 .0].clone()).collect();
    let tgts: Vec<String> = ends.iter().map(|e| names[e.1 .0].clone()).collect();
    let mut morphism_index = HashMap::new();
    for (i, name) in disambiguate(base, &srcs, &tgts).into_iter().enumerate() {
        let m = builder.morphism(name, ends[i].0, ends[i].1);
        let (u, f) = morphism_pairs[i];
        morphism_index.insert((ends[i].0, ends[i].1, u, f), m);
    }
    for (i, &(a, x)) in object_pairs.iter().enumerate() {
        let id = morphism_index[&(ObjId(i), ObjId(i), b.identity(a), phi.fibres[a.0].identity(x))];
        builder.set_identity(ObjId(i), id);
    }
    let total = builder
        .build(|p, q| {
            let (v, g) = morphism_pairs[p.0];
            let (u, f) = morphism_pairs[q.0];
            let vu = b.comp(v, u);
            let h = match phi.variance {
                Variance::Covariant => phi.fibres[b.cod(v).0].comp(g, phi.transitions[v.0].mor(f)),
                Variance::Contravariant => phi.fibres[b.dom(u).0].comp(phi.transitions[u.0].mor(g), f),
            };
            morphism_index.get(&(ends[q.0].0, ends[p.0].1, vu, h)).copied()
        })
        .expect("Grothendieck construction of a strict diagram is a category");
    let total = Arc::new(total);
    let projection = FinFunctor::new(
        total.clone(),
        b.clone(),
        object_pairs.iter().map(|p| p.0).collect(),
        morphism_pairs.iter().map(|p| p.0).collect(),
    )
    .expect("projection is a functor");
    let injections = b
        .objects()
        .map(|a| {
            let fa = &phi.fibres[a.0];
            let objects: Vec<ObjId> = fa.objects().map(|x| object_index[&(a, x)]).collect();
            let morphisms = fa
                .morphisms()
                .map(|f| {
                    let (s, t) = (objects[fa.dom(f).0], objects[fa.cod(f).0]);
                    morphism_index[&(s, t, b.identity(a), f)]
                })
                .collect();
            FinFunctor::new(fa.clone(), total.clone(), objects, morphisms).expect("fibre injection")
        })
        .collect();
    let mut lifts = HashMap::new();
    for u in b.morphisms() {
        let (a, bb) = (b.dom(u), b.cod(u));
        let t = &phi.transitions[u.0];
        match phi.variance {
            Variance::Covariant => {
                for x in phi.fibres[a.0].objects() {
                    let tx = t.obj(x);
                    let m = morphism_index[&(
                        object_index[&(a, x)],
                        object_index[&(bb, tx)],
                        u,
                        phi.fibres[bb.0].identity(tx),
                    )];
                    lifts.insert((u, x), m);
                }
            }
            Variance::Contravariant => {
                for y in phi.fibres[bb.0].objects() {
                    let ty = t.obj(y);
                    let m = morphism_index[&(
                        object_index[&(a, ty)],
                        object_index[&(bb, y)],
                        u,
                        phi.fibres[a.0].identity(ty),
                    )];
                    lifts.insert((u, y), m);
                }
            }
        }
    }
    GrothendieckResult {
        diagram: phi.clone(),
        total,
        projection,
        lifts,
        injections,
        object_pairs,
        morphism_pairs,
        object_index,
        morphism_index,
    }
}

/// `int_o Phi` for covariant `Phi`, composing `(v,g)(u,f) = (vu, g . Phi(v) f)`.
pub fn groth_co(phi: &CatDiagram) -> Result<GrothendieckResult, GrothError> {
    if phi.variance != Variance::Covariant {
        return Err(GrothError::ShapeMismatch("groth_co needs a covariant diagram".into()));
    }
    Ok(build_total(phi))
}

/// `int^o Phi` for contravariant `Phi`, composing `(v,g)(u,f) = (vu, Phi(u) g . f)`.
pub fn groth_contra(phi: &CatDiagram) -> Result<GrothendieckResult, GrothError> {
    if phi.variance != Variance::Contravariant {
        return Err(GrothError::ShapeMismatch("groth_contra needs a contravariant diagram".into()));
    }
    Ok(build_total(phi))
}

/// A `D`-indexed family of set diagrams `X_d` on `Phi d` with transition
/// transformations `phi^u: X_d => X_e . Phi u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagFamily {
    shape: Arc<FinCategory>,
    diagrams: Vec<SetDiagram>,
    transitions: Vec<FinFunctor>,
    phi: Vec<SetTransformation>,
}

fn family_error(reason: String, witness: Value) -> GrothError {
    GrothError::NonFunctorialFamily { reason, witness }
}

impl DiagFamily {
    pub fn new(
        shape: Arc<FinCategory>,
        diagrams: Vec<SetDiagram>,
        transitions: Vec<FinFunctor>,
        phi: Vec<SetTransformation>,
    ) -> Result<DiagFamily, GrothError> {
        if diagrams.len() != shape.object_count()
            || transitions.len() != shape.morphism_count()
            || phi.len() != shape.morphism_count()
        {
            return Err(GrothError::ShapeMismatch("one diagram per object and one morphism per arrow".into()));
        }
        let fibres: Vec<Arc<FinCategory>> = diagrams.iter().map(|x| x.shape().clone()).collect();
        CatDiagram::new(shape.clone(), fibres.clone(), transitions.clone(), Variance::Covariant).map_err(|e| {
            match e {
                GrothError::NonFunctorialDiagram { reason, witness } => family_error(reason, witness),
                other => other,
            }
        })?;
        for u in shape.morphisms() {
            let (a, b) = (shape.dom(u), shape.cod(u));
            let expected = restrict(&diagrams[b.0], &transitions[u.0])
                .map_err(|e| GrothError::ShapeMismatch(e.to_string()))?;
            let p = &phi[u.0];
            if p.source() != &diagrams[a.0] || p.target() != &expected {
                return Err(family_error(
                    format!("transformation for {} has the wrong endpoints", shape.mor_name(u)),
                    json!({"morphism": shape.mor_name(u)}),
                ));
            }
        }
        for a in shape.objects() {
            if !phi[shape.identity(a).0].components().iter().all(FinFunction::is_identity) {
                return Err(family_error(
                    format!("transformation at the identity of {} is not an identity", shape.obj_name(a)),
                    json!({"object": shape.obj_name(a)}),
                ));
            }
        }
        // phi^{vu}_x = phi^v_{(Phi u) x} . phi^u_x
        for u in shape.morphisms() {
            for &v in shape.outgoing(shape.cod(u)) {
                let vu = shape.comp(v, u);
                let a = shape.dom(u);
                for x in fibres[a.0].objects() {
                    let composite = phi[v.0]
                        .component(transitions[u.0].obj(x))
                        .after(phi[u.0].component(x))
                        .expect("endpoints checked");
                    if &composite != phi[vu.0].component(x) {
                        return Err(family_error(
                            format!(
                                "transformation for {} is not the composite along {} and {}",
                                shape.mor_name(vu),
                                shape.mor_name(v),
                                shape.mor_name(u)
                            ),
                            json!({"u": shape.mor_name(u), "v": shape.mor_name(v), "object": fibres[a.0].obj_name(x)}),
                        ));
                    }
                }
            }
        }
        Ok(DiagFamily {
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

    pub fn transitions(&self) -> &[FinFunctor] {
        &self.transitions
    }

    pub fn phi(&self, u: MorId) -> &SetTransformation {
        &self.phi[u.0]
    }

    pub fn phis(&self) -> &[SetTransformation] {
        &self.phi
    }

    /// The underlying diagram of shapes.
    pub fn cat_diagram(&self) -> CatDiagram {
        CatDiagram::new(
            self.shape.clone(),
            self.diagrams.iter().map(|x| x.shape().clone()).collect(),
            self.transitions.clone(),
            Variance::Covariant,
        )
        .expect("validated at construction")
    }
}

/// `T_a = T J_a` with `phi^u_x = T(delta^u_x)`.
pub fn guitart_hat(groth: &GrothendieckResult, t: &SetDiagram) -> Result<DiagFamily, GrothError> {
    if groth.diagram.variance != Variance::Covariant {
        return Err(GrothError::ShapeMismatch("guitart_hat needs a covariant construction".into()));
    }
    if !same_category(t.shape(), &groth.total) {
        return Err(GrothError::ShapeMismatch("diagram is not on the total category".into()));
    }
    let t = t.reshape(&groth.total).expect("same category");
    let phi_cat = &groth.diagram;
    let b = phi_cat.shape();
    let diagrams: Vec<SetDiagram> = groth
        .injections
        .iter()
        .map(|j| restrict(&t, j).expect("injection lands in the total category"))
        .collect();
    let phi = b
        .morphisms()
        .map(|u| {
            let (a, bb) = (b.dom(u), b.cod(u));
            let target = restrict(&diagrams[bb.0], &phi_cat.transitions[u.0]).unwrap();
            let components = phi_cat.fibres[a.0]
                .objects()
                .map(|x| t.function(groth.lift(u, x)))
                .collect();
            SetTransformation::new(diagrams[a.0].clone(), target, components)
                .map_err(|e| GrothError::ShapeMismatch(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    DiagFamily::new(b.clone(), diagrams, phi_cat.transitions.clone(), phi)
}

/// `check(Sigma)(u, f) = X_b(f) . phi^u_x` on the total category of the
/// family's shapes.
pub fn guitart_check(sigma: &DiagFamily) -> Result<(GrothendieckResult, SetDiagram), GrothError> {
    let groth = build_total(&sigma.cat_diagram());
    let t = guitart_check_on(&groth, sigma)?;
    Ok((groth, t))
}

/// As [`guitart_check`], over an already built total category.
pub fn guitart_check_on(groth: &GrothendieckResult, sigma: &DiagFamily) -> Result<SetDiagram, GrothError> {
    let b = sigma.shape();
    if groth.diagram != sigma.cat_diagram() {
        return Err(GrothError::ShapeMismatch("total category of a different diagram".into()));
    }
    let sets = groth
        .object_pairs
        .iter()
        .map(|&(a, x)| sigma.diagrams[a.0].set(x).clone())
        .collect();
    let maps = groth
        .total
        .morphisms()
        .map(|m| {
            let (u, f) = groth.morphism_pairs[m.0];
            let (_, x) = groth.object_pairs[groth.total.dom(m).0];
            let step = sigma.phi[u.0].component(x);
            (0..step.source().len())
                .map(|e| sigma.diagrams[b.cod(u).0].apply(f, step.apply(e)))
                .collect()
        })
        .collect();
    SetDiagram::new(groth.total.clone(), sets, maps).map_err(|e| {
        family_error(e.to_string(), json!({"reason": "checked diagram is not a functor"}))
    })
}

/// A lax cocone `(Sigma_a, phi^u)` over a covariant diagram with vertex `X`.
#[derive(Clone, Debug)]
pub struct LaxCocone {
    pub diagram: CatDiagram,
    pub vertex: Arc<FinCategory>,
    pub legs: Vec<FinFunctor>,
    /// `phi^u: Sigma_a => Sigma_b . Phi u`
    pub phi: Vec<NatTransformation>,
}

impl LaxCocone {
    /// The cocone `(J_a, delta^u)` into the total category.
    pub fn canonical(groth: &GrothendieckResult) -> LaxCocone {
        let phi_cat = &groth.diagram;
        let b = phi_cat.shape();
        let phi = b
            .morphisms()
            .map(|u| {
                let (a, bb) = (b.dom(u), b.cod(u));
                let to = compose_functor(&groth.injections[bb.0], &phi_cat.transitions[u.0]).unwrap();
                let comps = phi_cat.fibres[a.0].objects().map(|x| groth.lift(u, x)).collect();
                NatTransformation::new(groth.injections[a.0].clone(), to, comps).expect("delta is natural")
            })
            .collect();
        LaxCocone {
            diagram: phi_cat.clone(),
            vertex: groth.total.clone(),
            legs: groth.injections.clone(),
            phi,
        }
    }

    /// `phi^{1_a} = 1` and `phi^{vu} = phi^v (Phi u) . phi^u`.
    pub fn check(&self) -> Result<(), GrothError> {
        let phi_cat = &self.diagram;
        let b = phi_cat.shape();
        if self.legs.len() != b.object_count() || self.phi.len() != b.morphism_count() {
            return Err(GrothError::ShapeMismatch("one leg per object and one transformation per morphism".into()));
        }
        for u in b.morphisms() {
            let (a, bb) = (b.dom(u), b.cod(u));
            let p = &self.phi[u.0];
            let to = compose_functor(&self.legs[bb.0], &phi_cat.transitions[u.0])
                .map_err(|e| GrothError::ShapeMismatch(e.to_string()))?;
            if p.from_functor() != &self.legs[a.0] || p.to_functor() != &to {
                return Err(GrothError::ShapeMismatch(format!(
                    "transformation for {} has the wrong endpoints",
                    b.mor_name(u)
                )));
            }
        }
        let x = &self.vertex;
        for a in b.objects() {
            let id = b.identity(a);
            if !self.phi[id.0].components().iter().all(|&c| x.is_identity(c)) {
                let name = b.mor_name(id).to_string();
                return Err(GrothError::NotALaxCocone { u: name.clone(), v: name });
            }
        }
        for u in b.morphisms() {
            for &v in b.outgoing(b.cod(u)) {
                let vu = b.comp(v, u);
                let a = b.dom(u);
                let t = &phi_cat.transitions[u.0];
                let ok = phi_cat.fibres[a.0].objects().all(|y| {
                    x.comp(self.phi[v.0].component(t.obj(y)), self.phi[u.0].component(y)) == self.phi[vu.0].component(y)
                });
                if !ok {
                    return Err(GrothError::NotALaxCocone {
                        u: b.mor_name(u).to_string(),
                        v: b.mor_name(v).to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// The unique `T` with `T J_a = Sigma_a` and `T delta^u = phi^u`:
/// `T(u, f) = Sigma_b(f) . phi^u_x`.
pub fn lax_cocone_extend(groth: &GrothendieckResult, cocone: &LaxCocone) -> Result<FinFunctor, GrothError> {
    if groth.diagram != cocone.diagram || groth.diagram.variance != Variance::Covariant {
        return Err(GrothError::ShapeMismatch("cocone over a different diagram".into()));
    }
    cocone.check()?;
    let b = groth.diagram.shape();
    let x = &cocone.vertex;
    let objects = groth
        .object_pairs
        .iter()
        .map(|&(a, y)| cocone.legs[a.0].obj(y))
        .collect();
    let morphisms = groth
        .total
        .morphisms()
        .map(|m| {
            let (u, f) = groth.morphism_pairs[m.0];
            let (_, y) = groth.object_pairs[groth.total.dom(m).0];
            x.comp(cocone.legs[b.cod(u).0].mor(f), cocone.phi[u.0].component(y))
        })
        .collect();
    FinFunctor::new(groth.total.clone(), x.clone(), objects, morphisms)
        .map_err(|e| GrothError::ShapeMismatch(e.to_string()))
}

/// Every total morphism equals `J_b(f) . delta^u_x` (covariant) or
/// `theta^u_y . J_a(f)` (contravariant); returns the first that does not.
pub fn factorization_defect(groth: &GrothendieckResult) -> Option<MorId> {
    let total = &groth.total;
    let b = groth.diagram.shape();
    total.morphisms().find(|&m| {
        let (u, f) = groth.morphism_pairs[m.0];
        let (_, x) = groth.object_pairs[total.dom(m).0];
        let (_, y) = groth.object_pairs[total.cod(m).0];
        let recomposed = match groth.diagram.variance {
            Variance::Covariant => total.compose(groth.injections[b.cod(u).0].mor(f), groth.lift(u, x)),
            Variance::Contravariant => total.compose(groth.lift(u, y), groth.injections[b.dom(u).0].mor(f)),
        };
        recomposed != Some(m)
    })
}

/// Rebuilds the total category from the indexed category extracted from a
/// split (co)cleavage and compares it with `P` through
/// `K(u, f) = theta^u_y . f` (fibrations) or `K(u, f) = f . delta^u_x`
/// (cofibrations). Passes iff `K` is a bijective functor with `P K = Pi` that
/// preserves the chosen liftings.
pub fn reconstitute(data: &CleavageData) -> VerificationReport {
    const CHECK: &str = "reconstitute";
    let sc = match verify_split(data) {
        Ok(sc) => sc,
        Err(e) => return e.report(CHECK),
    };
    let groth = build_total(&sc.diagram);
    let e = sc.total();
    let b = sc.base();
    let fibres = &sc.fibres;
    let objects: Vec<ObjId> = groth
        .object_pairs
        .iter()
        .map(|&(a, x)| fibres.global_object(a, x))
        .collect();
    let morphisms: Vec<MorId> = groth
        .total
        .morphisms()
        .map(|m| {
            let (u, f) = groth.morphism_pairs[m.0];
            let (_, x) = groth.object_pairs[groth.total.dom(m).0];
            let (_, y) = groth.object_pairs[groth.total.cod(m).0];
            match data.direction {
                Direction::Fibration => {
                    let y = fibres.global_object(b.cod(u), y);
                    e.comp(sc.lift(u, y), fibres.global_morphism(b.dom(u), f))
                }
                Direction::Cofibration => {
                    let x = fibres.global_object(b.dom(u), x);
                    e.comp(fibres.global_morphism(b.cod(u), f), sc.lift(u, x))
                }
            }
        })
        .collect();
    let k = match FinFunctor::new(groth.total.clone(), e.clone(), objects, morphisms) {
        Ok(k) => k,
        Err(err) => {
            return VerificationReport::fail(CHECK, json!({"reason": "K is not a functor", "detail": err.to_string()}))
        }
    };
    let mut parts = vec![VerificationReport::pass("functor")];
    parts.push(if k.is_bijective() {
        VerificationReport::pass("bijective")
    } else {
        VerificationReport::fail(
            "bijective",
            json!({"rebuilt": [groth.total.object_count(), groth.total.morphism_count()], "given": [e.object_count(), e.morphism_count()]}),
        )
    });
    parts.push(match compose_functor(sc.functor(), &k) {
        Ok(pk) if pk == groth.projection => VerificationReport::pass("projection"),
        _ => VerificationReport::fail("projection", json!({"reason": "P K differs from the projection"})),
    });
    let mut keys: Vec<&(MorId, ObjId)> = groth.lifts.keys().collect();
    keys.sort();
    let bad = keys.into_iter().find(|&&(u, x)| {
        let a = match data.direction {
            Direction::Fibration => b.cod(u),
            Direction::Cofibration => b.dom(u),
        };
        k.mor(groth.lifts[&(u, x)]) != sc.lift(u, fibres.global_object(a, x))
    });
    parts.push(match bad {
        None => VerificationReport::pass("cleavage"),
        Some(&(u, x)) => VerificationReport::fail("cleavage", json!({"u": b.mor_name(u), "object": x.0})),
    });
    VerificationReport::all(CHECK, parts)
        .with_stat("objects", e.object_count())
        .with_stat("morphisms", e.morphism_count())
}
