//! Pointwise Kan extensions of set-valued diagrams and the joint left Kan
//! factorization.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::fincat::{comma, same_category, CommaCategory, FinCategory, FinFunctor, MorId, ObjId};
use crate::finset::{
    colimit_set, limit_set, restrict, ConeError, FinFunction, SetCone, SetDiagram, SetError, SetTransformation,
};
use crate::fixtures;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KanError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("family is incompatible along {morphism}")]
    IncompatibleFamily { morphism: String, witness: Value },
    #[error("no factorization: {reason}")]
    NoSolution { reason: String, witness: Value },
    #[error("limit too large: {size} tuples above the cap of {cap}")]
    ResourceExceeded { size: u128, cap: u128 },
}

impl From<SetError> for KanError {
    fn from(e: SetError) -> Self {
        KanError::ShapeMismatch(e.to_string())
    }
}

impl From<ConeError> for KanError {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::ResourceExceeded { size, cap } => KanError::ResourceExceeded { size, cap },
            other => KanError::ShapeMismatch(other.to_string()),
        }
    }
}

/// An extension with its unit `X -> L F` (left) or counit `R F -> X` (right).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KanResult {
    pub extension: SetDiagram,
    pub unit_or_counit: Vec<FinFunction>,
}

fn point_functor(j: &Arc<FinCategory>, at: ObjId) -> FinFunctor {
    let one = Arc::new(fixtures::one());
    FinFunctor::constant(&one, j, at)
}

/// `(Lan_F X)(j) = colim (F | j -> I -> Set)`.
pub fn lan(f: &FinFunctor, x: &SetDiagram) -> Result<KanResult, KanError> {
    if !same_category(f.source(), x.shape()) {
        return Err(KanError::ShapeMismatch("functor source differs from the diagram shape".into()));
    }
    let j = f.target().clone();
    let mut commas = Vec::new();
    let mut cocones = Vec::new();
    for o in j.objects() {
        let c = comma(f, &point_functor(&j, o)).expect("same target");
        let restricted = restrict(x, &c.left)?;
        cocones.push(colimit_set(&restricted));
        commas.push(c);
    }
    let sets: Vec<_> = cocones.iter().map(|c| c.apex.clone()).collect();
    let mut maps = Vec::with_capacity(j.morphism_count());
    for m in j.morphisms() {
        let (a, b) = (j.dom(m), j.cod(m));
        let mut table = vec![usize::MAX; sets[a.0].len()];
        for (k, &(i, star, u)) in commas[a.0].triples.iter().enumerate() {
            let target = commas[b.0]
                .find_object(i, star, j.comp(m, u))
                .expect("post-composite is a comma object");
            for e in 0..x.set(i).len() {
                let from = cocones[a.0].legs[k].apply(e);
                table[from] = cocones[b.0].legs[target.0].apply(e);
            }
        }
        maps.push(table);
    }
    let extension = SetDiagram::new(j.clone(), sets, maps)?;
    let i_cat = f.source();
    let unit = i_cat
        .objects()
        .map(|i| {
            let fi = f.obj(i);
            let k = commas[fi.0]
                .find_object(i, ObjId(0), j.identity(fi))
                .expect("identity object");
            cocones[fi.0].legs[k.0].clone()
        })
        .collect();
    Ok(KanResult {
        extension,
        unit_or_counit: unit,
    })
}

/// `(Ran_F X)(j) = lim (j | F -> I -> Set)`.
pub fn ran(f: &FinFunctor, x: &SetDiagram) -> Result<KanResult, KanError> {
    ran_tables(f, x).map(|t| t.result)
}

/// `Ran_F X` together with the comma categories and limit cones it reads.
pub(crate) struct RanTables {
    pub result: KanResult,
    pub commas: Vec<CommaCategory>,
    pub cones: Vec<SetCone>,
}

pub(crate) fn ran_tables(f: &FinFunctor, x: &SetDiagram) -> Result<RanTables, KanError> {
    if !same_category(f.source(), x.shape()) {
        return Err(KanError::ShapeMismatch("functor source differs from the diagram shape".into()));
    }
    let j = f.target().clone();
    let mut commas = Vec::new();
    let mut cones = Vec::new();
    for o in j.objects() {
        let c = comma(&point_functor(&j, o), f).expect("same target");
        let restricted = restrict(x, &c.right)?;
        cones.push(limit_set(&restricted)?);
        commas.push(c);
    }
    let sets: Vec<_> = cones.iter().map(|c| c.apex.clone()).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> = cones
        .iter()
        .map(|c| (0..c.apex.len()).map(|t| (c.tuple(t), t)).collect())
        .collect();
    let mut maps = Vec::with_capacity(j.morphism_count());
    for m in j.morphisms() {
        let (a, b) = (j.dom(m), j.cod(m));
        // (*, i, u': b -> F i) reads the component at (*, i, u' m)
        let reads: Vec<usize> = commas[b.0]
            .triples
            .iter()
            .map(|&(star, i, u)| {
                commas[a.0]
                    .find_object(star, i, j.comp(u, m))
                    .expect("precomposite is a comma object")
                    .0
            })
            .collect();
        let table = (0..sets[a.0].len())
            .map(|t| {
                let tuple = cones[a.0].tuple(t);
                let image: Vec<usize> = reads.iter().map(|&k| tuple[k]).collect();
                index[b.0][&image]
            })
            .collect();
        maps.push(table);
    }
    let extension = SetDiagram::new(j.clone(), sets, maps)?;
    let counit = f
        .source()
        .objects()
        .map(|i| {
            let fi = f.obj(i);
            let k = commas[fi.0]
                .find_object(ObjId(0), i, j.identity(fi))
                .expect("identity object");
            cones[fi.0].legs[k.0].clone()
        })
        .collect();
    Ok(RanTables {
        result: KanResult {
            extension,
            unit_or_counit: counit,
        },
        commas,
        cones,
    })
}

/// Data of a joint left Kan extension problem.
///
/// `d_shape` indexes the family; `family[d]` is `X_d` on `Phi d`,
/// `transitions[u]` is `Phi u`, and `phi[u]: X_d => X_e . Phi u`. The candidate `x` on `k`
/// comes with `injections[d]: X_d => x . K_d`.
#[derive(Clone, Debug)]
pub struct JointKanData {
    pub d_shape: Arc<FinCategory>,
    pub transitions: Vec<FinFunctor>,
    pub family: Vec<SetDiagram>,
    pub phi: Vec<SetTransformation>,
    pub k: Arc<FinCategory>,
    pub legs: Vec<FinFunctor>,
    pub x: SetDiagram,
    pub injections: Vec<SetTransformation>,
}

impl JointKanData {
    /// The one-index problem certifying `lan(f, x)`.
    pub fn single(f: &FinFunctor, x: &SetDiagram, lan: &KanResult) -> Result<JointKanData, KanError> {
        let one = Arc::new(fixtures::one());
        let ext = &lan.extension;
        let injection = SetTransformation::new(
            x.clone(),
            restrict(ext, f)?,
            lan.unit_or_counit.clone(),
        )?;
        Ok(JointKanData {
            d_shape: one,
            transitions: vec![FinFunctor::identity(f.source())],
            family: vec![x.clone()],
            phi: vec![SetTransformation::identity(x)],
            k: f.target().clone(),
            legs: vec![f.clone()],
            x: ext.clone(),
            injections: vec![injection],
        })
    }
}

/// How `beta` was forced on one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chain {
    /// `x = injection_d(i)(e)`
    Direct { d: ObjId, i: ObjId, element: usize },
    /// `x = X(m)(z)` for an earlier element `z` of `X(dom m)`
    Pushed { morphism: MorId, from: usize },
}

#[derive(Clone, Debug)]
pub struct JointKanFactor {
    pub beta: SetTransformation,
    pub chains: Vec<Vec<Chain>>,
}

/// The unique `beta: X => Y` with `beta K_d . injection_d = mu_d`.
pub fn joint_lan_factor(
    data: &JointKanData,
    y: &SetDiagram,
    mu: &[SetTransformation],
) -> Result<JointKanFactor, KanError> {
    let d = &data.d_shape;
    let k = &data.k;
    if !same_category(y.shape(), k) || !same_category(data.x.shape(), k) {
        return Err(KanError::ShapeMismatch("Y and X must live on K".into()));
    }
    if mu.len() != d.object_count()
        || data.legs.len() != d.object_count()
        || data.injections.len() != d.object_count()
        || data.family.len() != d.object_count()
        || data.transitions.len() != d.morphism_count()
        || data.phi.len() != d.morphism_count()
    {
        return Err(KanError::ShapeMismatch("one entry per index object and morphism".into()));
    }
    for o in d.objects() {
        let leg = &data.legs[o.0];
        let xd = &data.family[o.0];
        if !same_category(leg.target(), k) || !same_category(leg.source(), xd.shape()) {
            return Err(KanError::ShapeMismatch(format!("leg at {}", d.obj_name(o))));
        }
        if mu[o.0].source() != xd || *mu[o.0].target() != restrict(y, leg)? {
            return Err(KanError::ShapeMismatch(format!("mu at {}", d.obj_name(o))));
        }
    }
    // mu_e(Phi u) . phi^u = mu_d
    for u in d.morphisms() {
        let (a, b) = (d.dom(u), d.cod(u));
        let phi_u = &data.transitions[u.0];
        let src = &data.family[a.0];
        for i in src.shape().objects() {
            for e in 0..src.set(i).len() {
                let via = mu[b.0].component(phi_u.obj(i)).apply(data.phi[u.0].component(i).apply(e));
                let direct = mu[a.0].component(i).apply(e);
                if via != direct {
                    return Err(KanError::IncompatibleFamily {
                        morphism: d.mor_name(u).to_string(),
                        witness: json!({
                            "morphism": d.mor_name(u),
                            "object": src.shape().obj_name(i),
                            "element": src.set(i).name(e),
                        }),
                    });
                }
            }
        }
    }
    let x = &data.x;
    let mut beta: Vec<Vec<Option<usize>>> = k.objects().map(|o| vec![None; x.set(o).len()]).collect();
    let mut chains: Vec<Vec<Option<Chain>>> = k.objects().map(|o| vec![None; x.set(o).len()]).collect();
    let mut queue = Vec::new();
    let assign = |obj: ObjId,
                      elem: usize,
                      value: usize,
                      chain: Chain,
                      beta: &mut Vec<Vec<Option<usize>>>,
                      chains: &mut Vec<Vec<Option<Chain>>>,
                      queue: &mut Vec<(ObjId, usize)>|
     -> Result<(), KanError> {
        match beta[obj.0][elem] {
            Some(v) if v != value => Err(KanError::NoSolution {
                reason: format!(
                    "element {} of {} is forced to two values",
                    x.set(obj).name(elem),
                    k.obj_name(obj)
                ),
                witness: json!({
                    "object": k.obj_name(obj),
                    "element": x.set(obj).name(elem),
                    "values": [y.set(obj).name(v), y.set(obj).name(value)],
                }),
            }),
            Some(_) => Ok(()),
            None => {
                beta[obj.0][elem] = Some(value);
                chains[obj.0][elem] = Some(chain);
                queue.push((obj, elem));
                Ok(())
            }
        }
    };
    for o in d.objects() {
        let leg = &data.legs[o.0];
        let xd = &data.family[o.0];
        for i in xd.shape().objects() {
            let ki = leg.obj(i);
            for e in 0..xd.set(i).len() {
                let target = data.injections[o.0].component(i).apply(e);
                let value = mu[o.0].component(i).apply(e);
                assign(
                    ki,
                    target,
                    value,
                    Chain::Direct { d: o, i, element: e },
                    &mut beta,
                    &mut chains,
                    &mut queue,
                )?;
            }
        }
    }
    while let Some((obj, elem)) = queue.pop() {
        let value = beta[obj.0][elem].unwrap();
        for &m in k.outgoing(obj) {
            let b = k.cod(m);
            assign(
                b,
                x.apply(m, elem),
                y.apply(m, value),
                Chain::Pushed { morphism: m, from: elem },
                &mut beta,
                &mut chains,
                &mut queue,
            )?;
        }
    }
    let mut components = Vec::with_capacity(k.object_count());
    for o in k.objects() {
        let mut mapping = Vec::with_capacity(x.set(o).len());
        for (e, v) in beta[o.0].iter().enumerate() {
            match v {
                Some(v) => mapping.push(*v),
                None => {
                    return Err(KanError::NoSolution {
                        reason: format!("element {} of {} is unconstrained", x.set(o).name(e), k.obj_name(o)),
                        witness: json!({"object": k.obj_name(o), "element": x.set(o).name(e)}),
                    })
                }
            }
        }
        components.push(FinFunction::new(x.set(o).clone(), y.set(o).clone(), mapping)?);
    }
    // propagation along all outgoing morphisms makes beta natural
    let beta = SetTransformation::new(x.clone(), y.clone(), components)?;
    let chains = chains
        .into_iter()
        .map(|v| v.into_iter().map(Option::unwrap).collect())
        .collect();
    Ok(JointKanFactor { beta, chains })
}
