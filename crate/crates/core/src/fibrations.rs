//! Cartesian and cocartesian morphisms, split (co)fibrations given by explicit
//! cleavages, bifibrations, limit lifting, the free split cofibration and the
//! fibred diagram category `Diag(P)`.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::fincat::search::{all_cones, enumerate_functors, enumerate_transformations, find_limit, terminality_defect, Cone};
use crate::fincat::{comma, compose_functor, CategoryBuilder, FinCategory, FinFunctor, MorId, NatTransformation, ObjId};
use crate::fixtures;
use crate::grothendieck::{groth_co, CatDiagram, GrothendieckResult, Variance};
use crate::report::VerificationReport;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FibError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("no lifting of {u} at {object}: {reason}")]
    MissingLifting { u: String, object: String, reason: String },
    #[error("lifting of {u} at {object} is malformed: {reason}")]
    BadLifting { u: String, object: String, reason: String },
    #[error("lifting of {u} at {object} is not cartesian")]
    NotCartesian { u: String, object: String, witness: Value },
    #[error("lifting of {u} at {object} is not cocartesian")]
    NotCocartesian { u: String, object: String, witness: Value },
    #[error("split law fails at ({u}, {v})")]
    SplitLawViolation { u: String, v: String },
    #[error("induced transitions are not functorial: {0}")]
    NonFunctorialTransition(String),
    #[error("triangle identity fails for {u}")]
    TriangleViolation { u: String },
    #[error("hom bijection fails for {u} at ({x}, {y})")]
    HomBijectionFailure { u: String, x: String, y: String, witness: Value },
    #[error("the base diagram has no limit")]
    NoBaseLimit { witness: Value },
    #[error("the fibre diagram over {object} has no limit")]
    NoFibreLimit { object: String, witness: Value },
    #[error("lifted cone is not a limit")]
    TerminalityFailure { witness: Value },
    #[error("square does not commute: {0}")]
    SquareNotCommuting(String),
    #[error("not a morphism of Diag(P): {0}")]
    NotAMorphism(String),
    #[error("certification fails: {equation}")]
    CertificationFailure { equation: String, witness: Value },
}

impl FibError {
    pub fn witness(&self) -> Value {
        let msg = self.to_string();
        match self {
            FibError::NotCartesian { u, object, witness } | FibError::NotCocartesian { u, object, witness } => {
                json!({"reason": msg, "u": u, "object": object, "filler": witness})
            }
            FibError::HomBijectionFailure { u, x, y, witness } => {
                json!({"reason": msg, "u": u, "x": x, "y": y, "counts": witness})
            }
            FibError::MissingLifting { u, object, .. } | FibError::BadLifting { u, object, .. } => {
                json!({"reason": msg, "u": u, "object": object})
            }
            FibError::SplitLawViolation { u, v } => json!({"reason": msg, "u": u, "v": v}),
            FibError::TriangleViolation { u } => json!({"reason": msg, "u": u}),
            FibError::NoBaseLimit { witness }
            | FibError::NoFibreLimit { witness, .. }
            | FibError::TerminalityFailure { witness }
            | FibError::CertificationFailure { witness, .. } => json!({"reason": msg, "detail": witness}),
            _ => json!({"reason": msg}),
        }
    }

    pub fn report(&self, check: &str) -> VerificationReport {
        VerificationReport::fail(check, self.witness())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Fibration,
    Cofibration,
}

/// A functor with a chosen lifting per base morphism and fibre object.
///
/// Fibration: `(u, y) -> theta^u_y` with `y` over `cod u`.
/// Cofibration: `(u, x) -> delta^u_x` with `x` over `dom u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleavageData {
    pub base_functor: FinFunctor,
    pub direction: Direction,
    pub lifting: HashMap<(MorId, ObjId), MorId>,
}

/// The fibres of a functor as categories, with the maps back into the
/// total category.
#[derive(Clone, Debug)]
pub struct Fibres {
    pub categories: Vec<Arc<FinCategory>>,
    /// fibre-local object index -> total object, per base object
    pub objects: Vec<Vec<ObjId>>,
    pub morphisms: Vec<Vec<MorId>>,
    obj_local: Vec<usize>,
    mor_local: Vec<Option<usize>>,
}

impl Fibres {
    pub fn of(p: &FinFunctor) -> Fibres {
        let (e, b) = (p.source(), p.target());
        let mut objects = vec![Vec::new(); b.object_count()];
        let mut morphisms = vec![Vec::new(); b.object_count()];
        let mut obj_local = vec![0; e.object_count()];
        let mut mor_local = vec![None; e.morphism_count()];
        for x in e.objects() {
            let a = p.obj(x);
            obj_local[x.0] = objects[a.0].len();
            objects[a.0].push(x);
        }
        for m in e.morphisms() {
            let u = p.mor(m);
            if b.is_identity(u) {
                let a = b.dom(u);
                mor_local[m.0] = Some(morphisms[a.0].len());
                morphisms[a.0].push(m);
            }
        }
        let categories = b
            .objects()
            .map(|a| {
                let mut builder = CategoryBuilder::new();
                for &x in &objects[a.0] {
                    builder.object(e.obj_name(x));
                }
                for &m in &morphisms[a.0] {
                    builder.morphism(
                        e.mor_name(m),
                        ObjId(obj_local[e.dom(m).0]),
                        ObjId(obj_local[e.cod(m).0]),
                    );
                }
                for (i, &x) in objects[a.0].iter().enumerate() {
                    builder.set_identity(ObjId(i), MorId(mor_local[e.identity(x).0].unwrap()));
                }
                let ms = &morphisms[a.0];
                let c = builder
                    .build(|g, f| mor_local[e.comp(ms[g.0], ms[f.0]).0].map(MorId))
                    .expect("fibres are subcategories");
                Arc::new(c)
            })
            .collect();
        Fibres {
            categories,
            objects,
            morphisms,
            obj_local,
            mor_local,
        }
    }

    pub fn local_object(&self, x: ObjId) -> ObjId {
        ObjId(self.obj_local[x.0])
    }

    /// Fibre-local index of a vertical morphism.
    pub fn local_morphism(&self, m: MorId) -> Option<MorId> {
        self.mor_local[m.0].map(MorId)
    }

    pub fn global_object(&self, a: ObjId, x: ObjId) -> ObjId {
        self.objects[a.0][x.0]
    }

    pub fn global_morphism(&self, a: ObjId, m: MorId) -> MorId {
        self.morphisms[a.0][m.0]
    }

    /// `J_a`
    pub fn inclusion(&self, a: ObjId, e: &Arc<FinCategory>) -> FinFunctor {
        FinFunctor::new(
            self.categories[a.0].clone(),
            e.clone(),
            self.objects[a.0].clone(),
            self.morphisms[a.0].clone(),
        )
        .expect("fibre inclusion")
    }
}

/// Number of fillers for the first `(z, h, w)` that does not have exactly
/// one, or `None` when `f` is cartesian.
fn cartesian_defect(p: &FinFunctor, f: MorId) -> Option<Value> {
    let (e, b) = (p.source(), p.target());
    let (x, y) = (e.dom(f), e.cod(f));
    let u = p.mor(f);
    let a = b.dom(u);
    for z in e.objects() {
        for &h in e.hom(z, y) {
            for &w in b.hom(p.obj(z), a) {
                if b.comp(u, w) != p.mor(h) {
                    continue;
                }
                let n = e
                    .hom(z, x)
                    .iter()
                    .filter(|&&t| e.comp(f, t) == h && p.mor(t) == w)
                    .count();
                if n != 1 {
                    return Some(json!({
                        "z": e.obj_name(z), "h": e.mor_name(h), "w": b.mor_name(w), "fillers": n
                    }));
                }
            }
        }
    }
    None
}

/// Passes iff every `(z, h, w)` with `Pf . w = Ph` has exactly one filler.
pub fn is_cartesian(p: &FinFunctor, f: MorId) -> VerificationReport {
    match cartesian_defect(p, f) {
        None => VerificationReport::pass("is_cartesian"),
        Some(w) => VerificationReport::fail("is_cartesian", w),
    }
}

/// `f` is `P`-cocartesian iff it is `P^op`-cartesian.
pub fn is_cocartesian(p: &FinFunctor, f: MorId) -> VerificationReport {
    match cartesian_defect(&p.opposite(), f) {
        None => VerificationReport::pass("is_cocartesian"),
        Some(w) => VerificationReport::fail("is_cocartesian", w),
    }
}

fn dual_data(data: &CleavageData) -> FinFunctor {
    match data.direction {
        Direction::Fibration => data.base_functor.clone(),
        Direction::Cofibration => data.base_functor.opposite(),
    }
}

/// The smallest-token (co)cartesian lifting at every base morphism and fibre
/// object. Fails if some lifting has no (co)cartesian candidate.
pub fn canonical_cleavage(p: &FinFunctor, direction: Direction) -> Result<CleavageData, FibError> {
    let q = match direction {
        Direction::Fibration => p.clone(),
        Direction::Cofibration => p.opposite(),
    };
    let (e, b) = (q.source(), q.target());
    let mut lifting = HashMap::new();
    for u in b.morphisms() {
        let a = b.dom(u);
        for y in e.objects().filter(|&y| q.obj(y) == b.cod(u)) {
            let best = e
                .objects()
                .filter(|&x| q.obj(x) == a)
                .flat_map(|x| e.hom(x, y).iter().copied())
                .filter(|&m| q.mor(m) == u && cartesian_defect(&q, m).is_none())
                .min_by(|&m, &n| e.mor_name(m).cmp(e.mor_name(n)));
            match best {
                Some(m) => {
                    lifting.insert((u, y), m);
                }
                None => {
                    return Err(FibError::MissingLifting {
                        u: b.mor_name(u).to_string(),
                        object: e.obj_name(y).to_string(),
                        reason: match direction {
                            Direction::Fibration => "no cartesian lifting".into(),
                            Direction::Cofibration => "no cocartesian lifting".into(),
                        },
                    })
                }
            }
        }
    }
    Ok(CleavageData {
        base_functor: p.clone(),
        direction,
        lifting,
    })
}

/// Whether `P` is a fibration (cofibration); on success the canonical
/// cleavage is returned and whether it happens to be split is recorded.
pub fn is_fibration(p: &FinFunctor, direction: Direction) -> (VerificationReport, Option<CleavageData>) {
    let check = match direction {
        Direction::Fibration => "is_fibration",
        Direction::Cofibration => "is_cofibration",
    };
    match canonical_cleavage(p, direction) {
        Ok(data) => {
            let split = verify_split(&data).is_ok();
            (VerificationReport::pass(check).with_stat("canonical_cleavage_split", split), Some(data))
        }
        Err(e) => (e.report(check), None),
    }
}

/// Lifting keys and values have the right shape: every key present, each
/// lifting over `u` with the right endpoint. Works on the fibration side of
/// `q` (the opposite functor for cofibrations).
fn check_lifting_shape(q: &FinFunctor, lifting: &HashMap<(MorId, ObjId), MorId>) -> Result<(), FibError> {
    let (e, b) = (q.source(), q.target());
    let mut expected = 0;
    for u in b.morphisms() {
        for y in e.objects().filter(|&y| q.obj(y) == b.cod(u)) {
            expected += 1;
            let (un, yn) = (b.mor_name(u).to_string(), e.obj_name(y).to_string());
            let Some(&m) = lifting.get(&(u, y)) else {
                return Err(FibError::MissingLifting {
                    u: un,
                    object: yn,
                    reason: "absent from the cleavage".into(),
                });
            };
            if m.0 >= e.morphism_count() {
                return Err(FibError::BadLifting {
                    u: un,
                    object: yn,
                    reason: "unknown morphism".into(),
                });
            }
            if q.mor(m) != u {
                return Err(FibError::BadLifting {
                    u: un,
                    object: yn,
                    reason: format!("{} lies over {}", e.mor_name(m), b.mor_name(q.mor(m))),
                });
            }
            if e.cod(m) != y {
                return Err(FibError::BadLifting {
                    u: un,
                    object: yn,
                    reason: format!("{} ends at {}", e.mor_name(m), e.obj_name(e.cod(m))),
                });
            }
        }
    }
    if lifting.len() != expected {
        return Err(FibError::ShapeMismatch("cleavage has entries outside the base functor".into()));
    }
    Ok(())
}

/// Unique vertical `t: dom(theta) <- ...` with `theta . t = target`, i.e. the
/// cartesian filler over an identity.
fn vertical_filler(q: &FinFunctor, theta: MorId, from: ObjId, target: MorId) -> Result<MorId, usize> {
    let e = q.source();
    let b = q.target();
    let found: Vec<MorId> = e
        .hom(from, e.dom(theta))
        .iter()
        .copied()
        .filter(|&t| b.is_identity(q.mor(t)) && e.comp(theta, t) == target)
        .collect();
    if found.len() == 1 {
        Ok(found[0])
    } else {
        Err(found.len())
    }
}

/// Transition maps, as fibre-local indices, of a verified fibration side.
type LocalMaps = Vec<(Vec<ObjId>, Vec<MorId>)>;

fn verify_core(q: &FinFunctor, lifting: &HashMap<(MorId, ObjId), MorId>, cofib: bool) -> Result<LocalMaps, FibError> {
    check_lifting_shape(q, lifting)?;
    let (e, b) = (q.source(), q.target());
    let mut keys: Vec<&(MorId, ObjId)> = lifting.keys().collect();
    keys.sort();
    for &&(u, y) in &keys {
        if let Some(w) = cartesian_defect(q, lifting[&(u, y)]) {
            let (u, object) = (b.mor_name(u).to_string(), e.obj_name(y).to_string());
            return Err(if cofib {
                FibError::NotCocartesian { u, object, witness: w }
            } else {
                FibError::NotCartesian { u, object, witness: w }
            });
        }
    }
    for &&(u, y) in &keys {
        if b.is_identity(u) && !e.is_identity(lifting[&(u, y)]) {
            let n = b.mor_name(u).to_string();
            return Err(FibError::SplitLawViolation { u: n.clone(), v: n });
        }
    }
    let pull = |u: MorId, y: ObjId| e.dom(lifting[&(u, y)]);
    for u in b.morphisms() {
        for &v in b.outgoing(b.cod(u)) {
            let vu = b.comp(v, u);
            for z in e.objects().filter(|&z| q.obj(z) == b.cod(v)) {
                let lhs = lifting[&(vu, z)];
                let rhs = e.compose(lifting[&(v, z)], lifting[&(u, pull(v, z))]);
                if rhs != Some(lhs) {
                    return Err(FibError::SplitLawViolation {
                        u: b.mor_name(u).to_string(),
                        v: b.mor_name(v).to_string(),
                    });
                }
            }
        }
    }
    let fibres = Fibres::of(q);
    let mut maps = Vec::with_capacity(b.morphism_count());
    for u in b.morphisms() {
        let (a, bb) = (b.dom(u), b.cod(u));
        let objects: Vec<ObjId> = fibres.objects[bb.0]
            .iter()
            .map(|&y| fibres.local_object(pull(u, y)))
            .collect();
        let mut morphisms = Vec::with_capacity(fibres.morphisms[bb.0].len());
        for &g in &fibres.morphisms[bb.0] {
            let (y, y2) = (e.dom(g), e.cod(g));
            let target = e.comp(g, lifting[&(u, y)]);
            let t = vertical_filler(q, lifting[&(u, y2)], pull(u, y), target).map_err(|n| {
                let (u, object) = (b.mor_name(u).to_string(), e.obj_name(y2).to_string());
                let witness = json!({"vertical": e.mor_name(g), "fillers": n});
                if cofib {
                    FibError::NotCocartesian { u, object, witness }
                } else {
                    FibError::NotCartesian { u, object, witness }
                }
            })?;
            morphisms.push(fibres.local_morphism(t).expect("filler is vertical"));
        }
        debug_assert!(objects.iter().all(|o| o.0 < fibres.objects[a.0].len()));
        maps.push((objects, morphisms));
    }
    Ok(maps)
}

/// A cleavage that passed verification, with its extracted indexed category.
#[derive(Clone, Debug)]
pub struct SplitCleavage {
    pub data: CleavageData,
    pub fibres: Fibres,
    /// contravariant `Phi^P` for fibrations, covariant `Phi_P` for
    /// cofibrations
    pub diagram: CatDiagram,
}

impl SplitCleavage {
    pub fn functor(&self) -> &FinFunctor {
        &self.data.base_functor
    }

    pub fn total(&self) -> &Arc<FinCategory> {
        self.data.base_functor.source()
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        self.data.base_functor.target()
    }

    pub fn lift(&self, u: MorId, x: ObjId) -> MorId {
        self.data.lifting[&(u, x)]
    }

    /// `u*y` or `u_!x` as a total object.
    pub fn transport_object(&self, u: MorId, x: ObjId) -> ObjId {
        let m = self.lift(u, x);
        match self.data.direction {
            Direction::Fibration => self.total().dom(m),
            Direction::Cofibration => self.total().cod(m),
        }
    }

    /// `u*g` or `u_!g` for a vertical total morphism `g`.
    pub fn transport_morphism(&self, u: MorId, g: MorId) -> MorId {
        let b = self.base();
        let (from, to) = match self.data.direction {
            Direction::Fibration => (b.cod(u), b.dom(u)),
            Direction::Cofibration => (b.dom(u), b.cod(u)),
        };
        let local = self.fibres.local_morphism(g).expect("vertical morphism");
        debug_assert_eq!(self.functor().obj(self.total().dom(g)), from);
        self.fibres.global_morphism(to, self.diagram.transition(u).mor(local))
    }
}

fn assemble(data: &CleavageData, maps: LocalMaps) -> Result<SplitCleavage, FibError> {
    let p = &data.base_functor;
    let b = p.target();
    let fibres = Fibres::of(p);
    let variance = match data.direction {
        Direction::Fibration => Variance::Contravariant,
        Direction::Cofibration => Variance::Covariant,
    };
    let transitions = b
        .morphisms()
        .zip(maps)
        .map(|(u, (objects, morphisms))| {
            let (from, to) = match variance {
                Variance::Contravariant => (b.cod(u), b.dom(u)),
                Variance::Covariant => (b.dom(u), b.cod(u)),
            };
            FinFunctor::new(fibres.categories[from.0].clone(), fibres.categories[to.0].clone(), objects, morphisms)
                .map_err(|e| FibError::NonFunctorialTransition(format!("{}: {e}", b.mor_name(u))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let diagram = CatDiagram::new(b.clone(), fibres.categories.clone(), transitions, variance)
        .map_err(|e| FibError::NonFunctorialTransition(e.to_string()))?;
    Ok(SplitCleavage {
        data: data.clone(),
        fibres,
        diagram,
    })
}

pub(crate) fn verify_split(data: &CleavageData) -> Result<SplitCleavage, FibError> {
    let q = dual_data(data);
    let maps = verify_core(&q, &data.lifting, data.direction == Direction::Cofibration)?;
    assemble(data, maps)
}

/// All liftings cartesian, `theta^1 = 1`, `theta^{vu} = theta^v . theta^u v*`,
/// and the induced `u*` functorial. Returns the extracted `Phi^P`.
pub fn verify_split_fibration(data: &CleavageData) -> Result<SplitCleavage, FibError> {
    if data.direction != Direction::Fibration {
        return Err(FibError::ShapeMismatch("expected a fibration cleavage".into()));
    }
    verify_split(data)
}

/// Dual of [`verify_split_fibration`]: `delta^{vu} = delta^v u_! . delta^u`.
pub fn verify_split_cofibration(data: &CleavageData) -> Result<SplitCleavage, FibError> {
    if data.direction != Direction::Cofibration {
        return Err(FibError::ShapeMismatch("expected a cofibration cocleavage".into()));
    }
    verify_split(data)
}

/// Report form of the two verifications.
pub fn verify_report(data: &CleavageData) -> VerificationReport {
    let check = match data.direction {
        Direction::Fibration => "verify_split_fibration",
        Direction::Cofibration => "verify_split_cofibration",
    };
    match verify_split(data) {
        Ok(sc) => VerificationReport::pass(check)
            .with_stat("liftings", data.lifting.len())
            .with_stat("fibres", sc.fibres.categories.len()),
        Err(e) => e.report(check),
    }
}

/// The cleavage (or cocleavage) of a Grothendieck construction, keyed by
/// total objects.
pub fn cleavage_of(groth: &GrothendieckResult) -> CleavageData {
    let b = groth.diagram.shape();
    let (direction, end): (Direction, fn(&FinCategory, MorId) -> ObjId) = match groth.diagram.variance() {
        Variance::Covariant => (Direction::Cofibration, FinCategory::dom),
        Variance::Contravariant => (Direction::Fibration, FinCategory::cod),
    };
    let lifting = groth
        .lifts
        .iter()
        .map(|(&(u, x), &m)| ((u, groth.object(end(b, u), x)), m))
        .collect();
    CleavageData {
        base_functor: groth.projection.clone(),
        direction,
        lifting,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorizationStyle {
    VerticalCartesian,
    CocartesianVertical,
}

/// `f = second . first`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationResult {
    pub first: MorId,
    pub second: MorId,
    pub style: FactorizationStyle,
}

/// `f = theta^u_y . eps_f` for fibrations, `f = nu_f . delta^u_x` for
/// cofibrations.
pub fn factorize(sc: &SplitCleavage, f: MorId) -> Result<FactorizationResult, FibError> {
    let e = sc.total();
    let p = sc.functor();
    if f.0 >= e.morphism_count() {
        return Err(FibError::ShapeMismatch("morphism outside the total category".into()));
    }
    let u = p.mor(f);
    let (x, y) = (e.dom(f), e.cod(f));
    let vertical = |from: ObjId, to: ObjId, pred: &dyn Fn(MorId) -> bool| -> Vec<MorId> {
        e.hom(from, to)
            .iter()
            .copied()
            .filter(|&t| p.target().is_identity(p.mor(t)) && pred(t))
            .collect()
    };
    let fail = |n: usize| FibError::CertificationFailure {
        equation: "unique vertical factor".into(),
        witness: json!({"morphism": e.mor_name(f), "candidates": n}),
    };
    match sc.data.direction {
        Direction::Fibration => {
            let theta = sc.lift(u, y);
            let found = vertical(x, e.dom(theta), &|t| e.comp(theta, t) == f);
            match found[..] {
                [eps] => Ok(FactorizationResult {
                    first: eps,
                    second: theta,
                    style: FactorizationStyle::VerticalCartesian,
                }),
                _ => Err(fail(found.len())),
            }
        }
        Direction::Cofibration => {
            let delta = sc.lift(u, x);
            let found = vertical(e.cod(delta), y, &|t| e.comp(t, delta) == f);
            match found[..] {
                [nu] => Ok(FactorizationResult {
                    first: delta,
                    second: nu,
                    style: FactorizationStyle::CocartesianVertical,
                }),
                _ => Err(fail(found.len())),
            }
        }
    }
}

/// Units and counits of `u_! -| u*` for a bifibration, over fibre
/// categories.
#[derive(Clone, Debug)]
pub struct BifibrationWitness {
    pub fibration: SplitCleavage,
    pub cofibration: SplitCleavage,
    /// `eta^u: Id => u* u_!` on the fibre over `dom u`
    pub units: Vec<NatTransformation>,
    /// `eps^u: u_! u* => Id` on the fibre over `cod u`
    pub counits: Vec<NatTransformation>,
}

/// Hom-set bijections `E_a(x, u*y) = E_u(x, y) = E_b(u_!x, y)` for the
/// given cleavage candidate and a verified cocleavage.
fn hom_bijections(cofib: &SplitCleavage, cleavage: &CleavageData) -> Result<(), FibError> {
    let p = cofib.functor();
    let (e, b) = (p.source(), p.target());
    for u in b.morphisms() {
        let (a, bb) = (b.dom(u), b.cod(u));
        for &x in &cofib.fibres.objects[a.0] {
            for &y in &cofib.fibres.objects[bb.0] {
                let over: Vec<MorId> = e.hom(x, y).iter().copied().filter(|&m| p.mor(m) == u).collect();
                let theta = cleavage.lifting[&(u, y)];
                let delta = cofib.lift(u, x);
                let mut via_pull: Vec<MorId> = e
                    .hom(x, e.dom(theta))
                    .iter()
                    .filter(|&&g| b.is_identity(p.mor(g)))
                    .map(|&g| e.comp(theta, g))
                    .collect();
                let mut via_push: Vec<MorId> = e
                    .hom(e.cod(delta), y)
                    .iter()
                    .filter(|&&k| b.is_identity(p.mor(k)))
                    .map(|&k| e.comp(k, delta))
                    .collect();
                let (np, nq) = (via_pull.len(), via_push.len());
                via_pull.sort();
                via_pull.dedup();
                via_push.sort();
                via_push.dedup();
                let mut sorted = over.clone();
                sorted.sort();
                if via_pull != sorted || via_push != sorted || np != sorted.len() || nq != sorted.len() {
                    return Err(FibError::HomBijectionFailure {
                        u: b.mor_name(u).to_string(),
                        x: e.obj_name(x).to_string(),
                        y: e.obj_name(y).to_string(),
                        witness: json!({"over_u": sorted.len(), "fibre_a": np, "fibre_b": nq}),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Verifies both liftings, the hom-set bijections, and builds the units and
/// counits from `theta^u u_! . eta^u = delta^u` and
/// `eps^u . delta^u u* = theta^u`, checking both triangle identities.
pub fn bifibration_check(cocleavage: &CleavageData, cleavage: &CleavageData) -> Result<BifibrationWitness, FibError> {
    if cocleavage.base_functor != cleavage.base_functor {
        return Err(FibError::ShapeMismatch("cleavages over different functors".into()));
    }
    let cofib = verify_split_cofibration(cocleavage)?;
    check_lifting_shape(&cleavage.base_functor, &cleavage.lifting)?;
    hom_bijections(&cofib, cleavage)?;
    let fib = verify_split_fibration(cleavage)?;
    let p = cofib.functor().clone();
    let (e, b) = (p.source(), p.target());
    let fibres = &cofib.fibres;
    let mut units = Vec::with_capacity(b.morphism_count());
    let mut counits = Vec::with_capacity(b.morphism_count());
    for u in b.morphisms() {
        let (a, bb) = (b.dom(u), b.cod(u));
        let triangle = || FibError::TriangleViolation {
            u: b.mor_name(u).to_string(),
        };
        let push = cofib.diagram.transition(u);
        let pull = fib.diagram.transition(u);
        let mut eta = Vec::new();
        for &x in &fibres.objects[a.0] {
            let ux = cofib.transport_object(u, x);
            let theta = fib.lift(u, ux);
            let t = vertical_filler(&p, theta, x, cofib.lift(u, x)).map_err(|_| triangle())?;
            eta.push(fibres.local_morphism(t).unwrap());
        }
        let mut eps = Vec::new();
        for &y in &fibres.objects[bb.0] {
            let uy = fib.transport_object(u, y);
            let delta = cofib.lift(u, uy);
            let found: Vec<MorId> = e
                .hom(e.cod(delta), y)
                .iter()
                .copied()
                .filter(|&s| b.is_identity(p.mor(s)) && e.comp(s, delta) == fib.lift(u, y))
                .collect();
            match found[..] {
                [s] => eps.push(fibres.local_morphism(s).unwrap()),
                _ => return Err(triangle()),
            }
        }
        let round_a = compose_functor(pull, push).map_err(|_| triangle())?;
        let round_b = compose_functor(push, pull).map_err(|_| triangle())?;
        let eta = NatTransformation::new(FinFunctor::identity(&fibres.categories[a.0]), round_a, eta)
            .map_err(|_| triangle())?;
        let eps = NatTransformation::new(round_b, FinFunctor::identity(&fibres.categories[bb.0]), eps)
            .map_err(|_| triangle())?;
        let (ca, cb) = (&fibres.categories[a.0], &fibres.categories[bb.0]);
        for x in ca.objects() {
            let ux = push.obj(x);
            if !cb.is_identity(cb.comp(eps.component(ux), push.mor(eta.component(x)))) {
                return Err(triangle());
            }
        }
        for y in cb.objects() {
            let uy = pull.obj(y);
            if !ca.is_identity(ca.comp(pull.mor(eps.component(y)), eta.component(uy))) {
                return Err(triangle());
            }
        }
        units.push(eta);
        counits.push(eps);
    }
    Ok(BifibrationWitness {
        fibration: fib,
        cofibration: cofib,
        units,
        counits,
    })
}

/// A limit cone in the total category built from cartesian liftings of the
/// base limit and a fibre limit.
#[derive(Clone, Debug)]
pub struct LiftedLimit {
    pub cone: Cone,
    pub base_cone: Cone,
    /// limit cone of the fibre diagram `L`, fibre-local
    pub fibre_cone: Cone,
    pub report: VerificationReport,
}

/// `b = lim PF`, `alpha_d = theta^{beta_d}_{Fd}`, `z = lim L` in the fibre
/// over `b`, and the cone `alpha . J_b lambda`, certified terminal among all
/// cones over `F` and mapped by `P` onto the base limit cone.
pub fn lift_limit(w: &BifibrationWitness, f: &FinFunctor) -> Result<LiftedLimit, FibError> {
    let fib = &w.fibration;
    let p = fib.functor();
    let (e, b) = (p.source(), p.target());
    let d = f.source();
    let pf = compose_functor(p, f).map_err(|e| FibError::ShapeMismatch(e.to_string()))?;
    let base_search = find_limit(&pf);
    let Some(base_cone) = base_search.limit else {
        return Err(FibError::NoBaseLimit {
            witness: json!({"cones": base_search.cones.len(), "apexes": base_search.cones.iter().map(|c| b.obj_name(c.apex)).collect::<Vec<_>>()}),
        });
    };
    let apex = base_cone.apex;
    let alpha: Vec<MorId> = d.objects().map(|o| fib.lift(base_cone.legs[o.0], f.obj(o))).collect();
    let fibre = &fib.fibres.categories[apex.0];
    let objects: Vec<ObjId> = alpha.iter().map(|&m| fib.fibres.local_object(e.dom(m))).collect();
    let mut morphisms = Vec::with_capacity(d.morphism_count());
    for m in d.morphisms() {
        let (s, t) = (d.dom(m), d.cod(m));
        let target = e.comp(f.mor(m), alpha[s.0]);
        let filler = vertical_filler(p, alpha[t.0], e.dom(alpha[s.0]), target).map_err(|n| FibError::NotCartesian {
            u: b.mor_name(base_cone.legs[t.0]).to_string(),
            object: e.obj_name(f.obj(t)).to_string(),
            witness: json!({"fillers": n}),
        })?;
        morphisms.push(fib.fibres.local_morphism(filler).unwrap());
    }
    let l = FinFunctor::new(d.clone(), fibre.clone(), objects, morphisms)
        .map_err(|e| FibError::NonFunctorialTransition(e.to_string()))?;
    let fibre_search = find_limit(&l);
    let Some(fibre_cone) = fibre_search.limit else {
        return Err(FibError::NoFibreLimit {
            object: b.obj_name(apex).to_string(),
            witness: json!({"cones": fibre_search.cones.len()}),
        });
    };
    let z = fib.fibres.global_object(apex, fibre_cone.apex);
    let legs: Vec<MorId> = d
        .objects()
        .map(|o| e.comp(alpha[o.0], fib.fibres.global_morphism(apex, fibre_cone.legs[o.0])))
        .collect();
    let cone = Cone { apex: z, legs };
    let cones = all_cones(f);
    if let Some((other, n)) = terminality_defect(e, &cone, &cones) {
        return Err(FibError::TerminalityFailure {
            witness: json!({"other_apex": e.obj_name(other.apex), "factorizations": n}),
        });
    }
    let image_ok = p.obj(z) == apex && cone.legs.iter().zip(&base_cone.legs).all(|(&l, &bl)| p.mor(l) == bl);
    if !image_ok {
        return Err(FibError::TerminalityFailure {
            witness: json!({"reason": "image of the lifted cone differs from the base limit cone"}),
        });
    }
    let report = VerificationReport::pass("lift_limit")
        .with_stat("cones", cones.len())
        .with_stat("apex", e.obj_name(z));
    Ok(LiftedLimit {
        cone,
        base_cone,
        fibre_cone,
        report,
    })
}

/// `cod_P: P | B -> B` as the covariant Grothendieck construction of the
/// slices `P/b`, with `H_P: E -> P | B`.
#[derive(Clone, Debug)]
pub struct FreeCofibration {
    pub functor: FinFunctor,
    pub groth: GrothendieckResult,
    pub embedding: FinFunctor,
    /// per base object, the comma triple `(x, *, h)` of each fibre object
    pub triples: Vec<Vec<(ObjId, MorId)>>,
    /// per base object, the `E`-component of each fibre morphism
    pub components: Vec<Vec<MorId>>,
}

impl FreeCofibration {
    /// The total object `(h, x)`, `h: Px -> a`.
    pub fn object(&self, a: ObjId, x: ObjId, h: MorId) -> Option<ObjId> {
        let i = self.triples[a.0].iter().position(|&t| t == (x, h))?;
        Some(self.groth.object(a, ObjId(i)))
    }

    /// `(x, h)` for a total object.
    pub fn pair(&self, o: ObjId) -> (ObjId, MorId) {
        let (a, i) = self.groth.object_pairs[o.0];
        self.triples[a.0][i.0]
    }

    /// The `E`-component `f` of a total morphism `(u, f)`.
    pub fn component(&self, m: MorId) -> MorId {
        let (u, g) = self.groth.morphism_pairs[m.0];
        self.components[self.functor.target().cod(u).0][g.0]
    }

    pub fn cocleavage(&self) -> CleavageData {
        cleavage_of(&self.groth)
    }
}

pub fn free_cofibration(p: &FinFunctor) -> FreeCofibration {
    let b = p.target().clone();
    let e = p.source().clone();
    let one = Arc::new(fixtures::one());
    let slices: Vec<_> = b
        .objects()
        .map(|a| comma(p, &FinFunctor::constant(&one, &b, a)).expect("same target"))
        .collect();
    let fibres: Vec<Arc<FinCategory>> = slices.iter().map(|s| s.category.clone()).collect();
    let star = one.identity(ObjId(0));
    let transitions = b
        .morphisms()
        .map(|u| {
            let (src, tgt) = (&slices[b.dom(u).0], &slices[b.cod(u).0]);
            let objects: Vec<ObjId> = src
                .triples
                .iter()
                .map(|&(x, s, h)| tgt.find_object(x, s, b.comp(u, h)).expect("postcomposite is in the slice"))
                .collect();
            let morphisms = src
                .category
                .morphisms()
                .map(|m| {
                    let (s, t) = (objects[src.category.dom(m).0], objects[src.category.cod(m).0]);
                    let pair = src.pairs[m.0];
                    *tgt.category
                        .hom(s, t)
                        .iter()
                        .find(|&&n| tgt.pairs[n.0] == pair)
                        .expect("postcomposition keeps squares")
                })
                .collect();
            FinFunctor::new(src.category.clone(), tgt.category.clone(), objects, morphisms).expect("postcomposition")
        })
        .collect();
    let diagram = CatDiagram::new(b.clone(), fibres, transitions, Variance::Covariant).expect("slices are functorial");
    let groth = groth_co(&diagram).expect("covariant");
    let triples: Vec<Vec<(ObjId, MorId)>> = slices
        .iter()
        .map(|s| s.triples.iter().map(|&(x, _, h)| (x, h)).collect())
        .collect();
    let obj_of = |x: ObjId| {
        let a = p.obj(x);
        let i = triples[a.0].iter().position(|&t| t == (x, b.identity(a))).unwrap();
        groth.object(a, ObjId(i))
    };
    let objects: Vec<ObjId> = e.objects().map(obj_of).collect();
    let morphisms = e
        .morphisms()
        .map(|f| {
            let (x, y) = (e.dom(f), e.cod(f));
            let (pf, py) = (p.mor(f), p.obj(y));
            let slice = &slices[py.0];
            let s = slice.find_object(x, ObjId(0), pf).unwrap();
            let t = slice.find_object(y, ObjId(0), b.identity(py)).unwrap();
            let g = *slice
                .category
                .hom(s, t)
                .iter()
                .find(|&&n| slice.pairs[n.0] == (f, star))
                .unwrap();
            groth.morphism(objects[x.0], objects[y.0], pf, g).unwrap()
        })
        .collect();
    let embedding = FinFunctor::new(e.clone(), groth.total.clone(), objects, morphisms).expect("H_P is a functor");
    let components = slices.iter().map(|s| s.pairs.iter().map(|p| p.0).collect()).collect();
    FreeCofibration {
        functor: p.clone(),
        groth,
        embedding,
        triples,
        components,
    }
}

/// The four equations characterising `T~`: functoriality, cocleavage
/// preservation, `Q T~ = S cod_P` and `T~ H_P = T`.
pub fn certify_free_factor(
    free: &FreeCofibration,
    s: &FinFunctor,
    t: &FinFunctor,
    q: &SplitCleavage,
    object_images: &[ObjId],
    morphism_images: &[MorId],
) -> VerificationReport {
    let total = &free.groth.total;
    let fcat = q.total();
    let functorial = FinFunctor::new(total.clone(), fcat.clone(), object_images.to_vec(), morphism_images.to_vec());
    let Ok(tt) = functorial else {
        let err = functorial.unwrap_err();
        return VerificationReport::all(
            "free_factor",
            vec![VerificationReport::fail("functorial", json!({"reason": err.to_string()}))],
        );
    };
    let mut parts = vec![VerificationReport::pass("functorial")];
    let b = free.functor.target();
    let cocl = free.cocleavage();
    let bad = cocl.lifting.iter().find(|(&(u, x), &m)| {
        let image = tt.mor(m);
        image != q.lift(s.mor(u), tt.obj(x))
    });
    parts.push(match bad {
        None => VerificationReport::pass("cocleavage_preserving"),
        Some((&(u, x), _)) => VerificationReport::fail(
            "cocleavage_preserving",
            json!({"u": b.mor_name(u), "object": total.obj_name(x)}),
        ),
    });
    let lhs = compose_functor(q.functor(), &tt).ok();
    let rhs = compose_functor(s, &free.groth.projection).ok();
    parts.push(if lhs.is_some() && lhs == rhs {
        VerificationReport::pass("projection_square")
    } else {
        VerificationReport::fail("projection_square", json!({"reason": "Q T~ differs from S cod"}))
    });
    let restricted = compose_functor(&tt, &free.embedding).ok();
    parts.push(if restricted.as_ref() == Some(t) {
        VerificationReport::pass("restricts_to_t")
    } else {
        VerificationReport::fail("restricts_to_t", json!({"reason": "T~ H_P differs from T"}))
    });
    VerificationReport::all("free_factor", parts)
}

/// `T~(u, f) = (Sk)_!(nu_{Tf}) . delta^{Su}_{(Sh)_!(Tx)}` on a morphism
/// `(u, f): (h, x) -> (k, y)` of `P | B`.
pub fn free_factor(
    free: &FreeCofibration,
    s: &FinFunctor,
    t: &FinFunctor,
    q: &SplitCleavage,
) -> Result<FinFunctor, FibError> {
    if q.data.direction != Direction::Cofibration {
        return Err(FibError::ShapeMismatch("Q must be a split cofibration".into()));
    }
    let p = &free.functor;
    let qt = compose_functor(q.functor(), t).map_err(|e| FibError::SquareNotCommuting(e.to_string()))?;
    let sp = compose_functor(s, p).map_err(|e| FibError::SquareNotCommuting(e.to_string()))?;
    if qt != sp {
        return Err(FibError::SquareNotCommuting("Q T differs from S P".into()));
    }
    let total = &free.groth.total;
    let fcat = q.total();
    let objects: Vec<ObjId> = total
        .objects()
        .map(|o| {
            let (x, h) = free.pair(o);
            q.transport_object(s.mor(h), t.obj(x))
        })
        .collect();
    let mut morphisms = Vec::with_capacity(total.morphism_count());
    for m in total.morphisms() {
        let (u, _) = free.groth.morphism_pairs[m.0];
        let (x, h) = free.pair(total.dom(m));
        let (_, k) = free.pair(total.cod(m));
        let f = free.component(m);
        let nu = factorize(q, t.mor(f))?.second;
        let left = q.transport_morphism(s.mor(k), nu);
        let right = q.lift(s.mor(u), q.transport_object(s.mor(h), t.obj(x)));
        let composite = fcat.compose(left, right).ok_or_else(|| FibError::CertificationFailure {
            equation: "composable factors".into(),
            witness: json!({"morphism": total.mor_name(m)}),
        })?;
        morphisms.push(composite);
    }
    let report = certify_free_factor(free, s, t, q, &objects, &morphisms);
    if !report.is_pass() {
        return Err(FibError::CertificationFailure {
            equation: "free_factor".into(),
            witness: report.witness,
        });
    }
    Ok(FinFunctor::new(total.clone(), fcat.clone(), objects, morphisms).expect("certified functorial"))
}

/// An object `(a, I, X)` of `Diag(P)`: `X: I -> E` lands in the fibre over `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagPObject {
    pub base: ObjId,
    pub diagram: FinFunctor,
}

impl DiagPObject {
    pub fn shape(&self) -> &Arc<FinCategory> {
        self.diagram.source()
    }
}

/// `(u, F, phi): (a, I, X) -> (b, J, Y)` with `phi: X => Y F` and
/// `P phi = Delta u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagPMorphism {
    pub source: DiagPObject,
    pub target: DiagPObject,
    pub base: MorId,
    pub functor: FinFunctor,
    pub phi: NatTransformation,
}

/// `Diag(P)`, never enumerated; objects and morphisms are built and
/// validated on demand.
#[derive(Clone, Debug)]
pub struct DiagOfFunctor {
    pub functor: FinFunctor,
}

impl DiagOfFunctor {
    pub fn new(p: &FinFunctor) -> DiagOfFunctor {
        DiagOfFunctor { functor: p.clone() }
    }

    pub fn object(&self, a: ObjId, x: &FinFunctor) -> Result<DiagPObject, FibError> {
        let p = &self.functor;
        if !Arc::ptr_eq(x.target(), p.source()) && **x.target() != **p.source() {
            return Err(FibError::ShapeMismatch("diagram does not land in E".into()));
        }
        let b = p.target();
        let i = x.source();
        if i.objects().any(|o| p.obj(x.obj(o)) != a) || i.morphisms().any(|m| p.mor(x.mor(m)) != b.identity(a)) {
            return Err(FibError::NotAMorphism(format!(
                "diagram leaves the fibre over {}",
                b.obj_name(a)
            )));
        }
        Ok(DiagPObject {
            base: a,
            diagram: x.retarget(i, p.source()).unwrap(),
        })
    }

    pub fn morphism(
        &self,
        source: &DiagPObject,
        target: &DiagPObject,
        u: MorId,
        functor: &FinFunctor,
        components: Vec<MorId>,
    ) -> Result<DiagPMorphism, FibError> {
        let p = &self.functor;
        let b = p.target();
        if b.dom(u) != source.base || b.cod(u) != target.base {
            return Err(FibError::NotAMorphism("base morphism has the wrong endpoints".into()));
        }
        let yf = compose_functor(&target.diagram, functor).map_err(|e| FibError::NotAMorphism(e.to_string()))?;
        let phi = NatTransformation::new(source.diagram.clone(), yf, components)
            .map_err(|e| FibError::NotAMorphism(e.to_string()))?;
        if let Some(&c) = phi.components().iter().find(|&&c| p.mor(c) != u) {
            return Err(FibError::NotAMorphism(format!(
                "component {} does not lie over {}",
                p.source().mor_name(c),
                b.mor_name(u)
            )));
        }
        Ok(DiagPMorphism {
            source: source.clone(),
            target: target.clone(),
            base: u,
            functor: functor.clone(),
            phi,
        })
    }

    pub fn identity(&self, x: &DiagPObject) -> DiagPMorphism {
        let b = self.functor.target();
        DiagPMorphism {
            source: x.clone(),
            target: x.clone(),
            base: b.identity(x.base),
            functor: FinFunctor::identity(x.shape()),
            phi: NatTransformation::identity(&x.diagram),
        }
    }

    /// `(v, G, psi) . (u, F, phi) = (vu, GF, psi F . phi)`
    pub fn compose(&self, g: &DiagPMorphism, f: &DiagPMorphism) -> Result<DiagPMorphism, FibError> {
        if f.target != g.source {
            return Err(FibError::NotAMorphism("morphisms are not composable".into()));
        }
        let e = self.functor.source();
        let b = self.functor.target();
        let functor = compose_functor(&g.functor, &f.functor).map_err(|e| FibError::NotAMorphism(e.to_string()))?;
        let components = f
            .source
            .shape()
            .objects()
            .map(|i| e.comp(g.phi.component(f.functor.obj(i)), f.phi.component(i)))
            .collect();
        self.morphism(&f.source, &g.target, b.comp(g.base, f.base), &functor, components)
    }

    /// `E^P(x) = (Px, 1, x)`
    pub fn embed(&self, x: ObjId) -> DiagPObject {
        let one = Arc::new(fixtures::one());
        let p = &self.functor;
        DiagPObject {
            base: p.obj(x),
            diagram: FinFunctor::constant(&one, p.source(), x),
        }
    }

    /// `E^P(f) = (Pf, Id_1, f)`
    pub fn embed_morphism(&self, f: MorId) -> DiagPMorphism {
        let e = self.functor.source();
        let (s, t) = (self.embed(e.dom(f)), self.embed(e.cod(f)));
        let id = FinFunctor::identity(s.shape());
        self.morphism(&s, &t, self.functor.mor(f), &id, vec![f]).expect("embedding of a morphism")
    }

    /// The `B^P`-cartesian lifting `(u, Id_J, theta^u Y)` of `u` at
    /// `(b, J, Y)`.
    pub fn cartesian_lift(&self, fib: &SplitCleavage, u: MorId, y: &DiagPObject) -> Result<DiagPMorphism, FibError> {
        let j = y.shape();
        let e = self.functor.source();
        let objects: Vec<ObjId> = j.objects().map(|i| fib.transport_object(u, y.diagram.obj(i))).collect();
        let morphisms = j.morphisms().map(|m| fib.transport_morphism(u, y.diagram.mor(m))).collect();
        let pulled = FinFunctor::new(j.clone(), e.clone(), objects, morphisms)
            .map_err(|e| FibError::NonFunctorialTransition(e.to_string()))?;
        let source = self.object(self.functor.target().dom(u), &pulled)?;
        let comps = j.objects().map(|i| fib.lift(u, y.diagram.obj(i))).collect();
        self.morphism(&source, y, u, &FinFunctor::identity(j), comps)
    }
}

/// For a split cofibration `P` and objects `(a, I, X)`, `(b, J, Y)`: for every
/// `u: a -> b` and `F: I -> J`, `psi -> J_b psi . delta^u X` is a bijection
/// from `u_!X => Y F` (vertical) onto `X => Y F` over `Delta u`.
pub fn hom_bijection_check(cofib: &SplitCleavage, x: &DiagPObject, y: &DiagPObject) -> VerificationReport {
    const CHECK: &str = "hom_bijection_check";
    if cofib.data.direction != Direction::Cofibration {
        return VerificationReport::invalid_input(CHECK, json!({"reason": "needs a split cofibration"}));
    }
    let p = cofib.functor();
    let (e, b) = (p.source(), p.target());
    let (i, j) = (x.shape(), y.shape());
    let mut pairs = 0usize;
    let mut checked = 0usize;
    for &u in b.hom(x.base, y.base) {
        let objects: Vec<ObjId> = i.objects().map(|o| cofib.transport_object(u, x.diagram.obj(o))).collect();
        let morphisms = i.morphisms().map(|m| cofib.transport_morphism(u, x.diagram.mor(m))).collect();
        let Ok(pushed) = FinFunctor::new(i.clone(), e.clone(), objects, morphisms) else {
            return VerificationReport::fail(CHECK, json!({"u": b.mor_name(u), "reason": "u_!X is not a functor"}));
        };
        for f in enumerate_functors(i, j, usize::MAX) {
            let yf = compose_functor(&y.diagram, &f).expect("composable");
            let left: Vec<NatTransformation> = enumerate_transformations(&pushed, &yf)
                .into_iter()
                .filter(|t| t.components().iter().all(|&c| b.is_identity(p.mor(c))))
                .collect();
            let right: Vec<NatTransformation> = enumerate_transformations(&x.diagram, &yf)
                .into_iter()
                .filter(|t| t.components().iter().all(|&c| p.mor(c) == u))
                .collect();
            let mut images: Vec<Vec<MorId>> = left
                .iter()
                .map(|psi| {
                    i.objects()
                        .map(|o| e.comp(psi.component(o), cofib.lift(u, x.diagram.obj(o))))
                        .collect()
                })
                .collect();
            let lands = images.iter().all(|img| right.iter().any(|r| r.components() == &img[..]));
            images.sort();
            images.dedup();
            pairs += 1;
            checked += left.len();
            if !lands || images.len() != left.len() || left.len() != right.len() {
                return VerificationReport::fail(
                    CHECK,
                    json!({
                        "u": b.mor_name(u),
                        "functor": f.object_map().iter().map(|o| j.obj_name(*o)).collect::<Vec<_>>(),
                        "left": left.len(), "right": right.len(), "images": images.len(),
                    }),
                );
            }
        }
    }
    VerificationReport::pass(CHECK)
        .with_stat("pairs", pairs)
        .with_stat("transformations", checked)
}
