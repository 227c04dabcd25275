//! JSON file formats. Every document carries `"format": "fibrelab/1"`.
//!
//! Maps are keyed by tokens and serialized in sorted order, so writing a
//! parsed value back out is deterministic.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use fibrelab::diagcat::BackwardFamily;
use fibrelab::fibrations::{CleavageData, Direction};
use fibrelab::fincat::{FinCategory, FinFunctor, ObjId, RawCategory};
use fibrelab::finset::{FinFunction, FinSet, SetDiagram, SetTransformation};
use fibrelab::grothendieck::{CatDiagram, DiagFamily, Variance};
use fibrelab::report::FORMAT;
use serde::{Deserialize, Serialize};

pub type SchemaResult<T> = Result<T, String>;

fn format() -> String {
    FORMAT.to_string()
}

fn check_format(f: &str) -> SchemaResult<()> {
    if f == FORMAT {
        Ok(())
    } else {
        Err(format!("unsupported format {f:?}, expected {FORMAT:?}"))
    }
}

type Table = BTreeMap<String, String>;

fn hash(t: &Table) -> HashMap<String, String> {
    t.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    #[serde(default = "format")]
    pub format: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identities: Table,
    /// `[g, f, g.f]`; composites with an identity may be left out
    #[serde(default)]
    pub composition: Vec<(String, String, String)>,
}

impl CategoryJson {
    pub fn from_category(c: &FinCategory) -> CategoryJson {
        let raw = c.to_raw();
        CategoryJson {
            format: format(),
            objects: raw.objects,
            morphisms: raw
                .morphisms
                .into_iter()
                .map(|(id, dom, cod)| MorphismJson { id, dom, cod })
                .collect(),
            identities: raw.identities.into_iter().collect(),
            composition: raw.composition,
        }
    }

    pub fn to_category(&self) -> SchemaResult<Arc<FinCategory>> {
        check_format(&self.format)?;
        for o in self.identities.keys() {
            if !self.objects.contains(o) {
                return Err(format!("identity listed for unknown object {o}"));
            }
        }
        let raw = RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| (m.id.clone(), m.dom.clone(), m.cod.clone()))
                .collect(),
            identities: self
                .objects
                .iter()
                .filter_map(|o| self.identities.get(o).map(|m| (o.clone(), m.clone())))
                .collect(),
            composition: self.composition.clone(),
        };
        FinCategory::from_raw(&raw).map(Arc::new).map_err(|e| e.to_string())
    }
}

/// Object and morphism images; identities may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapsJson {
    pub objects: Table,
    #[serde(default)]
    pub morphisms: Table,
}

impl MapsJson {
    pub fn from_functor(f: &FinFunctor) -> MapsJson {
        let (s, t) = (f.source(), f.target());
        MapsJson {
            objects: s
                .objects()
                .map(|o| (s.obj_name(o).to_string(), t.obj_name(f.obj(o)).to_string()))
                .collect(),
            morphisms: s
                .morphisms()
                .filter(|&m| !s.is_identity(m))
                .map(|m| (s.mor_name(m).to_string(), t.mor_name(f.mor(m)).to_string()))
                .collect(),
        }
    }

    pub fn to_functor(&self, source: &Arc<FinCategory>, target: &Arc<FinCategory>) -> SchemaResult<FinFunctor> {
        FinFunctor::from_names(source.clone(), target.clone(), &hash(&self.objects), &hash(&self.morphisms))
            .map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorJson {
    #[serde(default = "format")]
    pub format: String,
    pub source: CategoryJson,
    pub target: CategoryJson,
    #[serde(flatten)]
    pub maps: MapsJson,
}

impl FunctorJson {
    pub fn from_functor(f: &FinFunctor) -> FunctorJson {
        FunctorJson {
            format: format(),
            source: CategoryJson::from_category(f.source()),
            target: CategoryJson::from_category(f.target()),
            maps: MapsJson::from_functor(f),
        }
    }

    pub fn to_functor(&self) -> SchemaResult<FinFunctor> {
        check_format(&self.format)?;
        let s = self.source.to_category()?;
        let t = self.target.to_category()?;
        self.maps.to_functor(&s, &t)
    }
}

/// Sets per object and element maps per morphism; identity maps may be
/// omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramBody {
    pub sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub maps: BTreeMap<String, Table>,
}

fn function_from(source: &FinSet, target: &FinSet, t: &Table) -> SchemaResult<FinFunction> {
    FinFunction::from_names(source.clone(), target.clone(), &hash(t)).map_err(|e| e.to_string())
}

fn function_table(f: &FinFunction) -> Table {
    f.table().into_iter().collect()
}

impl DiagramBody {
    pub fn from_diagram(x: &SetDiagram) -> DiagramBody {
        let s = x.shape();
        DiagramBody {
            sets: s
                .objects()
                .map(|o| (s.obj_name(o).to_string(), x.set(o).elements().to_vec()))
                .collect(),
            maps: s
                .morphisms()
                .filter(|&m| !s.is_identity(m))
                .map(|m| (s.mor_name(m).to_string(), function_table(&x.function(m))))
                .collect(),
        }
    }

    pub fn to_diagram(&self, shape: &Arc<FinCategory>) -> SchemaResult<SetDiagram> {
        for k in self.sets.keys() {
            shape.object(k).ok_or_else(|| format!("set given for unknown object {k}"))?;
        }
        for k in self.maps.keys() {
            shape.morphism(k).ok_or_else(|| format!("map given for unknown morphism {k}"))?;
        }
        let sets = shape
            .objects()
            .map(|o| {
                let name = shape.obj_name(o);
                let elems = self.sets.get(name).ok_or_else(|| format!("no set for object {name}"))?;
                FinSet::new(elems.iter().cloned()).map_err(|e| e.to_string())
            })
            .collect::<SchemaResult<Vec<_>>>()?;
        let maps = shape
            .morphisms()
            .map(|m| {
                let (a, b) = (shape.dom(m), shape.cod(m));
                match self.maps.get(shape.mor_name(m)) {
                    Some(t) => function_from(&sets[a.0], &sets[b.0], t).map(|f| f.mapping().to_vec()),
                    None if shape.is_identity(m) => Ok((0..sets[a.0].len()).collect()),
                    None => Err(format!("no map for morphism {}", shape.mor_name(m))),
                }
            })
            .collect::<SchemaResult<Vec<_>>>()?;
        SetDiagram::new(shape.clone(), sets, maps).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDiagramJson {
    #[serde(default = "format")]
    pub format: String,
    pub shape: CategoryJson,
    #[serde(flatten)]
    pub body: DiagramBody,
}

impl SetDiagramJson {
    pub fn from_diagram(x: &SetDiagram) -> SetDiagramJson {
        SetDiagramJson {
            format: format(),
            shape: CategoryJson::from_category(x.shape()),
            body: DiagramBody::from_diagram(x),
        }
    }

    pub fn to_diagram(&self) -> SchemaResult<SetDiagram> {
        check_format(&self.format)?;
        self.body.to_diagram(&self.shape.to_category()?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceJson {
    Covariant,
    Contravariant,
}

impl From<Variance> for VarianceJson {
    fn from(v: Variance) -> Self {
        match v {
            Variance::Covariant => VarianceJson::Covariant,
            Variance::Contravariant => VarianceJson::Contravariant,
        }
    }
}

impl From<VarianceJson> for Variance {
    fn from(v: VarianceJson) -> Self {
        match v {
            VarianceJson::Covariant => Variance::Covariant,
            VarianceJson::Contravariant => Variance::Contravariant,
        }
    }
}

fn fibres_of(shape: &Arc<FinCategory>, fibres: &BTreeMap<String, CategoryJson>) -> SchemaResult<Vec<Arc<FinCategory>>> {
    for k in fibres.keys() {
        shape.object(k).ok_or_else(|| format!("fibre given for unknown object {k}"))?;
    }
    shape
        .objects()
        .map(|o| {
            let name = shape.obj_name(o);
            fibres.get(name).ok_or_else(|| format!("no fibre over {name}"))?.to_category()
        })
        .collect()
}

/// `Phi u` for every `u`, reading identities as identity functors when
/// omitted. `ends(u)` gives the (source, target) objects of `Phi u`.
fn transitions_of(
    shape: &Arc<FinCategory>,
    fibres: &[Arc<FinCategory>],
    maps: &BTreeMap<String, MapsJson>,
    ends: impl Fn(fibrelab::MorId) -> (ObjId, ObjId),
) -> SchemaResult<Vec<FinFunctor>> {
    for k in maps.keys() {
        shape.morphism(k).ok_or_else(|| format!("transition given for unknown morphism {k}"))?;
    }
    shape
        .morphisms()
        .map(|u| {
            let (a, b) = ends(u);
            match maps.get(shape.mor_name(u)) {
                Some(m) => m.to_functor(&fibres[a.0], &fibres[b.0]),
                None if shape.is_identity(u) => Ok(FinFunctor::identity(&fibres[a.0])),
                None => Err(format!("no transition for morphism {}", shape.mor_name(u))),
            }
        })
        .collect()
}

fn transition_tables(shape: &FinCategory, transitions: &[FinFunctor]) -> BTreeMap<String, MapsJson> {
    shape
        .morphisms()
        .filter(|&u| !shape.is_identity(u))
        .map(|u| (shape.mor_name(u).to_string(), MapsJson::from_functor(&transitions[u.0])))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatDiagramJson {
    #[serde(default = "format")]
    pub format: String,
    pub shape: CategoryJson,
    pub variance: VarianceJson,
    pub fibres: BTreeMap<String, CategoryJson>,
    #[serde(default)]
    pub transitions: BTreeMap<String, MapsJson>,
}

impl CatDiagramJson {
    pub fn from_diagram(phi: &CatDiagram) -> CatDiagramJson {
        let shape = phi.shape();
        CatDiagramJson {
            format: format(),
            shape: CategoryJson::from_category(shape),
            variance: phi.variance().into(),
            fibres: shape
                .objects()
                .map(|o| (shape.obj_name(o).to_string(), CategoryJson::from_category(phi.fibre(o))))
                .collect(),
            transitions: transition_tables(shape, phi.transitions()),
        }
    }

    pub fn to_diagram(&self) -> SchemaResult<CatDiagram> {
        check_format(&self.format)?;
        let shape = self.shape.to_category()?;
        let fibres = fibres_of(&shape, &self.fibres)?;
        let variance: Variance = self.variance.into();
        let transitions = transitions_of(&shape, &fibres, &self.transitions, |u| match variance {
            Variance::Covariant => (shape.dom(u), shape.cod(u)),
            Variance::Contravariant => (shape.cod(u), shape.dom(u)),
        })?;
        CatDiagram::new(shape, fibres, transitions, variance).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantJson {
    Forward,
    Backward,
}

/// A family of set diagrams. Forward: `Phi u: Phi d -> Phi e` and
/// `phi^u_i: X_d(i) -> X_e(Phi u i)`. Backward: `Phi u: Phi e -> Phi d` and
/// `phi^u_j: X_d(Phi u j) -> X_e(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    #[serde(default = "format")]
    pub format: String,
    pub shape: CategoryJson,
    pub variant: VariantJson,
    pub fibres: BTreeMap<String, CategoryJson>,
    pub diagrams: BTreeMap<String, DiagramBody>,
    #[serde(default)]
    pub transitions: BTreeMap<String, MapsJson>,
    /// morphism -> fibre object -> element table
    #[serde(default)]
    pub phi: BTreeMap<String, BTreeMap<String, Table>>,
}

pub enum Family {
    Forward(DiagFamily),
    Backward(BackwardFamily),
}

fn phi_tables(shape: &FinCategory, phi: &[SetTransformation]) -> BTreeMap<String, BTreeMap<String, Table>> {
    shape
        .morphisms()
        .filter(|&u| !shape.is_identity(u))
        .map(|u| {
            let p = &phi[u.0];
            let fibre = p.source().shape();
            let comps = fibre
                .objects()
                .map(|i| (fibre.obj_name(i).to_string(), function_table(p.component(i))))
                .collect();
            (shape.mor_name(u).to_string(), comps)
        })
        .collect()
}

impl FamilyJson {
    pub fn from_forward(t: &DiagFamily) -> FamilyJson {
        let shape = t.shape();
        FamilyJson {
            format: format(),
            shape: CategoryJson::from_category(shape),
            variant: VariantJson::Forward,
            fibres: shape
                .objects()
                .map(|o| (shape.obj_name(o).to_string(), CategoryJson::from_category(t.diagram(o).shape())))
                .collect(),
            diagrams: shape
                .objects()
                .map(|o| (shape.obj_name(o).to_string(), DiagramBody::from_diagram(t.diagram(o))))
                .collect(),
            transitions: transition_tables(shape, t.transitions()),
            phi: phi_tables(shape, t.phis()),
        }
    }

    pub fn to_family(&self) -> SchemaResult<Family> {
        check_format(&self.format)?;
        let shape = self.shape.to_category()?;
        let fibres = fibres_of(&shape, &self.fibres)?;
        for k in self.diagrams.keys() {
            shape.object(k).ok_or_else(|| format!("diagram given for unknown object {k}"))?;
        }
        let diagrams = shape
            .objects()
            .map(|o| {
                let name = shape.obj_name(o);
                self.diagrams
                    .get(name)
                    .ok_or_else(|| format!("no diagram over {name}"))?
                    .to_diagram(&fibres[o.0])
            })
            .collect::<SchemaResult<Vec<_>>>()?;
        let forward = self.variant == VariantJson::Forward;
        let transitions = transitions_of(&shape, &fibres, &self.transitions, |u| {
            if forward {
                (shape.dom(u), shape.cod(u))
            } else {
                (shape.cod(u), shape.dom(u))
            }
        })?;
        for k in self.phi.keys() {
            shape.morphism(k).ok_or_else(|| format!("cell given for unknown morphism {k}"))?;
        }
        let phi = shape
            .morphisms()
            .map(|u| {
                let (d, e) = (shape.dom(u), shape.cod(u));
                let t = &transitions[u.0];
                // source and target of the cell, per variant
                let (src, tgt) = if forward {
                    (diagrams[d.0].clone(), fibrelab::finset::restrict(&diagrams[e.0], t).map_err(|e| e.to_string())?)
                } else {
                    (fibrelab::finset::restrict(&diagrams[d.0], t).map_err(|e| e.to_string())?, diagrams[e.0].clone())
                };
                let fibre = src.shape().clone();
                let comps = match self.phi.get(shape.mor_name(u)) {
                    Some(tables) => fibre
                        .objects()
                        .map(|i| {
                            let name = fibre.obj_name(i);
                            let table = tables
                                .get(name)
                                .ok_or_else(|| format!("cell {} has no component at {name}", shape.mor_name(u)))?;
                            function_from(src.set(i), tgt.set(i), table)
                        })
                        .collect::<SchemaResult<Vec<_>>>()?,
                    None if shape.is_identity(u) => src.sets().iter().map(FinFunction::identity).collect(),
                    None => return Err(format!("no cell for morphism {}", shape.mor_name(u))),
                };
                SetTransformation::new(src, tgt, comps).map_err(|e| e.to_string())
            })
            .collect::<SchemaResult<Vec<_>>>()?;
        if forward {
            DiagFamily::new(shape, diagrams, transitions, phi)
                .map(Family::Forward)
                .map_err(|e| e.to_string())
        } else {
            BackwardFamily::new(shape, diagrams, transitions, phi)
                .map(Family::Backward)
                .map_err(|e| e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionJson {
    Fibration,
    Cofibration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingJson {
    pub base: String,
    pub object: String,
    pub lift: String,
}

/// A chosen (co)cartesian lifting per base morphism and object: over the
/// codomain for a fibration, over the domain for a cofibration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleavageJson {
    #[serde(default = "format")]
    pub format: String,
    pub functor: FunctorJson,
    pub direction: DirectionJson,
    pub lifting: Vec<LiftingJson>,
}

impl CleavageJson {
    pub fn from_cleavage(c: &CleavageData) -> CleavageJson {
        let p = &c.base_functor;
        let (e, b) = (p.source(), p.target());
        let mut lifting: Vec<LiftingJson> = c
            .lifting
            .iter()
            .map(|(&(u, x), &m)| LiftingJson {
                base: b.mor_name(u).to_string(),
                object: e.obj_name(x).to_string(),
                lift: e.mor_name(m).to_string(),
            })
            .collect();
        lifting.sort_by(|a, b| (&a.base, &a.object).cmp(&(&b.base, &b.object)));
        CleavageJson {
            format: format(),
            functor: FunctorJson::from_functor(p),
            direction: match c.direction {
                Direction::Fibration => DirectionJson::Fibration,
                Direction::Cofibration => DirectionJson::Cofibration,
            },
            lifting,
        }
    }

    pub fn to_cleavage(&self) -> SchemaResult<CleavageData> {
        check_format(&self.format)?;
        let p = self.functor.to_functor()?;
        let (e, b) = (p.source().clone(), p.target().clone());
        let mut lifting = HashMap::new();
        for l in &self.lifting {
            let u = b.morphism(&l.base).ok_or_else(|| format!("unknown base morphism {}", l.base))?;
            let x = e.object(&l.object).ok_or_else(|| format!("unknown object {}", l.object))?;
            let m = e.morphism(&l.lift).ok_or_else(|| format!("unknown morphism {}", l.lift))?;
            if lifting.insert((u, x), m).is_some() {
                return Err(format!("two liftings of {} at {}", l.base, l.object));
            }
        }
        Ok(CleavageData {
            base_functor: p,
            direction: match self.direction {
                DirectionJson::Fibration => Direction::Fibration,
                DirectionJson::Cofibration => Direction::Cofibration,
            },
            lifting,
        })
    }
}

pub fn to_value<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("schema values serialize")
}
