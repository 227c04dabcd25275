use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorId(pub usize);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate token `{0}`")]
    DuplicateToken(String),
    #[error("dangling token `{0}`")]
    DanglingToken(String),
    #[error("missing composite {g} . {f}")]
    MissingComposite { g: String, f: String },
    #[error("{g} . {f} is listed but cod({f}) != dom({g})")]
    NotComposable { g: String, f: String },
    #[error("composite {g} . {f} = {gf} has the wrong endpoints")]
    IllTypedComposite { g: String, f: String, gf: String },
    #[error("conflicting composites for {g} . {f}: {first} and {second}")]
    ConflictingComposite {
        g: String,
        f: String,
        first: String,
        second: String,
    },
    #[error("identity law fails for identity {identity} and morphism {morphism}")]
    IdentityViolation { identity: String, morphism: String },
    #[error("associativity fails on ({h}, {g}, {f})")]
    AssociativityViolation { h: String, g: String, f: String },
}

/// Name-level description of a category, as read from a file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    /// `(id, dom, cod)`
    pub morphisms: Vec<(String, String, String)>,
    /// `(object, identity morphism)`
    pub identities: Vec<(String, String)>,
    /// `(g, f, g.f)`; composites involving an identity may be omitted.
    pub composition: Vec<(String, String, String)>,
}

/// A finite category with a total composition table.
///
/// `compose(g, f)` is "f first, then g". Object and morphism ids follow the
/// declared order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    outgoing: Vec<Vec<MorId>>,
    into: Vec<Vec<MorId>>,
    out_pos: Vec<usize>,
    // after[f][k] = outgoing[cod f][k] . f
    after: Vec<Vec<MorId>>,
    homs: Vec<Vec<MorId>>,
    obj_index: HashMap<String, ObjId>,
    mor_index: HashMap<String, MorId>,
}

/// Incremental constructor used by every derived construction.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<Option<MorId>>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> ObjId {
        self.objects.push(name.into());
        self.identities.push(None);
        ObjId(self.objects.len() - 1)
    }

    pub fn morphism(&mut self, name: impl Into<String>, dom: ObjId, cod: ObjId) -> MorId {
        self.morphisms.push(Morphism {
            name: name.into(),
            dom,
            cod,
        });
        MorId(self.morphisms.len() - 1)
    }

    /// Adds an endomorphism of `obj` and marks it as its identity.
    pub fn identity(&mut self, name: impl Into<String>, obj: ObjId) -> MorId {
        let m = self.morphism(name, obj, obj);
        self.identities[obj.0] = Some(m);
        m
    }

    pub fn set_identity(&mut self, obj: ObjId, m: MorId) {
        self.identities[obj.0] = Some(m);
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn dom(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].dom
    }

    pub fn cod(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].cod
    }

    /// Finishes the category. `compose(g, f)` is asked for every composable
    /// pair and must return `g . f`.
    pub fn build<F>(self, mut compose: F) -> Result<FinCategory, CategoryError>
    where
        F: FnMut(MorId, MorId) -> Option<MorId>,
    {
        let n = self.objects.len();
        let mut obj_index = HashMap::with_capacity(n);
        for (i, name) in self.objects.iter().enumerate() {
            if obj_index.insert(name.clone(), ObjId(i)).is_some() {
                return Err(CategoryError::DuplicateToken(name.clone()));
            }
        }
        let mut mor_index = HashMap::with_capacity(self.morphisms.len());
        for (i, m) in self.morphisms.iter().enumerate() {
            if mor_index.insert(m.name.clone(), MorId(i)).is_some() {
                return Err(CategoryError::DuplicateToken(m.name.clone()));
            }
            if m.dom.0 >= n || m.cod.0 >= n {
                return Err(CategoryError::DanglingToken(m.name.clone()));
            }
        }
        let mut identities = Vec::with_capacity(n);
        for (i, id) in self.identities.iter().enumerate() {
            match id {
                Some(m) if self.morphisms[m.0].dom.0 == i && self.morphisms[m.0].cod.0 == i => {
                    identities.push(*m)
                }
                Some(m) => {
                    return Err(CategoryError::IdentityViolation {
                        identity: self.morphisms[m.0].name.clone(),
                        morphism: self.morphisms[m.0].name.clone(),
                    })
                }
                None => return Err(CategoryError::DanglingToken(format!("identity of {}", self.objects[i]))),
            }
        }

        let mut outgoing = vec![Vec::new(); n];
        let mut into = vec![Vec::new(); n];
        let mut out_pos = vec![0; self.morphisms.len()];
        let mut homs = vec![Vec::new(); n * n];
        for (i, m) in self.morphisms.iter().enumerate() {
            out_pos[i] = outgoing[m.dom.0].len();
            outgoing[m.dom.0].push(MorId(i));
            into[m.cod.0].push(MorId(i));
            homs[m.dom.0 * n + m.cod.0].push(MorId(i));
        }

        let name = |m: MorId| self.morphisms[m.0].name.clone();
        let mut after = Vec::with_capacity(self.morphisms.len());
        for (i, f) in self.morphisms.iter().enumerate() {
            let mut row = Vec::with_capacity(outgoing[f.cod.0].len());
            for &g in &outgoing[f.cod.0] {
                let Some(h) = compose(g, MorId(i)) else {
                    return Err(CategoryError::MissingComposite {
                        g: name(g),
                        f: name(MorId(i)),
                    });
                };
                if h.0 >= self.morphisms.len()
                    || self.morphisms[h.0].dom != f.dom
                    || self.morphisms[h.0].cod != self.morphisms[g.0].cod
                {
                    return Err(CategoryError::IllTypedComposite {
                        g: name(g),
                        f: name(MorId(i)),
                        gf: if h.0 < self.morphisms.len() { name(h) } else { format!("#{}", h.0) },
                    });
                }
                row.push(h);
            }
            after.push(row);
        }

        let cat = FinCategory {
            objects: self.objects,
            morphisms: self.morphisms,
            identities,
            outgoing,
            into,
            out_pos,
            after,
            homs,
            obj_index,
            mor_index,
        };
        cat.check_laws()?;
        Ok(cat)
    }
}

impl FinCategory {
    fn check_laws(&self) -> Result<(), CategoryError> {
        for f in self.morphisms() {
            let idc = self.identity(self.cod(f));
            let idd = self.identity(self.dom(f));
            if self.comp(idc, f) != f {
                return Err(CategoryError::IdentityViolation {
                    identity: self.mor_name(idc).to_string(),
                    morphism: self.mor_name(f).to_string(),
                });
            }
            if self.comp(f, idd) != f {
                return Err(CategoryError::IdentityViolation {
                    identity: self.mor_name(idd).to_string(),
                    morphism: self.mor_name(f).to_string(),
                });
            }
        }
        for f in self.morphisms() {
            for (k, &g) in self.outgoing[self.cod(f).0].iter().enumerate() {
                let gf = self.after[f.0][k];
                for &h in &self.outgoing[self.cod(g).0] {
                    if self.comp(h, gf) != self.comp(self.comp(h, g), f) {
                        return Err(CategoryError::AssociativityViolation {
                            h: self.mor_name(h).to_string(),
                            g: self.mor_name(g).to_string(),
                            f: self.mor_name(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Validates a name-level description.
    pub fn from_raw(raw: &RawCategory) -> Result<FinCategory, CategoryError> {
        let mut b = CategoryBuilder::new();
        let mut objs = HashMap::new();
        for o in &raw.objects {
            if objs.insert(o.clone(), b.object(o.clone())).is_some() {
                return Err(CategoryError::DuplicateToken(o.clone()));
            }
        }
        let lookup_obj = |t: &str| objs.get(t).copied().ok_or_else(|| CategoryError::DanglingToken(t.to_string()));
        let mut mors: HashMap<String, MorId> = HashMap::new();
        for (id, dom, cod) in &raw.morphisms {
            let m = b.morphism(id.clone(), lookup_obj(dom)?, lookup_obj(cod)?);
            if mors.insert(id.clone(), m).is_some() {
                return Err(CategoryError::DuplicateToken(id.clone()));
            }
        }
        let lookup_mor = |t: &str| mors.get(t).copied().ok_or_else(|| CategoryError::DanglingToken(t.to_string()));
        for (o, m) in &raw.identities {
            let o = lookup_obj(o)?;
            let m = lookup_mor(m)?;
            b.set_identity(o, m);
        }
        let mut is_identity = vec![false; b.morphism_count()];
        for (i, id) in b.identities.iter().enumerate() {
            match id {
                Some(m) => is_identity[m.0] = true,
                None => return Err(CategoryError::DanglingToken(format!("identity of {}", raw.objects[i]))),
            }
        }
        let mut table: HashMap<(MorId, MorId), MorId> = HashMap::new();
        for (g, f, gf) in &raw.composition {
            let (gi, fi, gfi) = (lookup_mor(g)?, lookup_mor(f)?, lookup_mor(gf)?);
            if b.dom(gi) != b.cod(fi) {
                return Err(CategoryError::NotComposable { g: g.clone(), f: f.clone() });
            }
            if let Some(prev) = table.insert((gi, fi), gfi) {
                if prev != gfi {
                    return Err(CategoryError::ConflictingComposite {
                        g: g.clone(),
                        f: f.clone(),
                        first: raw.morphisms[prev.0].0.clone(),
                        second: gf.clone(),
                    });
                }
            }
        }
        b.build(|g, f| {
            if let Some(h) = table.get(&(g, f)) {
                Some(*h)
            } else if is_identity[g.0] {
                Some(f)
            } else if is_identity[f.0] {
                Some(g)
            } else {
                None
            }
        })
    }

    /// Name-level description listing every composite of two non-identities.
    pub fn to_raw(&self) -> RawCategory {
        let mut composition = Vec::new();
        for g in self.morphisms() {
            if self.is_identity(g) {
                continue;
            }
            for &f in self.incoming(self.dom(g)) {
                if self.is_identity(f) {
                    continue;
                }
                composition.push((
                    self.mor_name(g).to_string(),
                    self.mor_name(f).to_string(),
                    self.mor_name(self.comp(g, f)).to_string(),
                ));
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| (m.name.clone(), self.objects[m.dom.0].clone(), self.objects[m.cod.0].clone()))
                .collect(),
            identities: self
                .objects()
                .map(|o| (self.obj_name(o).to_string(), self.mor_name(self.identity(o)).to_string()))
                .collect(),
            composition,
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + Clone {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + Clone {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn obj_name(&self, o: ObjId) -> &str {
        &self.objects[o.0]
    }

    pub fn mor_name(&self, m: MorId) -> &str {
        &self.morphisms[m.0].name
    }

    pub fn object(&self, name: &str) -> Option<ObjId> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism(&self, name: &str) -> Option<MorId> {
        self.mor_index.get(name).copied()
    }

    pub fn dom(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].dom
    }

    pub fn cod(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].cod
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o.0]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identities[self.dom(m).0] == m
    }

    /// `g . f`, or `None` when `cod f != dom g`.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.dom(g) != self.cod(f) {
            return None;
        }
        Some(self.after[f.0][self.out_pos[g.0]])
    }

    /// `g . f` for a pair known to be composable.
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        match self.compose(g, f) {
            Some(h) => h,
            None => panic!(
                "{} . {} is not composable",
                self.mor_name(g),
                self.mor_name(f)
            ),
        }
    }

    /// Composite of a path given in application order.
    pub fn comp_path(&self, path: &[MorId]) -> Option<MorId> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.compose(g, acc))
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a.0 * self.objects.len() + b.0]
    }

    pub fn outgoing(&self, a: ObjId) -> &[MorId] {
        &self.outgoing[a.0]
    }

    pub fn incoming(&self, b: ObjId) -> &[MorId] {
        &self.into[b.0]
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        self.hom(self.cod(f), self.dom(f)).iter().copied().find(|&g| {
            self.comp(g, f) == self.identity(self.dom(f)) && self.comp(f, g) == self.identity(self.cod(f))
        })
    }

    /// Same objects and morphisms with dom/cod swapped and composition
    /// transposed. Ids are preserved.
    pub fn opposite(&self) -> FinCategory {
        let mut b = CategoryBuilder::new();
        for o in self.objects() {
            b.object(self.obj_name(o));
        }
        for m in self.morphisms() {
            b.morphism(self.mor_name(m), self.cod(m), self.dom(m));
        }
        for o in self.objects() {
            b.set_identity(o, self.identity(o));
        }
        b.build(|g, f| self.compose(f, g)).expect("opposite of a valid category is valid")
    }

    /// True when every hom-set has at most one element.
    pub fn is_preorder(&self) -> bool {
        self.homs.iter().all(|h| h.len() <= 1)
    }

    /// True when there are no non-identity morphisms.
    pub fn is_discrete(&self) -> bool {
        self.morphisms().all(|m| self.is_identity(m))
    }
}
