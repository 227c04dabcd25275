//! Decomposition formulas for (co)limits over colimits of categories and
//! over total categories, checked on concrete instances.
//!
//! Every check builds both sides independently, then the canonical
//! comparison map between them from representatives. A comparison that
//! depends on the representative is reported as `IllFormedComparison`; one
//! that is not a bijection as `NotBijective`.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::json;

use crate::catcolim::{
    certify_cofinal_quotient, colimit_cat, comparison_q, verify_cat_cocone, CatColimError,
};
use crate::diagcat::{colimit_in_diag, diag_colimit_mediator, limit_in_diag, BackwardFamily, DiagError, DiagMorphism, Variant};
use crate::fincat::{product, same_category, FinCategory, FinFunctor, MorId, ObjId};
use crate::finset::{
    colimit_set, is_bijection, limit_set, mediate, restrict, FinFunction, FinSet, SetCocone, SetCone, SetDiagram,
    SetTransformation,
};
use crate::fixtures;
use crate::grothendieck::{groth_co, guitart_hat, CatDiagram, DiagFamily, GrothendieckResult, Variance};
use crate::kan::joint_lan_factor;
use crate::report::VerificationReport;

type Checked<T> = Result<T, VerificationReport>;

fn invalid(check: &str, reason: impl Into<String>) -> VerificationReport {
    VerificationReport::invalid_input(check, json!({"error": "ShapeMismatch", "reason": reason.into()}))
}

fn diag_report(check: &str, e: DiagError) -> VerificationReport {
    match e {
        DiagError::Colimit(c) => c.report(check),
        other => invalid(check, other.to_string()),
    }
}

fn colim_report(check: &str, e: CatColimError) -> VerificationReport {
    e.report(check)
}

fn limit_of(check: &str, x: &SetDiagram) -> Checked<SetCone> {
    limit_set(x).map_err(|e| VerificationReport::resource_exceeded(check, json!({"error": "ResourceExceeded", "reason": e.to_string()})))
}

/// `h: cocone.apex -> target` with `h(leg_o z) = f(o, z)`, provided the
/// right-hand side does not depend on the representative.
fn descend(
    check: &str,
    cocone: &SetCocone,
    target: &FinSet,
    f: impl Fn(ObjId, usize) -> usize,
) -> Checked<FinFunction> {
    let shape = cocone.diagram.shape();
    let mut h: Vec<Option<usize>> = vec![None; cocone.apex.len()];
    for o in shape.objects() {
        for z in 0..cocone.diagram.set(o).len() {
            let c = cocone.legs[o.0].apply(z);
            let v = f(o, z);
            match h[c] {
                Some(w) if w != v => {
                    return Err(VerificationReport::fail(
                        check,
                        json!({
                            "error": "IllFormedComparison",
                            "element": cocone.apex.name(c),
                            "images": [target.name(w), target.name(v)],
                        }),
                    ))
                }
                _ => h[c] = Some(v),
            }
        }
    }
    let mapping = h.into_iter().map(|v| v.expect("colimit legs are jointly surjective")).collect();
    Ok(FinFunction::new(cocone.apex.clone(), target.clone(), mapping).expect("images lie in the target"))
}

fn bijection_report(check: &str, h: &FinFunction) -> VerificationReport {
    let r = is_bijection(h);
    if r.is_pass() {
        VerificationReport::pass_with(check, json!({ "comparison": h.table() }))
    } else {
        let mut w = r.witness;
        w["error"] = json!("NotBijective");
        VerificationReport::fail(check, w)
    }
}

/// `colim_d colim C_d` for a family of inner diagrams, with the map
/// `C_a -> C_b` along `u` induced by `step(u, i, z) = (j, w)`.
#[derive(Clone, Debug)]
pub struct IteratedColimit {
    pub inner: Vec<SetCocone>,
    pub outer: SetCocone,
}

impl IteratedColimit {
    fn build(
        check: &str,
        shape: &Arc<FinCategory>,
        inner: Vec<SetDiagram>,
        step: impl Fn(MorId, ObjId, usize) -> (ObjId, usize),
    ) -> Checked<IteratedColimit> {
        let inner: Vec<SetCocone> = inner.iter().map(colimit_set).collect();
        let mut maps = Vec::with_capacity(shape.morphism_count());
        for u in shape.morphisms() {
            let (a, b) = (shape.dom(u), shape.cod(u));
            let target = &inner[b.0];
            let f = descend(check, &inner[a.0], &target.apex, |i, z| {
                let (j, w) = step(u, i, z);
                target.legs[j.0].apply(w)
            })?;
            maps.push(f.mapping().to_vec());
        }
        let sets = inner.iter().map(|c| c.apex.clone()).collect();
        let outer = SetDiagram::new(shape.clone(), sets, maps).map_err(|e| {
            VerificationReport::fail(check, json!({"error": "IllFormedComparison", "reason": e.to_string()}))
        })?;
        Ok(IteratedColimit {
            inner,
            outer: colimit_set(&outer),
        })
    }

    /// The map to `target` sending `[(d, [(i, z)])]` to `leaf(d, i, z)`.
    fn comparison(
        &self,
        check: &str,
        target: &FinSet,
        leaf: impl Fn(ObjId, ObjId, usize) -> usize,
    ) -> Checked<FinFunction> {
        let firsts = self
            .inner
            .iter()
            .enumerate()
            .map(|(d, c)| descend(check, c, target, |i, z| leaf(ObjId(d), i, z)))
            .collect::<Checked<Vec<_>>>()?;
        descend(check, &self.outer, target, |d, c| firsts[d.0].apply(c))
    }

    pub fn apex(&self) -> &FinSet {
        &self.outer.apex
    }
}

/// `lim_d lim E_d`, with `E_a -> E_b` along `u` given on tuples by `step`.
#[derive(Clone, Debug)]
pub struct IteratedLimit {
    pub inner: Vec<SetCone>,
    pub outer: SetCone,
    index: Vec<HashMap<Vec<usize>, usize>>,
    outer_index: HashMap<Vec<usize>, usize>,
}

fn tuple_index(cone: &SetCone) -> HashMap<Vec<usize>, usize> {
    (0..cone.apex.len()).map(|t| (cone.tuple(t), t)).collect()
}

impl IteratedLimit {
    fn build(
        check: &str,
        shape: &Arc<FinCategory>,
        inner: Vec<SetDiagram>,
        step: impl Fn(MorId, &[usize]) -> Vec<usize>,
    ) -> Checked<IteratedLimit> {
        let inner: Vec<SetCone> = inner.iter().map(|x| limit_of(check, x)).collect::<Checked<_>>()?;
        let index: Vec<_> = inner.iter().map(tuple_index).collect();
        let mut maps = Vec::with_capacity(shape.morphism_count());
        for u in shape.morphisms() {
            let (a, b) = (shape.dom(u), shape.cod(u));
            let mut table = Vec::with_capacity(inner[a.0].apex.len());
            for t in 0..inner[a.0].apex.len() {
                let image = step(u, &inner[a.0].tuple(t));
                match index[b.0].get(&image) {
                    Some(&s) => table.push(s),
                    None => {
                        return Err(VerificationReport::fail(
                            check,
                            json!({
                                "error": "IllFormedComparison",
                                "morphism": shape.mor_name(u),
                                "element": inner[a.0].apex.name(t),
                            }),
                        ))
                    }
                }
            }
            maps.push(table);
        }
        let sets = inner.iter().map(|c| c.apex.clone()).collect();
        let outer = SetDiagram::new(shape.clone(), sets, maps).map_err(|e| {
            VerificationReport::fail(check, json!({"error": "IllFormedComparison", "reason": e.to_string()}))
        })?;
        let outer = limit_of(check, &outer)?;
        let outer_index = tuple_index(&outer);
        Ok(IteratedLimit {
            inner,
            outer,
            index,
            outer_index,
        })
    }

    /// The map from `source` to the iterated limit sending `t` to the family
    /// `d -> leaf(d, t)`.
    fn comparison(
        &self,
        check: &str,
        source: &SetCone,
        leaf: impl Fn(ObjId, &[usize]) -> Vec<usize>,
    ) -> Checked<FinFunction> {
        let mut mapping = Vec::with_capacity(source.apex.len());
        for t in 0..source.apex.len() {
            let tuple = source.tuple(t);
            let missing = || {
                VerificationReport::fail(
                    check,
                    json!({"error": "IllFormedComparison", "element": source.apex.name(t)}),
                )
            };
            let family = self
                .index
                .iter()
                .enumerate()
                .map(|(d, idx)| idx.get(&leaf(ObjId(d), &tuple)).copied().ok_or_else(missing))
                .collect::<Checked<Vec<usize>>>()?;
            mapping.push(*self.outer_index.get(&family).ok_or_else(missing)?);
        }
        Ok(FinFunction::new(source.apex.clone(), self.outer.apex.clone(), mapping).unwrap())
    }

    pub fn apex(&self) -> &FinSet {
        &self.outer.apex
    }
}

fn with_sizes(r: VerificationReport, lhs: usize, rhs: usize) -> VerificationReport {
    r.with_stat("lhs", lhs).with_stat("rhs", rhs)
}

fn shapes_of(
    check: &str,
    phi: &CatDiagram,
    bound: usize,
    supplied: Option<(&Arc<FinCategory>, &[FinFunctor])>,
) -> Checked<(Arc<FinCategory>, Vec<FinFunctor>)> {
    if phi.variance() != Variance::Covariant {
        return Err(invalid(check, "the diagram of categories must be covariant"));
    }
    match supplied {
        Some((k, legs)) => {
            let r = verify_cat_cocone(phi, k, legs, bound);
            if !r.is_pass() {
                let mut w = r.witness.clone();
                w["cocone"] = json!(r.check_name);
                return Err(VerificationReport {
                    check_name: check.to_string(),
                    witness: w,
                    ..r
                });
            }
            Ok((k.clone(), legs.to_vec()))
        }
        None => {
            let r = colimit_cat(phi, bound).map_err(|e| colim_report(check, e))?;
            Ok((r.colimit, r.cocone))
        }
    }
}

fn on(check: &str, x: &SetDiagram, c: &Arc<FinCategory>, what: &str) -> Checked<SetDiagram> {
    if !same_category(x.shape(), c) {
        return Err(invalid(check, format!("{what} does not live on the expected category")));
    }
    Ok(x.reshape(c).expect("same category"))
}

/// `colim^K X ≅ colim_d colim_{Phi d} X K_d` for `K` a colimit of `Phi`,
/// either the constructed one or a supplied cocone that is first certified.
pub fn check_cdf(
    phi: &CatDiagram,
    x: &SetDiagram,
    bound: usize,
    supplied: Option<(&Arc<FinCategory>, &[FinFunctor])>,
) -> VerificationReport {
    const CHECK: &str = "check_cdf";
    cdf_parts(CHECK, phi, x, bound, supplied)
        .map(|(r, _, _)| r)
        .unwrap_or_else(|e| e)
}

fn cdf_parts(
    check: &str,
    phi: &CatDiagram,
    x: &SetDiagram,
    bound: usize,
    supplied: Option<(&Arc<FinCategory>, &[FinFunctor])>,
) -> Checked<(VerificationReport, SetCocone, FinFunction)> {
    let (k, legs) = shapes_of(check, phi, bound, supplied)?;
    let x = on(check, x, &k, "X")?;
    let lhs = colimit_set(&x);
    let d = phi.shape();
    let inner = legs.iter().map(|leg| restrict(&x, leg).expect("legs land in K")).collect();
    let it = IteratedColimit::build(check, d, inner, |u, i, z| (phi.transition(u).obj(i), z))?;
    let h = it.comparison(check, &lhs.apex, |d, i, z| lhs.legs[legs[d.0].obj(i).0].apply(z))?;
    let r = with_sizes(bijection_report(check, &h), lhs.apex.len(), it.apex().len())
        .with_stat("k_objects", k.object_count())
        .with_stat("k_morphisms", k.morphism_count());
    Ok((r, lhs, h))
}

/// `lim_K X ≅ lim_{d in D^op} lim_{Phi d} X K_d`.
pub fn check_limit_recomposition(phi: &CatDiagram, x: &SetDiagram, bound: usize) -> VerificationReport {
    const CHECK: &str = "check_limit_recomposition";
    let run = || -> Checked<VerificationReport> {
        let (k, legs) = shapes_of(CHECK, phi, bound, None)?;
        let x = on(CHECK, x, &k, "X")?;
        let lhs = limit_of(CHECK, &x)?;
        let d = phi.shape();
        let dop = Arc::new(d.opposite());
        let inner = legs.iter().map(|leg| restrict(&x, leg).expect("legs land in K")).collect();
        // along u: d -> e, restrict a compatible family on Phi e to Phi d
        let it = IteratedLimit::build(CHECK, &dop, inner, |u, s| {
            let t = phi.transition(u);
            t.source().objects().map(|i| s[t.obj(i).0]).collect()
        })?;
        let h = it.comparison(CHECK, &lhs, |d, t| {
            legs[d.0].source().objects().map(|i| t[legs[d.0].obj(i).0]).collect()
        })?;
        Ok(with_sizes(bijection_report(CHECK, &h), lhs.apex.len(), it.apex().len()))
    };
    run().unwrap_or_else(|e| e)
}

/// `colim_{∫Phi} T ≅ colim_d colim_{x in Phi d} T(d, x)` over the
/// covariant total category, with the composite cocone also certified to be
/// a colimit cocone inverse to the comparison.
pub fn check_tfcf(groth: &GrothendieckResult, t: &SetDiagram) -> VerificationReport {
    const CHECK: &str = "check_tfcf";
    let run = || -> Checked<VerificationReport> {
        let family = tfcf_family(CHECK, groth, t)?;
        let t = on(CHECK, t, &groth.total, "T")?;
        let lhs = colimit_set(&t);
        let it = tfcf_rhs(CHECK, &family)?;
        let h = it.comparison(CHECK, &lhs.apex, |d, x, z| lhs.legs[groth.object(d, x).0].apply(z))?;
        let comparison = bijection_report("comparison", &h);
        // the composite cocone T(d, x) -> C_d -> RHS
        let legs = groth
            .object_pairs
            .iter()
            .map(|&(d, x)| {
                let via = it.outer.legs[d.0].after(&it.inner[d.0].legs[x.0]).unwrap();
                FinFunction::new(t.set(groth.object(d, x)).clone(), it.apex().clone(), via.mapping().to_vec()).unwrap()
            })
            .collect();
        let direct = match SetCocone::new(t.clone(), it.apex().clone(), legs) {
            Err(e) => VerificationReport::fail("composite_cocone", json!({"error": "NotACocone", "reason": e.to_string()})),
            Ok(c) => match mediate(&lhs, &c) {
                Err(e) => VerificationReport::fail("composite_cocone", json!({"error": "NotACocone", "reason": e.to_string()})),
                Ok(m) => {
                    let r = bijection_report("composite_cocone", &m);
                    if r.is_pass() && h.is_bijective() && !m.after(&h).unwrap().is_identity() {
                        VerificationReport::fail("composite_cocone", json!({"error": "NotInverse"}))
                    } else {
                        r
                    }
                }
            },
        };
        Ok(with_sizes(
            VerificationReport::all(CHECK, vec![comparison, direct]),
            lhs.apex.len(),
            it.apex().len(),
        ))
    };
    run().unwrap_or_else(|e| e)
}

fn tfcf_family(check: &str, groth: &GrothendieckResult, t: &SetDiagram) -> Checked<DiagFamily> {
    if groth.diagram.variance() != Variance::Covariant {
        return Err(invalid(check, "needs the covariant total category"));
    }
    guitart_hat(groth, t).map_err(|e| invalid(check, e.to_string()))
}

/// `C_d = colim T_d` with `C_u [(x, z)] = [(Phi u x, phi^u_x z)]`.
fn tfcf_rhs(check: &str, family: &DiagFamily) -> Checked<IteratedColimit> {
    IteratedColimit::build(check, family.shape(), family.diagrams().to_vec(), |u, x, z| {
        (family.transition(u).obj(x), family.phi(u).component(x).apply(z))
    })
}

/// `lim_{∫Phi} T ≅ lim_d lim_{Phi d} T(d, -)` over the contravariant total
/// category.
pub fn check_twisted_limit(groth: &GrothendieckResult, t: &SetDiagram) -> VerificationReport {
    const CHECK: &str = "check_twisted_limit";
    let run = || -> Checked<VerificationReport> {
        let phi = &groth.diagram;
        if phi.variance() != Variance::Contravariant {
            return Err(invalid(CHECK, "needs the contravariant total category"));
        }
        let t = on(CHECK, t, &groth.total, "T")?;
        let lhs = limit_of(CHECK, &t)?;
        let d = phi.shape();
        let inner = groth.injections.iter().map(|j| restrict(&t, j).unwrap()).collect();
        // along u: d -> e, y |-> T(theta^u_y)(s_{Phi u y})
        let it = IteratedLimit::build(CHECK, d, inner, |u, s| {
            let e = d.cod(u);
            phi.fibre(e)
                .objects()
                .map(|y| t.apply(groth.lift(u, y), s[phi.transition(u).obj(y).0]))
                .collect()
        })?;
        let h = it.comparison(CHECK, &lhs, |d, s| {
            phi.fibre(d).objects().map(|x| s[groth.object(d, x).0]).collect()
        })?;
        Ok(with_sizes(bijection_report(CHECK, &h), lhs.apex.len(), it.apex().len()))
    };
    run().unwrap_or_else(|e| e)
}

/// Both iterated colimits of `T: D x E -> FinSet` against the joint one.
pub fn check_fubini(d: &Arc<FinCategory>, e: &Arc<FinCategory>, t: &SetDiagram) -> VerificationReport {
    const CHECK: &str = "check_fubini";
    let run = || -> Checked<VerificationReport> {
        let de = Arc::new(product(d, e));
        let t = on(CHECK, t, &de, "T")?;
        let lhs = colimit_set(&t);
        let (ne, me) = (e.object_count(), e.morphism_count());
        let obj = |a: ObjId, b: ObjId| ObjId(a.0 * ne + b.0);
        let mor = |f: MorId, g: MorId| MorId(f.0 * me + g.0);
        let row = |a: ObjId| {
            let f = FinFunctor::new(
                e.clone(),
                de.clone(),
                e.objects().map(|b| obj(a, b)).collect(),
                e.morphisms().map(|g| mor(d.identity(a), g)).collect(),
            )
            .expect("a row of the product");
            restrict(&t, &f).unwrap()
        };
        let column = |b: ObjId| {
            let f = FinFunctor::new(
                d.clone(),
                de.clone(),
                d.objects().map(|a| obj(a, b)).collect(),
                d.morphisms().map(|f| mor(f, e.identity(b))).collect(),
            )
            .expect("a column of the product");
            restrict(&t, &f).unwrap()
        };
        let rows = IteratedColimit::build("rows_first", d, d.objects().map(row).collect(), |u, b, z| {
            (b, t.apply(mor(u, e.identity(b)), z))
        })?;
        let h1 = rows.comparison("rows_first", &lhs.apex, |a, b, z| lhs.legs[obj(a, b).0].apply(z))?;
        let cols = IteratedColimit::build("columns_first", e, e.objects().map(column).collect(), |g, a, z| {
            (a, t.apply(mor(d.identity(a), g), z))
        })?;
        let h2 = cols.comparison("columns_first", &lhs.apex, |b, a, z| lhs.legs[obj(a, b).0].apply(z))?;
        let parts = vec![bijection_report("rows_first", &h1), bijection_report("columns_first", &h2)];
        Ok(VerificationReport::all(CHECK, parts)
            .with_stat("joint", lhs.apex.len())
            .with_stat("rows_first", rows.apex().len())
            .with_stat("columns_first", cols.apex().len()))
    };
    run().unwrap_or_else(|e| e)
}

/// `colim^K X ≅ colim_d colim X_d` for the colimit `(K, X)` of a family in
/// `Diag°(FinSet)`, together with the joint extension property of `X`.
pub fn check_general_cdf(family: &DiagFamily, bound: usize) -> VerificationReport {
    const CHECK: &str = "check_general_cdf";
    let run = || -> Checked<VerificationReport> {
        let c = colimit_in_diag(family, bound).map_err(|e| diag_report(CHECK, e))?;
        let k = c.k().clone();
        let lhs = colimit_set(&c.x);
        let it = tfcf_rhs(CHECK, family)?;
        let inj = &c.injections;
        let h = it.comparison(CHECK, &lhs.apex, |d, i, z| {
            let m = &inj[d.0];
            lhs.legs[m.functor.obj(i).0].apply(m.phi.component(i).apply(z))
        })?;
        let comparison = bijection_report("comparison", &h);

        // X is the joint extension: factoring the injections through X gives
        // the identity, factoring the colimit legs gives the legs
        let own: Vec<SetTransformation> = inj.iter().map(|m| m.phi.clone()).collect();
        let identity = match joint_lan_factor(&c.joint, &c.x, &own) {
            Ok(f) if f.beta.components().iter().all(FinFunction::is_identity) => VerificationReport::pass("joint_identity"),
            Ok(_) => VerificationReport::fail("joint_identity", json!({"error": "NotIdentity"})),
            Err(e) => VerificationReport::fail("joint_identity", json!({"error": "NoFactor", "reason": e.to_string()})),
        };
        let apex = SetDiagram::constant(&k, &lhs.apex);
        let mu = family
            .shape()
            .objects()
            .map(|d| {
                let m = &inj[d.0];
                let src = family.diagram(d);
                let comps = src
                    .shape()
                    .objects()
                    .map(|i| lhs.legs[m.functor.obj(i).0].after(m.phi.component(i)).unwrap())
                    .collect();
                SetTransformation::new(src.clone(), restrict(&apex, &m.functor).unwrap(), comps)
            })
            .collect::<Result<Vec<_>, _>>();
        let legs = match mu {
            Err(e) => VerificationReport::fail("joint_legs", json!({"error": "NotNatural", "reason": e.to_string()})),
            Ok(mu) => match joint_lan_factor(&c.joint, &apex, &mu) {
                Ok(f) if k.objects().all(|o| f.beta.component(o).mapping() == lhs.legs[o.0].mapping()) => {
                    VerificationReport::pass("joint_legs")
                }
                Ok(_) => VerificationReport::fail("joint_legs", json!({"error": "NotTheColimitLegs"})),
                Err(e) => VerificationReport::fail("joint_legs", json!({"error": "NoFactor", "reason": e.to_string()})),
            },
        };
        Ok(with_sizes(
            VerificationReport::all(CHECK, vec![comparison, identity, legs]),
            lhs.apex.len(),
            it.apex().len(),
        )
        .with_stat("k_objects", k.object_count()))
    };
    run().unwrap_or_else(|e| e)
}

/// `lim_K X ≅ lim_d lim X_d` for the limit `(K, X)` of a family in
/// `Diag_∘(FinSet)`.
pub fn check_general_limit_recomposition(family: &BackwardFamily, bound: usize) -> VerificationReport {
    const CHECK: &str = "check_general_limit_recomposition";
    let run = || -> Checked<VerificationReport> {
        let l = limit_in_diag(family, bound).map_err(|e| diag_report(CHECK, e))?;
        let lhs = limit_of(CHECK, &l.x)?;
        let d = family.shape();
        // along u: d -> e, j |-> phi^u_j(s_{Phi u j})
        let it = IteratedLimit::build(CHECK, d, family.diagrams().to_vec(), |u, s| {
            let t = family.transition(u);
            let p = family.phi(u);
            t.source().objects().map(|j| p.component(j).apply(s[t.obj(j).0])).collect()
        })?;
        let h = it.comparison(CHECK, &lhs, |d, s| {
            let m = &l.projections[d.0];
            m.functor.source().objects().map(|i| m.phi.component(i).apply(s[m.functor.obj(i).0])).collect()
        })?;
        Ok(with_sizes(bijection_report(CHECK, &h), lhs.apex.len(), it.apex().len())
            .with_stat("k_objects", l.k().object_count()))
    };
    run().unwrap_or_else(|e| e)
}

/// The family `(X K_d)` over `Phi` with identity cells.
pub fn restriction_family(phi: &CatDiagram, legs: &[FinFunctor], x: &SetDiagram) -> Result<DiagFamily, String> {
    let d = phi.shape();
    let diagrams: Vec<SetDiagram> = legs
        .iter()
        .map(|leg| restrict(x, leg).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let cells = d
        .morphisms()
        .map(|u| {
            let src = diagrams[d.dom(u).0].clone();
            let tgt = restrict(&diagrams[d.cod(u).0], phi.transition(u)).map_err(|e| e.to_string())?;
            let ids = src.sets().iter().map(FinFunction::identity).collect();
            SetTransformation::new(src, tgt, ids).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    DiagFamily::new(d.clone(), diagrams, phi.transitions().to_vec(), cells).map_err(|e| e.to_string())
}

/// Three routes to `colim^K X` agree: the direct decomposition, the general
/// decomposition of the restriction family transported along the mediator
/// `(K', X') -> (K, X)`, and `colim (X Q)` over the total category, where
/// `Q` is certified final.
pub fn check_cdf_concordance(phi: &CatDiagram, x: &SetDiagram, bound: usize) -> VerificationReport {
    const CHECK: &str = "check_cdf_concordance";
    let run = || -> Checked<VerificationReport> {
        let shapes = colimit_cat(phi, bound).map_err(|e| colim_report(CHECK, e))?;
        let (direct, lhs, h_a) = cdf_parts("direct", phi, x, bound, Some((&shapes.colimit, &shapes.cocone)))?;
        let x = on(CHECK, x, &shapes.colimit, "X")?;
        let mut parts = vec![direct];

        // through Diag°
        let family = restriction_family(phi, &shapes.cocone, &x).map_err(|e| invalid(CHECK, e))?;
        let general = (|| -> Checked<VerificationReport> {
            const PART: &str = "through_diagrams";
            let c = colimit_in_diag(&family, bound).map_err(|e| diag_report(PART, e))?;
            let cocone = phi
                .shape()
                .objects()
                .map(|d| {
                    let src = family.diagram(d).clone();
                    DiagMorphism::new(
                        Variant::Forward,
                        src.clone(),
                        x.clone(),
                        shapes.cocone[d.0].clone(),
                        SetTransformation::identity(&src),
                    )
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| diag_report(PART, e))?;
            let m = diag_colimit_mediator(&c, &cocone).map_err(|e| diag_report(PART, e))?;
            let inner = colimit_set(&c.x);
            let induced = descend(PART, &inner, &lhs.apex, |o, z| {
                lhs.legs[m.functor.obj(o).0].apply(m.phi.component(o).apply(z))
            })?;
            let it = tfcf_rhs(PART, &family)?;
            let h_b = it.comparison(PART, &inner.apex, |d, i, z| {
                let j = &c.injections[d.0];
                inner.legs[j.functor.obj(i).0].apply(j.phi.component(i).apply(z))
            })?;
            let via = induced.after(&h_b).unwrap();
            if !induced.is_bijective() {
                return Ok(bijection_report(PART, &induced));
            }
            Ok(if via.mapping() == h_a.mapping() {
                VerificationReport::pass(PART)
            } else {
                VerificationReport::fail(PART, json!({"error": "RoutesDisagree", "first": h_a.table(), "second": via.table()}))
            })
        })()
        .unwrap_or_else(|e| e);
        parts.push(general);

        // through the total category
        let total = (|| -> Checked<VerificationReport> {
            const PART: &str = "through_total";
            let groth = groth_co(phi).map_err(|e| invalid(PART, e.to_string()))?;
            let q = comparison_q(&groth, &shapes).map_err(|e| colim_report(PART, e))?;
            let final_q = certify_cofinal_quotient(&q);
            if !final_q.is_pass() {
                return Ok(final_q);
            }
            let xq = restrict(&x, &q).unwrap();
            let over_total = colimit_set(&xq);
            let legs = groth
                .total
                .objects()
                .map(|o| {
                    FinFunction::new(xq.set(o).clone(), lhs.apex.clone(), lhs.legs[q.obj(o).0].mapping().to_vec())
                        .unwrap()
                })
                .collect();
            let cocone = SetCocone::new(xq.clone(), lhs.apex.clone(), legs)
                .map_err(|e| VerificationReport::fail(PART, json!({"error": "NotACocone", "reason": e.to_string()})))?;
            let induced = mediate(&over_total, &cocone)
                .map_err(|e| VerificationReport::fail(PART, json!({"error": "NoMediator", "reason": e.to_string()})))?;
            if !induced.is_bijective() {
                return Ok(bijection_report(PART, &induced));
            }
            let family = tfcf_family(PART, &groth, &xq)?;
            let it = tfcf_rhs(PART, &family)?;
            let h_c = it.comparison(PART, &over_total.apex, |d, i, z| {
                over_total.legs[groth.object(d, i).0].apply(z)
            })?;
            let via = induced.after(&h_c).unwrap();
            Ok(if via.mapping() == h_a.mapping() {
                VerificationReport::pass(PART)
            } else {
                VerificationReport::fail(PART, json!({"error": "RoutesDisagree", "first": h_a.table(), "second": via.table()}))
            })
        })()
        .unwrap_or_else(|e| e);
        parts.push(total);
        Ok(VerificationReport::all(CHECK, parts).with_stat("lhs", lhs.apex.len()))
    };
    run().unwrap_or_else(|e| e)
}

/// The right-hand side of the twisted colimit formula is the set colimit of
/// the colimit in `Diag°` of the family `d -> E(colim T_d)`.
pub fn check_tfcf_reflection(groth: &GrothendieckResult, t: &SetDiagram, bound: usize) -> VerificationReport {
    const CHECK: &str = "check_tfcf_reflection";
    let run = || -> Checked<VerificationReport> {
        let family = tfcf_family(CHECK, groth, t)?;
        let it = tfcf_rhs(CHECK, &family)?;
        let d = family.shape();
        let one = Arc::new(fixtures::one());
        let point = |s: &FinSet| SetDiagram::new(one.clone(), vec![s.clone()], vec![(0..s.len()).collect()]).unwrap();
        let diagrams: Vec<SetDiagram> = it.inner.iter().map(|c| point(&c.apex)).collect();
        let cells = d
            .morphisms()
            .map(|u| {
                let (a, b) = (d.dom(u), d.cod(u));
                let map = it.outer.diagram.function(u);
                SetTransformation::new(diagrams[a.0].clone(), diagrams[b.0].clone(), vec![map]).unwrap()
            })
            .collect();
        let ids = d.morphisms().map(|_| FinFunctor::identity(&one)).collect();
        let reflected = DiagFamily::new(d.clone(), diagrams, ids, cells).map_err(|e| invalid(CHECK, e.to_string()))?;
        let c = colimit_in_diag(&reflected, bound).map_err(|e| diag_report(CHECK, e))?;
        let glued = colimit_set(&c.x);
        let h = descend(CHECK, &it.outer, &glued.apex, |d, z| {
            let m = &c.injections[d.0];
            glued.legs[m.functor.obj(ObjId(0)).0].apply(m.phi.component(ObjId(0)).apply(z))
        })?;
        Ok(with_sizes(bijection_report(CHECK, &h), glued.apex.len(), it.apex().len())
            .with_stat("k_objects", c.k().object_count()))
    };
    run().unwrap_or_else(|e| e)
}
