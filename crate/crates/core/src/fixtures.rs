//! The standard small categories used throughout tests and the corpus.

use std::sync::Arc;

use crate::fincat::{CategoryBuilder, FinCategory, FinFunctor, MorId, ObjId, RawCategory};
use crate::grothendieck::{CatDiagram, Variance};

fn raw(
    objects: &[&str],
    morphisms: &[(&str, &str, &str)],
    identities: &[(&str, &str)],
    composition: &[(&str, &str, &str)],
) -> FinCategory {
    let s = |x: &&str| x.to_string();
    let r = RawCategory {
        objects: objects.iter().map(s).collect(),
        morphisms: morphisms
            .iter()
            .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
            .collect(),
        identities: identities
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        composition: composition
            .iter()
            .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
            .collect(),
    };
    FinCategory::from_raw(&r).expect("fixture is valid")
}

/// The terminal category.
pub fn one() -> FinCategory {
    raw(&["*"], &[("1", "*", "*")], &[("*", "1")], &[])
}

/// The interval `0 -a-> 1`.
pub fn two() -> FinCategory {
    raw(
        &["0", "1"],
        &[("id0", "0", "0"), ("id1", "1", "1"), ("a", "0", "1")],
        &[("0", "id0"), ("1", "id1")],
        &[],
    )
}

/// `l <-f- s -g-> r`
pub fn span() -> FinCategory {
    raw(
        &["l", "s", "r"],
        &[
            ("idl", "l", "l"),
            ("ids", "s", "s"),
            ("idr", "r", "r"),
            ("f", "s", "l"),
            ("g", "s", "r"),
        ],
        &[("l", "idl"), ("s", "ids"), ("r", "idr")],
        &[],
    )
}

/// Two parallel arrows `f, g: 0 -> 1`.
pub fn pair() -> FinCategory {
    raw(
        &["0", "1"],
        &[("id0", "0", "0"), ("id1", "1", "1"), ("f", "0", "1"), ("g", "0", "1")],
        &[("0", "id0"), ("1", "id1")],
        &[],
    )
}

/// The path category `0 -a-> 1 -b-> 2`.
pub fn push3() -> FinCategory {
    raw(
        &["0", "1", "2"],
        &[
            ("id0", "0", "0"),
            ("id1", "1", "1"),
            ("id2", "2", "2"),
            ("a", "0", "1"),
            ("b", "1", "2"),
            ("ba", "0", "2"),
        ],
        &[("0", "id0"), ("1", "id1"), ("2", "id2")],
        &[("b", "a", "ba")],
    )
}

/// The cyclic group of order `n` as a one-object category with elements
/// `e, r, r2, ...`.
pub fn cyclic(n: usize) -> FinCategory {
    assert!(n >= 1);
    let mut b = CategoryBuilder::new();
    let o = b.object("*");
    for k in 0..n {
        let name = match k {
            0 => "e".to_string(),
            1 => "r".to_string(),
            _ => format!("r{k}"),
        };
        b.morphism(name, o, o);
    }
    b.set_identity(o, MorId(0));
    b.build(|g, f| Some(MorId((g.0 + f.0) % n))).expect("cyclic group")
}

pub fn z2() -> FinCategory {
    cyclic(2)
}

pub fn z3() -> FinCategory {
    cyclic(3)
}

/// The symmetric group on three letters; `ijk` is the permutation
/// `0 -> i, 1 -> j, 2 -> k`.
pub fn d3() -> FinCategory {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut b = CategoryBuilder::new();
    let o = b.object("*");
    for p in &perms {
        b.morphism(format!("{}{}{}", p[0], p[1], p[2]), o, o);
    }
    b.set_identity(o, MorId(0));
    b.build(|g, f| {
        let (g, f) = (perms[g.0], perms[f.0]);
        let h = [g[f[0]], g[f[1]], g[f[2]]];
        perms.iter().position(|p| *p == h).map(MorId)
    })
    .expect("symmetric group")
}

/// `n` objects and only identities.
pub fn discrete(n: usize) -> FinCategory {
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        let o = b.object(i.to_string());
        b.identity(format!("id{i}"), o);
    }
    b.build(|g, f| if g == f { Some(g) } else { None }).expect("discrete category")
}

/// The poset on `0..n` generated by `relations` (pairs `i <= j`); morphism
/// `i<j` for each related pair and `idi` for identities. Panics if the
/// relation is not antisymmetric after closure.
pub fn poset(n: usize, relations: &[(usize, usize)]) -> FinCategory {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(i, j) in relations {
        le[i][j] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            assert!(i == j || !(le[i][j] && le[j][i]), "relation is not antisymmetric");
        }
    }
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.object(i.to_string());
    }
    let mut id = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                let name = if i == j { format!("id{i}") } else { format!("{i}<{j}") };
                id[i][j] = Some(b.morphism(name, ObjId(i), ObjId(j)));
            }
        }
    }
    for (i, row) in id.iter().enumerate() {
        b.set_identity(ObjId(i), row[i].unwrap());
    }
    let ends: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| le[i][j])
        .collect();
    b.build(|g, f| id[ends[f.0].0][ends[g.0].1]).expect("poset category")
}

/// The chain `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> FinCategory {
    let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    poset(n, &rel)
}

/// `Z2` acting on `Z3` by inversion, as a covariant diagram.
pub fn inversion_action() -> CatDiagram {
    let z2 = Arc::new(z2());
    let z3 = Arc::new(z3());
    let inv = FinFunctor::new(
        z3.clone(),
        z3.clone(),
        vec![ObjId(0)],
        z3.morphisms().map(|m| z3.inverse(m).unwrap()).collect(),
    )
    .unwrap();
    let transitions = z2
        .morphisms()
        .map(|u| if z2.is_identity(u) { FinFunctor::identity(&z3) } else { inv.clone() })
        .collect();
    CatDiagram::new(z2, vec![z3], transitions, Variance::Covariant).expect("inversion is an action")
}

/// Over SPAN: `TWO <- ONE -> TWO`, gluing the end of the left interval to
/// the start of the right one. Its colimit is PUSH3.
pub fn span_gluing() -> CatDiagram {
    let shape = Arc::new(span());
    let one = Arc::new(one());
    let two = Arc::new(two());
    let at = |o: usize| FinFunctor::constant(&one, &two, ObjId(o));
    let transitions = shape
        .morphisms()
        .map(|u| match shape.mor_name(u) {
            "f" => at(1),
            "g" => at(0),
            "ids" => FinFunctor::identity(&one),
            _ => FinFunctor::identity(&two),
        })
        .collect();
    CatDiagram::new(shape, vec![two.clone(), one, two], transitions, Variance::Covariant)
        .expect("constant functors")
}

/// Over PAIR: both endpoint inclusions `ONE -> TWO`. The coequalizer in
/// `Cat` is the free monoid on one generator, which is infinite.
pub fn loop_coequalizer() -> CatDiagram {
    let shape = Arc::new(pair());
    let one = Arc::new(one());
    let two = Arc::new(two());
    let transitions = shape
        .morphisms()
        .map(|u| match shape.mor_name(u) {
            "f" => FinFunctor::constant(&one, &two, ObjId(0)),
            "g" => FinFunctor::constant(&one, &two, ObjId(1)),
            "id0" => FinFunctor::identity(&one),
            _ => FinFunctor::identity(&two),
        })
        .collect();
    CatDiagram::new(shape, vec![one, two], transitions, Variance::Covariant).expect("constant functors")
}
