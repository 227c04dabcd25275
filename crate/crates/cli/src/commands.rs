//! Subcommands. Each one loads its inputs, runs the engine and returns a
//! report; `explain` returns text instead.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use fibrelab::catcolim::{certify_cofinal_quotient, colimit_cat, comparison_q, CatColimitResult, DEFAULT_BOUND};
use fibrelab::diagcat::strict_bijection;
use fibrelab::fibrations::{
    bifibration_check, canonical_cleavage, free_cofibration, is_fibration, lift_limit, verify_split_cofibration,
    Direction,
};
use fibrelab::fincat::search::find_isomorphism;
use fibrelab::fincat::{comma, product, FinCategory, FinFunctor};
use fibrelab::finset::{colimit_set, is_bijection, limit_set, mediate, restrict, SetCocone, SetDiagram};
use fibrelab::formulas::{
    check_cdf, check_fubini, check_general_cdf, check_general_limit_recomposition, check_limit_recomposition,
    check_tfcf, check_twisted_limit,
};
use fibrelab::grothendieck::{groth_co, groth_contra, guitart_check_on, guitart_hat, GrothendieckResult, Variance};
use fibrelab::kan::{lan, ran};
use fibrelab::random::{random_set_diagram, rng};
use fibrelab::report::{Status, VerificationReport};

use crate::schema::{
    to_value, CatDiagramJson, CategoryJson, CleavageJson, Family, FamilyJson, FunctorJson, MapsJson,
    SetDiagramJson,
};

#[derive(Parser, Debug, Clone)]
#[command(name = "fibrelab", version, about = "Finite category theory checks with machine-readable reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Bound on morphism classes when computing colimits of categories
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    pub bound: usize,
    /// Seed for randomly generated inputs
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of random instances when an input is not given
    #[arg(long, global = true, default_value_t = 10)]
    pub cases: usize,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Leave elapsed time out of the report
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Run the dual construction or formula
    #[arg(long, global = true)]
    pub dual: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Parse and validate any input file
    Validate { file: PathBuf },
    Opposite { category: PathBuf },
    Product { left: PathBuf, right: PathBuf },
    /// The comma category F | G
    Comma {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    ColimitSet { diagram: PathBuf },
    LimitSet { diagram: PathBuf },
    /// Left Kan extension (right with --dual)
    Kan {
        #[arg(long)]
        along: PathBuf,
        #[arg(long)]
        x: PathBuf,
    },
    ColimitCat {
        #[arg(long)]
        phi: PathBuf,
    },
    Grothendieck {
        #[arg(long)]
        phi: PathBuf,
    },
    /// Round trips between diagrams on the total category and families
    Guitart {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        t: Option<PathBuf>,
    },
    CheckFibration { functor: PathBuf },
    CheckCofibration { functor: PathBuf },
    Bifibration {
        functor: PathBuf,
        #[arg(long)]
        cleavage: Option<PathBuf>,
        #[arg(long)]
        cocleavage: Option<PathBuf>,
    },
    /// Lift the limit of a diagram into the total category of a bifibration
    LiftLimit {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    FreeCofibration { functor: PathBuf },
    /// The hom-set bijection of strictification between two diagrams
    Strictify {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// Finality of the comparison functor and colim(XQ) = colim X
    ComparisonQ {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        x: Option<PathBuf>,
    },
    CheckCdf {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        x: Option<PathBuf>,
    },
    CheckTfcf {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        t: Option<PathBuf>,
    },
    CheckFubini {
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        t: Option<PathBuf>,
    },
    CheckGeneralCdf {
        #[arg(long)]
        family: PathBuf,
    },
    /// Run every case file in a directory
    Corpus { dir: PathBuf },
    /// Render a report for humans
    Explain { report: PathBuf },
}

pub enum Output {
    Report(VerificationReport),
    Text(String, i32),
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Report(r) => r.status.exit_code(),
            Output::Text(_, code) => *code,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Output::Report(r) => r.to_json() + "\n",
            Output::Text(t, _) => t.clone(),
        }
    }
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn category(path: &Path) -> Result<Arc<FinCategory>, String> {
    read::<CategoryJson>(path)?.to_category()
}

fn functor(path: &Path) -> Result<FinFunctor, String> {
    read::<FunctorJson>(path)?.to_functor()
}

fn set_diagram(path: &Path) -> Result<SetDiagram, String> {
    read::<SetDiagramJson>(path)?.to_diagram()
}

fn cat_diagram(path: &Path) -> Result<fibrelab::grothendieck::CatDiagram, String> {
    read::<CatDiagramJson>(path)?.to_diagram()
}

/// `x` moved onto `c`: unchanged if it already lives there, otherwise along
/// an isomorphism found by search.
fn onto(x: &SetDiagram, c: &Arc<FinCategory>) -> Result<SetDiagram, String> {
    if let Ok(y) = x.reshape(c) {
        return Ok(y);
    }
    let iso = find_isomorphism(c, x.shape()).ok_or("the diagram's shape is not isomorphic to the expected category")?;
    restrict(x, &iso).map_err(|e| e.to_string())
}

fn pass_with(check: &str, witness: Value) -> VerificationReport {
    VerificationReport::pass_with(check, witness)
}

fn invalid(check: &str, reason: String) -> VerificationReport {
    VerificationReport::invalid_input(check, json!({"error": "InvalidInput", "reason": reason}))
}

fn check_name(c: &Command, dual: bool) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Opposite { .. } => "opposite",
        Command::Product { .. } => "product",
        Command::Comma { .. } => "comma",
        Command::ColimitSet { .. } if dual => "limit_set",
        Command::ColimitSet { .. } => "colimit_set",
        Command::LimitSet { .. } if dual => "colimit_set",
        Command::LimitSet { .. } => "limit_set",
        Command::Kan { .. } if dual => "ran",
        Command::Kan { .. } => "lan",
        Command::ColimitCat { .. } => "colimit_cat",
        Command::Grothendieck { .. } => "grothendieck",
        Command::Guitart { .. } => "guitart_round_trip",
        Command::CheckFibration { .. } if dual => "is_cofibration",
        Command::CheckFibration { .. } => "is_fibration",
        Command::CheckCofibration { .. } if dual => "is_fibration",
        Command::CheckCofibration { .. } => "is_cofibration",
        Command::Bifibration { .. } => "bifibration_check",
        Command::LiftLimit { .. } => "lift_limit",
        Command::FreeCofibration { .. } => "free_cofibration",
        Command::Strictify { .. } => "strict_bijection",
        Command::ComparisonQ { .. } => "comparison_q",
        Command::CheckCdf { .. } if dual => "check_limit_recomposition",
        Command::CheckCdf { .. } => "check_cdf",
        Command::CheckTfcf { .. } if dual => "check_twisted_limit",
        Command::CheckTfcf { .. } => "check_tfcf",
        Command::CheckFubini { .. } => "check_fubini",
        Command::CheckGeneralCdf { .. } => "check_general_cdf",
        Command::Corpus { .. } => "corpus",
        Command::Explain { .. } => "explain",
    }
}

pub fn execute(cli: &Cli) -> Output {
    if let Command::Explain { report } = &cli.command {
        return explain(report);
    }
    let started = Instant::now();
    let name = check_name(&cli.command, cli.dual);
    let mut report = match run(cli, name) {
        Ok(r) => r,
        Err(reason) => invalid(name, reason),
    };
    if !cli.no_timing {
        report = report.with_stat("elapsed_ms", started.elapsed().as_millis() as u64);
    }
    Output::Report(report)
}

fn seeded(cli: &Cli) -> u64 {
    cli.seed.unwrap_or(0)
}

/// Runs `f` on `cli.cases` random instances and combines the reports.
fn random_cases(
    cli: &Cli,
    name: &str,
    mut f: impl FnMut(&mut fibrelab::random::ChaCha8Rng) -> VerificationReport,
) -> VerificationReport {
    let seed = seeded(cli);
    let mut r = rng(seed);
    let parts = (0..cli.cases).map(|_| f(&mut r)).collect();
    VerificationReport::all(name, parts).with_seed(seed)
}

fn run(cli: &Cli, name: &str) -> Result<VerificationReport, String> {
    let bound = cli.bound;
    Ok(match &cli.command {
        Command::Validate { file } => validate(file)?,
        Command::Opposite { category: c } => {
            let c = category(c)?;
            pass_with(name, json!({"category": to_value(&CategoryJson::from_category(&c.opposite()))}))
        }
        Command::Product { left, right } => {
            let (l, r) = (category(left)?, category(right)?);
            let p = Arc::new(product(&l, &r));
            pass_with(name, json!({"category": to_value(&CategoryJson::from_category(&p))}))
                .with_stat("objects", p.object_count())
                .with_stat("morphisms", p.morphism_count())
        }
        Command::Comma { f, g } => {
            let (f, g) = (functor(f)?, functor(g)?);
            let g = g
                .retarget(g.source(), f.target())
                .map_err(|e| format!("functors have different targets: {e}"))?;
            let c = comma(&f, &g).map_err(|e| e.to_string())?;
            pass_with(
                name,
                json!({
                    "category": to_value(&CategoryJson::from_category(&c.category)),
                    "left": to_value(&MapsJson::from_functor(&c.left)),
                    "right": to_value(&MapsJson::from_functor(&c.right)),
                }),
            )
            .with_stat("objects", c.category.object_count())
            .with_stat("morphisms", c.category.morphism_count())
        }
        Command::ColimitSet { diagram } | Command::LimitSet { diagram } => {
            let x = set_diagram(diagram)?;
            let shape = x.shape();
            let legs = |legs: &[fibrelab::finset::FinFunction]| -> BTreeMap<String, Value> {
                shape
                    .objects()
                    .map(|o| (shape.obj_name(o).to_string(), json!(legs[o.0].table())))
                    .collect()
            };
            if name == "colimit_set" {
                let c = colimit_set(&x);
                pass_with(name, json!({"apex": c.apex.elements(), "legs": legs(&c.legs)})).with_stat("size", c.apex.len())
            } else {
                match limit_set(&x) {
                    Ok(c) => {
                        pass_with(name, json!({"apex": c.apex.elements(), "legs": legs(&c.legs)})).with_stat("size", c.apex.len())
                    }
                    Err(e) => VerificationReport::resource_exceeded(name, json!({"error": "ResourceExceeded", "reason": e.to_string()})),
                }
            }
        }
        Command::Kan { along, x } => {
            let f = functor(along)?;
            let x = onto(&set_diagram(x)?, f.source())?;
            let r = if cli.dual { ran(&f, &x) } else { lan(&f, &x) };
            match r {
                Ok(r) => {
                    let src = f.source();
                    let cells: BTreeMap<String, Value> = src
                        .objects()
                        .map(|o| (src.obj_name(o).to_string(), json!(r.unit_or_counit[o.0].table())))
                        .collect();
                    let key = if cli.dual { "counit" } else { "unit" };
                    pass_with(name, json!({"extension": to_value(&SetDiagramJson::from_diagram(&r.extension)), key: cells}))
                        .with_stat("size", r.extension.total_size())
                }
                Err(e) => invalid(name, e.to_string()),
            }
        }
        Command::ColimitCat { phi } => {
            let phi = cat_diagram(phi)?;
            match colimit_cat(&phi, bound) {
                Ok(r) => colimit_report(name, &r),
                Err(e) => e.report(name),
            }
        }
        Command::Grothendieck { phi } => {
            let mut phi = cat_diagram(phi)?;
            if cli.dual {
                phi = phi.dual();
            }
            let g = total(&phi)?;
            pass_with(
                name,
                json!({
                    "total": to_value(&CategoryJson::from_category(&g.total)),
                    "projection": to_value(&MapsJson::from_functor(&g.projection)),
                }),
            )
            .with_stat("objects", g.total.object_count())
            .with_stat("morphisms", g.total.morphism_count())
        }
        Command::Guitart { phi, t } => {
            let groth = groth_co(&cat_diagram(phi)?).map_err(|e| e.to_string())?;
            match t {
                Some(t) => guitart_round_trip(name, &groth, &onto(&set_diagram(t)?, &groth.total)?),
                None => random_cases(cli, name, |r| guitart_round_trip(name, &groth, &random_set_diagram(r, &groth.total, 3))),
            }
        }
        Command::CheckFibration { functor: p } | Command::CheckCofibration { functor: p } => {
            let p = functor(p)?;
            let direction = if name == "is_fibration" { Direction::Fibration } else { Direction::Cofibration };
            let (r, cleavage) = is_fibration(&p, direction);
            match cleavage {
                Some(c) if r.is_pass() => {
                    let mut w = if r.witness.is_object() { r.witness.clone() } else { json!({}) };
                    w["cleavage"] = to_value(&CleavageJson::from_cleavage(&c));
                    VerificationReport { witness: w, ..r }
                }
                _ => r,
            }
        }
        Command::Bifibration { functor: p, cleavage, cocleavage } => {
            let p = functor(p)?;
            let load = |path: &Option<PathBuf>, d: Direction| -> Result<Option<fibrelab::fibrations::CleavageData>, String> {
                match path {
                    Some(path) => read::<CleavageJson>(path)?.to_cleavage().map(Some),
                    None => Ok(canonical_cleavage(&p, d).ok()),
                }
            };
            let (Some(cl), Some(co)) = (load(cleavage, Direction::Fibration)?, load(cocleavage, Direction::Cofibration)?) else {
                return Ok(VerificationReport::fail(name, json!({"error": "NoCleavage", "reason": "the functor lacks (co)cartesian liftings"})));
            };
            match bifibration_check(&co, &cl) {
                Ok(w) => VerificationReport::pass(name)
                    .with_stat("units", w.units.len())
                    .with_stat("counits", w.counits.len()),
                Err(e) => e.report(name),
            }
        }
        Command::LiftLimit { p, diagram } => {
            let p = functor(p)?;
            let f = functor(diagram)?;
            let f = f.retarget(f.source(), p.source()).map_err(|e| format!("diagram does not land in the total category: {e}"))?;
            let (Ok(cl), Ok(co)) = (
                canonical_cleavage(&p, Direction::Fibration),
                canonical_cleavage(&p, Direction::Cofibration),
            ) else {
                return Ok(VerificationReport::fail(name, json!({"error": "NotABifibration"})));
            };
            let w = match bifibration_check(&co, &cl) {
                Ok(w) => w,
                Err(e) => return Ok(e.report(name)),
            };
            match lift_limit(&w, &f) {
                Ok(l) => {
                    let e = p.source();
                    let mut r = l.report.clone();
                    r.check_name = name.to_string();
                    let legs: Vec<&str> = l.cone.legs.iter().map(|&m| e.mor_name(m)).collect();
                    r.witness = json!({"apex": e.obj_name(l.cone.apex), "legs": legs});
                    r
                }
                Err(e) => e.report(name),
            }
        }
        Command::FreeCofibration { functor: p } => {
            let p = functor(p)?;
            let free = free_cofibration(&p);
            let split = match verify_split_cofibration(&free.cocleavage()) {
                Ok(_) => VerificationReport::pass("split_cofibration"),
                Err(e) => e.report("split_cofibration"),
            };
            let mut r = VerificationReport::all(name, vec![split]);
            r.witness["total"] = to_value(&CategoryJson::from_category(&free.groth.total));
            r.witness["projection"] = to_value(&MapsJson::from_functor(&free.functor));
            r.with_stat("objects", free.groth.total.object_count())
                .with_stat("morphisms", free.groth.total.morphism_count())
        }
        Command::Strictify { x, y, limit } => {
            let (mut x, mut y) = (functor(x)?, functor(y)?);
            y = y.retarget(y.source(), x.target()).map_err(|e| format!("diagrams in different categories: {e}"))?;
            if cli.dual {
                x = x.opposite();
                y = y.opposite();
                y = y.retarget(y.source(), x.target()).unwrap();
            }
            let mut r = strict_bijection(&x, &y, *limit);
            r.check_name = name.to_string();
            r
        }
        Command::ComparisonQ { phi, x } => {
            let phi = cat_diagram(phi)?;
            let shapes = match colimit_cat(&phi, bound) {
                Ok(r) => r,
                Err(e) => return Ok(e.report(name)),
            };
            let groth = groth_co(&phi).map_err(|e| e.to_string())?;
            let q = comparison_q(&groth, &shapes).map_err(|e| e.to_string())?;
            let cofinal = certify_cofinal_quotient(&q);
            match x {
                Some(x) => {
                    let x = onto(&set_diagram(x)?, &shapes.colimit)?;
                    VerificationReport::all(name, vec![cofinal, restriction_along_q(&q, &x)])
                }
                None => {
                    let seed = seeded(cli);
                    let mut r = rng(seed);
                    let mut parts = vec![cofinal];
                    parts.extend((0..cli.cases).map(|_| restriction_along_q(&q, &random_set_diagram(&mut r, &shapes.colimit, 3))));
                    VerificationReport::all(name, parts).with_seed(seed)
                }
            }
        }
        Command::CheckCdf { phi, x } => {
            let phi = cat_diagram(phi)?;
            let k = match colimit_cat(&phi, bound) {
                Ok(r) => r.colimit,
                Err(e) => return Ok(e.report(name)),
            };
            let check = |x: &SetDiagram| {
                if cli.dual {
                    check_limit_recomposition(&phi, x, bound)
                } else {
                    check_cdf(&phi, x, bound, None)
                }
            };
            match x {
                Some(x) => check(&onto(&set_diagram(x)?, &k)?),
                None => random_cases(cli, name, |r| check(&random_set_diagram(r, &k, 3))),
            }
        }
        Command::CheckTfcf { phi, t } => {
            let mut phi = cat_diagram(phi)?;
            let wanted = if cli.dual { Variance::Contravariant } else { Variance::Covariant };
            if phi.variance() != wanted {
                phi = phi.dual();
            }
            let groth = total(&phi)?;
            let check = |t: &SetDiagram| {
                if cli.dual {
                    check_twisted_limit(&groth, t)
                } else {
                    check_tfcf(&groth, t)
                }
            };
            match t {
                Some(t) => check(&onto(&set_diagram(t)?, &groth.total)?),
                None => random_cases(cli, name, |r| check(&random_set_diagram(r, &groth.total, 3))),
            }
        }
        Command::CheckFubini { d, e, t } => {
            if cli.dual {
                return Err("the Fubini check has no dual form here; use check-tfcf --dual with a constant diagram".into());
            }
            let (d, e) = (category(d)?, category(e)?);
            let de = Arc::new(product(&d, &e));
            match t {
                Some(t) => check_fubini(&d, &e, &onto(&set_diagram(t)?, &de)?),
                None => random_cases(cli, name, |r| check_fubini(&d, &e, &random_set_diagram(r, &de, 3))),
            }
        }
        Command::CheckGeneralCdf { family } => match read::<FamilyJson>(family)?.to_family()? {
            Family::Forward(t) => check_general_cdf(&t, bound),
            Family::Backward(t) => check_general_limit_recomposition(&t, bound),
        },
        Command::Corpus { dir } => corpus(dir)?,
        Command::Explain { .. } => unreachable!("handled before dispatch"),
    })
}

fn total(phi: &fibrelab::grothendieck::CatDiagram) -> Result<GrothendieckResult, String> {
    match phi.variance() {
        Variance::Covariant => groth_co(phi),
        Variance::Contravariant => groth_contra(phi),
    }
    .map_err(|e| e.to_string())
}

fn colimit_report(name: &str, r: &CatColimitResult) -> VerificationReport {
    let shape = r.diagram.shape();
    let legs: BTreeMap<String, Value> = shape
        .objects()
        .map(|d| (shape.obj_name(d).to_string(), to_value(&MapsJson::from_functor(r.leg(d)))))
        .collect();
    pass_with(name, json!({"colimit": to_value(&CategoryJson::from_category(&r.colimit)), "legs": legs}))
        .with_stat("objects", r.colimit.object_count())
        .with_stat("morphisms", r.colimit.morphism_count())
        .with_stat("relations", r.stats.relations)
        .with_stat("states_defined", r.stats.states_defined)
        .with_stat("coincidences", r.stats.coincidences)
}

fn guitart_round_trip(name: &str, groth: &GrothendieckResult, t: &SetDiagram) -> VerificationReport {
    let sigma = match guitart_hat(groth, t) {
        Ok(s) => s,
        Err(e) => return invalid(name, e.to_string()),
    };
    let back = match guitart_check_on(groth, &sigma) {
        Ok(b) => b,
        Err(e) => return VerificationReport::fail(name, json!({"error": "NoCheck", "reason": e.to_string()})),
    };
    let first = if back == *t {
        VerificationReport::pass("check_after_hat")
    } else {
        VerificationReport::fail("check_after_hat", json!({"error": "RoundTripMismatch"}))
    };
    let second = match guitart_hat(groth, &back) {
        Ok(s) if s == sigma => VerificationReport::pass("hat_after_check"),
        _ => VerificationReport::fail("hat_after_check", json!({"error": "RoundTripMismatch"})),
    };
    let mut r = VerificationReport::all(name, vec![first, second]);
    if r.is_pass() {
        r.witness["family"] = to_value(&FamilyJson::from_forward(&sigma));
    }
    r
}

/// `colim (X Q) -> colim X` induced by the legs, certified bijective.
fn restriction_along_q(q: &FinFunctor, x: &SetDiagram) -> VerificationReport {
    const CHECK: &str = "colimit_along_q";
    let xq = restrict(x, q).expect("Q lands in K");
    let whole = colimit_set(x);
    let over_total = colimit_set(&xq);
    let legs = q
        .source()
        .objects()
        .map(|o| {
            fibrelab::finset::FinFunction::new(
                xq.set(o).clone(),
                whole.apex.clone(),
                whole.legs[q.obj(o).0].mapping().to_vec(),
            )
            .unwrap()
        })
        .collect();
    let induced = SetCocone::new(xq, whole.apex.clone(), legs)
        .map_err(|e| e.to_string())
        .and_then(|c| mediate(&over_total, &c).map_err(|e| e.to_string()));
    match induced {
        Ok(h) => {
            let mut r = is_bijection(&h);
            r.check_name = CHECK.to_string();
            r
        }
        Err(e) => VerificationReport::fail(CHECK, json!({"error": "NoMediator", "reason": e})),
    }
}

fn validate(path: &Path) -> Result<VerificationReport, String> {
    const CHECK: &str = "validate";
    let v: Value = read(path)?;
    let has = |k: &str| v.get(k).is_some();
    let parse = |kind: &str, r: Result<Value, String>| match r {
        Ok(stats) => {
            let mut out = VerificationReport::pass_with(CHECK, json!({"kind": kind}));
            if let Value::Object(m) = stats {
                for (k, s) in m {
                    out = out.with_stat(&k, s);
                }
            }
            out
        }
        Err(e) => VerificationReport::invalid_input(CHECK, json!({"kind": kind, "error": "InvalidInput", "reason": e})),
    };
    let typed = |v: &Value| v.clone();
    Ok(if has("variant") {
        parse(
            "family",
            serde_json::from_value::<FamilyJson>(typed(&v))
                .map_err(|e| e.to_string())
                .and_then(|f| f.to_family())
                .map(|_| json!({})),
        )
    } else if has("lifting") {
        parse(
            "cleavage",
            serde_json::from_value::<CleavageJson>(typed(&v))
                .map_err(|e| e.to_string())
                .and_then(|c| c.to_cleavage())
                .map(|c| json!({"liftings": c.lifting.len()})),
        )
    } else if has("variance") {
        parse(
            "cat_diagram",
            serde_json::from_value::<CatDiagramJson>(typed(&v))
                .map_err(|e| e.to_string())
                .and_then(|c| c.to_diagram())
                .map(|c| json!({"fibres": c.fibres().len()})),
        )
    } else if has("sets") {
        parse(
            "set_diagram",
            serde_json::from_value::<SetDiagramJson>(typed(&v))
                .map_err(|e| e.to_string())
                .and_then(|c| c.to_diagram())
                .map(|x| json!({"elements": x.total_size()})),
        )
    } else if has("source") {
        parse(
            "functor",
            serde_json::from_value::<FunctorJson>(typed(&v))
                .map_err(|e| e.to_string())
                .and_then(|c| c.to_functor())
                .map(|f| json!({"objects": f.source().object_count()})),
        )
    } else {
        parse(
            "category",
            serde_json::from_value::<CategoryJson>(typed(&v))
                .map_err(|e| e.to_string())
                .and_then(|c| c.to_category())
                .map(|c| json!({"objects": c.object_count(), "morphisms": c.morphism_count()})),
        )
    })
}

/// One entry of a corpus directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseJson {
    pub name: String,
    pub theorem: String,
    /// Command line after the program name; file arguments are relative to
    /// the corpus directory.
    pub argv: Vec<String>,
    #[serde(default = "expect_pass")]
    pub expect: Status,
}

fn expect_pass() -> Status {
    Status::Pass
}

fn corpus(dir: &Path) -> Result<VerificationReport, String> {
    const CHECK: &str = "corpus";
    let mut cases: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(".case.json"))
        .collect();
    cases.sort();
    let mut matrix: BTreeMap<String, BTreeMap<String, Value>> = BTreeMap::new();
    let mut failures = Vec::new();
    for path in &cases {
        let case: CaseJson = read(path)?;
        let argv = std::iter::once("fibrelab".to_string()).chain(case.argv.iter().map(|a| {
            let p = dir.join(a);
            if !a.starts_with("--") && p.exists() {
                p.to_string_lossy().into_owned()
            } else {
                a.clone()
            }
        }));
        let status = match Cli::try_parse_from(argv) {
            Ok(mut cli) if !matches!(cli.command, Command::Corpus { .. } | Command::Explain { .. }) => {
                cli.no_timing = true;
                match execute(&cli) {
                    Output::Report(r) => r.status,
                    Output::Text(..) => Status::InvalidInput,
                }
            }
            _ => Status::InvalidInput,
        };
        if status != case.expect {
            failures.push(json!({"case": case.name, "theorem": case.theorem, "expected": case.expect, "got": status}));
        }
        matrix
            .entry(case.theorem.clone())
            .or_default()
            .insert(case.name.clone(), json!(status));
    }
    let witness = json!({"matrix": matrix, "failures": failures});
    let r = if failures.is_empty() {
        VerificationReport::pass_with(CHECK, witness)
    } else {
        VerificationReport::fail(CHECK, witness)
    };
    Ok(r.with_stat("cases", cases.len()).with_stat("failures", failures.len()))
}

fn describe(check: &str) -> &'static str {
    match check {
        "check_cdf" => "colimit decomposition formula",
        "check_limit_recomposition" => "limit recomposition formula",
        "check_tfcf" => "twisted Fubini colimit formula",
        "check_twisted_limit" => "twisted Fubini limit formula",
        "check_fubini" => "Fubini formula for colimits",
        "check_general_cdf" => "colimit decomposition for colimits in the diagram category",
        "check_general_limit_recomposition" => "limit recomposition for limits in the diagram category",
        "check_cdf_concordance" => "agreement of the three constructions of the decomposition",
        "colimit_cat" => "colimit of finite categories",
        "comparison_q" => "the comparison functor from the total category is a cofinal quotient",
        "guitart_round_trip" => "total-category diagrams correspond to families over the base",
        "is_fibration" | "is_cofibration" => "existence of (co)cartesian liftings",
        "bifibration_check" => "each reindexing functor has a left adjoint",
        "lift_limit" => "limits lift along a bifibration",
        "free_cofibration" => "free split cofibration on a functor",
        "strict_bijection" => "strictification is right adjoint to the inclusion",
        "corpus" => "fixture corpus",
        "validate" => "input validation",
        _ => "",
    }
}

fn explain(path: &Path) -> Output {
    let report: VerificationReport = match read(path) {
        Ok(r) => r,
        Err(e) => return Output::Text(format!("invalid report: {e}\n"), Status::InvalidInput.exit_code()),
    };
    let mut out = String::new();
    let about = describe(&report.check_name);
    let headline = if about.is_empty() {
        format!("{}: {}", report.check_name, report.status.as_str())
    } else {
        format!("{}: {} ({about})", report.check_name, report.status.as_str())
    };
    out.push_str(&headline);
    out.push('\n');
    if !report.stats.is_empty() {
        let sizes: Vec<String> = report.stats.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("  sizes: {}\n", sizes.join(" ")));
    }
    if let Some(seed) = report.seed {
        out.push_str(&format!("  seed: {seed}\n"));
    }
    match report.status {
        Status::Pass => {}
        Status::ResourceExceeded => {
            if let Some(trace) = report.witness.get("trace").and_then(Value::as_array) {
                out.push_str("  growth (states processed, live classes):\n");
                for step in trace {
                    out.push_str(&format!("    {step}\n"));
                }
            }
            render_witness(&mut out, &report.witness, &["trace"]);
        }
        _ => render_witness(&mut out, &report.witness, &[]),
    }
    Output::Text(out, 0)
}

fn render_witness(out: &mut String, w: &Value, skip: &[&str]) {
    match w {
        Value::Object(m) => {
            out.push_str("  witness:\n");
            for (k, v) in m {
                if !skip.contains(&k.as_str()) {
                    out.push_str(&format!("    {k}: {v}\n"));
                }
            }
        }
        other => out.push_str(&format!("  witness: {other}\n")),
    }
}
