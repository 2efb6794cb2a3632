//! Subcommands and their reports.

use clap::{Parser, Subcommand};
use pfuniform::elliptic::{check_elliptic_modularity, WeierstrassModel};
use pfuniform::exact::{AlgebraicPoint, RationalFunction};
use pfuniform::k3::{check_k3_modularity, k3_pf_root, K3Error};
use pfuniform::mirror::{find_mum_points, mirror_map};
use pfuniform::ode::{analyze, ExponentValue};
use pfuniform::transform::{classify_pullback, sym2};
use pfuniform::uniformdata::{load_fixture, FixturePayload};
use pfuniform::uniformize::uniformization_check;
use serde_json::{json, Value};

use crate::expr::{parse_constant, parse_ratfunc_var};
use crate::input::{load_ode, load_signature, InputError, OdeInput, FIXTURE_PREFIX};
use crate::report::{yes_no, Report, TextDoc};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "pfu", version, about = "Exact analysis of Fuchsian operators and their uniformization")]
pub struct Cli {
    /// Emit one JSON object instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular points, exponents and local classification.
    Analyze {
        /// ODE file or fixture:NAME.
        #[arg(long)]
        ode: String,
    },
    /// Projective normal form of an order 2 or 3 operator.
    Pnf {
        #[arg(long)]
        ode: String,
    },
    /// Pullback of an order 2 operator along a rational map.
    Pullback {
        #[arg(long)]
        ode: String,
        /// Rational map in a new variable.
        #[arg(long)]
        map: String,
    },
    /// Symmetric square of an order 2 operator.
    Sym2 {
        #[arg(long)]
        ode: String,
    },
    /// Normal-form square root of an order 3 operator.
    Sqrt {
        #[arg(long)]
        ode: String,
    },
    /// Uniformization test for an order 2 operator in normal form.
    Uniformize {
        #[arg(long)]
        ode: String,
    },
    /// Mirror map at a point of maximal unipotent monodromy.
    MirrorMap {
        #[arg(long)]
        ode: String,
        /// `inf` or a rational number; defaults to the only such point.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        /// Report the mirror map of the coordinate scaled by this constant.
        #[arg(long)]
        scale: Option<String>,
    },
    /// Discriminant, functional invariant, Kodaira fibres and modularity.
    Elliptic {
        #[arg(long, required_unless_present = "model")]
        g2: Option<String>,
        #[arg(long, required_unless_present = "model")]
        g3: Option<String>,
        /// A bundled Weierstrass model, fixture:NAME.
        #[arg(long, conflicts_with_all = ["g2", "g3"])]
        model: Option<String>,
    },
    /// Vanishing-order test for a K3 functional invariant.
    K3Check {
        #[arg(long)]
        hn: String,
        /// Signature file or fixture:NAME.
        #[arg(long)]
        signature: String,
        /// Third-order Picard-Fuchs operator for the analytic route.
        #[arg(long)]
        ode: Option<String>,
    },
}

fn flag(name: &'static str, text: &str) -> Result<(RationalFunction, Option<char>), CliError> {
    parse_ratfunc_var(text).map_err(|source| CliError::Flag { flag: name, source })
}

fn lib(e: impl std::fmt::Display) -> CliError {
    CliError::Library(e.to_string())
}

fn exp_str(e: &Option<ExponentValue>) -> String {
    e.as_ref().map(|d| d.to_string()).unwrap_or_else(|| "-".into())
}

fn opt_json<T: ToString>(v: &Option<T>) -> Value {
    v.as_ref().map(|x| Value::String(x.to_string())).unwrap_or(Value::Null)
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Analyze { ode } => cmd_analyze(&load_ode(ode)?),
        Command::Pnf { ode } => cmd_pnf(&load_ode(ode)?),
        Command::Pullback { ode, map } => cmd_pullback(&load_ode(ode)?, map),
        Command::Sym2 { ode } => cmd_sym2(&load_ode(ode)?),
        Command::Sqrt { ode } => cmd_sqrt(&load_ode(ode)?),
        Command::Uniformize { ode } => cmd_uniformize(&load_ode(ode)?),
        Command::MirrorMap { ode, point, terms, scale } => {
            cmd_mirror(&load_ode(ode)?, point.as_deref(), *terms, scale.as_deref())
        }
        Command::Elliptic { g2, g3, model } => {
            let (w, var) = match model {
                Some(m) => model_fixture(m)?,
                None => model_flags(g2.as_deref().unwrap_or_default(), g3.as_deref().unwrap_or_default())?,
            };
            cmd_elliptic(&w, var)
        }
        Command::K3Check { hn, signature, ode } => {
            let l3 = ode.as_deref().map(load_ode).transpose()?;
            cmd_k3(hn, &load_signature(signature)?, l3.as_ref())
        }
    }
}

fn cmd_analyze(input: &OdeInput) -> Result<Report, CliError> {
    let v = input.var.to_string();
    let points = analyze(&input.ode).map_err(lib)?;
    let mut doc = TextDoc::default();
    doc.kv("operator", input.ode.display_with(&v)).kv("singular points", points.len().to_string());
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                p.location.display_with(&v),
                p.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "),
                exp_str(&p.exponent_difference),
                p.classification.to_string(),
                yes_no(p.maximal_unipotent).into(),
            ]
        })
        .collect();
    doc.table("points", &["location", "exponents", "difference", "classification", "mum"], &rows);
    let json = json!({
        "command": "analyze",
        "operator": input.ode.display_with(&v),
        "points": points.iter().map(|p| json!({
            "location": p.location.display_with(&v),
            "indicial_coefficients": p.indicial.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "exponents": p.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "exponent_difference": opt_json(&p.exponent_difference),
            "classification": p.classification.to_string(),
            "log_obstruction_checked": p.log_obstruction_checked,
            "maximal_unipotent": p.maximal_unipotent,
        })).collect::<Vec<_>>(),
    });
    Ok(Report { text: doc.finish(), json })
}

fn cmd_pnf(input: &OdeInput) -> Result<Report, CliError> {
    let v = input.var.to_string();
    let n = input.ode.pnf().map_err(lib)?;
    let mut doc = TextDoc::default();
    doc.kv("operator", input.ode.display_with(&v)).kv("normal form", n.display_with(&v));
    let json = json!({
        "command": "pnf",
        "operator": input.ode.display_with(&v),
        "normal_form": n.display_with(&v),
    });
    Ok(Report { text: doc.finish(), json })
}

fn cmd_pullback(input: &OdeInput, map: &str) -> Result<Report, CliError> {
    let v = input.var.to_string();
    let (r, z) = flag("map", map)?;
    let z = z.unwrap_or('z').to_string();
    let points = classify_pullback(&input.ode, &r).map_err(lib)?;
    let pulled = pfuniform::transform::pullback2(&input.ode, &r).and_then(|p| Ok(p.pnf2()?)).map_err(lib)?;
    let mut doc = TextDoc::default();
    doc.kv("operator", input.ode.display_with(&v))
        .kv("map", format!("{v} = {}", r.display_with(&z)))
        .kv("pulled normal form", pulled.display_with(&z));
    let image = |p: &Option<AlgebraicPoint>| p.as_ref().map(|p| p.display_with(&v)).unwrap_or_else(|| "-".into());
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                p.location.display_with(&z),
                image(&p.image),
                p.ramification.to_string(),
                p.predicted.to_string(),
                exp_str(&p.exponent_difference),
                p.classification.to_string(),
            ]
        })
        .collect();
    doc.table("points", &["location", "image", "ramification", "predicted", "difference", "classification"], &rows);
    let json = json!({
        "command": "pullback",
        "operator": input.ode.display_with(&v),
        "map": r.display_with(&z),
        "pulled": pulled.display_with(&z),
        "points": points.iter().map(|p| json!({
            "location": p.location.display_with(&z),
            "image": p.image.as_ref().map(|i| i.display_with(&v)),
            "ramification": p.ramification,
            "source": p.source.to_string(),
            "predicted_difference": opt_json(&p.predicted_difference),
            "predicted": p.predicted.to_string(),
            "exponent_difference": opt_json(&p.exponent_difference),
            "classification": p.classification.to_string(),
        })).collect::<Vec<_>>(),
    });
    Ok(Report { text: doc.finish(), json })
}

fn cmd_sym2(input: &OdeInput) -> Result<Report, CliError> {
    let v = input.var.to_string();
    let s = sym2(&input.ode).map_err(lib)?;
    let mut doc = TextDoc::default();
    doc.kv("operator", input.ode.display_with(&v)).kv("symmetric square", s.display_with(&v));
    let json = json!({
        "command": "sym2",
        "operator": input.ode.display_with(&v),
        "symmetric_square": s.display_with(&v),
    });
    Ok(Report { text: doc.finish(), json })
}

fn cmd_sqrt(input: &OdeInput) -> Result<Report, CliError> {
    let v = input.var.to_string();
    let (verdict, root) = match k3_pf_root(&input.ode) {
        Ok(r) => {
            let back = sym2(&r).map_err(lib)?;
            if back != input.ode.pnf3().map_err(lib)? {
                return Err(CliError::Contract("square of the root differs from the normal form".into()));
            }
            ("SymmetricSquare", Some(r))
        }
        Err(K3Error::NotSymmetricSquare) => ("NotSymmetricSquare", None),
        Err(e) => return Err(lib(e)),
    };
    let mut doc = TextDoc::default();
    doc.kv("operator", input.ode.display_with(&v)).kv("verdict", verdict);
    if let Some(r) = &root {
        doc.kv("root", r.display_with(&v));
    }
    let json = json!({
        "command": "sqrt",
        "operator": input.ode.display_with(&v),
        "verdict": verdict,
        "root": root.as_ref().map(|r| r.display_with(&v)),
    });
    Ok(Report { text: doc.finish(), json })
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_uniformize(input: &OdeInput) -> Result<Report, CliError> {
    let v = input.var.to_string();
    let r = uniformization_check(&input.ode).map_err(lib)?;
    let mut doc = TextDoc::default();
    doc.kv("operator", input.ode.display_with(&v));
    let rows: Vec<Vec<String>> = r
        .points
        .iter()
        .map(|p| {
            vec![
                p.location.display_with(&v),
                exp_str(&p.exponent_difference),
                p.classification.to_string(),
                p.weight.map(|w| w.to_string()).unwrap_or_else(|| "-".into()),
                p.reason.clone().unwrap_or_default(),
            ]
        })
        .collect();
    doc.table("points", &["location", "difference", "classification", "weight", "reason"], &rows);
    doc.kv("exponent criterion", pass_fail(r.exponent_criterion))
        .kv("strict", pass_fail(r.strict))
        .kv("signature", r.signature.display_with(&v))
        .kv("verdict", pass_fail(r.passed));
    let json = json!({
        "command": "uniformize",
        "operator": input.ode.display_with(&v),
        "points": r.points.iter().map(|p| json!({
            "location": p.location.display_with(&v),
            "exponent_difference": opt_json(&p.exponent_difference),
            "classification": p.classification.to_string(),
            "weight": opt_json(&p.weight),
            "exponent_criterion": p.exponent_criterion,
            "strict": p.strict,
            "reason": p.reason,
        })).collect::<Vec<_>>(),
        "exponent_criterion": r.exponent_criterion,
        "strict": r.strict,
        "signature": r.signature.display_with(&v),
        "verdict": pass_fail(r.passed),
    });
    Ok(Report { text: doc.finish(), json })
}

fn parse_point(text: &str) -> Result<AlgebraicPoint, CliError> {
    if text.trim() == "inf" {
        return Ok(AlgebraicPoint::Infinity);
    }
    parse_constant(text)
        .map(AlgebraicPoint::rational)
        .map_err(|source| CliError::Flag { flag: "point", source })
}

fn cmd_mirror(input: &OdeInput, point: Option<&str>, terms: usize, scale: Option<&str>) -> Result<Report, CliError> {
    let v = input.var.to_string();
    let point = match point {
        Some(p) => parse_point(p)?,
        None => {
            let mum = find_mum_points(&input.ode);
            match mum.as_slice() {
                [p] => p.clone(),
                [] => return Err(CliError::Usage("the operator has no point of maximal unipotent monodromy".into())),
                _ => {
                    let list: Vec<String> = mum.iter().map(|p| p.display_with(&v)).collect();
                    return Err(CliError::Usage(format!(
                        "several points of maximal unipotent monodromy ({}); pass --point",
                        list.join(", ")
                    )));
                }
            }
        }
    };
    let scale = scale
        .map(|s| parse_constant(s).map_err(|source| CliError::Flag { flag: "scale", source }))
        .transpose()?;
    if scale.as_ref().is_some_and(|c| *c == pfuniform::exact::Rational::from_integer(0.into())) {
        return Err(CliError::Usage("--scale must be nonzero".into()));
    }
    let mut m = mirror_map(&input.ode, &point, terms).map_err(lib)?;
    if let Some(c) = &scale {
        m = m.rescaled(c);
    }
    let mut doc = TextDoc::default();
    doc.kv("operator", input.ode.display_with(&v))
        .kv("point", point.display_with(&v))
        .kv("coordinate", format!("z = {}", m.coordinate.display_with(&v)))
        .kv("terms", terms.to_string())
        .kv("series", format!("z = {}", m.series));
    let json = json!({
        "command": "mirror-map",
        "operator": input.ode.display_with(&v),
        "point": point.display_with(&v),
        "coordinate": m.coordinate.display_with(&v),
        "terms": terms,
        "scale": opt_json(&scale),
        "series": m.series.to_string(),
    });
    Ok(Report { text: doc.finish(), json })
}

fn model_fixture(source: &str) -> Result<(WeierstrassModel, char), CliError> {
    let name = source.strip_prefix(FIXTURE_PREFIX).ok_or_else(|| {
        CliError::Usage(format!("--model takes {FIXTURE_PREFIX}NAME, got {source:?}"))
    })?;
    let f = load_fixture(name).map_err(InputError::from)?;
    match f.payload {
        FixturePayload::Weierstrass(w) => Ok((w, 's')),
        _ => Err(CliError::Usage(format!("fixture {name} is not a Weierstrass model"))),
    }
}

fn model_flags(g2: &str, g3: &str) -> Result<(WeierstrassModel, char), CliError> {
    let (a, va) = flag("g2", g2)?;
    let (b, vb) = flag("g3", g3)?;
    let var = match (va, vb) {
        (Some(x), Some(y)) if x != y => {
            return Err(CliError::Usage(format!("--g2 uses {x} but --g3 uses {y}")));
        }
        (x, y) => x.or(y).unwrap_or('s'),
    };
    Ok((WeierstrassModel::new(a, b).map_err(lib)?, var))
}

fn cmd_elliptic(w: &WeierstrassModel, var: char) -> Result<Report, CliError> {
    let v = var.to_string();
    let r = check_elliptic_modularity(w).map_err(lib)?;
    let fibers = r.fibers.clone().unwrap_or_default();
    let euler: u32 = fibers.iter().map(|(p, f)| p.degree() as u32 * f.euler_number()).sum();
    let list: Vec<String> = fibers.iter().map(|(p, f)| format!("{f}@{}", p.display_with(&v))).collect();
    let bad: Vec<String> =
        r.bad_points.iter().map(|(p, c)| format!("{c}@{}", p.display_with(&v))).collect();
    let forbidden: Vec<String> =
        r.forbidden_fibers.iter().map(|(p, f)| format!("{f}@{}", p.display_with(&v))).collect();
    let none_if_empty = |l: &[String]| if l.is_empty() { "none".to_string() } else { l.join(", ") };
    let mut doc = TextDoc::default();
    doc.kv("g2", w.g2().display_with(&v))
        .kv("g3", w.g3().display_with(&v))
        .kv("discriminant", w.discriminant().display_with(&v))
        .kv("J", r.j.display_with(&v))
        .kv("fibers", format!("{{{}}}", list.join(", ")))
        .kv("euler sum", euler.to_string())
        .kv("order conditions", pass_fail(r.order_conditions))
        .kv("ramification defect", r.ramification_defect.to_string())
        .kv("bad points", none_if_empty(&bad))
        .kv("forbidden fibers", none_if_empty(&forbidden))
        .kv("verdict", r.verdict.to_string());
    let json = json!({
        "command": "elliptic",
        "g2": w.g2().display_with(&v),
        "g3": w.g3().display_with(&v),
        "discriminant": w.discriminant().display_with(&v),
        "j": r.j.display_with(&v),
        "points": fibers.iter().map(|(p, f)| json!({
            "location": p.display_with(&v),
            "fiber": f.to_string(),
            "euler_number": f.euler_number(),
        })).collect::<Vec<_>>(),
        "euler_sum": euler,
        "order_conditions": r.order_conditions,
        "ramification_defect": r.ramification_defect,
        "bad_points": r.bad_points.iter().map(|(p, c)| json!({
            "location": p.display_with(&v),
            "classification": c.to_string(),
        })).collect::<Vec<_>>(),
        "forbidden_fibers": forbidden,
        "verdict": r.verdict.to_string(),
    });
    Ok(Report { text: doc.finish(), json })
}

fn cmd_k3(hn: &str, orb: &pfuniform::k3::FrickeOrbifoldData, l3: Option<&OdeInput>) -> Result<Report, CliError> {
    let (h, var) = flag("hn", hn)?;
    let v = var.or(l3.map(|l| l.var)).unwrap_or('x').to_string();
    let r = check_k3_modularity(&h, orb, l3.map(|l| &l.ode)).map_err(lib)?;
    let mut doc = TextDoc::default();
    doc.kv("H", h.display_with(&v)).kv("n", orb.n.to_string());
    let rows: Vec<Vec<String>> = r
        .points
        .iter()
        .map(|p| {
            vec![
                p.location.display_with(&v),
                p.image.as_ref().map(|i| i.to_string()).unwrap_or_else(|| "-".into()),
                p.weight.map(|w| w.to_string()).unwrap_or_else(|| "-".into()),
                p.vanishing_order.to_string(),
                yes_no(p.admissible).into(),
            ]
        })
        .collect();
    doc.table("points", &["location", "value", "order", "vanishing", "admissible"], &rows);
    let analytic = match r.analytic {
        Some(b) => pass_fail(b),
        None => "not run",
    };
    doc.kv("combinatorial", pass_fail(r.combinatorial))
        .kv("analytic", analytic)
        .kv("verdict", r.verdict.to_string());
    let json = json!({
        "command": "k3-check",
        "hn": h.display_with(&v),
        "n": orb.n,
        "points": r.points.iter().map(|p| json!({
            "location": p.location.display_with(&v),
            "image": p.image.as_ref().map(|i| i.to_string()),
            "weight": opt_json(&p.weight),
            "vanishing_order": p.vanishing_order,
            "admissible": p.admissible,
            "reason": p.reason,
        })).collect::<Vec<_>>(),
        "combinatorial": r.combinatorial,
        "analytic": r.analytic,
        "verdict": r.verdict.to_string(),
    });
    Ok(Report { text: doc.finish(), json })
}
