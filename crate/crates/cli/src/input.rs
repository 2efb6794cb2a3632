//! Line-oriented input files and `fixture:NAME` references.
//!
//! ODE file:
//!
//! ```text
//! var: s
//! order: 2
//! P1: 1/s
//! P2: (31/144*s - 1/36)/(s^2*(s-1)^2)
//! ```
//!
//! Signature file:
//!
//! ```text
//! n: 1
//! elliptic: 0 3
//! elliptic: 1 2
//! cusp: inf
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::path::Path;

use pfuniform::exact::{AlgebraicPoint, RationalFunction};
use pfuniform::k3::FrickeOrbifoldData;
use pfuniform::ode::LinearODE;
use pfuniform::uniformdata::{load_fixture, FixturePayload, UnknownFixture};
use thiserror::Error;

use crate::expr::{parse_constant, parse_ratfunc_in, ExprError};

pub const FIXTURE_PREFIX: &str = "fixture:";

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: expected `key: value`")]
    NotKeyValue { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: {message}")]
    BadValue { line: usize, message: String },
    #[error("line {line}, column {column}: {source}")]
    Expression { line: usize, column: usize, source: ExprError },
    #[error("missing `{0}` line")]
    Missing(String),
    #[error(transparent)]
    UnknownFixture(#[from] UnknownFixture),
    #[error("fixture {name} holds {found}, not {wanted}")]
    FixtureKind { name: String, found: &'static str, wanted: &'static str },
    #[error("{0}")]
    Invalid(String),
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    value: &'a str,
    /// Column of the first character of `value`.
    column: usize,
}

fn lines(text: &str) -> Result<Vec<Line<'_>>, InputError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let t = raw.trim_start();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (key, rest) = t.split_once(':').ok_or(InputError::NotKeyValue { line: number })?;
        let value = rest.trim_start();
        let column = raw.chars().count() - value.chars().count();
        out.push(Line { number, key: key.trim(), value: value.trim_end(), column });
    }
    Ok(out)
}

fn read(path: &str) -> Result<String, InputError> {
    std::fs::read_to_string(Path::new(path)).map_err(|source| InputError::Io { path: path.to_string(), source })
}

fn payload_kind(p: &FixturePayload) -> &'static str {
    match p {
        FixturePayload::Operator(_) => "an operator",
        FixturePayload::Weierstrass(_) => "a Weierstrass model",
        FixturePayload::FiberConfigurations(_) => "fibre configurations",
        FixturePayload::Series(_) => "a series",
        FixturePayload::Signature(_) => "a signature",
    }
}

/// Variable used to print a bundled operator.
fn fixture_var(name: &str) -> char {
    if name.starts_with("family-E") {
        's'
    } else {
        'x'
    }
}

/// An operator and the name of its variable.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeInput {
    pub ode: LinearODE,
    pub var: char,
}

/// Reads `fixture:NAME` or a file path.
pub fn load_ode(source: &str) -> Result<OdeInput, InputError> {
    if let Some(name) = source.strip_prefix(FIXTURE_PREFIX) {
        let f = load_fixture(name)?;
        return match f.payload {
            FixturePayload::Operator(ode) => Ok(OdeInput { ode, var: fixture_var(name) }),
            p => Err(InputError::FixtureKind { name: name.into(), found: payload_kind(&p), wanted: "an operator" }),
        };
    }
    parse_ode(&read(source)?)
}

fn single_letter(line: &Line) -> Result<char, InputError> {
    let mut c = line.value.chars();
    match (c.next(), c.next()) {
        (Some(v), None) if v.is_ascii_alphabetic() => Ok(v),
        _ => Err(InputError::BadValue { line: line.number, message: "expected a single letter".into() }),
    }
}

pub fn parse_ode(text: &str) -> Result<OdeInput, InputError> {
    let ls = lines(text)?;
    let mut var: Option<(usize, char)> = None;
    let mut order: Option<(usize, usize)> = None;
    let mut coeffs: Vec<(usize, &Line)> = Vec::new();
    for l in &ls {
        let dup = || InputError::DuplicateKey { line: l.number, key: l.key.to_string() };
        match l.key {
            "var" => {
                if var.is_some() {
                    return Err(dup());
                }
                var = Some((l.number, single_letter(l)?));
            }
            "order" => {
                if order.is_some() {
                    return Err(dup());
                }
                let k = l.value.parse::<usize>().ok().filter(|k| *k >= 1).ok_or(InputError::BadValue {
                    line: l.number,
                    message: "order must be a positive integer".into(),
                })?;
                order = Some((l.number, k));
            }
            key => {
                let i = key
                    .strip_prefix('P')
                    .and_then(|i| i.parse::<usize>().ok())
                    .filter(|i| *i >= 1)
                    .ok_or_else(|| InputError::UnknownKey { line: l.number, key: key.to_string() })?;
                if coeffs.iter().any(|c| c.0 == i) {
                    return Err(dup());
                }
                coeffs.push((i, l));
            }
        }
    }
    let var = var.map(|v| v.1).unwrap_or('x');
    let (order_line, k) = order.ok_or_else(|| InputError::Missing("order".into()))?;
    let mut ps = vec![RationalFunction::zero(); k];
    for (i, l) in coeffs {
        if i > k {
            return Err(InputError::BadValue {
                line: l.number,
                message: format!("P{i} exceeds the order {k} given on line {order_line}"),
            });
        }
        ps[i - 1] = parse_ratfunc_in(l.value, var).map_err(|e| located(l, e))?;
    }
    let ode = LinearODE::new(ps).map_err(|e| InputError::Invalid(e.to_string()))?;
    Ok(OdeInput { ode, var })
}

fn located(l: &Line, source: ExprError) -> InputError {
    let offset = match &source {
        ExprError::Syntax(p) => p.position,
        ExprError::DivisionByZero(p) | ExprError::ExponentTooLarge(p) => *p,
        ExprError::UnexpectedVariable { position, .. } => *position,
        _ => 0,
    };
    InputError::Expression { line: l.number, column: l.column + offset + 1, source }
}

/// Reads `fixture:NAME` or a signature file.
pub fn load_signature(source: &str) -> Result<FrickeOrbifoldData, InputError> {
    if let Some(name) = source.strip_prefix(FIXTURE_PREFIX) {
        let f = load_fixture(name)?;
        return match f.payload {
            FixturePayload::Signature(s) => Ok(s),
            p => Err(InputError::FixtureKind { name: name.into(), found: payload_kind(&p), wanted: "a signature" }),
        };
    }
    parse_signature(&read(source)?)
}

fn point(l: &Line, text: &str) -> Result<AlgebraicPoint, InputError> {
    if text == "inf" {
        return Ok(AlgebraicPoint::Infinity);
    }
    parse_constant(text).map(AlgebraicPoint::rational).map_err(|e| located(l, e))
}

pub fn parse_signature(text: &str) -> Result<FrickeOrbifoldData, InputError> {
    let mut n = None;
    let mut elliptic = Vec::new();
    let mut cusps = Vec::new();
    for l in lines(text)? {
        match l.key {
            "n" => {
                if n.is_some() {
                    return Err(InputError::DuplicateKey { line: l.number, key: "n".into() });
                }
                n = Some(l.value.parse::<u64>().map_err(|_| InputError::BadValue {
                    line: l.number,
                    message: "n must be a nonnegative integer".into(),
                })?);
            }
            "elliptic" => {
                let (value, order) = l.value.rsplit_once(char::is_whitespace).ok_or(InputError::BadValue {
                    line: l.number,
                    message: "expected `elliptic: <value> <order>`".into(),
                })?;
                let b = order.parse::<u64>().map_err(|_| InputError::BadValue {
                    line: l.number,
                    message: format!("bad elliptic order {order:?}"),
                })?;
                let p = point(&l, value.trim_end())?;
                if p.is_infinity() {
                    return Err(InputError::BadValue {
                        line: l.number,
                        message: "elliptic points are finite values".into(),
                    });
                }
                elliptic.push((p, b));
            }
            "cusp" => cusps.push(point(&l, l.value)?),
            key => return Err(InputError::UnknownKey { line: l.number, key: key.into() }),
        }
    }
    let n = n.ok_or_else(|| InputError::Missing("n".into()))?;
    FrickeOrbifoldData::new(n, elliptic, cusps).map_err(|e| InputError::Invalid(e.to_string()))
}

/// Formats an operator in the ODE file format.
pub fn format_ode(ode: &LinearODE, var: char) -> String {
    let v = var.to_string();
    let mut out = format!("var: {var}\norder: {}\n", ode.order());
    for i in 1..=ode.order() {
        out.push_str(&format!("P{i}: {}\n", ode.p(i).display_with(&v)));
    }
    out
}
