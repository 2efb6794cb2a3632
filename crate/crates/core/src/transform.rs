//! Pullbacks along rational maps, symmetric squares and their roots, and
//! first-order systems.

use std::fmt;

use thiserror::Error;

use crate::exact::linalg::nullspace;
use crate::exact::{factor, AlgebraicPoint, Field, Modulus, Polynomial, Rational, RationalFunction};
use crate::ode::{analyze, analyze_point, Classification, ExponentValue, LinearODE, OdeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("pullback along a constant map")]
    ConstantMap,
    #[error("operation needs order {expected}, operator has order {found}")]
    WrongOrder { expected: usize, found: usize },
    #[error("component {component} generates a submodule of rank {rank} < {size}")]
    NotCyclic { component: usize, rank: usize, size: usize },
    #[error("component index {0} out of range")]
    BadComponent(usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("operator is not a symmetric square")]
    NotSymmetricSquare,
    #[error("source point {0} could not be classified")]
    UnclassifiedSourcePoint(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
}

fn expect_order(l: &LinearODE, k: usize) -> Result<(), TransformError> {
    if l.order() == k {
        Ok(())
    } else {
        Err(TransformError::WrongOrder { expected: k, found: l.order() })
    }
}

/// `f'' + (P_1(R) R' - R''/R') f' + P_2(R) R'^2 f`: the equation satisfied
/// by `f(R(z))`.
pub fn pullback2(l: &LinearODE, r: &RationalFunction) -> Result<LinearODE, TransformError> {
    expect_order(l, 2)?;
    let d1 = r.derivative();
    let d1_inv = d1.inv().ok_or(TransformError::ConstantMap)?;
    let d2 = d1.derivative();
    let p1 = &(&l.p(1).compose(r) * &d1) - &(&d2 * &d1_inv);
    let p2 = &l.p(2).compose(r) * &(&d1 * &d1);
    Ok(LinearODE::new(vec![p1, p2])?)
}

/// `f''' + 3P_1 f'' + (2P_1^2 + 4P_2 + P_1') f' + (4P_1 P_2 + 2P_2') f`,
/// annihilating the products of pairs of solutions of `L`.
pub fn sym2(l: &LinearODE) -> Result<LinearODE, TransformError> {
    expect_order(l, 2)?;
    let p1 = l.p(1);
    let p2 = l.p(2);
    let c = |n: i64| Rational::from_int(n);
    let a1 = p1.scale(&c(3));
    let a2 = &(&(&p1 * &p1).scale(&c(2)) + &p2.scale(&c(4))) + &p1.derivative();
    let a3 = &(&p1 * &p2).scale(&c(4)) + &p2.derivative().scale(&c(2));
    Ok(LinearODE::new(vec![a1, a2, a3])?)
}

/// The normal-form square root `f'' + (R_2/4) f` of an order-3 operator
/// whose normal form `g''' + R_2 g' + R_3 g` satisfies `R_3 = R_2'/2`.
pub fn sym2_root(l: &LinearODE) -> Result<LinearODE, TransformError> {
    expect_order(l, 3)?;
    let n = l.pnf3()?;
    let r2 = n.p(2);
    let r3 = n.p(3);
    if r3 != r2.derivative().scale(&Rational::new(1.into(), 2.into())) {
        return Err(TransformError::NotSymmetricSquare);
    }
    Ok(LinearODE::pnf2_from(r2.scale(&Rational::new(1.into(), 4.into()))))
}

/// Square matrix over `Q(x)` describing `Y' = A Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemMatrix {
    rows: Vec<Vec<RationalFunction>>,
}

impl SystemMatrix {
    pub fn new(rows: Vec<Vec<RationalFunction>>) -> Result<Self, TransformError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(TransformError::NotSquare);
        }
        Ok(SystemMatrix { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<RationalFunction>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.rows[i][j]
    }
}

impl fmt::Display for SystemMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Lee's system for the `n`-th symmetric power: with indices from 1,
/// `a_kk = (1-k) P_1`, `a_k,k+1 = n+1-k`, `a_k+1,k = -k P_2`.
pub fn sym_power_system(l: &LinearODE, n: usize) -> Result<SystemMatrix, TransformError> {
    expect_order(l, 2)?;
    let size = n + 1;
    let mut rows = vec![vec![RationalFunction::zero(); size]; size];
    for k in 1..=size {
        rows[k - 1][k - 1] = l.p(1).scale(&Rational::from_int(1 - k as i64));
        if k < size {
            rows[k - 1][k] = RationalFunction::from_int((n + 1 - k) as i64);
            rows[k][k - 1] = l.p(2).scale(&Rational::from_int(-(k as i64)));
        }
    }
    SystemMatrix::new(rows)
}

/// Monic operator of least order annihilating component `component`
/// (from 0) of every solution of `Y' = A Y`, by the cyclic vector method:
/// `y^(j) = v_j . Y` with `v_(j+1) = v_j' + v_j A`.
pub fn system_to_scalar(a: &SystemMatrix, component: usize) -> Result<LinearODE, TransformError> {
    let n = a.size();
    if component >= n {
        return Err(TransformError::BadComponent(component));
    }
    let mut v = vec![RationalFunction::zero(); n];
    v[component] = RationalFunction::one();
    let mut vs = vec![v];
    loop {
        let last = vs.last().unwrap();
        let next: Vec<RationalFunction> = (0..n)
            .map(|j| {
                (0..n).fold(last[j].derivative(), |acc, i| {
                    if last[i].is_zero() || a.rows[i][j].is_zero() {
                        acc
                    } else {
                        &acc + &(&last[i] * &a.rows[i][j])
                    }
                })
            })
            .collect();
        vs.push(next);
        let k = vs.len() - 1;
        // columns are the v_j; a kernel vector gives the relation
        let rows: Vec<Vec<RationalFunction>> =
            (0..n).map(|i| vs.iter().map(|v| v[i].clone()).collect()).collect();
        let ker = nullspace(&rows, k + 1);
        if let Some(rel) = ker.first() {
            let lead = rel[k].inv().expect("earlier vectors are independent");
            let coeffs = (1..=k).map(|i| &rel[k - i] * &lead).collect();
            return Ok(LinearODE::new(coeffs)?);
        }
    }
}

/// As [`system_to_scalar`], failing unless the operator has the full order.
pub fn system_to_scalar_cyclic(
    a: &SystemMatrix,
    component: usize,
) -> Result<LinearODE, TransformError> {
    let l = system_to_scalar(a, component)?;
    if l.order() < a.size() {
        return Err(TransformError::NotCyclic { component, rank: l.order(), size: a.size() });
    }
    Ok(l)
}

/// A point of the source of a rational map `R`, with its image and
/// ramification index.
#[derive(Clone, Debug, PartialEq)]
pub struct MapPoint {
    pub location: AlgebraicPoint,
    /// `None` when the image is not one of the marked target points.
    pub image: Option<AlgebraicPoint>,
    pub ramification: u64,
}

fn point_of(g: Polynomial) -> AlgebraicPoint {
    AlgebraicPoint::Finite(Modulus::new_unchecked(g))
}

/// Value of `R` at infinity, when finite.
fn value_at_infinity(r: &RationalFunction) -> Option<Rational> {
    let (dn, dd) = (r.num().degree()?, r.den().degree()?);
    match dn.cmp(&dd) {
        std::cmp::Ordering::Greater => None,
        std::cmp::Ordering::Less => Some(Rational::from_int(0)),
        std::cmp::Ordering::Equal => Some(r.num().leading()? / r.den().leading()?),
    }
}

/// The fibres of `R` over the marked points (infinity is always examined)
/// and every further ramification point.
pub fn map_points(
    r: &RationalFunction,
    marked: &[AlgebraicPoint],
) -> Result<Vec<MapPoint>, TransformError> {
    if r.is_constant() {
        return Err(TransformError::ConstantMap);
    }
    let mut out: Vec<MapPoint> = Vec::new();
    let push = |out: &mut Vec<MapPoint>, location: AlgebraicPoint, image: Option<AlgebraicPoint>, e: u64| {
        if !out.iter().any(|p| p.location == location) {
            out.push(MapPoint { location, image, ramification: e });
        }
    };
    let inf_marked = marked.contains(&AlgebraicPoint::Infinity);
    let inf_image = if inf_marked { Some(AlgebraicPoint::Infinity) } else { None };
    // fibre over infinity
    for (g, e) in factor(r.den()) {
        push(&mut out, point_of(g), inf_image.clone(), e as u64);
    }
    let at_inf = value_at_infinity(r);
    if at_inf.is_none() {
        let e = (r.num().degree().unwrap() - r.den().degree().unwrap()) as u64;
        push(&mut out, AlgebraicPoint::Infinity, inf_image.clone(), e);
    }
    for p in marked {
        let AlgebraicPoint::Finite(m) = p else { continue };
        let mr = RationalFunction::from_poly(m.poly().clone()).compose(r);
        for (g, e) in factor(mr.num()) {
            push(&mut out, point_of(g), Some(p.clone()), e as u64);
        }
        if let Some(c) = &at_inf {
            if m.poly().eval(c).is_zero() {
                let e = AlgebraicPoint::Infinity.valuation(&mr).unwrap_or(0);
                push(&mut out, AlgebraicPoint::Infinity, Some(p.clone()), e as u64);
            }
        }
    }
    // remaining critical points have unmarked images
    for (g, e) in factor(r.derivative().num()) {
        push(&mut out, point_of(g), None, e as u64 + 1);
    }
    if let Some(c) = at_inf {
        let shifted = r - &RationalFunction::constant(c);
        let e = AlgebraicPoint::Infinity.valuation(&shifted).unwrap_or(0);
        if e >= 2 {
            push(&mut out, AlgebraicPoint::Infinity, None, e as u64);
        }
    }
    out.retain(|p| p.image.is_some() || p.ramification >= 2);
    out.sort_by(|a, b| a.location.cmp(&b.location));
    Ok(out)
}

/// Local behaviour of the pullback predicted from the source exponent
/// difference `d`, the ramification `r` and whether the source point has
/// logarithms: the difference becomes `r d`.
pub fn predicted_class(d: &Rational, r: u64, logarithmic: bool) -> Classification {
    let d = d * Rational::from_int(r as i64);
    if d.is_integer() {
        if d == Rational::from_int(0) || logarithmic {
            Classification::Logarithmic
        } else if d == Rational::from_int(1) {
            Classification::Ordinary
        } else {
            Classification::Apparent
        }
    } else if *d.numer() == num::BigInt::from(1) {
        let b: u64 = d.denom().try_into().expect("small weight");
        Classification::Orbifold(b)
    } else {
        Classification::Generic
    }
}

/// One point of a pullback with the combinatorial prediction and the
/// classification computed on the pulled-back normal form.
#[derive(Clone, Debug)]
pub struct PullbackPointReport {
    pub location: AlgebraicPoint,
    pub image: Option<AlgebraicPoint>,
    pub ramification: u64,
    pub source: Classification,
    /// Source exponent difference times the ramification.
    pub predicted_difference: Option<Rational>,
    pub predicted: Classification,
    pub exponent_difference: Option<ExponentValue>,
    pub classification: Classification,
}

/// Classifies the points of `pnf2(pullback2(L, R))` lying over singular
/// points of `L` or at extra ramification of `R`.
pub fn classify_pullback(
    l: &LinearODE,
    r: &RationalFunction,
) -> Result<Vec<PullbackPointReport>, TransformError> {
    expect_order(l, 2)?;
    let source = analyze(l).map_err(|e| match e {
        OdeError::UnsupportedExponentField(p) => TransformError::UnclassifiedSourcePoint(p),
        e => e.into(),
    })?;
    let marked: Vec<AlgebraicPoint> = source.iter().map(|s| s.location.clone()).collect();
    let pulled = pullback2(l, r)?.pnf2()?;
    let mut out = Vec::new();
    for mp in map_points(r, &marked)? {
        let (src_class, d) = match &mp.image {
            None => (Classification::Ordinary, Some(Rational::from_int(1))),
            Some(img) => {
                let s = source.iter().find(|s| &s.location == img).unwrap();
                let d = s.exponent_difference.as_ref().and_then(ExponentValue::as_rational);
                (s.classification, d)
            }
        };
        let logarithmic = src_class == Classification::Logarithmic;
        let predicted_difference = d.as_ref().map(|d| d * Rational::from_int(mp.ramification as i64));
        let predicted = match &d {
            Some(d) => predicted_class(d, mp.ramification, logarithmic),
            None => Classification::Generic,
        };
        let local = analyze_point(&pulled, &mp.location)?;
        out.push(PullbackPointReport {
            location: mp.location,
            image: mp.image,
            ramification: mp.ramification,
            source: src_class,
            predicted_difference,
            predicted,
            exponent_difference: local.exponent_difference,
            classification: local.classification,
        });
    }
    Ok(out)
}
