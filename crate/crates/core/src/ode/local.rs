//! Singular points, indicial equations, exponents and the classification of
//! regular singular points.

use std::fmt;

use crate::exact::{
    factor, laurent_expand, rational_sqrt, AlgebraicPoint, Field, LocalElement, Poly, Polynomial,
    Rational,
};

use super::frobenius::{exponent_classes, solve_classes, ClassSolution};
use super::{LinearODE, OdeError};

/// A characteristic exponent: an element of the residue field (rational at
/// rational points), or `center + sign * sqrt(radicand)` when the indicial
/// polynomial does not split there.
#[derive(Clone, Debug, PartialEq)]
pub enum ExponentValue {
    Exact(LocalElement),
    Quadratic {
        center: LocalElement,
        radicand: LocalElement,
        /// `+1` or `-1`.
        sign: i8,
    },
}

impl ExponentValue {
    pub fn rational(r: Rational) -> Self {
        ExponentValue::Exact(LocalElement::rational(r))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            ExponentValue::Exact(e) => e.as_rational(),
            ExponentValue::Quadratic { .. } => None,
        }
    }

    pub fn as_exact(&self) -> Option<&LocalElement> {
        match self {
            ExponentValue::Exact(e) => Some(e),
            ExponentValue::Quadratic { .. } => None,
        }
    }
}

impl fmt::Display for ExponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentValue::Exact(e) => write!(f, "{e}"),
            ExponentValue::Quadratic { center, radicand, sign } => {
                let s = if *sign < 0 { "-" } else { "+" };
                if center.is_zero() {
                    let s = if *sign < 0 { "-" } else { "" };
                    write!(f, "{s}sqrt({radicand})")
                } else {
                    write!(f, "{center} {s} sqrt({radicand})")
                }
            }
        }
    }
}

/// Local type of a point of a Fuchsian operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Ordinary,
    Apparent,
    /// Equal exponents, or integer difference with a logarithm.
    Logarithmic,
    /// Exponent difference exactly `1/b`.
    Orbifold(u64),
    Generic,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Ordinary => write!(f, "ORDINARY"),
            Classification::Apparent => write!(f, "APPARENT"),
            Classification::Logarithmic => write!(f, "LOGARITHMIC"),
            Classification::Orbifold(b) => write!(f, "ORBIFOLD({b})"),
            Classification::Generic => write!(f, "GENERIC"),
        }
    }
}

/// Local data at one point.
#[derive(Clone, Debug)]
pub struct SingularPointReport {
    pub location: AlgebraicPoint,
    /// Indicial polynomial over the residue field.
    pub indicial: Poly<LocalElement>,
    pub exponents: Vec<ExponentValue>,
    /// Difference of the two exponents (order 2 only), nonnegative when rational.
    pub exponent_difference: Option<ExponentValue>,
    pub classification: Classification,
    /// Whether a Frobenius computation decided the classification.
    pub log_obstruction_checked: bool,
    /// All exponents equal with the full logarithmic ladder.
    pub maximal_unipotent: bool,
}

/// The operator in a local coordinate `t` vanishing at the point, and the
/// point in that coordinate.
///
/// Finite points are left alone. At infinity the coordinate is `t = 1/x`;
/// for operators in projective normal form the transformed operator is put
/// back in projective normal form, so the local exponents there are those
/// of the normal form (for `f'' + Q f` the coefficient becomes
/// `Q(1/t)/t^4`).
pub fn local_operator(
    l: &LinearODE,
    at: &AlgebraicPoint,
) -> Result<(LinearODE, AlgebraicPoint), OdeError> {
    match at {
        AlgebraicPoint::Finite(_) => Ok((l.clone(), at.clone())),
        AlgebraicPoint::Infinity => {
            let t = l.change_of_variable(&LinearODE::at_infinity_coordinate())?;
            let t = if l.is_pnf() && matches!(l.order(), 2 | 3) { t.pnf()? } else { t };
            Ok((t, AlgebraicPoint::from_int(0)))
        }
    }
}

/// `c[i][m]`: coefficient of `t^m` in `t^i P_i` at the point, `m < n`.
pub(crate) fn theta_coefficients(
    lop: &LinearODE,
    lpt: &AlgebraicPoint,
    n: usize,
) -> Result<Vec<Vec<LocalElement>>, OdeError> {
    let k = lop.order();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let p = lop.p(i);
        let e = laurent_expand(&p, lpt, n as i64 - 1 - i as i64);
        if let Some(v) = e.valuation {
            if v < -(i as i64) {
                return Err(OdeError::NotFuchsian(lpt.to_string()));
            }
        }
        out.push((0..n).map(|m| e.coeff(m as i64 - i as i64)).collect());
    }
    Ok(out)
}

fn falling(j: usize) -> Poly<LocalElement> {
    (0..j).fold(Poly::one(), |acc, i| &acc * &Poly::linear_root(LocalElement::from_int(i as i64)))
}

/// Indicial polynomial `sum_i p_i [r]_(k-i)` where `p_i` is the value of
/// `t^i P_i` at the point and `[r]_j` the falling factorial.
pub fn indicial(l: &LinearODE, at: &AlgebraicPoint) -> Result<Poly<LocalElement>, OdeError> {
    let (lop, lpt) = local_operator(l, at)?;
    let c = theta_coefficients(&lop, &lpt, 1)
        .map_err(|_| OdeError::NotFuchsian(at.to_string()))?;
    let k = lop.order();
    Ok((0..=k).fold(Poly::zero(), |acc, i| &acc + &falling(k - i).scale(&c[i][0])))
}

fn quadratic_roots(b: &LocalElement, c: &LocalElement) -> Vec<ExponentValue> {
    // x^2 + b x + c: center -b/2, radicand b^2/4 - c
    let half = LocalElement::from_rational(Rational::new(1.into(), 2.into()));
    let center = -(b.clone() * half.clone());
    let radicand = center.clone() * center.clone() - c.clone();
    if let Some(r) = radicand.as_rational() {
        if let Some(s) = rational_sqrt(&r) {
            let s = LocalElement::from_rational(s);
            let mut v = vec![center.clone() - s.clone(), center + s];
            sort_exponents(&mut v);
            return v.into_iter().map(ExponentValue::Exact).collect();
        }
    }
    vec![
        ExponentValue::Quadratic { center: center.clone(), radicand: radicand.clone(), sign: -1 },
        ExponentValue::Quadratic { center, radicand, sign: 1 },
    ]
}

fn sort_exponents(v: &mut [LocalElement]) {
    v.sort_by(|a, b| match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
}

/// Roots of a monic-normalized indicial polynomial.
fn roots(ind: &Poly<LocalElement>, at: &AlgebraicPoint) -> Result<Vec<ExponentValue>, OdeError> {
    let unsupported = || OdeError::UnsupportedExponentField(at.to_string());
    let ind = ind.monic();
    let rational: Option<Vec<Rational>> = ind.coeffs().iter().map(|c| c.as_rational()).collect();
    if let Some(rc) = rational {
        let p = Polynomial::new(rc);
        let mut exact = Vec::new();
        let mut quad = Vec::new();
        for (g, m) in factor(&p) {
            match g.degree() {
                Some(1) => {
                    for _ in 0..m {
                        exact.push(LocalElement::from_rational(-g.coeff(0)));
                    }
                }
                Some(2) => {
                    let b = LocalElement::from_rational(g.coeff(1));
                    let c = LocalElement::from_rational(g.coeff(0));
                    for _ in 0..m {
                        quad.extend(quadratic_roots(&b, &c));
                    }
                }
                _ => return Err(unsupported()),
            }
        }
        sort_exponents(&mut exact);
        let mut out: Vec<ExponentValue> = exact.into_iter().map(ExponentValue::Exact).collect();
        out.extend(quad);
        return Ok(out);
    }
    match ind.degree() {
        Some(1) => Ok(vec![ExponentValue::Exact(-ind.coeff(0))]),
        Some(2) => Ok(quadratic_roots(&ind.coeff(1), &ind.coeff(0))),
        Some(3) => {
            // the only root findable without a cubic resolvent is the mean
            // of the roots, which occurs when two roots are symmetric about it
            let third = LocalElement::from_rational(Rational::new(1.into(), 3.into()));
            let mean = -(ind.coeff(2) * third);
            if !ind.eval(&mean).is_zero() {
                return Err(unsupported());
            }
            let (q, _) = ind.div_rem(&Poly::linear_root(mean.clone()));
            let mut out = vec![ExponentValue::Exact(mean)];
            out.extend(quadratic_roots(&q.coeff(1), &q.coeff(0)));
            Ok(out)
        }
        _ => Err(unsupported()),
    }
}

/// Characteristic exponents at `at`, with multiplicity.
pub fn exponents(l: &LinearODE, at: &AlgebraicPoint) -> Result<Vec<ExponentValue>, OdeError> {
    let ind = indicial(l, at)?;
    roots(&ind, at)
}

/// Points where some coefficient has a pole (in the local coordinate),
/// sorted with infinity last.
pub fn singular_points(l: &LinearODE) -> Vec<AlgebraicPoint> {
    let mut pts = l.candidate_points();
    if let Ok((lop, lpt)) = local_operator(l, &AlgebraicPoint::Infinity) {
        if lop.coeffs().iter().any(|c| lpt.valuation(c).is_some_and(|v| v < 0)) {
            pts.push(AlgebraicPoint::Infinity);
        }
    }
    pts
}

/// Regularity verdict at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRegularity {
    pub point: AlgebraicPoint,
    /// Largest `-v(P_i) - i` over the coefficients; positive means irregular.
    pub excess: i64,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianReport {
    pub fuchsian: bool,
    pub points: Vec<PointRegularity>,
}

fn pole_excess(lop: &LinearODE, lpt: &AlgebraicPoint) -> i64 {
    lop.coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| lpt.valuation(c).map(|v| -v - (i as i64 + 1)))
        .max()
        .unwrap_or(i64::MIN)
}

/// Checks that every coefficient `P_i` has a pole of order at most `i` at
/// each singular point, infinity included.
pub fn fuchsian_check(l: &LinearODE) -> FuchsianReport {
    let mut points = Vec::new();
    for p in singular_points(l) {
        let excess = match local_operator(l, &p) {
            Ok((lop, lpt)) => pole_excess(&lop, &lpt),
            Err(_) => i64::MAX,
        };
        points.push(PointRegularity { point: p, excess, regular: excess <= 0 });
    }
    FuchsianReport { fuchsian: points.iter().all(|p| p.regular), points }
}

fn is_singular_local(lop: &LinearODE, lpt: &AlgebraicPoint) -> bool {
    lop.coeffs().iter().any(|c| lpt.valuation(c).is_some_and(|v| v < 0))
}

/// Whether the projective normal form of the local operator is regular at
/// the point.
fn pnf_regular(lop: &LinearODE, lpt: &AlgebraicPoint) -> bool {
    match lop.pnf() {
        Ok(n) => !is_singular_local(&n, lpt),
        Err(_) => false,
    }
}

fn difference(exps: &[ExponentValue]) -> Option<ExponentValue> {
    if exps.len() != 2 {
        return None;
    }
    match (&exps[0], &exps[1]) {
        (ExponentValue::Exact(a), ExponentValue::Exact(b)) => {
            let d = b.clone() - a.clone();
            let d = match d.as_rational() {
                Some(r) if r < Rational::from_int(0) => LocalElement::from_rational(-r),
                _ => d,
            };
            Some(ExponentValue::Exact(d))
        }
        (ExponentValue::Quadratic { radicand, .. }, _) => Some(ExponentValue::Quadratic {
            center: LocalElement::zero(),
            radicand: radicand.clone() * LocalElement::from_int(4),
            sign: 1,
        }),
        _ => None,
    }
}

/// Exponents form `e, e + 1/b, ..., e + (k-1)/b` for an integer `b >= 2`.
fn orbifold_progression(rs: &[Rational]) -> Option<u64> {
    let mut v = rs.to_vec();
    v.sort();
    let d = &v[1] - &v[0];
    if d <= Rational::from_int(0) || *d.numer() != num::BigInt::from(1) {
        return None;
    }
    if v.windows(2).any(|w| &w[1] - &w[0] != d) {
        return None;
    }
    let b: u64 = d.denom().try_into().ok()?;
    (b >= 2).then_some(b)
}

/// Classifies one point, running the Frobenius obstruction computation
/// whenever exponents differ by integers.
fn classify(
    l: &LinearODE,
    at: &AlgebraicPoint,
    exps: &[ExponentValue],
) -> Result<(Classification, bool, bool), OdeError> {
    let (lop, lpt) = local_operator(l, at)?;
    if !is_singular_local(&lop, &lpt) {
        return Ok((Classification::Ordinary, false, false));
    }
    let exact: Vec<LocalElement> = exps.iter().filter_map(|e| e.as_exact().cloned()).collect();
    let classes = exponent_classes(&exact);
    let resonant = classes.iter().any(|(_, o)| o.iter().map(|x| x.1).sum::<usize>() > 1);
    let solved: Vec<ClassSolution> = if resonant {
        solve_classes(&lop, &lpt, &exact, 2)?
    } else {
        Vec::new()
    };
    let has_logs = solved.iter().any(|c| c.log_free_dimension() < c.size());
    let k = l.order();
    let mum = exact.len() == k
        && classes.len() == 1
        && classes[0].1.len() == 1
        && solved.first().is_some_and(ClassSolution::full_log_ladder);

    let rational: Option<Vec<Rational>> = exps.iter().map(|e| e.as_rational()).collect();
    // all exponents in one integer-difference class
    let single_class = exact.len() == k && classes.len() == 1;
    let class = if single_class {
        if has_logs {
            Classification::Logarithmic
        } else {
            let offs = &classes[0].1;
            let consecutive = offs.len() == k && offs.iter().enumerate().all(|(i, o)| o.0 == i);
            if consecutive && pnf_regular(&lop, &lpt) {
                Classification::Ordinary
            } else {
                Classification::Apparent
            }
        }
    } else if has_logs {
        Classification::Logarithmic
    } else if let Some(rs) = rational.filter(|_| k >= 2) {
        match orbifold_progression(&rs) {
            Some(b) => Classification::Orbifold(b),
            None => Classification::Generic,
        }
    } else {
        Classification::Generic
    };
    Ok((class, resonant, mum))
}

/// Full local report at one point.
pub fn analyze_point(l: &LinearODE, at: &AlgebraicPoint) -> Result<SingularPointReport, OdeError> {
    let ind = indicial(l, at)?;
    let exps = roots(&ind, at)?;
    let (classification, checked, mum) = classify(l, at, &exps)?;
    Ok(SingularPointReport {
        location: at.clone(),
        indicial: ind,
        exponent_difference: if l.order() == 2 { difference(&exps) } else { None },
        exponents: exps,
        classification,
        log_obstruction_checked: checked,
        maximal_unipotent: mum,
    })
}

/// Reports for every singular point, in canonical order.
pub fn analyze(l: &LinearODE) -> Result<Vec<SingularPointReport>, OdeError> {
    singular_points(l).iter().map(|p| analyze_point(l, p)).collect()
}

/// Decides an integer-difference point by the Frobenius obstruction.
pub fn is_apparent(l: &LinearODE, at: &AlgebraicPoint) -> Result<Classification, OdeError> {
    let exps = exponents(l, at)?;
    let exact: Vec<LocalElement> = exps.iter().filter_map(|e| e.as_exact().cloned()).collect();
    let classes = exponent_classes(&exact);
    if exact.len() != exps.len() || classes.len() != 1 {
        return Err(OdeError::NotIntegerDifference(at.to_string()));
    }
    Ok(classify(l, at, &exps)?.0)
}

/// Maximal unipotent monodromy: equal exponents and logarithms up to the
/// power `k - 1`.
pub fn mum_check(l: &LinearODE, at: &AlgebraicPoint) -> Result<bool, OdeError> {
    let exps = exponents(l, at)?;
    Ok(classify(l, at, &exps)?.2)
}
