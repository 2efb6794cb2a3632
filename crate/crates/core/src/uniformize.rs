//! Orbifold signatures and the uniformization test for order-2 operators
//! in projective normal form.

use std::fmt;

use num::Integer;
use thiserror::Error;

use crate::exact::{AlgebraicPoint, Field, Rational, RationalFunction};
use crate::ode::{analyze, fuchsian_check, Classification, ExponentValue, LinearODE, OdeError};
use crate::transform::{map_points, TransformError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UniformizeError {
    #[error("operator is not an order-2 operator in projective normal form")]
    NotPNF,
    #[error("operator has an irregular singular point at {0}")]
    NotFuchsian(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Orbifold weight: an integer `b >= 2`, or a cusp.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Finite(u64),
    Cusp,
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(b) => write!(f, "{b}"),
            Weight::Cusp => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignatureEntry {
    pub location: AlgebraicPoint,
    pub weight: Weight,
}

/// Marked points with their weights, in canonical point order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct OrbifoldSignature {
    entries: Vec<SignatureEntry>,
}

impl OrbifoldSignature {
    /// Fails on weights below 2 or repeated points.
    pub fn new(entries: Vec<(AlgebraicPoint, Weight)>) -> Option<Self> {
        let mut v: Vec<SignatureEntry> = Vec::new();
        for (location, weight) in entries {
            if matches!(weight, Weight::Finite(b) if b < 2) || v.iter().any(|e| e.location == location) {
                return None;
            }
            v.push(SignatureEntry { location, weight });
        }
        v.sort_by(|a, b| a.location.cmp(&b.location));
        Some(OrbifoldSignature { entries: v })
    }

    pub fn entries(&self) -> &[SignatureEntry] {
        &self.entries
    }

    pub fn weight_at(&self, p: &AlgebraicPoint) -> Option<Weight> {
        self.entries.iter().find(|e| &e.location == p).map(|e| e.weight)
    }

    pub fn locations(&self) -> Vec<AlgebraicPoint> {
        self.entries.iter().map(|e| e.location.clone()).collect()
    }

    pub fn display_with(&self, var: &str) -> String {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| format!("({}, {})", e.location.display_with(var), e.weight))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

/// Verdict at one singular point.
#[derive(Clone, Debug)]
pub struct PointVerdict {
    pub location: AlgebraicPoint,
    pub classification: Classification,
    pub exponent_difference: Option<ExponentValue>,
    /// Weight read off the exponent difference when it is `0` or `1/b`.
    pub weight: Option<Weight>,
    /// Exponent difference is `0` or `1/b` (or the point is ordinary).
    pub exponent_criterion: bool,
    /// Additionally no apparent or generic behaviour.
    pub strict: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug)]
pub struct UniformizationReport {
    pub points: Vec<PointVerdict>,
    pub exponent_criterion: bool,
    pub strict: bool,
    /// Equal to `strict`.
    pub passed: bool,
    pub signature: OrbifoldSignature,
}

fn weight_from_difference(d: &Rational) -> Option<Weight> {
    if *d == Rational::from_int(0) {
        Some(Weight::Cusp)
    } else if *d.numer() == num::BigInt::from(1) && *d.denom() > num::BigInt::from(1) {
        d.denom().try_into().ok().map(Weight::Finite)
    } else {
        None
    }
}

/// Checks that every singular point has exponent difference `0` (a cusp)
/// or `1/b` with `b >= 2`; points that turn out ordinary are skipped.
pub fn uniformization_check(l: &LinearODE) -> Result<UniformizationReport, UniformizeError> {
    if l.order() != 2 || !l.is_pnf() {
        return Err(UniformizeError::NotPNF);
    }
    let fr = fuchsian_check(l);
    if let Some(p) = fr.points.iter().find(|p| !p.regular) {
        return Err(UniformizeError::NotFuchsian(p.point.to_string()));
    }
    let mut points = Vec::new();
    let mut sig = Vec::new();
    for rep in analyze(l)? {
        let class = rep.classification;
        let d = rep.exponent_difference.as_ref().and_then(ExponentValue::as_rational);
        let weight = d.as_ref().and_then(weight_from_difference);
        let (criterion, reason) = match (class, weight) {
            (Classification::Ordinary, _) => (true, None),
            (_, Some(_)) => (true, None),
            _ => (
                false,
                Some(match &rep.exponent_difference {
                    Some(d) => format!("{class} point with exponent difference {d}"),
                    None => format!("{class} point"),
                }),
            ),
        };
        let strict = criterion
            && !matches!(class, Classification::Apparent | Classification::Generic);
        if let (true, Some(w)) = (strict, weight) {
            if class != Classification::Ordinary {
                sig.push((rep.location.clone(), w));
            }
        }
        points.push(PointVerdict {
            location: rep.location,
            classification: class,
            exponent_difference: rep.exponent_difference,
            weight,
            exponent_criterion: criterion,
            strict,
            reason,
        });
    }
    let exponent_criterion = points.iter().all(|p| p.exponent_criterion);
    let strict = points.iter().all(|p| p.strict);
    Ok(UniformizationReport {
        points,
        exponent_criterion,
        strict,
        passed: strict,
        signature: OrbifoldSignature::new(sig).expect("distinct points"),
    })
}

/// Why a preimage point spoils uniformization of a pullback.
#[derive(Clone, Debug, PartialEq)]
pub enum PullbackFailure {
    /// Extra ramification over an unmarked point, or `b | r` with `r > b`.
    Apparent { ramification: u64 },
    /// Weight `b` with ramification `r` where neither divides the other:
    /// exponent difference `r/b`.
    Generic { weight: u64, ramification: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictedPoint {
    pub location: AlgebraicPoint,
    pub image: Option<AlgebraicPoint>,
    pub ramification: u64,
    /// `None` for points that become ordinary.
    pub weight: Option<Weight>,
    pub failure: Option<PullbackFailure>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PullbackPrediction {
    pub points: Vec<PredictedPoint>,
    pub passes: bool,
    /// Signature of the pullback when it passes.
    pub signature: OrbifoldSignature,
}

/// Predicts the signature of the pullback of an orbifold along `R` from
/// the ramification of `R` alone: cusps stay cusps; weight `b` with
/// ramification `r` becomes `b/r` when `r | b` (dropping out when `r = b`),
/// is apparent when `b | r` with `r > b`, and fails otherwise; unmarked
/// ramification points are apparent.
pub fn signature_of_pullback(
    source: &OrbifoldSignature,
    r: &RationalFunction,
) -> Result<PullbackPrediction, UniformizeError> {
    let mut points = Vec::new();
    for mp in map_points(r, &source.locations())? {
        let e = mp.ramification;
        let (weight, failure) = match mp.image.as_ref().and_then(|p| source.weight_at(p)) {
            None => (None, (e >= 2).then_some(PullbackFailure::Apparent { ramification: e })),
            Some(Weight::Cusp) => (Some(Weight::Cusp), None),
            Some(Weight::Finite(b)) => {
                if e == b {
                    (None, None)
                } else if b % e == 0 {
                    (Some(Weight::Finite(b / e)), None)
                } else if e % b == 0 {
                    (None, Some(PullbackFailure::Apparent { ramification: e }))
                } else {
                    let w = b / b.gcd(&e);
                    (Some(Weight::Finite(w)), Some(PullbackFailure::Generic { weight: b, ramification: e }))
                }
            }
        };
        points.push(PredictedPoint {
            location: mp.location,
            image: mp.image,
            ramification: e,
            weight,
            failure,
        });
    }
    let passes = points.iter().all(|p| p.failure.is_none());
    let sig = points
        .iter()
        .filter(|p| p.failure.is_none())
        .filter_map(|p| p.weight.map(|w| (p.location.clone(), w)))
        .collect();
    Ok(PullbackPrediction {
        points,
        passes,
        signature: OrbifoldSignature::new(sig).expect("distinct points"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Polynomial;
    use crate::transform::pullback2;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(n), Polynomial::from_ints(d))
    }

    fn lambda() -> LinearODE {
        LinearODE::pnf2_from(rf(&[32, -41, 36], &[0, 0, 144, -288, 144]))
    }

    fn psl2z() -> OrbifoldSignature {
        OrbifoldSignature::new(vec![
            (AlgebraicPoint::from_int(0), Weight::Finite(3)),
            (AlgebraicPoint::from_int(1), Weight::Finite(2)),
            (AlgebraicPoint::Infinity, Weight::Cusp),
        ])
        .unwrap()
    }

    #[test]
    fn lambda_uniformizes() {
        let r = uniformization_check(&lambda()).unwrap();
        assert!(r.passed && r.exponent_criterion);
        assert_eq!(r.signature, psl2z());
        assert_eq!(r.signature.to_string(), "{(0, 3), (1, 2), (inf, inf)}");
    }

    #[test]
    fn failures() {
        let a = LinearODE::pnf2_from(rf(&[-2], &[0, 0, 1]));
        let r = uniformization_check(&a).unwrap();
        assert!(!r.passed);
        assert_eq!(r.points[0].classification, Classification::Apparent);
        let p = pullback2(&lambda(), &rf(&[0, 0, 1], &[1])).unwrap().pnf2().unwrap();
        let r = uniformization_check(&p).unwrap();
        assert!(!r.passed);
        let zero = r.points.iter().find(|p| p.location == AlgebraicPoint::from_int(0)).unwrap();
        assert_eq!(zero.classification, Classification::Generic);
        let np = LinearODE::new(vec![rf(&[1], &[0, 1]), RationalFunction::zero()]).unwrap();
        assert!(matches!(uniformization_check(&np), Err(UniformizeError::NotPNF)));
        let irr = LinearODE::pnf2_from(rf(&[1], &[0, 0, 0, 1]));
        assert!(matches!(uniformization_check(&irr), Err(UniformizeError::NotFuchsian(_))));
    }

    #[test]
    fn predicted_signatures() {
        let s = psl2z();
        let p = signature_of_pullback(&s, &RationalFunction::x()).unwrap();
        assert!(p.passes);
        assert_eq!(p.signature, s);
        // z^3: the weight-3 point drops out, infinity stays a cusp, the
        // weight-2 fibre has three simple points
        let p = signature_of_pullback(&s, &rf(&[0, 0, 0, 1], &[1])).unwrap();
        assert!(p.passes);
        assert_eq!(p.signature.weight_at(&AlgebraicPoint::from_int(0)), None);
        assert_eq!(p.signature.weight_at(&AlgebraicPoint::Infinity), Some(Weight::Cusp));
        let analytic = uniformization_check(
            &pullback2(&lambda(), &rf(&[0, 0, 0, 1], &[1])).unwrap().pnf2().unwrap(),
        )
        .unwrap();
        assert!(analytic.passed);
        assert_eq!(analytic.signature, p.signature);
        // z^3 - 3z has simple critical points at 1 and -1
        let p = signature_of_pullback(&s, &rf(&[0, -3, 0, 1], &[1])).unwrap();
        assert!(!p.passes);
        assert!(p.points.iter().any(|q| q.failure == Some(PullbackFailure::Apparent { ramification: 2 })));
    }
}
