//! One-parameter families of lattice-polarized K3 surfaces: square roots
//! of third-order Picard-Fuchs operators, the vanishing-order test for a
//! generalized functional invariant over a Fricke orbifold, and Hauptmodul
//! series checks.

use std::fmt;

use thiserror::Error;

use crate::exact::{AlgebraicPoint, Field, Rational, RationalFunction};
use crate::ode::{LinearODE, OdeError};
use crate::series::{QSeries, SeriesError};
use crate::transform::{map_points, sym2_root, TransformError};
use crate::uniformize::{uniformization_check, UniformizeError, Weight};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum K3Error {
    #[error("operator is not a symmetric square")]
    NotSymmetricSquare,
    #[error("generalized functional invariant is constant")]
    ConstantMap,
    #[error("signature assigns two roles to the value {0}")]
    SignatureValueCollision(String),
    #[error("elliptic points have order 2, 3, 4 or 6, got {0}")]
    BadEllipticOrder(u64),
    #[error("only {0} comparable coefficients, need at least 3")]
    TruncationTooShort(usize),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Transform(TransformError),
    #[error(transparent)]
    Uniformize(#[from] UniformizeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl From<TransformError> for K3Error {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::NotSymmetricSquare => K3Error::NotSymmetricSquare,
            TransformError::ConstantMap => K3Error::ConstantMap,
            e => K3Error::Transform(e),
        }
    }
}

/// Normal-form square root of the normal form of a third-order operator.
pub fn k3_pf_root(l: &LinearODE) -> Result<LinearODE, K3Error> {
    Ok(sym2_root(&l.pnf3()?)?)
}

/// Elliptic points and cusps of a genus-zero Fricke quotient, as values of
/// its Hauptmodul.
#[derive(Clone, Debug, PartialEq)]
pub struct FrickeOrbifoldData {
    pub n: u64,
    pub elliptic_points: Vec<(AlgebraicPoint, u64)>,
    pub cusp_values: Vec<AlgebraicPoint>,
}

impl FrickeOrbifoldData {
    pub fn new(
        n: u64,
        elliptic_points: Vec<(AlgebraicPoint, u64)>,
        cusp_values: Vec<AlgebraicPoint>,
    ) -> Result<Self, K3Error> {
        let mut seen: Vec<&AlgebraicPoint> = Vec::new();
        for (p, b) in &elliptic_points {
            if ![2, 3, 4, 6].contains(b) {
                return Err(K3Error::BadEllipticOrder(*b));
            }
            if seen.contains(&p) {
                return Err(K3Error::SignatureValueCollision(p.to_string()));
            }
            seen.push(p);
        }
        for p in &cusp_values {
            if seen.contains(&p) {
                return Err(K3Error::SignatureValueCollision(p.to_string()));
            }
            seen.push(p);
        }
        Ok(FrickeOrbifoldData { n, elliptic_points, cusp_values })
    }

    fn weight_at(&self, p: &AlgebraicPoint) -> Option<Weight> {
        if self.cusp_values.contains(p) {
            return Some(Weight::Cusp);
        }
        self.elliptic_points.iter().find(|(q, _)| q == p).map(|(_, b)| Weight::Finite(*b))
    }

    fn marked(&self) -> Vec<AlgebraicPoint> {
        self.elliptic_points
            .iter()
            .map(|(p, _)| p.clone())
            .chain(self.cusp_values.iter().cloned())
            .collect()
    }
}

/// A vanishing order `r` of `H_n - p` at an elliptic point of order `b` is
/// admissible when `b | r` or `r | b`.
pub fn admissible_vanishing_order(b: u64, r: u64) -> bool {
    r > 0 && (r % b == 0 || b % r == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K3Verdict {
    Modular,
    NotModular,
}

impl fmt::Display for K3Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K3Verdict::Modular => write!(f, "MODULAR"),
            K3Verdict::NotModular => write!(f, "NOT MODULAR"),
        }
    }
}

/// One point of the base over a marked value or at extra ramification.
#[derive(Clone, Debug, PartialEq)]
pub struct K3PointReport {
    pub location: AlgebraicPoint,
    pub image: Option<AlgebraicPoint>,
    pub weight: Option<Weight>,
    pub vanishing_order: u64,
    pub admissible: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug)]
pub struct K3ModularityReport {
    pub n: u64,
    pub points: Vec<K3PointReport>,
    pub combinatorial: bool,
    /// Verdict of the analytic route on the square root of the supplied
    /// operator.
    pub analytic: Option<bool>,
    pub verdict: K3Verdict,
}

/// Vanishing-order test for `H_n` over the given orbifold data, optionally
/// confirmed by the uniformization test on the square root of a supplied
/// third-order Picard-Fuchs operator.
pub fn check_k3_modularity(
    hn: &RationalFunction,
    orb: &FrickeOrbifoldData,
    l3: Option<&LinearODE>,
) -> Result<K3ModularityReport, K3Error> {
    if hn.is_constant() {
        return Err(K3Error::ConstantMap);
    }
    let mut points = Vec::new();
    for mp in map_points(hn, &orb.marked())? {
        let r = mp.ramification;
        let weight = mp.image.as_ref().and_then(|p| orb.weight_at(p));
        let (admissible, reason) = match weight {
            Some(Weight::Cusp) => (true, None),
            Some(Weight::Finite(b)) => {
                let ok = admissible_vanishing_order(b, r);
                (ok, (!ok).then(|| format!("vanishing order {r} at an elliptic point of order {b}")))
            }
            None if r >= 2 => (false, Some(format!("extra ramification of index {r}"))),
            None => (true, None),
        };
        points.push(K3PointReport {
            location: mp.location,
            image: mp.image,
            weight,
            vanishing_order: r,
            admissible,
            reason,
        });
    }
    let combinatorial = points.iter().all(|p| p.admissible);
    let analytic = match l3 {
        Some(l) => Some(uniformization_check(&k3_pf_root(l)?)?.passed),
        None => None,
    };
    let ok = combinatorial && analytic.unwrap_or(true);
    Ok(K3ModularityReport {
        n: orb.n,
        points,
        combinatorial,
        analytic,
        verdict: if ok { K3Verdict::Modular } else { K3Verdict::NotModular },
    })
}

/// Leading term `q^-1` with coefficient one and integral coefficients.
pub fn hauptmodul_normalization_check(h: &QSeries) -> bool {
    h.valuation() == Some(-1)
        && h.coeff(-1) == Rational::from_int(1)
        && h.coeffs().iter().all(|c| c.is_integer())
}

/// Whether `H_n(z(q))` agrees with the given Hauptmodul series through
/// their common precision.
pub fn mirror_vs_hauptmodul(
    zq: &QSeries,
    hn_q: &QSeries,
    hn_rat: &RationalFunction,
) -> Result<bool, K3Error> {
    let composed = QSeries::compose_rational(hn_rat, zq)?;
    let top = match (composed.precision(), hn_q.precision()) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            let end = |s: &QSeries| s.valuation().unwrap_or(0) + s.coeffs().len() as i64;
            end(&composed).max(end(hn_q))
        }
    };
    let bottom = composed.valuation().into_iter().chain(hn_q.valuation()).min().unwrap_or(0);
    let comparable = (top - bottom).max(0) as usize;
    if comparable < 3 {
        return Err(K3Error::TruncationTooShort(comparable));
    }
    Ok((bottom..top).all(|k| composed.coeff(k) == hn_q.coeff(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Polynomial;
    use crate::transform::sym2;
    use crate::uniformdata::lambda_operator;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(n), Polynomial::from_ints(d))
    }

    fn psl2z() -> FrickeOrbifoldData {
        FrickeOrbifoldData::new(
            1,
            vec![(AlgebraicPoint::from_int(0), 3), (AlgebraicPoint::from_int(1), 2)],
            vec![AlgebraicPoint::Infinity],
        )
        .unwrap()
    }

    #[test]
    fn roots() {
        let l = lambda_operator();
        assert_eq!(k3_pf_root(&sym2(&l).unwrap()).unwrap(), l);
        let bad = LinearODE::new(vec![RationalFunction::zero(), RationalFunction::zero(), RationalFunction::one()]).unwrap();
        assert_eq!(k3_pf_root(&bad), Err(K3Error::NotSymmetricSquare));
    }

    #[test]
    fn vanishing_order_rule() {
        assert!(admissible_vanishing_order(4, 2));
        assert!(!admissible_vanishing_order(2, 3));
        assert!(admissible_vanishing_order(6, 12));
    }

    #[test]
    fn modularity() {
        let r = check_k3_modularity(&RationalFunction::x(), &psl2z(), None).unwrap();
        assert_eq!(r.verdict, K3Verdict::Modular);
        let l3 = sym2(&lambda_operator()).unwrap();
        let r = check_k3_modularity(&RationalFunction::x(), &psl2z(), Some(&l3)).unwrap();
        assert_eq!(r.analytic, Some(true));
        // z^2 over the order-3 point
        let r = check_k3_modularity(&rf(&[0, 0, 1], &[1]), &psl2z(), None).unwrap();
        assert_eq!(r.verdict, K3Verdict::NotModular);
        assert!(matches!(
            check_k3_modularity(&RationalFunction::from_int(2), &psl2z(), None),
            Err(K3Error::ConstantMap)
        ));
        assert!(matches!(
            FrickeOrbifoldData::new(1, vec![(AlgebraicPoint::from_int(0), 3)], vec![AlgebraicPoint::from_int(0)]),
            Err(K3Error::SignatureValueCollision(_))
        ));
    }

    #[test]
    fn hauptmodul_series() {
        let j = QSeries::from_coeffs(
            -1,
            [1, 744, 196884, 21493760].iter().map(|&c| Rational::from_int(c)).collect(),
            Some(3),
        );
        assert!(hauptmodul_normalization_check(&j));
        let half = QSeries::from_coeffs(-1, vec![Rational::from_int(1), Rational::from_int(0), Rational::new(1.into(), 2.into())], Some(2));
        assert!(!hauptmodul_normalization_check(&half));
        let qq = QSeries::from_coeffs(1, vec![Rational::from_int(1), Rational::from_int(1)], None);
        assert!(!hauptmodul_normalization_check(&qq));
        let q = QSeries::var().truncate(6);
        let h = rf(&[1, 5], &[0, 1]);
        let target = QSeries::from_coeffs(-1, vec![Rational::from_int(1), Rational::from_int(5)], None);
        assert!(mirror_vs_hauptmodul(&q, &target, &h).unwrap());
        let off = QSeries::from_coeffs(-1, vec![Rational::from_int(1), Rational::from_int(1)], None);
        assert!(!mirror_vs_hauptmodul(&q, &off, &rf(&[1], &[0, 1])).unwrap());
        assert!(matches!(
            mirror_vs_hauptmodul(&QSeries::var().truncate(2), &off, &rf(&[1], &[0, 1])),
            Err(K3Error::TruncationTooShort(_))
        ));
    }
}
