//! Mirror maps at points of maximal unipotent monodromy.

use thiserror::Error;

use crate::exact::{AlgebraicPoint, Field, LocalElement, Rational, RationalFunction};
use crate::ode::{frobenius_basis, mum_check, singular_points, LinearODE, OdeError};
use crate::series::{PowerSeries, QSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MirrorError {
    #[error("{0} is not a point of maximal unipotent monodromy")]
    NotMUM(String),
    #[error("mirror maps are computed at rational points and infinity, not at {0}")]
    UnsupportedLocation(String),
    #[error("mirror maps are computed for orders 2 and 3, got {0}")]
    UnsupportedOrder(usize),
    #[error("series has valuation {0:?}, expected 1")]
    BadValuation(Option<i64>),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Singular points with maximal unipotent monodromy.
pub fn find_mum_points(l: &LinearODE) -> Vec<AlgebraicPoint> {
    singular_points(l)
        .into_iter()
        .filter(|p| mum_check(l, p).unwrap_or(false))
        .collect()
}

/// A mirror map `z(q)` in the local coordinate `z` of the base.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorMap {
    pub point: AlgebraicPoint,
    /// `z` as a function of the base coordinate: `x - a`, or `1/x` at
    /// infinity.
    pub coordinate: RationalFunction,
    pub series: QSeries,
    /// `q(z) = z exp(g/f)`.
    pub q_of_z: QSeries,
}

fn rational_series(s: &PowerSeries<LocalElement>, prec: i64) -> QSeries {
    let c = (0..prec).map(|k| s.coeff(k).as_rational().expect("rational point")).collect();
    QSeries::truncated(c, prec)
}

/// Mirror map at `mum`: with the holomorphic solution `f` (`f(0) = 1`) and
/// the logarithmic one `f log z + g` (`g(0) = 0`) in the local coordinate
/// `z`, set `q = z exp(g/f)` and revert. The result carries `n_terms`
/// coefficients `q, ..., q^n_terms`.
pub fn mirror_map(l: &LinearODE, mum: &AlgebraicPoint, n_terms: usize) -> Result<MirrorMap, MirrorError> {
    if !matches!(l.order(), 2 | 3) {
        return Err(MirrorError::UnsupportedOrder(l.order()));
    }
    let coordinate = match mum {
        AlgebraicPoint::Infinity => RationalFunction::x().inv().unwrap(),
        AlgebraicPoint::Finite(_) => match mum.as_rational() {
            Some(a) => &RationalFunction::x() - &RationalFunction::constant(a),
            None => return Err(MirrorError::UnsupportedLocation(mum.to_string())),
        },
    };
    if !mum_check(l, mum)? {
        return Err(MirrorError::NotMUM(mum.to_string()));
    }
    let prec = n_terms as i64 + 1;
    let basis = frobenius_basis(l, mum, n_terms + 1)?;
    let hol = &basis.solutions[0];
    let log = &basis.solutions[1];
    let f = rational_series(&hol.log_series[0], prec);
    let a = rational_series(&log.log_series[1], prec);
    let b = rational_series(&log.log_series[0], prec);
    // log solution = c f log z + b with a = c f
    let f0 = f.coeff(0);
    let c = a.coeff(0) / f0.clone();
    let f = f.scale(&(Rational::from_int(1) / f0));
    let b = b.scale(&(Rational::from_int(1) / c));
    let g = b.sub(&f.scale(&b.coeff(0)));
    let q = g.div(&f)?.exp()?.shift(1);
    let series = q.revert()?.truncate(prec);
    Ok(MirrorMap { point: mum.clone(), coordinate, series, q_of_z: q })
}

impl MirrorMap {
    /// The mirror map for the rescaled coordinate `c z`: the normalized
    /// `q` scales by `c` as well, so `z(q)` becomes `c z(q/c)`.
    pub fn rescaled(&self, c: &Rational) -> MirrorMap {
        assert!(!c.is_zero(), "zero scale");
        let scale = |s: &QSeries| {
            let v = s.valuation().unwrap_or(0);
            let coeffs = s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, a)| a * pow(c, 1 - (v + i as i64)))
                .collect();
            QSeries::from_coeffs(v, coeffs, s.precision())
        };
        MirrorMap {
            point: self.point.clone(),
            coordinate: self.coordinate.scale(c),
            series: scale(&self.series),
            q_of_z: scale(&self.q_of_z),
        }
    }
}

fn pow(c: &Rational, e: i64) -> Rational {
    let base = if e < 0 { c.inv().unwrap() } else { c.clone() };
    (0..e.unsigned_abs()).fold(Rational::from_int(1), |acc, _| acc * &base)
}

/// `1/z(q) + c` for a series with valuation one.
pub fn reciprocal_plus_constant(zq: &QSeries, c: &Rational) -> Result<QSeries, MirrorError> {
    if zq.valuation() != Some(1) {
        return Err(MirrorError::BadValuation(zq.valuation()));
    }
    Ok(zq.inv()?.add(&QSeries::monomial(c.clone(), 0)))
}
