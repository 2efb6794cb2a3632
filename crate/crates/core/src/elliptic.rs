//! Weierstrass elliptic surfaces `y^2 = 4x^3 - g2 x - g3` over the line:
//! discriminant, functional invariant, Picard-Fuchs operator, Kodaira
//! fibres and the modularity test for the mirror map.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exact::{factor, AlgebraicPoint, Field, Modulus, Polynomial, Rational, RationalFunction};
use crate::ode::{analyze, Classification, LinearODE, OdeError};
use crate::transform::{pullback2, system_to_scalar_cyclic, SystemMatrix, TransformError};
use crate::uniformdata::lambda_operator;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllipticError {
    #[error("discriminant vanishes identically")]
    IdenticallySingular,
    #[error("functional invariant is constant")]
    ConstantJ,
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// `y^2 = 4x^3 - g2(z) x - g3(z)` with nonzero discriminant.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassModel {
    g2: RationalFunction,
    g3: RationalFunction,
}

impl WeierstrassModel {
    pub fn new(g2: RationalFunction, g3: RationalFunction) -> Result<Self, EllipticError> {
        let w = WeierstrassModel { g2, g3 };
        if w.discriminant().is_zero() {
            return Err(EllipticError::IdenticallySingular);
        }
        Ok(w)
    }

    pub fn g2(&self) -> &RationalFunction {
        &self.g2
    }

    pub fn g3(&self) -> &RationalFunction {
        &self.g3
    }

    /// `(u^4 g2, u^6 g3)`.
    pub fn twist(&self, u: &RationalFunction) -> Result<Self, EllipticError> {
        let u2 = u * u;
        let u4 = &u2 * &u2;
        Self::new(&self.g2 * &u4, &(&self.g3 * &u4) * &u2)
    }

    /// `g2^3 - 27 g3^2`.
    pub fn discriminant(&self) -> RationalFunction {
        let g2c = &(&self.g2 * &self.g2) * &self.g2;
        &g2c - &(&self.g3 * &self.g3).scale(&Rational::from_int(27))
    }

    /// `3 g3 g2' - 2 g2 g3'`.
    pub fn delta_aux(&self) -> RationalFunction {
        &(&self.g3 * &self.g2.derivative()).scale(&Rational::from_int(3))
            - &(&self.g2 * &self.g3.derivative()).scale(&Rational::from_int(2))
    }

    /// `J = g2^3 / (g2^3 - 27 g3^2)`, equal to `0` where `g2` vanishes and
    /// `1` where `g3` vanishes.
    pub fn functional_invariant(&self) -> RationalFunction {
        let g2c = &(&self.g2 * &self.g2) * &self.g2;
        &g2c * &self.discriminant().inv().expect("nonzero discriminant")
    }

    /// The Picard-Fuchs system `d/dz (eta1, eta2) = A (eta1, eta2)` with
    /// `A = [[-D'/(12 D), 3 d/(2 D)], [-g2 d/(8 D), D'/(12 D)]]`, where `D`
    /// is the discriminant and `d` the auxiliary `3 g3 g2' - 2 g2 g3'`.
    pub fn griffiths_system(&self) -> SystemMatrix {
        let d = self.discriminant();
        let d_inv = d.inv().expect("nonzero discriminant");
        let log_d = &d.derivative() * &d_inv;
        let delta = &self.delta_aux() * &d_inv;
        let a11 = log_d.scale(&Rational::new((-1).into(), 12.into()));
        let a12 = delta.scale(&Rational::new(3.into(), 2.into()));
        let a21 = (&self.g2 * &delta).scale(&Rational::new((-1).into(), 8.into()));
        let a22 = log_d.scale(&Rational::new(1.into(), 12.into()));
        SystemMatrix::new(vec![vec![a11, a12], vec![a21, a22]]).expect("square")
    }

    /// Scalar Picard-Fuchs operator for `eta1`.
    pub fn griffiths_pf(&self) -> Result<LinearODE, EllipticError> {
        if self.functional_invariant().is_constant() {
            return Err(EllipticError::ConstantJ);
        }
        system_to_scalar_cyclic(&self.griffiths_system(), 0).map_err(|e| match e {
            TransformError::NotCyclic { .. } => EllipticError::ConstantJ,
            e => e.into(),
        })
    }

    /// Points where the fibre is singular or the given model is not
    /// minimal, infinity last.
    fn candidate_points(&self) -> Vec<AlgebraicPoint> {
        let d = self.discriminant();
        let mut pts = Vec::new();
        for p in [d.num(), d.den(), self.g2.den(), self.g3.den()] {
            for (g, _) in factor(p) {
                let pt = AlgebraicPoint::Finite(Modulus::new_unchecked(g));
                if !pts.contains(&pt) {
                    pts.push(pt);
                }
            }
        }
        pts.sort();
        pts.push(AlgebraicPoint::Infinity);
        pts
    }

    /// Kodaira type of the fibre at `at`: twist by a power of the local
    /// parameter to a minimal model, then read the type off the pole order
    /// of `J` and the discriminant valuation.
    pub fn kodaira_type(&self, at: &AlgebraicPoint) -> KodairaFiber {
        let v2 = at.valuation(&self.g2);
        let v3 = at.valuation(&self.g3);
        let vd = at.valuation(&self.discriminant()).expect("nonzero discriminant");
        let floor4 = v2.map(|v| v.div_euclid(4));
        let floor6 = v3.map(|v| v.div_euclid(6));
        let k = -match (floor4, floor6) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("nonzero discriminant"),
        };
        let vd = vd + 12 * k;
        let vj = at.valuation(&self.functional_invariant());
        match vj {
            Some(v) if v < 0 => {
                let n = (-v) as u32;
                if vd == -v {
                    KodairaFiber::I(n)
                } else {
                    KodairaFiber::IStar(n)
                }
            }
            _ => match vd {
                0 => KodairaFiber::I(0),
                2 => KodairaFiber::II,
                3 => KodairaFiber::III,
                4 => KodairaFiber::IV,
                6 => KodairaFiber::IStar(0),
                8 => KodairaFiber::IVStar,
                9 => KodairaFiber::IIIStar,
                10 => KodairaFiber::IIStar,
                _ => unreachable!("minimal discriminant valuation {vd}"),
            },
        }
    }

    /// All singular fibres, in canonical point order.
    pub fn fiber_census(&self) -> Vec<(AlgebraicPoint, KodairaFiber)> {
        self.candidate_points()
            .into_iter()
            .map(|p| {
                let t = self.kodaira_type(&p);
                (p, t)
            })
            .filter(|(_, t)| *t != KodairaFiber::I(0))
            .collect()
    }
}

/// Kodaira fibre types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaFiber {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaFiber {
    pub fn euler_number(&self) -> u32 {
        match self {
            KodairaFiber::I(n) => *n,
            KodairaFiber::II => 2,
            KodairaFiber::III => 3,
            KodairaFiber::IV => 4,
            KodairaFiber::IStar(n) => n + 6,
            KodairaFiber::IVStar => 8,
            KodairaFiber::IIIStar => 9,
            KodairaFiber::IIStar => 10,
        }
    }

    /// Types excluded from modular rational surfaces.
    pub fn is_forbidden(&self) -> bool {
        matches!(self, KodairaFiber::IV | KodairaFiber::IIStar)
    }
}

impl fmt::Display for KodairaFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaFiber::I(n) => write!(f, "I{n}"),
            KodairaFiber::II => write!(f, "II"),
            KodairaFiber::III => write!(f, "III"),
            KodairaFiber::IV => write!(f, "IV"),
            KodairaFiber::IStar(n) => write!(f, "I{n}*"),
            KodairaFiber::IVStar => write!(f, "IV*"),
            KodairaFiber::IIIStar => write!(f, "III*"),
            KodairaFiber::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("unknown fibre type {0:?}")]
pub struct ParseFiberError(pub String);

impl FromStr for KodairaFiber {
    type Err = ParseFiberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseFiberError(s.to_string());
        let (body, star) = match t.strip_suffix('*') {
            Some(b) => (b, true),
            None => (t, false),
        };
        Ok(match (body, star) {
            ("II", false) => KodairaFiber::II,
            ("III", false) => KodairaFiber::III,
            ("IV", false) => KodairaFiber::IV,
            ("IV", true) => KodairaFiber::IVStar,
            ("III", true) => KodairaFiber::IIIStar,
            ("II", true) => KodairaFiber::IIStar,
            _ => {
                let n: u32 = body.strip_prefix('I').ok_or_else(err)?.parse().map_err(|_| err())?;
                if star {
                    KodairaFiber::IStar(n)
                } else {
                    KodairaFiber::I(n)
                }
            }
        })
    }
}

/// Sum of Euler numbers.
pub fn euler_sum(fibers: &[KodairaFiber]) -> u32 {
    fibers.iter().map(KodairaFiber::euler_number).sum()
}

/// The 33 fibre configurations of rational elliptic surfaces with modular
/// mirror map.
pub fn modular_list_fixture() -> Vec<Vec<KodairaFiber>> {
    crate::uniformdata::modular_list()
}

/// `pnf2(pullback2(Lambda, J))`.
pub fn lambda_j(j: &RationalFunction) -> Result<LinearODE, EllipticError> {
    if j.is_constant() {
        return Err(EllipticError::Transform(TransformError::ConstantMap));
    }
    Ok(pullback2(&lambda_operator(), j)?.pnf2()?)
}

/// A point of the source of `J` over `0`, `1` or `infinity`, with its
/// ramification index.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreOrder {
    pub location: AlgebraicPoint,
    pub order: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModularityVerdict {
    Modular,
    NotModular,
}

impl fmt::Display for ModularityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModularityVerdict::Modular => write!(f, "MODULAR"),
            ModularityVerdict::NotModular => write!(f, "NOT MODULAR"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EllipticModularityReport {
    pub j: RationalFunction,
    pub degree: usize,
    pub zeros: Vec<FibreOrder>,
    pub ones: Vec<FibreOrder>,
    pub poles: Vec<FibreOrder>,
    /// Zero orders `1` or divisible by 3, one orders `1` or even.
    pub order_conditions: bool,
    /// `2 deg - 2` minus the ramification over `0, 1, infinity`; positive
    /// means ramification elsewhere.
    pub ramification_defect: i64,
    /// Apparent or generic points of `Lambda_J`.
    pub bad_points: Vec<(AlgebraicPoint, Classification)>,
    pub scan_clean: bool,
    pub fibers: Option<Vec<(AlgebraicPoint, KodairaFiber)>>,
    pub forbidden_fibers: Vec<(AlgebraicPoint, KodairaFiber)>,
    pub verdict: ModularityVerdict,
}

fn fibre(poly: &Polynomial) -> Vec<FibreOrder> {
    factor(poly)
        .into_iter()
        .map(|(g, e)| FibreOrder {
            location: AlgebraicPoint::Finite(Modulus::new_unchecked(g)),
            order: e as u64,
        })
        .collect()
}

fn weighted_excess(f: &[FibreOrder]) -> i64 {
    f.iter().map(|p| p.location.degree().max(1) as i64 * (p.order as i64 - 1)).sum()
}

/// Modularity test from the functional invariant alone.
pub fn check_j_modularity(j: &RationalFunction) -> Result<EllipticModularityReport, EllipticError> {
    if j.is_constant() {
        return Err(EllipticError::ConstantJ);
    }
    let (n, d) = (j.num(), j.den());
    let (dn, dd) = (n.degree().unwrap(), d.degree().unwrap());
    let mut zeros = fibre(n);
    let mut ones = fibre(&(n - d));
    let mut poles = fibre(d);
    let inf = |order: usize| FibreOrder { location: AlgebraicPoint::Infinity, order: order as u64 };
    if dn > dd {
        poles.push(inf(dn - dd));
    } else if dn < dd {
        zeros.push(inf(dd - dn));
    } else {
        let one_minus = j - &RationalFunction::one();
        if let Some(v) = AlgebraicPoint::Infinity.valuation(&one_minus).filter(|&v| v > 0) {
            ones.push(inf(v as usize));
        }
    }
    let degree = dn.max(dd);
    let order_conditions = zeros.iter().all(|p| p.order == 1 || p.order % 3 == 0)
        && ones.iter().all(|p| p.order == 1 || p.order % 2 == 0);
    let ramification_defect = 2 * degree as i64
        - 2
        - weighted_excess(&zeros)
        - weighted_excess(&ones)
        - weighted_excess(&poles);
    let bad_points: Vec<(AlgebraicPoint, Classification)> = analyze(&lambda_j(j)?)?
        .into_iter()
        .filter(|r| matches!(r.classification, Classification::Apparent | Classification::Generic))
        .map(|r| (r.location, r.classification))
        .collect();
    let scan_clean = bad_points.is_empty();
    let verdict = if order_conditions && scan_clean {
        ModularityVerdict::Modular
    } else {
        ModularityVerdict::NotModular
    };
    Ok(EllipticModularityReport {
        j: j.clone(),
        degree,
        zeros,
        ones,
        poles,
        order_conditions,
        ramification_defect,
        bad_points,
        scan_clean,
        fibers: None,
        forbidden_fibers: Vec::new(),
        verdict,
    })
}

/// Modularity test for a Weierstrass model, with its fibre census.
pub fn check_elliptic_modularity(
    w: &WeierstrassModel,
) -> Result<EllipticModularityReport, EllipticError> {
    let mut r = check_j_modularity(&w.functional_invariant())?;
    let census = w.fiber_census();
    r.forbidden_fibers = census.iter().filter(|(_, t)| t.is_forbidden()).cloned().collect();
    if !r.forbidden_fibers.is_empty() {
        r.verdict = ModularityVerdict::NotModular;
    }
    r.fibers = Some(census);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(n), Polynomial::from_ints(d))
    }

    fn family_e() -> WeierstrassModel {
        let g = rf(&[0, 27], &[-1, 1]);
        WeierstrassModel::new(g.clone(), g).unwrap()
    }

    fn ss() -> WeierstrassModel {
        WeierstrassModel::new(rf(&[0, 1], &[1]), rf(&[0, 1], &[1])).unwrap()
    }

    #[test]
    fn invariants() {
        let w = family_e();
        assert_eq!(w.discriminant(), rf(&[0, 0, 19683], &[-1, 3, -3, 1]));
        assert_eq!(w.functional_invariant(), RationalFunction::x());
        assert_eq!(ss().discriminant(), rf(&[0, 0, -27, 1], &[1]));
        assert_eq!(ss().functional_invariant(), rf(&[0, 1], &[-27, 1]));
        let w0 = WeierstrassModel::new(rf(&[0, 1], &[1]), RationalFunction::zero()).unwrap();
        assert_eq!(w0.functional_invariant(), RationalFunction::one());
        assert!(w0.delta_aux().is_zero());
        assert_eq!(w0.griffiths_pf(), Err(EllipticError::ConstantJ));
        assert_eq!(
            WeierstrassModel::new(rf(&[3], &[1]), rf(&[1], &[1])),
            Err(EllipticError::IdenticallySingular)
        );
    }

    #[test]
    fn griffiths_matches_lambda_j() {
        for w in [family_e(), ss()] {
            let lhs = w.griffiths_pf().unwrap().pnf2().unwrap();
            let rhs = lambda_j(&w.functional_invariant()).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert_eq!(family_e().griffiths_pf().unwrap().pnf2().unwrap(), lambda_operator());
    }

    #[test]
    fn fibres() {
        use KodairaFiber::*;
        let w = family_e();
        let census: Vec<_> = w.fiber_census().into_iter().map(|(p, t)| (p.to_string(), t)).collect();
        assert_eq!(
            census,
            vec![("0".to_string(), II), ("1".to_string(), IIIStar), ("inf".to_string(), I(1))]
        );
        assert_eq!(ss().kodaira_type(&AlgebraicPoint::from_int(27)), I(1));
        assert_eq!(ss().kodaira_type(&AlgebraicPoint::from_int(0)), II);
        let u = rf(&[0, 1], &[1]);
        let t = w.twist(&u).unwrap();
        assert_eq!(t.kodaira_type(&AlgebraicPoint::from_int(1)), IIIStar);
        // minimalization undoes a twist by a power of the local parameter
        assert_eq!(t.kodaira_type(&AlgebraicPoint::from_int(0)), II);
        assert_eq!(euler_sum(&[I(1), II, IIIStar]), 12);
        assert_eq!(euler_sum(&[]), 0);
        for s in ["I0", "I12", "I3*", "II", "III*", "IV*", "II*"] {
            assert_eq!(s.parse::<KodairaFiber>().unwrap().to_string(), s);
        }
        assert!("V".parse::<KodairaFiber>().is_err());
    }

    #[test]
    fn modularity() {
        let r = check_elliptic_modularity(&family_e()).unwrap();
        assert_eq!(r.verdict, ModularityVerdict::Modular);
        assert_eq!(r.ramification_defect, 0);
        let r = check_j_modularity(&rf(&[0, 0, 1], &[1])).unwrap();
        assert_eq!(r.verdict, ModularityVerdict::NotModular);
        assert!(!r.order_conditions);
        assert_eq!(check_j_modularity(&RationalFunction::constant(rat(1, 2))).unwrap_err(), EllipticError::ConstantJ);
    }
}
